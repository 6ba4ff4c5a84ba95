//! Slow, obviously-correct reference implementations and corpus generators
//! shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use topofield::persistence::{PersistenceDiagram, PersistencePair};
use topofield::ScalarField;

/// Rank of every pixel under (value, index) order, computed from scratch.
pub fn naive_ranks(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));
    let mut rank = vec![0; values.len()];
    for (r, &i) in idx.iter().enumerate() {
        rank[i] = r;
    }
    rank
}

struct Cell {
    dim: usize,
    vertices: Vec<usize>,
    faces: Vec<usize>,
}

/// Dense boundary-matrix reduction over the full V-construction complex,
/// without clearing or any other shortcut. Returns (H0, H1).
pub fn naive_persistence(field: &ScalarField) -> (PersistenceDiagram, PersistenceDiagram) {
    let (h, w) = field.dims();
    let values = field.values();
    let rank = naive_ranks(values);

    let mut cells: Vec<Cell> = Vec::new();
    for v in 0..h * w {
        cells.push(Cell {
            dim: 0,
            vertices: vec![v],
            faces: vec![],
        });
    }
    let mut edge_id = std::collections::HashMap::new();
    for r in 0..h {
        for c in 0..w {
            let v = r * w + c;
            let mut nbrs = Vec::new();
            if c + 1 < w {
                nbrs.push(v + 1);
            }
            if r + 1 < h {
                nbrs.push(v + w);
            }
            for u in nbrs {
                edge_id.insert((v, u), cells.len());
                cells.push(Cell {
                    dim: 1,
                    vertices: vec![v, u],
                    faces: vec![v, u],
                });
            }
        }
    }
    for r in 0..h.saturating_sub(1) {
        for c in 0..w.saturating_sub(1) {
            let (a, b, cc, d) = (r * w + c, r * w + c + 1, (r + 1) * w + c, (r + 1) * w + c + 1);
            cells.push(Cell {
                dim: 2,
                vertices: vec![a, b, cc, d],
                faces: vec![edge_id[&(a, b)], edge_id[&(a, cc)], edge_id[&(b, d)], edge_id[&(cc, d)]],
            });
        }
    }

    let apex = |cell: &Cell| *cell.vertices.iter().max_by_key(|&&v| rank[v]).unwrap();
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by_key(|&i| (rank[apex(&cells[i])], cells[i].dim, i));
    let mut pos = vec![0; cells.len()];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }

    let n = cells.len();
    let mut columns: Vec<Vec<bool>> = order
        .iter()
        .map(|&i| {
            let mut col = vec![false; n];
            for &f in &cells[i].faces {
                col[pos[f]] = true;
            }
            col
        })
        .collect();
    let low = |col: &Vec<bool>| col.iter().rposition(|&x| x);
    let mut low_owner: Vec<Option<usize>> = vec![None; n];
    let mut paired = vec![false; n];
    let mut pairs: Vec<(usize, Option<usize>)> = Vec::new();
    for j in 0..n {
        while let Some(l) = low(&columns[j]) {
            match low_owner[l] {
                Some(k) => {
                    let other = columns[k].clone();
                    for (x, y) in columns[j].iter_mut().zip(other) {
                        *x ^= y;
                    }
                }
                None => break,
            }
        }
        if let Some(l) = low(&columns[j]) {
            low_owner[l] = Some(j);
            paired[l] = true;
            paired[j] = true;
            pairs.push((l, Some(j)));
        }
    }
    for j in 0..n {
        if !paired[j] && low(&columns[j]).is_none() {
            pairs.push((j, None));
        }
    }

    let mut dgms = [Vec::new(), Vec::new()];
    for (b, d) in pairs {
        let bc = &cells[order[b]];
        if bc.dim > 1 {
            continue;
        }
        let ba = apex(bc);
        let death = match d {
            Some(d) => {
                let da = apex(&cells[order[d]]);
                if da == ba {
                    continue;
                }
                values[da]
            }
            None => f64::INFINITY,
        };
        dgms[bc.dim].push(PersistencePair {
            birth: values[ba],
            death,
        });
    }
    let [h0, h1] = dgms;
    (PersistenceDiagram::new(0, h0), PersistenceDiagram::new(1, h1))
}

/// Pixels strictly below all their 4-neighbours under (value, index) order.
pub fn local_minima(field: &ScalarField) -> Vec<usize> {
    let (h, w) = field.dims();
    let rank = naive_ranks(field.values());
    (0..h * w)
        .filter(|&v| {
            let (r, c) = (v / w, v % w);
            let mut nbrs = Vec::new();
            if r > 0 {
                nbrs.push(v - w);
            }
            if r + 1 < h {
                nbrs.push(v + w);
            }
            if c > 0 {
                nbrs.push(v - 1);
            }
            if c + 1 < w {
                nbrs.push(v + 1);
            }
            nbrs.iter().all(|&u| rank[u] > rank[v])
        })
        .collect()
}

fn cost(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

fn to_diag(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

fn search(a: &[(f64, f64)], b: &[(f64, f64)], i: usize, used: &mut Vec<bool>, cur: f64, best: &mut f64) {
    if cur >= *best {
        return;
    }
    if i == a.len() {
        let rest = b
            .iter()
            .zip(used.iter())
            .filter(|(_, &u)| !u)
            .map(|(&q, _)| to_diag(q))
            .fold(cur, f64::max);
        if rest < *best {
            *best = rest;
        }
        return;
    }
    search(a, b, i + 1, used, cur.max(to_diag(a[i])), best);
    for j in 0..b.len() {
        if !used[j] {
            used[j] = true;
            search(a, b, i + 1, used, cur.max(cost(a[i], b[j])), best);
            used[j] = false;
        }
    }
}

fn permutations_min_max(a: &[f64], b: &[f64]) -> f64 {
    fn go(a: &[f64], b: &[f64], i: usize, used: &mut Vec<bool>, cur: f64, best: &mut f64) {
        if i == a.len() {
            *best = best.min(cur);
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(a, b, i + 1, used, cur.max((a[i] - b[j]).abs()), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(a, b, 0, &mut vec![false; b.len()], 0.0, &mut best);
    best
}

/// Bottleneck distance by exhaustive branch-and-bound over all partial
/// matchings. Essential classes are matched by trying every permutation.
pub fn exhaustive_bottleneck(a: &PersistenceDiagram, b: &PersistenceDiagram) -> f64 {
    let (fa, fb) = (a.finite_points(), b.finite_points());
    let mut best = f64::INFINITY;
    search(&fa, &fb, 0, &mut vec![false; fb.len()], 0.0, &mut best);
    let ess = permutations_min_max(&a.essential_births(), &b.essential_births());
    best.max(ess)
}

/// Multiset view of a diagram for exact comparison.
pub fn multiset(pd: &PersistenceDiagram) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = pd
        .pairs
        .iter()
        .map(|p| (p.birth.to_bits(), p.death.to_bits()))
        .collect();
    v.sort_unstable();
    v
}

/// Grid of i.i.d. integers 0..=99 with random shape between 3x3 and 10x10.
pub fn integer_grid(rng: &mut ChaCha8Rng) -> ScalarField {
    let h = rng.random_range(3..=10);
    let w = rng.random_range(3..=10);
    ScalarField::from_fn(h, w, |_, _| rng.random_range(0..100) as f64)
}

pub fn uniform_grid(rng: &mut ChaCha8Rng, h: usize, w: usize) -> ScalarField {
    ScalarField::from_fn(h, w, |_, _| rng.random_range(0.0..1.0))
}

/// Random finite diagram with at most `max_points` points on a coarse value
/// lattice (so ties and coincident costs occur), plus `n_essential` classes.
pub fn random_diagram(rng: &mut ChaCha8Rng, max_points: usize, n_essential: usize) -> PersistenceDiagram {
    let n = rng.random_range(0..=max_points);
    let mut pairs: Vec<PersistencePair> = (0..n)
        .map(|_| {
            let b = rng.random_range(0..40) as f64 * 0.25;
            let d = b + rng.random_range(1..20) as f64 * 0.25;
            PersistencePair { birth: b, death: d }
        })
        .collect();
    pairs.extend((0..n_essential).map(|_| PersistencePair {
        birth: rng.random_range(0..40) as f64 * 0.25,
        death: f64::INFINITY,
    }));
    PersistenceDiagram::new(1, pairs)
}

/// Every marked pixel must be a corner of a 2x2 block whose (value, index)
/// ranks straddle the rank of some saddle: at least one corner at or below it
/// and at least one above.
pub fn contour_straddle_ok(field: &ScalarField, saddle_cells: &[usize], mask: &ScalarField) -> bool {
    let (h, w) = field.dims();
    let rank = naive_ranks(field.values());
    (0..h * w).filter(|&v| mask.values()[v] == 1.0).all(|v| {
        let (r, c) = (v / w, v % w);
        let rows = [r.checked_sub(1), Some(r)];
        let cols = [c.checked_sub(1), Some(c)];
        let blocks: Vec<(usize, usize)> = rows
            .iter()
            .flatten()
            .flat_map(|&br| cols.iter().flatten().map(move |&bc| (br, bc)))
            .collect();
        blocks.iter().any(|&(br, bc)| {
            if br + 1 >= h || bc + 1 >= w {
                return false;
            }
            let corners = [br * w + bc, br * w + bc + 1, (br + 1) * w + bc, (br + 1) * w + bc + 1];
            saddle_cells
                .iter()
                .any(|&s| corners.iter().any(|&k| rank[k] <= rank[s]) && corners.iter().any(|&k| rank[k] > rank[s]))
        })
    })
}
