//! V-construction cubical complex of a grid and its boundary-matrix reduction.
//!
//! Vertices are pixels, edges join 4-neighbours and every 2x2 block of pixels
//! spans a unit square. A cell enters the filtration at its apex, the highest
//! of its vertices in the perturbed order. Columns are reduced over Z2, squares
//! first, and every edge that becomes a square pivot is cleared before the edge
//! columns are reduced.

use crate::field::ScalarField;
use crate::perturb;

/// A persistence pair expressed through apex vertices; `death` is `None` for
/// essential classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct ApexPair {
    pub birth: usize,
    pub death: Option<usize>,
}

pub(crate) struct CubicalComplex {
    height: usize,
    width: usize,
    /// Vertex rank in the perturbed order.
    rank: Vec<usize>,
    /// Vertex with rank `r`.
    by_rank: Vec<usize>,
    /// Edge endpoints, horizontal edges first.
    edges: Vec<[usize; 2]>,
}

impl CubicalComplex {
    pub fn new(field: &ScalarField) -> Self {
        let (height, width) = field.dims();
        let by_rank = perturb::sorted_cells(field);
        let mut rank = vec![0; by_rank.len()];
        for (r, &v) in by_rank.iter().enumerate() {
            rank[v] = r;
        }
        let mut edges = Vec::with_capacity(height * width.saturating_sub(1) + height.saturating_sub(1) * width);
        for r in 0..height {
            for c in 0..width.saturating_sub(1) {
                edges.push([r * width + c, r * width + c + 1]);
            }
        }
        for r in 0..height.saturating_sub(1) {
            for c in 0..width {
                edges.push([r * width + c, (r + 1) * width + c]);
            }
        }
        Self {
            height,
            width,
            rank,
            by_rank,
            edges,
        }
    }

    fn horizontal_edge(&self, r: usize, c: usize) -> usize {
        r * (self.width - 1) + c
    }

    fn vertical_edge(&self, r: usize, c: usize) -> usize {
        self.height * (self.width - 1) + r * self.width + c
    }

    fn edge_apex_rank(&self, e: usize) -> usize {
        let [a, b] = self.edges[e];
        self.rank[a].max(self.rank[b])
    }

    /// Squares as (apex rank, four edge ids).
    fn squares(&self) -> Vec<(usize, [usize; 4])> {
        if self.height < 2 || self.width < 2 {
            return Vec::new();
        }
        let w = self.width;
        let mut out = Vec::with_capacity((self.height - 1) * (w - 1));
        for r in 0..self.height - 1 {
            for c in 0..w - 1 {
                let corners = [r * w + c, r * w + c + 1, (r + 1) * w + c, (r + 1) * w + c + 1];
                let apex = corners.iter().map(|&v| self.rank[v]).max().expect("four corners");
                let faces = [
                    self.horizontal_edge(r, c),
                    self.horizontal_edge(r + 1, c),
                    self.vertical_edge(r, c),
                    self.vertical_edge(r, c + 1),
                ];
                out.push((apex, faces));
            }
        }
        out
    }

    /// Pairs in dimensions 0 and 1, including zero-persistence ones
    /// (birth apex equal to death apex).
    pub fn reduce(&self) -> (Vec<ApexPair>, Vec<ApexPair>) {
        let n_edges = self.edges.len();
        let mut edge_order: Vec<usize> = (0..n_edges).collect();
        edge_order.sort_unstable_by_key(|&e| (self.edge_apex_rank(e), e));
        let mut edge_pos = vec![0; n_edges];
        for (p, &e) in edge_order.iter().enumerate() {
            edge_pos[e] = p;
        }

        // Squares -> edges.
        let mut squares = self.squares();
        squares.sort_unstable_by_key(|&(apex, faces)| (apex, faces[0]));
        let columns = squares.iter().map(|(_, faces)| {
            let mut col: Vec<usize> = faces.iter().map(|&e| edge_pos[e]).collect();
            col.sort_unstable();
            col
        });
        let square_lows = reduce_columns(columns, n_edges);

        let mut cleared = vec![false; n_edges];
        let mut h1 = Vec::new();
        for (s, low) in square_lows.iter().enumerate() {
            if let Some(low) = *low {
                cleared[low] = true;
                h1.push(ApexPair {
                    birth: self.by_rank[self.edge_apex_rank(edge_order[low])],
                    death: Some(self.by_rank[squares[s].0]),
                });
            }
        }

        // Edges -> vertices, skipping cleared columns.
        let columns = edge_order.iter().enumerate().map(|(p, &e)| {
            if cleared[p] {
                Vec::new()
            } else {
                let [a, b] = self.edges[e];
                let (x, y) = (self.rank[a], self.rank[b]);
                vec![x.min(y), x.max(y)]
            }
        });
        let edge_lows = reduce_columns(columns, self.rank.len());

        let mut vertex_killed = vec![false; self.rank.len()];
        let mut h0 = Vec::new();
        for (p, low) in edge_lows.iter().enumerate() {
            match *low {
                Some(v) => {
                    vertex_killed[v] = true;
                    h0.push(ApexPair {
                        birth: self.by_rank[v],
                        death: Some(self.by_rank[self.edge_apex_rank(edge_order[p])]),
                    });
                }
                None if !cleared[p] => h1.push(ApexPair {
                    birth: self.by_rank[self.edge_apex_rank(edge_order[p])],
                    death: None,
                }),
                None => {}
            }
        }
        for (r, killed) in vertex_killed.iter().enumerate() {
            if !killed {
                h0.push(ApexPair {
                    birth: self.by_rank[r],
                    death: None,
                });
            }
        }
        (h0, h1)
    }
}

/// Standard left-to-right Z2 column reduction. Columns hold ascending row
/// positions; the result gives each column's pivot row after reduction.
fn reduce_columns(columns: impl Iterator<Item = Vec<usize>>, n_rows: usize) -> Vec<Option<usize>> {
    let mut pivot_owner: Vec<Option<usize>> = vec![None; n_rows];
    let mut reduced: Vec<Vec<usize>> = Vec::new();
    let mut lows = Vec::new();
    let mut scratch = Vec::new();
    for mut col in columns {
        while let Some(&low) = col.last() {
            match pivot_owner[low] {
                Some(owner) => {
                    symmetric_difference(&col, &reduced[owner], &mut scratch);
                    std::mem::swap(&mut col, &mut scratch);
                }
                None => break,
            }
        }
        let j = reduced.len();
        let low = col.last().copied();
        if let Some(low) = low {
            pivot_owner[low] = Some(j);
        }
        lows.push(low);
        reduced.push(col);
    }
    lows
}

fn symmetric_difference(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}
