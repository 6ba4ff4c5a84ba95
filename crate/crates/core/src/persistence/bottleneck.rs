//! Exact bottleneck distance by binary search over candidate costs with a
//! perfect-matching feasibility test.

use std::collections::VecDeque;

use super::PersistenceDiagram;
use crate::error::{Error, Result};

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn half_persistence(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

/// Bottleneck distance between two diagrams of the same dimension.
///
/// Finite points match each other or their diagonal projections under the
/// ∞-norm; essential classes match only among themselves by birth difference.
pub fn bottleneck_distance(a: &PersistenceDiagram, b: &PersistenceDiagram) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    let mut ess_a = a.essential_births();
    let mut ess_b = b.essential_births();
    if ess_a.len() != ess_b.len() {
        return Err(Error::EssentialCountMismatch(ess_a.len(), ess_b.len()));
    }
    ess_a.sort_unstable_by(f64::total_cmp);
    ess_b.sort_unstable_by(f64::total_cmp);
    // Sorted order is optimal for a 1D bottleneck matching.
    let essential = ess_a.iter().zip(&ess_b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);

    Ok(essential.max(finite_bottleneck(&a.finite_points(), &b.finite_points())))
}

fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let mut candidates = Vec::with_capacity(a.len() * b.len() + a.len() + b.len() + 1);
    candidates.push(0.0);
    candidates.extend(a.iter().map(|&p| half_persistence(p)));
    candidates.extend(b.iter().map(|&p| half_persistence(p)));
    for &p in a {
        for &q in b {
            candidates.push(linf(p, q));
        }
    }
    candidates.sort_unstable_by(f64::total_cmp);
    candidates.dedup();

    // The largest half-persistence is always feasible (everything to the diagonal).
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if perfect_matching_exists(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Left vertices: points of `a`, then diagonal copies of `b`'s points.
/// Right vertices: points of `b`, then diagonal copies of `a`'s points.
fn perfect_matching_exists(a: &[(f64, f64)], b: &[(f64, f64)], radius: f64) -> bool {
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &p) in a.iter().enumerate() {
        for (j, &q) in b.iter().enumerate() {
            if linf(p, q) <= radius {
                adj[i].push(j);
            }
        }
        if half_persistence(p) <= radius {
            adj[i].push(nb + i);
        }
    }
    for (j, &q) in b.iter().enumerate() {
        let left = na + j;
        if half_persistence(q) <= radius {
            adj[left].push(j);
        }
        adj[left].extend(nb..nb + na);
    }
    hopcroft_karp(&adj, n) == n
}

/// Maximum matching size of a bipartite graph given by left adjacency lists.
pub(crate) fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> usize {
    const FREE: usize = usize::MAX;
    let n_left = adj.len();
    let mut match_left = vec![FREE; n_left];
    let mut match_right = vec![FREE; n_right];
    let mut dist = vec![0usize; n_left];
    let mut matched = 0;

    loop {
        // BFS layers from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if match_left[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return matched;
        }

        // Iterative DFS along the layered graph.
        let mut next_edge = vec![0usize; n_left];
        for root in 0..n_left {
            if match_left[root] != FREE {
                continue;
            }
            let mut stack = vec![root];
            while let Some(&u) = stack.last() {
                if next_edge[u] == adj[u].len() {
                    dist[u] = usize::MAX;
                    stack.pop();
                    continue;
                }
                let v = adj[u][next_edge[u]];
                next_edge[u] += 1;
                let w = match_right[v];
                if w == FREE {
                    // Augment along the stack.
                    let mut right = v;
                    while let Some(l) = stack.pop() {
                        let prev = match_left[l];
                        match_left[l] = right;
                        match_right[right] = l;
                        right = prev;
                    }
                    matched += 1;
                    break;
                } else if dist[w] == dist[u].wrapping_add(1) {
                    stack.push(w);
                }
            }
        }
    }
}
