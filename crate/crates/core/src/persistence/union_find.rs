//! Zero-dimensional sublevel persistence by merging 4-connected components.

use super::cubical::ApexPair;
use crate::field::ScalarField;
use crate::perturb;

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
    /// Oldest vertex (lowest in the perturbed order) of the component rooted here.
    oldest: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
            oldest: (0..n).collect(),
        }
    }

    fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize, oldest: usize) {
        let (mut a, mut b) = (a, b);
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
        self.oldest[a] = oldest;
    }
}

/// H0 pairs by the elder rule; includes zero-persistence pairs of the form
/// `(v, v)` for every vertex that joins an existing component on arrival.
pub(crate) fn h0_pairs(field: &ScalarField) -> Vec<ApexPair> {
    let (h, w) = field.dims();
    let values = field.values();
    let mut sets = DisjointSet::new(h * w);
    let mut active = vec![false; h * w];
    let mut pairs = Vec::new();
    for v in perturb::sorted_cells(field) {
        active[v] = true;
        let (r, c) = (v / w, v % w);
        let neighbours = [
            (r > 0).then(|| v - w),
            (r + 1 < h).then(|| v + w),
            (c > 0).then(|| v - 1),
            (c + 1 < w).then(|| v + 1),
        ];
        for u in neighbours.into_iter().flatten() {
            if !active[u] {
                continue;
            }
            let (ru, rv) = (sets.find(u), sets.find(v));
            if ru == rv {
                continue;
            }
            let (ou, ov) = (sets.oldest[ru], sets.oldest[rv]);
            let (elder, younger) = if perturb::lower(values, ou, ov) {
                (ou, ov)
            } else {
                (ov, ou)
            };
            pairs.push(ApexPair {
                birth: younger,
                death: Some(v),
            });
            sets.union(ru, rv, elder);
        }
    }
    for v in 0..h * w {
        if sets.find(v) == v {
            pairs.push(ApexPair {
                birth: sets.oldest[v],
                death: None,
            });
        }
    }
    pairs
}
