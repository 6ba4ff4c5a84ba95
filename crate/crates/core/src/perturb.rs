//! Symbolic perturbation shared by critical-point classification and persistence.
//!
//! Cell `k` carries the value `v[k] + ε·k` for an infinitesimal `ε`, so two
//! cells compare by `(value, linear index)` lexicographically and no two cells
//! are ever equal.

use std::cmp::Ordering;

use crate::field::ScalarField;

#[inline]
pub fn compare(values: &[f64], a: usize, b: usize) -> Ordering {
    values[a]
        .partial_cmp(&values[b])
        .expect("field values are finite")
        .then(a.cmp(&b))
}

#[inline]
pub fn lower(values: &[f64], a: usize, b: usize) -> bool {
    compare(values, a, b) == Ordering::Less
}

/// Cell indices sorted ascending under the perturbed order.
pub fn sorted_cells(field: &ScalarField) -> Vec<usize> {
    let values = field.values();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by(|&a, &b| compare(values, a, b));
    order
}

/// `rank[k]` is the position of cell `k` in the perturbed order.
pub fn ranks(field: &ScalarField) -> Vec<usize> {
    let mut rank = vec![0; field.len()];
    for (pos, cell) in sorted_cells(field).into_iter().enumerate() {
        rank[cell] = pos;
    }
    rank
}
