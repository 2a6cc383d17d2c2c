//! Shared fixtures for unit tests.

use crate::setfn::{Oracle, SubsetMask};

/// Weighted coverage objective: value of all elements covered by the items.
pub(crate) fn coverage_value(covers: Vec<Vec<usize>>, values: Vec<f64>) -> Oracle {
    let n = covers.len();
    Oracle::new(n, move |x| {
        let mut seen = vec![false; values.len()];
        for item in x.iter() {
            for &e in &covers[item] {
                seen[e] = true;
            }
        }
        seen.iter()
            .zip(&values)
            .filter_map(|(&hit, &v)| hit.then_some(v))
            .sum()
    })
}

/// Coverage cost: number of elements covered by the items.
pub(crate) fn coverage_count(covers: Vec<Vec<usize>>, n_elements: usize) -> Oracle {
    let n = covers.len();
    Oracle::new(n, move |x| {
        let mut seen = vec![false; n_elements];
        for item in x.iter() {
            for &e in &covers[item] {
                seen[e] = true;
            }
        }
        seen.iter().filter(|&&hit| hit).count() as f64
    })
}

fn tiny_covers() -> Vec<Vec<usize>> {
    vec![vec![0, 1], vec![1, 2], vec![2]]
}

/// Three items over elements worth {10, 20, 30}: item 0 covers the first
/// two, item 1 the last two, item 2 only the last.
pub(crate) fn tiny_g() -> Oracle {
    coverage_value(tiny_covers(), vec![10.0, 20.0, 30.0])
}

pub(crate) fn tiny_f() -> Oracle {
    coverage_count(tiny_covers(), 3)
}

pub(crate) fn mask3(indices: &[usize]) -> SubsetMask {
    SubsetMask::from_indices(3, indices.iter().copied())
}
