//! Weighted bipartite coverage instances.
//!
//! Items (the ground set) each cover a fixed list of elements; elements
//! carry nonnegative values and, optionally, boolean labels splitting them
//! into targets and non-targets. The induced objective sums the values of
//! covered target elements, the induced constraint counts covered
//! non-target elements; unlabeled instances treat every element as both a
//! target for value and a unit of cost. Both functions are monotone
//! submodular by construction.

mod generate;
mod io;

pub use generate::{generate, GeneratorParams};

use crate::error::Error;
use crate::setfn::Oracle;

const WORD_BITS: usize = 64;

/// An immutable coverage instance.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageInstance {
    n_items: usize,
    n_elements: usize,
    covers: Vec<Vec<usize>>,
    values: Vec<f64>,
    labels: Option<Vec<bool>>,
}

impl CoverageInstance {
    /// Validates and canonicalizes an instance: coverage lists are sorted,
    /// must be nonempty, in range, and free of duplicates; values must be
    /// nonnegative and finite; array lengths must line up.
    pub fn new(
        n_items: usize,
        n_elements: usize,
        covers: Vec<Vec<usize>>,
        values: Vec<f64>,
        labels: Option<Vec<bool>>,
    ) -> Result<Self, Error> {
        if n_items == 0 {
            return Err(Error::InvalidInstance("instance has no items".into()));
        }
        if n_elements == 0 {
            return Err(Error::InvalidInstance("instance has no elements".into()));
        }
        if covers.len() != n_items {
            return Err(Error::InvalidInstance(format!(
                "expected {n_items} coverage lists, found {}",
                covers.len()
            )));
        }
        if values.len() != n_elements {
            return Err(Error::InvalidInstance(format!(
                "expected {n_elements} element values, found {}",
                values.len()
            )));
        }
        if let Some(labels) = &labels {
            if labels.len() != n_elements {
                return Err(Error::InvalidInstance(format!(
                    "expected {n_elements} labels, found {}",
                    labels.len()
                )));
            }
        }
        for (e, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInstance(format!(
                    "element {e} has invalid value {v}"
                )));
            }
        }
        let mut covers = covers;
        for (i, list) in covers.iter_mut().enumerate() {
            if list.is_empty() {
                return Err(Error::InvalidInstance(format!("item {i} covers no elements")));
            }
            list.sort_unstable();
            if let Some(&bad) = list.iter().find(|&&e| e >= n_elements) {
                return Err(Error::InvalidInstance(format!(
                    "item {i} covers element {bad}, out of range for {n_elements} elements"
                )));
            }
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInstance(format!(
                    "item {i} lists a covered element twice"
                )));
            }
        }
        Ok(CoverageInstance { n_items, n_elements, covers, values, labels })
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    /// Sorted element ids covered by each item.
    pub fn covers(&self) -> &[Vec<usize>] {
        &self.covers
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[bool]> {
        self.labels.as_deref()
    }

    /// Sum of all element values, labeled or not.
    pub fn value_sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// The objective oracle: total value of covered target elements (all
    /// elements when unlabeled).
    pub fn objective(&self) -> Oracle {
        let masks = self.item_masks(|e| self.is_target(e));
        let values = self.values.clone();
        let words = self.n_elements.div_ceil(WORD_BITS);
        Oracle::new(self.n_items, move |x| {
            let mut covered = vec![0u64; words];
            for item in x.iter() {
                for (word, m) in covered.iter_mut().zip(&masks[item]) {
                    *word |= m;
                }
            }
            let mut total = 0.0;
            for (wi, &word) in covered.iter().enumerate() {
                let mut rest = word;
                while rest != 0 {
                    total += values[wi * WORD_BITS + rest.trailing_zeros() as usize];
                    rest &= rest - 1;
                }
            }
            total
        })
    }

    /// The constraint oracle: number of covered non-target elements (all
    /// elements when unlabeled).
    pub fn constraint(&self) -> Oracle {
        let masks = self.item_masks(|e| !self.is_target(e) || self.labels.is_none());
        let words = self.n_elements.div_ceil(WORD_BITS);
        Oracle::new(self.n_items, move |x| {
            let mut covered = vec![0u64; words];
            for item in x.iter() {
                for (word, m) in covered.iter_mut().zip(&masks[item]) {
                    *word |= m;
                }
            }
            covered.iter().map(|w| w.count_ones() as u64).sum::<u64>() as f64
        })
    }

    fn is_target(&self, e: usize) -> bool {
        self.labels.as_ref().map_or(true, |labels| labels[e])
    }

    /// Per-item bitmask over elements, filtered by a predicate.
    fn item_masks(&self, keep: impl Fn(usize) -> bool) -> Vec<Vec<u64>> {
        let words = self.n_elements.div_ceil(WORD_BITS);
        self.covers
            .iter()
            .map(|list| {
                let mut mask = vec![0u64; words];
                for &e in list.iter().filter(|&&e| keep(e)) {
                    mask[e / WORD_BITS] |= 1u64 << (e % WORD_BITS);
                }
                mask
            })
            .collect()
    }
}
