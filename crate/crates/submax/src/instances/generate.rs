use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CoverageInstance;
use crate::error::Error;

/// Parameters for the seeded coverage instance generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorParams {
    pub n_items: usize,
    pub n_elements: usize,
    /// Inclusive range of integer element values.
    pub value_range: (u64, u64),
    /// Inclusive range of per-item coverage list sizes.
    pub coverage_degree: (usize, usize),
    pub seed: u64,
}

impl GeneratorParams {
    /// Defaults: values uniform on [1, 100], degrees uniform on [1, 4].
    pub fn new(n_items: usize, n_elements: usize, seed: u64) -> Self {
        GeneratorParams {
            n_items,
            n_elements,
            value_range: (1, 100),
            coverage_degree: (1, 4.min(n_elements.max(1))),
            seed,
        }
    }

    pub fn with_value_range(mut self, lo: u64, hi: u64) -> Self {
        self.value_range = (lo, hi);
        self
    }

    pub fn with_coverage_degree(mut self, lo: usize, hi: usize) -> Self {
        self.coverage_degree = (lo, hi);
        self
    }
}

/// Generates an unlabeled coverage instance, fully determined by the
/// parameters. Draws happen in a fixed order: per-item degree then covered
/// ids for items 0, 1, ...; then element values; then one owning item for
/// each element nothing covered (instances must leave no element
/// uncovered, so such elements are attached rather than rejected).
pub fn generate(params: &GeneratorParams) -> Result<CoverageInstance, Error> {
    let GeneratorParams { n_items, n_elements, value_range, coverage_degree, seed } = *params;
    if n_items == 0 || n_elements == 0 {
        return Err(Error::InvalidParameters(
            "n_items and n_elements must be positive".into(),
        ));
    }
    let (deg_lo, deg_hi) = coverage_degree;
    if deg_lo == 0 || deg_lo > deg_hi {
        return Err(Error::InvalidParameters(format!(
            "coverage degree range [{deg_lo}, {deg_hi}] is empty or starts at zero"
        )));
    }
    if deg_hi > n_elements {
        return Err(Error::InvalidParameters(format!(
            "coverage degree up to {deg_hi} impossible with {n_elements} elements"
        )));
    }
    let (val_lo, val_hi) = value_range;
    if val_lo > val_hi {
        return Err(Error::InvalidParameters(format!(
            "value range [{val_lo}, {val_hi}] is empty"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covers: Vec<Vec<usize>> = Vec::with_capacity(n_items);
    let mut covered = vec![false; n_elements];
    for _ in 0..n_items {
        let degree = rng.random_range(deg_lo..=deg_hi);
        let mut list = rand::seq::index::sample(&mut rng, n_elements, degree).into_vec();
        list.sort_unstable();
        for &e in &list {
            covered[e] = true;
        }
        covers.push(list);
    }
    let values: Vec<f64> = (0..n_elements)
        .map(|_| rng.random_range(val_lo..=val_hi) as f64)
        .collect();
    for (e, _) in covered.iter().enumerate().filter(|&(_, &hit)| !hit) {
        let owner = rng.random_range(0..n_items);
        covers[owner].push(e);
    }
    CoverageInstance::new(n_items, n_elements, covers, values, None)
}
