//! Ground sets, subset masks, and set function oracles.

mod check;
mod mask;
mod oracle;

pub use check::{
    check_monotone, check_monotone_sampled, check_submodular, check_submodular_sampled,
    CheckReport, MonotonicityViolation, SubmodularityViolation, DEFAULT_CHECK_LIMIT,
};
pub use mask::SubsetMask;
pub use oracle::Oracle;

/// A finite ground set `{0, 1, ..., n-1}`. Mostly a factory for [`SubsetMask`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    /// A ground set with elements `0..n`. Panics if `n` is zero.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "ground set must be nonempty");
        GroundSet { n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn empty_mask(&self) -> SubsetMask {
        SubsetMask::empty(self.n)
    }

    pub fn full_mask(&self) -> SubsetMask {
        SubsetMask::full(self.n)
    }

    pub fn singleton(&self, j: usize) -> SubsetMask {
        SubsetMask::singleton(self.n, j)
    }

    pub fn subset(&self, members: &[usize]) -> SubsetMask {
        SubsetMask::from_indices(self.n, members.iter().copied())
    }

    /// All `2^n` subsets in ascending bit order. Panics if `n > 25`; callers
    /// wanting larger enumerations should reconsider.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        assert!(self.n <= 25, "refusing to enumerate 2^{} subsets", self.n);
        (0u64..(1u64 << self.n)).map(move |bits| SubsetMask::from_bits(self.n, bits))
    }
}
