use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use super::SubsetMask;

/// A set function `2^V -> R` wrapped with memoization and call counting.
///
/// `evaluate` caches by subset, so the counter reports distinct evaluations
/// of the underlying function rather than lookups. Solvers report the
/// difference of this counter across a run as their query cost.
pub struct Oracle {
    n: usize,
    eval: Box<dyn Fn(&SubsetMask) -> f64 + Send + Sync>,
    memo: Mutex<HashMap<SubsetMask, f64>>,
    calls: AtomicU64,
}

impl Oracle {
    /// Wraps a set function on the universe `{0, ..., n-1}`.
    pub fn new(n: usize, eval: impl Fn(&SubsetMask) -> f64 + Send + Sync + 'static) -> Self {
        assert!(n > 0, "ground set must be nonempty");
        Oracle {
            n,
            eval: Box::new(eval),
            memo: Mutex::new(HashMap::new()),
            calls: AtomicU64::new(0),
        }
    }

    /// The modular function `X -> sum of weights[j] for j in X`.
    pub fn modular(weights: Vec<f64>) -> Self {
        let n = weights.len();
        Oracle::new(n, move |x| x.iter().map(|j| weights[j]).sum())
    }

    /// Universe size.
    pub fn universe(&self) -> usize {
        self.n
    }

    /// Distinct evaluations of the wrapped function so far.
    pub fn call_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn evaluate(&self, x: &SubsetMask) -> f64 {
        assert_eq!(x.universe(), self.n, "mask universe does not match oracle");
        let mut memo = self.memo.lock().unwrap();
        if let Some(&value) = memo.get(x) {
            return value;
        }
        let value = (self.eval)(x);
        memo.insert(x.clone(), value);
        self.calls.fetch_add(1, Ordering::Relaxed);
        value
    }

    /// Evaluates without touching the memo table. Useful for exhaustive
    /// enumerations where caching every subset would exhaust memory.
    pub fn evaluate_uncached(&self, x: &SubsetMask) -> f64 {
        assert_eq!(x.universe(), self.n, "mask universe does not match oracle");
        self.calls.fetch_add(1, Ordering::Relaxed);
        (self.eval)(x)
    }

    /// The marginal gain `f(X + j) - f(X)`. The element must lie outside `X`;
    /// passing a member is a caller bug and panics.
    pub fn marginal_gain(&self, j: usize, x: &SubsetMask) -> f64 {
        assert!(
            !x.contains(j),
            "marginal gain of element {j} requested relative to a set already containing it"
        );
        self.evaluate(&x.with(j)) - self.evaluate(x)
    }

    /// `max_j f({j})`, the largest singleton value.
    pub fn max_singleton_gain(&self) -> f64 {
        (0..self.n)
            .map(|j| self.evaluate(&SubsetMask::singleton(self.n, j)))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// All `2^n` values indexed by packed mask bits. Panics if `n > 25`.
    pub(crate) fn dense_table(&self) -> Vec<f64> {
        assert!(self.n <= 25, "refusing to tabulate 2^{} values", self.n);
        (0u64..(1u64 << self.n))
            .map(|bits| self.evaluate_uncached(&SubsetMask::from_bits(self.n, bits)))
            .collect()
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.debug_struct("Oracle")
            .field("n", &self.n)
            .field("calls", &self.call_count())
            .finish()
    }
}
