use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Oracle, SubsetMask};
use crate::error::Error;
use crate::TOLERANCE;

/// Default ground set size cap for the exhaustive checkers.
pub const DEFAULT_CHECK_LIMIT: usize = 15;

/// A triple `X subset of Y`, `j` outside `Y` where the diminishing returns
/// inequality `f(j|X) >= f(j|Y)` fails.
#[derive(Debug, Clone)]
pub struct SubmodularityViolation {
    pub x: SubsetMask,
    pub y: SubsetMask,
    pub element: usize,
    pub gain_at_x: f64,
    pub gain_at_y: f64,
}

/// A pair `(X, j)` with a negative marginal gain.
#[derive(Debug, Clone)]
pub struct MonotonicityViolation {
    pub set: SubsetMask,
    pub element: usize,
    pub gain: f64,
}

/// Outcome of a property check: how many inequalities were inspected and
/// which ones failed.
#[derive(Debug, Clone)]
pub struct CheckReport<V> {
    pub checks: u64,
    pub violations: Vec<V>,
}

impl<V> CheckReport<V> {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively verifies diminishing returns over every `(X, Y, j)` with
/// `X` a subset of `Y` and `j` outside `Y`. Errors if the universe exceeds
/// `limit_n` (or 25, past which the value table will not fit).
pub fn check_submodular(
    oracle: &Oracle,
    limit_n: usize,
) -> Result<CheckReport<SubmodularityViolation>, Error> {
    let n = guarded_size(oracle, limit_n)?;
    let table = oracle.dense_table();
    let mut report = CheckReport { checks: 0, violations: Vec::new() };
    for y in 0u64..(1u64 << n) {
        for j in 0..n {
            let bit = 1u64 << j;
            if y & bit != 0 {
                continue;
            }
            let gain_at_y = table[(y | bit) as usize] - table[y as usize];
            // Walk every proper submask of y, plus the empty set.
            let mut x = y;
            loop {
                x = x.wrapping_sub(1) & y;
                if x == y {
                    break;
                }
                report.checks += 1;
                let gain_at_x = table[(x | bit) as usize] - table[x as usize];
                if gain_at_x < gain_at_y - TOLERANCE {
                    report.violations.push(SubmodularityViolation {
                        x: SubsetMask::from_bits(n, x),
                        y: SubsetMask::from_bits(n, y),
                        element: j,
                        gain_at_x,
                        gain_at_y,
                    });
                }
                if x == 0 {
                    break;
                }
            }
        }
    }
    Ok(report)
}

/// Exhaustively verifies nonnegative marginal gains over every `(X, j)` with
/// `j` outside `X`. Errors if the universe exceeds `limit_n`.
pub fn check_monotone(
    oracle: &Oracle,
    limit_n: usize,
) -> Result<CheckReport<MonotonicityViolation>, Error> {
    let n = guarded_size(oracle, limit_n)?;
    let table = oracle.dense_table();
    let mut report = CheckReport { checks: 0, violations: Vec::new() };
    for x in 0u64..(1u64 << n) {
        for j in 0..n {
            let bit = 1u64 << j;
            if x & bit != 0 {
                continue;
            }
            report.checks += 1;
            let gain = table[(x | bit) as usize] - table[x as usize];
            if gain < -TOLERANCE {
                report.violations.push(MonotonicityViolation {
                    set: SubsetMask::from_bits(n, x),
                    element: j,
                    gain,
                });
            }
        }
    }
    Ok(report)
}

/// Spot-checks diminishing returns on `samples` random `(X, Y, j)` triples.
/// Deterministic in `seed`; suitable for universes too large to enumerate.
pub fn check_submodular_sampled(
    oracle: &Oracle,
    samples: usize,
    seed: u64,
) -> CheckReport<SubmodularityViolation> {
    let n = oracle.universe();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport { checks: 0, violations: Vec::new() };
    while report.checks < samples as u64 {
        let y = random_mask(&mut rng, n);
        if y.len() == n {
            continue;
        }
        let x = random_submask(&mut rng, &y);
        let j = random_outside(&mut rng, &y);
        report.checks += 1;
        let gain_at_x = oracle.marginal_gain(j, &x);
        let gain_at_y = oracle.marginal_gain(j, &y);
        if gain_at_x < gain_at_y - TOLERANCE {
            report.violations.push(SubmodularityViolation {
                x,
                y,
                element: j,
                gain_at_x,
                gain_at_y,
            });
        }
    }
    report
}

/// Spot-checks monotonicity on `samples` random `(X, j)` pairs.
pub fn check_monotone_sampled(
    oracle: &Oracle,
    samples: usize,
    seed: u64,
) -> CheckReport<MonotonicityViolation> {
    let n = oracle.universe();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport { checks: 0, violations: Vec::new() };
    while report.checks < samples as u64 {
        let x = random_mask(&mut rng, n);
        if x.len() == n {
            continue;
        }
        let j = random_outside(&mut rng, &x);
        report.checks += 1;
        let gain = oracle.marginal_gain(j, &x);
        if gain < -TOLERANCE {
            report.violations.push(MonotonicityViolation { set: x, element: j, gain });
        }
    }
    report
}

fn guarded_size(oracle: &Oracle, limit_n: usize) -> Result<usize, Error> {
    let n = oracle.universe();
    let limit = limit_n.min(25);
    if n > limit {
        return Err(Error::UniverseTooLarge { n, limit });
    }
    Ok(n)
}

fn random_mask(rng: &mut ChaCha8Rng, n: usize) -> SubsetMask {
    SubsetMask::from_indices(n, (0..n).filter(|_| rng.random::<bool>()))
}

fn random_submask(rng: &mut ChaCha8Rng, of: &SubsetMask) -> SubsetMask {
    SubsetMask::from_indices(of.universe(), of.iter().filter(|_| rng.random::<bool>()))
}

fn random_outside(rng: &mut ChaCha8Rng, of: &SubsetMask) -> usize {
    let outside = of.complement().indices();
    outside[rng.random_range(0..outside.len())]
}
