//! Curvature, certificates, and numerical verification of the guarantees
//! backing the variational solvers.

use std::fmt;

use crate::bounds::{modular_lower_bound, PermutationChain};
use crate::error::Error;
use crate::setfn::{Oracle, SubsetMask};
use crate::solvers::{m_step_costs, IterationTrace};
use crate::TOLERANCE;

/// Curvature of a monotone submodular function: `1 - min_k g(k | V-k) / g({k})`,
/// the distance from modularity (0 exactly for modular functions, 1 when
/// some element is fully redundant given the rest).
#[derive(Debug, Clone, PartialEq)]
pub struct Curvature {
    pub value: f64,
    /// Elements skipped because their singleton value is zero; they cannot
    /// contribute to any solution and would make the ratio 0/0.
    pub excluded: Vec<usize>,
}

/// A priori approximation guarantee for the variational solvers:
/// `g(solution) >= ratio * g(OPT)` with `ratio = (1 - kappa_g)(1 - 2 delta_f / b)`,
/// meaningful only when positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationCertificate {
    pub kappa_g: f64,
    pub delta_f: f64,
    pub budget: f64,
    pub ratio: f64,
    /// True when the ratio is not positive and the certificate says nothing.
    pub vacuous: bool,
}

impl fmt::Display for ApproximationCertificate {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "kappa_g={} delta_f={} ratio={}{}",
            self.kappa_g,
            self.delta_f,
            self.ratio,
            if self.vacuous { " (vacuous)" } else { "" }
        )
    }
}

/// Computes the curvature of `g`, excluding zero-valued singletons from the
/// minimum. Errors when every singleton is zero.
pub fn curvature(g: &Oracle) -> Result<Curvature, Error> {
    let n = g.universe();
    let full = SubsetMask::full(n);
    let mut excluded = Vec::new();
    let mut min_ratio = f64::INFINITY;
    for k in 0..n {
        let singleton = g.evaluate(&SubsetMask::singleton(n, k));
        if singleton <= 0.0 {
            excluded.push(k);
            continue;
        }
        let ratio = g.marginal_gain(k, &full.without(k)) / singleton;
        min_ratio = min_ratio.min(ratio);
    }
    if excluded.len() == n {
        return Err(Error::NoPositiveSingleton);
    }
    Ok(Curvature { value: 1.0 - min_ratio, excluded })
}

/// Builds the approximation certificate for budget `b > 0`.
pub fn build_certificate(
    g: &Oracle,
    f: &Oracle,
    budget: f64,
) -> Result<ApproximationCertificate, Error> {
    if !budget.is_finite() || budget <= 0.0 {
        return Err(Error::InvalidParameters(format!(
            "certificate requires a positive budget, got {budget}"
        )));
    }
    let kappa_g = curvature(g)?.value;
    let delta_f = f.max_singleton_gain();
    // `+ 0.0` turns a negative zero from `0 * negative` into plain zero.
    let ratio = (1.0 - kappa_g) * (1.0 - 2.0 * delta_f / budget) + 0.0;
    Ok(ApproximationCertificate {
        kappa_g,
        delta_f,
        budget,
        ratio,
        vacuous: ratio <= 0.0,
    })
}

/// A pair where the modular lower bound fell short of
/// `(1 - kappa) * g(set)`.
#[derive(Debug, Clone)]
pub struct CurvatureBoundViolation {
    pub anchor: SubsetMask,
    pub set: SubsetMask,
    pub bound_value: f64,
    pub threshold: f64,
}

/// Outcome of checking the curvature lower-bound guarantee.
#[derive(Debug, Clone)]
pub struct CurvatureBoundReport {
    pub kappa: f64,
    pub checks: u64,
    pub violations: Vec<CurvatureBoundViolation>,
}

impl CurvatureBoundReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies `ghat_anchor(X) >= (1 - kappa) g(X)` for every anchor and every
/// subset. Quadratic in the number of subsets; capped at `n <= 15`.
pub fn verify_theorem2_exhaustive(g: &Oracle) -> Result<CurvatureBoundReport, Error> {
    let n = g.universe();
    if n > 15 {
        return Err(Error::UniverseTooLarge { n, limit: 15 });
    }
    let kappa = curvature(g)?.value;
    let table = g.dense_table();
    let size = 1usize << n;
    let mut weights = vec![0.0; n];
    let mut sums = vec![0.0; size];
    let mut report = CurvatureBoundReport { kappa, checks: 0, violations: Vec::new() };
    for anchor in 0..size as u64 {
        chain_weights_from_table(&table, n, anchor, &mut weights);
        // Modular sums over all subsets, each extending a smaller one.
        for s in 1..size {
            sums[s] = sums[s & (s - 1)] + weights[s.trailing_zeros() as usize];
        }
        for s in 0..size {
            report.checks += 1;
            let threshold = (1.0 - kappa) * table[s];
            if sums[s] < threshold - TOLERANCE {
                report.violations.push(CurvatureBoundViolation {
                    anchor: SubsetMask::from_bits(n, anchor),
                    set: SubsetMask::from_bits(n, s as u64),
                    bound_value: sums[s],
                    threshold,
                });
            }
        }
    }
    Ok(report)
}

/// Sampled variant of the curvature bound check for larger universes.
pub fn verify_theorem2_sampled(
    g: &Oracle,
    anchors: &[SubsetMask],
    subsets: &[SubsetMask],
) -> Result<CurvatureBoundReport, Error> {
    let kappa = curvature(g)?.value;
    let mut report = CurvatureBoundReport { kappa, checks: 0, violations: Vec::new() };
    for anchor in anchors {
        let bound = modular_lower_bound(g, &PermutationChain::from_anchor(anchor))?;
        for set in subsets {
            report.checks += 1;
            let bound_value = bound.evaluate(set);
            let threshold = (1.0 - kappa) * g.evaluate(set);
            if bound_value < threshold - TOLERANCE {
                report.violations.push(CurvatureBoundViolation {
                    anchor: anchor.clone(),
                    set: set.clone(),
                    bound_value,
                    threshold,
                });
            }
        }
    }
    Ok(report)
}

fn chain_weights_from_table(table: &[f64], n: usize, anchor: u64, weights: &mut [f64]) {
    let mut prefix = 0u64;
    let mut previous = table[0];
    for j in (0..n).filter(|&j| anchor >> j & 1 == 1).chain((0..n).filter(|&j| anchor >> j & 1 == 0)) {
        prefix |= 1 << j;
        let value = table[prefix as usize];
        weights[j] = value - previous;
        previous = value;
    }
}

/// An iteration whose surrogate objective fell short of
/// `factor * (surrogate optimum)`.
#[derive(Debug, Clone)]
pub struct SurrogateStepViolation {
    pub t: usize,
    pub ghat_value: f64,
    pub threshold: f64,
}

/// Outcome of checking the per-iteration surrogate guarantee along a trace.
#[derive(Debug, Clone)]
pub struct SurrogateStepReport {
    /// `1 - 2 delta_f / b`; nothing is claimed when this is not positive.
    pub factor: f64,
    pub checks: usize,
    pub vacuous: usize,
    pub violations: Vec<SurrogateStepViolation>,
}

impl SurrogateStepReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies, for each accepted iterate, that its surrogate objective is at
/// least `(1 - 2 delta_f / b)` times the exhaustive optimum of the modular
/// surrogate problem the maximization step faced (same weights, same costs,
/// cost sum within budget). Needs the starting set to anchor the first
/// step; capped at `n <= 12`.
pub fn verify_proposition3(
    g: &Oracle,
    f: &Oracle,
    budget: f64,
    initial: &SubsetMask,
    trace: &[IterationTrace],
) -> Result<SurrogateStepReport, Error> {
    let n = g.universe();
    if n > 12 {
        return Err(Error::UniverseTooLarge { n, limit: 12 });
    }
    let factor = if budget > 0.0 {
        1.0 - 2.0 * f.max_singleton_gain() / budget
    } else {
        f64::NEG_INFINITY
    };
    let mut report =
        SurrogateStepReport { factor, checks: 0, vacuous: 0, violations: Vec::new() };
    let size = 1usize << n;
    let mut cost_sums = vec![0.0; size];
    let mut weight_sums = vec![0.0; size];
    let mut anchor = initial.clone();
    for entry in trace {
        if !entry.theta_hat.is_subset_of(&anchor) {
            return Err(Error::InvalidParameters(format!(
                "trace entry {} carries a variational subset outside its anchor",
                entry.t
            )));
        }
        if factor <= 0.0 {
            report.vacuous += 1;
            anchor = entry.set.clone();
            continue;
        }
        let bound = modular_lower_bound(g, &PermutationChain::from_anchor(&anchor))?;
        let costs = m_step_costs(f, &anchor, &entry.theta_hat);
        let mut optimum = 0.0f64;
        for s in 1..size {
            let low = s.trailing_zeros() as usize;
            cost_sums[s] = cost_sums[s & (s - 1)] + costs[low];
            weight_sums[s] = weight_sums[s & (s - 1)] + bound.weight(low);
            if cost_sums[s] <= budget + TOLERANCE {
                optimum = optimum.max(weight_sums[s]);
            }
        }
        report.checks += 1;
        let ghat_value = bound.evaluate(&entry.set);
        let threshold = factor * optimum;
        if ghat_value < threshold - TOLERANCE {
            report.violations.push(SurrogateStepViolation {
                t: entry.t,
                ghat_value,
                threshold,
            });
        }
        anchor = entry.set.clone();
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{solve_em, SolverConfig};
    use crate::testutil::{coverage_value, tiny_f, tiny_g};

    #[test]
    fn curvature_of_modular_is_zero() {
        let g = Oracle::modular(vec![3.0, 1.0, 2.0]);
        let c = curvature(&g).unwrap();
        assert_eq!(c.value, 0.0);
        assert!(c.excluded.is_empty());
    }

    #[test]
    fn curvature_of_tiny_is_one() {
        // Element 1 is fully redundant given {0, 2}.
        let c = curvature(&tiny_g()).unwrap();
        assert_eq!(c.value, 1.0);
        assert!(c.excluded.is_empty());
    }

    #[test]
    fn disjoint_coverage_is_modular() {
        let g = coverage_value(vec![vec![0], vec![1], vec![2]], vec![4.0, 5.0, 6.0]);
        assert_eq!(curvature(&g).unwrap().value, 0.0);
    }

    #[test]
    fn zero_singletons_are_excluded() {
        let g = coverage_value(vec![vec![0], vec![1]], vec![0.0, 5.0]);
        let c = curvature(&g).unwrap();
        assert_eq!(c.excluded, vec![0]);
        assert_eq!(c.value, 0.0);
    }

    #[test]
    fn all_zero_singletons_error() {
        let g = coverage_value(vec![vec![0], vec![0]], vec![0.0]);
        assert!(matches!(curvature(&g), Err(Error::NoPositiveSingleton)));
    }

    #[test]
    fn certificate_on_tiny_is_vacuous_zero() {
        let cert = build_certificate(&tiny_g(), &tiny_f(), 3.0).unwrap();
        assert_eq!(cert.kappa_g, 1.0);
        assert_eq!(cert.delta_f, 2.0);
        assert_eq!(cert.ratio, 0.0);
        assert!(cert.ratio.is_sign_positive());
        assert!(cert.vacuous);
        assert_eq!(cert.to_string(), "kappa_g=1 delta_f=2 ratio=0 (vacuous)");
    }

    #[test]
    fn certificate_for_modular_objective() {
        let g = Oracle::modular(vec![2.0, 3.0]);
        let f = Oracle::modular(vec![1.0, 1.0]);
        let cert = build_certificate(&g, &f, 10.0).unwrap();
        assert_eq!(cert.ratio, 0.8);
        assert!(!cert.vacuous);
        assert!(cert.ratio <= 1.0);
    }

    #[test]
    fn tight_budgets_are_vacuous() {
        let g = Oracle::modular(vec![2.0, 3.0]);
        let f = Oracle::modular(vec![1.0, 1.0]);
        // Any budget below twice the largest singleton cost says nothing.
        let cert = build_certificate(&g, &f, 1.5).unwrap();
        assert!(cert.ratio < 0.0);
        assert!(cert.vacuous);
    }

    #[test]
    fn certificate_rejects_nonpositive_budget() {
        assert!(matches!(
            build_certificate(&tiny_g(), &tiny_f(), 0.0),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn curvature_bound_holds_on_clean_oracles() {
        assert!(verify_theorem2_exhaustive(&tiny_g()).unwrap().is_clean());
        let modular = Oracle::modular(vec![1.0, 4.0, 2.0]);
        let report = verify_theorem2_exhaustive(&modular).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.kappa, 0.0);
        assert_eq!(report.checks, 64);
    }

    #[test]
    fn curvature_bound_catches_supermodular_oracles() {
        let values = vec![0.0, 1.0, 1.0, 3.0];
        let h = Oracle::new(2, move |x| values[x.bits() as usize]);
        let report = verify_theorem2_exhaustive(&h).unwrap();
        assert!(!report.is_clean());
        assert!(report.kappa < 0.0);
    }

    #[test]
    fn sampled_curvature_bound_matches() {
        let g = tiny_g();
        let anchors: Vec<_> = (0u64..8).map(|b| SubsetMask::from_bits(3, b)).collect();
        let report = verify_theorem2_sampled(&g, &anchors, &anchors).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.checks, 64);
    }

    #[test]
    fn surrogate_step_guarantee_on_tiny() {
        let (g, f) = (tiny_g(), tiny_f());
        let empty = SubsetMask::empty(3);

        // Budget 5 leaves a positive factor 1 - 4/5.
        let run = solve_em(&g, &f, &SolverConfig::new(5.0)).unwrap();
        let report = verify_proposition3(&g, &f, 5.0, &empty, &run.trace).unwrap();
        assert!(report.is_clean());
        assert!(report.factor > 0.0);
        assert_eq!(report.checks, run.trace.len());
        assert_eq!(report.vacuous, 0);

        // Budget 3 makes the factor negative, so every step is vacuous.
        let run = solve_em(&g, &f, &SolverConfig::new(3.0)).unwrap();
        let report = verify_proposition3(&g, &f, 3.0, &empty, &run.trace).unwrap();
        assert!(report.is_clean());
        assert!(report.factor < 0.0);
        assert_eq!(report.checks, 0);
        assert_eq!(report.vacuous, run.trace.len());
    }

    #[test]
    fn surrogate_check_refuses_large_universes() {
        let g = Oracle::new(13, |x| x.len() as f64);
        let f = Oracle::new(13, |x| x.len() as f64);
        let empty = SubsetMask::empty(13);
        assert!(matches!(
            verify_proposition3(&g, &f, 5.0, &empty, &[]),
            Err(Error::UniverseTooLarge { .. })
        ));
    }
}
