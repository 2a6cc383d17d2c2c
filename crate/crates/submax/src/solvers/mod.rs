//! Solvers for maximizing monotone submodular `g` subject to the submodular
//! knapsack `f(X) <= b`.
//!
//! The variational solvers alternate two moves from the current iterate:
//! rebuild the modular bounds anchored there, then maximize the surrogate by
//! sorting elements on gain-to-cost ratio and keeping the longest prefix
//! whose cumulative cost fits the budget. The EM variant first estimates a
//! variational subset that discounts costs of elements it expects to keep;
//! the simplified variant (SEM) always prices against the empty set.
//! Iteration stops once the surrogate objective no longer strictly
//! improves, which keeps the true objective strictly increasing across
//! accepted iterates.
//!
//! Two baselines complete the set: cost-aware greedy on true marginal
//! gains, and exact enumeration for small ground sets.

mod steps;

pub use steps::{e_step, m_step};
pub(crate) use steps::m_step_costs;

use crate::analysis::ApproximationCertificate;
use crate::bounds::{modular_lower_bound, PermutationChain};
use crate::error::Error;
use crate::setfn::{Oracle, SubsetMask};
use crate::TOLERANCE;

/// Shared solver settings.
///
/// Ties in the ratio sort are always broken by ascending element index;
/// the rule is fixed, not configurable, so results are reproducible.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Knapsack budget `b`; must be nonnegative.
    pub budget: f64,
    /// Starting set; defaults to empty.
    pub initial: Option<SubsetMask>,
    /// Iteration cap for the variational solvers; must be at least 1.
    pub max_iterations: usize,
    /// Re-check each accepted iterate against the true `f` and drop
    /// lowest-ratio elements until feasible. The prefix rule alone bounds
    /// only the surrogate cost.
    pub strict_feasibility_repair: bool,
}

impl SolverConfig {
    pub fn new(budget: f64) -> Self {
        SolverConfig {
            budget,
            initial: None,
            max_iterations: 50,
            strict_feasibility_repair: true,
        }
    }

    pub fn with_initial(mut self, x0: SubsetMask) -> Self {
        self.initial = Some(x0);
        self
    }

    pub fn with_max_iterations(mut self, cap: usize) -> Self {
        self.max_iterations = cap;
        self
    }

    pub fn without_repair(mut self) -> Self {
        self.strict_feasibility_repair = false;
        self
    }
}

/// One accepted iterate of a variational solver.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    /// Iteration index, starting at 1 for the first accepted update.
    pub t: usize,
    /// The iterate itself.
    pub set: SubsetMask,
    pub g_value: f64,
    pub f_value: f64,
    /// Variational subset chosen by the estimation step (empty for SEM).
    pub theta_hat: SubsetMask,
    /// Tentative set from the estimation step (empty for SEM).
    pub x_hat: SubsetMask,
    /// Surrogate objective of this iterate under the previous anchor.
    pub ghat_value: f64,
}

/// Outcome of a solver run.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// Best iterate encountered, by true objective value.
    pub solution: SubsetMask,
    pub g_value: f64,
    pub f_value: f64,
    /// Accepted iterates in order; empty for greedy and exact.
    pub trace: Vec<IterationTrace>,
    /// Accepted iterations (variational), elements added (greedy), or 0.
    pub iterations: usize,
    /// Whether the run stopped on its own rather than at the iteration cap.
    pub converged: bool,
    /// Distinct oracle evaluations of `g` and `f` during the run.
    pub oracle_calls: u64,
    /// Elements dropped by feasibility repair across accepted iterations.
    pub repairs: usize,
    /// Attached on demand; solvers leave this unset.
    pub certificate: Option<ApproximationCertificate>,
}

/// The full variational solver: estimation step, then maximization step,
/// repeated until the surrogate stops improving.
pub fn solve_em(g: &Oracle, f: &Oracle, cfg: &SolverConfig) -> Result<SolveResult, Error> {
    solve_variational(g, f, cfg, true)
}

/// The simplified variational solver: the estimation step is skipped and
/// the variational subset is pinned to the empty set.
pub fn solve_sem(g: &Oracle, f: &Oracle, cfg: &SolverConfig) -> Result<SolveResult, Error> {
    solve_variational(g, f, cfg, false)
}

fn solve_variational(
    g: &Oracle,
    f: &Oracle,
    cfg: &SolverConfig,
    use_e_step: bool,
) -> Result<SolveResult, Error> {
    let n = validate_pair(g, f)?;
    validate_budget(cfg.budget)?;
    if cfg.max_iterations == 0 {
        return Err(Error::InvalidParameters("max_iterations must be at least 1".into()));
    }
    let x0 = initial_set(cfg, n)?;
    let calls_before = g.call_count() + f.call_count();

    let f0 = f.evaluate(&x0);
    if f0 > cfg.budget + TOLERANCE {
        return Err(Error::InfeasibleInitial { f_value: f0, budget: cfg.budget });
    }

    let mut current = x0;
    let mut best_set = current.clone();
    let mut best_g = g.evaluate(&current);
    let mut best_f = f0;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut repairs = 0;

    for _ in 0..cfg.max_iterations {
        let chain = PermutationChain::from_anchor(&current);
        let bound = modular_lower_bound(g, &chain)?;
        let (x_hat, theta_hat) = if use_e_step {
            e_step(&bound, f, &current, cfg.budget)
        } else {
            (SubsetMask::empty(n), SubsetMask::empty(n))
        };
        let (candidate, dropped) = m_step(
            &bound,
            f,
            &current,
            &theta_hat,
            cfg.budget,
            cfg.strict_feasibility_repair,
        );
        let ghat_candidate = bound.evaluate(&candidate);
        if ghat_candidate <= bound.evaluate(&current) {
            converged = true;
            break;
        }
        repairs += dropped;
        current = candidate;
        let g_value = g.evaluate(&current);
        let f_value = f.evaluate(&current);
        trace.push(IterationTrace {
            t: trace.len() + 1,
            set: current.clone(),
            g_value,
            f_value,
            theta_hat,
            x_hat,
            ghat_value: ghat_candidate,
        });
        if g_value > best_g {
            best_set = current.clone();
            best_g = g_value;
            best_f = f_value;
        }
    }

    Ok(SolveResult {
        solution: best_set,
        g_value: best_g,
        f_value: best_f,
        iterations: trace.len(),
        converged,
        trace,
        oracle_calls: g.call_count() + f.call_count() - calls_before,
        repairs,
        certificate: None,
    })
}

/// Cost-aware greedy on true oracles: repeatedly add the feasible element
/// of largest positive marginal gain, ties to the smallest index.
pub fn solve_greedy(g: &Oracle, f: &Oracle, cfg: &SolverConfig) -> Result<SolveResult, Error> {
    let n = validate_pair(g, f)?;
    validate_budget(cfg.budget)?;
    let x0 = initial_set(cfg, n)?;
    let calls_before = g.call_count() + f.call_count();

    let f0 = f.evaluate(&x0);
    if f0 > cfg.budget + TOLERANCE {
        return Err(Error::InfeasibleInitial { f_value: f0, budget: cfg.budget });
    }

    let mut current = x0;
    let mut g_current = g.evaluate(&current);
    let mut added = 0;
    loop {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if current.contains(j) {
                continue;
            }
            let with_j = current.with(j);
            if f.evaluate(&with_j) > cfg.budget + TOLERANCE {
                continue;
            }
            let gain = g.evaluate(&with_j) - g_current;
            if gain > 0.0 && best.map_or(true, |(_, best_gain)| gain > best_gain) {
                best = Some((j, gain));
            }
        }
        match best {
            Some((j, gain)) => {
                current.insert(j);
                g_current += gain;
                added += 1;
            }
            None => break,
        }
    }

    let g_value = g.evaluate(&current);
    let f_value = f.evaluate(&current);
    Ok(SolveResult {
        solution: current,
        g_value,
        f_value,
        trace: Vec::new(),
        iterations: added,
        converged: true,
        oracle_calls: g.call_count() + f.call_count() - calls_before,
        repairs: 0,
        certificate: None,
    })
}

/// Exhaustive enumeration of all subsets; the correctness oracle for small
/// ground sets. Ties on the objective go to the numerically smallest mask.
pub fn solve_exact(g: &Oracle, f: &Oracle, cfg: &SolverConfig) -> Result<SolveResult, Error> {
    let n = validate_pair(g, f)?;
    if n > 25 {
        return Err(Error::UniverseTooLarge { n, limit: 25 });
    }
    validate_budget(cfg.budget)?;
    let calls_before = g.call_count() + f.call_count();

    let mut best: Option<(SubsetMask, f64, f64)> = None;
    for bits in 0u64..(1u64 << n) {
        let x = SubsetMask::from_bits(n, bits);
        let f_value = f.evaluate_uncached(&x);
        if f_value > cfg.budget + TOLERANCE {
            continue;
        }
        let g_value = g.evaluate_uncached(&x);
        if best.as_ref().map_or(true, |&(_, best_g, _)| g_value > best_g) {
            best = Some((x, g_value, f_value));
        }
    }
    let (solution, g_value, f_value) = best.ok_or(Error::InfeasibleInitial {
        f_value: f.evaluate(&SubsetMask::empty(n)),
        budget: cfg.budget,
    })?;

    Ok(SolveResult {
        solution,
        g_value,
        f_value,
        trace: Vec::new(),
        iterations: 0,
        converged: true,
        oracle_calls: g.call_count() + f.call_count() - calls_before,
        repairs: 0,
        certificate: None,
    })
}

fn validate_pair(g: &Oracle, f: &Oracle) -> Result<usize, Error> {
    if g.universe() != f.universe() {
        return Err(Error::InvalidParameters(format!(
            "objective and constraint universes differ: {} vs {}",
            g.universe(),
            f.universe()
        )));
    }
    Ok(g.universe())
}

fn validate_budget(budget: f64) -> Result<(), Error> {
    if !budget.is_finite() || budget < 0.0 {
        return Err(Error::InvalidBudget(budget));
    }
    Ok(())
}

fn initial_set(cfg: &SolverConfig, n: usize) -> Result<SubsetMask, Error> {
    match &cfg.initial {
        None => Ok(SubsetMask::empty(n)),
        Some(x0) if x0.universe() == n => Ok(x0.clone()),
        Some(x0) => Err(Error::InvalidParameters(format!(
            "initial set universe {} does not match oracles ({n})",
            x0.universe()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{coverage_count, coverage_value, mask3, tiny_f, tiny_g};

    #[test]
    fn em_finds_the_b3_optimum() {
        let (g, f) = (tiny_g(), tiny_f());
        let result = solve_em(&g, &f, &SolverConfig::new(3.0)).unwrap();
        assert_eq!(result.solution, mask3(&[0, 1]));
        assert_eq!(result.g_value, 60.0);
        assert_eq!(result.f_value, 3.0);
        assert!(result.converged);
        assert_eq!(result.iterations, 2);
        let sets: Vec<_> = result.trace.iter().map(|e| e.set.clone()).collect();
        assert_eq!(sets, vec![mask3(&[0]), mask3(&[0, 1])]);
        assert_eq!(result.trace[0].g_value, 30.0);
        assert_eq!(result.trace[1].g_value, 60.0);
        assert_eq!(result.trace[1].theta_hat, mask3(&[0]));
        assert_eq!(result.repairs, 0);
        assert!(result.oracle_calls > 0);
    }

    #[test]
    fn em_at_b2_settles_below_the_optimum() {
        let (g, f) = (tiny_g(), tiny_f());
        let result = solve_em(&g, &f, &SolverConfig::new(2.0)).unwrap();
        assert_eq!(result.solution, mask3(&[0]));
        assert_eq!(result.g_value, 30.0);
        // The optimum at this budget is 50 via element 1; the surrogate
        // cannot see it from the anchor it reaches.
        let exact = solve_exact(&g, &f, &SolverConfig::new(2.0)).unwrap();
        assert_eq!(exact.g_value, 50.0);
    }

    #[test]
    fn zero_budget_returns_empty() {
        let (g, f) = (tiny_g(), tiny_f());
        for solve in [solve_em, solve_sem, solve_greedy, solve_exact] {
            let result = solve(&g, &f, &SolverConfig::new(0.0)).unwrap();
            assert!(result.solution.is_empty());
            assert_eq!(result.g_value, 0.0);
        }
    }

    #[test]
    fn sem_matches_em_less_aggressive_pricing() {
        let (g, f) = (tiny_g(), tiny_f());
        // Without the estimation step, element 1 keeps its full singleton
        // cost relative to the empty variational set, so SEM cannot extend
        // {0} within budget 3 and stops there.
        let result = solve_sem(&g, &f, &SolverConfig::new(3.0)).unwrap();
        assert_eq!(result.solution, mask3(&[0]));
        assert_eq!(result.g_value, 30.0);
        assert!(result.converged);

        let result = solve_sem(&g, &f, &SolverConfig::new(2.0)).unwrap();
        assert_eq!(result.solution, mask3(&[0]));
        assert_eq!(result.g_value, 30.0);
    }

    #[test]
    fn sem_trace_theta_is_always_empty() {
        let (g, f) = (tiny_g(), tiny_f());
        let result = solve_sem(&g, &f, &SolverConfig::new(3.0)).unwrap();
        assert!(result.trace.iter().all(|e| e.theta_hat.is_empty()));
    }

    #[test]
    fn first_iterations_of_em_and_sem_agree_from_empty() {
        let (g, f) = (tiny_g(), tiny_f());
        for budget in [1.0, 2.0, 3.0] {
            let em = solve_em(&g, &f, &SolverConfig::new(budget)).unwrap();
            let sem = solve_sem(&g, &f, &SolverConfig::new(budget)).unwrap();
            match (em.trace.first(), sem.trace.first()) {
                (Some(a), Some(b)) => {
                    assert_eq!(a.set, b.set);
                    assert_eq!(a.g_value, b.g_value);
                    assert_eq!(a.f_value, b.f_value);
                    assert_eq!(a.ghat_value, b.ghat_value);
                    assert_eq!(a.theta_hat, b.theta_hat);
                }
                (None, None) => {}
                _ => panic!("one solver moved and the other did not at b={budget}"),
            }
        }
    }

    #[test]
    fn greedy_known_runs() {
        let (g, f) = (tiny_g(), tiny_f());
        let result = solve_greedy(&g, &f, &SolverConfig::new(2.0)).unwrap();
        assert_eq!(result.solution, mask3(&[1]));
        assert_eq!(result.g_value, 50.0);
        assert_eq!(result.iterations, 1);

        let result = solve_greedy(&g, &f, &SolverConfig::new(3.0)).unwrap();
        assert_eq!(result.solution, mask3(&[0, 1]));
        assert_eq!(result.g_value, 60.0);
        assert_eq!(result.iterations, 2);
    }

    #[test]
    fn exact_breaks_ties_toward_smaller_masks() {
        let (g, f) = (tiny_g(), tiny_f());
        // {1} and {1, 2} both reach 50 at budget 2.
        let result = solve_exact(&g, &f, &SolverConfig::new(2.0)).unwrap();
        assert_eq!(result.solution, mask3(&[1]));
        assert_eq!(result.g_value, 50.0);

        let result = solve_exact(&g, &f, &SolverConfig::new(3.0)).unwrap();
        assert_eq!(result.g_value, 60.0);
        assert_eq!(result.solution, mask3(&[0, 1]));
    }

    #[test]
    fn exact_returns_full_set_when_it_is_the_unique_optimum() {
        // Disjoint coverage, so every item strictly helps.
        let g = coverage_value(vec![vec![0], vec![1], vec![2]], vec![1.0, 2.0, 3.0]);
        let f = coverage_count(vec![vec![0], vec![1], vec![2]], 3);
        let result = solve_exact(&g, &f, &SolverConfig::new(3.0)).unwrap();
        assert_eq!(result.solution, SubsetMask::full(3));
        assert_eq!(result.g_value, 6.0);
    }

    #[test]
    fn infeasible_initial_set_is_rejected() {
        let (g, f) = (tiny_g(), tiny_f());
        let cfg = SolverConfig::new(1.0).with_initial(mask3(&[0, 1]));
        for solve in [solve_em, solve_sem, solve_greedy] {
            match solve(&g, &f, &cfg) {
                Err(Error::InfeasibleInitial { f_value, budget }) => {
                    assert_eq!(f_value, 3.0);
                    assert_eq!(budget, 1.0);
                }
                other => panic!("expected infeasibility error, got {other:?}"),
            }
        }
    }

    #[test]
    fn feasible_initial_set_is_honored() {
        let (g, f) = (tiny_g(), tiny_f());
        let cfg = SolverConfig::new(3.0).with_initial(mask3(&[2]));
        let result = solve_em(&g, &f, &cfg).unwrap();
        assert!(result.f_value <= 3.0 + TOLERANCE);
        assert!(result.g_value >= g.evaluate(&mask3(&[2])));
    }

    #[test]
    fn parameter_validation() {
        let (g, f) = (tiny_g(), tiny_f());
        assert!(matches!(
            solve_em(&g, &f, &SolverConfig::new(-1.0)),
            Err(Error::InvalidBudget(_))
        ));
        assert!(matches!(
            solve_em(&g, &f, &SolverConfig::new(1.0).with_max_iterations(0)),
            Err(Error::InvalidParameters(_))
        ));
        let big_g = Oracle::new(26, |x| x.len() as f64);
        let big_f = Oracle::new(26, |x| x.len() as f64);
        assert!(matches!(
            solve_exact(&big_g, &big_f, &SolverConfig::new(1.0)),
            Err(Error::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn iteration_cap_marks_unconverged() {
        let (g, f) = (tiny_g(), tiny_f());
        let result = solve_em(&g, &f, &SolverConfig::new(3.0).with_max_iterations(1)).unwrap();
        assert_eq!(result.iterations, 1);
        assert!(!result.converged);
    }
}
