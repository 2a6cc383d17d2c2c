//! Maximization of a monotone submodular function under a submodular
//! knapsack constraint: find `X` maximizing `g(X)` subject to `f(X) <= b`,
//! where both `g` and `f` are monotone submodular with `f` normalized
//! (`f(empty) = 0`).
//!
//! The problem is NP-hard even to approximate in general, so the crate
//! centers on a variational strategy: at the current iterate the objective
//! is replaced by a tight modular lower bound (built from marginal gains
//! along a permutation chain) and the constraint by a modular upper bound
//! parameterized by a variational subset. Maximizing the surrogate is a
//! classic modular knapsack handled by a ratio greedy rule, and alternating
//! the two bound updates yields an EM-style ascent whose iterates strictly
//! improve `g` while staying feasible.
//!
//! Modules:
//!
//! * [`setfn`]: ground sets, subset bitmasks, memoizing oracles, and
//!   exhaustive or sampled submodularity/monotonicity checkers.
//! * [`bounds`]: permutation-chain modular lower bounds and the modular
//!   upper bounds on the constraint.
//! * [`solvers`]: the EM and simplified (SEM) variational solvers plus
//!   cost-benefit greedy and exact enumeration baselines.
//! * [`analysis`]: curvature, a priori approximation certificates, and
//!   numerical verifiers for the supporting guarantees.
//! * [`instances`]: weighted coverage test instances, generation, and
//!   JSON serialization.

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod instances;
pub mod setfn;
pub mod solvers;
#[cfg(test)]
pub(crate) mod testutil;

pub use analysis::{ApproximationCertificate, Curvature};
pub use bounds::{ModularBound, PermutationChain};
pub use error::Error;
pub use instances::{CoverageInstance, GeneratorParams};
pub use setfn::{GroundSet, Oracle, SubsetMask};
pub use solvers::{IterationTrace, SolveResult, SolverConfig};

/// Absolute tolerance for floating point comparisons of oracle values.
pub const TOLERANCE: f64 = 1e-9;
