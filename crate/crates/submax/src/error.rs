use std::fmt;
use std::io;
use std::path::PathBuf;

/// Errors produced by solvers, bound constructors, verifiers, and instance I/O.
#[derive(Debug)]
pub enum Error {
    /// An exhaustive routine was asked to enumerate more subsets than its cap allows.
    UniverseTooLarge { n: usize, limit: usize },
    /// A negative knapsack budget.
    InvalidBudget(f64),
    /// The initial set already violates the constraint.
    InfeasibleInitial { f_value: f64, budget: f64 },
    /// A variational subset that is not contained in the anchor set.
    ThetaOutsideAnchor,
    /// A variational superset that does not contain the anchor set.
    PsiMissingAnchor,
    /// An oracle broke a promised property (submodularity, monotonicity, or
    /// normalization) badly enough to produce an impossible quantity.
    ContractBreach(String),
    /// Curvature is undefined: every singleton has zero value.
    NoPositiveSingleton,
    /// A malformed argument (empty range, zero iteration cap, and so on).
    InvalidParameters(String),
    /// An instance failed structural validation.
    InvalidInstance(String),
    /// Filesystem failure while reading or writing an instance.
    Io { path: PathBuf, source: io::Error },
    /// Malformed JSON in an instance file.
    Parse { path: PathBuf, source: serde_json::Error },
}

impl fmt::Display for Error {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UniverseTooLarge { n, limit } => {
                write!(out, "ground set of size {n} exceeds the enumeration cap of {limit}")
            }
            Error::InvalidBudget(b) => write!(out, "budget must be nonnegative, got {b}"),
            Error::InfeasibleInitial { f_value, budget } => write!(
                out,
                "initial set is infeasible: f = {f_value} exceeds budget {budget}"
            ),
            Error::ThetaOutsideAnchor => {
                write!(out, "variational subset must be contained in the anchor set")
            }
            Error::PsiMissingAnchor => {
                write!(out, "variational superset must contain the anchor set")
            }
            Error::ContractBreach(what) => write!(out, "oracle contract breach: {what}"),
            Error::NoPositiveSingleton => {
                write!(out, "curvature is undefined: every singleton has zero value")
            }
            Error::InvalidParameters(what) => write!(out, "invalid parameters: {what}"),
            Error::InvalidInstance(what) => write!(out, "invalid instance: {what}"),
            Error::Io { path, source } => {
                write!(out, "cannot access {}: {source}", path.display())
            }
            Error::Parse { path, source } => {
                write!(out, "cannot parse {}: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            Error::Parse { source, .. } => Some(source),
            _ => None,
        }
    }
}
