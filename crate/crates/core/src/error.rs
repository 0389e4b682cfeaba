//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("gluing constant must be nonzero")]
    ZeroGluing,
    #[error("invalid sheaf class ({r}, {d})")]
    InvalidClass { r: i64, d: i64 },
    #[error("torsion states have no successors")]
    TorsionState,
    #[error("twist symbols act on K-classes, not on total classes")]
    TwistInTotalSequence,
    #[error("operation requires Euler characteristic 0, found {chi}")]
    NonzeroEuler { chi: i64 },
    #[error("operation requires a cycle with at least two components")]
    SingleComponent,
    #[error("summand is not semistable; it has no Jordan-Holder data")]
    NotSemistable,
    #[error("multirank {0:?} is not balanced")]
    UnbalancedMultirank(Vec<i64>),
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("descriptor must contain at least one summand")]
    EmptyDescriptor,
    #[error("multidegree is fixed by a nontrivial shift; not an indecomposable datum")]
    PeriodicMultidegree,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}
