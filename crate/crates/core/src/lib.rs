//! Exact-arithmetic invariants of coherent sheaves on cycles and chains
//! of projective lines: Hilbert and K-classes, the induced action of the
//! standard derived equivalences, orbit reduction of moduli, stability
//! and Jordan-Holder data for depth-one sheaves, and moduli points of
//! semistable degree-zero families. No floating point anywhere.

pub mod curves;
pub mod error;
pub mod invariants;
pub mod json;
pub mod linalg;
pub mod moduli;
pub mod reduction;
pub mod selftest;
pub mod sheaves;
pub mod transforms;

pub use curves::{Arc, ChainCurve, ChainMap, Curve, CurvePoint, CycleCurve};
pub use error::Error;
pub use invariants::{
    ChainLineBundle, CycleLineBundle, HilbertClass, KClass, LineBundle, Multidegree, Slope,
};
pub use moduli::{ModuliEntry, ModuliPointE1, StableLocusDescription};
pub use reduction::{OrbitState, ReductionResult};
pub use sheaves::{IndecomposableSheaf, JHFactor, SheafDescriptor, StabilityVerdict};
pub use transforms::{TransformSymbol, WitIndex};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
