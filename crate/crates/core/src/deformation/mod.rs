//! Derivation spaces as homotopy fibers of square-zero evaluations, tangent
//! evaluation on dual numbers, and the uncertainty product.

mod derivations;
mod tangent;
mod uncertainty;

pub use derivations::{delta_sampler, derivations, DeltaSample, DerivationKind, DerivationSpace, DerivationSummary, PointedEvaluation};
pub use tangent::{relative_derivations, tangent, TangentEvaluation};
pub use uncertainty::{product_verdict, uncertainty_product, FactorReport, UncertaintyVerdict};
