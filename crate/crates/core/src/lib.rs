//! Finite, exhaustively checkable models of energy functors between sites,
//! derivation spaces as homotopy fibers of square-zero evaluations, tangent
//! evaluation on dual numbers, and fuzzy statistical entropy.

pub mod algebra;
pub mod category;
pub mod cli;
pub mod config;
pub mod deformation;
pub mod entropy;
pub mod simplicial;
pub mod site;
pub mod error;
pub mod functors;
pub mod report;

pub use config::Limits;
pub use error::{Error, Result};
