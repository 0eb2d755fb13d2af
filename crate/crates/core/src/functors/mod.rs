//! Functors to simplicial sets, energy functors between finite sites, and
//! the checks tying them together.

mod axioms;
mod brane;
mod descent;
mod energy;
mod evaluable;
mod spec;

pub use axioms::{
    check_energy, check_exponential_lemma, check_preserves_covers, check_preserves_factorizations, check_preserves_hfp,
    check_preserves_hypercovers, check_preserves_pullbacks, check_reflects_covers, check_setdelta_equivariance,
    check_topology_transport, samples, AxiomReport, SampleConfig,
};
pub use brane::{compose, Brane};
pub use descent::{check_descent, DescentReport};
pub use energy::{AlgebraAction, EnergyFunctor};
pub use evaluable::{unit_group, EvaluableFunctor, NerveRule};
pub use spec::{EnergySpec, FunctorSpec, Resolver, ShapeSpec};
