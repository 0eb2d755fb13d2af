//! Truncated, levelwise finite simplicial sets and the homotopy-theoretic
//! operations built on them.

pub mod build;
mod fiber;
mod homology;
mod io;
mod map;
pub mod mapping;
mod set;
mod verdict;

pub use fiber::{homotopy_fiber, path_fiber, FiberBranch, HomotopyFiber};
pub use homology::{components, invariant_factors, pi0, reduced_homology, ChainComplexReport};
pub use io::{LevelFile, SimplicialSetFile};
pub use map::SimplicialMap;
pub use mapping::{cotensor, ex_k, ex_map, Cotensor, ExTower, MappingSpace};
pub use set::SimplicialSet;
pub use verdict::{collapse, contractibility, Certificate, HomotopyStatus, HomotopyVerdict};
