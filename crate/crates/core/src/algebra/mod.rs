//! Finite commutative rings, modules, square-zero extensions and dual numbers.

pub mod builders;
mod hom;
mod module;
mod ring;
mod spec;
mod sqz;

pub use hom::{enumerate_homs, generating_set, RingHom};
pub use module::FiniteModule;
pub use ring::FiniteCommRing;
pub use spec::{ModuleKind, ModuleSpec, RingSpec};
pub use sqz::{dual_numbers, square_zero_extend, DualNumbers, SquareZeroExtension};
