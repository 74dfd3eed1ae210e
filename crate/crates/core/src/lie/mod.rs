//! Self-dual Lie algebras, subalgebra chains, automorphisms and the
//! adjoint calculus the rest of the crate builds on.

mod algebra;
mod automorphism;
mod cartan;
mod catalog;
mod chain;
mod weyl;

pub use algebra::LieAlgebra;
pub use automorphism::{Automorphism, AutomorphismKind};
pub use cartan::{diagonalize_to_cartan, Diagonalization, REGULARITY_GAP};
pub use catalog::{build_algebra, AlgebraDescriptor, FamilyName, Instance, MAX_COPIES, MAX_RANK_N};
pub use chain::{ChainReport, SubalgebraChain};
pub use weyl::{weyl_act, weyl_group, weyl_order, WeylElement};
