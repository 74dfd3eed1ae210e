//! Dynamical r-matrices on reductive Lie algebras and the spin Calogero
//! models built from them.
//!
//! The crate is organised bottom-up:
//!
//! - [`lie`]: self-dual Lie algebras from a small catalog, subalgebra chains
//!   `K ⊂ F ⊆ g`, automorphisms, Cartan diagonalisation and Weyl groups.
//! - [`rmatrix`]: the Alekseev–Meinrenken r-matrix, its non-Abelian extension
//!   and Dirac reduction, plus the CDYBE and equivariance residuals.
//! - [`phase`]: the quasi-Lax operator, momentum map, Lie–Poisson brackets and
//!   the bracket identity residual.
//! - [`dynamics`]: constrained equations of motion, RK4 integration and
//!   conservation monitors.
//! - [`reduction`]: the map between the Abelian and non-Abelian constructions.
//!
//! Elements of `g` are coefficient vectors in the adapted basis of the algebra
//! and operators on `g` are dense matrices acting on those vectors.

pub mod dynamics;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod phase;
pub mod reduction;
pub mod rmatrix;
pub mod sampling;

pub use error::{Error, Result};
pub use lie::{
    build_algebra, diagonalize_to_cartan, weyl_act, weyl_group, AlgebraDescriptor, Automorphism,
    AutomorphismKind, Diagonalization, FamilyName, Instance, LieAlgebra, SubalgebraChain,
    WeylElement,
};
pub use rmatrix::{
    AlekseevMeinrenken, DiracReduction, DynamicalRMatrix, Jet, Kind, NonAbelianExtension, Perturbed,
};

/// Coefficient vector of an element of `g` in the adapted basis.
pub type Element = nalgebra::DVector<f64>;
/// Dense operator on coefficient vectors.
pub type Operator = nalgebra::DMatrix<f64>;
/// Complex matrix in the defining representation.
pub type CMatrix = nalgebra::DMatrix<nalgebra::Complex<f64>>;
