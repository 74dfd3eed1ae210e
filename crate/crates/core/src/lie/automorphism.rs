use serde::{Deserialize, Serialize};

use crate::lie::{LieAlgebra, SubalgebraChain};
use crate::linalg::unit;
use crate::Operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AutomorphismKind {
    #[default]
    Identity,
    /// Cyclic shift of the identical simple factors of a product algebra.
    Cyclic,
}

impl std::fmt::Display for AutomorphismKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AutomorphismKind::Identity => f.write_str("identity"),
            AutomorphismKind::Cyclic => f.write_str("cyclic"),
        }
    }
}

/// Automorphism `θ` of `g`, stored as a matrix on coefficient vectors.
#[derive(Debug, Clone)]
pub struct Automorphism {
    kind: AutomorphismKind,
    theta: Operator,
    theta_inv: Operator,
}

impl Automorphism {
    pub fn identity(dim: usize) -> Self {
        Automorphism {
            kind: AutomorphismKind::Identity,
            theta: Operator::identity(dim, dim),
            theta_inv: Operator::identity(dim, dim),
        }
    }

    pub(crate) fn from_matrix(kind: AutomorphismKind, theta: Operator) -> Option<Self> {
        let theta_inv = theta.clone().try_inverse()?;
        Some(Automorphism {
            kind,
            theta,
            theta_inv,
        })
    }

    pub fn kind(&self) -> AutomorphismKind {
        self.kind
    }

    pub fn matrix(&self) -> &Operator {
        &self.theta
    }

    pub fn inverse(&self) -> &Operator {
        &self.theta_inv
    }

    /// Largest `|θ[X,Y] − [θX,θY]|` over basis pairs.
    pub fn homomorphism_residual(&self, alg: &LieAlgebra) -> f64 {
        let dim = alg.dim();
        let mut worst = 0.0_f64;
        for a in 0..dim {
            for b in 0..dim {
                let (x, y) = (unit(dim, a), unit(dim, b));
                let lhs = &self.theta * alg.commutator(&x, &y);
                let rhs = alg.commutator(&(&self.theta * &x), &(&self.theta * &y));
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }

    /// Largest `|B(θX,θY) − B(X,Y)|` over basis pairs.
    pub fn orthogonality_residual(&self, alg: &LieAlgebra) -> f64 {
        (self.theta.transpose() * alg.gram() * &self.theta - alg.gram()).amax()
    }

    pub fn fixes_k_residual(&self, chain: &SubalgebraChain) -> f64 {
        let dim = chain.dim();
        chain
            .k()
            .map(|i| (&self.theta * unit(dim, i) - unit(dim, i)).amax())
            .fold(0.0, f64::max)
    }
}
