use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::lie::Instance;
use crate::rmatrix::{DynamicalRMatrix, Kind};
use crate::{Element, Operator};

/// Negative control: `R(q) + ε u ⊗ B(v, ·)` with constant `u, v ∈ K⊥`.
///
/// Derivatives are those of the wrapped r-matrix since the perturbation is
/// constant.
#[derive(Clone)]
pub struct Perturbed {
    inner: Arc<dyn DynamicalRMatrix>,
    delta: Operator,
}

impl Perturbed {
    pub fn new(inner: Arc<dyn DynamicalRMatrix>, eps: f64, u: &Element, v: &Element) -> Self {
        let g = inner.instance().algebra.gram();
        let delta = u * (g * v).transpose() * eps;
        Perturbed { inner, delta }
    }

    /// Rank-one perturbation with unit-norm `u, v ∈ K⊥` drawn from `seed`.
    pub fn rank_one(inner: Arc<dyn DynamicalRMatrix>, eps: f64, seed: u64) -> Self {
        let inst = inner.instance().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || {
            let mut x = Element::zeros(inst.dim());
            for i in inst.chain.kperp() {
                x[i] = StandardNormal.sample(&mut rng);
            }
            x.normalize()
        };
        let (u, v) = (draw(), draw());
        Self::new(inner, eps, &u, &v)
    }

    /// `R(q) + ε ad_h` with a unit `h ∈ K` drawn from `seed`. The term is
    /// B-skew, commutes with `ad_K` and vanishes on `K`, so quasi-triangularity,
    /// compatibility and equivariance survive while the CDYBE does not.
    pub fn equivariant(inner: Arc<dyn DynamicalRMatrix>, eps: f64, seed: u64) -> Self {
        let inst = inner.instance().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut h = Element::zeros(inst.dim());
        for i in inst.chain.k() {
            h[i] = StandardNormal.sample(&mut rng);
        }
        let delta = inst.algebra.ad(&h.normalize()) * eps;
        Perturbed { inner, delta }
    }

    pub fn delta(&self) -> &Operator {
        &self.delta
    }
}

impl DynamicalRMatrix for Perturbed {
    fn instance(&self) -> &Arc<Instance> {
        self.inner.instance()
    }

    fn kind(&self) -> Kind {
        self.inner.kind()
    }

    fn evaluate(&self, q: &Element) -> Result<Operator> {
        Ok(self.inner.evaluate(q)? + &self.delta)
    }

    fn derivative(&self, q: &Element, v: &Element) -> Result<Operator> {
        self.inner.derivative(q, v)
    }

    fn condition(&self, q: &Element) -> Result<f64> {
        self.inner.condition(q)
    }

    fn jet(&self, q: &Element) -> Result<crate::rmatrix::Jet> {
        let mut jet = self.inner.jet(q)?;
        jet.value += &self.delta;
        Ok(jet)
    }
}
