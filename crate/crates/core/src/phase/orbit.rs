use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_len, Result};
use crate::lie::Instance;
use crate::phase::invariant_functions;
use crate::Element;

/// A coadjoint orbit through `xi0`, with its Casimir values `tr((cξ)^k)`
/// for `k = 2..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSeed {
    pub xi0: Element,
    pub casimirs: Vec<f64>,
}

impl OrbitSeed {
    pub fn new(inst: &Instance, xi0: Element) -> Result<Self> {
        check_len(&xi0, inst.dim())?;
        let casimirs = invariant_functions(inst, &xi0, inst.algebra.block_size())?;
        Ok(OrbitSeed { xi0, casimirs })
    }

    /// `e^{ad_X} ξ₀` for a random direction `X` of norm at most one.
    pub fn sample<R: Rng + ?Sized>(&self, inst: &Instance, rng: &mut R) -> Element {
        let dim = inst.dim();
        let dir = Element::from_fn(dim, |_, _| StandardNormal.sample(rng));
        let radius: f64 = rng.random();
        let x = dir.normalize() * radius;
        inst.algebra.exp_ad(&x) * &self.xi0
    }

    /// Largest deviation of the Casimirs at `xi` from those of the seed.
    pub fn casimir_drift(&self, inst: &Instance, xi: &Element) -> Result<f64> {
        let now = invariant_functions(inst, xi, inst.algebra.block_size())?;
        Ok(now
            .iter()
            .zip(&self.casimirs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}
