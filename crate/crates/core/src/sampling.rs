//! Seeded sampling of base points and phase points.
//!
//! Every sample draws from its own generator seeded by
//! [`derive_seed`]`(seed, stream, index)`, so a batch gives the same values in
//! any evaluation order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::Instance;
use crate::phase::PhasePoint;
use crate::rmatrix::{DynamicalRMatrix, Kind};
use crate::Element;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    /// Scale of the gaps between consecutive diagonal entries of `q`; each
    /// gap is uniform in `[0.3, 1.0] · q_box`.
    pub q_box: f64,
    /// Standard deviation of the Gaussian coefficients of `p` and `ξ`.
    pub scale: f64,
    /// Rejection threshold on [`DynamicalRMatrix::condition`].
    pub max_condition: f64,
    pub max_attempts: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            q_box: 1.0,
            scale: 1.0,
            max_condition: 10.0,
            max_attempts: 1000,
        }
    }
}

/// splitmix64 finaliser applied to a mix of the three inputs.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, stream, index))
}

/// Gaussian coefficients on the index range, zero elsewhere.
pub fn gaussian_in<R: Rng + ?Sized>(
    dim: usize,
    range: std::ops::Range<usize>,
    scale: f64,
    rng: &mut R,
) -> Element {
    let mut x = Element::zeros(dim);
    for i in range {
        let z: f64 = StandardNormal.sample(rng);
        x[i] = scale * z;
    }
    x
}

/// Random regular Cartan element: shuffled, centred diagonal with gaps
/// uniform in `[0.3, 1.0] · q_box`. Not checked against any domain.
pub fn random_cartan<R: Rng + ?Sized>(inst: &Instance, q_box: f64, rng: &mut R) -> Element {
    let n = inst.algebra.block_size();
    let mut diag = Vec::with_capacity(n);
    let mut acc = 0.0;
    diag.push(acc);
    for _ in 1..n {
        acc += q_box * rng.random_range(0.3..1.0);
        diag.push(acc);
    }
    let mean = acc / 2.0;
    diag.iter_mut().for_each(|d| *d -= mean);
    diag.shuffle(rng);
    let mean = diag.iter().sum::<f64>() / n as f64;
    diag.iter_mut().for_each(|d| *d -= mean);
    inst.cartan_from_diagonal(&diag)
}

/// Base point in the domain of `r`: a Cartan element for the Abelian kind, a
/// conjugate `e^{ad_Y} q` with `Y ∈ F`, `|Y| ≤ ½`, for the non-Abelian kind.
pub fn sample_base_point<R: Rng + ?Sized>(
    r: &dyn DynamicalRMatrix,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<Element> {
    let inst = r.instance();
    for _ in 0..cfg.max_attempts {
        let mut q = random_cartan(inst, cfg.q_box, rng);
        if r.kind() == Kind::Nonabelian {
            let y = gaussian_in(inst.dim(), inst.chain.f(), 1.0, rng);
            let radius: f64 = rng.random_range(0.0..0.5);
            q = inst.algebra.exp_ad(&(y.normalize() * radius)) * q;
        }
        match r.condition(&q) {
            Ok(c) if c <= cfg.max_condition => return Ok(q),
            Ok(_) => continue,
            Err(e) if e.is_domain() => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Domain(format!(
        "no base point with inverse norm ≤ {:.1e} after {} attempts",
        cfg.max_condition, cfg.max_attempts
    )))
}

/// Random phase point; with `constrained` the `K`-component of `ξ` is zero.
pub fn sample_phase_point<R: Rng + ?Sized>(
    r: &dyn DynamicalRMatrix,
    cfg: &SamplerConfig,
    constrained: bool,
    rng: &mut R,
) -> Result<PhasePoint> {
    let inst = r.instance();
    let dim = inst.dim();
    let q = sample_base_point(r, cfg, rng)?;
    let p = gaussian_in(dim, r.variables(), cfg.scale, rng);
    let mut xi = gaussian_in(dim, 0..dim, cfg.scale, rng);
    if constrained {
        for i in inst.chain.k() {
            xi[i] = 0.0;
        }
    }
    Ok(PhasePoint::new(q, p, xi))
}
