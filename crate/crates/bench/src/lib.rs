//! Benchmark fixtures: seeded algebras, r-matrices and phase points shared by
//! the criterion benches.

use std::sync::Arc;

use calogero_core::phase::PhasePoint;
use calogero_core::sampling::{rng_for, sample_phase_point, SamplerConfig};
use calogero_core::{build_algebra, AlekseevMeinrenken, AlgebraDescriptor, DynamicalRMatrix};

/// Algebras the benches sweep over, smallest first.
pub const ALGEBRAS: [&str; 5] = ["sl2", "sl3", "su4", "sl2x3", "sl6"];

pub struct Fixture {
    pub name: &'static str,
    pub r: Arc<dyn DynamicalRMatrix>,
    /// Unconstrained sample.
    pub point: PhasePoint,
    /// Sample with `ξ_K = 0`.
    pub constrained: PhasePoint,
}

impl Fixture {
    pub fn new(name: &'static str) -> Self {
        let desc: AlgebraDescriptor = name.parse().expect("catalog name");
        let inst = Arc::new(build_algebra(&desc).expect("catalog algebra"));
        let r: Arc<dyn DynamicalRMatrix> = Arc::new(AlekseevMeinrenken::new(inst));
        let cfg = SamplerConfig::default();
        let point =
            sample_phase_point(r.as_ref(), &cfg, false, &mut rng_for(7, 0, 0)).expect("sample");
        let constrained =
            sample_phase_point(r.as_ref(), &cfg, true, &mut rng_for(7, 0, 1)).expect("sample");
        Fixture {
            name,
            r,
            point,
            constrained,
        }
    }

    pub fn dim(&self) -> usize {
        self.r.instance().dim()
    }
}

pub fn fixtures() -> Vec<Fixture> {
    ALGEBRAS.iter().map(|n| Fixture::new(n)).collect()
}
