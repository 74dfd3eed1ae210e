mod common;

use calogero_core::linalg::unit;
use calogero_core::phase::{
    constrained_hamiltonian, first_class_residual, gauge_transform, hamiltonian,
    invariant_brackets, invariant_functions, lax_gradient, momentum_gradient, poisson_bracket,
    prop1_residual, prop1_via_cdybe, quasi_lax, Gradient, OrbitSeed, PhasePoint,
};
use calogero_core::rmatrix::Perturbed;
use calogero_core::sampling::{gaussian_in, rng_for, sample_phase_point, SamplerConfig};
use std::sync::Arc;

use calogero_core::{DynamicalRMatrix, Element, Instance, Kind, Operator};
use common::{am, instance, pair, CATALOG};

fn sample(r: &dyn DynamicalRMatrix, seed: u64, i: u64, constrained: bool) -> PhasePoint {
    sample_phase_point(
        r,
        &SamplerConfig::default(),
        constrained,
        &mut rng_for(seed, 0, i),
    )
    .unwrap()
}

#[test]
fn bracket_identity_holds_everywhere() {
    for name in CATALOG {
        let r = am(name);
        let worst = (0..100)
            .map(|i| {
                prop1_residual(r.as_ref(), &sample(r.as_ref(), 20, i, false))
                    .unwrap()
                    .amax()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 1e-9, "{name}: {worst:e}");
    }
}

#[test]
fn bracket_identity_on_the_constraint_surface() {
    let r = am("sl3");
    for i in 0..20 {
        let pt = sample(r.as_ref(), 21, i, true);
        assert!(prop1_residual(r.as_ref(), &pt).unwrap().amax() <= 1e-9);
    }
}

#[test]
fn bracket_identity_for_the_nonabelian_extension() {
    for name in ["sl2", "sl3", "sl2x3"] {
        let (_, ext) = pair(name);
        for i in 0..5 {
            let pt = sample(ext.as_ref(), 22, i, false);
            let res = prop1_residual(ext.as_ref(), &pt).unwrap().amax();
            assert!(res <= 1e-6, "{name}: {res:e}");
        }
    }
}

/// `R + ε P_{K⊥} ad_q P_{K⊥}`: still equivariant, no longer a solution.
struct Deformed {
    inner: Arc<dyn DynamicalRMatrix>,
    eps: f64,
}

impl Deformed {
    fn term(&self, v: &Element) -> Operator {
        let inst = self.inner.instance();
        let p = inst.chain.projector(inst.chain.kperp());
        &p * inst.algebra.ad(v) * &p * self.eps
    }
}

impl DynamicalRMatrix for Deformed {
    fn instance(&self) -> &Arc<Instance> {
        self.inner.instance()
    }
    fn kind(&self) -> Kind {
        Kind::Abelian
    }
    fn evaluate(&self, q: &Element) -> calogero_core::Result<Operator> {
        Ok(self.inner.evaluate(q)? + self.term(q))
    }
    fn derivative(&self, q: &Element, v: &Element) -> calogero_core::Result<Operator> {
        Ok(self.inner.derivative(q, v)? + self.term(v))
    }
    fn condition(&self, q: &Element) -> calogero_core::Result<f64> {
        self.inner.condition(q)
    }
}

#[test]
fn bracket_identity_equals_contracted_cdybe() {
    let r = Deformed {
        inner: am("sl3"),
        eps: 0.05,
    };
    let pt = sample(&r, 23, 0, false);
    let a = prop1_residual(&r, &pt).unwrap();
    let b = prop1_via_cdybe(&r, &pt).unwrap();
    assert!(a.amax() > 1e-3);
    let diff = (a - b).amax();
    assert!(diff < 1e-12, "{diff:e}");
}

#[test]
fn perturbation_breaks_the_bracket_identity() {
    for name in ["sl2", "sl3", "su3", "sl2x3"] {
        let r = Perturbed::rank_one(am(name), 1e-3, 2);
        let worst = (0..10)
            .map(|i| {
                prop1_residual(&r, &sample(&r, 24, i, false))
                    .unwrap()
                    .amax()
            })
            .fold(0.0, f64::max);
        assert!(worst > 1e-5, "{name}: {worst:e}");
    }
}

#[test]
fn lax_gradient_matches_finite_differences() {
    let r = am("sl3");
    let inst = r.instance().clone();
    let pt = sample(r.as_ref(), 25, 0, false);
    let u = gaussian_in(8, 0..8, 1.0, &mut rng_for(25, 1, 0));
    let jet = r.jet(&pt.q).unwrap();
    let grad = lax_gradient(&inst, r.variables(), &jet, &pt, &u);
    let f = |p: &PhasePoint| inst.algebra.form(&u, &quasi_lax(r.as_ref(), p).unwrap());
    let h = 1e-6;
    for i in 0..8 {
        let e = unit(8, i);
        let fd = |shift: &dyn Fn(&mut PhasePoint, f64)| {
            let mut a = pt.clone();
            let mut b = pt.clone();
            shift(&mut a, h);
            shift(&mut b, -h);
            (f(&a) - f(&b)) / (2.0 * h)
        };
        let g = inst.algebra.gram() * &e;
        // ξ directions are free in all of g
        let d_xi = fd(&|p, s| p.xi += &e * s);
        assert!((d_xi - grad.dxi.dot(&g)).abs() < 1e-7);
        if i < inst.rank() {
            let d_q = fd(&|p, s| p.q += &e * s);
            let d_p = fd(&|p, s| p.p += &e * s);
            assert!((d_q - grad.dq.dot(&g)).abs() < 1e-7);
            assert!((d_p - grad.dp.dot(&g)).abs() < 1e-7);
        }
    }
}

#[test]
fn canonical_pairs() {
    let inst = instance("sl3");
    // B-orthonormal basis of K: H₁/√2 and (H₁ + 2H₂)/√6
    let a = unit(8, 0) / 2f64.sqrt();
    let b = (unit(8, 0) + unit(8, 1) * 2.0) / 6f64.sqrt();
    let z = Element::zeros(8);
    let q_coord = |x: &Element| Gradient {
        dq: x.clone(),
        ..Gradient::zeros(8)
    };
    let p_coord = |x: &Element| Gradient {
        dp: x.clone(),
        ..Gradient::zeros(8)
    };
    for (i, x) in [&a, &b].into_iter().enumerate() {
        for (j, y) in [&a, &b].into_iter().enumerate() {
            let v = poisson_bracket(&inst, &z, &q_coord(x), &p_coord(y));
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-14);
        }
    }
    let g = Gradient {
        dq: a.clone(),
        dp: b.clone(),
        dxi: unit(8, 3),
    };
    assert_eq!(poisson_bracket(&inst, &unit(8, 4), &g, &g), 0.0);
}

#[test]
fn lie_poisson_jacobi() {
    // Coordinate functions are linear, so the cyclic sum is the Jacobi
    // identity of the bracket contracted with ξ plus the canonical part.
    let inst = instance("su3");
    let mut rng = rng_for(26, 0, 0);
    let xi = gaussian_in(8, 0..8, 1.0, &mut rng);
    let mut worst: f64 = 0.0;
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                let (ea, eb, ec) = (unit(8, a), unit(8, b), unit(8, c));
                let alg = &inst.algebra;
                // {{f_a, f_b}, f_c} with f_x(ξ) = B(x, ξ): {f_a, f_b} = f_[a,b]
                let term = |x: &Element, y: &Element, z: &Element| {
                    let inner = Gradient {
                        dxi: alg.commutator(x, y),
                        ..Gradient::zeros(8)
                    };
                    let outer = Gradient {
                        dxi: z.clone(),
                        ..Gradient::zeros(8)
                    };
                    poisson_bracket(&inst, &xi, &inner, &outer)
                };
                worst = worst
                    .max((term(&ea, &eb, &ec) + term(&eb, &ec, &ea) + term(&ec, &ea, &eb)).abs());
            }
        }
    }
    assert!(worst <= 1e-10, "{worst:e}");
}

#[test]
fn first_class_constraints() {
    let r = am("sl3");
    for i in 0..10 {
        let pt = sample(r.as_ref(), 27, i, false);
        assert!(
            first_class_residual(r.instance(), &pt, Kind::Abelian)
                .unwrap()
                .amax()
                <= 1e-10
        );
    }
    let (_, ext) = pair("sl2");
    for i in 0..10 {
        let pt = sample(ext.as_ref(), 28, i, false);
        assert!(
            first_class_residual(ext.instance(), &pt, Kind::Nonabelian)
                .unwrap()
                .amax()
                <= 1e-9
        );
    }
}

#[test]
fn momentum_components_commute_on_the_constraint_surface() {
    let inst = instance("sl2");
    let ln2 = std::f64::consts::LN_2;
    let big_p = unit(3, 0) - (unit(3, 1) + unit(3, 2)) / ln2;
    let pt = PhasePoint::new(unit(3, 0) * (ln2 / 2.0), big_p, unit(3, 1) - unit(3, 2));
    let grads: Vec<_> = (0..3)
        .map(|i| momentum_gradient(&inst, &pt, Kind::Nonabelian, &unit(3, i)))
        .collect();
    for a in &grads {
        for b in &grads {
            assert!(poisson_bracket(&inst, &pt.xi, a, b).abs() < 1e-14);
        }
    }
}

#[test]
fn hamiltonian_forms_agree_on_the_constraint_surface() {
    for name in CATALOG {
        let r = am(name);
        for i in 0..100 {
            let pt = sample(r.as_ref(), 29, i, true);
            let a = hamiltonian(r.as_ref(), &pt).unwrap();
            let b = constrained_hamiltonian(r.as_ref(), &pt).unwrap();
            assert!(
                (a - b).abs() <= 1e-12 * (1.0 + a.abs()),
                "{name}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn free_hamiltonian() {
    let r = am("sl3");
    let mut pt = sample(r.as_ref(), 30, 0, true);
    pt.xi = Element::zeros(8);
    let h = hamiltonian(r.as_ref(), &pt).unwrap();
    assert!((h - 0.5 * r.instance().algebra.form(&pt.p, &pt.p)).abs() < 1e-15);
}

#[test]
fn potential_has_trigonometric_sign_on_su2() {
    // On su(2) the potential is −ab/(4 sin²(t)) type: check against the
    // scalar formula 1/((1−e^{−iz})(1−e^{iz})) = 1/(4 sin²(z/2)).
    let r = am("su2");
    let inst = r.instance().clone();
    let t = 0.7;
    let q = inst.cartan_from_diagonal(&[t, -t]);
    let xi = unit(3, 1) * 1.3 + unit(3, 2) * -0.4;
    let pt = PhasePoint::new(q, Element::zeros(3), xi.clone());
    let h = constrained_hamiltonian(r.as_ref(), &pt).unwrap();
    let b_xi = inst.algebra.form(&xi, &xi);
    let expected = 0.5 * b_xi / (4.0 * t.sin().powi(2));
    assert!((h - expected).abs() < 1e-12, "{h} vs {expected}");
}

#[test]
fn invariants_commute_on_sl3() {
    let r = am("sl3");
    let worst = (0..50)
        .map(|i| {
            invariant_brackets(r.as_ref(), &sample(r.as_ref(), 31, i, true), 3)
                .unwrap()
                .amax()
        })
        .fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst:e}");
}

#[test]
fn invariants_fail_to_commute_off_the_surface() {
    let r = am("sl3");
    let worst = (0..10)
        .map(|i| {
            invariant_brackets(r.as_ref(), &sample(r.as_ref(), 32, i, false), 3)
                .unwrap()
                .amax()
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-3, "{worst:e}");
}

#[test]
fn invariants_are_conjugation_invariant() {
    for name in CATALOG {
        let inst = instance(name);
        let dim = inst.dim();
        let mut rng = rng_for(33, 0, 0);
        let x = gaussian_in(dim, 0..dim, 1.0, &mut rng);
        let g = gaussian_in(dim, 0..dim, 0.5, &mut rng);
        let kmax = inst.algebra.block_size();
        let a = invariant_functions(&inst, &x, kmax).unwrap();
        let b = invariant_functions(&inst, &(inst.algebra.exp_ad(&g) * &x), kmax).unwrap();
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).abs() <= 1e-10 * (1.0 + u.abs()), "{name}");
        }
    }
}

#[test]
fn gauge_invariance() {
    for name in CATALOG {
        let r = am(name);
        let inst = r.instance().clone();
        for i in 0..10 {
            let pt = sample(r.as_ref(), 34, i, true);
            let kappa = gaussian_in(inst.dim(), inst.chain.k(), 1.0, &mut rng_for(34, 1, i));
            let moved = gauge_transform(&inst, &pt, &kappa).unwrap();
            assert_eq!((&moved.q, &moved.p), (&pt.q, &pt.p));
            let h0 = hamiltonian(r.as_ref(), &pt).unwrap();
            let h1 = hamiltonian(r.as_ref(), &moved).unwrap();
            assert!((h0 - h1).abs() <= 1e-12 * (1.0 + h0.abs()), "{name}");
            let l0 = quasi_lax(r.as_ref(), &pt).unwrap();
            let l1 = quasi_lax(r.as_ref(), &moved).unwrap();
            assert!((inst.algebra.exp_ad(&kappa) * &l0 - &l1).amax() < 1e-10);
            let kmax = inst.algebra.block_size();
            let a = invariant_functions(&inst, &l0, kmax).unwrap();
            let b = invariant_functions(&inst, &l1, kmax).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).abs() <= 1e-10 * (1.0 + u.abs()));
            }
        }
    }
}

#[test]
fn orbit_sampling_preserves_casimirs() {
    let inst = instance("sl3");
    let xi0 = gaussian_in(8, 0..8, 1.0, &mut rng_for(35, 0, 0));
    let seed = OrbitSeed::new(&inst, xi0).unwrap();
    let mut rng = rng_for(35, 1, 0);
    for _ in 0..50 {
        let xi = seed.sample(&inst, &mut rng);
        assert!(seed.casimir_drift(&inst, &xi).unwrap() <= 1e-10);
    }
}

proptest::proptest! {
    #[test]
    fn sl2_potential_has_the_closed_form(t in 0.05f64..4.0, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let r = am("sl2");
        let pt = PhasePoint::new(unit(3, 0) * t, Element::zeros(3), unit(3, 1) * a + unit(3, 2) * b);
        let v = constrained_hamiltonian(r.as_ref(), &pt).unwrap();
        let closed = -a * b / (4.0 * t.sinh().powi(2));
        proptest::prop_assert!((v - closed).abs() <= 1e-10 * (1.0 + closed.abs()), "{v} vs {closed}");
    }

    #[test]
    fn bracket_identity_at_arbitrary_seeds(seed in 0u64..u64::MAX) {
        let r = am("su3");
        let pt = sample_phase_point(r.as_ref(), &SamplerConfig::default(), false, &mut rng_for(seed, 0, 0)).unwrap();
        proptest::prop_assert!(prop1_residual(r.as_ref(), &pt).unwrap().amax() < 1e-9);
    }
}
