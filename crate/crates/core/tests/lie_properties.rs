mod common;

use calogero_core::lie::weyl_order;
use calogero_core::linalg::spectral_norm;
use calogero_core::sampling::{gaussian_in, random_cartan, rng_for};
use calogero_core::{
    diagonalize_to_cartan, weyl_act, weyl_group, AutomorphismKind, Element, Operator,
};
use common::{instance, CATALOG};
use proptest::prelude::*;

#[test]
fn structure_constants_are_consistent() {
    for name in CATALOG.iter().chain(&["sl5", "su5", "sl2x4"]) {
        let inst = instance(name);
        let alg = &inst.algebra;
        assert!(alg.jacobi_residual() <= 1e-12, "{name}");
        assert!(alg.antisymmetry_residual() <= 1e-12, "{name}");
        assert!(alg.invariance_residual() <= 1e-12, "{name}");
        assert!(alg.representation_residual() <= 1e-12, "{name}");
        let g = alg.gram();
        assert!((g - g.transpose()).amax() == 0.0);
        assert!((g * alg.gram_inv() - Operator::identity(alg.dim(), alg.dim())).amax() < 1e-12);
    }
}

#[test]
fn chains_are_valid() {
    for name in CATALOG {
        let inst = instance(name);
        assert!(inst.chain.validate(&inst.algebra).is_valid(1e-12), "{name}");
        let c = &inst.chain;
        let sum = c.projector(c.k()) + c.projector(c.kperp_f()) + c.projector(c.fperp());
        assert_eq!(sum, Operator::identity(inst.dim(), inst.dim()));
        // B-orthogonality of the blocks
        let g = inst.algebra.gram();
        let pk = c.projector(c.k());
        let pkp = c.projector(c.kperp());
        assert!((pk.transpose() * g * pkp).amax() < 1e-14, "{name}");
    }
}

#[test]
fn automorphisms_are_orthogonal_homomorphisms_fixing_k() {
    for name in CATALOG {
        let inst = instance(name);
        for theta in &inst.automorphisms {
            assert!(
                theta.homomorphism_residual(&inst.algebra) <= 1e-12,
                "{name}"
            );
            assert!(
                theta.orthogonality_residual(&inst.algebra) <= 1e-12,
                "{name}"
            );
            assert!(theta.fixes_k_residual(&inst.chain) <= 1e-12, "{name}");
        }
    }
    let inst = instance("sl2x3");
    let theta = inst
        .automorphism(AutomorphismKind::Cyclic)
        .unwrap()
        .matrix();
    let cube = theta * theta * theta;
    assert!((cube - Operator::identity(9, 9)).amax() < 1e-14);
}

#[test]
fn adjoint_flow_preserves_the_form() {
    for name in CATALOG {
        let inst = instance(name);
        let alg = &inst.algebra;
        let dim = inst.dim();
        let mut worst: f64 = 0.0;
        for i in 0..100 {
            let q = gaussian_in(dim, 0..dim, 0.5, &mut rng_for(11, 0, i));
            let e = alg.exp_ad(&q);
            worst = worst.max((e.transpose() * alg.gram() * &e - alg.gram()).amax());
            let back = &e * alg.exp_ad(&-&q);
            worst = worst.max((back - Operator::identity(dim, dim)).amax());
        }
        assert!(worst <= 1e-9, "{name}: {worst:e}");
    }
}

#[test]
fn sl2_exponential_on_root_vector() {
    let inst = instance("sl2");
    let t = 0.37;
    let h = Element::from_vec(vec![t, 0.0, 0.0]);
    let e = Element::from_vec(vec![0.0, 1.0, 0.0]);
    assert!((inst.algebra.ad(&h) * &e - &e * (2.0 * t)).amax() < 1e-15);
    assert!((inst.algebra.exp_ad(&h) * &e - &e * (2.0 * t).exp()).amax() < 1e-14);
}

#[test]
fn diagonalisation_round_trip() {
    for name in CATALOG {
        let inst = instance(name);
        let alg = &inst.algebra;
        let mut worst: f64 = 0.0;
        for i in 0..100 {
            let mut rng = rng_for(12, 0, i);
            let q = random_cartan(&inst, 1.0, &mut rng);
            let y = gaussian_in(inst.dim(), inst.chain.f(), 0.3, &mut rng);
            let big_q = alg.exp_ad(&y) * &q;
            let d = diagonalize_to_cartan(&inst, &big_q).unwrap();
            worst = worst.max((&d.ad_f_inv * &d.q - &big_q).amax());
            // Ad_f is B-orthogonal
            worst = worst.max((d.ad_f.transpose() * alg.gram() * &d.ad_f - alg.gram()).amax());
            // fundamental chamber: strictly decreasing diagonal
            let diag = inst.cartan_diagonal(&d.q);
            assert!(diag.windows(2).all(|w| w[0] > w[1]), "{name}");
        }
        assert!(worst <= 1e-9, "{name}: {worst:e}");
    }
}

#[test]
fn weyl_groups() {
    assert_eq!(weyl_order(&instance("sl2")), 2);
    assert_eq!(weyl_order(&instance("sl3")), 6);
    assert_eq!(weyl_order(&instance("su4")), 24);
    let inst = instance("sl3");
    let q = inst.cartan_from_diagonal(&[1.0, 0.3, -1.3]);
    let mut spec0 = inst
        .root_values(&q)
        .iter()
        .map(|a| a.abs())
        .collect::<Vec<_>>();
    spec0.sort_by(f64::total_cmp);
    for w in weyl_group(&inst) {
        let moved = weyl_act(&inst, &w, &q);
        let mut spec = inst
            .root_values(&moved)
            .iter()
            .map(|a| a.abs())
            .collect::<Vec<_>>();
        spec.sort_by(f64::total_cmp);
        for (a, b) in spec.iter().zip(&spec0) {
            assert!((a - b).abs() < 1e-14);
        }
        // operators on g are automorphisms preserving B
        let op = w.algebra_operator(&inst);
        assert!(
            spectral_norm(&(op.transpose() * inst.algebra.gram() * &op - inst.algebra.gram()))
                < 1e-12
        );
    }
}

#[test]
fn descriptors_predict_built_sizes() {
    for name in CATALOG.iter().chain(&["sl5", "su4", "sl2x4"]) {
        let inst = instance(name);
        let d = inst.descriptor;
        assert_eq!(d.dim(), inst.dim(), "{name}");
        assert_eq!(d.rank(), inst.rank(), "{name}");
        assert_eq!(d.weyl_order(), weyl_order(&inst), "{name}");
    }
}

proptest! {
    #[test]
    fn bracket_is_antisymmetric_and_invariant(
        x in prop::collection::vec(-2.0f64..2.0, 8),
        y in prop::collection::vec(-2.0f64..2.0, 8),
        z in prop::collection::vec(-2.0f64..2.0, 8),
    ) {
        let inst = instance("sl3");
        let alg = &inst.algebra;
        let (x, y, z) = (Element::from_vec(x), Element::from_vec(y), Element::from_vec(z));
        prop_assert!((alg.commutator(&x, &y) + alg.commutator(&y, &x)).amax() < 1e-13);
        prop_assert!(alg.commutator(&x, &x).amax() < 1e-13);
        let lhs = alg.form(&x, &alg.commutator(&y, &z));
        let rhs = alg.form(&alg.commutator(&x, &y), &z);
        prop_assert!((lhs - rhs).abs() < 1e-11);
    }

    #[test]
    fn bracket_matches_matrix_commutator(
        x in prop::collection::vec(-2.0f64..2.0, 8),
        y in prop::collection::vec(-2.0f64..2.0, 8),
    ) {
        let inst = instance("su3");
        let alg = &inst.algebra;
        let (x, y) = (Element::from_vec(x), Element::from_vec(y));
        let (mx, my) = (alg.matrix_of(&x), alg.matrix_of(&y));
        let direct = &mx * &my - &my * &mx;
        prop_assert!((alg.matrix_of(&alg.commutator(&x, &y)) - direct).camax() < 1e-12);
    }
}
