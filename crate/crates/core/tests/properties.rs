//! Property-based invariants across the operator algebra, the frames, and
//! the certifier.

use proptest::prelude::*;
use qpr_core::certifier::{certify, Verdict};
use qpr_core::operator_core::{
    bloch_to_density, density_to_bloch, overlap, rotation_unitary, BlochVector,
};
use qpr_core::qubit_families::{
    c2_distribution, cuboid_distribution, d3_distribution, family_bases, family_rep, FamilyKind,
    FamilySpec, SupportPattern,
};
use qpr_core::sampling;
use qpr_core::scalar::ArithMode;
use qpr_core::HermitianOp;

fn ball_vector() -> impl Strategy<Value = BlochVector> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_filter_map(
        "inside the unit ball",
        |(x, y, z)| {
            let v = BlochVector::new(x, y, z);
            (v.norm() <= 1.0).then_some(v)
        },
    )
}

fn sphere_vector() -> impl Strategy<Value = BlochVector> {
    ball_vector().prop_filter_map("away from the origin", |v| {
        (v.norm() > 1e-3).then(|| v.normalized().unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bloch_round_trip(r in ball_vector()) {
        let rho = bloch_to_density(&r).unwrap();
        let back = density_to_bloch(&rho).unwrap();
        prop_assert!(back.approx_eq(&r, 1e-12));
    }

    #[test]
    fn purity_matches_radius(r in ball_vector()) {
        let rho = bloch_to_density(&r).unwrap();
        prop_assert!((rho.purity() - (1.0 + r.dot(&r)) / 2.0).abs() <= 1e-12);
    }

    #[test]
    fn overlap_is_half_one_plus_dot(r in ball_vector(), s in ball_vector()) {
        let rho = bloch_to_density(&r).unwrap();
        let omega = bloch_to_density(&s).unwrap();
        let expected = 0.5 * (1.0 + r.dot(&s));
        prop_assert!((overlap(&rho, &omega).unwrap() - expected).abs() <= 1e-12);
    }

    #[test]
    fn rotations_compose_additively(
        axis in sphere_vector(),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let u = rotation_unitary(&axis, a).unwrap();
        let v = rotation_unitary(&axis, b).unwrap();
        let w = rotation_unitary(&axis, a + b).unwrap();
        prop_assert!(u.compose(&v).phase_equal(&w, 1e-9));
    }

    #[test]
    fn mu_is_convex_linear(
        r in ball_vector(),
        s in ball_vector(),
        weight in 0.0f64..1.0,
    ) {
        let rep = qpr_core::qubit_families::stabilizer_rep();
        let rho = bloch_to_density(&r).unwrap();
        let omega = bloch_to_density(&s).unwrap();
        let mix = rho.scale(weight).add(&omega.scale(1.0 - weight));
        let mu_mix = rep.mu_dist(&mix).unwrap();
        let mu_rho = rep.mu_dist(&rho).unwrap();
        let mu_omega = rep.mu_dist(&omega).unwrap();
        for idx in 0..rep.space().len() {
            let expected = weight * mu_rho.value(idx) + (1.0 - weight) * mu_omega.value(idx);
            prop_assert!((mu_mix.value(idx) - expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn distributions_normalize(r in ball_vector(), theta in 0.1f64..1.2) {
        let rep = family_rep(&FamilySpec::new(FamilyKind::D3).with_theta(theta)).unwrap();
        let rho = bloch_to_density(&r).unwrap();
        prop_assert!((rep.mu_dist(&rho).unwrap().total() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn d3_general_solution_stays_on_the_constraint_manifold(
        theta in 0.1f64..1.2,
        t in 0.0f64..1.0,
    ) {
        // Any q0 within the printed bounds satisfies the normalization and
        // overlap equalities; non-negativity is a separate question.
        let s2 = theta.sin().powi(2);
        let upper = (2.0 - 2.25 * s2).min(1.0);
        let q0 = t * upper;
        let dist = d3_distribution(theta, Some(q0)).unwrap();
        let pattern = SupportPattern::table_i();
        let bases = family_bases(&FamilySpec::new(FamilyKind::D3).with_theta(theta)).unwrap();
        // Normalization over each support.
        for (j, basis) in bases.iter().enumerate() {
            for (gamma, sign) in [(1i8, qpr_core::Sign::Plus), (-1i8, qpr_core::Sign::Minus)] {
                let total: f64 = (0..8)
                    .filter(|&p| pattern.signs()[p][j] == sign)
                    .map(|p| dist.value(p))
                    .sum();
                prop_assert!((total - 1.0).abs() <= 1e-10, "basis {j} gamma {gamma}");
                let _ = basis;
            }
        }
        // Pairwise overlaps.
        for j1 in 0..3 {
            for j2 in (j1 + 1)..3 {
                let dot = bases[j1].direction().dot(bases[j2].direction());
                let total: f64 = (0..8)
                    .filter(|&p| {
                        pattern.signs()[p][j1] == qpr_core::Sign::Plus
                            && pattern.signs()[p][j2] == qpr_core::Sign::Plus
                    })
                    .map(|p| dist.value(p))
                    .sum();
                prop_assert!((total - 0.5 * (1.0 + dot)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn born_rule_holds_on_validated_frames(seed in any::<u64>()) {
        let mut rng = sampling::rng_from_seed(seed);
        let rep = qpr_core::qubit_families::stabilizer_rep();
        let rho = sampling::random_state(&mut rng);
        let effect = sampling::random_effect(&mut rng);
        prop_assert!(rep.born_residual(&rho, &effect).unwrap() <= 1e-10);
    }

    #[test]
    fn supports_intersect_iff_nonorthogonal(
        theta in 0.2f64..1.1,
        phi in 0.3f64..1.2,
    ) {
        // Exercised on the cuboid family (its structure report already runs at
        // build time; this asserts the two directions explicitly).
        let spec = FamilySpec::new(FamilyKind::Cuboid).with_theta(theta).with_phi(phi);
        let bases = family_bases(&spec).unwrap();
        let rep = family_rep(&spec).unwrap();
        for b1 in &bases {
            for b2 in &bases {
                for g1 in [1i8, -1] {
                    for g2 in [1i8, -1] {
                        let e1 = b1.element(g1);
                        let e2 = b2.element(g2);
                        let s1 = rep.support(e1, 1e-9).unwrap();
                        let s2 = rep.support(e2, 1e-9).unwrap();
                        let orthogonal = overlap(e1, e2).unwrap().abs() <= 1e-9;
                        prop_assert_eq!(s1.is_disjoint(&s2), orthogonal);
                    }
                }
            }
        }
    }

    #[test]
    fn certify_feasible_subsets_of_cuboids(
        theta in 0.2f64..1.2,
        phi in 0.2f64..1.2,
        drop in 0usize..4,
    ) {
        let spec = FamilySpec::new(FamilyKind::Cuboid).with_theta(theta).with_phi(phi);
        let bases = family_bases(&spec).unwrap();
        let subset: Vec<_> = bases
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != drop)
            .map(|(_, b)| b.clone())
            .collect();
        prop_assert_eq!(
            certify(&subset, ArithMode::Float).unwrap().verdict,
            Verdict::Feasible
        );
    }

    #[test]
    fn c2_distribution_is_nonnegative_inside_the_bound(
        theta in 0.2f64..1.4,
        u in -0.9f64..0.9,
    ) {
        let cos_phi = u * theta.sin();
        let phi = cos_phi.acos();
        let dist = c2_distribution(theta, phi, None).unwrap();
        prop_assert!(dist.is_nonnegative(1e-12));
        prop_assert!((dist.total() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn cuboid_distribution_normalizes_per_support(
        theta in 0.05f64..1.5,
        phi in 0.05f64..1.5,
    ) {
        let dist = cuboid_distribution(theta, phi).unwrap();
        prop_assert!((dist.value(0) + dist.value(1) + dist.value(2) - 1.0).abs() <= 1e-12);
        prop_assert!(dist.is_nonnegative(0.0));
    }
}

#[test]
fn q_function_scales_the_maximally_mixed_distribution() {
    for spec in [
        FamilySpec::new(FamilyKind::Stabilizer),
        FamilySpec::new(FamilyKind::D3).with_theta(0.7),
        FamilySpec::new(FamilyKind::Cuboid)
            .with_theta(0.8)
            .with_phi(0.9),
    ] {
        let rep = family_rep(&spec).unwrap();
        let q = rep.q_function();
        assert!((q.total() - 2.0).abs() < 1e-12);
        let mixed = HermitianOp::identity(2).scale(0.5);
        let mu = rep.mu_dist(&mixed).unwrap();
        for idx in 0..rep.space().len() {
            assert!((q.value(idx) - 2.0 * mu.value(idx)).abs() < 1e-12);
        }
    }
}
