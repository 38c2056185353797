use std::f64::consts::PI;

use manifold_uncertainty::concentration::Discretization;
use manifold_uncertainty::model_spaces::{enumerate_basis, evaluate_row, QuadratureOptions};
use manifold_uncertainty::spectral::{
    check_homogeneity, check_joint_homogeneity, cover_points, local_weyl, sample_points, sogge_constant_estimate,
    weyl_count, SpectralSet,
};
use manifold_uncertainty::ModelSpace;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_cover_is_a_minimal_cover(points in prop::collection::vec(0.0f64..20.0, 1..30)) {
        let cover = cover_points(&points);
        for x in &points {
            prop_assert!(cover.covers(*x));
        }
        // starts are pairwise more than 1 apart, so no unit interval holds two of them
        for w in cover.starts.windows(2) {
            prop_assert!(w[1] - w[0] > 1.0);
        }
    }

    #[test]
    fn weyl_count_is_monotone(a in 0.0f64..8.0, b in 0.0f64..8.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for space in [ModelSpace::Torus { dim: 2 }, ModelSpace::Sphere2] {
            prop_assert!(weyl_count(&space, lo).unwrap() <= weyl_count(&space, hi).unwrap());
        }
    }

    #[test]
    fn local_weyl_is_flat_on_homogeneous_spaces(lambda in 0.0f64..9.0, seed in 0u64..100) {
        for space in [ModelSpace::Torus { dim: 2 }, ModelSpace::Sphere2, ModelSpace::FiniteGroup { order: 7, dim: 2 }] {
            let expect = weyl_count(&space, lambda).unwrap() as f64 / space.total_measure();
            for p in sample_points(&space, 5, seed, 0) {
                prop_assert!((local_weyl(&space, &p, lambda).unwrap() - expect).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn finite_group_and_product_levels_are_homogeneous() {
    let z = ModelSpace::FiniteGroup { order: 9, dim: 2 };
    let pts = sample_points(&z, 30, 1, 0);
    for e in enumerate_basis(&z, 100.0).unwrap().iter().step_by(7) {
        assert!(check_homogeneity(&z, e.frequency, &pts, 1e-12).unwrap().holds);
    }
    let prod = ModelSpace::product(ModelSpace::Torus { dim: 1 }, ModelSpace::Sphere2);
    let pts = sample_points(&prod, 30, 2, 0);
    assert!(check_homogeneity(&prod, 3f64.sqrt(), &pts, 1e-10).unwrap().holds);
}

#[test]
fn partial_sphere_classes_are_not_homogeneous() {
    let pts = sample_points(&ModelSpace::Sphere2, 30, 3, 0);
    let h = check_joint_homogeneity(&ModelSpace::Sphere2, &[1.0, 6.0], &pts, 1e-9).unwrap();
    assert!(!h.holds);
    let t = ModelSpace::Torus { dim: 2 };
    assert!(check_joint_homogeneity(&t, &[2.0, -1.0], &sample_points(&t, 10, 0, 0), 1e-12).unwrap().holds);
}

#[test]
fn mixed_levels_peak_at_the_pole_when_partial() {
    let sphere = ModelSpace::Sphere2;
    let zonal = SpectralSet::joint(&sphere, &[vec![0.0, 2.0], vec![0.0, 6.0], vec![0.0, 12.0]]).unwrap();
    let pole = zonal.level_sum(&sphere.special_points()[0]).unwrap();
    assert!((pole - (3.0 + 5.0 + 7.0) / (4.0 * PI)).abs() < 1e-12);
    for p in sample_points(&sphere, 100, 9, 0) {
        assert!(zonal.level_sum(&p).unwrap() <= pole + 1e-12);
    }
}

#[test]
fn sogge_on_sphere_tracks_window_sums() {
    // windows on the sphere hold at most two levels, sum (2l+1)/(4π) per level
    let est = sogge_constant_estimate(&ModelSpace::Sphere2, 12.0, 5, 1).unwrap();
    let levels: Vec<f64> = (0..20).map(|l| ((l * (l + 1)) as f64).sqrt()).collect();
    let mut oracle: f64 = 0.0;
    let mut lam = 0.0;
    while lam <= 12.0 {
        let s: f64 = levels
            .iter()
            .enumerate()
            .filter(|(_, f)| **f >= lam - 1e-9 && **f <= lam + 1.0 + 1e-9)
            .map(|(l, _)| (2 * l + 1) as f64 / (4.0 * PI))
            .sum();
        oracle = oracle.max(s / lam.max(1.0));
        lam += 1e-3;
    }
    assert!(est.value >= oracle - 1e-9 && est.value <= oracle + 0.02, "{} vs {oracle}", est.value);
}

#[test]
fn level_sums_from_tables_match_direct_evaluation() {
    let sphere = ModelSpace::Sphere2;
    let disc = Discretization::for_space(&sphere, 3.0, &QuadratureOptions::default()).unwrap();
    let set = SpectralSet::sphere_level(2).unwrap();
    let p = &disc.quadrature().nodes[5];
    let direct: f64 = evaluate_row(&sphere, set.elements(), p).unwrap().iter().map(|v| v.norm_sqr()).sum();
    assert!((set.level_sum(p).unwrap() - direct).abs() < 1e-14);
}
