use std::f64::consts::PI;

use manifold_uncertainty::concentration::{gram_matrix, BandlimitedFunction, Discretization, Expansion};
use manifold_uncertainty::model_spaces::QuadratureOptions;
use manifold_uncertainty::random_spectra::{gmpt_split, random_coefficients, GmptConfig};
use manifold_uncertainty::regions::Region;
use manifold_uncertainty::report::Status;
use manifold_uncertainty::rng::stream;
use manifold_uncertainty::spectral::{sogge_constant_estimate, SpectralSet};
use manifold_uncertainty::uncertainty::{
    check_covering_bound, check_donoho_stark, check_homogeneous_bound, check_joint, check_lca_up, check_prop_manifold,
    check_random_manifold_bound, check_supnorm_bound,
};
use manifold_uncertainty::ModelSpace;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn finite_group_uncertainty_holds(values in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, any::<bool>()), 16)) {
        let f: Vec<Complex64> = values.iter().map(|(a, b, keep)| if *keep { Complex64::new(*a, *b) } else { Complex64::new(0.0, 0.0) }).collect();
        prop_assume!(f.iter().any(|z| z.norm() > 1e-6));
        prop_assert!(check_lca_up(16, 1, &f).unwrap().holds);
        prop_assert!(check_donoho_stark(4, 2, &f).unwrap().holds);
    }

    #[test]
    fn average_concentration_equals_volume_on_homogeneous_spaces(seed in 0u64..1000, theta in 0.2f64..3.0) {
        let sphere = ModelSpace::Sphere2;
        let cap = Region::cap(&sphere, theta).unwrap();
        let disc = Discretization::for_region(&cap, 4.0, &QuadratureOptions::default()).unwrap();
        let set = SpectralSet::sphere_levels(&[1, 2]).unwrap();
        let mut rng = stream(seed, 0);
        let f = BandlimitedFunction::new(&set, random_coefficients(&mut rng, set.len())).unwrap().to_expansion();
        let r = check_prop_manifold(&f, &cap, &set, &disc).unwrap();
        prop_assert!((r.lhs - 4.0 * PI).abs() < 1e-10);
    }
}

#[test]
fn product_of_circles_reproduces_torus() {
    let t1 = ModelSpace::Torus { dim: 1 };
    let prod = ModelSpace::product(t1.clone(), t1.clone());
    let t2 = ModelSpace::Torus { dim: 2 };
    let sides = [(0.3, 2.0), (1.0, 4.5)];
    let bx = Region::torus_box(&t2, &sides).unwrap();
    let pr = Region::product(
        Region::arc(&t1, sides[0].0, sides[0].1).unwrap(),
        Region::arc(&t1, sides[1].0, sides[1].1).unwrap(),
    );
    let joint = [vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 2.0]];
    let mut rhs = Vec::new();
    for (space, region) in [(&t2, &bx), (&prod, &pr)] {
        let disc = Discretization::for_region(region, 3.0, &QuadratureOptions::default()).unwrap();
        let set = SpectralSet::joint(space, &joint).unwrap();
        let coeffs: Vec<Complex64> = (0..set.len()).map(|k| Complex64::new(1.0 + k as f64, 0.5)).collect();
        // same coefficient per joint eigenvalue in both enumerations
        let mut by_joint: Vec<(Vec<i64>, Complex64)> = set
            .elements()
            .iter()
            .map(|e| e.joint.iter().map(|v| *v as i64).collect())
            .zip(coeffs.iter().copied())
            .collect();
        by_joint.sort_by(|a, b| a.0.cmp(&b.0));
        let ordered: Vec<Complex64> = set
            .elements()
            .iter()
            .map(|e| {
                let key: Vec<i64> = e.joint.iter().map(|v| *v as i64).collect();
                let rank = by_joint.iter().position(|(k, _)| *k == key).unwrap();
                Complex64::new(1.0 + rank as f64, 0.5)
            })
            .collect();
        let f = BandlimitedFunction::new(&set, ordered).unwrap().to_expansion();
        let reports = check_joint(&f, region, &set, &disc, 1).unwrap();
        assert_eq!(reports.len(), 2);
        rhs.push((reports[0].lhs, reports[0].rhs, reports[1].rhs));
    }
    assert!((rhs[0].0 - rhs[1].0).abs() < 1e-12);
    assert!((rhs[0].1 - rhs[1].1).abs() < 1e-12);
    assert!((rhs[0].2 - rhs[1].2).abs() < 1e-12);
    assert!((rhs[0].1 - 3.0 * bx.measure() / (4.0 * PI * PI)).abs() < 1e-12);
}

#[test]
fn dyadic_spectra_make_coverings_cheap() {
    let t2 = ModelSpace::Torus { dim: 2 };
    // frequencies 1, 2, 4, 8 occur on the axes; [1, 2] is one interval, so μ = 1, 4, 8
    let freqs = [1.0, 2.0, 4.0, 8.0];
    let set = SpectralSet::scalar(&t2, &freqs).unwrap();
    let region = Region::torus_box(&t2, &[(0.0, 3.0), (0.0, 3.0)]).unwrap();
    let disc = Discretization::for_region(&region, 8.0, &QuadratureOptions::default()).unwrap();
    let f = BandlimitedFunction::new(&set, vec![Complex64::new(1.0, 0.0); set.len()]).unwrap().to_expansion();
    let cm = sogge_constant_estimate(&t2, 9.0, 4, 0).unwrap().value;
    let r = check_covering_bound(&f, &region, &set, &disc, cm).unwrap();
    assert_eq!(r.diagnostics["sum_mu_power"], 13.0);
    assert_eq!(r.diagnostics["count_times_top_power"], 36.0);
    assert!(r.diagnostics["sum_mu_power"] < r.diagnostics["count_times_top_power"]);
    assert!(r.is_ok());
    let single = SpectralSet::scalar(&t2, &[5f64.sqrt()]).unwrap();
    let f = BandlimitedFunction::new(&single, vec![Complex64::new(1.0, 0.0); single.len()]).unwrap().to_expansion();
    let r = check_covering_bound(&f, &region, &single, &disc, cm).unwrap();
    assert!((r.rhs - region.measure() * cm * 5f64.sqrt()).abs() < 1e-12);
    let joint = SpectralSet::joint(&t2, &[vec![1.0, 0.0]]).unwrap();
    assert!(check_covering_bound(&f, &region, &joint, &disc, cm).is_err());
}

#[test]
fn supnorm_bound_on_torus_and_sphere_levels() {
    let t2 = ModelSpace::Torus { dim: 2 };
    let region = Region::torus_box(&t2, &[(0.0, 2.0), (1.0, 5.0)]).unwrap();
    let set = SpectralSet::ball(&t2, 2.0).unwrap();
    let disc = Discretization::for_region(&region, 2.0, &QuadratureOptions::default()).unwrap();
    let f = Expansion::basis_element(&t2, 3);
    let r = check_supnorm_bound(&f, &region, &set, &disc, 200, 4).unwrap();
    assert!((r.diagnostics["sup_estimate"] - set.len() as f64 / (4.0 * PI * PI)).abs() < 1e-12);
    let h = check_homogeneous_bound(&f, &region, &set, &disc, 4).unwrap();
    assert!((r.rhs - h.rhs).abs() < 1e-12);

    let sphere = ModelSpace::Sphere2;
    let cap = Region::cap(&sphere, 1.0).unwrap();
    let l4 = SpectralSet::sphere_level(4).unwrap();
    let disc = Discretization::for_region(&cap, 5.0, &QuadratureOptions::default()).unwrap();
    let f = gram_matrix(&l4, &cap, &disc).unwrap().slepian(0).to_expansion();
    let r = check_supnorm_bound(&f, &cap, &l4, &disc, 200, 4).unwrap();
    assert!((r.diagnostics["sup_estimate"] - 9.0 / (4.0 * PI)).abs() < 1e-12);
    assert!(r.holds);
}

#[test]
fn homogeneous_bound_blocks_on_partial_classes() {
    let sphere = ModelSpace::Sphere2;
    let cap = Region::cap(&sphere, 1.0).unwrap();
    let set = SpectralSet::joint(&sphere, &[vec![1.0, 2.0]]).unwrap();
    let disc = Discretization::for_region(&cap, 2.0, &QuadratureOptions::default()).unwrap();
    let f = BandlimitedFunction::new(&set, vec![Complex64::new(1.0, 0.0)]).unwrap().to_expansion();
    let r = check_homogeneous_bound(&f, &cap, &set, &disc, 0).unwrap();
    assert_eq!(r.status, Status::Blocked);
    assert!(!r.caveats.is_empty());
}

#[test]
fn vacuous_when_concentration_is_poor() {
    let circle = ModelSpace::Torus { dim: 1 };
    let arc = Region::arc(&circle, 0.0, 0.2).unwrap();
    let set = SpectralSet::scalar(&circle, &[0.0]).unwrap();
    let disc = Discretization::for_region(&arc, 3.0, &QuadratureOptions::default()).unwrap();
    let f = Expansion::new(&circle, vec![Complex64::new(0.1, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
    let r = check_prop_manifold(&f, &arc, &set, &disc).unwrap();
    assert_eq!(r.status, Status::Vacuous);
    assert!(r.is_ok());
}

#[test]
fn shrinking_regions_keep_the_random_split_bound() {
    let circle = ModelSpace::Torus { dim: 1 };
    let opts = QuadratureOptions { oversample: 2.0, ..Default::default() };
    let disc = Discretization::for_space(&circle, 8.0, &opts).unwrap();
    let split = gmpt_split(&disc, 16, &GmptConfig { subsets: 8, coefficient_trials: 8, seed: 5, ..Default::default() })
        .unwrap();
    // a coefficient vector whose ratio K bounds: one of the unit elements of I
    let f = Expansion::basis_element(&circle, split.subset[0]);
    let mut last_a = 0.0;
    for k in 0..12 {
        let len = 2.0 * PI * 0.7f64.powi(k);
        let region = Region::arc(&circle, 0.5, 0.5 + len).unwrap();
        let rdisc = Discretization::for_region(&region, 8.0, &opts).unwrap();
        let r = check_random_manifold_bound(&f, &region, &rdisc, &split).unwrap();
        assert_eq!(r.inputs["k_bounds_f"], "true");
        assert!(r.holds, "length {len}: {} > {}", r.lhs, r.rhs);
        assert!(r.diagnostics["level_l1"] >= last_a - 1e-12);
        last_a = r.diagnostics["level_l1"];
    }
    assert!(last_a > 10.0);
}
