use std::f64::consts::PI;

use manifold_uncertainty::concentration::{
    band_project, concentrated_norm, cutoff, gram_matrix, max_concentration, verify_lemma_bounds, Discretization,
    Expansion,
};
use manifold_uncertainty::model_spaces::QuadratureOptions;
use manifold_uncertainty::random_spectra::random_coefficients;
use manifold_uncertainty::regions::Region;
use manifold_uncertainty::rng::stream;
use manifold_uncertainty::spectral::SpectralSet;
use manifold_uncertainty::ModelSpace;
use proptest::prelude::*;

fn circle() -> ModelSpace {
    ModelSpace::Torus { dim: 1 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projections_are_idempotent_and_contractive(seed in 0u64..10_000, a in 0.0f64..6.0, len in 0.1f64..6.0, top in 0u32..6) {
        let space = circle();
        let arc = Region::arc(&space, a, a + len).unwrap();
        let disc = Discretization::for_region(&arc, 8.0, &QuadratureOptions::default()).unwrap();
        let set = SpectralSet::ball(&space, top as f64).unwrap();
        let mut rng = stream(seed, 0);
        let f = Expansion::new(&space, random_coefficients(&mut rng, disc.basis().len()));
        let b = band_project(&f, &set);
        prop_assert_eq!(band_project(&b.to_expansion(), &set), b.clone());
        prop_assert!(b.norm() <= f.norm() + 1e-15);
        let s = disc.synthesize(&f).unwrap();
        let once = cutoff(&s, &arc, disc.quadrature()).unwrap();
        prop_assert_eq!(cutoff(&once, &arc, disc.quadrature()).unwrap(), once.clone());
        prop_assert!(disc.l2_norm(&once, None) <= disc.l2_norm(&s, None) + 1e-14);
        // Plancherel under exact quadrature
        prop_assert!((disc.l2_norm(&s, None) - f.norm()).abs() < 1e-8 * f.norm());
    }

    #[test]
    fn top_eigenvalue_bounds_every_concentration(seed in 0u64..10_000, theta in 0.2f64..3.0) {
        let sphere = ModelSpace::Sphere2;
        let cap = Region::cap(&sphere, theta).unwrap();
        let disc = Discretization::for_region(&cap, 4.0, &QuadratureOptions::default()).unwrap();
        let set = SpectralSet::sphere_levels(&[1, 3]).unwrap();
        let g = gram_matrix(&set, &cap, &disc).unwrap();
        let (top, _) = max_concentration(&g);
        prop_assert!(top <= g.trace + 1e-12);
        prop_assert!(g.max_hermitian_defect() <= 1e-12);
        let mut rng = stream(seed, 1);
        let f = Expansion::new(&sphere, random_coefficients(&mut rng, disc.basis().len()));
        let pebs = concentrated_norm(&f, &cap, &set, &disc).unwrap();
        let b = band_project(&f, &set);
        prop_assert!(pebs * pebs <= top * b.norm().powi(2) * (1.0 + 1e-10) + 1e-14);
    }

    #[test]
    fn nested_regions_never_lose_concentration(a in 0.0f64..6.0, l1 in 0.1f64..3.0, extra in 0.0f64..3.0) {
        let space = circle();
        let small = Region::arc(&space, a, a + l1).unwrap();
        let big = Region::arc(&space, a, a + l1 + extra).unwrap();
        let set = SpectralSet::ball(&space, 3.0).unwrap();
        let ds = Discretization::for_region(&small, 3.0, &QuadratureOptions::default()).unwrap();
        let db = Discretization::for_region(&big, 3.0, &QuadratureOptions::default()).unwrap();
        let ts = max_concentration(&gram_matrix(&set, &small, &ds).unwrap()).0;
        let tb = max_concentration(&gram_matrix(&set, &big, &db).unwrap()).0;
        prop_assert!(tb >= ts - 1e-12);
    }

    #[test]
    fn upper_bound_equals_trace_identity(seed in 0u64..10_000, theta in 0.2f64..3.0) {
        let sphere = ModelSpace::Sphere2;
        let cap = Region::cap(&sphere, theta).unwrap();
        let disc = Discretization::for_region(&cap, 3.0, &QuadratureOptions::default()).unwrap();
        let set = SpectralSet::sphere_levels(&[0, 2]).unwrap();
        let g = gram_matrix(&set, &cap, &disc).unwrap();
        let mut rng = stream(seed, 2);
        let f = Expansion::new(&sphere, random_coefficients(&mut rng, disc.basis().len()));
        let (_, hi) = verify_lemma_bounds(&f, &cap, &set, &disc).unwrap();
        prop_assert!((hi.rhs - g.trace.sqrt() * f.norm()).abs() < 1e-10 * hi.rhs);
        prop_assert!(hi.holds);
    }
}

#[test]
fn gram_rejects_basis_beyond_cutoff() {
    let space = circle();
    let disc = Discretization::for_space(&space, 2.0, &QuadratureOptions::default()).unwrap();
    let set = SpectralSet::ball(&space, 4.0).unwrap();
    assert!(gram_matrix(&set, &Region::full(&space), &disc).is_err());
}

#[test]
fn coarse_rules_are_rejected() {
    let space = circle();
    let quad = manifold_uncertainty::model_spaces::build_quadrature(&space, 2.0).unwrap();
    assert!(matches!(Discretization::new(&space, quad, 5.0), Err(manifold_uncertainty::Error::CoarseQuadrature(_))));
}

#[test]
fn exported_gram_is_valid_json() {
    let space = circle();
    let arc = Region::arc(&space, 0.0, PI).unwrap();
    let disc = Discretization::for_region(&arc, 2.0, &QuadratureOptions::default()).unwrap();
    let g = gram_matrix(&SpectralSet::ball(&space, 2.0).unwrap(), &arc, &disc).unwrap();
    let v: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
    assert_eq!(v["dim"], 5);
    assert_eq!(v["entries"].as_array().unwrap().len(), 25);
    assert!((v["entries"][0][0].as_f64().unwrap() - 0.5).abs() < 1e-14);
}
