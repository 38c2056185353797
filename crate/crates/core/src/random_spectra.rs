//! Randomized spectral-subset experiments: generic subsets, lower estimates
//! of q-orthogonality constants and random-half splits.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::concentration::Discretization;
use crate::error::{Error, Result};
use crate::model_spaces::{Label, Quadrature};
use crate::rng;

/// Weighted `L^q` norm of node samples; `q = ∞` gives the node maximum.
pub fn lq_norm(samples: &[Complex64], quad: &Quadrature, q: f64) -> f64 {
    if q.is_infinite() {
        return samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let s: f64 = samples.iter().zip(&quad.weights).map(|(v, w)| w * v.norm().powf(q)).sum();
    s.powf(1.0 / q)
}

/// Independent standard complex Gaussian entries.
pub fn random_coefficients<R: Rng>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect()
}

/// `|e(x)|` is constant for this basis element.
pub fn is_constant_modulus(label: &Label) -> bool {
    match label {
        Label::Lattice(_) | Label::Character(_) => true,
        Label::Harmonic { l, .. } => *l == 0,
        Label::Pair(a, b) => is_constant_modulus(a) && is_constant_modulus(b),
    }
}

/// Each of `n` indices is kept independently with probability
/// `δ = n^{2/q - 1}`, so the expected size is `n^{2/q}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSubsetSpec {
    pub n: usize,
    pub q: f64,
    pub delta: f64,
    pub seed: u64,
}

impl RandomSubsetSpec {
    pub fn new(n: usize, q: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("subset ambient size must be >= 1".into()));
        }
        if q.is_nan() || q <= 2.0 {
            return Err(Error::InvalidArgument(format!("q must exceed 2, got {q}")));
        }
        let delta = (n as f64).powf(2.0 / q - 1.0).min(1.0);
        Ok(RandomSubsetSpec { n, q, delta, seed })
    }

    pub fn expected_size(&self) -> f64 {
        self.n as f64 * self.delta
    }
}

pub fn generic_subset(spec: &RandomSubsetSpec) -> Vec<usize> {
    let mut r = rng::stream(spec.seed, 0);
    (0..spec.n).filter(|_| r.random::<f64>() < spec.delta).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CqConfig {
    /// Random restarts.
    pub trials: usize,
    pub ascent_iterations: usize,
    /// Stop once the ratio changes by less than this.
    pub tolerance: f64,
    pub seed: u64,
    /// Reject systems that are not bounded by 1 under the normalized measure.
    pub require_bounded: bool,
}

impl Default for CqConfig {
    fn default() -> Self {
        CqConfig { trials: 20, ascent_iterations: 200, tolerance: 1e-8, seed: rng::DEFAULT_SEED, require_bounded: true }
    }
}

/// Lower estimate of `C(q)` on a subset, with the interpolation upper bound.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaQEstimate {
    /// Global basis indices, ascending.
    pub subset: Vec<usize>,
    pub q: f64,
    /// Best `‖Σ a_i ψ_i‖_q / ‖a‖₂` found.
    pub c_lower: f64,
    /// `(#S)^{1/2 - 1/q}`.
    pub c_interp: f64,
    pub trials: usize,
    pub ascent_iterations: usize,
    /// Unit-norm coefficients (over `subset`) attaining `c_lower`.
    pub best_coefficients: Vec<Complex64>,
    /// All elements of the subset have modulus at most 1 under the normalized measure.
    pub bounded: bool,
    pub seed: u64,
}

/// Random starts refined by the fixed-point ascent
/// `a ← Ψ*(|F|^{q-2} F) / ‖·‖`, `F = Ψ a`, under the normalized measure with
/// `ψ_i = |M|^{1/2} e_i`. A `warm_start` from a subset of `subset` is
/// zero-padded and ascended too, so the estimate never decreases under
/// subset extension.
pub fn estimate_cq(
    disc: &Discretization,
    subset: &[usize],
    q: f64,
    config: &CqConfig,
    warm_start: Option<&LambdaQEstimate>,
) -> Result<LambdaQEstimate> {
    if !(2.0..f64::INFINITY).contains(&q) {
        return Err(Error::InvalidArgument(format!("q must be finite and >= 2, got {q}")));
    }
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if subset.is_empty() {
        return Err(Error::InvalidArgument("empty subset".into()));
    }
    if let Some(j) = subset.iter().find(|j| **j >= disc.basis().len()) {
        return Err(Error::InvalidArgument(format!("index {j} outside the discretization basis")));
    }
    let bounded = subset.iter().all(|j| is_constant_modulus(&disc.basis()[*j].label));
    if config.require_bounded && !bounded {
        return Err(Error::InvalidArgument(
            "subset is not bounded by 1 under the normalized measure; disable require_bounded for exploratory runs"
                .into(),
        ));
    }
    let degree = subset.iter().map(|j| disc.basis()[*j].degree()).max().unwrap_or(0);
    let need = (q.ceil() as u64).saturating_mul(degree);
    if disc.quadrature().exactness_degree < need {
        return Err(Error::CoarseQuadrature(format!(
            "exactness degree {} < {} needed to resolve |F|^{q} at degree {}",
            disc.quadrature().exactness_degree,
            need,
            degree
        )));
    }

    let total = disc.space().total_measure();
    let scale = total.sqrt();
    let weights: Vec<f64> = disc.quadrature().weights.iter().map(|w| w / total).collect();
    let psi: Vec<Vec<Complex64>> =
        (0..disc.nodes()).map(|n| subset.iter().map(|j| disc.value(n, *j) * scale).collect()).collect();
    let ratio_of = |a: &[Complex64]| -> (f64, Vec<Complex64>) {
        let f: Vec<Complex64> = psi.iter().map(|row| row.iter().zip(a).map(|(p, c)| p * c).sum()).collect();
        let norm_a = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let s: f64 = f.iter().zip(&weights).map(|(v, w)| w * v.norm().powf(q)).sum();
        (s.powf(1.0 / q) / norm_a, f)
    };
    let ascend = |start: Vec<Complex64>| -> (f64, Vec<Complex64>) {
        let norm = start.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let mut a: Vec<Complex64> = start.iter().map(|c| c / norm).collect();
        let (mut r, mut f) = ratio_of(&a);
        let mut best = (r, a.clone());
        for _ in 0..config.ascent_iterations {
            let mut g = vec![Complex64::new(0.0, 0.0); a.len()];
            for ((row, v), w) in psi.iter().zip(&f).zip(&weights) {
                let t = v * (w * v.norm().powf(q - 2.0));
                for (gi, p) in g.iter_mut().zip(row) {
                    *gi += t * p.conj();
                }
            }
            let gn = g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if gn == 0.0 {
                break;
            }
            a = g.iter().map(|c| c / gn).collect();
            let (r_new, f_new) = ratio_of(&a);
            f = f_new;
            if r_new > best.0 {
                best = (r_new, a.clone());
            }
            let done = (r_new - r).abs() < config.tolerance;
            r = r_new;
            if done {
                break;
            }
        }
        best
    };

    let mut candidates: Vec<(f64, Vec<Complex64>)> = Vec::new();
    if let Some(prev) = warm_start {
        let mut start = vec![Complex64::new(0.0, 0.0); subset.len()];
        for (j, c) in prev.subset.iter().zip(&prev.best_coefficients) {
            let pos = subset
                .binary_search(j)
                .map_err(|_| Error::InvalidArgument(format!("warm start index {j} is not in the subset")))?;
            start[pos] = *c;
        }
        candidates.push(ascend(start));
    }
    let trial_results: Vec<(f64, Vec<Complex64>)> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(config.seed, t);
            ascend(random_coefficients(&mut r, subset.len()))
        })
        .collect();
    candidates.extend(trial_results);
    let best = candidates
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .ok_or_else(|| Error::InvalidArgument("no trials requested".into()))?;
    Ok(LambdaQEstimate {
        c_interp: (subset.len() as f64).powf(0.5 - 1.0 / q),
        subset,
        q,
        c_lower: best.0,
        trials: config.trials,
        ascent_iterations: config.ascent_iterations,
        best_coefficients: best.1,
        bounded,
        seed: config.seed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmptConfig {
    /// Size constraint `|#I - n/2| ≤ c √n`.
    pub c_param: f64,
    /// Random subsets drawn; the best is kept.
    pub subsets: usize,
    /// Random coefficient vectors per side, in addition to the unit vectors.
    pub coefficient_trials: usize,
    pub seed: u64,
}

impl Default for GmptConfig {
    fn default() -> Self {
        GmptConfig { c_param: 1.0, subsets: 64, coefficient_trials: 16, seed: rng::DEFAULT_SEED }
    }
}

/// A split of the first `n` basis elements into `I` and its complement.
#[derive(Clone, Debug, PartialEq)]
pub struct GmptSplit {
    pub n: usize,
    /// `I`, ascending global indices.
    pub subset: Vec<usize>,
    pub size_deviation: f64,
    pub c_param: f64,
    /// `max(k_subset, k_complement)`.
    pub k_observed: f64,
    pub k_subset: f64,
    pub k_complement: f64,
    /// `max_i sup |e_i|` over nodes and special points.
    pub b_sup: f64,
    /// `B log n (log log n)^{5/2}`; NaN for `n < 4`.
    pub benchmark: f64,
    /// Fraction of drawn subsets whose observed ratio is below the benchmark.
    pub success_fraction: f64,
    pub subsets_tried: usize,
    pub seed: u64,
}

impl GmptSplit {
    pub fn complement(&self) -> Vec<usize> {
        (0..self.n).filter(|i| self.subset.binary_search(i).is_err()).collect()
    }
}

/// `‖Σ a_i e_i‖₂ / ‖Σ a_i e_i‖₁` under the unnormalized measure.
pub fn l2_l1_ratio(disc: &Discretization, indices: &[usize], coefficients: &[Complex64]) -> f64 {
    let quad = disc.quadrature();
    let f: Vec<Complex64> =
        (0..disc.nodes()).map(|n| indices.iter().zip(coefficients).map(|(j, a)| disc.value(n, *j) * a).sum()).collect();
    lq_norm(&f, quad, 2.0) / lq_norm(&f, quad, 1.0)
}

/// Best of `config.subsets` random halves of `{0, .., n-1}`.
pub fn gmpt_split(disc: &Discretization, n: usize, config: &GmptConfig) -> Result<GmptSplit> {
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("n must be even, got {n}")));
    }
    if n < 2 || n > disc.basis().len() {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be in [2, {}] for this discretization",
            disc.basis().len()
        )));
    }
    if config.subsets == 0 {
        return Err(Error::InvalidArgument("at least one subset must be drawn".into()));
    }
    let bound = config.c_param * (n as f64).sqrt();
    let half = n as f64 / 2.0;
    let unit: Vec<f64> = (0..n).map(|i| l2_l1_ratio(disc, &[i], &[Complex64::new(1.0, 0.0)])).collect();
    let space = disc.space();
    let special = space.special_points();
    let mut b_sup: f64 = 0.0;
    for i in 0..n {
        for node in 0..disc.nodes() {
            b_sup = b_sup.max(disc.value(node, i).norm());
        }
        for p in &special {
            b_sup = b_sup.max(crate::model_spaces::evaluate(space, &disc.basis()[i], p)?.norm());
        }
    }
    let ln = (n as f64).ln();
    let benchmark = if n >= 4 { b_sup * ln * ln.ln().powf(2.5) } else { f64::NAN };

    let side = |r: &mut rand_chacha::ChaCha8Rng, idx: &[usize]| -> f64 {
        let mut k = idx.iter().map(|i| unit[*i]).fold(0.0, f64::max);
        for _ in 0..config.coefficient_trials {
            let a = random_coefficients(r, idx.len());
            k = k.max(l2_l1_ratio(disc, idx, &a));
        }
        k
    };
    let draws: Vec<Result<(Vec<usize>, f64, f64)>> = (0..config.subsets as u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(config.seed, t);
            for _ in 0..10_000 {
                let subset: Vec<usize> = (0..n).filter(|_| r.random::<bool>()).collect();
                let size = subset.len();
                if size == 0 || size == n || (size as f64 - half).abs() > bound {
                    continue;
                }
                let comp: Vec<usize> = (0..n).filter(|i| subset.binary_search(i).is_err()).collect();
                let ks = side(&mut r, &subset);
                let kc = side(&mut r, &comp);
                return Ok((subset, ks, kc));
            }
            Err(Error::InvalidArgument(format!("no split of {n} satisfies |#I - n/2| <= {bound}")))
        })
        .collect();
    let draws = draws.into_iter().collect::<Result<Vec<_>>>()?;
    let successes = draws.iter().filter(|d| d.1.max(d.2) <= benchmark).count();
    let best =
        draws.into_iter().reduce(|a, b| if b.1.max(b.2) < a.1.max(a.2) { b } else { a }).expect("at least one subset");
    let (subset, k_subset, k_complement) = best;
    Ok(GmptSplit {
        n,
        size_deviation: (subset.len() as f64 - half).abs(),
        subset,
        c_param: config.c_param,
        k_observed: k_subset.max(k_complement),
        k_subset,
        k_complement,
        b_sup,
        benchmark,
        success_fraction: if benchmark.is_nan() { f64::NAN } else { successes as f64 / config.subsets as f64 },
        subsets_tried: config.subsets,
        seed: config.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concentration::Expansion;
    use crate::model_spaces::{ModelSpace, QuadratureOptions};
    use std::f64::consts::PI;

    #[test]
    fn lq_norm_examples() {
        let circle = ModelSpace::Torus { dim: 1 };
        let opts = QuadratureOptions { oversample: 4.0, ..Default::default() };
        let disc = Discretization::for_space(&circle, 2.0, &opts).unwrap();
        let f = disc.synthesize(&Expansion::basis_element(&circle, 0)).unwrap();
        assert!((lq_norm(&f, disc.quadrature(), 2.0) - 1.0).abs() < 1e-14);
        assert!((lq_norm(&f, disc.quadrature(), 4.0) - (2.0 * PI).powf(-0.25)).abs() < 1e-14);
        let c = vec![Complex64::new(3.0, 0.0); disc.nodes()];
        assert!((lq_norm(&c, disc.quadrature(), 1.0) - 6.0 * PI).abs() < 1e-12);
        assert_eq!(lq_norm(&c, disc.quadrature(), f64::INFINITY), 3.0);
    }

    #[test]
    fn generic_subsets() {
        let spec = RandomSubsetSpec::new(256, 4.0, 11).unwrap();
        assert!((spec.delta - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(generic_subset(&spec), generic_subset(&spec));
        let near_two = RandomSubsetSpec::new(50, 2.0 + 1e-14, 1).unwrap();
        assert_eq!(generic_subset(&near_two).len(), 50);
        assert!(RandomSubsetSpec::new(10, 2.0, 1).is_err());
    }

    #[test]
    fn cq_sanity() {
        let z = ModelSpace::FiniteGroup { order: 32, dim: 1 };
        let disc = Discretization::for_space(&z, 100.0, &QuadratureOptions::default()).unwrap();
        let cfg = CqConfig { trials: 4, ..Default::default() };
        let one = estimate_cq(&disc, &[5], 4.0, &cfg, None).unwrap();
        assert!((one.c_lower - 1.0).abs() < 1e-12);
        let two = estimate_cq(&disc, &[0, 3, 7], 2.0, &cfg, None).unwrap();
        assert!((two.c_lower - 1.0).abs() < 1e-12);
        let small = estimate_cq(&disc, &[1, 4, 9], 4.0, &cfg, None).unwrap();
        assert!(small.c_lower >= 1.0 && small.c_lower <= small.c_interp * (1.0 + 1e-9));
        let big = estimate_cq(&disc, &[1, 4, 9, 13], 4.0, &CqConfig { seed: 99, ..cfg }, Some(&small)).unwrap();
        assert!(big.c_lower >= small.c_lower);
        let sphere = Discretization::for_space(
            &ModelSpace::Sphere2,
            3.0,
            &QuadratureOptions { oversample: 2.0, ..Default::default() },
        )
        .unwrap();
        assert!(estimate_cq(&sphere, &[0, 1, 2], 4.0, &cfg, None).is_err());
        let cfg_x = CqConfig { require_bounded: false, ..cfg };
        assert!(!estimate_cq(&sphere, &[0, 1, 2], 4.0, &cfg_x, None).unwrap().bounded);
        let coarse =
            Discretization::for_space(&ModelSpace::Torus { dim: 1 }, 3.0, &QuadratureOptions::default()).unwrap();
        assert!(matches!(estimate_cq(&coarse, &[5, 6], 4.0, &cfg, None), Err(Error::CoarseQuadrature(_))));
    }

    #[test]
    fn gmpt_examples() {
        let circle = ModelSpace::Torus { dim: 1 };
        let opts = QuadratureOptions { oversample: 4.0, ..Default::default() };
        let disc = Discretization::for_space(&circle, 20.0, &opts).unwrap();
        let cfg = GmptConfig { subsets: 8, coefficient_trials: 4, ..Default::default() };
        let s = gmpt_split(&disc, 2, &cfg).unwrap();
        assert_eq!(s.subset.len(), 1);
        assert!((s.k_observed - (2.0 * PI).powf(-0.5)).abs() < 1e-12);
        assert!(gmpt_split(&disc, 3, &cfg).is_err());
        let s = gmpt_split(&disc, 32, &cfg).unwrap();
        assert!(s.size_deviation <= 32f64.sqrt());
        assert!(s.k_observed >= (2.0 * PI).powf(-0.5) - 1e-12);
        assert!(s.benchmark.is_finite() && s.success_fraction >= 0.0);
        assert_eq!(s, gmpt_split(&disc, 32, &cfg).unwrap());

        let sdisc = Discretization::for_space(&ModelSpace::Sphere2, 4.0, &opts).unwrap();
        let s = gmpt_split(&sdisc, 16, &cfg).unwrap();
        assert!((s.b_sup - (7.0 / (4.0 * PI)).sqrt()).abs() < 1e-12);
    }
}
