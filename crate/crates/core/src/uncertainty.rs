//! Uncertainty inequalities evaluated on concrete inputs.
//!
//! Every check returns an [`InequalityReport`] with `lhs ≤ rhs` as the claim.
//! Reports are vacuous when `ε + ε′ ≥ 1` (or when `P_E B_S f = 0`), and carry
//! a caveat whenever a constant in them is empirical.

use num_complex::Complex64;

use crate::concentration::{concentrated_norm, concentration_levels, ConcentrationLevels, Discretization, Expansion};
use crate::error::{Error, Result};
use crate::model_spaces::finite_group::{fourier_transform, support};
use crate::model_spaces::{ModelSpace, Point};
use crate::random_spectra::{is_constant_modulus, lq_norm, GmptSplit};
use crate::regions::Region;
use crate::report::InequalityReport;
use crate::spectral::{
    check_homogeneity, check_joint_homogeneity, cover_by_unit_intervals, sample_points, SpectralSet, SpectralValues,
};

/// Relative threshold below which `|f|` or `|f̂|` counts as zero.
pub const SUPPORT_TOLERANCE: f64 = 1e-9;

/// Absolute tolerance of the homogeneity precondition.
pub const HOMOGENEITY_TOLERANCE: f64 = 1e-9;

/// Points used for homogeneity preconditions in addition to the special points.
pub const HOMOGENEITY_SAMPLES: usize = 64;

/// Sampled sups below this many random points are flagged.
pub const LOW_SAMPLING: usize = 100;

fn group_supports(order: u64, dim: usize, values: &[Complex64]) -> Result<(usize, usize)> {
    let hat = fourier_transform(order, dim, values)?;
    let e = support(values, SUPPORT_TOLERANCE).len();
    if e == 0 {
        return Err(Error::ZeroFunction);
    }
    Ok((e, support(&hat, SUPPORT_TOLERANCE).len()))
}

/// `μ(E)·ν(S) ≥ 1` on `Z_N^d` with counting measure on the group and the
/// dual measure `1/N^d` on characters; `E = supp f`, `S = supp f̂`.
pub fn check_lca_up(order: u64, dim: usize, values: &[Complex64]) -> Result<InequalityReport> {
    let (e, s) = group_supports(order, dim, values)?;
    let total = (order as f64).powi(dim as i32);
    Ok(InequalityReport::new("lca_uncertainty", 1.0, e as f64 * s as f64 / total)
        .input("space", ModelSpace::FiniteGroup { order, dim })
        .input("measure", "counting on the group, 1/N^d on characters")
        .diagnostic("support_f", e as f64)
        .diagnostic("support_f_hat", s as f64))
}

/// `|supp f| · |supp f̂| ≥ N^d`.
pub fn check_donoho_stark(order: u64, dim: usize, values: &[Complex64]) -> Result<InequalityReport> {
    let (e, s) = group_supports(order, dim, values)?;
    let total = (order as f64).powi(dim as i32);
    Ok(InequalityReport::new("donoho_stark", total, e as f64 * s as f64)
        .input("space", ModelSpace::FiniteGroup { order, dim })
        .diagnostic("support_f", e as f64)
        .diagnostic("support_f_hat", s as f64))
}

/// `(s)^{1/2 - 1/q}`, the interpolation bound for `C(q)` on `s` elements
/// bounded by 1.
pub fn interpolation_bound(size: usize, q: f64) -> f64 {
    (size as f64).powf(0.5 - 1.0 / q)
}

fn tag(r: InequalityReport, disc: &Discretization, region: &Region, set: &SpectralSet) -> InequalityReport {
    r.input("space", disc.space())
        .input("region", region)
        .input("spectrum", set)
        .diagnostic(
            "nodes_in_region",
            region.mask(disc.quadrature()).map_or(f64::NAN, |m| m.iter().filter(|x| **x).count() as f64),
        )
        .diagnostic("region_measure_quadrature", region.quadrature_measure(disc.quadrature()).unwrap_or(f64::NAN))
}

fn tag_levels(r: InequalityReport, lv: &ConcentrationLevels) -> InequalityReport {
    r.diagnostic("epsilon", lv.epsilon)
        .diagnostic("epsilon_prime", lv.epsilon_prime)
        .diagnostic("level", lv.level)
        .diagnostic("level_prime", lv.level_prime)
}

/// Lower bound on `μ(E)` under the normalized measure for `f` in the span
/// of a system bounded by 1:
/// `μ(E) ≥ (L·C)^{-1/(1/2 - 1/q)}` with `C` an upper bound for `C(q)` on `S`.
pub fn check_bourgainup(
    disc: &Discretization,
    set: &SpectralSet,
    f: &Expansion,
    region: &Region,
    q: f64,
    c_upper: f64,
) -> Result<InequalityReport> {
    if q.is_nan() || q <= 2.0 {
        return Err(Error::InvalidArgument(format!("q must exceed 2, got {q}")));
    }
    if !set.elements().iter().all(|e| is_constant_modulus(&e.label)) {
        return Err(Error::InvalidArgument("the system must be bounded by 1 under the normalized measure".into()));
    }
    let lv = concentration_levels(f, region, set, disc, 2)?;
    let exponent = 0.5 - 1.0 / q;
    let lhs = (lv.level * c_upper).powf(-1.0 / exponent);
    let mu = region.measure() / disc.space().total_measure();
    let mut r = tag_levels(tag(InequalityReport::new("bounded_system_uncertainty", lhs, mu), disc, region, set), &lv)
        .input("q", q)
        .input("measure", "normalized to total mass 1")
        .diagnostic("c_upper", c_upper)
        .diagnostic("c_interp", interpolation_bound(set.len(), q));
    if lv.epsilon_prime > 1e-12 {
        r = r.caveat("f is not band-limited to S");
    }
    if c_upper < interpolation_bound(set.len(), q) * (1.0 - 1e-12) {
        r = r.caveat("C(q) supplied below the interpolation bound; validity not certified");
    } else {
        r = r.caveat("C(q) upper-bounded by interpolation");
    }
    Ok(r)
}

struct Common {
    levels: ConcentrationLevels,
    pebs: f64,
    mass: f64,
}

fn common(f: &Expansion, region: &Region, set: &SpectralSet, disc: &Discretization) -> Result<Common> {
    let levels = concentration_levels(f, region, set, disc, 2)?;
    let pebs = concentrated_norm(f, region, set, disc)?;
    let mass = disc.level_mass(set, region)?;
    Ok(Common { levels, pebs, mass })
}

fn vacuity(r: InequalityReport, c: &Common) -> InequalityReport {
    if !c.levels.is_informative() {
        r.vacuous("ε + ε′ ≥ 1")
    } else if c.pebs <= 1e-14 * c.levels.norm {
        r.vacuous("P_E B_S f = 0")
    } else if c.mass <= 0.0 {
        r.vacuous("∫_E Σ|e_j|² = 0")
    } else {
        r
    }
}

/// `(avg_j (1/|E|) ∫_E |e_j|²)^{-1} ≤ (1 - ε - ε′)^{-2} |E| #X_S`.
pub fn check_prop_manifold(
    f: &Expansion,
    region: &Region,
    set: &SpectralSet,
    disc: &Discretization,
) -> Result<InequalityReport> {
    let c = common(f, region, set, disc)?;
    let e = region.measure();
    let n = set.len() as f64;
    let lhs = e * n / c.mass;
    let rhs = e * n / c.levels.defect().powi(2);
    let r =
        tag_levels(tag(InequalityReport::new("average_concentration_bound", lhs, rhs), disc, region, set), &c.levels)
            .diagnostic("level_mass", c.mass)
            .diagnostic("concentrated_norm", c.pebs);
    Ok(vacuity(r, &c))
}

/// Sample points for homogeneity preconditions.
fn probe_points(space: &ModelSpace, seed: u64) -> Vec<Point> {
    let mut pts = space.special_points();
    pts.extend(sample_points(space, HOMOGENEITY_SAMPLES, seed, 1));
    pts
}

/// Homogeneity of every class of `S`; an error string on failure.
fn homogeneity_precondition(set: &SpectralSet, seed: u64) -> Result<std::result::Result<(), String>> {
    let space = set.space();
    let pts = probe_points(space, seed);
    match set.values() {
        SpectralValues::Scalar(vals) => {
            for v in vals {
                let h = check_homogeneity(space, *v, &pts, HOMOGENEITY_TOLERANCE)?;
                if !h.holds {
                    return Ok(Err(format!("homogeneity fails at λ = {v} (deviation {:e})", h.max_deviation)));
                }
            }
        }
        SpectralValues::Joint(vals) => {
            for v in vals {
                let h = check_joint_homogeneity(space, v, &pts, HOMOGENEITY_TOLERANCE)?;
                if !h.holds {
                    return Ok(Err(format!("homogeneity fails at {v:?} (deviation {:e})", h.max_deviation)));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// `(1 - ε - ε′)² ≤ (|E|/|M|) #X_S`, after checking homogeneity of `S`.
pub fn check_homogeneous_bound(
    f: &Expansion,
    region: &Region,
    set: &SpectralSet,
    disc: &Discretization,
    seed: u64,
) -> Result<InequalityReport> {
    const NAME: &str = "homogeneous_bound";
    if let Err(reason) = homogeneity_precondition(set, seed)? {
        return Ok(InequalityReport::blocked(NAME, &reason).input("space", disc.space()).input("spectrum", set));
    }
    let c = common(f, region, set, disc)?;
    let rhs = region.measure() / disc.space().total_measure() * set.len() as f64;
    let r = tag_levels(tag(InequalityReport::new(NAME, c.levels.defect().powi(2), rhs), disc, region, set), &c.levels)
        .seed(seed);
    Ok(if c.levels.is_informative() { r } else { r.vacuous("ε + ε′ ≥ 1") })
}

/// Sampled `sup_x Σ_{j ∈ X_S} |e_j(x)|²` over the nodes, the special points
/// and `x_samples` seeded random points.
pub fn sampled_level_sup(set: &SpectralSet, disc: &Discretization, x_samples: usize, seed: u64) -> Result<f64> {
    let idx = set.indices();
    let mut sup: f64 = 0.0;
    for n in 0..disc.nodes() {
        let row = disc.row(n);
        sup = sup.max(idx.iter().map(|j| row[*j].norm_sqr()).sum());
    }
    let space = disc.space();
    let mut pts = space.special_points();
    pts.extend(sample_points(space, x_samples, seed, 2));
    for p in &pts {
        sup = sup.max(set.level_sum(p)?);
    }
    Ok(sup)
}

/// `(1 - ε - ε′)² ≤ |E| sup_x Σ_{X_S} |e_j(x)|²` with a sampled sup.
pub fn check_supnorm_bound(
    f: &Expansion,
    region: &Region,
    set: &SpectralSet,
    disc: &Discretization,
    x_samples: usize,
    seed: u64,
) -> Result<InequalityReport> {
    let c = common(f, region, set, disc)?;
    let sup = sampled_level_sup(set, disc, x_samples, seed)?;
    let mut r = tag_levels(
        tag(InequalityReport::new("sup_bound", c.levels.defect().powi(2), region.measure() * sup), disc, region, set),
        &c.levels,
    )
    .diagnostic("sup_estimate", sup)
    .input("x_samples", x_samples)
    .caveat("sup is a sampled lower estimate")
    .seed(seed);
    if x_samples < LOW_SAMPLING {
        r = r.caveat("low sampling: a pass is weak evidence");
    }
    Ok(if c.levels.is_informative() { r } else { r.vacuous("ε + ε′ ≥ 1") })
}

/// `(1 - ε - ε′)² ≤ |E| C_M Σ_k max(μ_k, 1)^{d-1}` over a greedy unit-interval
/// covering `{[μ_k, μ_k + 1]}` of `S`.
pub fn check_covering_bound(
    f: &Expansion,
    region: &Region,
    set: &SpectralSet,
    disc: &Discretization,
    c_m: f64,
) -> Result<InequalityReport> {
    let cover = cover_by_unit_intervals(set)?;
    let c = common(f, region, set, disc)?;
    let d = disc.space().dimension() as i32 - 1;
    let raw: f64 = cover.starts.iter().map(|m| m.powi(d)).sum();
    let clamped: f64 = cover.starts.iter().map(|m| m.max(1.0).powi(d)).sum();
    let lambda_m = set.max_frequency();
    let remark = set.value_count() as f64 * (lambda_m + 1.0).powi(d);
    let rhs = region.measure() * c_m * clamped;
    let sup = sampled_level_sup(set, disc, 0, 0)?;
    let mut r = tag_levels(
        tag(InequalityReport::new("covering_bound", c.levels.defect().powi(2), rhs), disc, region, set),
        &c.levels,
    )
    .diagnostic("c_m", c_m)
    .diagnostic("covering_size", cover.len() as f64)
    .diagnostic("sum_mu_power", raw)
    .diagnostic("sum_mu_power_clamped", clamped)
    .diagnostic("count_times_top_power", remark)
    .diagnostic("sup_estimate", sup)
    .caveat("empirical C_M");
    if sup > c_m * clamped * (1.0 + 1e-12) {
        r = r.caveat("C_M does not dominate the sampled level sums");
    }
    Ok(if c.levels.is_informative() { r } else { r.vacuous("ε + ε′ ≥ 1") })
}

/// `(1 - ε - ε′)² ≤ Σ_{j ∈ X_S} ∫_E |e_j|²` for a joint spectral set, and the
/// homogeneous variant `≤ #X_S |E|/|M|` when every joint class is homogeneous.
pub fn check_joint(
    f: &Expansion,
    region: &Region,
    set: &SpectralSet,
    disc: &Discretization,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    let c = common(f, region, set, disc)?;
    let lhs = c.levels.defect().powi(2);
    let finish = |r: InequalityReport| {
        let r = tag_levels(tag(r, disc, region, set), &c.levels).seed(seed);
        if c.levels.is_informative() {
            r
        } else {
            r.vacuous("ε + ε′ ≥ 1")
        }
    };
    let mut out = vec![finish(InequalityReport::new("joint_bound", lhs, c.mass))];
    if homogeneity_precondition(set, seed)?.is_ok() {
        let rhs = set.len() as f64 * region.measure() / disc.space().total_measure();
        out.push(finish(InequalityReport::new("joint_homogeneous_bound", lhs, rhs)));
    }
    Ok(out)
}

/// `|E| ≥ 1/(K² A²)` for `f` supported on `I`, with `A` the `L¹` level of `f`
/// on `E` and `K` the observed `L²/L¹` ratio of the split.
pub fn check_random_manifold_bound(
    f: &Expansion,
    region: &Region,
    disc: &Discretization,
    split: &GmptSplit,
) -> Result<InequalityReport> {
    const NAME: &str = "random_split_bound";
    if split.n < 4 {
        return Err(Error::InvalidArgument(format!("n = {} < 4: log log n is undefined", split.n)));
    }
    let samples = disc.synthesize(f)?;
    let quad = disc.quadrature();
    let l1 = lq_norm(&samples, quad, 1.0);
    if l1 == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let mask = region.mask(quad)?;
    let inside: Vec<Complex64> =
        samples.iter().zip(&mask).map(|(v, m)| if *m { *v } else { Complex64::new(0.0, 0.0) }).collect();
    let l1_e = lq_norm(&inside, quad, 1.0);
    let a = if l1_e > 0.0 { l1 / l1_e } else { f64::INFINITY };
    let ratio = lq_norm(&samples, quad, 2.0) / l1;
    let k = split.k_observed;
    let off_split =
        f.coefficients.iter().enumerate().any(|(j, c)| c.norm() > 0.0 && split.subset.binary_search(&j).is_err());
    let mut r = InequalityReport::new(NAME, 1.0 / (k * k * a * a), region.measure())
        .input("space", disc.space())
        .input("region", region)
        .input("n", split.n)
        .input("k_bounds_f", ratio <= k)
        .diagnostic("k_emp", k)
        .diagnostic("level_l1", a)
        .diagnostic("f_ratio", ratio)
        .diagnostic("benchmark", split.benchmark)
        .diagnostic("region_measure_quadrature", region.quadrature_measure(quad)?)
        .caveat("K is the observed ratio of the split, standing in for C B log n (log log n)^{5/2}")
        .seed(split.seed);
    if ratio > k {
        r = r.vacuous("K does not bound the ratio of this f");
    }
    if off_split {
        r = r.vacuous("f has coefficients outside I");
    }
    Ok(r)
}
