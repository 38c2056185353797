//! Spectrum-side machinery: spectral sets and their index sets `X_S`, Weyl
//! and local Weyl counting, the homogeneity identity, unit-interval coverings
//! and the empirical Sogge constant.

use std::fmt;

use num_complex::Complex64;

use crate::descriptor::{parse_real, split_top_level, strip_brackets};
use crate::error::{Error, Result};
use crate::model_spaces::{enumerate_basis, evaluate_row, BasisElement, ModelSpace, Point, FREQUENCY_TOLERANCE};
use crate::rng;

#[derive(Clone, Debug, PartialEq)]
pub enum SpectralValues {
    /// Frequencies `λ` of `sqrt(-Δ)`.
    Scalar(Vec<f64>),
    /// Joint eigenvalue tuples of the commuting family of the space.
    Joint(Vec<Vec<f64>>),
}

/// A finite set `S` of (joint) eigenvalues together with `X_S = {j : λ_j ∈ S}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSet {
    space: ModelSpace,
    values: SpectralValues,
    elements: Vec<BasisElement>,
    tolerance: f64,
}

impl SpectralSet {
    pub const DEFAULT_TOLERANCE: f64 = FREQUENCY_TOLERANCE;

    pub fn scalar(space: &ModelSpace, values: &[f64]) -> Result<Self> {
        Self::scalar_with_tolerance(space, values, Self::DEFAULT_TOLERANCE)
    }

    /// Every value must be a frequency of the space; all `j` with matching
    /// `λ_j` are included, so degeneracy classes are captured whole.
    pub fn scalar_with_tolerance(space: &ModelSpace, values: &[f64], tolerance: f64) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument("spectral values must be finite and nonnegative".into()));
        }
        let mut vals: Vec<f64> = values.to_vec();
        vals.sort_by(f64::total_cmp);
        vals.dedup_by(|a, b| (*a - *b).abs() <= tolerance);
        let top = vals.last().copied().unwrap_or(0.0);
        let basis = enumerate_basis(space, top + tolerance + 1.0)?;
        for v in &vals {
            if !basis.iter().any(|e| (e.frequency - v).abs() <= tolerance) {
                let nearest = basis
                    .iter()
                    .map(|e| e.frequency)
                    .min_by(|a, b| (a - v).abs().total_cmp(&(b - v).abs()))
                    .unwrap_or(0.0);
                return Err(Error::NotInSpectrum { value: *v, nearest });
            }
        }
        let elements =
            basis.into_iter().filter(|e| vals.iter().any(|v| (e.frequency - v).abs() <= tolerance)).collect();
        Ok(SpectralSet { space: space.clone(), values: SpectralValues::Scalar(vals), elements, tolerance })
    }

    /// All frequencies `λ_j ≤ lambda`.
    pub fn ball(space: &ModelSpace, lambda: f64) -> Result<Self> {
        let basis = enumerate_basis(space, lambda)?;
        let mut freqs: Vec<f64> = basis.iter().map(|e| e.frequency).collect();
        freqs.dedup();
        Ok(SpectralSet {
            space: space.clone(),
            values: SpectralValues::Scalar(freqs),
            elements: basis,
            tolerance: Self::DEFAULT_TOLERANCE,
        })
    }

    /// The degree-`l` eigenspace of the sphere, frequency `sqrt(l(l+1))`.
    pub fn sphere_level(l: u32) -> Result<Self> {
        let l = l as f64;
        Self::scalar(&ModelSpace::Sphere2, &[(l * (l + 1.0)).sqrt()])
    }

    /// Distinct sphere levels `l ∈ levels`.
    pub fn sphere_levels(levels: &[u32]) -> Result<Self> {
        let vals: Vec<f64> = levels.iter().map(|&l| ((l as f64) * (l as f64 + 1.0)).sqrt()).collect();
        Self::scalar(&ModelSpace::Sphere2, &vals)
    }

    pub fn joint(space: &ModelSpace, values: &[Vec<f64>]) -> Result<Self> {
        let tolerance = Self::DEFAULT_TOLERANCE;
        let mut cutoff: f64 = 0.0;
        for v in values {
            cutoff = cutoff.max(joint_frequency_bound(space, v)?);
        }
        let basis = enumerate_basis(space, cutoff + 1e-6)?;
        let matches = |e: &BasisElement, v: &Vec<f64>| {
            e.joint.len() == v.len() && e.joint.iter().zip(v).all(|(a, b)| (a - b).abs() <= tolerance)
        };
        for v in values {
            if !basis.iter().any(|e| matches(e, v)) {
                return Err(Error::InvalidArgument(format!("{v:?} is not in the joint spectrum of {space}")));
            }
        }
        let elements = basis.into_iter().filter(|e| values.iter().any(|v| matches(e, v))).collect();
        let mut vals = values.to_vec();
        vals.sort_by(|a, b| {
            a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        vals.dedup();
        Ok(SpectralSet { space: space.clone(), values: SpectralValues::Joint(vals), elements, tolerance })
    }

    /// The joint set picking out exactly the given basis elements when joint
    /// eigenvalues are simple (tori and finite groups); degenerate joint
    /// eigenvalues pull in their whole class.
    pub fn joint_from_elements(space: &ModelSpace, elements: &[BasisElement]) -> Result<Self> {
        let vals: Vec<Vec<f64>> = elements.iter().map(|e| e.joint.clone()).collect();
        Self::joint(space, &vals)
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn values(&self) -> &SpectralValues {
        &self.values
    }

    pub fn is_joint(&self) -> bool {
        matches!(self.values, SpectralValues::Joint(_))
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// The eigenfunctions `e_j, j ∈ X_S`, in enumeration order.
    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    /// `X_S` as global enumeration indices.
    pub fn indices(&self) -> Vec<usize> {
        self.elements.iter().map(|e| e.index).collect()
    }

    /// `#X_S`, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `#S`.
    pub fn value_count(&self) -> usize {
        match &self.values {
            SpectralValues::Scalar(v) => v.len(),
            SpectralValues::Joint(v) => v.len(),
        }
    }

    pub fn max_frequency(&self) -> f64 {
        self.elements.iter().map(|e| e.frequency).fold(0.0, f64::max)
    }

    pub fn max_degree(&self) -> u64 {
        self.elements.iter().map(|e| e.degree()).max().unwrap_or(0)
    }

    /// Distinct frequencies of the elements of `X_S`, ascending.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut f: Vec<f64> = self.elements.iter().map(|e| e.frequency).collect();
        f.sort_by(f64::total_cmp);
        f.dedup_by(|a, b| (*a - *b).abs() <= self.tolerance);
        f
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.elements.binary_search_by_key(&index, |e| e.index).is_ok()
    }

    /// `Σ_{j ∈ X_S} |e_j(x)|²`.
    pub fn level_sum(&self, point: &Point) -> Result<f64> {
        Ok(evaluate_row(&self.space, &self.elements, point)?.iter().map(|v| v.norm_sqr()).sum())
    }

    /// Parses `level:ℓ=3` (also `level:l=3` or `level:3`, sphere only),
    /// `ball:λ≤5` (also `ball:5`), `list:[1.0,2.236]`, `joint:[(1,2),(0,0)]`.
    pub fn parse(space: &ModelSpace, s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(':').ok_or_else(|| Error::descriptor("spectrum", s, "expected kind:params"))?;
        match kind {
            "level" => {
                if *space != ModelSpace::Sphere2 {
                    return Err(Error::descriptor("spectrum", s, "level:ℓ=.. is defined on sphere2"));
                }
                let v = rest.rsplit('=').next().unwrap_or(rest);
                let levels = split_top_level(v.trim_start_matches('[').trim_end_matches(']'), ',')
                    .into_iter()
                    .map(|t| t.parse::<u32>().map_err(|_| Error::descriptor("spectrum", t, "expected a degree")))
                    .collect::<Result<Vec<_>>>()?;
                Self::sphere_levels(&levels)
            }
            "ball" => {
                let v = rest
                    .trim_start_matches(['λ', 'l', 'L'])
                    .trim_start_matches("<=")
                    .trim_start_matches('≤')
                    .trim_start_matches('=');
                Self::ball(space, parse_real("spectrum", v)?)
            }
            "list" => {
                let inner = strip_brackets("spectrum", rest, '[', ']')?;
                let vals = split_top_level(inner, ',')
                    .into_iter()
                    .filter(|t| !t.is_empty())
                    .map(|t| parse_real("spectrum", t))
                    .collect::<Result<Vec<_>>>()?;
                Self::scalar(space, &vals)
            }
            "joint" => {
                let inner = strip_brackets("spectrum", rest, '[', ']')?;
                let mut vals = Vec::new();
                for item in split_top_level(inner, ',').into_iter().filter(|t| !t.is_empty()) {
                    let coords = if item.starts_with('(') { strip_brackets("spectrum", item, '(', ')')? } else { item };
                    vals.push(coords.split(',').map(|t| parse_real("spectrum", t)).collect::<Result<Vec<_>>>()?);
                }
                Self::joint(space, &vals)
            }
            other => Err(Error::descriptor("spectrum", other, "unknown spectrum kind")),
        }
    }
}

impl fmt::Display for SpectralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.values {
            SpectralValues::Scalar(v) => {
                let items: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
                write!(f, "list:[{}]", items.join(","))
            }
            SpectralValues::Joint(v) => {
                let items: Vec<String> = v
                    .iter()
                    .map(|t| format!("({})", t.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")))
                    .collect();
                write!(f, "joint:[{}]", items.join(","))
            }
        }
    }
}

fn joint_len(space: &ModelSpace) -> usize {
    match space {
        ModelSpace::Torus { dim } | ModelSpace::FiniteGroup { dim, .. } => *dim,
        ModelSpace::Sphere2 => 2,
        ModelSpace::Product(a, b) => joint_len(a) + joint_len(b),
    }
}

fn joint_frequency_bound(space: &ModelSpace, v: &[f64]) -> Result<f64> {
    if v.len() != joint_len(space) {
        return Err(Error::InvalidArgument(format!(
            "joint value {v:?} has {} components, {space} needs {}",
            v.len(),
            joint_len(space)
        )));
    }
    Ok(match space {
        ModelSpace::Torus { .. } => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        ModelSpace::Sphere2 => v[1].max(0.0).sqrt(),
        ModelSpace::FiniteGroup { .. } => space.max_frequency().unwrap_or(0.0),
        ModelSpace::Product(a, b) => {
            let k = joint_len(a);
            let fa = joint_frequency_bound(a, &v[..k])?;
            let fb = joint_frequency_bound(b, &v[k..])?;
            (fa * fa + fb * fb).sqrt()
        }
    })
}

/// `N(λ) = #{j : λ_j ≤ λ}` with multiplicity.
pub fn weyl_count(space: &ModelSpace, lambda: f64) -> Result<usize> {
    Ok(enumerate_basis(space, lambda)?.len())
}

/// `N_x(λ) = Σ_{λ_j ≤ λ} |e_j(x)|²`.
pub fn local_weyl(space: &ModelSpace, point: &Point, lambda: f64) -> Result<f64> {
    let basis = enumerate_basis(space, lambda)?;
    Ok(evaluate_row(space, &basis, point)?.iter().map(|v| v.norm_sqr()).sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Homogeneity {
    pub holds: bool,
    pub max_deviation: f64,
    /// `#{j : λ_j = λ}`.
    pub multiplicity: usize,
    /// `multiplicity / |M|`.
    pub expected: f64,
    pub samples: usize,
}

/// Samples `Σ_{j ∈ level} |e_j(x)|²` against `multiplicity/|M|`.
///
/// `level_values` returns the level's eigenfunction values at a point; tests
/// use it to inject perturbed bases.
pub fn level_sum_homogeneity<F>(
    level_values: F,
    multiplicity: usize,
    total_measure: f64,
    points: &[Point],
    tol: f64,
) -> Result<Homogeneity>
where
    F: Fn(&Point) -> Result<Vec<Complex64>>,
{
    let expected = multiplicity as f64 / total_measure;
    let mut max_deviation: f64 = 0.0;
    for p in points {
        let sum: f64 = level_values(p)?.iter().map(|v| v.norm_sqr()).sum();
        max_deviation = max_deviation.max((sum - expected).abs());
    }
    Ok(Homogeneity { holds: max_deviation <= tol, max_deviation, multiplicity, expected, samples: points.len() })
}

/// Homogeneity of the eigenspace with frequency `lambda`.
pub fn check_homogeneity(space: &ModelSpace, lambda: f64, points: &[Point], tol: f64) -> Result<Homogeneity> {
    let level = SpectralSet::scalar(space, &[lambda])?;
    check_set_homogeneity(&level, points, tol)
}

/// Homogeneity of the class of a single joint eigenvalue.
pub fn check_joint_homogeneity(space: &ModelSpace, joint: &[f64], points: &[Point], tol: f64) -> Result<Homogeneity> {
    let level = SpectralSet::joint(space, &[joint.to_vec()])?;
    check_set_homogeneity(&level, points, tol)
}

fn check_set_homogeneity(level: &SpectralSet, points: &[Point], tol: f64) -> Result<Homogeneity> {
    let space = level.space().clone();
    let elements = level.elements().to_vec();
    level_sum_homogeneity(|p| evaluate_row(&space, &elements, p), elements.len(), space.total_measure(), points, tol)
}

/// `count` points from stream `stream_id` of `seed`.
pub fn sample_points(space: &ModelSpace, count: usize, seed: u64, stream_id: u64) -> Vec<Point> {
    let mut r = rng::stream(seed, stream_id);
    (0..count).map(|_| space.random_point(&mut r)).collect()
}

/// Unit intervals `[μ_k, μ_k + 1]` covering a scalar spectral set.
#[derive(Clone, Debug, PartialEq)]
pub struct Covering {
    pub starts: Vec<f64>,
}

impl Covering {
    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn covers(&self, x: f64) -> bool {
        self.starts.iter().any(|m| *m <= x && x <= m + 1.0)
    }
}

/// Greedy left-to-right covering of points on the line by unit intervals,
/// each starting at the smallest point not yet covered. Optimal on a line.
pub fn cover_points(points: &[f64]) -> Covering {
    let mut sorted: Vec<f64> = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut starts: Vec<f64> = Vec::new();
    for x in sorted {
        match starts.last() {
            Some(m) if x <= m + 1.0 => {}
            _ => starts.push(x),
        }
    }
    Covering { starts }
}

pub fn cover_by_unit_intervals(set: &SpectralSet) -> Result<Covering> {
    match set.values() {
        SpectralValues::Scalar(v) => Ok(cover_points(v)),
        SpectralValues::Joint(_) => {
            Err(Error::InvalidArgument("unit-interval coverings need a scalar spectral set".into()))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SoggeEstimate {
    /// Empirical `C_M`: max of `Σ_{λ_j ∈ [λ, λ+1]} |e_j(x)|² / max(λ,1)^{d-1}`.
    pub value: f64,
    pub argmax_lambda: f64,
    pub lambda_max: f64,
    pub grid_points: usize,
    pub sample_points: usize,
    pub seed: u64,
}

/// Empirical Sogge constant over `λ ∈ [0, λ_max]` and sampled points.
///
/// The λ-grid contains every breakpoint of the window sums (`λ_j` and
/// `λ_j - 1`) plus a uniform step of 1/4 on `[1, λ_max]`, so for each sampled
/// point the maximum over the grid is the maximum over the whole interval.
/// The denominator is clamped at 1 below `λ = 1`.
pub fn sogge_constant_estimate(
    space: &ModelSpace,
    lambda_max: f64,
    x_samples: usize,
    seed: u64,
) -> Result<SoggeEstimate> {
    if !(1.0..f64::INFINITY).contains(&lambda_max) {
        return Err(Error::InvalidArgument(format!("λ_max must be finite and >= 1, got {lambda_max}")));
    }
    let tol = FREQUENCY_TOLERANCE;
    let basis = enumerate_basis(space, lambda_max + 1.0)?;
    let freqs: Vec<f64> = basis.iter().map(|e| e.frequency).collect();
    let mut grid: Vec<f64> = vec![0.0, 1.0];
    for f in &freqs {
        for g in [*f, f - 1.0] {
            if (0.0..=lambda_max).contains(&g) {
                grid.push(g);
            }
        }
    }
    let steps = ((lambda_max - 1.0) / 0.25).floor() as usize;
    grid.extend((0..=steps).map(|k| 1.0 + 0.25 * k as f64));
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut points = space.special_points();
    points.extend(sample_points(space, x_samples, seed, 0));
    let dims = space.dimension() as i32 - 1;
    let mut best = (0.0, 0.0);
    for p in &points {
        let sq: Vec<f64> = evaluate_row(space, &basis, p)?.iter().map(|v| v.norm_sqr()).collect();
        let mut prefix = vec![0.0; sq.len() + 1];
        for (i, v) in sq.iter().enumerate() {
            prefix[i + 1] = prefix[i] + v;
        }
        for &lam in &grid {
            let lo = freqs.partition_point(|f| *f < lam - tol);
            let hi = freqs.partition_point(|f| *f <= lam + 1.0 + tol);
            let ratio = (prefix[hi] - prefix[lo]) / lam.max(1.0).powi(dims);
            if ratio > best.0 {
                best = (ratio, lam);
            }
        }
    }
    Ok(SoggeEstimate {
        value: best.0,
        argmax_lambda: best.1,
        lambda_max,
        grid_points: grid.len(),
        sample_points: points.len(),
        seed,
    })
}
