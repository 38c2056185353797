//! Cut-off `P_E`, band-limiting `B_S`, the concentration (Gram) matrix on a
//! region and its eigenproblem, and concentration levels.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model_spaces::{enumerate_basis, evaluate_row, BasisElement, ModelSpace, Quadrature, QuadratureOptions};
use crate::regions::Region;
use crate::report::InequalityReport;
use crate::spectral::SpectralSet;

/// Excursions of Gram eigenvalues outside `[0, 1]` up to this size are clamped.
pub const EIGENVALUE_SLACK: f64 = 1e-8;

/// Default lower bound on quadrature nodes inside a region.
pub const MIN_NODES_INSIDE: usize = 100;

/// A quadrature rule together with the basis up to a cutoff evaluated at its
/// nodes. Functions are coefficient vectors over that basis prefix.
#[derive(Clone, Debug)]
pub struct Discretization {
    space: ModelSpace,
    cutoff: f64,
    quad: Quadrature,
    basis: Vec<BasisElement>,
    /// Row-major `nodes × basis`.
    table: Vec<Complex64>,
}

impl Discretization {
    /// Requires the rule to integrate products of basis elements exactly.
    pub fn new(space: &ModelSpace, quad: Quadrature, cutoff: f64) -> Result<Self> {
        let basis = enumerate_basis(space, cutoff)?;
        let degree = basis.iter().map(|e| e.degree()).max().unwrap_or(0);
        quad.require_exact_for(degree)?;
        let rows: Vec<Vec<Complex64>> =
            quad.nodes.par_iter().map(|p| evaluate_row(space, &basis, p)).collect::<Result<_>>()?;
        Ok(Discretization { space: space.clone(), cutoff, quad, basis, table: rows.concat() })
    }

    /// Plain rule on the whole space.
    pub fn for_space(space: &ModelSpace, cutoff: f64, options: &QuadratureOptions) -> Result<Self> {
        let quad = crate::model_spaces::build_quadrature_with(space, cutoff, options)?;
        Self::new(space, quad, cutoff)
    }

    /// Rule whose cells are aligned with `∂E`.
    pub fn for_region(region: &Region, cutoff: f64, options: &QuadratureOptions) -> Result<Self> {
        let quad = region.adapted_quadrature(cutoff, options, MIN_NODES_INSIDE)?;
        Self::new(region.space(), quad, cutoff)
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn nodes(&self) -> usize {
        self.quad.len()
    }

    /// Values of the basis at node `n`.
    pub fn row(&self, n: usize) -> &[Complex64] {
        let k = self.basis.len();
        &self.table[n * k..(n + 1) * k]
    }

    pub fn value(&self, node: usize, index: usize) -> Complex64 {
        self.table[node * self.basis.len() + index]
    }

    fn check_set(&self, set: &SpectralSet) -> Result<()> {
        if set.space() != &self.space {
            return Err(Error::SpaceMismatch(format!(
                "spectral set on {}, discretization on {}",
                set.space(),
                self.space
            )));
        }
        match set.elements().last() {
            Some(e) if e.index >= self.basis.len() => Err(Error::InvalidArgument(format!(
                "spectral set reaches frequency {} beyond the discretization cutoff {}",
                e.frequency, self.cutoff
            ))),
            _ => Ok(()),
        }
    }

    /// Samples of `Σ_j a_j e_j` at the nodes.
    pub fn synthesize(&self, f: &Expansion) -> Result<Vec<Complex64>> {
        if f.space != self.space {
            return Err(Error::SpaceMismatch(format!("function on {}, discretization on {}", f.space, self.space)));
        }
        if f.coefficients.len() > self.basis.len() {
            return Err(Error::InvalidArgument(format!(
                "function has {} coefficients, discretization basis has {}",
                f.coefficients.len(),
                self.basis.len()
            )));
        }
        let k = f.coefficients.len();
        Ok((0..self.nodes()).map(|n| self.row(n)[..k].iter().zip(&f.coefficients).map(|(e, a)| e * a).sum()).collect())
    }

    /// Samples of `Σ_{j ∈ X_S} a_j e_j`.
    pub fn synthesize_band(&self, f: &BandlimitedFunction) -> Result<Vec<Complex64>> {
        self.check_set(&f.set)?;
        let idx = f.set.indices();
        Ok((0..self.nodes())
            .map(|n| {
                let row = self.row(n);
                idx.iter().zip(&f.coefficients).map(|(j, a)| row[*j] * a).sum()
            })
            .collect())
    }

    /// Coefficients `<f, e_j>` by quadrature, for every basis element.
    pub fn analyze(&self, samples: &[Complex64]) -> Result<Expansion> {
        if samples.len() != self.nodes() {
            return Err(Error::InvalidArgument(format!("{} samples for {} nodes", samples.len(), self.nodes())));
        }
        let mut a = vec![Complex64::new(0.0, 0.0); self.basis.len()];
        for (n, (s, w)) in samples.iter().zip(&self.quad.weights).enumerate() {
            let ws = s * *w;
            for (aj, e) in a.iter_mut().zip(self.row(n)) {
                *aj += ws * e.conj();
            }
        }
        Ok(Expansion { space: self.space.clone(), coefficients: a })
    }

    /// `Σ_{nodes} w |f|²`, optionally restricted to a mask.
    pub fn l2_norm(&self, samples: &[Complex64], mask: Option<&[bool]>) -> f64 {
        self.lp_norm(samples, mask, 2.0)
    }

    pub fn lp_norm(&self, samples: &[Complex64], mask: Option<&[bool]>, p: f64) -> f64 {
        let s: f64 = samples
            .iter()
            .zip(&self.quad.weights)
            .enumerate()
            .filter(|(n, _)| mask.is_none_or(|m| m[*n]))
            .map(|(_, (v, w))| w * v.norm().powf(p))
            .sum();
        s.powf(1.0 / p)
    }

    /// `∫_E Σ_{j ∈ X_S} |e_j|²` by quadrature.
    pub fn level_mass(&self, set: &SpectralSet, region: &Region) -> Result<f64> {
        self.check_set(set)?;
        let mask = region.mask(&self.quad)?;
        let idx = set.indices();
        Ok((0..self.nodes())
            .filter(|n| mask[*n])
            .map(|n| {
                let row = self.row(n);
                self.quad.weights[n] * idx.iter().map(|j| row[*j].norm_sqr()).sum::<f64>()
            })
            .sum())
    }
}

/// `f = Σ_j a_j e_j` over a prefix of the enumerated basis; index `j` is the
/// global enumeration index.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    pub space: ModelSpace,
    pub coefficients: Vec<Complex64>,
}

impl Expansion {
    pub fn new(space: &ModelSpace, coefficients: Vec<Complex64>) -> Self {
        Expansion { space: space.clone(), coefficients }
    }

    /// The basis element `e_index` itself.
    pub fn basis_element(space: &ModelSpace, index: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); index + 1];
        c[index] = Complex64::new(1.0, 0.0);
        Expansion::new(space, c)
    }

    /// `‖f‖_{L²}` by Plancherel.
    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn get(&self, index: usize) -> Complex64 {
        self.coefficients.get(index).copied().unwrap_or_default()
    }
}

/// `f = Σ_{j ∈ X_S} a_j e_j`, coefficients in the order of `set.elements()`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandlimitedFunction {
    pub set: SpectralSet,
    pub coefficients: Vec<Complex64>,
}

impl BandlimitedFunction {
    pub fn new(set: &SpectralSet, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != set.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for #X_S = {}",
                coefficients.len(),
                set.len()
            )));
        }
        Ok(BandlimitedFunction { set: set.clone(), coefficients })
    }

    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_expansion(&self) -> Expansion {
        let idx = self.set.indices();
        let len = idx.last().map_or(0, |j| j + 1);
        let mut c = vec![Complex64::new(0.0, 0.0); len];
        for (j, a) in idx.iter().zip(&self.coefficients) {
            c[*j] = *a;
        }
        Expansion::new(self.set.space(), c)
    }
}

/// `B_S f`: keeps the coordinates in `X_S`.
pub fn band_project(f: &Expansion, set: &SpectralSet) -> BandlimitedFunction {
    let coefficients = set.indices().iter().map(|j| f.get(*j)).collect();
    BandlimitedFunction { set: set.clone(), coefficients }
}

/// `P_E f` on quadrature samples.
pub fn cutoff(samples: &[Complex64], region: &Region, quad: &Quadrature) -> Result<Vec<Complex64>> {
    if samples.len() != quad.len() {
        return Err(Error::InvalidArgument(format!("{} samples for {} nodes", samples.len(), quad.len())));
    }
    let mask = region.mask(quad)?;
    Ok(samples.iter().zip(mask).map(|(v, m)| if m { *v } else { Complex64::new(0.0, 0.0) }).collect())
}

/// `G_{jk} = ∫_E e_j conj(e_k)` over `X_S`, with its eigen-decomposition.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub set: SpectralSet,
    pub region: Region,
    /// Row-major, `#X_S × #X_S`.
    pub entries: Vec<Complex64>,
    pub trace: f64,
    /// Clamped to `[0, 1]`, descending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` holds the coefficients (over `X_S`) of the `k`-th most
    /// concentrated function, unit norm.
    eigenvectors: DMatrix<Complex64>,
    pub raw_eigenvalue_range: (f64, f64),
    pub nodes_in_region: usize,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.set.len()
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.entries[j * self.dim() + k]
    }

    /// Coefficients of the `k`-th Slepian function.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k).iter().copied().collect()
    }

    pub fn slepian(&self, k: usize) -> BandlimitedFunction {
        BandlimitedFunction { set: self.set.clone(), coefficients: self.eigenvector(k) }
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                worst = worst.max((self.entry(j, k) - self.entry(k, j).conj()).norm());
            }
        }
        worst
    }

    /// `{"dim", "entries": [[re, im], ...], "eigenvalues", "eigenvectors"}`,
    /// row-major.
    pub fn to_json(&self) -> String {
        let pair = |z: &Complex64| serde_json::json!([z.re, z.im]);
        let n = self.dim();
        let vectors: Vec<Vec<serde_json::Value>> =
            (0..n).map(|k| self.eigenvector(k).iter().map(pair).collect()).collect();
        serde_json::json!({
            "dim": n,
            "indices": self.set.indices(),
            "entries": self.entries.iter().map(pair).collect::<Vec<_>>(),
            "trace": self.trace,
            "eigenvalues": self.eigenvalues,
            "eigenvectors": vectors,
        })
        .to_string()
    }
}

pub fn gram_matrix(set: &SpectralSet, region: &Region, disc: &Discretization) -> Result<GramMatrix> {
    disc.check_set(set)?;
    if region.space() != disc.space() {
        return Err(Error::SpaceMismatch(format!("region on {}, discretization on {}", region.space(), disc.space())));
    }
    let mask = region.mask(disc.quadrature())?;
    let inside: Vec<usize> = (0..disc.nodes()).filter(|n| mask[*n]).collect();
    let idx = set.indices();
    let n = idx.len();
    let w = &disc.quadrature().weights;
    let rows: Vec<Vec<Complex64>> = idx
        .par_iter()
        .map(|&j| {
            idx.iter()
                .map(|&k| inside.iter().map(|&p| disc.value(p, j) * disc.value(p, k).conj() * w[p]).sum())
                .collect()
        })
        .collect();
    let entries = rows.concat();
    let trace = (0..n).map(|j| entries[j * n + j].re).sum();

    // a^* conj(G) a = ‖P_E Σ a_j e_j‖², so the extremal coefficients are the
    // conjugated eigenvectors of G.
    let matrix = DMatrix::from_row_slice(n, n, &entries);
    let eig = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| eig.eigenvalues[*b].total_cmp(&eig.eigenvalues[*a]));
    let raw: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let range = (raw.last().copied().unwrap_or(0.0), raw.first().copied().unwrap_or(0.0));
    if range.0 < -EIGENVALUE_SLACK || range.1 > 1.0 + EIGENVALUE_SLACK {
        return Err(Error::CoarseQuadrature(format!(
            "Gram eigenvalues span [{:e}, {}], outside [0, 1] by more than {EIGENVALUE_SLACK:e}",
            range.0, range.1
        )));
    }
    let mut vectors = DMatrix::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, c)] = eig.eigenvectors[(r, i)].conj();
        }
    }
    Ok(GramMatrix {
        set: set.clone(),
        region: region.clone(),
        entries,
        trace,
        eigenvalues: raw.iter().map(|v| v.clamp(0.0, 1.0)).collect(),
        eigenvectors: vectors,
        raw_eigenvalue_range: range,
        nodes_in_region: inside.len(),
    })
}

/// Top eigenpair: the largest fraction of `L²` mass any `f` band-limited to
/// `X_S` can place in `E`, and coefficients attaining it.
pub fn max_concentration(gram: &GramMatrix) -> (f64, Vec<Complex64>) {
    if gram.dim() == 0 {
        return (0.0, Vec::new());
    }
    (gram.eigenvalues[0], gram.eigenvector(0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcentrationLevels {
    /// `‖f - 1_E f‖_p / ‖f‖_p`.
    pub epsilon: f64,
    /// `‖f̂ - 1_{X_S} f̂‖₂ / ‖f̂‖₂`.
    pub epsilon_prime: f64,
    /// `(1 - ε^p)^{-1/p}`.
    pub level: f64,
    /// `(1 - ε′²)^{-1/2}`.
    pub level_prime: f64,
    pub p: u32,
    /// `‖f‖_p` by quadrature.
    pub norm: f64,
    pub nodes_in_region: usize,
}

impl ConcentrationLevels {
    /// `1 - ε - ε′`.
    pub fn defect(&self) -> f64 {
        1.0 - self.epsilon - self.epsilon_prime
    }

    pub fn is_informative(&self) -> bool {
        self.epsilon + self.epsilon_prime < 1.0
    }
}

pub fn concentration_levels(
    f: &Expansion,
    region: &Region,
    set: &SpectralSet,
    disc: &Discretization,
    p: u32,
) -> Result<ConcentrationLevels> {
    if p != 1 && p != 2 {
        return Err(Error::InvalidArgument(format!("norm exponent must be 1 or 2, got {p}")));
    }
    disc.check_set(set)?;
    let samples = disc.synthesize(f)?;
    levels_from_samples(f, &samples, region, set, disc, p)
}

fn levels_from_samples(
    f: &Expansion,
    samples: &[Complex64],
    region: &Region,
    set: &SpectralSet,
    disc: &Discretization,
    p: u32,
) -> Result<ConcentrationLevels> {
    let coef_norm = f.norm();
    if coef_norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let pf = p as f64;
    let mask = region.mask(disc.quadrature())?;
    let outside: Vec<bool> = mask.iter().map(|m| !m).collect();
    let norm = disc.lp_norm(samples, None, pf);
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let epsilon = (disc.lp_norm(samples, Some(&outside), pf) / norm).min(1.0);
    let tail: f64 =
        f.coefficients.iter().enumerate().filter(|(j, _)| !set.contains_index(*j)).map(|(_, a)| a.norm_sqr()).sum();
    let epsilon_prime = (tail.sqrt() / coef_norm).min(1.0);
    Ok(ConcentrationLevels {
        epsilon,
        epsilon_prime,
        level: (1.0 - epsilon.powi(p as i32)).powf(-1.0 / pf),
        level_prime: (1.0 - epsilon_prime * epsilon_prime).powf(-0.5),
        p,
        norm,
        nodes_in_region: mask.iter().filter(|m| **m).count(),
    })
}

/// `‖P_E B_S f‖` by quadrature.
pub fn concentrated_norm(f: &Expansion, region: &Region, set: &SpectralSet, disc: &Discretization) -> Result<f64> {
    let band = band_project(f, set);
    let samples = disc.synthesize_band(&band)?;
    let mask = region.mask(disc.quadrature())?;
    Ok(disc.l2_norm(&samples, Some(&mask)))
}

/// The lower bound `(1 - ε - ε′)‖f‖ ≤ ‖P_E B_S f‖` and the upper bound
/// `‖P_E B_S f‖ ≤ (∫_E Σ_{X_S} |e_j|²)^{1/2} ‖f‖`.
pub fn verify_lemma_bounds(
    f: &Expansion,
    region: &Region,
    set: &SpectralSet,
    disc: &Discretization,
) -> Result<(InequalityReport, InequalityReport)> {
    let levels = concentration_levels(f, region, set, disc, 2)?;
    let pebs = concentrated_norm(f, region, set, disc)?;
    let mass = disc.level_mass(set, region)?;
    let norm = levels.norm;
    let tag = |r: InequalityReport| {
        r.input("space", disc.space())
            .input("region", region)
            .input("spectrum", set)
            .diagnostic("epsilon", levels.epsilon)
            .diagnostic("epsilon_prime", levels.epsilon_prime)
            .diagnostic("norm", norm)
            .diagnostic("nodes_in_region", levels.nodes_in_region as f64)
            .diagnostic("region_measure_quadrature", region.quadrature_measure(disc.quadrature()).unwrap_or(f64::NAN))
    };
    let mut lower = tag(InequalityReport::new("concentration_lower_bound", levels.defect() * norm, pebs));
    if !levels.is_informative() {
        lower = lower.vacuous("ε + ε′ ≥ 1");
    }
    let upper = tag(InequalityReport::new("concentration_upper_bound", pebs, mass.sqrt() * norm))
        .diagnostic("level_mass", mass);
    Ok((lower, upper))
}
