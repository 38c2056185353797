use std::f64::consts::PI;

use super::basis::FREQUENCY_TOLERANCE;
use super::{ModelSpace, Point};
use crate::error::{Error, Result};

/// A positive-weight rule for `∫_M · dV`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature {
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
    /// Products `e_j conj(e_k)` with `degree(j) + degree(k) ≤ exactness_degree`
    /// are integrated exactly. `u64::MAX` for finite groups.
    pub exactness_degree: u64,
}

impl Quadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Checks that products of two elements of degree at most `degree` are exact.
    pub fn require_exact_for(&self, degree: u64) -> Result<()> {
        let need = degree.saturating_mul(2);
        if self.exactness_degree < need {
            return Err(Error::CoarseQuadrature(format!(
                "exactness degree {} < {} required for basis degree {}",
                self.exactness_degree, need, degree
            )));
        }
        Ok(())
    }

    fn tensor(a: Quadrature, b: Quadrature) -> Quadrature {
        let mut nodes = Vec::with_capacity(a.len() * b.len());
        let mut weights = Vec::with_capacity(a.len() * b.len());
        for (p, wp) in a.nodes.iter().zip(&a.weights) {
            for (q, wq) in b.nodes.iter().zip(&b.weights) {
                nodes.push(Point::Product(Box::new(p.clone()), Box::new(q.clone())));
                weights.push(wp * wq);
            }
        }
        Quadrature { nodes, weights, exactness_degree: a.exactness_degree.min(b.exactness_degree) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    /// Lower bound on grid points per torus axis (and longitudes on the sphere).
    pub min_points_per_axis: usize,
    /// Multiplies the required exactness; use > 1 for non-polynomial integrands
    /// such as `|f|` or `|f|^q`.
    pub oversample: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { min_points_per_axis: 1, oversample: 1.0 }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(z) and P_{n-1}(z) by the three-term recurrence
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let step = p1 / dp;
            z -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Largest basis degree among elements with `λ_j ≤ cutoff`.
pub(crate) fn max_degree(space: &ModelSpace, cutoff: f64) -> u64 {
    let c = cutoff + FREQUENCY_TOLERANCE;
    match space {
        ModelSpace::Torus { .. } => c.floor() as u64,
        ModelSpace::Sphere2 => {
            let mut l = 0u64;
            while (((l + 1) * (l + 2)) as f64).sqrt() <= c {
                l += 1;
            }
            l
        }
        ModelSpace::FiniteGroup { .. } => 0,
        ModelSpace::Product(a, b) => max_degree(a, cutoff).max(max_degree(b, cutoff)),
    }
}

fn required_exactness(space: &ModelSpace, cutoff: f64, options: &QuadratureOptions) -> Result<u64> {
    if !cutoff.is_finite() || cutoff < 0.0 {
        return Err(Error::InvalidArgument(format!("quadrature cutoff must be finite and >= 0, got {cutoff}")));
    }
    if !(1.0..f64::INFINITY).contains(&options.oversample) {
        return Err(Error::InvalidArgument("oversample must be >= 1".into()));
    }
    let base = 2 * max_degree(space, cutoff);
    Ok((base as f64 * options.oversample).ceil() as u64)
}

/// Node-masking quadrature: uniform torus grids, Gauss–Legendre colatitude ×
/// uniform longitude on the sphere, every point for finite groups.
pub fn build_quadrature(space: &ModelSpace, cutoff: f64) -> Result<Quadrature> {
    build_quadrature_with(space, cutoff, &QuadratureOptions::default())
}

pub fn build_quadrature_with(space: &ModelSpace, cutoff: f64, options: &QuadratureOptions) -> Result<Quadrature> {
    let k = required_exactness(space, cutoff, options)?;
    Ok(build_with_exactness(space, k, options.min_points_per_axis, &Breakpoints::None, 1))
}

/// Region boundaries along which an adapted quadrature splits its cells.
#[derive(Clone, Debug, PartialEq)]
pub enum Breakpoints {
    None,
    /// Per axis, angles in `[0, 2π)`.
    Torus(Vec<Vec<f64>>),
    /// Colatitudes in `(0, π)`.
    Sphere(Vec<f64>),
    Product(Box<Breakpoints>, Box<Breakpoints>),
}

/// Quadrature whose cells never straddle the given boundaries: Gauss–Legendre
/// on every boundary-delimited segment. `refine` multiplies the per-segment
/// node count.
pub fn build_adapted_quadrature(
    space: &ModelSpace,
    cutoff: f64,
    options: &QuadratureOptions,
    breakpoints: &Breakpoints,
    refine: usize,
) -> Result<Quadrature> {
    let k = required_exactness(space, cutoff, options)?;
    Ok(build_with_exactness(space, k, options.min_points_per_axis, breakpoints, refine.max(1)))
}

fn build_with_exactness(
    space: &ModelSpace,
    k: u64,
    min_points: usize,
    breakpoints: &Breakpoints,
    refine: usize,
) -> Quadrature {
    match space {
        ModelSpace::Torus { dim } => {
            let cuts: Vec<Vec<f64>> = match breakpoints {
                Breakpoints::Torus(c) if c.len() == *dim => c.clone(),
                _ => vec![Vec::new(); *dim],
            };
            let axes: Vec<(Vec<f64>, Vec<f64>, u64)> =
                cuts.iter().map(|c| torus_axis(k, min_points, c, refine)).collect();
            let exact = axes.iter().map(|a| a.2).min().unwrap_or(u64::MAX);
            let mut nodes = vec![Vec::new()];
            let mut weights = vec![1.0];
            for (xs, ws, _) in &axes {
                let mut next_nodes = Vec::with_capacity(nodes.len() * xs.len());
                let mut next_weights = Vec::with_capacity(nodes.len() * xs.len());
                for (node, w) in nodes.iter().zip(&weights) {
                    for (x, wx) in xs.iter().zip(ws) {
                        let mut n = node.clone();
                        n.push(*x);
                        next_nodes.push(n);
                        next_weights.push(w * wx);
                    }
                }
                nodes = next_nodes;
                weights = next_weights;
            }
            Quadrature { nodes: nodes.into_iter().map(Point::Torus).collect(), weights, exactness_degree: exact }
        }
        ModelSpace::Sphere2 => {
            let cuts = match breakpoints {
                Breakpoints::Sphere(c) => c.clone(),
                _ => Vec::new(),
            };
            let n_phi = ((k + 1) as usize).max(min_points);
            let mut colat: Vec<(f64, f64)> = Vec::new();
            let mut exact_theta = u64::MAX;
            // segments in x = cos θ, from the north pole down
            let mut edges: Vec<f64> = cuts.iter().copied().filter(|t| *t > 0.0 && *t < PI).collect();
            edges.sort_by(f64::total_cmp);
            edges.dedup();
            let mut bounds = vec![0.0];
            bounds.extend(edges);
            bounds.push(PI);
            for pair in bounds.windows(2) {
                let (x_hi, x_lo) = (pair[0].cos(), pair[1].cos());
                let n = (k as usize + 2).div_ceil(2) * refine;
                exact_theta = exact_theta.min(2 * n as u64 - 1);
                let (gx, gw) = gauss_legendre(n);
                let half = 0.5 * (x_hi - x_lo);
                let mid = 0.5 * (x_hi + x_lo);
                for (x, w) in gx.iter().zip(&gw) {
                    let z = (mid + half * x).clamp(-1.0, 1.0);
                    colat.push((z.acos(), w * half));
                }
            }
            let dphi = 2.0 * PI / n_phi as f64;
            let mut nodes = Vec::with_capacity(colat.len() * n_phi);
            let mut weights = Vec::with_capacity(colat.len() * n_phi);
            for (theta, wt) in &colat {
                for j in 0..n_phi {
                    nodes.push(Point::Sphere { theta: *theta, phi: j as f64 * dphi });
                    weights.push(wt * dphi);
                }
            }
            Quadrature { nodes, weights, exactness_degree: exact_theta.min(n_phi as u64 - 1) }
        }
        ModelSpace::FiniteGroup { order, dim } => {
            let total = order.pow(*dim as u32);
            let nodes = (0..total)
                .map(|flat| {
                    let mut rem = flat;
                    let mut x = vec![0u64; *dim];
                    for axis in (0..*dim).rev() {
                        x[axis] = rem % order;
                        rem /= order;
                    }
                    Point::Group(x)
                })
                .collect();
            Quadrature { nodes, weights: vec![1.0; total as usize], exactness_degree: u64::MAX }
        }
        ModelSpace::Product(a, b) => {
            let (ba, bb) = match breakpoints {
                Breakpoints::Product(x, y) => (x.as_ref().clone(), y.as_ref().clone()),
                _ => (Breakpoints::None, Breakpoints::None),
            };
            Quadrature::tensor(
                build_with_exactness(a, k, min_points, &ba, refine),
                build_with_exactness(b, k, min_points, &bb, refine),
            )
        }
    }
}

/// Nodes, weights and exactness for one torus axis.
fn torus_axis(k: u64, min_points: usize, cuts: &[f64], refine: usize) -> (Vec<f64>, Vec<f64>, u64) {
    let two_pi = 2.0 * PI;
    let mut edges: Vec<f64> = cuts.iter().map(|c| c.rem_euclid(two_pi)).collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    if edges.is_empty() {
        let n = ((k + 1) as usize).max(min_points) * refine;
        let h = two_pi / n as f64;
        return ((0..n).map(|i| i as f64 * h).collect(), vec![h; n], n as u64 - 1);
    }
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for i in 0..edges.len() {
        let a = edges[i];
        let b = if i + 1 < edges.len() { edges[i + 1] } else { edges[0] + two_pi };
        let h = b - a;
        if h <= 0.0 {
            continue;
        }
        // Gauss–Legendre converges super-exponentially for e^{iκx} once n exceeds ~κh/4.
        let n = ((0.3 * k as f64 * h).ceil() as usize + 16).max(min_points.div_ceil(edges.len())) * refine;
        let (gx, gw) = gauss_legendre(n);
        for (x, w) in gx.iter().zip(&gw) {
            xs.push((a + 0.5 * h * (x + 1.0)).rem_euclid(two_pi));
            ws.push(0.5 * h * w);
        }
    }
    (xs, ws, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_small_rules() {
        let (x, w) = gauss_legendre(3);
        assert!((x[0] + 0.7745966692414834).abs() < 1e-15);
        assert!((w[1] - 0.8888888888888888).abs() < 1e-15);
        let (x, w) = gauss_legendre(4);
        assert!((x[3] - 0.8611363115940526).abs() < 1e-15);
        assert!((w[0] - 0.3478548451374538).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1usize, 2, 5, 17, 64] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn weights_sum_to_total_measure() {
        for space in [
            ModelSpace::Torus { dim: 1 },
            ModelSpace::Torus { dim: 2 },
            ModelSpace::Sphere2,
            ModelSpace::FiniteGroup { order: 8, dim: 1 },
            ModelSpace::product(ModelSpace::Torus { dim: 1 }, ModelSpace::Sphere2),
        ] {
            for cutoff in [0.0, 1.0, 3.7] {
                let q = build_quadrature(&space, cutoff).unwrap();
                let rel = (q.total_weight() - space.total_measure()).abs() / space.total_measure();
                assert!(rel < 1e-12, "{space} {cutoff}");
                assert!(q.weights.iter().all(|w| *w > 0.0));
            }
        }
    }

    #[test]
    fn finite_group_rule_is_counting_measure() {
        let q = build_quadrature(&ModelSpace::FiniteGroup { order: 8, dim: 1 }, 0.0).unwrap();
        assert_eq!(q.len(), 8);
        assert!(q.weights.iter().all(|w| *w == 1.0));
    }

    #[test]
    fn adapted_torus_axis_sums_to_circle() {
        let (xs, ws, _) = torus_axis(10, 1, &[0.0, PI], 1);
        assert!((ws.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-13);
        let inside: f64 = xs.iter().zip(&ws).filter(|(x, _)| **x <= PI).map(|(_, w)| w).sum();
        assert!((inside - PI).abs() < 1e-13);
    }

    #[test]
    fn coarse_rule_is_reported() {
        let q = build_quadrature(&ModelSpace::Sphere2, 2.0).unwrap();
        assert!(q.require_exact_for(1).is_ok());
        assert!(matches!(q.require_exact_for(5), Err(Error::CoarseQuadrature(_))));
    }
}
