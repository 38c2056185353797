//! Model domains with closed-form orthonormal eigenbases: flat tori
//! `R^d/(2πZ)^d`, the unit 2-sphere, finite groups `Z_N^d` under counting
//! measure, and Cartesian products of these.

mod basis;
pub mod finite_group;
pub mod legendre;
mod quadrature;

pub use basis::{enumerate_basis, evaluate, evaluate_row, BasisElement, Label, FREQUENCY_TOLERANCE};
pub use quadrature::{
    build_adapted_quadrature, build_quadrature, build_quadrature_with, gauss_legendre, Breakpoints, Quadrature,
    QuadratureOptions,
};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModelSpace {
    /// Flat torus of side 2π.
    Torus {
        dim: usize,
    },
    /// Round unit sphere in R^3, area 4π.
    Sphere2,
    /// `Z_N^d` with counting measure.
    FiniteGroup {
        order: u64,
        dim: usize,
    },
    Product(Box<ModelSpace>, Box<ModelSpace>),
}

/// A point of a model space in its native coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    /// Angles in `[0, 2π)` per axis.
    Torus(Vec<f64>),
    /// Colatitude `theta ∈ [0, π]`, longitude `phi ∈ [0, 2π)`.
    Sphere {
        theta: f64,
        phi: f64,
    },
    /// Residues in `[0, N)` per axis.
    Group(Vec<u64>),
    Product(Box<Point>, Box<Point>),
}

impl ModelSpace {
    pub fn torus(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("torus dimension must be at least 1".into()));
        }
        Ok(ModelSpace::Torus { dim })
    }

    pub fn sphere2() -> Self {
        ModelSpace::Sphere2
    }

    pub fn finite_group(order: u64, dim: usize) -> Result<Self> {
        if order == 0 || dim == 0 {
            return Err(Error::InvalidArgument("finite group needs N >= 1 and d >= 1".into()));
        }
        Ok(ModelSpace::FiniteGroup { order, dim })
    }

    pub fn product(a: ModelSpace, b: ModelSpace) -> Self {
        ModelSpace::Product(Box::new(a), Box::new(b))
    }

    pub fn dimension(&self) -> usize {
        match self {
            ModelSpace::Torus { dim } => *dim,
            ModelSpace::Sphere2 => 2,
            ModelSpace::FiniteGroup { dim, .. } => *dim,
            ModelSpace::Product(a, b) => a.dimension() + b.dimension(),
        }
    }

    /// `|M|`: `(2π)^d`, `4π`, `N^d`, or the product of the factors.
    pub fn total_measure(&self) -> f64 {
        match self {
            ModelSpace::Torus { dim } => (2.0 * PI).powi(*dim as i32),
            ModelSpace::Sphere2 => 4.0 * PI,
            ModelSpace::FiniteGroup { order, dim } => (*order as f64).powi(*dim as i32),
            ModelSpace::Product(a, b) => a.total_measure() * b.total_measure(),
        }
    }

    /// Volume of the unit ball in `R^d`.
    pub fn unit_ball_volume(&self) -> f64 {
        unit_ball_volume(self.dimension())
    }

    /// Leading Weyl coefficient `(2π)^{-d} |M| |B|`.
    pub fn weyl_constant(&self) -> f64 {
        let d = self.dimension() as i32;
        (2.0 * PI).powi(-d) * self.total_measure() * self.unit_ball_volume()
    }

    pub fn is_finite(&self) -> bool {
        match self {
            ModelSpace::FiniteGroup { .. } => true,
            ModelSpace::Product(a, b) => a.is_finite() && b.is_finite(),
            _ => false,
        }
    }

    /// Largest frequency in the spectrum, when the spectrum is finite.
    pub fn max_frequency(&self) -> Option<f64> {
        self.max_eigenvalue().map(|e| (e as f64).sqrt())
    }

    pub(crate) fn max_eigenvalue(&self) -> Option<u64> {
        match self {
            ModelSpace::FiniteGroup { order, dim } => {
                let half = order / 2;
                Some(half * half * *dim as u64)
            }
            ModelSpace::Product(a, b) => Some(a.max_eigenvalue()? + b.max_eigenvalue()?),
            _ => None,
        }
    }

    /// Whether `point` uses this space's coordinates and lies in its domain.
    pub fn contains_point(&self, point: &Point) -> bool {
        match (self, point) {
            (ModelSpace::Torus { dim }, Point::Torus(x)) => x.len() == *dim && x.iter().all(|v| v.is_finite()),
            (ModelSpace::Sphere2, Point::Sphere { theta, phi }) => (0.0..=PI).contains(theta) && phi.is_finite(),
            (ModelSpace::FiniteGroup { order, dim }, Point::Group(x)) => x.len() == *dim && x.iter().all(|v| v < order),
            (ModelSpace::Product(a, b), Point::Product(p, q)) => a.contains_point(p) && b.contains_point(q),
            _ => false,
        }
    }

    /// A point drawn from the normalized volume measure.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            ModelSpace::Torus { dim } => Point::Torus((0..*dim).map(|_| rng.random::<f64>() * 2.0 * PI).collect()),
            ModelSpace::Sphere2 => {
                let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
                Point::Sphere { theta: z.clamp(-1.0, 1.0).acos(), phi: rng.random::<f64>() * 2.0 * PI }
            }
            ModelSpace::FiniteGroup { order, dim } => {
                Point::Group((0..*dim).map(|_| rng.random_range(0..*order)).collect())
            }
            ModelSpace::Product(a, b) => {
                let p = a.random_point(rng);
                let q = b.random_point(rng);
                Point::Product(Box::new(p), Box::new(q))
            }
        }
    }

    /// Points where sup-norm estimates are usually attained (poles, origin).
    pub fn special_points(&self) -> Vec<Point> {
        match self {
            ModelSpace::Torus { dim } => vec![Point::Torus(vec![0.0; *dim])],
            ModelSpace::Sphere2 => vec![
                Point::Sphere { theta: 0.0, phi: 0.0 },
                Point::Sphere { theta: PI, phi: 0.0 },
                Point::Sphere { theta: PI / 2.0, phi: 0.0 },
            ],
            ModelSpace::FiniteGroup { dim, .. } => vec![Point::Group(vec![0; *dim])],
            ModelSpace::Product(a, b) => {
                let qs = b.special_points();
                a.special_points()
                    .into_iter()
                    .flat_map(|p| {
                        qs.iter()
                            .map(move |q| Point::Product(Box::new(p.clone()), Box::new(q.clone())))
                            .collect::<Vec<_>>()
                    })
                    .collect()
            }
        }
    }
}

pub fn unit_ball_volume(d: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_d = V_{d-2} 2π/d
    let mut volumes = [1.0, 2.0];
    for k in 2..=d {
        volumes[k % 2] *= 2.0 * PI / k as f64;
    }
    volumes[d % 2]
}

impl fmt::Display for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpace::Torus { dim } => write!(f, "torus:d={dim}"),
            ModelSpace::Sphere2 => write!(f, "sphere2"),
            ModelSpace::FiniteGroup { order, dim } => write!(f, "zn:N={order},d={dim}"),
            ModelSpace::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

impl FromStr for ModelSpace {
    type Err = Error;

    /// Parses `torus:d=2`, `sphere2`, `zn:N=256,d=1`, `product(torus:d=1,sphere2)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("product(").and_then(|r| r.strip_suffix(')')) {
            // `zn:N=3,d=1` contains a comma itself, so try every top-level split
            let mut last_err = Error::descriptor("space", s, "product needs two factors");
            for (i, _) in top_level_commas(inner) {
                match (inner[..i].parse::<ModelSpace>(), inner[i + 1..].parse::<ModelSpace>()) {
                    (Ok(a), Ok(b)) => return Ok(ModelSpace::product(a, b)),
                    (Err(e), _) | (_, Err(e)) => last_err = e,
                }
            }
            return Err(last_err);
        }
        if s == "sphere2" || s == "sphere" {
            return Ok(ModelSpace::Sphere2);
        }
        let (kind, params) = s.split_once(':').ok_or_else(|| Error::descriptor("space", s, "expected kind:params"))?;
        let mut dim = None;
        let mut order = None;
        for kv in params.split(',') {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::descriptor("space", kv, "expected key=value"))?;
            let parsed: u64 =
                v.trim().parse().map_err(|_| Error::descriptor("space", v, "expected a nonnegative integer"))?;
            match k.trim() {
                "d" => dim = Some(parsed as usize),
                "N" | "n" => order = Some(parsed),
                other => return Err(Error::descriptor("space", other, "unknown parameter")),
            }
        }
        match kind.trim() {
            "torus" => ModelSpace::torus(dim.unwrap_or(1)),
            "zn" | "group" => {
                let order = order.ok_or_else(|| Error::descriptor("space", s, "missing N"))?;
                ModelSpace::finite_group(order, dim.unwrap_or(1))
            }
            other => Err(Error::descriptor("space", other, "unknown space kind")),
        }
    }
}

fn top_level_commas(s: &str) -> Vec<(usize, char)> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => out.push((i, c)),
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_descriptors() {
        assert_eq!("torus:d=2".parse::<ModelSpace>().unwrap(), ModelSpace::Torus { dim: 2 });
        assert_eq!("sphere2".parse::<ModelSpace>().unwrap(), ModelSpace::Sphere2);
        assert_eq!("zn:N=256,d=1".parse::<ModelSpace>().unwrap(), ModelSpace::FiniteGroup { order: 256, dim: 1 });
        let p: ModelSpace = "product(torus:d=1,sphere2)".parse().unwrap();
        assert_eq!(p, ModelSpace::product(ModelSpace::Torus { dim: 1 }, ModelSpace::Sphere2));
        assert_eq!(p.to_string(), "product(torus:d=1,sphere2)");
        let nested: ModelSpace = "product(product(torus:d=1,torus:d=1),zn:N=3,d=1)".parse().unwrap();
        assert_eq!(nested.dimension(), 3);
    }

    #[test]
    fn rejects_bad_descriptors() {
        for bad in ["torus:d=0", "cube:d=2", "zn:d=2", "torus:d=x", "product(sphere2)", "torus"] {
            assert!(bad.parse::<ModelSpace>().is_err(), "{bad}");
        }
    }

    #[test]
    fn measures_and_ball_volumes() {
        assert!((ModelSpace::Torus { dim: 2 }.total_measure() - 4.0 * PI * PI).abs() < 1e-12);
        assert!((ModelSpace::Sphere2.total_measure() - 4.0 * PI).abs() < 1e-12);
        assert_eq!(ModelSpace::FiniteGroup { order: 4, dim: 3 }.total_measure(), 64.0);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert_eq!(unit_ball_volume(1), 2.0);
        // Weyl constant on the sphere and the torus.
        assert!((ModelSpace::Sphere2.weyl_constant() - 1.0).abs() < 1e-14);
        assert!((ModelSpace::Torus { dim: 2 }.weyl_constant() - PI).abs() < 1e-13);
    }
}
