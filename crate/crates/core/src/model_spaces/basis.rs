use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use super::legendre::{normalized, normalized_table, table_index};
use super::{ModelSpace, Point};
use crate::error::{Error, Result};

/// Slack used when comparing floating-point frequencies against a cutoff or
/// against the members of a spectral set.
pub const FREQUENCY_TOLERANCE: f64 = 1e-9;

/// Structured key of an eigenfunction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// Lattice vector `m ∈ Z^d` of `e_m(x) = (2π)^{-d/2} e^{i⟨x,m⟩}`.
    Lattice(Vec<i64>),
    /// Complex spherical harmonic `Y_ℓ^m`.
    Harmonic {
        l: u32,
        m: i32,
    },
    /// Character index `k ∈ Z_N^d`.
    Character(Vec<u64>),
    Pair(Box<Label>, Box<Label>),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Lattice(m) => write_tuple(f, m),
            Label::Harmonic { l, m } => write!(f, "(l={l},m={m})"),
            Label::Character(k) => write_tuple(f, k),
            Label::Pair(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

fn write_tuple<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, ")")
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    /// Position in the global enumeration (0-based).
    pub index: usize,
    pub label: Label,
    /// Eigenvalue of `-Δ`: `|m|²`, `ℓ(ℓ+1)`, or the centered `|k|²` for characters.
    /// Always an integer on the model spaces, so degeneracy classes compare exactly.
    pub eigenvalue: u64,
    /// `λ_j = sqrt(eigenvalue)`.
    pub frequency: f64,
    /// Joint eigenvalue of the commuting family of the space.
    pub joint: Vec<f64>,
}

impl BasisElement {
    /// Trigonometric / polynomial degree used to size quadratures.
    pub fn degree(&self) -> u64 {
        label_degree(&self.label)
    }
}

fn label_degree(label: &Label) -> u64 {
    match label {
        Label::Lattice(m) => m.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0),
        Label::Harmonic { l, .. } => *l as u64,
        Label::Character(_) => 0,
        Label::Pair(a, b) => label_degree(a).max(label_degree(b)),
    }
}

struct Raw {
    label: Label,
    eigenvalue: u64,
    joint: Vec<f64>,
}

fn within_cutoff(eigenvalue: u64, cutoff: f64) -> bool {
    (eigenvalue as f64).sqrt() <= cutoff + FREQUENCY_TOLERANCE
}

fn raw_elements(space: &ModelSpace, cutoff: f64) -> Vec<Raw> {
    match space {
        ModelSpace::Torus { dim } => {
            let k = (cutoff + FREQUENCY_TOLERANCE).floor() as i64;
            let mut out = Vec::new();
            let mut m = vec![-k; *dim];
            loop {
                let eig: u64 = m.iter().map(|v| (v * v) as u64).sum();
                if within_cutoff(eig, cutoff) {
                    out.push(Raw {
                        label: Label::Lattice(m.clone()),
                        eigenvalue: eig,
                        joint: m.iter().map(|&v| v as f64).collect(),
                    });
                }
                // odometer increment
                let mut axis = 0;
                loop {
                    if axis == *dim {
                        return out;
                    }
                    m[axis] += 1;
                    if m[axis] > k {
                        m[axis] = -k;
                        axis += 1;
                    } else {
                        break;
                    }
                }
            }
        }
        ModelSpace::Sphere2 => {
            let mut out = Vec::new();
            let mut l: u64 = 0;
            while within_cutoff(l * (l + 1), cutoff) {
                for m in -(l as i64)..=(l as i64) {
                    out.push(Raw {
                        label: Label::Harmonic { l: l as u32, m: m as i32 },
                        eigenvalue: l * (l + 1),
                        joint: vec![m as f64, (l * (l + 1)) as f64],
                    });
                }
                l += 1;
            }
            out
        }
        ModelSpace::FiniteGroup { order, dim } => {
            let total = order.pow(*dim as u32);
            let mut out = Vec::new();
            for flat in 0..total {
                let mut rem = flat;
                let mut k = vec![0u64; *dim];
                for axis in (0..*dim).rev() {
                    k[axis] = rem % order;
                    rem /= order;
                }
                let eig = k
                    .iter()
                    .map(|&v| {
                        let c = v.min(order - v);
                        c * c
                    })
                    .sum();
                if within_cutoff(eig, cutoff) {
                    out.push(Raw {
                        joint: k.iter().map(|&v| v as f64).collect(),
                        label: Label::Character(k),
                        eigenvalue: eig,
                    });
                }
            }
            out
        }
        ModelSpace::Product(a, b) => {
            let left = raw_elements(a, cutoff);
            let right = raw_elements(b, cutoff);
            let mut out = Vec::new();
            for x in &left {
                for y in &right {
                    let eig = x.eigenvalue + y.eigenvalue;
                    if within_cutoff(eig, cutoff) {
                        let mut joint = x.joint.clone();
                        joint.extend_from_slice(&y.joint);
                        out.push(Raw {
                            label: Label::Pair(Box::new(x.label.clone()), Box::new(y.label.clone())),
                            eigenvalue: eig,
                            joint,
                        });
                    }
                }
            }
            out
        }
    }
}

/// All eigenfunctions with `λ_j ≤ cutoff`, with multiplicity, ordered by
/// eigenvalue and then lexicographically by label.
///
/// The enumeration is prefix-stable: the list for a smaller cutoff is a prefix
/// of the list for a larger one, so `index` is a global index.
pub fn enumerate_basis(space: &ModelSpace, cutoff: f64) -> Result<Vec<BasisElement>> {
    if !cutoff.is_finite() {
        return Err(Error::InvalidArgument(format!("cutoff must be finite, got {cutoff}")));
    }
    if cutoff < 0.0 {
        return Err(Error::InvalidArgument(format!("cutoff must be nonnegative, got {cutoff}")));
    }
    let mut raw = raw_elements(space, cutoff);
    raw.sort_by(|x, y| (x.eigenvalue, &x.label).cmp(&(y.eigenvalue, &y.label)));
    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(index, r)| BasisElement {
            index,
            frequency: (r.eigenvalue as f64).sqrt(),
            label: r.label,
            eigenvalue: r.eigenvalue,
            joint: r.joint,
        })
        .collect())
}

fn mismatch(label: &Label, point: &Point, space: &ModelSpace) -> Error {
    Error::SpaceMismatch(format!("label {label} / point {point:?} do not belong to {space}"))
}

fn eval_label(space: &ModelSpace, label: &Label, point: &Point) -> Result<Complex64> {
    match (space, label, point) {
        (ModelSpace::Torus { dim }, Label::Lattice(m), Point::Torus(x)) if m.len() == *dim && x.len() == *dim => {
            let phase: f64 = m.iter().zip(x).map(|(&mi, &xi)| mi as f64 * xi).sum();
            let norm = (2.0 * PI).powf(-(*dim as f64) / 2.0);
            Ok(Complex64::from_polar(norm, phase))
        }
        (ModelSpace::Sphere2, Label::Harmonic { l, m }, Point::Sphere { theta, phi }) if m.unsigned_abs() <= *l => {
            let (s, c) = theta.sin_cos();
            let am = m.unsigned_abs() as usize;
            let p = normalized(*l as usize, am, c, s);
            Ok(harmonic_from_legendre(p, *m, *phi))
        }
        (ModelSpace::FiniteGroup { order, dim }, Label::Character(k), Point::Group(x))
            if k.len() == *dim && x.len() == *dim =>
        {
            Ok(character(*order, *dim, k, x))
        }
        (ModelSpace::Product(a, b), Label::Pair(la, lb), Point::Product(pa, pb)) => {
            Ok(eval_label(a, la, pa)? * eval_label(b, lb, pb)?)
        }
        _ => Err(mismatch(label, point, space)),
    }
}

fn character(order: u64, dim: usize, k: &[u64], x: &[u64]) -> Complex64 {
    let residue = k.iter().zip(x).fold(0u128, |acc, (&ki, &xi)| (acc + ki as u128 * xi as u128) % order as u128);
    let norm = (order as f64).powf(-(dim as f64) / 2.0);
    Complex64::from_polar(norm, 2.0 * PI * residue as f64 / order as f64)
}

/// `Y_ℓ^m` from `P̄_ℓ^{|m|}`, using `Y_ℓ^{-m} = (-1)^m conj(Y_ℓ^m)`.
#[inline]
fn harmonic_from_legendre(p: f64, m: i32, phi: f64) -> Complex64 {
    if m >= 0 {
        Complex64::from_polar(p, m as f64 * phi)
    } else {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::from_polar(sign * p, m as f64 * phi)
    }
}

/// Value of the orthonormal eigenfunction `element` at `point`.
pub fn evaluate(space: &ModelSpace, element: &BasisElement, point: &Point) -> Result<Complex64> {
    eval_label(space, &element.label, point)
}

/// Values of several eigenfunctions at one point; the sphere shares a single
/// Legendre table across all requested degrees.
pub fn evaluate_row(space: &ModelSpace, elements: &[BasisElement], point: &Point) -> Result<Vec<Complex64>> {
    let labels: Vec<&Label> = elements.iter().map(|e| &e.label).collect();
    eval_labels(space, &labels, point)
}

fn eval_labels(space: &ModelSpace, labels: &[&Label], point: &Point) -> Result<Vec<Complex64>> {
    match (space, point) {
        (ModelSpace::Sphere2, Point::Sphere { theta, phi }) => {
            let mut lmax = 0usize;
            for label in labels {
                match label {
                    Label::Harmonic { l, m } if m.unsigned_abs() <= *l => lmax = lmax.max(*l as usize),
                    other => return Err(mismatch(other, point, space)),
                }
            }
            let (s, c) = theta.sin_cos();
            let table = normalized_table(lmax, c, s);
            Ok(labels
                .iter()
                .map(|label| match label {
                    Label::Harmonic { l, m } => {
                        let p = table[table_index(*l as usize, m.unsigned_abs() as usize)];
                        harmonic_from_legendre(p, *m, *phi)
                    }
                    _ => unreachable!(),
                })
                .collect())
        }
        (ModelSpace::Product(a, b), Point::Product(pa, pb)) => {
            let mut left = Vec::with_capacity(labels.len());
            let mut right = Vec::with_capacity(labels.len());
            for label in labels {
                match label {
                    Label::Pair(la, lb) => {
                        left.push(la.as_ref());
                        right.push(lb.as_ref());
                    }
                    other => return Err(mismatch(other, point, space)),
                }
            }
            let va = eval_labels(a, &left, pa)?;
            let vb = eval_labels(b, &right, pb)?;
            Ok(va.into_iter().zip(vb).map(|(x, y)| x * y).collect())
        }
        _ => labels.iter().map(|l| eval_label(space, l, point)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_unit_ball_has_five_elements() {
        let b = enumerate_basis(&ModelSpace::Torus { dim: 2 }, 1.0).unwrap();
        let labels: Vec<_> = b.iter().map(|e| e.label.clone()).collect();
        // brute-force lattice enumeration oracle
        let mut expected = Vec::new();
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                if x * x + y * y <= 1 {
                    expected.push((x * x + y * y, vec![x, y]));
                }
            }
        }
        expected.sort();
        let expected: Vec<_> = expected.into_iter().map(|(_, m)| Label::Lattice(m)).collect();
        assert_eq!(labels, expected);
        assert_eq!(b.len(), 5);
        assert_eq!(b[0].label, Label::Lattice(vec![0, 0]));
    }

    #[test]
    fn sphere_degeneracy_and_order() {
        let b = enumerate_basis(&ModelSpace::Sphere2, 6f64.sqrt()).unwrap();
        assert_eq!(b.len(), 9);
        assert!(b.windows(2).all(|w| w[0].frequency <= w[1].frequency));
        assert_eq!(b[1].label, Label::Harmonic { l: 1, m: -1 });
        assert_eq!(b[8].joint, vec![2.0, 6.0]);
    }

    #[test]
    fn finite_group_all_characters() {
        let space = ModelSpace::FiniteGroup { order: 4, dim: 1 };
        let b = enumerate_basis(&space, space.max_frequency().unwrap()).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b.iter().map(|e| e.eigenvalue).collect::<Vec<_>>(), vec![0, 1, 1, 4]);
    }

    #[test]
    fn enumeration_is_prefix_stable_and_deterministic() {
        let space = ModelSpace::product(ModelSpace::Torus { dim: 1 }, ModelSpace::Sphere2);
        let small = enumerate_basis(&space, 3.0).unwrap();
        let large = enumerate_basis(&space, 5.0).unwrap();
        assert_eq!(&large[..small.len()], &small[..]);
        assert_eq!(large, enumerate_basis(&space, 5.0).unwrap());
    }

    #[test]
    fn rejects_unbounded_cutoff() {
        assert!(enumerate_basis(&ModelSpace::Sphere2, f64::INFINITY).is_err());
        assert!(enumerate_basis(&ModelSpace::Sphere2, f64::NAN).is_err());
        assert!(enumerate_basis(&ModelSpace::Sphere2, -1.0).is_err());
    }

    #[test]
    fn point_values() {
        let torus = ModelSpace::Torus { dim: 1 };
        let e0 = &enumerate_basis(&torus, 0.0).unwrap()[0];
        let v = evaluate(&torus, e0, &Point::Torus(vec![1.234])).unwrap();
        assert!((v.re - 0.398942).abs() < 1e-6 && v.im.abs() < 1e-15);

        let sphere = ModelSpace::Sphere2;
        let basis = enumerate_basis(&sphere, 2f64.sqrt()).unwrap();
        let p = Point::Sphere { theta: 0.8, phi: 2.1 };
        let y00 = evaluate(&sphere, &basis[0], &p).unwrap();
        assert!((y00.re - 0.282095).abs() < 1e-6);
        let y10 = evaluate(&sphere, &basis[2], &p).unwrap();
        assert!((y10.re - (3.0 / (4.0 * PI)).sqrt() * 0.8f64.cos()).abs() < 1e-15);
        let row = evaluate_row(&sphere, &basis, &p).unwrap();
        for (e, v) in basis.iter().zip(&row) {
            assert!((evaluate(&sphere, e, &p).unwrap() - v).norm() < 1e-15);
        }
        // Y_1^{-1} = -conj(Y_1^1)
        assert!((row[1] + row[3].conj()).norm() < 1e-15);
    }

    #[test]
    fn label_space_mismatch_is_an_error() {
        let torus = ModelSpace::Torus { dim: 1 };
        let sphere_elem = &enumerate_basis(&ModelSpace::Sphere2, 0.0).unwrap()[0];
        assert!(evaluate(&torus, sphere_elem, &Point::Torus(vec![0.0])).is_err());
        let e0 = &enumerate_basis(&torus, 0.0).unwrap()[0];
        assert!(evaluate(&torus, e0, &Point::Torus(vec![0.0, 1.0])).is_err());
    }
}
