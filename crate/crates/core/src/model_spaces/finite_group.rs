//! Fourier analysis on `Z_N^d` with the Haar pair used by the group
//! uncertainty principle: counting measure on the group, and weight `N^{-d}`
//! per character on the dual, so that
//! `f̂(χ) = Σ_x f(x) conj χ(x)` and `f(x) = N^{-d} Σ_χ f̂(χ) χ(x)`.
//!
//! Arrays are flat, row-major over `Z_N^d` (last axis fastest).

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};

fn transform_axes(order: u64, dim: usize, values: &[Complex64], direction: FftDirection) -> Result<Vec<Complex64>> {
    let n = order as usize;
    let total = n.checked_pow(dim as u32).ok_or_else(|| Error::InvalidArgument("group too large".into()))?;
    if values.len() != total {
        return Err(Error::InvalidArgument(format!(
            "expected {total} samples on Z_{order}^{dim}, got {}",
            values.len()
        )));
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft(n, direction);
    let mut data = values.to_vec();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        for base in 0..total {
            // visit each line once: the axis coordinate of `base` must be zero
            if !(base / stride).is_multiple_of(n) {
                continue;
            }
            for (i, slot) in line.iter_mut().enumerate() {
                *slot = data[base + i * stride];
            }
            fft.process(&mut line);
            for (i, v) in line.iter().enumerate() {
                data[base + i * stride] = *v;
            }
        }
    }
    Ok(data)
}

/// `f̂(k) = Σ_x f(x) e^{-2πi⟨k,x⟩/N}`.
pub fn fourier_transform(order: u64, dim: usize, values: &[Complex64]) -> Result<Vec<Complex64>> {
    transform_axes(order, dim, values, FftDirection::Forward)
}

/// `f(x) = N^{-d} Σ_k f̂(k) e^{2πi⟨k,x⟩/N}`.
pub fn inverse_fourier_transform(order: u64, dim: usize, coefficients: &[Complex64]) -> Result<Vec<Complex64>> {
    let scale = (order as f64).powi(-(dim as i32));
    let mut out = transform_axes(order, dim, coefficients, FftDirection::Inverse)?;
    for v in &mut out {
        *v *= scale;
    }
    Ok(out)
}

/// Flat positions whose modulus exceeds `rel_tol · max |v|`.
pub fn support(values: &[Complex64], rel_tol: f64) -> Vec<usize> {
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Vec::new();
    }
    values.iter().enumerate().filter(|(_, v)| v.norm() > rel_tol * peak).map(|(i, _)| i).collect()
}
