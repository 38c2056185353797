//! Fully normalized associated Legendre functions.
//!
//! `table[ℓ(ℓ+1)/2 + m]` holds `P̄_ℓ^m(cos θ)` for `0 ≤ m ≤ ℓ ≤ lmax`, scaled so that
//! `Y_ℓ^m(θ, φ) = P̄_ℓ^m(cos θ) e^{imφ}` is unit-norm on the sphere of area 4π.
//! The Condon–Shortley phase `(-1)^m` is included.
//!
//! Values are produced by the ascending recurrence in ℓ on already-normalized
//! quantities, so nothing overflows for large degree:
//!
//! ```text
//! P̄_m^m     = -sqrt((2m+1)/(2m)) sin θ P̄_{m-1}^{m-1},   P̄_0^0 = 1/sqrt(4π)
//! P̄_{m+1}^m = sqrt(2m+3) cos θ P̄_m^m
//! P̄_ℓ^m     = a_ℓm (cos θ P̄_{ℓ-1}^m - P̄_{ℓ-2}^m / a_{ℓ-1,m}),  a_ℓm = sqrt((4ℓ²-1)/(ℓ²-m²))
//! ```

use std::f64::consts::PI;

#[inline]
pub fn table_index(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

#[inline]
fn recurrence_coeff(l: usize, m: usize) -> f64 {
    let (l, m) = (l as f64, m as f64);
    ((4.0 * l * l - 1.0) / (l * l - m * m)).sqrt()
}

/// All normalized `P̄_ℓ^m` for `ℓ ≤ lmax` at colatitude with the given cosine and sine.
pub fn normalized_table(lmax: usize, cos_theta: f64, sin_theta: f64) -> Vec<f64> {
    let mut table = vec![0.0; table_index(lmax, lmax) + 1];
    let mut diag = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=lmax {
        if m > 0 {
            let mf = m as f64;
            diag *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_theta;
        }
        table[table_index(m, m)] = diag;
        if m == lmax {
            break;
        }
        let mut prev2 = diag;
        let mut prev1 = (2.0 * m as f64 + 3.0).sqrt() * cos_theta * diag;
        table[table_index(m + 1, m)] = prev1;
        let mut a_prev = recurrence_coeff(m + 1, m);
        for l in (m + 2)..=lmax {
            let a = recurrence_coeff(l, m);
            let next = a * (cos_theta * prev1 - prev2 / a_prev);
            table[table_index(l, m)] = next;
            prev2 = prev1;
            prev1 = next;
            a_prev = a;
        }
    }
    table
}

/// Single normalized value `P̄_ℓ^m(cos θ)` for `m ≥ 0`.
pub fn normalized(l: usize, m: usize, cos_theta: f64, sin_theta: f64) -> f64 {
    debug_assert!(m <= l);
    let mut diag = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=m {
        let kf = k as f64;
        diag *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * sin_theta;
    }
    if l == m {
        return diag;
    }
    let mut prev2 = diag;
    let mut prev1 = (2.0 * m as f64 + 3.0).sqrt() * cos_theta * diag;
    let mut a_prev = recurrence_coeff(m + 1, m);
    for k in (m + 2)..=l {
        let a = recurrence_coeff(k, m);
        let next = a * (cos_theta * prev1 - prev2 / a_prev);
        prev2 = prev1;
        prev1 = next;
        a_prev = a;
    }
    prev1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u64) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    /// Unnormalized P_ℓ^m with Condon–Shortley phase via the textbook
    /// recurrence (Numerical Recipes plgndr, sign kept).
    fn plgndr(l: usize, m: usize, x: f64) -> f64 {
        let mut pmm = 1.0;
        if m > 0 {
            let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
            let mut fact = 1.0;
            for _ in 0..m {
                pmm *= -fact * somx2;
                fact += 2.0;
            }
        }
        if l == m {
            return pmm;
        }
        let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
        if l == m + 1 {
            return pmmp1;
        }
        let mut pll = 0.0;
        for ll in (m + 2)..=l {
            pll = (x * (2 * ll - 1) as f64 * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
            pmm = pmmp1;
            pmmp1 = pll;
        }
        pll
    }

    #[test]
    fn matches_unnormalized_recurrence_for_small_degree() {
        for &theta in &[0.1_f64, 0.7, 1.3, 2.2, 3.0] {
            let (s, c) = theta.sin_cos();
            let table = normalized_table(10, c, s);
            for l in 0..=10usize {
                for m in 0..=l {
                    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial((l - m) as u64)
                        / factorial((l + m) as u64))
                    .sqrt();
                    let expected = norm * plgndr(l, m, c);
                    let got = table[table_index(l, m)];
                    assert!((got - expected).abs() < 1e-12, "l={l} m={m} {got} vs {expected}");
                    assert!((normalized(l, m, c, s) - got).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn closed_forms() {
        let theta = 0.9_f64;
        let (s, c) = theta.sin_cos();
        assert!((normalized(0, 0, c, s) - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        assert!((normalized(1, 0, c, s) - (3.0 / (4.0 * PI)).sqrt() * c).abs() < 1e-15);
        assert!((normalized(1, 1, c, s) + (3.0 / (8.0 * PI)).sqrt() * s).abs() < 1e-15);
    }

    #[test]
    fn large_degree_stays_finite() {
        let (s, c) = 1.0_f64.sin_cos();
        let table = normalized_table(400, c, s);
        assert!(table.iter().all(|v| v.is_finite()));
        // addition theorem at degree 300
        let l = 300;
        let sum: f64 = (0..=l)
            .map(|m| {
                let v = table[table_index(l, m)];
                if m == 0 {
                    v * v
                } else {
                    2.0 * v * v
                }
            })
            .sum();
        assert!((sum - (2 * l + 1) as f64 / (4.0 * PI)).abs() < 1e-10);
    }
}
