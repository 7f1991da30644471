use std::f64::consts::{PI, SQRT_2};

use super::Direction;
use crate::linalg::C64;

/// Position of `(K, Q)` in a flat table covering `0 ≤ K ≤ K_max`.
#[inline]
pub fn lm_index(k: usize, q: i64) -> usize {
    ((k * k + k) as i64 + q) as usize
}

/// Number of `(K, Q)` pairs with `K ≤ k_max`.
#[inline]
pub fn lm_count(k_max: usize) -> usize {
    (k_max + 1) * (k_max + 1)
}

/// Normalized associated Legendre functions with the Condon-Shortley phase,
/// `N_lm P_l^m(cos θ)` for `0 ≤ m ≤ l ≤ l_max`, flat-indexed by `lm_index(l, m)`.
fn legendre_table(l_max: usize, theta: f64) -> Vec<f64> {
    let (s, x) = theta.sin_cos();
    let s = s.abs();
    let mut p = vec![0.0; lm_count(l_max)];
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=l_max {
        if m > 0 {
            pmm *= -((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        p[lm_index(m, m as i64)] = pmm;
        if m < l_max {
            let next = ((2 * m + 3) as f64).sqrt() * x * pmm;
            p[lm_index(m + 1, m as i64)] = next;
            let (mut a, mut b) = (pmm, next);
            for l in (m + 2)..=l_max {
                let lf = l as f64;
                let mf = m as f64;
                let alpha = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let beta = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
                let c = alpha * (x * b - beta * a);
                p[lm_index(l, m as i64)] = c;
                a = b;
                b = c;
            }
        }
    }
    p
}

/// All complex `Y_KQ(α)` for `K ≤ k_max`, flat-indexed by [`lm_index`].
pub fn complex_harmonics(k_max: usize, alpha: Direction) -> Vec<C64> {
    let leg = legendre_table(k_max, alpha.theta);
    let mut out = vec![C64::new(0.0, 0.0); lm_count(k_max)];
    for k in 0..=k_max {
        for q in 0..=k as i64 {
            let y = C64::from_polar(1.0, q as f64 * alpha.phi) * leg[lm_index(k, q)];
            out[lm_index(k, q)] = y;
            if q > 0 {
                let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                out[lm_index(k, -q)] = y.conj() * sign;
            }
        }
    }
    out
}

/// Real spherical harmonics for `K ≤ k_max`, flat-indexed by [`lm_index`].
///
/// `Q > 0`: `√2 (−1)^Q Re Y_KQ`; `Q < 0`: `√2 (−1)^Q Im Y_K|Q|`; `Q = 0`: `Y_K0`.
/// This is the unitary recombination given by [`super::real_combination`].
pub fn real_harmonics(k_max: usize, alpha: Direction) -> Vec<f64> {
    let leg = legendre_table(k_max, alpha.theta);
    let mut out = vec![0.0; lm_count(k_max)];
    for k in 0..=k_max {
        out[lm_index(k, 0)] = leg[lm_index(k, 0)];
        for q in 1..=k as i64 {
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            let base = SQRT_2 * sign * leg[lm_index(k, q)];
            let (sin, cos) = (q as f64 * alpha.phi).sin_cos();
            out[lm_index(k, q)] = base * cos;
            out[lm_index(k, -q)] = base * sin;
        }
    }
    out
}

/// Complex spherical harmonic `Y_KQ(θ, φ)`; zero when `|Q| > K`.
pub fn spherical_harmonic(k: usize, q: i64, alpha: Direction) -> C64 {
    if q.unsigned_abs() as usize > k {
        return C64::new(0.0, 0.0);
    }
    complex_harmonics(k, alpha)[lm_index(k, q)]
}

/// Real spherical harmonic in the basis of [`real_harmonics`]; zero when `|Q| > K`.
pub fn real_spherical_harmonic(k: usize, q: i64, alpha: Direction) -> f64 {
    if q.unsigned_abs() as usize > k {
        return 0.0;
    }
    real_harmonics(k, alpha)[lm_index(k, q)]
}
