use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angular::{
    complex_harmonics, ln_factorial, lm_count, lm_index, multipole_basis, real_combination,
    real_multipole_basis, Direction, Spin,
};
use crate::linalg::{trace_product, CMatrix, C64};
use crate::{Error, Result};

/// `ρ_KQ = tr(ρ T_KQ†)` for `0 ≤ K ≤ 2j`, flat-indexed by [`lm_index`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultipoleCoeffs {
    pub spin: Spin,
    pub values: Vec<C64>,
}

/// Coefficients of a P-function on spherical harmonics, `0 ≤ K ≤ 2j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PCoeffs {
    pub spin: Spin,
    pub values: Vec<C64>,
}

fn check_len(spin: Spin, len: usize) -> Result<()> {
    let n = lm_count(spin.k_max());
    if len > n {
        // anything past the table is a K > 2j component
        let k = (len as f64).sqrt().ceil() as i64 - 1;
        return Err(Error::IndexOutOfRange { k, q: 0, k_max: spin.k_max() as i64 });
    }
    if len < n {
        return Err(Error::DimensionMismatch { expected: n, found: len });
    }
    Ok(())
}

macro_rules! coeff_accessors {
    ($t:ty) => {
        impl $t {
            pub fn from_values(spin: Spin, values: Vec<C64>) -> Result<Self> {
                check_len(spin, values.len())?;
                Ok(Self { spin, values })
            }

            pub fn get(&self, k: usize, q: i64) -> Result<C64> {
                if k > self.spin.k_max() || q.unsigned_abs() as usize > k {
                    return Err(Error::IndexOutOfRange {
                        k: k as i64,
                        q,
                        k_max: self.spin.k_max() as i64,
                    });
                }
                Ok(self.values[lm_index(k, q)])
            }

            /// Largest violation of `c_{K,−Q} = (−1)^Q conj(c_KQ)`.
            pub fn hermiticity_defect(&self) -> f64 {
                let mut worst = 0.0f64;
                for k in 0..=self.spin.k_max() {
                    for q in 0..=k as i64 {
                        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                        let a = self.values[lm_index(k, -q)];
                        let b = self.values[lm_index(k, q)].conj() * sign;
                        worst = worst.max((a - b).norm());
                    }
                }
                worst
            }
        }
    };
}

coeff_accessors!(MultipoleCoeffs);
coeff_accessors!(PCoeffs);

/// `√(4π) (2j)! / √((2j−K)! (2j+K+1)!)`, the factor taking `P_KQ` to `ρ_KQ`.
/// Vanishes for `K > 2j`, where the Gamma function in the denominator diverges.
pub fn p_scale_factor(spin: Spin, k: usize) -> f64 {
    let tj = spin.twice_j() as u64;
    let k = k as u64;
    if k > tj {
        return 0.0;
    }
    let ln = ln_factorial(tj) - 0.5 * (ln_factorial(tj - k) + ln_factorial(tj + k + 1));
    (4.0 * PI).sqrt() * ln.exp()
}

pub fn to_multipole(rho: &CMatrix, spin: Spin) -> Result<MultipoleCoeffs> {
    if rho.nrows() != spin.dim() || rho.ncols() != spin.dim() {
        return Err(Error::DimensionMismatch { expected: spin.dim(), found: rho.nrows() });
    }
    let values = multipole_basis(spin)
        .iter()
        .map(|t| trace_product(rho, &t.matrix.adjoint()))
        .collect();
    Ok(MultipoleCoeffs { spin, values })
}

pub fn from_multipole(coeffs: &MultipoleCoeffs) -> CMatrix {
    let d = coeffs.spin.dim();
    let mut out = CMatrix::zeros(d, d);
    for (t, c) in multipole_basis(coeffs.spin).iter().zip(&coeffs.values) {
        out += &t.matrix * *c;
    }
    out
}

pub fn p_coeffs_from_rho(rho: &MultipoleCoeffs) -> PCoeffs {
    let spin = rho.spin;
    let values = map_ranks(spin, &rho.values, |k| 1.0 / p_scale_factor(spin, k));
    PCoeffs { spin, values }
}

pub fn rho_coeffs_from_p(p: &PCoeffs) -> MultipoleCoeffs {
    let spin = p.spin;
    let values = map_ranks(spin, &p.values, |k| p_scale_factor(spin, k));
    MultipoleCoeffs { spin, values }
}

fn map_ranks(spin: Spin, values: &[C64], factor: impl Fn(usize) -> f64) -> Vec<C64> {
    let mut out = values.to_vec();
    for k in 0..=spin.k_max() {
        let f = factor(k);
        for q in -(k as i64)..=k as i64 {
            out[lm_index(k, q)] *= f;
        }
    }
    out
}

/// `Σ_{K ≤ 2j} P_KQ Y_KQ(α)`, real for Hermitian-symmetric coefficients.
pub fn evaluate_truncated_p(p: &PCoeffs, alpha: Direction) -> f64 {
    let y = complex_harmonics(p.spin.k_max(), alpha);
    p.values.iter().zip(&y).map(|(c, y)| c * y).sum::<C64>().re
}

/// Real-basis coefficients `c^real_r = Σ_q conj(U_rq) c_q` of a
/// Hermitian-symmetric coefficient table, in [`lm_index`] order.
pub fn real_coefficients(k_max: usize, values: &[C64]) -> Vec<f64> {
    let mut out = vec![0.0; lm_count(k_max)];
    for k in 0..=k_max {
        for q in -(k as i64)..=k as i64 {
            let v: C64 = real_combination(k, q)
                .iter()
                .map(|&(qq, u)| u.conj() * values[lm_index(k, qq)])
                .sum();
            out[lm_index(k, q)] = v.re;
        }
    }
    out
}

/// Real-basis P coefficients computed directly as `tr(ρ T^real_KQ) / c_K`.
pub fn real_p_coefficients(rho: &CMatrix, spin: Spin) -> Result<Vec<f64>> {
    if rho.nrows() != spin.dim() {
        return Err(Error::DimensionMismatch { expected: spin.dim(), found: rho.nrows() });
    }
    Ok(real_multipole_basis(spin)
        .iter()
        .map(|t| trace_product(rho, &t.matrix).re / p_scale_factor(spin, t.k))
        .collect())
}

impl PCoeffs {
    /// Coefficients in the real spherical-harmonic basis.
    pub fn real_values(&self) -> Vec<f64> {
        real_coefficients(self.spin.k_max(), &self.values)
    }

    /// The truncated δ-function at `alpha0`: `P_KQ = Y*_KQ(α0)`.
    pub fn truncated_delta(spin: Spin, alpha0: Direction) -> Self {
        let values = complex_harmonics(spin.k_max(), alpha0).iter().map(|y| y.conj()).collect();
        Self { spin, values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{coherent_ket, real_harmonics};
    use crate::linalg::{hs_norm, maximally_mixed};
    use crate::lpsolve::fibonacci_grid;
    use crate::random::{random_density, rng_from_seed};

    #[test]
    fn maximally_mixed_has_only_monopole() {
        for tj in 1..=5 {
            let spin = Spin::new(tj).unwrap();
            let c = to_multipole(&maximally_mixed(spin.dim()), spin).unwrap();
            let expected = 1.0 / (spin.dim() as f64).sqrt();
            assert!((c.values[0] - C64::new(expected, 0.0)).norm() < 1e-14);
            assert!(c.values[1..].iter().all(|v| v.norm() < 1e-14));
            let p = p_coeffs_from_rho(&c);
            assert!((p.values[0].re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn top_state_of_spin_one_brute_force() {
        let spin = Spin::ONE;
        let mut rho = CMatrix::zeros(3, 3);
        rho[(0, 0)] = C64::new(1.0, 0.0);
        let c = to_multipole(&rho, spin).unwrap();
        // brute-force: only diagonal operators contribute, (T_K0)_{00}
        let basis = multipole_basis(spin);
        for k in 0..=2usize {
            let expect = basis[lm_index(k, 0)].matrix[(0, 0)].conj();
            assert!((c.get(k, 0).unwrap() - expect).norm() < 1e-15);
            assert!(expect.norm() > 0.1);
        }
        assert!((c.get(1, 0).unwrap().re - 1.0 / 2f64.sqrt()).abs() < 1e-14);
        assert!((c.get(2, 0).unwrap().re - 1.0 / 6f64.sqrt()).abs() < 1e-14);
        for q in [-2, -1, 1, 2] {
            assert!(c.get(2, q).unwrap().norm() < 1e-15);
        }
        assert!(hs_norm(&(from_multipole(&c) - rho)) < 1e-14);
    }

    #[test]
    fn roundtrip_random_states() {
        let mut rng = rng_from_seed(11);
        for tj in 1..=4 {
            let spin = Spin::new(tj).unwrap();
            for _ in 0..20 {
                let rho = random_density(spin.dim(), &mut rng);
                let c = to_multipole(&rho, spin).unwrap();
                assert!(c.hermiticity_defect() < 1e-12);
                assert!(hs_norm(&(from_multipole(&c) - &rho)) < 1e-12);
                let p = p_coeffs_from_rho(&c);
                let back = rho_coeffs_from_p(&p);
                for (a, b) in back.values.iter().zip(&c.values) {
                    assert!((a - b).norm() < 1e-13);
                }
                // two routes to the real coefficients
                let direct = real_p_coefficients(&rho, spin).unwrap();
                for (a, b) in p.real_values().iter().zip(&direct) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn scale_factor_values() {
        assert!((p_scale_factor(Spin::ONE, 2) - (4.0 * PI).sqrt() * 2.0 / 120f64.sqrt()).abs() < 1e-14);
        for tj in 1..=6 {
            let spin = Spin::new(tj).unwrap();
            let k0 = p_scale_factor(spin, 0) / (4.0 * PI).sqrt();
            assert!((k0 - 1.0 / (spin.dim() as f64).sqrt()).abs() < 1e-14);
            assert_eq!(p_scale_factor(spin, spin.k_max() + 1), 0.0);
        }
    }

    #[test]
    fn out_of_range_tables_rejected() {
        let too_long = vec![C64::new(0.0, 0.0); lm_count(3)];
        assert!(matches!(
            PCoeffs::from_values(Spin::ONE, too_long),
            Err(Error::IndexOutOfRange { .. })
        ));
        let p = PCoeffs::truncated_delta(Spin::ONE, Direction::NORTH);
        assert!(p.get(3, 0).is_err());
    }

    #[test]
    fn truncated_p_of_mixed_state_is_uniform() {
        let spin = Spin::new(3).unwrap();
        let p = p_coeffs_from_rho(&to_multipole(&maximally_mixed(4), spin).unwrap());
        for alpha in fibonacci_grid(50).points() {
            assert!((evaluate_truncated_p(&p, *alpha) - 1.0 / (4.0 * PI)).abs() < 1e-14);
        }
    }

    #[test]
    fn truncated_delta_oscillates_negative() {
        let alpha0 = Direction::new(0.9, 2.1);
        let spin = Spin::ONE;
        let ket = coherent_ket(spin, alpha0);
        let p = p_coeffs_from_rho(&to_multipole(&ket.projector(), spin).unwrap());
        let delta = PCoeffs::truncated_delta(spin, alpha0);
        for (a, b) in p.values.iter().zip(&delta.values) {
            assert!((a - b).norm() < 1e-13);
        }
        assert!(evaluate_truncated_p(&p, alpha0) > 0.0);
        let min = fibonacci_grid(1000)
            .points()
            .iter()
            .map(|a| evaluate_truncated_p(&p, *a))
            .fold(f64::INFINITY, f64::min);
        assert!(min < -1e-3, "min {min}");
        // the real-basis expansion evaluates to the same function
        let r = p.real_values();
        let yr = real_harmonics(2, Direction::new(2.0, 0.3));
        let v: f64 = r.iter().zip(&yr).map(|(a, b)| a * b).sum();
        assert!((v - evaluate_truncated_p(&p, Direction::new(2.0, 0.3))).abs() < 1e-13);
    }
}
