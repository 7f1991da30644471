use std::f64::consts::PI;

use super::{coherent_ket, Direction, Spin};
use crate::linalg::{hs_norm, identity, CMatrix};

/// Gauss-Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        // the middle node is exactly zero
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Product rule on the sphere: Gauss-Legendre in `cos θ` times a uniform
/// trapezoid in `φ`. Weights sum to `4π`.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    points: Vec<(Direction, f64)>,
}

impl SphereQuadrature {
    /// `order` nodes on each axis.
    pub fn new(order: usize) -> Self {
        let order = order.max(1);
        let (x, w) = gauss_legendre(order);
        let dphi = 2.0 * PI / order as f64;
        let mut points = Vec::with_capacity(order * order);
        for (xi, wi) in x.iter().zip(&w) {
            for k in 0..order {
                points.push((Direction::new(xi.clamp(-1.0, 1.0).acos(), k as f64 * dphi), wi * dphi));
            }
        }
        Self { points }
    }

    /// Default order `4j + 4`.
    pub fn for_spin(spin: Spin) -> Self {
        Self::new(2 * spin.twice_j() as usize + 4)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Direction, f64)> + '_ {
        self.points.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `‖ (2j+1)/(4π) ∫ dα |α⟩⟨α| − 1 ‖` (Hilbert-Schmidt) with the given order.
pub fn identity_resolution_check(spin: Spin, order: usize) -> f64 {
    let quad = SphereQuadrature::new(order);
    let d = spin.dim();
    let mut acc = CMatrix::zeros(d, d);
    for (alpha, w) in quad.iter() {
        acc += coherent_ket(spin, alpha).projector().scale(w);
    }
    acc = acc.scale(d as f64 / (4.0 * PI));
    hs_norm(&(acc - identity(d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for deg in 0..2 * n {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn identity_resolution() {
        assert!(identity_resolution_check(Spin::HALF, 8) < 1e-12);
        assert!(identity_resolution_check(Spin::TWO, 16) < 1e-10);
        assert!(identity_resolution_check(Spin::ONE, 1) > 1e-3);
        for tj in 1..=6 {
            let spin = Spin::new(tj).unwrap();
            assert!(identity_resolution_check(spin, 2 * tj as usize + 2) < 1e-10);
        }
    }

    #[test]
    fn weights_cover_sphere() {
        let q = SphereQuadrature::new(7);
        let total: f64 = q.iter().map(|(_, w)| w).sum();
        assert!((total - 4.0 * PI).abs() < 1e-12);
        assert_eq!(q.len(), 49);
    }
}
