use super::{Direction, Spin};
use crate::linalg::{CMatrix, CVector, C64};

/// Angular-momentum coherent state `|θ φ⟩` in the `|j m⟩` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentKet {
    pub spin: Spin,
    pub direction: Direction,
    pub amplitudes: CVector,
}

impl CoherentKet {
    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn overlap(&self, other: &CoherentKet) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Amplitude at `m`: `sqrt(C(2j, j+m)) sin(θ/2)^(j−m) cos(θ/2)^(j+m) e^{−i(j+m)φ}`.
pub fn coherent_ket(spin: Spin, alpha: Direction) -> CoherentKet {
    let tj = spin.twice_j();
    let (s, c) = (alpha.theta / 2.0).sin_cos();
    let amplitudes = CVector::from_fn(spin.dim(), |i, _| {
        // j − m = i, j + m = 2j − i
        let up = tj - i as u32;
        let magnitude = binomial(tj, up).sqrt() * s.powi(i as i32) * c.powi(up as i32);
        C64::from_polar(magnitude, -(up as f64) * alpha.phi)
    });
    CoherentKet { spin, direction: alpha, amplitudes }
}
