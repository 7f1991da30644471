use serde::{Deserialize, Serialize};

use crate::angular::{coherent_ket, Direction, Spin};
use crate::linalg::{hs_norm, CMatrix};
use crate::{Error, Result};

/// One weighted sphere point of a discrete P-function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub weight: f64,
    #[serde(flatten)]
    pub direction: Direction,
}

/// Finite non-negative combination of coherent-state projectors: a discrete
/// P-function, and the certificate that a state is classical.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeltaMixture {
    pub atoms: Vec<Atom>,
}

impl DeltaMixture {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if let Some(a) = atoms.iter().find(|a| a.weight.is_nan() || a.weight < 0.0) {
            return Err(Error::NegativeWeight(a.weight));
        }
        Ok(Self { atoms })
    }

    pub fn single(direction: Direction) -> Self {
        Self { atoms: vec![Atom { weight: 1.0, direction }] }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, Direction)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(weight, direction)| Atom { weight, direction }).collect())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            atoms: self.atoms.iter().map(|a| Atom { weight: a.weight * factor, ..*a }).collect(),
        }
    }

    /// `Σ w_i |α_i⟩⟨α_i|`
    pub fn matrix(&self, spin: Spin) -> CMatrix {
        let d = spin.dim();
        let mut out = CMatrix::zeros(d, d);
        for a in &self.atoms {
            let k = coherent_ket(spin, a.direction).amplitudes;
            out += (&k * k.adjoint()).scale(a.weight);
        }
        out
    }

    /// Hilbert-Schmidt distance between the represented matrix and `rho`.
    pub fn residual(&self, spin: Spin, rho: &CMatrix) -> f64 {
        hs_norm(&(self.matrix(spin) - rho))
    }
}

/// `Σ w_i |α_i⟩⟨α_i|`; its trace is `Σ w_i`.
pub fn rho_from_mixture(mix: &DeltaMixture, spin: Spin) -> Result<CMatrix> {
    if let Some(a) = mix.atoms.iter().find(|a| a.weight.is_nan() || a.weight < 0.0) {
        return Err(Error::NegativeWeight(a.weight));
    }
    Ok(mix.matrix(spin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::psd_check;
    use crate::linalg::{hermiticity_defect, C64};

    #[test]
    fn single_point_is_projector() {
        let spin = Spin::new(3).unwrap();
        let a = Direction::new(0.4, 0.8);
        let m = rho_from_mixture(&DeltaMixture::single(a), spin).unwrap();
        assert!(hs_norm(&(m - coherent_ket(spin, a).projector())) < 1e-15);
    }

    #[test]
    fn antipodal_qubit_points() {
        let lambda = 0.3;
        let mix = DeltaMixture::from_pairs([(lambda, Direction::NORTH), (1.0 - lambda, Direction::SOUTH)]).unwrap();
        let m = rho_from_mixture(&mix, Spin::HALF).unwrap();
        // Bloch vector (2λ − 1) ẑ
        assert!((m[(0, 0)].re - m[(1, 1)].re - (2.0 * lambda - 1.0)).abs() < 1e-15);
        assert!(m[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn negative_weight_rejected() {
        assert!(DeltaMixture::from_pairs([(-0.1, Direction::NORTH)]).is_err());
        let bad = DeltaMixture { atoms: vec![Atom { weight: -1.0, direction: Direction::NORTH }] };
        assert!(matches!(rho_from_mixture(&bad, Spin::ONE), Err(Error::NegativeWeight(_))));
    }

    #[test]
    fn mixtures_are_hermitian_psd_with_trace_of_weights() {
        let spin = Spin::new(4).unwrap();
        let mix = DeltaMixture::from_pairs(
            (0..7).map(|i| (0.1 + i as f64 * 0.05, Direction::new(0.3 * i as f64, 1.1 * i as f64))),
        )
        .unwrap();
        let m = rho_from_mixture(&mix, spin).unwrap();
        assert!(hermiticity_defect(&m) < 1e-15);
        assert!(psd_check(&m).unwrap().1);
        assert!((m.trace() - C64::new(mix.total_weight(), 0.0)).norm() < 1e-13);
    }
}
