use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::angular::{angular_momentum_ops, Direction, Spin};
use crate::density::DeltaMixture;
use crate::linalg::{ensure_square, trace_product, CMatrix};
use crate::{Error, Result};

/// `u_a = tr(ρ σ_a)`; a state lies in the closed unit ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub u: [f64; 3],
}

impl BlochVector {
    pub fn length(&self) -> f64 {
        Vector3::from(self.u).norm()
    }
}

pub fn bloch_vector(rho: &CMatrix) -> Result<BlochVector> {
    let d = ensure_square(rho)?;
    if d != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: d });
    }
    let ops = angular_momentum_ops(Spin::HALF);
    Ok(BlochVector { u: std::array::from_fn(|a| 2.0 * trace_product(rho, &ops[a]).re) })
}

/// Two antipodal points along the Bloch vector with weights `(1 ± |u|)/2`;
/// a single point for a pure state.
pub fn qubit_decompose(rho: &CMatrix) -> Result<DeltaMixture> {
    let b = bloch_vector(rho)?;
    let r = b.length();
    if r > 1.0 + 1e-10 {
        return Err(Error::NotAState(r));
    }
    let axis = if r < 1e-15 { [0.0, 0.0, 1.0] } else { b.u.map(|x| x / r) };
    let up = Direction::from_vector(axis);
    if r >= 1.0 - 1e-15 {
        return Ok(DeltaMixture::single(up));
    }
    let down = Direction::from_vector(axis.map(|x| -x));
    DeltaMixture::from_pairs([(0.5 * (1.0 + r), up), (0.5 * (1.0 - r), down)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::coherent_ket;
    use crate::density::rho_from_mixture;
    use crate::linalg::{hs_norm, maximally_mixed, C64};
    use crate::random::{random_density, rng_from_seed};
    use std::f64::consts::FRAC_PI_2;

    fn from_bloch(u: [f64; 3]) -> CMatrix {
        let ops = angular_momentum_ops(Spin::HALF);
        let mut m = maximally_mixed(2);
        for a in 0..3 {
            m += ops[a].scale(u[a]);
        }
        m
    }

    #[test]
    fn mixed_state_splits_along_z() {
        let mix = qubit_decompose(&maximally_mixed(2)).unwrap();
        assert_eq!(mix.len(), 2);
        assert_eq!(mix.atoms[0].direction, Direction::NORTH);
        assert!((mix.atoms[1].direction.theta - std::f64::consts::PI).abs() < 1e-15);
        assert!(mix.atoms.iter().all(|a| (a.weight - 0.5).abs() < 1e-15));
    }

    #[test]
    fn pure_x_state_is_one_point() {
        let rho = coherent_ket(Spin::HALF, Direction::new(FRAC_PI_2, 0.0)).projector();
        let mix = qubit_decompose(&rho).unwrap();
        assert_eq!(mix.len(), 1);
        assert!((mix.atoms[0].direction.theta - FRAC_PI_2).abs() < 1e-12);
        assert!(mix.atoms[0].direction.phi.abs() < 1e-12);
        assert!((mix.atoms[0].weight - 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_polarized_along_z() {
        let rho = from_bloch([0.0, 0.0, 0.5]);
        let mix = qubit_decompose(&rho).unwrap();
        assert!((mix.atoms[0].weight - 0.75).abs() < 1e-15);
        assert!((mix.atoms[1].weight - 0.25).abs() < 1e-15);
        assert!(hs_norm(&(rho_from_mixture(&mix, Spin::HALF).unwrap() - &rho)) < 1e-15);
    }

    #[test]
    fn random_states_reconstruct() {
        let mut rng = rng_from_seed(9);
        for _ in 0..200 {
            let rho = random_density(2, &mut rng);
            let mix = qubit_decompose(&rho).unwrap();
            assert!(mix.residual(Spin::HALF, &rho) < 1e-14);
        }
    }

    #[test]
    fn outside_the_ball_is_rejected() {
        assert!(matches!(qubit_decompose(&from_bloch([0.0, 1.2, 0.0])), Err(Error::NotAState(_))));
        let mut wrong = CMatrix::zeros(3, 3);
        wrong[(0, 0)] = C64::new(1.0, 0.0);
        assert!(matches!(bloch_vector(&wrong), Err(Error::DimensionMismatch { .. })));
    }
}
