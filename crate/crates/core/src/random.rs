//! Seeded random states and directions for tests, benchmarks and `prep gen`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::angular::{Direction, Spin};
use crate::density::{DeltaMixture, ScaledFamily, Norm};
use crate::linalg::{hermitian_part, CMatrix, C64};

pub type StateRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ginibre(dim: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(dim, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Full-rank density matrix from the Hilbert-Schmidt (Ginibre) ensemble.
pub fn random_density(dim: usize, rng: &mut impl Rng) -> CMatrix {
    random_density_rank(dim, dim, rng)
}

/// Density matrix `G G† / tr(G G†)` with `G` of shape `dim × rank`.
pub fn random_density_rank(dim: usize, rank: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre(dim, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    hermitian_part(&m.unscale(tr))
}

/// Traceless Hermitian matrix with Gaussian entries (not normalized).
pub fn random_direction(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre(dim, dim, rng);
    let mut h = hermitian_part(&g);
    let shift = h.trace() / C64::new(dim as f64, 0.0);
    for i in 0..dim {
        h[(i, i)] -= shift;
    }
    h
}

/// Uniformly distributed point on the unit sphere.
pub fn random_sphere_point(rng: &mut impl Rng) -> Direction {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Direction::new(z.clamp(-1.0, 1.0).acos(), phi)
}

/// Normalized mixture of `n` random coherent projectors with random weights.
pub fn random_mixture(n: usize, rng: &mut impl Rng) -> DeltaMixture {
    let raw: Vec<(f64, Direction)> =
        (0..n).map(|_| (rng.random_range(0.05..1.0), random_sphere_point(rng))).collect();
    let total: f64 = raw.iter().map(|p| p.0).sum();
    DeltaMixture::from_pairs(raw.into_iter().map(|(w, d)| (w / total, d)))
        .expect("weights drawn positive")
}

/// Classical state of spin `spin`: a random coherent mixture.
pub fn random_classical(spin: Spin, n: usize, rng: &mut impl Rng) -> CMatrix {
    random_mixture(n, rng).matrix(spin)
}

/// State `ρ0 + κ ρ̂` with a random direction and `κ` uniform in
/// `[0, κ_positivity]`.
pub fn random_family_state(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let fam = ScaledFamily::new(random_direction(dim, rng), Norm::Trace).expect("nonzero direction");
    let kappa = rng.random_range(0.0..=1.0) * fam.positivity_kappa();
    fam.state_matrix(kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::psd_check;
    use crate::linalg::hermiticity_defect;

    #[test]
    fn seeded_streams_repeat() {
        let a = random_density(4, &mut rng_from_seed(11));
        let b = random_density(4, &mut rng_from_seed(11));
        assert_eq!(a, b);
    }

    #[test]
    fn generated_states_are_states() {
        let mut rng = rng_from_seed(3);
        for dim in 2..6 {
            for m in [random_density(dim, &mut rng), random_density_rank(dim, 1, &mut rng), random_family_state(dim, &mut rng)] {
                assert!(hermiticity_defect(&m) < 1e-14);
                assert!((m.trace().re - 1.0).abs() < 1e-12);
                assert!(psd_check(&m).unwrap().0 > -1e-12);
            }
            assert!(random_direction(dim, &mut rng).trace().norm() < 1e-12);
        }
    }
}
