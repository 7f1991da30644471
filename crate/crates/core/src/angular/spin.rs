use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{CMatrix, C64};
use crate::{Error, Result};

/// Spin quantum number stored as `2j`; the Hilbert-space dimension is `2j + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spin {
    twice_j: u32,
}

impl Spin {
    pub fn new(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::InvalidLabel("spin 0 has no coherent-state structure".into()));
        }
        Ok(Self { twice_j })
    }

    pub const HALF: Spin = Spin { twice_j: 1 };
    pub const ONE: Spin = Spin { twice_j: 2 };
    pub const THREE_HALVES: Spin = Spin { twice_j: 3 };
    pub const TWO: Spin = Spin { twice_j: 4 };

    /// Spin with the given Hilbert-space dimension.
    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidLabel(format!("dimension {dim} is too small")));
        }
        Self::new(dim as u32 - 1)
    }

    pub fn twice_j(self) -> u32 {
        self.twice_j
    }

    pub fn j(self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    /// Largest multipole rank, `2j`.
    pub fn k_max(self) -> usize {
        self.twice_j as usize
    }

    /// Magnetic quantum number at basis index `i`.
    pub fn m(self, i: usize) -> f64 {
        self.j() - i as f64
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_j.is_multiple_of(2) {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

/// A point on the unit sphere, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    /// Canonicalizes arbitrary angles into the stated ranges.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(2.0 * PI);
        let mut p = phi;
        if t > PI {
            t = 2.0 * PI - t;
            p += PI;
        }
        let mut p = p.rem_euclid(2.0 * PI);
        if p >= 2.0 * PI {
            p = 0.0;
        }
        Self { theta: t, phi: p }
    }

    pub const NORTH: Direction = Direction { theta: 0.0, phi: 0.0 };
    pub const SOUTH: Direction = Direction { theta: PI, phi: 0.0 };

    pub fn from_vector(v: [f64; 3]) -> Self {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let z = (v[2] / r).clamp(-1.0, 1.0);
        Self::new(z.acos(), v[1].atan2(v[0]))
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Reflection `φ → −φ`, the image of a coherent state under complex conjugation.
    pub fn mirrored(&self) -> Self {
        Self::new(self.theta, -self.phi)
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        let a = self.unit_vector();
        let b = other.unit_vector();
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }
}

/// `(Jx, Jy, Jz)` in the `|j m⟩` basis, `m` descending.
pub fn angular_momentum_ops(spin: Spin) -> [CMatrix; 3] {
    let d = spin.dim();
    let j = spin.j();
    let mut jplus = CMatrix::zeros(d, d);
    let mut jz = CMatrix::zeros(d, d);
    for i in 0..d {
        let m = spin.m(i);
        jz[(i, i)] = C64::new(m, 0.0);
        if i > 0 {
            jplus[(i - 1, i)] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus).unscale(2.0);
    let jy = (&jplus - &jminus) * C64::new(0.0, -0.5);
    [jx, jy, jz]
}

/// `t·J` for a (not necessarily unit) real vector `t`.
pub fn spin_component(ops: &[CMatrix; 3], t: [f64; 3]) -> CMatrix {
    ops[0].scale(t[0]) + ops[1].scale(t[1]) + ops[2].scale(t[2])
}
