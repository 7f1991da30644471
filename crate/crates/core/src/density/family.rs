use serde::{Deserialize, Serialize};

use super::DensityMatrix;
use crate::linalg::{self, eigenvalues_hermitian, hermitian_part, hermiticity_defect, CMatrix};
use crate::{Error, Result};

/// Normalization applied to a direction matrix `ρ̂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Norm {
    /// Sum of singular values (the default).
    Trace,
    /// `sqrt(tr ρ̂†ρ̂)`
    #[serde(alias = "hs")]
    HilbertSchmidt,
}

impl Norm {
    pub fn of(self, m: &CMatrix) -> f64 {
        match self {
            Norm::Trace => linalg::trace_norm(m),
            Norm::HilbertSchmidt => linalg::hs_norm(m),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Norm::Trace => "trace",
            Norm::HilbertSchmidt => "hilbert-schmidt",
        }
    }
}

/// The ray `ρ_κ = ρ0 + κ ρ̂` out of the maximally mixed state.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledFamily {
    direction: CMatrix,
    norm: Option<Norm>,
    scale: f64,
}

impl ScaledFamily {
    const TOLERANCE: f64 = 1e-10;

    /// Normalizes a traceless Hermitian `direction` in the chosen norm.
    pub fn new(direction: CMatrix, norm: Norm) -> Result<Self> {
        let mut f = Self::unnormalized(direction)?;
        let n = norm.of(&f.direction);
        f.direction = f.direction.unscale(n);
        f.norm = Some(norm);
        f.scale = n;
        Ok(f)
    }

    /// Direction `target − ρ0`, normalized.
    pub fn toward(target: &CMatrix, norm: Norm) -> Result<Self> {
        let d = linalg::ensure_square(target)?;
        let mut dir = hermitian_part(target);
        let shift = dir.trace() / linalg::C64::new(d as f64, 0.0);
        for i in 0..d {
            dir[(i, i)] -= shift;
        }
        Self::new(dir, norm)
    }

    /// Uses `direction` as given, without normalization.
    pub fn unnormalized(direction: CMatrix) -> Result<Self> {
        linalg::ensure_square(&direction)?;
        let scale = linalg::hs_norm(&direction).max(1.0);
        let defect = hermiticity_defect(&direction);
        if defect > Self::TOLERANCE * scale {
            return Err(Error::NotHermitian(defect));
        }
        let tr = direction.trace().re;
        if tr.abs() > Self::TOLERANCE * scale {
            return Err(Error::NotTraceless(tr));
        }
        let direction = hermitian_part(&direction);
        if linalg::hs_norm(&direction) < 1e-14 {
            return Err(Error::ZeroDirection);
        }
        Ok(Self { direction, norm: None, scale: 1.0 })
    }

    pub fn dim(&self) -> usize {
        self.direction.nrows()
    }

    pub fn direction(&self) -> &CMatrix {
        &self.direction
    }

    /// Norm used to normalize the direction, `None` when left as given.
    pub fn norm(&self) -> Option<Norm> {
        self.norm
    }

    pub fn norm_name(&self) -> &'static str {
        self.norm.map_or("none", Norm::name)
    }

    /// Norm of the direction before normalization.
    pub fn original_scale(&self) -> f64 {
        self.scale
    }

    /// `ρ0 + κ ρ̂`
    pub fn state(&self, kappa: f64) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.state_matrix(kappa))
    }

    pub fn state_matrix(&self, kappa: f64) -> CMatrix {
        linalg::maximally_mixed(self.dim()) + self.direction.scale(kappa)
    }

    /// The same family with the opposite direction.
    pub fn reversed(&self) -> Self {
        Self { direction: -self.direction.clone(), ..self.clone() }
    }

    /// Smallest `κ > 0` at which `ρ_κ` acquires a zero eigenvalue.
    ///
    /// `λ_min(ρ0 + κρ̂) = 1/d + κ λ_min(ρ̂)`, so the crossing is closed-form.
    pub fn positivity_kappa(&self) -> f64 {
        boundary_of_shifted(self.dim(), &self.direction)
    }
}

/// First `κ` with `λ_min(1/d + κ M) = 0`; `+∞` when `M ⪰ 0`.
pub(crate) fn boundary_of_shifted(dim: usize, m: &CMatrix) -> f64 {
    let lmin = eigenvalues_hermitian(m)[0];
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / (dim as f64 * lmin)
    }
}

/// `scaled_state(family, κ)`
pub fn scaled_state(family: &ScaledFamily, kappa: f64) -> DensityMatrix {
    family.state(kappa)
}
