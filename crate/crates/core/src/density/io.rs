use serde::{Deserialize, Serialize};

use crate::angular::Spin;
use crate::linalg::{hermiticity_defect, hermitian_part, CMatrix, C64};
use crate::{Error, Result};

/// Spin label(s) as written in a state file: one integer or a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TwiceJ {
    Single(u32),
    Pair([u32; 2]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Single,
    Bipartite,
}

/// On-disk JSON representation of a (possibly bipartite) matrix.
///
/// Rows are written in `m`-descending basis order; bipartite matrices use the
/// A-major product basis. `im` may be omitted for real matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub kind: StateKind,
    pub twice_j: TwiceJ,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub im: Vec<Vec<f64>>,
}

/// A parsed and validated state file.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedState {
    Single { spin: Spin, matrix: CMatrix },
    Bipartite { spin_a: Spin, spin_b: Spin, matrix: CMatrix },
}

impl LoadedState {
    pub fn matrix(&self) -> &CMatrix {
        match self {
            LoadedState::Single { matrix, .. } | LoadedState::Bipartite { matrix, .. } => matrix,
        }
    }

    pub fn into_matrix(self) -> CMatrix {
        match self {
            LoadedState::Single { matrix, .. } | LoadedState::Bipartite { matrix, .. } => matrix,
        }
    }

    pub fn to_file(&self) -> StateFile {
        match self {
            LoadedState::Single { spin, matrix } => StateFile::single(*spin, matrix),
            LoadedState::Bipartite { spin_a, spin_b, matrix } => StateFile::bipartite(*spin_a, *spin_b, matrix),
        }
    }
}

impl StateFile {
    /// Tolerance for the Hermiticity and unit-trace checks.
    pub const TOLERANCE: f64 = 1e-8;

    pub fn single(spin: Spin, m: &CMatrix) -> Self {
        Self::from_matrix(StateKind::Single, TwiceJ::Single(spin.twice_j()), m)
    }

    pub fn bipartite(a: Spin, b: Spin, m: &CMatrix) -> Self {
        Self::from_matrix(StateKind::Bipartite, TwiceJ::Pair([a.twice_j(), b.twice_j()]), m)
    }

    fn from_matrix(kind: StateKind, twice_j: TwiceJ, m: &CMatrix) -> Self {
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect()
        };
        let im = if m.iter().all(|z| z.im == 0.0) { Vec::new() } else { rows(|z| z.im) };
        Self { kind, twice_j, re: rows(|z| z.re), im }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks shape and labels. Unless `raw`, also requires a Hermitian
    /// unit-trace matrix; the stored matrix is then the Hermitian part.
    pub fn load(&self, raw: bool) -> Result<LoadedState> {
        let (spins, dim) = match (self.kind, self.twice_j) {
            (StateKind::Single, TwiceJ::Single(t)) => {
                let s = Spin::new(t)?;
                (vec![s], s.dim())
            }
            (StateKind::Bipartite, TwiceJ::Pair([a, b])) => {
                let (a, b) = (Spin::new(a)?, Spin::new(b)?);
                (vec![a, b], a.dim() * b.dim())
            }
            (kind, tj) => {
                return Err(Error::Format(format!("kind {kind:?} does not match twice_j {tj:?}")))
            }
        };
        let matrix = self.matrix(dim)?;
        let matrix = if raw {
            matrix
        } else {
            let defect = hermiticity_defect(&matrix);
            if defect > Self::TOLERANCE {
                return Err(Error::NotHermitian(defect));
            }
            let tr = matrix.trace();
            if (tr - C64::new(1.0, 0.0)).norm() > Self::TOLERANCE {
                return Err(Error::NotUnitTrace(tr.re));
            }
            hermitian_part(&matrix)
        };
        Ok(match spins[..] {
            [spin] => LoadedState::Single { spin, matrix },
            [spin_a, spin_b] => LoadedState::Bipartite { spin_a, spin_b, matrix },
            _ => unreachable!(),
        })
    }

    fn matrix(&self, dim: usize) -> Result<CMatrix> {
        let check = |rows: &[Vec<f64>], name: &str| -> Result<()> {
            if rows.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: rows.len() });
            }
            match rows.iter().find(|r| r.len() != dim) {
                Some(r) => Err(Error::Format(format!("`{name}` row of length {} in a {dim}x{dim} matrix", r.len()))),
                None => Ok(()),
            }
        };
        check(&self.re, "re")?;
        if !self.im.is_empty() {
            check(&self.im, "im")?;
        }
        Ok(CMatrix::from_fn(dim, dim, |i, j| {
            C64::new(self.re[i][j], self.im.get(i).map_or(0.0, |r| r[j]))
        }))
    }
}

/// Parses and validates a JSON state file.
pub fn parse_state(text: &str, raw: bool) -> Result<LoadedState> {
    StateFile::from_json(text)?.load(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hs_norm, maximally_mixed};

    #[test]
    fn roundtrip_complex_single() {
        let spin = Spin::ONE;
        let mut m = maximally_mixed(3);
        m[(0, 1)] = C64::new(0.1, -0.2);
        m[(1, 0)] = C64::new(0.1, 0.2);
        let text = StateFile::single(spin, &m).to_json().unwrap();
        let back = parse_state(&text, false).unwrap();
        assert_eq!(back, LoadedState::Single { spin, matrix: m });
    }

    #[test]
    fn im_optional_and_bipartite_labels() {
        let text = r#"{"kind":"bipartite","twice_j":[1,1],
            "re":[[0.25,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]]}"#;
        match parse_state(text, false).unwrap() {
            LoadedState::Bipartite { spin_a, spin_b, matrix } => {
                assert_eq!((spin_a, spin_b), (Spin::HALF, Spin::HALF));
                assert!(hs_norm(&(matrix - maximally_mixed(4))) < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input_unless_raw() {
        let traceless = r#"{"kind":"single","twice_j":1,"re":[[0.5,0],[0,-0.5]]}"#;
        assert!(matches!(parse_state(traceless, false), Err(Error::NotUnitTrace(_))));
        assert!(parse_state(traceless, true).is_ok());
        let skew = r#"{"kind":"single","twice_j":1,"re":[[0.5,0.1],[0,0.5]]}"#;
        assert!(matches!(parse_state(skew, false), Err(Error::NotHermitian(_))));
        let wrong_dim = r#"{"kind":"single","twice_j":2,"re":[[0.5,0],[0,0.5]]}"#;
        assert!(matches!(parse_state(wrong_dim, false), Err(Error::DimensionMismatch { .. })));
        let ragged = r#"{"kind":"single","twice_j":1,"re":[[0.5,0],[0.5]]}"#;
        assert!(matches!(parse_state(ragged, false), Err(Error::Format(_))));
        let mismatched = r#"{"kind":"single","twice_j":[1,1],"re":[[1]]}"#;
        assert!(matches!(parse_state(mismatched, false), Err(Error::Format(_))));
        assert!(matches!(parse_state("{", false), Err(Error::Json(_))));
    }
}
