use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid angular-momentum label: {0}")]
    InvalidLabel(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    NotUnitTrace(f64),

    #[error("direction is not traceless (trace {0:.3e})")]
    NotTraceless(f64),

    #[error("direction matrix vanishes")]
    ZeroDirection,

    #[error("negative weight {0} in mixture")]
    NegativeWeight(f64),

    #[error("multipole index out of range: K={k}, Q={q}, K_max={k_max}")]
    IndexOutOfRange { k: i64, q: i64, k_max: i64 },

    #[error("not a state: Bloch vector length {0}")]
    NotAState(f64),

    #[error("state is not P-representable: smallest eigenvalue of Z is {0:.3e}")]
    NotClassical(f64),

    #[error("conditional state undefined: tr(ρ V) = {0:.3e}")]
    DegenerateConditional(f64),

    #[error("scan plane is degenerate: {0}")]
    DegeneratePlane(String),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
