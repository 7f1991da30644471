use std::fs;
use std::path::Path;

use prep_core::density::{parse_state, LoadedState};
use prep_core::Error;
use serde::Serialize;

/// Exit status: computation finished but did not reach its tolerance.
pub const NOT_CONVERGED: u8 = 1;
/// Exit status: unreadable or malformed input.
pub const MALFORMED: u8 = 2;
/// Exit status: dimensions or spin labels do not fit together.
pub const MISMATCH: u8 = 3;
/// Exit status: numerical failure inside the solver.
pub const INTERNAL: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Format(_)
            | Error::Json(_)
            | Error::Csv(_)
            | Error::Io(_)
            | Error::NotHermitian(_)
            | Error::NotUnitTrace(_)
            | Error::NotTraceless(_)
            | Error::ZeroDirection
            | Error::NotAState(_)
            | Error::DegeneratePlane(_) => MALFORMED,
            Error::DimensionMismatch { .. } | Error::InvalidLabel(_) | Error::IndexOutOfRange { .. } => MISMATCH,
            _ => INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

pub fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

pub fn read_state(path: &Path, raw: bool) -> Result<LoadedState, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(MALFORMED, format!("{}: {e}", path.display())))?;
    parse_state(&text, raw).map_err(|e| {
        let f = Failure::from(e);
        Failure { message: format!("{}: {}", path.display(), f.message), ..f }
    })
}

pub fn emit_text(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| fail(MALFORMED, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn emit_json(value: &impl Serialize, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| fail(INTERNAL, e.to_string()))?;
    text.push('\n');
    emit_text(&text, out)
}
