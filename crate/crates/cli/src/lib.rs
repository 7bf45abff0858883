//! Library side of the `telebell` command: state loading, single-state
//! reports, `(λ, α)` scans and verification suites.

pub mod report;
pub mod scan;
pub mod verify;

use std::path::Path;

use telebell::states::{parse_state_spec, SpecError, StateError, StateSpec};
use thiserror::Error;

/// Margin above 2 needed before a computed maximum counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse state spec: {0}")]
    Spec(#[from] SpecError),
    #[error("cannot read state file {path}: {source}")]
    ReadState { path: String, source: std::io::Error },
    #[error("invalid channel state: {0}")]
    InvalidState(#[from] StateError),
    #[error("bad range `{0}`: expected start:stop:step inside [0, 1] with step > 0")]
    BadRange(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{failed} of {total} checks failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Spec(_) | CliError::ReadState { .. } | CliError::BadRange(_) => 2,
            CliError::InvalidState(_) => 3,
            CliError::Write { .. } => 4,
            CliError::VerifyFailed { .. } => 1,
        }
    }
}

/// A state given on the command line: either a spec string or a file holding one.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedState {
    pub spec: StateSpec,
    /// File the spec was read from, if any.
    pub source: Option<String>,
}

pub fn load_state(arg: &str) -> Result<LoadedState, CliError> {
    match parse_state_spec(arg) {
        Ok(spec) => Ok(LoadedState { spec, source: None }),
        Err(err) => {
            let path = Path::new(arg);
            if !path.is_file() {
                return Err(err.into());
            }
            let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadState {
                path: arg.to_string(),
                source,
            })?;
            Ok(LoadedState {
                spec: parse_state_spec(&text)?,
                source: Some(arg.to_string()),
            })
        }
    }
}

/// Writes `contents` to `path`, mapping failures to exit code 4.
pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// Scientific notation with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}
