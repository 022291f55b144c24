//! Error type shared by the library and the command-line front end.

use std::fmt;

/// Stable machine-readable codes for rejected input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputCode {
    Schema,
    NonFinite,
    Negative,
    NonMonotone,
    TailContinuity,
    Breakpoints,
    Parameter,
}

impl InputCode {
    pub fn as_str(self) -> &'static str {
        match self {
            InputCode::Schema => "E_SCHEMA",
            InputCode::NonFinite => "E_NON_FINITE",
            InputCode::Negative => "E_NEGATIVE",
            InputCode::NonMonotone => "E_NON_MONOTONE",
            InputCode::TailContinuity => "E_TAIL_CONTINUITY",
            InputCode::Breakpoints => "E_BREAKPOINTS",
            InputCode::Parameter => "E_PARAMETER",
        }
    }
}

impl fmt::Display for InputCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{code}: {message}")]
    InvalidInput {
        code: InputCode,
        /// 1-based position of the offending entry, when there is one.
        index: Option<usize>,
        message: String,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("divergent at s = {s}: abscissa of convergence is {abscissa}")]
    Divergent { s: f64, abscissa: f64 },
    #[error("grid too short: {0}")]
    GridTooShort(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(code: InputCode, index: Option<usize>, message: impl Into<String>) -> Self {
        Error::InvalidInput {
            code,
            index,
            message: message.into(),
        }
    }

    /// Offending 1-based index for input errors.
    pub fn index(&self) -> Option<usize> {
        match self {
            Error::InvalidInput { index, .. } => *index,
            _ => None,
        }
    }

    pub fn code(&self) -> Option<InputCode> {
        match self {
            Error::InvalidInput { code, .. } => Some(*code),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
