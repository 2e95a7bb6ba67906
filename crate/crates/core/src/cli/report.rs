use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    VerificationFailure,
    InputError,
    NumericalFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailure => 1,
            Status::InputError => 2,
            Status::NumericalFailure => 3,
        }
    }

    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::Numerical(_) => Status::NumericalFailure,
            _ => Status::InputError,
        }
    }
}

/// One checked invariant: passes when `value ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub ok: bool,
}

impl Residual {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, ok: value <= tolerance }
    }
}

/// Flags echoed into every result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub subcommand: String,
    pub input: String,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub verify: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub command: CommandEcho,
    /// Hex SHA-256 of the raw input bytes.
    pub input_sha256: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub outputs: serde_json::Value,
    pub residuals: Vec<Residual>,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
}

impl ResultFile {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}
