//! Crate-wide error type and process exit-code mapping.
//!
//! Errors fall into three externally meaningful classes, each with a stable
//! exit code for the command-line interface:
//!
//! * parameter errors (exit 2) — inputs outside the validated domain, or
//!   unparseable configuration;
//! * regime infeasibility (exit 3) — parameters that are mathematically valid
//!   but for which the requested construction cannot exist or cannot be
//!   represented in finite floating point (with an explanation of why);
//! * verification failure (exit 1) — a constructed object was checked and the
//!   check failed.
//!
//! Everything else (I/O, serialization) is reported as an internal error and
//! also maps to exit 1 so that scripted callers never mistake a crash for a
//! clean pass.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input parameters outside the validated domain, or malformed input text.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Parameters are valid but the requested construction cannot exist (or
    /// cannot be represented in finite floating point). The message explains
    /// which constraint is violated.
    #[error("regime infeasibility: {0}")]
    RegimeInfeasible(String),

    /// A verification check ran to completion and the object failed it.
    #[error("verification failure: {0}")]
    Verification(String),

    /// I/O, serialization, or an internal invariant violation.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable process exit code for this error class.
    ///
    /// 0 is success (no error); 1 verification failure or internal error;
    /// 2 parameter error; 3 regime infeasibility.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) => 2,
            Error::RegimeInfeasible(_) => 3,
            Error::Verification(_) | Error::Internal(_) => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Internal(format!("i/o: {e}"))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Internal(format!("json: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_stable() {
        assert_eq!(Error::Parameter("x".into()).exit_code(), 2);
        assert_eq!(Error::RegimeInfeasible("x".into()).exit_code(), 3);
        assert_eq!(Error::Verification("x".into()).exit_code(), 1);
        assert_eq!(Error::Internal("x".into()).exit_code(), 1);
    }
}
