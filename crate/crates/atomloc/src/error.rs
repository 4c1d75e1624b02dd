//! Crate-wide error type and result alias.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid level scheme: {0}")]
    InvalidScheme(String),

    /// The linear-response denominator Z = A² + B² fell below the guard;
    /// the susceptibility formula is singular at this parameter point.
    #[error("degenerate denominator Z = {z:.3e} at delta = {delta}, kx = {kx}")]
    DegenerateDenominator { z: f64, delta: f64, kx: f64 },

    #[error("reduced form requires gamma2 = 0, got {0}")]
    InvalidReduction(f64),

    #[error("zero drive amplitude: {0}")]
    ZeroDrive(String),

    /// The R3/R4 closed form divides by the probe detuning.
    #[error("denominator roots R3, R4 are singular at delta = 0")]
    ZeroDetuning,

    /// Diagnostic: the detuning cubic left the three-real-root regime
    /// beyond numerical tolerance. Not expected for physical inputs.
    #[error("cubic discriminant negative beyond tolerance (p = {p:.6e}, q = {q:.6e})")]
    ComplexBranch { p: f64, q: f64 },

    #[error("steady-state system is singular (residual {residual:.3e})")]
    SingularSystem { residual: f64 },

    #[error("integration did not converge by t_max = {t_max} (step change {residual:.3e})")]
    NoConvergence { t_max: f64, residual: f64 },

    #[error("grid too small: {0} points (minimum 64)")]
    GridTooSmall(usize),

    #[error("profiles are not comparable: {0}")]
    MismatchedProfiles(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("verification failed: {failed} of {total} suites")]
    VerificationFailed { failed: usize, total: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the CLI: 1 verification failure, 2 invalid
    /// configuration or inputs, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::VerificationFailed { .. } => 1,
            Error::Io { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
