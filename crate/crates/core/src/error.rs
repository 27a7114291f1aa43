use thiserror::Error;

/// Errors raised by operator, frame, state and oracle construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generator norm {norm:.3e} exceeds cap {cap:.3e}")]
    GeneratorTooLarge { norm: f64, cap: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroState,

    #[error("tail population {tail:.3e} above level {n_eff} exceeds tolerance {tol:.3e}")]
    TruncationOverflow { tail: f64, n_eff: usize, tol: f64 },

    #[error("deformation f(t) = {f:.3e} is below the guard f_min = {f_min:.3e}")]
    DeformationVanishes { f: f64, f_min: f64 },

    #[error("displacement |z| = {z:.3e} exceeds cap {cap:.3e}")]
    DisplacementTooLarge { z: f64, cap: f64 },

    #[error("squeeze magnitude {r:.3e} exceeds cap {cap:.3e}")]
    SqueezeTooLarge { r: f64, cap: f64 },

    #[error("operator is not Hermitian (max |A - A^dagger| = {deviation:.3e})")]
    NonHermitianOperator { deviation: f64 },

    #[error("minimizer did not converge within {max_iters} iterations in any of {restarts} restarts")]
    NoConvergence { max_iters: usize, restarts: usize },
}

impl Error {
    /// Short stable identifier, used for skip reasons in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidDimension(_) => "InvalidDimension",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::GeneratorTooLarge { .. } => "GeneratorTooLarge",
            Error::ZeroState => "ZeroState",
            Error::TruncationOverflow { .. } => "TruncationOverflow",
            Error::DeformationVanishes { .. } => "DeformationVanishes",
            Error::DisplacementTooLarge { .. } => "DisplacementTooLarge",
            Error::SqueezeTooLarge { .. } => "SqueezeTooLarge",
            Error::NonHermitianOperator { .. } => "NonHermitianOperator",
            Error::NoConvergence { .. } => "NoConvergence",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
