use thiserror::Error;

pub type Result<T> = std::result::Result<T, GqspError>;

#[derive(Debug, Error)]
pub enum GqspError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The target polynomial exceeds 1 in modulus somewhere on the unit circle.
    #[error("inadmissible polynomial: sup |P|^2 = {sup_norm_sq:.12e} exceeds 1")]
    Inadmissible { sup_norm_sq: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    /// (P, Q) do not satisfy |P|^2 + |Q|^2 = 1 well enough for the angle recursion.
    #[error("invalid (P, Q) pair: {0}")]
    InvalidPair(String),

    #[error("invalid circuit plan: {0}")]
    InvalidPlan(String),

    #[error("underdetermined fit: {grid_size} samples for {unknowns} unknowns")]
    Underdetermined { grid_size: usize, unknowns: usize },

    #[error("completion did not converge: objective {objective:.3e} > tolerance {tol:.3e}")]
    NotConverged { objective: f64, tol: f64 },

    #[error("verification failed: error {error:.3e} > tolerance {tol:.3e}")]
    VerificationFailed { error: f64, tol: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl GqspError {
    /// Short machine-readable name used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            GqspError::InvalidArgument(_) => "invalid_argument",
            GqspError::Inadmissible { .. } => "inadmissible",
            GqspError::Unsupported(_) => "unsupported",
            GqspError::NumericalDegeneracy(_) => "numerical_degeneracy",
            GqspError::InvalidPair(_) => "invalid_pair",
            GqspError::InvalidPlan(_) => "invalid_plan",
            GqspError::Underdetermined { .. } => "underdetermined",
            GqspError::NotConverged { .. } => "not_converged",
            GqspError::VerificationFailed { .. } => "verification_failed",
            GqspError::Io(_) => "io",
            GqspError::Json(_) => "json",
        }
    }

    /// Process exit code: 2 invalid input, 3 numerical failure, 4 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            GqspError::InvalidArgument(_)
            | GqspError::Inadmissible { .. }
            | GqspError::Unsupported(_)
            | GqspError::InvalidPlan(_)
            | GqspError::Underdetermined { .. }
            | GqspError::Io(_)
            | GqspError::Json(_) => 2,
            GqspError::NumericalDegeneracy(_)
            | GqspError::InvalidPair(_)
            | GqspError::NotConverged { .. } => 3,
            GqspError::VerificationFailed { .. } => 4,
        }
    }
}
