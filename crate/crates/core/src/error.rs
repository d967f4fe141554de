use thiserror::Error;

/// Errors produced by the region-estimation library.
///
/// Variants split into two families: usage errors (bad inputs, incompatible
/// combinations) and numerical failures (integration or fitting broke down).
/// The CLI maps the former to exit code 2 and the latter to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("counts must contain at least one click (N >= 1)")]
    EmptyCounts,

    #[error("point lies outside the reconstruction space")]
    OutsideDomain,

    #[error("prior '{prior}' is not defined for POM '{pom}'")]
    IncompatiblePrior { prior: String, pom: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical integration failed: {0}")]
    IntegrationFailure(String),

    #[error("curve fit failed: {0}")]
    FitFailure(String),
}

impl Error {
    /// True for errors caused by bad inputs rather than numerical breakdown.
    pub fn is_usage(&self) -> bool {
        !matches!(
            self,
            Error::IntegrationFailure(_) | Error::FitFailure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
