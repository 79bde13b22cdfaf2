use thiserror::Error;

/// Failures raised by the cascade model and its solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("inconsistent field: {0}")]
    InconsistentField(String),

    #[error("operation requires nu > 0; use the inviscid fixed point for nu = 0")]
    ViscosityRequired,

    /// The dissipation cutoff is infinite (nu = 0), as opposed to a numeric overflow.
    #[error("dissipation cutoff is infinite for nu = 0")]
    InfiniteCutoff,

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("stability bound violated: {0}")]
    Stability(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("empty trajectory: {0}")]
    EmptyTrajectory(String),
}

pub type Result<T> = std::result::Result<T, Error>;
