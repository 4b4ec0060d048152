use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrontError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("finite-difference step error: {0}")]
    Step(String),
    #[error("mode error: {0}")]
    Mode(String),
    #[error("rank error (front violation): {0}")]
    Rank(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("unclassified singular point: {0}")]
    Unclassified(String),
    #[error("unsupported singularity: {0}")]
    UnsupportedSingularity(String),
    #[error("hypothesis error: {0}")]
    Hypothesis(String),
    #[error("regular-value error: {0}")]
    RegularValue(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("unknown surface `{0}`")]
    UnknownSurface(String),
    #[error("parameter error: {0}")]
    Param(String),
    #[error("stencil error: {0}")]
    Stencil(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl FrontError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            FrontError::UnknownSurface(_) | FrontError::Param(_) => 1,
            FrontError::Accuracy(_) | FrontError::Step(_) | FrontError::Stencil(_) => 3,
            FrontError::Io(_) => 4,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FrontError::Domain(_) => "domain",
            FrontError::Step(_) => "step",
            FrontError::Mode(_) => "mode",
            FrontError::Rank(_) => "rank",
            FrontError::GridTooCoarse(_) => "grid_too_coarse",
            FrontError::Topology(_) => "topology",
            FrontError::Accuracy(_) => "accuracy",
            FrontError::Unclassified(_) => "unclassified",
            FrontError::UnsupportedSingularity(_) => "unsupported_singularity",
            FrontError::Hypothesis(_) => "hypothesis",
            FrontError::RegularValue(_) => "regular_value",
            FrontError::Inconsistency(_) => "inconsistency",
            FrontError::Sampling(_) => "sampling",
            FrontError::UnknownSurface(_) => "unknown_surface",
            FrontError::Param(_) => "param",
            FrontError::Stencil(_) => "stencil",
            FrontError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, FrontError>;
