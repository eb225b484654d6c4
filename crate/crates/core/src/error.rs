use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
///
/// Each variant carries a short message naming the offending parameter so
/// that grid drivers and the C ABI can report which input was rejected.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("argument outside supported domain: {0}")]
    Domain(String),
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("degenerate spectral parameter: {0}")]
    DegenerateLambda(String),
    #[error("point is not in the open chamber: {0}")]
    Chamber(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("vanishing denominator: {0}")]
    ZeroDenominator(String),
    #[error("spectral parameter outside the half-plane Re > 0: {0}")]
    HalfPlane(String),
    #[error("genericity margin violated: {0}")]
    SmallDenominator(String),
    #[error("series tail too large: {0}")]
    TailTooLarge(String),
    #[error("stencil too close to a singular hyperplane: {0}")]
    SingularityTooClose(String),
    #[error("nested differencing lost too many digits: {0}")]
    StencilBlowup(String),
    #[error("non-finite value: {0}")]
    NotFinite(String),
}

impl Error {
    /// True for errors that signal a rejected input rather than a failed
    /// computation on an admissible one.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Pole(_)
                | Error::Domain(_)
                | Error::DegenerateLambda(_)
                | Error::Chamber(_)
                | Error::Parameter(_)
                | Error::Size(_)
                | Error::HalfPlane(_)
                | Error::SmallDenominator(_)
                | Error::SingularityTooClose(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
