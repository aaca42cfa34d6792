use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),

    #[error("no bracket for the tilt equation: {0}")]
    NoBracket(String),

    #[error("invalid QAM order {0}: order must be even and between 2 and 24")]
    InvalidOrder(u32),

    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),

    #[error("unsupported noise model: {0}")]
    UnsupportedNoise(String),

    #[error("discretization produced no cells intersecting the region")]
    EmptyIntersection,

    #[error("noise model carries no log-density; the plug-in estimator requires one")]
    MissingNoiseDensity,
}

pub type Result<T> = std::result::Result<T, Error>;
