use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("basis is not orthonormal: {0}")]
    NotOrthonormal(String),

    #[error("invalid grassmann point: +1 eigenspace has dimension {dimension}")]
    InvalidGrassmannPoint { dimension: usize },

    #[error("invalid fibration spec: {0}")]
    InvalidSpec(String),

    #[error("fixed-point iteration did not contract: residual {residual:e} after {iterations} iterations")]
    NonContraction { iterations: usize, residual: f64 },

    #[error("point ({x}, {y}) is outside the chart disk x² + y² < {epsilon}")]
    ChartDomain { x: f64, y: f64, epsilon: f64 },

    #[error("differential of the base projection is singular: |Δ| = {delta:e}")]
    SingularDifferential { delta: f64 },

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("base map image leaves the π/2 cap around the target: distance {distance}")]
    DeformationDomain { distance: f64 },

    #[error("deformed base map at t = {t} is not distance decreasing: lipschitz estimate {lipschitz}")]
    DeformationValidity { t: f64, lipschitz: f64 },

    #[error("points are not contained in an open hemisphere")]
    NoHemisphere,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
