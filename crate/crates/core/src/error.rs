use thiserror::Error;

use crate::system::RegionKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not an attracting sliding configuration (a- = {a_minus}, a+ = {a_plus})")]
    NotSliding { a_minus: f64, a_plus: f64 },

    #[error("stationary density not normalizable for region {0:?}")]
    NotNormalizable(RegionKind),

    #[error("escape time requires a crossing configuration, got {0:?}")]
    NotCrossing(RegionKind),

    #[error("smoothing width eps = {eps} must be smaller than escape radius r = {r}")]
    BadScales { eps: f64, r: f64 },

    #[error("noise amplitude must be positive and finite, got {0}")]
    NonPositiveNoise(f64),

    #[error("scaled escape radius r/eps = {0} must exceed 1")]
    RadiusTooSmall(f64),

    #[error("interior drift A({at}) = {value} does not match outer drift {expected}")]
    Discontinuous { at: f64, value: f64, expected: f64 },

    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    #[error("turning points coalesce (A' = {slope}); asymptotic prefactor diverges")]
    DegenerateWell { slope: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
