use thiserror::Error;

use crate::gridfn::GridFunction;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("mesh too small: {n} nodes, at least {min} required")]
    MeshTooSmall { n: usize, min: usize },

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("complex roots: beta^4/4 = {bound} < e^u* = {e_u_star}")]
    ComplexRoots { bound: f64, e_u_star: f64 },

    #[error("formula domain exceeded: {0}")]
    FormulaDomain(String),

    #[error("condition is vacuous: u* = {u_star} > -1")]
    ConditionVacuous { u_star: f64 },

    #[error("real-roots regime: beta^2 = {beta_sq} >= 2 sqrt(c0) = {limit}")]
    RealRootsRegime { beta_sq: f64, limit: f64 },

    #[error("degenerate denominator {0:e}")]
    DegenerateDenominator(f64),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("cross-check failed: {what} ({lhs} vs {rhs})")]
    CrossCheck {
        what: &'static str,
        lhs: f64,
        rhs: f64,
    },

    #[error("boundary constraint violated at {endpoint} endpoint (defect {defect:e})")]
    ConstraintViolation { endpoint: &'static str, defect: f64 },

    #[error("overflow evaluating exp({0})")]
    Overflow(f64),

    #[error("endpoint construction failed: {0}")]
    EndpointFailure(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        best: Option<Box<GridFunction>>,
    },

    #[error("mountain collapse: path maximum {max_energy:e} is not positive")]
    MountainCollapse { max_energy: f64 },

    #[error("singular jacobian (condition estimate {0:e})")]
    SingularJacobian(f64),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("insufficient tail: {found} extrema found, 3 required")]
    InsufficientTail { found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of an iterative solver, as opposed to bad input.
    pub fn is_nonconvergence(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::MountainCollapse { .. }
                | Error::SingularJacobian(_)
                | Error::NumericalFailure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
