use thiserror::Error;

/// Errors raised by state construction, the closed forms and the oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max violation {0:e})")]
    NotHermitian(f64),

    #[error("trace deviates from 1 by {0:e}")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("unknown party `{0}` (expected `M` or `N`)")]
    InvalidParty(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("conditional Bloch length {value} exceeds 1 at kappa = {kappa}")]
    BlochLengthOutOfRange { kappa: f64, value: f64 },

    #[error(
        "kappa = 0 is not the minimiser at beta = {beta}, epsilon = {epsilon}: \
         Xi(0) = {at_zero}, grid minimum {grid_minimum} at kappa = {argmin}"
    )]
    KappaClaimViolated {
        beta: f64,
        epsilon: f64,
        at_zero: f64,
        grid_minimum: f64,
        argmin: f64,
    },

    #[error("{quantity} is negative ({value:e}) beyond the clamping window")]
    NegativeMeasure { quantity: &'static str, value: f64 },

    #[error("geometric discord paths disagree: eigenvalue form {eigen}, measurement form {measured}")]
    OracleDisagreement { eigen: f64, measured: f64 },

    #[error("invalid sweep specification: {0}")]
    InvalidSpec(String),

    #[error("unknown measure `{0}` (expected qd, gqd or min)")]
    UnknownMeasure(String),

    #[error("unknown method `{0}` (expected closed, oracle or both)")]
    UnknownMethod(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
