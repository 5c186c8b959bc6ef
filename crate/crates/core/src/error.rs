use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("gamma({0}) overflows f64; use log_gamma")]
    Overflow(f64),

    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("invalid hypergeometric parameters (a={a}, b={b}, c={c}, z={z}): {reason}")]
    InvalidHyp2F1 {
        a: f64,
        b: f64,
        c: f64,
        z: f64,
        reason: &'static str,
    },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("integrand returned a non-finite value at t = {0}")]
    NonFinite(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("threshold rule falsified: interior value {interior} at r = {r} exceeds endpoint value {endpoint}")]
    Discrepancy {
        r: f64,
        interior: f64,
        endpoint: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
