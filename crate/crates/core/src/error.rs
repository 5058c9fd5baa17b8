use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("empty vector")]
    Empty,

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("exponent p = {0} outside (1, 2]")]
    InvalidExponent(f64),

    #[error("size {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("regularization parameter must be positive, got {0}")]
    NonPositiveAlpha(f64),

    #[error("signal is identically zero")]
    ZeroSignal,

    #[error("gradient vanishes; step size is undefined")]
    ZeroGradient,

    #[error("start vector is zero")]
    ZeroStart,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "non-finite {quantity} at outer {outer}, inner {inner} (alpha = {alpha:e}, phi = {phi:e}, grad_norm = {grad_norm:e})"
    )]
    Diverged {
        quantity: &'static str,
        outer: usize,
        inner: usize,
        alpha: f64,
        phi: f64,
        grad_norm: f64,
    },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}
