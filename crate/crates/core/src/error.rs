//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's domain (order zero, bad exponent, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Operands with incompatible shapes.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// No nonzero pivot at the given 1-based elimination step.
    #[error("singular matrix: no usable pivot at elimination step {step}")]
    Singular { step: usize },

    /// Exact inversion of zero.
    #[error("division by zero")]
    DivisionByZero,

    /// An iterative method exhausted its budget.
    #[error("{method} did not converge within {limit} iterations (residual {residual:e})")]
    NoConvergence {
        method: &'static str,
        limit: usize,
        residual: f64,
    },

    /// A closed form failed its exact self-check. This is a bug in the
    /// library, never a property of valid input.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
