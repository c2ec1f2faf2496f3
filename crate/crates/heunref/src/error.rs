//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates a constraint (named in the message).
    #[error("parameter error: {0}")]
    Param(String),

    /// An evaluation point lies outside the valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A negative base met a non-integer exponent where no real-valued
    /// convention applies.
    #[error("branch error: negative base {base} with non-integer exponent {exponent}")]
    Branch { base: f64, exponent: f64 },

    /// A verification interval is empty or conflicts with a singularity.
    #[error("interval error: {0}")]
    Interval(String),

    /// A series or iteration did not converge.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Adaptive quadrature exceeded the subdivision depth; carries the
    /// partial estimate.
    #[error("quadrature did not converge: partial estimate {partial}, error estimate {err_estimate}")]
    QuadDepth { partial: f64, err_estimate: f64 },

    /// The ODE integrator could not continue (step underflow near a
    /// singularity, or a singular point on the requested path).
    #[error("propagation error: {0}")]
    Propagation(String),

    /// Every draw of a sample plan was excluded by the entry's predicates.
    #[error("empty plan: {0}")]
    EmptyPlan(String),

    /// Invalid run configuration.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
