//! heunref: a numerical referee for indefinite-integral identities of local
//! Heun functions, the Gauss hypergeometric function and elliptic integrals.
//!
//! The crate has four layers:
//!
//! * [`specfun`] — numerical kernels: local Heun function `H_l` via its
//!   Frobenius series at the origin, `₂F₁`, Carlson symmetric forms and
//!   Legendre elliptic integrals.
//! * [`lagrange`] — the Conway/Lagrange machinery for a general second-order
//!   linear ODE `y″ + P y′ + Q y = 0`: the weight `f = exp ∫P`, the two sides
//!   of the master identity `∫ f(h″+Ph′+Qh) y dx = f·W(y,h) + c` and builders
//!   for trial functions `h`.
//! * [`catalog`] — hand-encoded identity records, each exposing an integrand,
//!   a claimed antiderivative and its closed-form derivative, together with
//!   parameter constraints and registered alternative readings.
//! * [`verifier`] — adaptive quadrature, an independent ODE integrator,
//!   seeded parameter sweeps and verdict/report generation.

pub mod catalog;
pub mod error;
pub mod lagrange;
pub mod report;
pub mod specfun;
pub mod verifier;

pub use error::{Error, Result};
