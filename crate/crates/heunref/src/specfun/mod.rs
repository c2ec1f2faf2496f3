//! Numerical special-function kernels.
//!
//! Everything here is double precision with compensated (Kahan) summation in
//! the series loops; no arbitrary-precision arithmetic.

mod elliptic;
mod heun;
mod hyp2f1;

pub use elliptic::{
    carlson_rd, carlson_rf, ellip_e_complete, ellip_f_incomplete, ellip_k_complete,
};
pub use heun::{heun_l, heun_l_both, heun_l_prime, heun_series_coeffs, HeunParams, SeriesExpansion};
pub use hyp2f1::{hyp2f1, hyp2f1_prime};

/// Compensated (Kahan) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, term: f64) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// True when `v` is within `tol` of an integer.
pub(crate) fn near_integer(v: f64, tol: f64) -> bool {
    (v - v.round()).abs() <= tol
}

/// True when `v` is within `tol` of a nonpositive integer.
pub(crate) fn near_nonpositive_integer(v: f64, tol: f64) -> bool {
    near_integer(v, tol) && v.round() <= 0.0
}
