//! Conway/Lagrange machinery for y″ + P y′ + Q y = 0.
//!
//! The master identity is
//!
//! ```text
//! ∫ f(x)·[h″ + P h′ + Q h]·y dx = f(x)·W(y, h)(x) + c,    f = exp ∫P,
//! ```
//!
//! valid for any solution y of the equation and any twice-differentiable
//! trial function h, with W(y, h) = y h′ - h y′.

mod hchoice;

pub use hchoice::{
    build_h_conjugate, build_h_elementary, build_h_eq2, build_h_eq3, build_h_eq4,
    delta_discriminant, ConjugateKind, DeltaClass, DeltaDiscriminant, Eq2Variant, Eq4Solution,
    HChoice, HMethod, TrigBranch,
};

use crate::error::{Error, Result};
use crate::specfun::{near_integer, HeunParams};
use std::sync::Arc;

/// Guard distance from a singular point.
const SINGULAR_GUARD: f64 = 1e-12;

pub type RealFn = dyn Fn(f64) -> Result<f64> + Send + Sync;
pub type RealFnArc = Arc<RealFn>;

/// The coefficient functions (P, Q) of a second-order equation together with
/// its finite singular points.
#[derive(Clone)]
pub struct CoefficientPair {
    p: RealFnArc,
    q: RealFnArc,
    singular: Vec<f64>,
}

impl CoefficientPair {
    pub fn new(p: RealFnArc, q: RealFnArc, singular: Vec<f64>) -> Self {
        Self { p, q, singular }
    }

    /// Coefficients of the Heun equation for the given parameters.
    pub fn heun(hp: &HeunParams) -> Self {
        let p = *hp;
        Self {
            p: Arc::new(move |x| Ok(p.p_at(x))),
            q: Arc::new(move |x| Ok(p.q_at(x))),
            singular: p.singular_points().to_vec(),
        }
    }

    /// Same P, accessory parameter negated: the conjugate Heun equation with
    /// Q̄ = (αβx + q)/(x(x-1)(x-a)).
    pub fn heun_conjugate(hp: &HeunParams) -> Self {
        let p = *hp;
        let pn = p.with_negated_q();
        Self {
            p: Arc::new(move |x| Ok(p.p_at(x))),
            q: Arc::new(move |x| Ok(pn.q_at(x))),
            singular: p.singular_points().to_vec(),
        }
    }

    /// h″ + h′/x + h/(1-x²) = 0, the equation satisfied by the complete
    /// elliptic integral E in the modulus.
    pub fn elliptic_e_equation() -> Self {
        Self {
            p: Arc::new(|x| Ok(1.0 / x)),
            q: Arc::new(|x| Ok(1.0 / (1.0 - x * x))),
            singular: vec![-1.0, 0.0, 1.0],
        }
    }

    /// Second-order equation h″ + Q h = 0 (P ≡ 0) with the Heun Q.
    pub fn heun_q_only(hp: &HeunParams) -> Self {
        let p = *hp;
        Self {
            p: Arc::new(|_| Ok(0.0)),
            q: Arc::new(move |x| Ok(p.q_at(x))),
            singular: p.singular_points().to_vec(),
        }
    }

    pub fn p_at(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        (self.p)(x)
    }

    pub fn q_at(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        (self.q)(x)
    }

    pub fn singular_points(&self) -> &[f64] {
        &self.singular
    }

    pub fn is_singular(&self, x: f64) -> bool {
        self.singular.iter().any(|s| (x - s).abs() < SINGULAR_GUARD)
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.is_singular(x) {
            return Err(Error::Domain(format!("x = {x} is a singular point")));
        }
        Ok(())
    }
}

/// Strict real power: negative base requires an integer exponent.
pub fn real_pow(base: f64, exp: f64) -> Result<f64> {
    if base > 0.0 {
        return Ok(base.powf(exp));
    }
    if base == 0.0 {
        return if exp > 0.0 {
            Ok(0.0)
        } else if exp == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::Domain("0 raised to a negative power".into()))
        };
    }
    if near_integer(exp, 1e-9) {
        let e = exp.round();
        let sign = if (e as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * (-base).powf(e));
    }
    Err(Error::Branch {
        base,
        exponent: exp,
    })
}

/// Positive-base real power: integer exponents keep their sign, fractional
/// powers of a negative base are read as |base|^exp (the convention under
/// which the catalog stores both sides of every identity).
pub fn pow_pos_base(base: f64, exp: f64) -> f64 {
    if base >= 0.0 {
        base.powf(exp)
    } else if near_integer(exp, 1e-9) {
        let e = exp.round();
        let sign = if (e as i64) % 2 == 0 { 1.0 } else { -1.0 };
        sign * (-base).powf(e)
    } else {
        (-base).powf(exp)
    }
}

/// Value and d/d(base) of [`pow_pos_base`], for chain rules.
pub fn pow_pos_base_d(base: f64, exp: f64) -> (f64, f64) {
    let v = pow_pos_base(base, exp);
    if near_integer(exp, 1e-9) {
        (v, exp * pow_pos_base(base, exp - 1.0))
    } else {
        (v, exp * pow_pos_base(base, exp - 1.0) * base.signum())
    }
}

/// Weight f(x) = x^γ (x-1)^δ (x-a)^ε under the positive-base convention:
/// integer exponents are evaluated with their sign, fractional powers of
/// negative bases as |base|^exponent.
pub fn weight_f(p: &HeunParams, x: f64) -> Result<f64> {
    let bases = [x, x - 1.0, x - p.a()];
    if bases.iter().any(|b| b.abs() < SINGULAR_GUARD) {
        return Err(Error::Domain(format!(
            "x = {x} coincides with a singular point of the weight"
        )));
    }
    let exps = [p.gamma(), p.delta(), p.epsilon()];
    let mut v = 1.0;
    for (b, e) in bases.iter().zip(exps.iter()) {
        v *= pow_pos_base(*b, *e);
    }
    Ok(v)
}

/// Positive-base weight on 0 < x < min(1, a): x^γ (1-x)^δ (a-x)^ε, strictly
/// positive there; satisfies f′ = P f on any singularity-free interval.
pub fn weight_pos(p: &HeunParams, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("weight_pos requires x > 0, got {x}")));
    }
    Ok(pow_pos_base(x, p.gamma())
        * pow_pos_base((1.0 - x).abs(), p.delta())
        * pow_pos_base((p.a() - x).abs(), p.epsilon()))
}

/// Left side of the master identity: f(x)·(h″ + P h′ + Q h)·y(x).
pub fn conway_lhs_integrand<W, Y>(
    cp: &CoefficientPair,
    weight: &W,
    h: &HChoice,
    y: &Y,
    x: f64,
) -> Result<f64>
where
    W: Fn(f64) -> Result<f64> + ?Sized,
    Y: Fn(f64) -> Result<f64> + ?Sized,
{
    let bracket = h.h2_at(x)? + cp.p_at(x)? * h.h1_at(x)? + cp.q_at(x)? * h.h_at(x)?;
    Ok(weight(x)? * bracket * y(x)?)
}

/// Right side of the master identity: f(x)·W(y, h) = f·(y h′ - h y′).
pub fn conway_rhs<W, Y, Z>(
    weight: &W,
    h: &HChoice,
    y: &Y,
    y_prime: &Z,
    x: f64,
) -> Result<f64>
where
    W: Fn(f64) -> Result<f64> + ?Sized,
    Y: Fn(f64) -> Result<f64> + ?Sized,
    Z: Fn(f64) -> Result<f64> + ?Sized,
{
    Ok(weight(x)? * (y(x)? * h.h1_at(x)? - h.h_at(x)? * y_prime(x)?))
}

/// y″ from the defining equation: -P(x)·y′ - Q(x)·y. Refuses singular x.
pub fn second_derivative_via_ode(
    cp: &CoefficientPair,
    y: f64,
    y_prime: f64,
    x: f64,
) -> Result<f64> {
    Ok(-cp.p_at(x)? * y_prime - cp.q_at(x)? * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{heun_l_both, heun_series_coeffs};

    fn assert_close(got: f64, want: f64, tol: f64, msg: &str) {
        assert!(
            (got - want).abs() <= tol * (1.0 + want.abs()),
            "{msg}: got {got}, want {want}"
        );
    }

    #[test]
    fn weight_examples() {
        // integer exponents keep their sign: gamma=1, delta=0, eps=1
        let p = HeunParams::new(2.0, 0.0, 0.5, 0.5, 1.0, 0.0).unwrap();
        assert_close(p.epsilon(), 1.0, 1e-15, "eps");
        assert_close(weight_f(&p, 0.5).unwrap(), -0.75, 1e-15, "0.5*(0.5-2)");
        // fractional exponents combine as the positive square root
        let ph = HeunParams::new(2.0, 0.0, 0.25, 0.25, 0.5, 0.5).unwrap();
        assert_close(ph.epsilon(), 0.5, 1e-15, "eps half");
        assert_close(
            weight_f(&ph, 0.5).unwrap(),
            (0.5f64 * 0.5 * 1.5).sqrt(),
            1e-15,
            "sqrt(0.375)",
        );
        // exponent-zero factors contribute an empty product
        assert_eq!(pow_pos_base(-0.7, 0.0), 1.0);
        assert_eq!(pow_pos_base(0.3, 0.0), 1.0);
        // singular points refused
        assert!(weight_f(&ph, 0.0).is_err());
        assert!(weight_f(&ph, 2.0).is_err());
    }

    #[test]
    fn strict_power_branch_error() {
        assert!(matches!(real_pow(-0.5, 0.5), Err(Error::Branch { .. })));
        assert_close(real_pow(-0.5, 2.0).unwrap(), 0.25, 1e-15, "integer");
        assert_close(real_pow(-0.5, 3.0).unwrap(), -0.125, 1e-15, "odd integer");
        assert_close(real_pow(0.3, 0.5).unwrap(), 0.3f64.sqrt(), 1e-15, "positive");
    }

    #[test]
    fn constant_h_reduces_to_eq_zero() {
        // with h = c0: lhs = c0·f·Q·y, rhs = -c0·f·y′ pointwise
        let p = HeunParams::new(3.0, 0.4, 1.2, 0.8, 0.7, 0.5).unwrap();
        let cp = CoefficientPair::heun(&p);
        let h = build_h_elementary(0, 0.0, 0, 0.0, TrigBranch::None);
        let w: RealFnArc = {
            let p = p;
            Arc::new(move |x| weight_pos(&p, x))
        };
        let y: RealFnArc = {
            let p = p;
            Arc::new(move |x| heun_l_both(&p, x).map(|v| v.0))
        };
        let yp: RealFnArc = {
            let p = p;
            Arc::new(move |x| heun_l_both(&p, x).map(|v| v.1))
        };
        for x in [0.15, 0.4, 0.7] {
            let lhs = conway_lhs_integrand(&cp, &*w, &h, &*y, x).unwrap();
            let direct = weight_pos(&p, x).unwrap() * p.q_at(x) * (y)(x).unwrap();
            assert_close(lhs, direct, 1e-14, "eq (zero) lhs");
            let rhs = conway_rhs(&*w, &h, &*y, &*yp, x).unwrap();
            let direct = -weight_pos(&p, x).unwrap() * (yp)(x).unwrap();
            assert_close(rhs, direct, 1e-14, "eq (zero) rhs");
        }
    }

    #[test]
    fn second_derivative_examples() {
        // constant solution: y ≡ 1, y′ ≡ 0, q = αβ = 0 gives y″ = 0
        let p = HeunParams::new(2.0, 0.0, 0.0, 1.0, 0.8, 0.4).unwrap();
        let cp = CoefficientPair::heun(&p);
        assert_close(
            second_derivative_via_ode(&cp, 1.0, 0.0, 0.3).unwrap(),
            0.0,
            1e-15,
            "constant",
        );
        // refuses singular points
        assert!(second_derivative_via_ode(&cp, 1.0, 0.0, 0.0).is_err());
        assert!(second_derivative_via_ode(&cp, 1.0, 0.0, 2.0).is_err());
        // matches the twice-differentiated series
        let p = HeunParams::new(3.0, 0.4, 1.2, 0.8, 0.7, 0.5).unwrap();
        let cp = CoefficientPair::heun(&p);
        let x = 0.3;
        let (y, yp) = heun_l_both(&p, x).unwrap();
        let from_ode = second_derivative_via_ode(&cp, y, yp, x).unwrap();
        let c = heun_series_coeffs(&p, 80).unwrap();
        let mut ypp = 0.0;
        for (k, ck) in c.coeffs().iter().enumerate().skip(2) {
            ypp += (k * (k - 1)) as f64 * ck * x.powi(k as i32 - 2);
        }
        assert_close(from_ode, ypp, 1e-9, "series second derivative");
    }
}
