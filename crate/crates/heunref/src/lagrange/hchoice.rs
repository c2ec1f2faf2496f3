//! Builders for the trial functions h used with the master identity.
//!
//! Each builder returns an [`HChoice`] whose h″ comes from the defining
//! relation of its method (never from double finite differences):
//! * EQ2 solves h″ + P h′ = 0, so h″ = -P h′;
//! * EQ3 solves P h′ + Q h = 0, so h′ = -(Q/P) h and h″ follows by
//!   differentiating that relation;
//! * EQ4 solves h″ + Q h = 0, so h″ = -Q h;
//! * the conjugate builders carry true closed-form second derivatives.

use super::{pow_pos_base, pow_pos_base_d, RealFnArc};
use crate::error::{Error, Result};
use crate::specfun::{
    ellip_e_complete, ellip_f_incomplete, ellip_k_complete, heun_l_both, hyp2f1, hyp2f1_prime,
    near_nonpositive_integer, HeunParams,
};
use std::sync::Arc;

/// Which construction produced a trial function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HMethod {
    Constant,
    Elementary,
    Eq2,
    Eq3,
    Eq4,
    Conjugate,
}

/// Trig factor of the elementary family h = x^m e^{ρx^ℓ}·{sin(kx)|cos(kx)}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigBranch {
    Sin,
    Cos,
    None,
}

/// A trial function with its first two derivatives.
#[derive(Clone)]
pub struct HChoice {
    h: RealFnArc,
    h1: RealFnArc,
    h2: RealFnArc,
    method: HMethod,
    extra_singularities: Vec<f64>,
}

impl HChoice {
    pub fn new(
        h: RealFnArc,
        h1: RealFnArc,
        h2: RealFnArc,
        method: HMethod,
        extra_singularities: Vec<f64>,
    ) -> Self {
        Self {
            h,
            h1,
            h2,
            method,
            extra_singularities,
        }
    }

    pub fn h_at(&self, x: f64) -> Result<f64> {
        (self.h)(x)
    }
    pub fn h1_at(&self, x: f64) -> Result<f64> {
        (self.h1)(x)
    }
    pub fn h2_at(&self, x: f64) -> Result<f64> {
        (self.h2)(x)
    }
    pub fn method(&self) -> HMethod {
        self.method
    }
    pub fn extra_singularities(&self) -> &[f64] {
        &self.extra_singularities
    }
}

/// h(x) = x^m e^{ρ x^ℓ} · {sin(k x) | cos(k x) | 1}, with closed-form
/// derivatives.
pub fn build_h_elementary(m: u32, rho: f64, ell: u32, k: f64, branch: TrigBranch) -> HChoice {
    let method = if m == 0 && rho == 0.0 && matches!(branch, TrigBranch::None) {
        HMethod::Constant
    } else {
        HMethod::Elementary
    };
    let parts = move |x: f64| -> (f64, f64, f64, f64, f64, f64, f64, f64, f64) {
        let mf = m as f64;
        let lf = ell as f64;
        // A = x^m
        let a0 = x.powi(m as i32);
        let a1 = if m >= 1 { mf * x.powi(m as i32 - 1) } else { 0.0 };
        let a2 = if m >= 2 {
            mf * (mf - 1.0) * x.powi(m as i32 - 2)
        } else {
            0.0
        };
        // B = exp(rho x^ell)
        let b0 = (rho * x.powi(ell as i32)).exp();
        let g1 = if ell >= 1 {
            rho * lf * x.powi(ell as i32 - 1)
        } else {
            0.0
        };
        let g2 = if ell >= 2 {
            rho * lf * (lf - 1.0) * x.powi(ell as i32 - 2)
        } else {
            0.0
        };
        let b1 = g1 * b0;
        let b2 = (g1 * g1 + g2) * b0;
        // C = trig(kx)
        let (c0, c1, c2) = match branch {
            TrigBranch::Sin => ((k * x).sin(), k * (k * x).cos(), -k * k * (k * x).sin()),
            TrigBranch::Cos => ((k * x).cos(), -k * (k * x).sin(), -k * k * (k * x).cos()),
            TrigBranch::None => (1.0, 0.0, 0.0),
        };
        (a0, a1, a2, b0, b1, b2, c0, c1, c2)
    };
    let h = Arc::new(move |x: f64| {
        let (a0, _, _, b0, _, _, c0, _, _) = parts(x);
        Ok(a0 * b0 * c0)
    });
    let h1 = Arc::new(move |x: f64| {
        let (a0, a1, _, b0, b1, _, c0, c1, _) = parts(x);
        Ok(a1 * b0 * c0 + a0 * b1 * c0 + a0 * b0 * c1)
    });
    let h2 = Arc::new(move |x: f64| {
        let (a0, a1, a2, b0, b1, b2, c0, c1, c2) = parts(x);
        Ok(a2 * b0 * c0
            + a0 * b2 * c0
            + a0 * b0 * c2
            + 2.0 * (a1 * b1 * c0 + a1 * b0 * c1 + a0 * b1 * c1))
    });
    HChoice::new(h, h1, h2, method, Vec::new())
}

/// Variants of the h″ + P h′ = 0 family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eq2Variant {
    /// γ = δ = ε = 1/2: h = (2/√a)·F(arcsin √x, 1/√a).
    Elliptic,
    /// δ = 0: h = x^τ ₂F₁(ε, τ; 1+τ; x/a), τ = 1-γ.
    Delta0,
    /// ε = 0: h = x^τ ₂F₁(δ, τ; 1+τ; x), τ = 1-γ.
    Eps0,
}

/// Trial functions solving h″ + P h′ = 0 in closed form; h′ is closed form
/// and h″ = -P h′.
pub fn build_h_eq2(p: &HeunParams, variant: Eq2Variant) -> Result<HChoice> {
    let hp = *p;
    match variant {
        Eq2Variant::Elliptic => {
            for (name, v) in [("gamma", p.gamma()), ("delta", p.delta()), ("epsilon", p.epsilon())]
            {
                if (v - 0.5).abs() > 1e-9 {
                    return Err(Error::Param(format!(
                        "elliptic h requires gamma = delta = epsilon = 1/2, got {name} = {v}"
                    )));
                }
            }
            if p.a() <= 1.0 {
                return Err(Error::Param(format!(
                    "elliptic h requires a > 1 for a real modulus 1/sqrt(a), got a = {}",
                    p.a()
                )));
            }
            let a = p.a();
            let h = Arc::new(move |x: f64| {
                if !(0.0..1.0).contains(&x) {
                    return Err(Error::Domain(format!("elliptic h requires x in [0,1), got {x}")));
                }
                Ok(2.0 / a.sqrt() * ellip_f_incomplete(x.sqrt().asin(), 1.0 / a.sqrt())?)
            });
            let radicand = move |x: f64| x * (1.0 - x) * (a - x);
            let h1 = Arc::new(move |x: f64| {
                let r = radicand(x);
                if r <= 0.0 {
                    return Err(Error::Domain(format!(
                        "x(1-x)(a-x) = {r} not positive at x = {x}"
                    )));
                }
                Ok(1.0 / r.sqrt())
            });
            let h1c = h1.clone();
            let h2 = Arc::new(move |x: f64| Ok(-hp.p_at(x) * h1c(x)?));
            Ok(HChoice::new(h, h1, h2, HMethod::Eq2, Vec::new()))
        }
        Eq2Variant::Delta0 | Eq2Variant::Eps0 => {
            let tau = 1.0 - p.gamma();
            if tau.abs() < 1e-9 {
                return Err(Error::Param(
                    "tau = 1-gamma = 0: the x^tau solution degenerates to a constant".into(),
                ));
            }
            if near_nonpositive_integer(1.0 + tau, 1e-9) {
                return Err(Error::Param(format!(
                    "1+tau = {} is a nonpositive integer",
                    1.0 + tau
                )));
            }
            let (first, scale, exp_at) = match variant {
                Eq2Variant::Delta0 => {
                    if p.delta().abs() > 1e-9 {
                        return Err(Error::Param(format!(
                            "variant Delta0 requires delta = 0, got {}",
                            p.delta()
                        )));
                    }
                    (p.epsilon(), p.a(), p.epsilon())
                }
                _ => {
                    if p.epsilon().abs() > 1e-9 {
                        return Err(Error::Param(format!(
                            "variant Eps0 requires epsilon = 0, got {}",
                            p.epsilon()
                        )));
                    }
                    (p.delta(), 1.0, p.delta())
                }
            };
            let h = Arc::new(move |x: f64| {
                if x <= 0.0 {
                    return Err(Error::Domain(format!("h = x^tau requires x > 0, got {x}")));
                }
                Ok(x.powf(tau) * hyp2f1(first, tau, 1.0 + tau, x / scale)?)
            });
            let h1 = Arc::new(move |x: f64| {
                if x <= 0.0 {
                    return Err(Error::Domain(format!("h' requires x > 0, got {x}")));
                }
                let base = 1.0 - x / scale;
                if base <= 0.0 {
                    return Err(Error::Domain(format!(
                        "1 - x/{scale} = {base} not positive at x = {x}"
                    )));
                }
                Ok(tau * x.powf(tau - 1.0) * base.powf(-exp_at))
            });
            let h1c = h1.clone();
            let h2 = Arc::new(move |x: f64| Ok(-hp.p_at(x) * h1c(x)?));
            Ok(HChoice::new(h, h1, h2, HMethod::Eq2, Vec::new()))
        }
    }
}

/// 𝔨-coefficients of K(x) = f·P·(power shifts) and the discriminant
/// Δ = 𝔨₀𝔨₂ - 𝔨₁²/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaDiscriminant {
    pub k2: f64,
    pub k1: f64,
    pub k0: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaClass {
    Positive,
    Zero,
    Negative,
    /// Leading coefficient 𝔨₂ vanishes; the quadratic branch analysis does
    /// not apply.
    DegenerateK2,
}

pub fn delta_discriminant(p: &HeunParams) -> DeltaDiscriminant {
    let k2 = p.alpha() + p.beta() + 1.0;
    let k1 = -(p.a() * (p.gamma() + p.delta()) + p.alpha() + p.beta() + 1.0 - p.delta());
    let k0 = p.a() * p.gamma();
    DeltaDiscriminant {
        k2,
        k1,
        k0,
        delta: k0 * k2 - 0.25 * k1 * k1,
    }
}

impl DeltaDiscriminant {
    pub fn classification(&self) -> DeltaClass {
        let scale = 1.0 + (self.k0 * self.k2).abs() + 0.25 * self.k1 * self.k1;
        if self.k2.abs() < 1e-9 * (1.0 + self.k1.abs() + self.k0.abs()) {
            DeltaClass::DegenerateK2
        } else if self.delta.abs() < 1e-9 * scale {
            DeltaClass::Zero
        } else if self.delta > 0.0 {
            DeltaClass::Positive
        } else {
            DeltaClass::Negative
        }
    }

    pub fn k_at(&self, x: f64) -> f64 {
        (self.k2 * x + self.k1) * x + self.k0
    }

    /// Real roots of K (empty for Δ > 0 with 𝔨₂ ≠ 0).
    pub fn real_roots(&self) -> Vec<f64> {
        match self.classification() {
            DeltaClass::Positive => Vec::new(),
            DeltaClass::Zero => vec![-self.k1 / (2.0 * self.k2)],
            DeltaClass::Negative => {
                let sd = (-self.delta).sqrt();
                vec![
                    (-self.k1 - 2.0 * sd) / (2.0 * self.k2),
                    (-self.k1 + 2.0 * sd) / (2.0 * self.k2),
                ]
            }
            DeltaClass::DegenerateK2 => {
                if self.k1.abs() > 1e-9 {
                    vec![-self.k0 / self.k1]
                } else {
                    Vec::new()
                }
            }
        }
    }
}

/// Trial function solving P h′ + Q h = 0:
/// h = exp(-∫ (αβx - q)/K(x) dx), evaluated branch by branch from the sign
/// of Δ; h′ = -(Q/P)·h and h″ from differentiating that relation.
pub fn build_h_eq3(p: &HeunParams) -> Result<HChoice> {
    let ab = p.alpha() * p.beta();
    let q = p.q();
    let d = delta_discriminant(p);
    let class = d.classification();
    let roots = d.real_roots();

    let base: RealFnArc = match class {
        DeltaClass::Positive => {
            let zeta = (ab * d.k1 + 2.0 * q * d.k2) / (2.0 * d.k2 * d.delta.sqrt());
            let e = -ab / (2.0 * d.k2);
            let (k2, k1, sd) = (d.k2, d.k1, d.delta.sqrt());
            let dd = d;
            Arc::new(move |x: f64| {
                Ok(pow_pos_base(dd.k_at(x), e)
                    * (zeta * ((2.0 * k2 * x + k1) / (2.0 * sd)).atan()).exp())
            })
        }
        DeltaClass::Zero => {
            let x0 = -d.k1 / (2.0 * d.k2);
            let c = (ab * x0 - q) / d.k2;
            let e = -ab / d.k2;
            Arc::new(move |x: f64| {
                if (x - x0).abs() < 1e-12 {
                    return Err(Error::Domain(format!("x = {x} hits the h-singularity x0 = {x0}")));
                }
                Ok(pow_pos_base(x - x0, e) * (c / (x - x0)).exp())
            })
        }
        DeltaClass::Negative => {
            let sd = (-d.delta).sqrt();
            let e = -ab / (2.0 * d.k2);
            let eta = (ab * d.k1 + 2.0 * q * d.k2) / (4.0 * d.k2 * sd);
            let (k2, k1) = (d.k2, d.k1);
            let dd = d;
            Arc::new(move |x: f64| {
                let num = 2.0 * k2 * x + k1 - 2.0 * sd;
                let den = 2.0 * k2 * x + k1 + 2.0 * sd;
                if num.abs() < 1e-12 || den.abs() < 1e-12 {
                    return Err(Error::Domain(format!("x = {x} hits a root of K")));
                }
                Ok(pow_pos_base(dd.k_at(x), e) * pow_pos_base((num / den).abs(), eta))
            })
        }
        DeltaClass::DegenerateK2 => {
            if d.k1.abs() > 1e-9 {
                // K linear: exp(-∫(abx-q)/(k1 x + k0)) =
                //   e^{-ab x/k1} |k1 x + k0|^{(q + ab k0/k1)/k1}
                let (k1, k0) = (d.k1, d.k0);
                let e = (q + ab * k0 / k1) / k1;
                Arc::new(move |x: f64| {
                    let kx = k1 * x + k0;
                    if kx.abs() < 1e-12 {
                        return Err(Error::Domain(format!("x = {x} hits the root of K")));
                    }
                    Ok((-ab * x / k1).exp() * pow_pos_base(kx.abs(), e))
                })
            } else if d.k0.abs() > 1e-9 {
                // K constant: h = exp(-(ab x^2/2 - q x)/k0)
                let k0 = d.k0;
                Arc::new(move |x: f64| Ok((-(0.5 * ab * x * x - q * x) / k0).exp()))
            } else {
                return Err(Error::Param(
                    "K(x) vanishes identically; the P h' + Q h = 0 family is degenerate".into(),
                ));
            }
        }
    };

    // ratio Q/P = (ab x - q)/K(x) and its derivative
    let dd = d;
    let ratio = move |x: f64| -> Result<(f64, f64)> {
        let kx = dd.k_at(x);
        if kx.abs() < 1e-12 {
            return Err(Error::Domain(format!("K(x) = 0 at x = {x}")));
        }
        let kpx = 2.0 * dd.k2 * x + dd.k1;
        let r = (ab * x - q) / kx;
        let rp = (ab * kx - (ab * x - q) * kpx) / (kx * kx);
        Ok((r, rp))
    };
    let b1 = base.clone();
    let h1 = Arc::new(move |x: f64| {
        let (r, _) = ratio(x)?;
        Ok(-r * b1(x)?)
    });
    let b2 = base.clone();
    let h2 = Arc::new(move |x: f64| {
        let (r, rp) = ratio(x)?;
        Ok((r * r - rp) * b2(x)?)
    });
    Ok(HChoice::new(base, h1, h2, HMethod::Eq3, roots))
}

/// Which of the two s-homotopic solutions of h″ + Q h = 0 to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eq4Solution {
    First,
    Second,
}

/// Trial functions solving h″ + Q h = 0 with real ρ = √(1-4αβ):
///
/// * general q: h = x^(-s) (x-a) H_l(1/a, q'; s, s+1, 2s, 0; 1/x) with
///   s = (1±ρ)/2 and accessory q' = s(s+1) + (q-αβ)/a;
/// * q = 0: h = (x-a)(x-1)^(-s) ₂F₁(s, s+1; 2s; (a-1)/(x-1)).
///
/// h″ = -Q h by construction.
pub fn build_h_eq4(p: &HeunParams, which: Eq4Solution, q_zero: bool) -> Result<HChoice> {
    let ab = p.alpha() * p.beta();
    let disc = 1.0 - 4.0 * ab;
    if disc <= 1e-12 {
        return Err(Error::Param(format!(
            "1 - 4*alpha*beta = {disc} must be positive for a real exponent rho"
        )));
    }
    let rho = disc.sqrt();
    let s = match which {
        Eq4Solution::First => 0.5 * (1.0 + rho),
        Eq4Solution::Second => 0.5 * (1.0 - rho),
    };
    let hp = *p;
    let qh = move |x: f64| hp.q_at(x);

    if q_zero {
        if p.q().abs() > 1e-12 {
            return Err(Error::Param(format!(
                "q_zero form requires q = 0, got q = {}",
                p.q()
            )));
        }
        let (fa, fb, fc) = (s, s + 1.0, 2.0 * s);
        if fc.abs() < 1e-9 {
            return Err(Error::Param(
                "c = 2s = 0: the hypergeometric solution degenerates (alpha*beta = 0)".into(),
            ));
        }
        if near_nonpositive_integer(fc, 1e-9) {
            // fine only when the numerator terminates before the pole of (c)_k
            let pole = (-fc.round()) as i64 + 1;
            let stops = |v: f64| near_nonpositive_integer(v, 1e-9) && ((-v.round()) as i64) < pole;
            if !(stops(fa) || stops(fb)) {
                return Err(Error::Param(format!(
                    "c = 2s = {fc} is a nonpositive integer with no terminating numerator"
                )));
            }
        }
        let a = p.a();
        let pieces = move |x: f64| -> Result<(f64, f64, f64, f64, f64, f64)> {
            if (x - 1.0).abs() < 1e-12 {
                return Err(Error::Domain(format!("x = {x} is the singular point 1")));
            }
            let w = (a - 1.0) / (x - 1.0);
            let f = hyp2f1(fa, fb, fc, w)?;
            let fp = hyp2f1_prime(fa, fb, fc, w)?;
            let (pw, dpw) = pow_pos_base_d(x - 1.0, -s);
            Ok((w, f, fp, pw, dpw, -(a - 1.0) / ((x - 1.0) * (x - 1.0))))
        };
        let h = Arc::new(move |x: f64| {
            let (_, f, _, pw, _, _) = pieces(x)?;
            Ok((x - a) * pw * f)
        });
        let h1 = Arc::new(move |x: f64| {
            let (_, f, fp, pw, dpw, wp) = pieces(x)?;
            Ok(pw * f + (x - a) * dpw * f + (x - a) * pw * fp * wp)
        });
        let hh = h.clone();
        let h2 = Arc::new(move |x: f64| Ok(-qh(x) * hh(x)?));
        return Ok(HChoice::new(h, h1, h2, HMethod::Eq4, Vec::new()));
    }

    let qi = s * (s + 1.0) + (p.q() - ab) / p.a();
    let inner = HeunParams::new(1.0 / p.a(), qi, s, s + 1.0, 2.0 * s, 0.0).map_err(|e| {
        Error::Param(format!("transformed Heun parameters invalid: {e}"))
    })?;
    let a = p.a();
    let pieces = move |x: f64| -> Result<(f64, f64, f64)> {
        if x <= 0.0 {
            return Err(Error::Domain(format!(
                "the x^(-s) H_l(...; 1/x) form requires x > 0, got {x}"
            )));
        }
        let (hin, hinp) = heun_l_both(&inner, 1.0 / x)?;
        Ok((x.powf(-s), hin, hinp))
    };
    let h = Arc::new(move |x: f64| {
        let (xs, hin, _) = pieces(x)?;
        Ok(xs * (x - a) * hin)
    });
    let h1 = Arc::new(move |x: f64| {
        let (xs, hin, hinp) = pieces(x)?;
        Ok(-s * xs / x * (x - a) * hin + xs * hin - xs * (x - a) * hinp / (x * x))
    });
    let hh = h.clone();
    let h2 = Arc::new(move |x: f64| Ok(-qh(x) * hh(x)?));
    Ok(HChoice::new(h, h1, h2, HMethod::Eq4, Vec::new()))
}

/// Conjugate-equation trial functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjugateKind {
    /// h = H_l(a, -q; α, β, γ, δ; x), solving the equation with
    /// Q̄ = (αβx + q)/(x(x-1)(x-a)).
    NegQ,
    /// h = E(x′) with x′ = √(1-x²); derivatives through
    /// dE(x′)/dx′ = (E(x′) - K(x′))/x′ and dx′/dx = -x/x′.
    EllipticE,
}

pub fn build_h_conjugate(p: &HeunParams, kind: ConjugateKind) -> Result<HChoice> {
    match kind {
        ConjugateKind::NegQ => {
            let pn = p.with_negated_q();
            let hp = *p;
            let h = Arc::new(move |x: f64| heun_l_both(&pn, x).map(|v| v.0));
            let h1 = Arc::new(move |x: f64| heun_l_both(&pn, x).map(|v| v.1));
            let h2 = Arc::new(move |x: f64| {
                let (h, h1) = heun_l_both(&pn, x)?;
                Ok(-hp.p_at(x) * h1 - pn.q_at(x) * h)
            });
            Ok(HChoice::new(h, h1, h2, HMethod::Conjugate, Vec::new()))
        }
        ConjugateKind::EllipticE => {
            let check = |x: f64| -> Result<f64> {
                if !(0.0 < x && x < 1.0) {
                    return Err(Error::Domain(format!(
                        "E(x') requires x strictly inside (0, 1), got {x}"
                    )));
                }
                Ok((1.0 - x * x).sqrt())
            };
            let ek = move |x: f64| -> Result<(f64, f64)> {
                let xp = check(x)?;
                Ok((ellip_e_complete(xp)?, ellip_k_complete(xp)?))
            };
            let h = Arc::new(move |x: f64| ellip_e_complete(check(x)?));
            let h1 = Arc::new(move |x: f64| {
                let (e, k) = ek(x)?;
                Ok(-x * (e - k) / (1.0 - x * x))
            });
            let h2 = Arc::new(move |x: f64| {
                let (e, k) = ek(x)?;
                let u = 1.0 - x * x;
                Ok(-(e - k) * (1.0 / u + 2.0 * x * x / (u * u)) - e / u)
            });
            Ok(HChoice::new(h, h1, h2, HMethod::Conjugate, Vec::new()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::heun_l;

    fn assert_close(got: f64, want: f64, tol: f64, msg: &str) {
        assert!(
            (got - want).abs() <= tol * (1.0 + want.abs()),
            "{msg}: got {got}, want {want}"
        );
    }

    /// central-difference consistency of (h, h', h'') on a grid
    fn check_derivative_consistency(h: &HChoice, lo: f64, hi: f64) {
        let steps = 9;
        for i in 0..steps {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / steps as f64;
            let d = 1e-6 * (1.0 + x.abs());
            let n1 = (h.h_at(x + d).unwrap() - h.h_at(x - d).unwrap()) / (2.0 * d);
            let e1 = h.h1_at(x).unwrap();
            assert_close(n1, e1, 2e-6, &format!("h' at {x}"));
            let n2 = (h.h1_at(x + d).unwrap() - h.h1_at(x - d).unwrap()) / (2.0 * d);
            let e2 = h.h2_at(x).unwrap();
            assert_close(n2, e2, 2e-6, &format!("h'' at {x}"));
        }
    }

    #[test]
    fn elementary_examples() {
        let one = build_h_elementary(0, 0.0, 1, 0.0, TrigBranch::None);
        assert_eq!(one.method(), HMethod::Constant);
        assert_eq!(one.h_at(0.4).unwrap(), 1.0);
        assert_eq!(one.h1_at(0.4).unwrap(), 0.0);
        assert_eq!(one.h2_at(0.4).unwrap(), 0.0);

        let sq = build_h_elementary(2, 0.0, 1, 0.0, TrigBranch::None);
        assert_close(sq.h_at(0.7).unwrap(), 0.49, 1e-15, "x^2");
        assert_close(sq.h1_at(0.7).unwrap(), 1.4, 1e-15, "2x");
        assert_close(sq.h2_at(0.7).unwrap(), 2.0, 1e-15, "2");

        // h = e^x sin x has h''(0) = 2
        let es = build_h_elementary(0, 1.0, 1, 1.0, TrigBranch::Sin);
        assert_close(es.h2_at(0.0).unwrap(), 2.0, 1e-15, "h''(0)");
        check_derivative_consistency(&es, 0.1, 0.8);

        let full = build_h_elementary(2, -0.5, 2, 1.3, TrigBranch::Cos);
        check_derivative_consistency(&full, 0.1, 0.8);
    }

    #[test]
    fn eq2_elliptic() {
        let p = HeunParams::new(2.0, 0.3, 0.2, 0.3, 0.5, 0.5).unwrap();
        let h = build_h_eq2(&p, Eq2Variant::Elliptic).unwrap();
        // h(0.25) = sqrt(2)·F(arcsin 1/2, 1/sqrt2)
        let want = 2.0f64.sqrt() * ellip_f_incomplete(0.5f64.asin(), 0.5f64.sqrt()).unwrap();
        assert_close(h.h_at(0.25).unwrap(), want, 1e-13, "h(0.25)");
        // fundamental theorem: h'(x)·sqrt(x(1-x)(a-x)) = 1
        for x in [0.1, 0.5, 0.9] {
            let r = (x * (1.0f64 - x) * (2.0 - x)).sqrt();
            assert_close(h.h1_at(x).unwrap() * r, 1.0, 1e-14, "h' radical");
        }
        check_derivative_consistency(&h, 0.1, 0.85);
        // method residual h'' + P h' = 0 holds by construction; check against
        // finite differences through the consistency test above.
        // degenerate-parameter exclusions
        let pbad = HeunParams::new(2.0, 0.3, 1.0, 1.0, 1.0, 0.5).unwrap();
        assert!(build_h_eq2(&pbad, Eq2Variant::Elliptic).is_err());
    }

    #[test]
    fn eq2_hypergeometric_variants() {
        // Delta0: delta = 0
        let p = HeunParams::new(3.0, 0.25, 0.9, 0.6, 0.7, 0.0).unwrap();
        let h = build_h_eq2(&p, Eq2Variant::Delta0).unwrap();
        check_derivative_consistency(&h, 0.1, 0.8);
        // gamma = 1 must be flagged
        let pg = HeunParams::new(3.0, 0.25, 0.9, 0.6, 1.0, 0.0).unwrap();
        assert!(matches!(build_h_eq2(&pg, Eq2Variant::Delta0), Err(Error::Param(_))));
        // Eps0: epsilon = 0, i.e. delta = alpha+beta+1-gamma
        let pe = HeunParams::new(3.0, 0.25, 0.9, 0.6, 0.7, 0.9 + 0.6 + 1.0 - 0.7).unwrap();
        assert_close(pe.epsilon(), 0.0, 1e-12, "eps");
        let h = build_h_eq2(&pe, Eq2Variant::Eps0).unwrap();
        check_derivative_consistency(&h, 0.1, 0.8);
    }

    #[test]
    fn discriminant_examples() {
        let p = HeunParams::new(2.0, 0.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let d = delta_discriminant(&p);
        assert_close(d.k2, 3.0, 1e-15, "k2");
        assert_close(d.k1, -6.0, 1e-15, "k1");
        assert_close(d.k0, 2.0, 1e-15, "k0");
        assert_close(d.delta, -3.0, 1e-15, "delta");
        assert_eq!(d.classification(), DeltaClass::Negative);
        // under a=2, q=ab, delta=a+b-2g+1: Delta = (a+b+1)(a+b+1-2g)
        let (al, be, ga) = (0.9f64, 0.7, 0.8);
        let p = HeunParams::new(2.0, al * be, al, be, ga, al + be - 2.0 * ga + 1.0).unwrap();
        let d = delta_discriminant(&p);
        // the definitions give S(2*gamma - S): the printed closed form with
        // the opposite sign; the zero locus gamma = (alpha+beta+1)/2 agrees
        let s_sum = al + be + 1.0;
        assert_close(d.delta, s_sum * (2.0 * ga - s_sum), 1e-12, "lepanto magnitude");
        // zero iff gamma = (a+b+1)/2
        let g0 = (al + be + 1.0) / 2.0;
        let p0 = HeunParams::new(2.0, al * be, al, be, g0, al + be - 2.0 * g0 + 1.0).unwrap();
        assert_eq!(delta_discriminant(&p0).classification(), DeltaClass::Zero);
        // alpha = -beta-1 makes k2 vanish
        let pd = HeunParams::new(2.0, 0.3, -1.7, 0.7, 0.8, 0.4).unwrap();
        assert_eq!(delta_discriminant(&pd).classification(), DeltaClass::DegenerateK2);
    }

    #[test]
    fn eq3_closed_forms() {
        // a=2, q=ab, delta=a+b-2g+1: h = [(a+b+1)(x^2-2x)+2g]^(-ab/(2(a+b+1)))
        // independently of the sign of Delta
        for (al, be, ga) in [(0.9f64, 0.7, 0.8), (1.0, 1.0, 1.8)] {
            let p = HeunParams::new(2.0, al * be, al, be, ga, al + be - 2.0 * ga + 1.0).unwrap();
            let h = build_h_eq3(&p).unwrap();
            let ab = al * be;
            for x in [0.2, 0.5, 0.8] {
                let base = (al + be + 1.0) * (x * x - 2.0 * x) + 2.0 * ga;
                let want = pow_pos_base(base, -ab / (2.0 * (al + be + 1.0)));
                let got = h.h_at(x).unwrap();
                // h is defined up to a constant multiple; compare the ratio at
                // two points instead of raw values
                let x2 = 0.35;
                let base2 = (al + be + 1.0) * (x2 * x2 - 2.0 * x2) + 2.0 * ga;
                let want2 = pow_pos_base(base2, -ab / (2.0 * (al + be + 1.0)));
                let got2 = h.h_at(x2).unwrap();
                assert_close(got / got2, want / want2, 1e-11, "eq3 ratio closed form");
            }
            check_derivative_consistency(&h, 0.15, 0.6);
        }
        // Delta = 0 case: gamma = (a+b+1)/2 gives h = (x-1)^(-ab/(a+b+1)) up to scale
        let (al, be) = (0.9f64, 0.7);
        let g0 = (al + be + 1.0) / 2.0;
        let p0 = HeunParams::new(2.0, al * be, al, be, g0, 0.0).unwrap();
        let h = build_h_eq3(&p0).unwrap();
        let e = -al * be / (al + be + 1.0);
        let (x1, x2) = (0.3, 0.6);
        let want = pow_pos_base(1.0 - x1, e) / pow_pos_base(1.0 - x2, e);
        assert_close(
            h.h_at(x1).unwrap() / h.h_at(x2).unwrap(),
            want,
            1e-11,
            "Delta=0 closed form",
        );
        // alpha = -beta-1 (k2 = 0, K constant): h = exp(beta(beta+1)(x^2-2x)/(4 gamma))
        let be = 0.7f64;
        let al = -be - 1.0;
        let ga = 0.8f64;
        let p = HeunParams::new(2.0, al * be, al, be, ga, al + be - 2.0 * ga + 1.0).unwrap();
        let h = build_h_eq3(&p).unwrap();
        for x in [0.2, 0.5] {
            let want = (be * (be + 1.0) / (4.0 * ga) * (x * x - 2.0 * x)).exp();
            assert_close(h.h_at(x).unwrap(), want, 1e-12, "exp closed form");
        }
        check_derivative_consistency(&h, 0.15, 0.6);
    }

    #[test]
    fn eq3_negative_delta_branch() {
        let p = HeunParams::new(2.0, 0.3, 1.0, 1.0, 1.0, 1.0).unwrap();
        let d = delta_discriminant(&p);
        assert_eq!(d.classification(), DeltaClass::Negative);
        let h = build_h_eq3(&p).unwrap();
        assert_eq!(h.extra_singularities().len(), 2);
        // residual P h' + Q h = 0
        for x in [0.15, 0.35, 0.55] {
            let r = p.p_at(x) * h.h1_at(x).unwrap() + p.q_at(x) * h.h_at(x).unwrap();
            let scale = (p.p_at(x) * h.h1_at(x).unwrap()).abs() + (p.q_at(x) * h.h_at(x).unwrap()).abs();
            assert!(r.abs() <= 1e-8 * scale, "eq3 residual {r} at {x}");
        }
        check_derivative_consistency(&h, 0.12, 0.55);
    }

    #[test]
    fn eq4_q_zero_cases() {
        // alpha*beta = -2 gives rho = 3 and the polynomial solution (x-a)(x-1)
        let p = HeunParams::new(2.0, 0.0, -1.0, 2.0, 0.8, 0.4).unwrap();
        let h = build_h_eq4(&p, Eq4Solution::Second, true).unwrap();
        for x in [0.3, 3.5] {
            assert_close(h.h_at(x).unwrap(), (x - 2.0) * (x - 1.0), 1e-12, "polynomial h");
            // direct check of h'' + Q h = 0 with exact arithmetic
            let q = p.q_at(x);
            assert_close(2.0 + q * (x - 2.0) * (x - 1.0), 0.0, 1e-12, "h''+Qh");
        }
        // alpha*beta = 0 is degenerate (c = 2s = 0 for the second solution)
        let p0 = HeunParams::new(2.0, 0.0, 0.0, 2.0, 0.8, 0.4).unwrap();
        assert!(build_h_eq4(&p0, Eq4Solution::Second, true).is_err());
        // generic parameters: h'' = -Q h against finite differences, both solutions
        let pg = HeunParams::new(2.0, 0.0, 0.7, 0.2, 0.9, 0.6).unwrap();
        for which in [Eq4Solution::First, Eq4Solution::Second] {
            let h = build_h_eq4(&pg, which, true).unwrap();
            check_derivative_consistency(&h, 0.1, 0.45);
        }
    }

    #[test]
    fn eq4_general_q() {
        let p = HeunParams::new(2.0, 0.3, 0.7, 0.2, 0.9, 0.6).unwrap();
        for which in [Eq4Solution::First, Eq4Solution::Second] {
            let h = build_h_eq4(&p, which, false).unwrap();
            // valid where 1/x is inside the transformed series disk
            check_derivative_consistency(&h, 2.5, 5.5);
        }
        // complex rho refused
        let pc = HeunParams::new(2.0, 0.3, 1.0, 1.0, 0.9, 0.6).unwrap();
        assert!(matches!(
            build_h_eq4(&pc, Eq4Solution::First, false),
            Err(Error::Param(_))
        ));
        // inside the primary disk the transformed argument is out of range
        let h = build_h_eq4(&p, Eq4Solution::First, false).unwrap();
        assert!(h.h_at(0.3).is_err());
    }

    #[test]
    fn conjugate_negq() {
        let p = HeunParams::new(3.0, 0.4, 1.2, 0.8, 0.7, 0.5).unwrap();
        let h = build_h_conjugate(&p, ConjugateKind::NegQ).unwrap();
        let pn = p.with_negated_q();
        assert_close(
            h.h_at(0.3).unwrap(),
            heun_l(&pn, 0.3).unwrap(),
            1e-15,
            "h = H_l(-q)",
        );
        check_derivative_consistency(&h, 0.1, 0.6);
        // q = 0 collapses the conjugate pair: Q - Q̄ = 0
        let p0 = HeunParams::new(3.0, 0.0, 1.2, 0.8, 0.7, 0.5).unwrap();
        let p0n = p0.with_negated_q();
        for x in [0.2, 0.5] {
            assert_close(p0.q_at(x), p0n.q_at(x), 1e-15, "Q = Q̄ at q=0");
        }
    }

    #[test]
    fn conjugate_elliptic_e() {
        let p = HeunParams::new(3.0, 0.3, 0.4, -0.4, 1.0, 0.0).unwrap();
        let h = build_h_conjugate(&p, ConjugateKind::EllipticE).unwrap();
        // h -> E(1) = 1 as x -> 0+
        assert_close(h.h_at(1e-9).unwrap(), 1.0, 1e-8, "h(0+) = 1");
        // derivative at x = 0.6 through the 8.123(4) relation, x' = 0.8
        let (e, k) = (
            ellip_e_complete(0.8).unwrap(),
            ellip_k_complete(0.8).unwrap(),
        );
        let want = (e - k) / 0.8 * (-0.6 / 0.8);
        assert_close(h.h1_at(0.6).unwrap(), want, 1e-13, "chain rule");
        check_derivative_consistency(&h, 0.2, 0.8);
        assert!(h.h_at(1.2).is_err());
        assert!(h.h_at(-0.1).is_err());
    }
}
