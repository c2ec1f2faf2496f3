//! Identities whose verification needs an ODE-propagated solution: the
//! products of Heun-type solutions (Eq4 trial functions) and the complete
//! elliptic entry. Wherever the origin series cannot reach the verification
//! interval, the propagated solution stands in for the named local solution;
//! the master identity holds for any solution of the equation, so the
//! encoded algebra is still fully exercised.

use super::{
    default_interval, get, heun_from, hyp_triple, ppb3, Forms, FreeParam, Identity, Params,
    StatusNote, Variant,
};
use crate::error::{Error, Result};
use crate::lagrange::{delta_discriminant, CoefficientPair};
use crate::specfun::{ellip_e_complete, ellip_k_complete, heun_l_both, HeunParams};
use crate::verifier::ode::propagate_dense;
use std::sync::Arc;

/// Deterministic initial slope in [-0.7, 0.7] from the draw's IC seed.
fn seeded_slope(seed: u64) -> f64 {
    (seed % 1_000_003) as f64 / 1_000_003.0 * 1.4 - 0.7
}

fn derive_heunhh(p: &mut Params) -> Result<()> {
    let alpha = get(p, "alpha")?;
    let pr = get(p, "ab")?;
    p.insert("beta".into(), pr / alpha);
    let hp = heun_from(p)?;
    p.insert("epsilon".into(), hp.epsilon());
    p.insert("rho".into(), (1.0 - 4.0 * pr).sqrt());
    p.insert("omega".into(), 1.0 - pr);
    Ok(())
}

fn interval_heunhh(p: &Params) -> Result<(f64, f64)> {
    let a = get(p, "a")?;
    Ok((1.2 * a, 3.0 * a))
}

/// h = x^(-s)(x-a)·H_l(1/a, qi; s_a, s_b, s_c, 0; 1/x) with literal
/// derivatives (the inner H″ comes from the inner equation, everything else
/// from product and chain rules).
#[allow(clippy::too_many_arguments)]
fn eq4_heun_h(
    a: f64,
    s: f64,
    qi: f64,
    s_a: f64,
    s_b: f64,
    s_c: f64,
) -> Result<Arc<dyn Fn(f64) -> Result<(f64, f64, f64)> + Send + Sync>> {
    let inner = HeunParams::new(1.0 / a, qi, s_a, s_b, s_c, 0.0)
        .map_err(|e| Error::Param(format!("transformed Heun parameters: {e}")))?;
    Ok(Arc::new(move |x: f64| {
        if x <= 0.0 {
            return Err(Error::Domain(format!("x = {x} must be positive")));
        }
        let u = 1.0 / x;
        let (hin, hin1) = heun_l_both(&inner, u)?;
        let hin2 = -inner.p_at(u) * hin1 - inner.q_at(u) * hin;
        let xs = x.powf(-s);
        let a0 = xs * (x - a);
        let a1 = -s * xs / x * (x - a) + xs;
        let a2 = s * (s + 1.0) * xs / (x * x) * (x - a) - 2.0 * s * xs / x;
        let up = -1.0 / (x * x);
        let upp = 2.0 / (x * x * x);
        let h = a0 * hin;
        let h1 = a1 * hin + a0 * hin1 * up;
        let h2 = a2 * hin + 2.0 * a1 * hin1 * up + a0 * (hin2 * up * up + hin1 * upp);
        Ok((h, h1, h2))
    }))
}

/// The (HeunHH) frame on x > a: everything positive-base, y propagated from
/// the left endpoint with a seeded slope.
fn build_heunhh_frame(
    params: &Params,
    iv: (f64, f64),
    seed: u64,
    h3: Arc<dyn Fn(f64) -> Result<(f64, f64, f64)> + Send + Sync>,
) -> Result<(Forms, (f64, f64))> {
    let hp = heun_from(params)?;
    let (ga, de, eps, a) = (hp.gamma(), hp.delta(), hp.epsilon(), hp.a());
    let d = delta_discriminant(&hp);
    let cp = CoefficientPair::heun(&hp);
    let sol = Arc::new(propagate_dense(&cp, iv.0, (1.0, seeded_slope(seed)), iv.1)?);

    let w = move |x: f64| x.powf(ga) * (x - 1.0).powf(de) * (x - a).powf(eps);
    let ss = sol.clone();
    let hh = h3.clone();
    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (y, _) = ss.eval(x)?;
        let (_, h1, _) = hh(x)?;
        Ok(x.powf(ga - 1.0)
            * (x - 1.0).powf(de - 1.0)
            * (x - a).powf(eps - 1.0)
            * d.k_at(x)
            * h1
            * y)
    });
    let ss = sol.clone();
    let hh = h3.clone();
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (y, y1) = ss.eval(x)?;
        let (h, h1, _) = hh(x)?;
        Ok(w(x) * (h1 * y - h * y1))
    });
    let ss = sol;
    let hh = h3;
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (y, y1) = ss.eval(x)?;
        let y2 = -hp.p_at(x) * y1 - hp.q_at(x) * y;
        let (h, h1, h2) = hh(x)?;
        Ok(w(x) * (hp.p_at(x) * (h1 * y - h * y1) + h2 * y - h * y2))
    });
    Ok((
        Forms {
            integrand,
            antiderivative: anti,
            antiderivative_prime: anti_prime,
        },
        iv,
    ))
}

fn heunhh_general(params: &Params, iv: (f64, f64), seed: u64, which: u8, accessory: &str) -> Result<(Forms, (f64, f64))> {
    let a = get(params, "a")?;
    let q = get(params, "q")?;
    let ab = get(params, "ab")?;
    let rho = get(params, "rho")?;
    let om = get(params, "omega")?;
    // the printed parameter sets
    let (s, s_c) = if which == 1 {
        let a1 = 0.5 * (1.0 + rho);
        (a1, 2.0 * (om - ab + rho) / (1.0 + rho))
    } else {
        let a2 = 2.0 * ab / (1.0 + rho);
        (a2, 2.0 * a2)
    };
    let qi = match accessory {
        // printed q1
        "printed-1" => (q - ab) / a + om - rho,
        // corrected q1: the omega - rho sign flipped
        "corrected-1" => (q - ab) / a + om + rho,
        // printed q2, literal (3q - a + 1) grouping
        "printed-2" => {
            (rho * (rho * rho * (q - ab) - ab * (4.0 * a * om + 3.0) + 3.0 * q)
                - 4.0 * (ab * ab * (a - 3.0) + (3.0 * q - a + 1.0)))
                / (a * (1.0 + rho).powi(3))
        }
        // alternative parenthesization 3(q - a + 1)
        "printed-2-paren" => {
            (rho * (rho * rho * (q - ab) - ab * (4.0 * a * om + 3.0) + 3.0 * q)
                - 4.0 * (ab * ab * (a - 3.0) + 3.0 * (q - a + 1.0)))
                / (a * (1.0 + rho).powi(3))
        }
        // corrected q2 = s(s+1) + (q - ab)/a with s = (1-rho)/2
        "corrected-2" => (q - ab) / a + om - rho,
        _ => unreachable!(),
    };
    let h3 = eq4_heun_h(a, s, qi, s, s + 1.0, s_c)?;
    build_heunhh_frame(params, iv, seed, h3)
}

fn build_heunhh1_printed(p: &Params, iv: (f64, f64), seed: u64) -> Result<(Forms, (f64, f64))> {
    heunhh_general(p, iv, seed, 1, "printed-1")
}
fn build_heunhh1_corrected(p: &Params, iv: (f64, f64), seed: u64) -> Result<(Forms, (f64, f64))> {
    heunhh_general(p, iv, seed, 1, "corrected-1")
}
fn build_heunhh2_printed(p: &Params, iv: (f64, f64), seed: u64) -> Result<(Forms, (f64, f64))> {
    heunhh_general(p, iv, seed, 2, "printed-2")
}
fn build_heunhh2_paren(p: &Params, iv: (f64, f64), seed: u64) -> Result<(Forms, (f64, f64))> {
    heunhh_general(p, iv, seed, 2, "printed-2-paren")
}
fn build_heunhh2_corrected(p: &Params, iv: (f64, f64), seed: u64) -> Result<(Forms, (f64, f64))> {
    heunhh_general(p, iv, seed, 2, "corrected-2")
}

const HEUNHH_FREE: &[FreeParam] = &[
    FreeParam::Range("alpha", 0.3, 1.2),
    FreeParam::Range("ab", 0.04, 0.22),
    FreeParam::Range("gamma", 0.2, 2.0),
    FreeParam::Range("delta", 0.2, 2.0),
    FreeParam::Range("q", -1.0, 1.0),
    FreeParam::Choice("a", &[2.0, 3.0]),
];

pub(super) const HEUNHH_1: Identity = Identity {
    id: "ID-HEUNHH-1",
    paper_anchor: "Eq. (HeunHH), i = 1",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "1-4*alpha*beta > 0; x > a so the transformed series converges; y is an ODE-propagated Heun solution",
    free: HEUNHH_FREE,
    derive: derive_heunhh,
    interval: interval_heunhh,
    build: build_heunhh1_printed,
    variants: &[Variant {
        name: "accessory-omega-plus-rho",
        build: build_heunhh1_corrected,
    }],
};

pub(super) const HEUNHH_2: Identity = Identity {
    id: "ID-HEUNHH-2",
    paper_anchor: "Eq. (HeunHH), i = 2",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "as ID-HEUNHH-1; the printed q2 is verified under both readings of the (3q-a+1) grouping plus a corrected accessory",
    free: HEUNHH_FREE,
    derive: derive_heunhh,
    interval: interval_heunhh,
    build: build_heunhh2_printed,
    variants: &[
        Variant {
            name: "paren-3q-grouped",
            build: build_heunhh2_paren,
        },
        Variant {
            name: "accessory-omega-minus-rho",
            build: build_heunhh2_corrected,
        },
    ],
};

// ---------------------------------------------------------------------------
// ID-HEUNHH-Q0-1 / -2
// ---------------------------------------------------------------------------

fn derive_heunhh_q0(p: &mut Params) -> Result<()> {
    let alpha = get(p, "alpha")?;
    let pr = get(p, "ab")?;
    p.insert("beta".into(), pr / alpha);
    p.insert("q".into(), 0.0);
    let hp = heun_from(p)?;
    p.insert("epsilon".into(), hp.epsilon());
    p.insert("rho".into(), (1.0 - 4.0 * pr).sqrt());
    Ok(())
}

fn interval_heunhh_q0(p: &Params) -> Result<(f64, f64)> {
    let a = get(p, "a")?;
    let (lo, hi) = default_interval(a);
    // keep the Pfaff-transformed hypergeometric argument (a-1)/(a-x) below 0.88
    let cap = a - (a - 1.0) / 0.88 - 0.02;
    Ok((lo, hi.min(cap)))
}

/// h = (x-a)·(x-1)^(-s)·₂F₁(fa, fb; fc; (a-1)/(x-1)) with literal
/// derivatives; the fractional (x-1) power is read positive-base on (0,1).
fn q0_h(
    a: f64,
    s: f64,
    fa: f64,
    fb: f64,
    fc: f64,
) -> Arc<dyn Fn(f64) -> Result<(f64, f64, f64)> + Send + Sync> {
    Arc::new(move |x: f64| {
        if (x - 1.0).abs() < 1e-12 {
            return Err(Error::Domain(format!("x = {x} is the singular point 1")));
        }
        let w = (a - 1.0) / (x - 1.0);
        let wp = -(a - 1.0) / ((x - 1.0) * (x - 1.0));
        let wpp = 2.0 * (a - 1.0) / ((x - 1.0) * (x - 1.0) * (x - 1.0));
        let (f, f1, f2) = hyp_triple(fa, fb, fc, w)?;
        let fx1 = f1 * wp;
        let fx2 = f2 * wp * wp + f1 * wpp;
        let (pw, pw1, pw2) = ppb3(x - 1.0, -s);
        let b = x - a;
        let h = b * pw * f;
        let h1 = pw * f + b * (pw1 * f + pw * fx1);
        let h2 = 2.0 * (pw1 * f + pw * fx1) + b * (pw2 * f + 2.0 * pw1 * fx1 + pw * fx2);
        Ok((h, h1, h2))
    })
}

/// The (HeunHH) frame on (0, 1) with q = 0: y is the origin series, the
/// weight is the positive-base form.
fn build_q0_frame(
    params: &Params,
    iv: (f64, f64),
    h3: Arc<dyn Fn(f64) -> Result<(f64, f64, f64)> + Send + Sync>,
) -> Result<(Forms, (f64, f64))> {
    let hp = heun_from(params)?;
    let (ga, de, eps, a) = (hp.gamma(), hp.delta(), hp.epsilon(), hp.a());
    let d = delta_discriminant(&hp);
    let w = move |x: f64| x.powf(ga) * (1.0 - x).powf(de) * (a - x).powf(eps);
    let hh = h3.clone();
    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (y, _) = heun_l_both(&hp, x)?;
        let (_, h1, _) = hh(x)?;
        Ok(x.powf(ga - 1.0)
            * (1.0 - x).powf(de - 1.0)
            * (a - x).powf(eps - 1.0)
            * d.k_at(x)
            * h1
            * y)
    });
    let hh = h3.clone();
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (y, y1) = heun_l_both(&hp, x)?;
        let (h, h1, _) = hh(x)?;
        Ok(w(x) * (h1 * y - h * y1))
    });
    let hh = h3;
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (y, y1) = heun_l_both(&hp, x)?;
        let y2 = -hp.p_at(x) * y1 - hp.q_at(x) * y;
        let (h, h1, h2) = hh(x)?;
        Ok(w(x) * (hp.p_at(x) * (h1 * y - h * y1) + h2 * y - h * y2))
    });
    Ok((
        Forms {
            integrand,
            antiderivative: anti,
            antiderivative_prime: anti_prime,
        },
        iv,
    ))
}

fn build_q0_1(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let a = get(params, "a")?;
    let rho = get(params, "rho")?;
    // printed h1: power b1, F(a1, b1; c1 = 2 b1)
    let a1 = 0.5 * (3.0 - rho);
    let b1 = a1 - 1.0;
    build_q0_frame(params, iv, q0_h(a, b1, a1, b1, 2.0 * b1))
}

fn build_q0_2_printed(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let a = get(params, "a")?;
    let rho = get(params, "rho")?;
    // printed h2: power a1, F(a2, b2; c2 = 2 a1)
    let a1 = 0.5 * (3.0 - rho);
    let a2 = 0.5 * (1.0 + rho);
    let b2 = a2 + 1.0;
    build_q0_frame(params, iv, q0_h(a, a1, a2, b2, 2.0 * a1))
}

fn build_q0_2_corrected(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let a = get(params, "a")?;
    let rho = get(params, "rho")?;
    // corrected h2: power a2, F(a2, b2; 2 a2)
    let a2 = 0.5 * (1.0 + rho);
    let b2 = a2 + 1.0;
    build_q0_frame(params, iv, q0_h(a, a2, a2, b2, 2.0 * a2))
}

const HEUNHH_Q0_FREE: &[FreeParam] = &[
    FreeParam::Range("alpha", 0.3, 1.2),
    FreeParam::Range("ab", 0.04, 0.22),
    FreeParam::Range("gamma", 0.2, 2.0),
    FreeParam::Range("delta", 0.2, 2.0),
    FreeParam::Choice("a", &[2.0, 3.0]),
];

pub(super) const HEUNHH_Q0_1: Identity = Identity {
    id: "ID-HEUNHH-Q0-1",
    paper_anchor: "Eq. (HeunHH) with the q = 0 hypergeometric h_1",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "q = 0; 1-4*alpha*beta > 0; c1 = 1-rho not a nonpositive integer",
    free: HEUNHH_Q0_FREE,
    derive: derive_heunhh_q0,
    interval: interval_heunhh_q0,
    build: build_q0_1,
    variants: &[],
};

pub(super) const HEUNHH_Q0_2: Identity = Identity {
    id: "ID-HEUNHH-Q0-2",
    paper_anchor: "Eq. (HeunHH) with the q = 0 hypergeometric h_2",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "q = 0; printed power (x-1)^(-a1) and c2 = 2a1; corrected variant uses power a2 and c2 = 2a2",
    free: HEUNHH_Q0_FREE,
    derive: derive_heunhh_q0,
    interval: interval_heunhh_q0,
    build: build_q0_2_printed,
    variants: &[Variant {
        name: "power-and-c2-from-a2",
        build: build_q0_2_corrected,
    }],
};

// ---------------------------------------------------------------------------
// ID-HEUNHH-DEGEN
// ---------------------------------------------------------------------------

fn build_degen(params: &Params, iv: (f64, f64), seed: u64) -> Result<(Forms, (f64, f64))> {
    let hp = heun_from(params)?;
    let (ga, de, eps, a) = (hp.gamma(), hp.delta(), hp.epsilon(), hp.a());
    let d = delta_discriminant(&hp);
    // h: any solution of h'' + Q h = 0, propagated across the interval
    let cp = CoefficientPair::heun_q_only(&hp);
    let sol = Arc::new(propagate_dense(&cp, iv.0, (1.0, seeded_slope(seed)), iv.1)?);
    let w = move |x: f64| x.powf(ga) * (1.0 - x).powf(de) * (a - x).powf(eps);
    let ss = sol.clone();
    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (y, _) = heun_l_both(&hp, x)?;
        let (_, h1) = ss.eval(x)?;
        Ok(x.powf(ga - 1.0)
            * (1.0 - x).powf(de - 1.0)
            * (a - x).powf(eps - 1.0)
            * d.k_at(x)
            * h1
            * y)
    });
    let ss = sol.clone();
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (y, y1) = heun_l_both(&hp, x)?;
        let (h, h1) = ss.eval(x)?;
        Ok(w(x) * (h1 * y - h * y1))
    });
    let ss = sol;
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (y, y1) = heun_l_both(&hp, x)?;
        let y2 = -hp.p_at(x) * y1 - hp.q_at(x) * y;
        let (h, h1) = ss.eval(x)?;
        let h2 = -hp.q_at(x) * h; // h solves (4) by construction
        Ok(w(x) * (hp.p_at(x) * (h1 * y - h * y1) + h2 * y - h * y2))
    });
    Ok((
        Forms {
            integrand,
            antiderivative: anti,
            antiderivative_prime: anti_prime,
        },
        iv,
    ))
}

pub(super) const HEUNHH_DEGEN: Identity = Identity {
    id: "ID-HEUNHH-DEGEN",
    paper_anchor: "integral after Eq. (HeunHH): h from the gamma = delta = epsilon = 0, beta = -1-alpha reading of h'' + Q h = 0",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "h is an ODE-propagated solution of h'' + Q h = 0 (the exponent-zero local series does not exist for q != 0)",
    free: &[
        FreeParam::Range("alpha", 0.2, 2.0),
        FreeParam::Range("beta", 0.2, 2.0),
        FreeParam::Range("gamma", 0.2, 2.0),
        FreeParam::Range("delta", 0.2, 2.0),
        FreeParam::Range("q", -1.0, 1.0),
        FreeParam::Choice("a", &[2.0, 3.0, 4.0, 5.0]),
    ],
    derive: |p| {
        let hp = heun_from(p)?;
        p.insert("epsilon".into(), hp.epsilon());
        Ok(())
    },
    interval: |p| Ok(default_interval(get(p, "a")?)),
    build: build_degen,
    variants: &[],
};

// ---------------------------------------------------------------------------
// ID-ELLE
// ---------------------------------------------------------------------------

fn derive_elle(p: &mut Params) -> Result<()> {
    let alpha = get(p, "alpha")?;
    p.insert("beta".into(), -alpha);
    p.insert("gamma".into(), 1.0);
    p.insert("delta".into(), 0.0);
    let hp = heun_from(p)?;
    let eps = hp.epsilon();
    if eps.abs() > 1e-12 {
        return Err(Error::Param(format!("epsilon = {eps} must vanish")));
    }
    p.insert("epsilon".into(), eps);
    Ok(())
}

struct ElleCtx {
    hp: HeunParams,
    alpha: f64,
    a: f64,
    q: f64,
    sol: Arc<crate::verifier::ode::OdeSolution>,
}

impl ElleCtx {
    fn new(params: &Params, iv: (f64, f64), seed: u64) -> Result<Self> {
        let hp = heun_from(params)?;
        let cp = CoefficientPair::heun(&hp);
        let sol = Arc::new(propagate_dense(&cp, iv.0, (1.0, seeded_slope(seed)), iv.1)?);
        Ok(Self {
            hp,
            alpha: hp.alpha(),
            a: hp.a(),
            q: hp.q(),
            sol,
        })
    }

    /// psi-tilde = (1-x)^(-alpha)·y and its first two derivatives.
    fn psi(&self, x: f64) -> Result<(f64, f64, f64)> {
        let (y, y1) = self.sol.eval(x)?;
        let y2 = -self.hp.p_at(x) * y1 - self.hp.q_at(x) * y;
        let al = self.alpha;
        let b = (1.0 - x).powf(-al);
        let psi = b * y;
        let psi1 = al * (1.0 - x).powf(-al - 1.0) * y + b * y1;
        let psi2 = al * (al + 1.0) * (1.0 - x).powf(-al - 2.0) * y
            + 2.0 * al * (1.0 - x).powf(-al - 1.0) * y1
            + b * y2;
        Ok((psi, psi1, psi2))
    }

    fn qq(&self, x: f64) -> f64 {
        (1.0 - self.alpha * self.alpha) * x * x - (self.a + self.q + self.alpha * self.alpha) * x
            - self.q
    }
}

fn build_elle_printed(params: &Params, iv: (f64, f64), seed: u64) -> Result<(Forms, (f64, f64))> {
    let ctx = Arc::new(ElleCtx::new(params, iv, seed)?);
    // printed form: E(x'), K(x') with the complementary modulus x' = sqrt(1-x^2)
    let ek = |x: f64| -> Result<(f64, f64)> {
        let xp = (1.0 - x * x).sqrt();
        Ok((ellip_e_complete(xp)?, ellip_k_complete(xp)?))
    };
    let c = ctx.clone();
    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (psi, _, _) = c.psi(x)?;
        let (e, _) = ek(x)?;
        Ok((1.0 - x).powf(c.alpha - 1.0) * c.qq(x) / ((x + 1.0) * (c.a - x)) * e * psi)
    });
    let c = ctx.clone();
    let bracket = move |x: f64| -> Result<(f64, f64)> {
        let (psi, psi1, psi2) = c.psi(x)?;
        let (e, k) = ek(x)?;
        let u = x * x - 1.0;
        let c1 = ((1.0 - c.alpha) * x - c.alpha) / u;
        let c2 = x / u;
        let b = c1 * e * psi - c2 * k * psi - e * psi1;
        // chain-rule derivatives of E(x'), K(x') in x
        let ex = -x * (e - k) / (1.0 - x * x);
        let kx = -(e - x * x * k) / ((1.0 - x * x) * x);
        let c1p = ((1.0 - c.alpha) * u - ((1.0 - c.alpha) * x - c.alpha) * 2.0 * x) / (u * u);
        let c2p = (-x * x - 1.0) / (u * u);
        let bp = c1p * e * psi + c1 * (ex * psi + e * psi1)
            - c2p * k * psi
            - c2 * (kx * psi + k * psi1)
            - (ex * psi1 + e * psi2);
        Ok((b, bp))
    };
    let c = ctx.clone();
    let br = bracket.clone();
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (b, _) = br(x)?;
        Ok(x * (1.0 - x).powf(c.alpha) * b)
    });
    let c2 = ctx;
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (b, bp) = bracket(x)?;
        let w = x * (1.0 - x).powf(c2.alpha);
        let wp = (1.0 - x).powf(c2.alpha) - c2.alpha * x * (1.0 - x).powf(c2.alpha - 1.0);
        Ok(wp * b + w * bp)
    });
    Ok((
        Forms {
            integrand,
            antiderivative: anti,
            antiderivative_prime: anti_prime,
        },
        iv,
    ))
}

fn build_elle_modulus_x(params: &Params, iv: (f64, f64), seed: u64) -> Result<(Forms, (f64, f64))> {
    let ctx = Arc::new(ElleCtx::new(params, iv, seed)?);
    // corrected reading: h = E(x) solves h'' + h'/x + h/(1-x^2) = 0 directly
    let ek = |x: f64| -> Result<(f64, f64)> { Ok((ellip_e_complete(x)?, ellip_k_complete(x)?)) };
    let c = ctx.clone();
    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (psi, _, _) = c.psi(x)?;
        let (e, _) = ek(x)?;
        Ok((1.0 - x).powf(c.alpha - 1.0) * c.qq(x) / ((x + 1.0) * (c.a - x)) * e * psi)
    });
    let c = ctx.clone();
    let bracket = move |x: f64| -> Result<(f64, f64)> {
        let (psi, psi1, psi2) = c.psi(x)?;
        let (e, k) = ek(x)?;
        let al = c.alpha;
        let b = (e - k) * psi + al * x * e * psi / (1.0 - x) - x * e * psi1;
        let de = (e - k) / x;
        let dk = (e - (1.0 - x * x) * k) / (x * (1.0 - x * x));
        let bp = (de - dk) * psi + (e - k) * psi1
            + al * ((de * x + e) * psi / (1.0 - x)
                + x * e * psi1 / (1.0 - x)
                + x * e * psi / ((1.0 - x) * (1.0 - x)))
            - (e * psi1 + x * (de * psi1 + e * psi2));
        Ok((b, bp))
    };
    let br = bracket.clone();
    let c = ctx.clone();
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (b, _) = br(x)?;
        Ok((1.0 - x).powf(c.alpha) * b)
    });
    let c2 = ctx;
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (b, bp) = bracket(x)?;
        let w = (1.0 - x).powf(c2.alpha);
        let wp = -c2.alpha * (1.0 - x).powf(c2.alpha - 1.0);
        Ok(wp * b + w * bp)
    });
    Ok((
        Forms {
            integrand,
            antiderivative: anti,
            antiderivative_prime: anti_prime,
        },
        iv,
    ))
}

pub(super) const ELLE: Identity = Identity {
    id: "ID-ELLE",
    paper_anchor: "final identity of section 2: products with complete elliptic integrals",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "gamma = 1, delta = epsilon = 0, beta = -alpha; psi is realized through an ODE-propagated y = (x-1)^alpha psi (the printed H_l argument (1-a)/(1-x) is outside every origin-series disk on (0,1))",
    free: &[
        FreeParam::Range("alpha", 0.15, 0.85),
        FreeParam::Range("q", -0.8, 0.8),
        FreeParam::Choice("a", &[2.0, 3.0, 4.0, 5.0]),
    ],
    derive: derive_elle,
    interval: |p| Ok(default_interval(get(p, "a")?)),
    build: build_elle_printed,
    variants: &[Variant {
        name: "modulus-x",
        build: build_elle_modulus_x,
    }],
};
