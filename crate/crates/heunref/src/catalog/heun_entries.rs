//! Identities whose integrand contains one local Heun factor.

use super::{
    default_interval, get, heun_from, heun_triple, Forms, FreeParam, Identity, Params, StatusNote,
    Variant,
};
use crate::error::{Error, Result};
use crate::lagrange::weight_pos;
use crate::specfun::{heun_l_both, HeunParams};
use std::sync::Arc;

fn derive_epsilon_only(p: &mut Params) -> Result<()> {
    let hp = heun_from(p)?;
    p.insert("epsilon".into(), hp.epsilon());
    Ok(())
}

fn interval_default(p: &Params) -> Result<(f64, f64)> {
    Ok(default_interval(get(p, "a")?))
}

// ---------------------------------------------------------------------------
// ID-HEUN2-SIN / ID-HEUN2-COS
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Heun2Coeffs {
    a0: f64,
    a1: f64,
    a2: f64,
    b: [f64; 5],
    c0: f64,
    c1: f64,
    c2: f64,
}

fn heun2_coeffs(hp: &HeunParams, m: f64, ell: f64, k: f64) -> Heun2Coeffs {
    let (a, al, be, ga, de) = (hp.a(), hp.alpha(), hp.beta(), hp.gamma(), hp.delta());
    let a2 = al + be + 2.0 * m + 1.0;
    let a0 = a * (ga + 2.0 * m);
    let a1 = a2 + de * (1.0 - a) - a0;
    let b4 = -k * k;
    let b3 = k * k * (a + 1.0);
    let b2 = -a * k * k + al * be + m * (al + be + m);
    let b0 = a * m * (m + ga - 1.0);
    let b1 = m * (de * (1.0 - a) - al - be - m) - b0 - hp.q();
    let c2 = al + be + ell + 2.0 * m;
    let c1 = de + a * (1.0 - ga - de + ell + 2.0 * m) - c2;
    let c0 = a * (ell + ga + 2.0 * m - 1.0);
    Heun2Coeffs {
        a0,
        a1,
        a2,
        b: [b0, b1, b2, b3, b4],
        c0,
        c1,
        c2,
    }
}

fn build_heun2(params: &Params, iv: (f64, f64), sin_branch: bool) -> Result<(Forms, (f64, f64))> {
    let hp = heun_from(params)?;
    let m = get(params, "m")?;
    let ell = get(params, "ell")?;
    let rho = get(params, "rho")?;
    let k = get(params, "k")?;
    let co = heun2_coeffs(&hp, m, ell, k);
    let (a, ga, de, eps) = (hp.a(), hp.gamma(), hp.delta(), hp.epsilon());

    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (h, _, _) = heun_triple(&hp, x)?;
        let xl = x.powf(ell);
        let p1 = k * (co.a0 + co.a1 * x + co.a2 * x * x)
            + 2.0 * k * rho * ell * xl * (x - 1.0) * (x - a);
        let p2 = co.b[0]
            + co.b[1] * x
            + co.b[2] * x * x
            + co.b[3] * x.powi(3)
            + co.b[4] * x.powi(4)
            + rho * ell * xl * ((co.c0 + co.c1 * x + co.c2 * x * x) + rho * ell * xl * (x - 1.0) * (x - a));
        let f = if sin_branch {
            x * p1 * (k * x).cos() + p2 * (k * x).sin()
        } else {
            p2 * (k * x).cos() - x * p1 * (k * x).sin()
        };
        Ok(x.powf(ga + m - 2.0)
            * (1.0 - x).powf(de - 1.0)
            * (a - x).powf(eps - 1.0)
            * (rho * xl).exp()
            * f
            * h)
    });

    // weight and bracket of the antiderivative
    let pieces = move |x: f64| -> Result<(f64, f64, f64, f64, f64, f64, f64)> {
        let (h, h1, h2) = heun_triple(&hp, x)?;
        let xl = x.powf(ell);
        let w = x.powf(ga + m - 1.0) * (1.0 - x).powf(de) * (a - x).powf(eps) * (rho * xl).exp();
        // logarithmic derivative of the weight
        let wlog = (ga + m - 1.0) / x - de / (1.0 - x) - eps / (a - x)
            + rho * ell * xl / x;
        let qq = (m + rho * ell * xl) * h - x * h1;
        let qqp = rho * ell * ell * xl / x * h + (m + rho * ell * xl) * h1 - h1 - x * h2;
        Ok((w, wlog, qq, qqp, h, h1, h2))
    };

    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (w, _, qq, _, h, _, _) = pieces(x)?;
        let b = if sin_branch {
            qq * (k * x).sin() + k * x * (k * x).cos() * h
        } else {
            qq * (k * x).cos() - k * x * (k * x).sin() * h
        };
        Ok(w * b)
    });

    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (w, wlog, qq, qqp, h, h1, _) = pieces(x)?;
        let (s, c) = ((k * x).sin(), (k * x).cos());
        let (b, bp) = if sin_branch {
            (
                qq * s + k * x * c * h,
                qqp * s + qq * k * c + k * c * h - k * k * x * s * h + k * x * c * h1,
            )
        } else {
            (
                qq * c - k * x * s * h,
                qqp * c - qq * k * s - k * s * h - k * k * x * c * h - k * x * s * h1,
            )
        };
        Ok(w * (wlog * b + bp))
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

fn build_heun2_sin(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    build_heun2(params, iv, true)
}
fn build_heun2_cos(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    build_heun2(params, iv, false)
}

const HEUN2_FREE: &[FreeParam] = &[
    FreeParam::Range("alpha", 0.2, 1.6),
    FreeParam::Range("beta", 0.2, 1.6),
    FreeParam::Range("gamma", 0.2, 1.8),
    FreeParam::Range("delta", 0.2, 1.8),
    FreeParam::Choice("a", &[2.0, 3.0, 4.0, 5.0]),
    FreeParam::Range("q", -1.0, 1.0),
    FreeParam::Choice("m", &[0.0, 1.0, 2.0]),
    FreeParam::Choice("ell", &[1.0, 2.0]),
    FreeParam::Range("rho", -1.0, 1.0),
    FreeParam::Range("k", 0.5, 2.0),
];

pub(super) const HEUN2_SIN: Identity = Identity {
    id: "ID-HEUN2-SIN",
    paper_anchor: "Eq. (Heun2), sine branch",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "m, ell nonnegative integers; generic Heun parameters",
    free: HEUN2_FREE,
    derive: derive_epsilon_only,
    interval: interval_default,
    build: build_heun2_sin,
    variants: &[],
};

pub(super) const HEUN2_COS: Identity = Identity {
    id: "ID-HEUN2-COS",
    paper_anchor: "Eq. (Heun2), cosine branch",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "m, ell nonnegative integers; generic Heun parameters",
    free: HEUN2_FREE,
    derive: derive_epsilon_only,
    interval: interval_default,
    build: build_heun2_cos,
    variants: &[],
};

// ---------------------------------------------------------------------------
// ID-F12
// ---------------------------------------------------------------------------

fn build_f12(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let hp = heun_from(params)?;
    let (a, ga, de, eps) = (hp.a(), hp.gamma(), hp.delta(), hp.epsilon());
    let ab = hp.alpha() * hp.beta();
    let q = hp.q();
    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (h, _) = heun_l_both(&hp, x)?;
        Ok(x.powf(ga - 1.0) * (1.0 - x).powf(de - 1.0) * (a - x).powf(eps - 1.0) * (ab * x - q) * h)
    });
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (_, h1) = heun_l_both(&hp, x)?;
        Ok(-weight_pos(&hp, x)? * h1)
    });
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (_, h1, h2) = heun_triple(&hp, x)?;
        let w = weight_pos(&hp, x)?;
        // w' = P w on (0, 1)
        Ok(-(hp.p_at(x) * w * h1 + w * h2))
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

pub(super) const F12: Identity = Identity {
    id: "ID-F12",
    paper_anchor: "Eq. (F12)",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "generic Heun parameters",
    free: &[
        FreeParam::Range("alpha", 0.2, 2.2),
        FreeParam::Range("beta", 0.2, 2.2),
        FreeParam::Range("gamma", 0.2, 2.2),
        FreeParam::Range("delta", 0.2, 2.2),
        FreeParam::Choice("a", &[2.0, 3.0, 4.0, 5.0]),
        FreeParam::Range("q", -1.0, 1.0),
    ],
    derive: derive_epsilon_only,
    interval: interval_default,
    build: build_f12,
    variants: &[],
};

// ---------------------------------------------------------------------------
// ID-HFE
// ---------------------------------------------------------------------------

fn derive_hfe(p: &mut Params) -> Result<()> {
    let alpha = get(p, "alpha")?;
    if alpha.abs() < 0.02 || (alpha - 1.0).abs() < 0.02 {
        return Err(Error::Param(format!(
            "constraint alpha ∉ {{0, 1}} violated (alpha = {alpha})"
        )));
    }
    p.insert("q".into(), alpha * (1.0 - alpha));
    p.insert("beta".into(), 1.0 - alpha);
    p.insert("gamma".into(), 1.0);
    p.insert("delta".into(), 0.0);
    derive_epsilon_only(p)
}

fn build_hfe(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let hp = heun_from(params)?;
    let a = hp.a();
    let al = hp.alpha();
    let scale = al * (1.0 - al);
    let integrand = Arc::new(move |x: f64| heun_l_both(&hp, x).map(|v| v.0));
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (_, h1) = heun_l_both(&hp, x)?;
        Ok(x * (a - x) / scale * h1)
    });
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (_, h1, h2) = heun_triple(&hp, x)?;
        Ok(((a - 2.0 * x) * h1 + x * (a - x) * h2) / scale)
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

pub(super) const HFE: Identity = Identity {
    id: "ID-HFE",
    paper_anchor: "Eq. (HFe)",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "q = alpha(1-alpha), beta = 1-alpha, gamma = epsilon = 1, delta = 0, alpha ∉ {0,1}",
    free: &[
        FreeParam::Range("alpha", 0.15, 0.85),
        FreeParam::Choice("a", &[2.0, 3.0, 4.0, 5.0]),
    ],
    derive: derive_hfe,
    interval: interval_default,
    build: build_hfe,
    variants: &[],
};

// ---------------------------------------------------------------------------
// ID-HN
// ---------------------------------------------------------------------------

fn derive_hn(p: &mut Params) -> Result<()> {
    let alpha = get(p, "alpha")?;
    p.insert("beta".into(), 0.5 - alpha);
    p.insert("gamma".into(), 0.5);
    p.insert("delta".into(), 0.5);
    derive_epsilon_only(p)?;
    let eps = get(p, "epsilon")?;
    if (eps - 0.5).abs() > 1e-12 {
        return Err(Error::Param(format!("epsilon = {eps} must equal 1/2")));
    }
    Ok(())
}

fn build_hn(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let hp = heun_from(params)?;
    let (a, al, q) = (hp.a(), hp.alpha(), hp.q());
    let modulus = 1.0 / a.sqrt();
    let radical = move |x: f64| -> Result<(f64, f64)> {
        let poly = x * (1.0 - x) * (a - x);
        if poly <= 0.0 {
            return Err(Error::Domain(format!("x(1-x)(a-x) = {poly} not positive")));
        }
        let r = poly.sqrt();
        let polyp = 3.0 * x * x - 2.0 * (1.0 + a) * x + a;
        Ok((r, polyp / (2.0 * r)))
    };
    let big_f = move |x: f64| -> Result<f64> {
        crate::specfun::ellip_f_incomplete(x.sqrt().asin(), modulus)
    };
    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (h, _) = heun_l_both(&hp, x)?;
        let (r, _) = radical(x)?;
        Ok((al * (1.0 - 2.0 * al) * x - 2.0 * q) / r * big_f(x)? * h)
    });
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (h, h1) = heun_l_both(&hp, x)?;
        let (r, _) = radical(x)?;
        Ok(a.sqrt() * h - 2.0 * r * big_f(x)? * h1)
    });
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (_, h1, h2) = heun_triple(&hp, x)?;
        let (r, rp) = radical(x)?;
        let f = big_f(x)?;
        let fp = a.sqrt() / (2.0 * r);
        Ok(a.sqrt() * h1 - 2.0 * (rp * f * h1 + r * fp * h1 + r * f * h2))
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

pub(super) const HN: Identity = Identity {
    id: "ID-HN",
    paper_anchor: "Eq. (Hn)",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "gamma = delta = epsilon = 1/2, hence beta = 1/2 - alpha",
    free: &[
        FreeParam::Range("alpha", 0.2, 1.3),
        FreeParam::Range("q", -1.0, 1.0),
        FreeParam::Choice("a", &[2.0, 3.0, 4.0, 5.0]),
    ],
    derive: derive_hn,
    interval: interval_default,
    build: build_hn,
    variants: &[],
};

// ---------------------------------------------------------------------------
// ID-AUF1 / ID-AUF2
// ---------------------------------------------------------------------------

fn derive_auf1(p: &mut Params) -> Result<()> {
    let gamma = get(p, "gamma")?;
    if (gamma - 1.0).abs() < 0.05 {
        return Err(Error::Param(format!(
            "gamma = {gamma} too close to 1 (tau = 1-gamma degenerates)"
        )));
    }
    let tau = 1.0 - gamma;
    p.insert("tau".into(), tau);
    p.insert("delta".into(), 0.0);
    derive_epsilon_only(p)
}

fn derive_auf2(p: &mut Params) -> Result<()> {
    let gamma = get(p, "gamma")?;
    if (gamma - 1.0).abs() < 0.05 {
        return Err(Error::Param(format!(
            "gamma = {gamma} too close to 1 (tau = 1-gamma degenerates)"
        )));
    }
    let tau = 1.0 - gamma;
    let alpha = get(p, "alpha")?;
    let beta = get(p, "beta")?;
    p.insert("tau".into(), tau);
    p.insert("delta".into(), alpha + beta + tau);
    derive_epsilon_only(p)?;
    let eps = get(p, "epsilon")?;
    if eps.abs() > 1e-12 {
        return Err(Error::Param(format!("epsilon = {eps} must vanish")));
    }
    Ok(())
}

/// Shared frame of (auf1)/(auf2): the second hypergeometric's c-argument is
/// the only difference between the printed and corrected auf1 readings.
fn build_auf(
    params: &Params,
    iv: (f64, f64),
    second_c_offset: f64, // c = 2 + second_c_offset*tau
    variant_auf2: bool,
) -> Result<(Forms, (f64, f64))> {
    let hp = heun_from(params)?;
    let tau = get(params, "tau")?;
    let (a, de, eps) = (hp.a(), hp.delta(), hp.epsilon());
    let ab = hp.alpha() * hp.beta();
    let q = hp.q();
    // auf1: first = eps, argument x/a, power base (a-x); auf2: first = delta,
    // argument x, power base (1-x)
    let (first, arg_scale, pow_exp) = if variant_auf2 {
        (de, 1.0, de)
    } else {
        (eps, a, eps)
    };
    let c2 = 2.0 + second_c_offset * tau;
    let hyps = move |x: f64| -> Result<(f64, f64, f64, f64)> {
        let u = x / arg_scale;
        let g = crate::specfun::hyp2f1(first, tau, 1.0 + tau, u)?;
        let gp = crate::specfun::hyp2f1_prime(first, tau, 1.0 + tau, u)? / arg_scale;
        let g2 = crate::specfun::hyp2f1(first + 1.0, 1.0 + tau, c2, u)?;
        let g2p = crate::specfun::hyp2f1_prime(first + 1.0, 1.0 + tau, c2, u)? / arg_scale;
        Ok((g, gp, g2, g2p))
    };
    let base = move |x: f64| if variant_auf2 { 1.0 - x } else { a - x };
    let other = move |x: f64| if variant_auf2 { a - x } else { 1.0 - x };

    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (h, _) = heun_l_both(&hp, x)?;
        let (g, _, _, _) = hyps(x)?;
        Ok(base(x).powf(pow_exp - 1.0) * (ab * x - q) / other(x) * g * h)
    });
    let bracket = move |x: f64| -> Result<(f64, f64)> {
        let (h, h1, h2) = heun_triple(&hp, x)?;
        let (g, gp, g2, g2p) = hyps(x)?;
        let coef = first / (arg_scale * (1.0 + tau));
        let b = tau * (g + coef * x * g2) * h - x * g * h1;
        let bp = tau * ((gp + coef * (g2 + x * g2p)) * h + (g + coef * x * g2) * h1)
            - (g + x * gp) * h1
            - x * g * h2;
        Ok((b, bp))
    };
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (b, _) = bracket(x)?;
        Ok(base(x).powf(pow_exp) * b)
    });
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (b, bp) = bracket(x)?;
        Ok(-pow_exp * base(x).powf(pow_exp - 1.0) * b + base(x).powf(pow_exp) * bp)
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

fn build_auf1_printed(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    // the printed "2+-tau" read literally as 2 - tau
    build_auf(params, iv, -1.0, false)
}
fn build_auf1_corrected(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    build_auf(params, iv, 1.0, false)
}
fn build_auf2(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    build_auf(params, iv, 1.0, true)
}

pub(super) const AUF1: Identity = Identity {
    id: "ID-AUF1",
    paper_anchor: "Eq. (auf1)",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "delta = 0, tau = 1-gamma, epsilon = alpha+beta+tau; printed c-argument \"2+-tau\" read as 2-tau, corrected variant uses 2+tau",
    free: &[
        FreeParam::Range("alpha", 0.2, 1.6),
        FreeParam::Range("beta", 0.2, 1.6),
        FreeParam::Range("gamma", 0.2, 1.8),
        FreeParam::Range("q", -1.0, 1.0),
        FreeParam::Choice("a", &[2.0, 3.0, 4.0, 5.0]),
    ],
    derive: derive_auf1,
    interval: interval_default,
    build: build_auf1_printed,
    variants: &[Variant {
        name: "c-argument-2-plus-tau",
        build: build_auf1_corrected,
    }],
};

pub(super) const AUF2: Identity = Identity {
    id: "ID-AUF2",
    paper_anchor: "Eq. (auf2)",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "epsilon = 0, tau = 1-gamma, delta = alpha+beta+tau",
    free: &[
        FreeParam::Range("alpha", 0.2, 1.6),
        FreeParam::Range("beta", 0.2, 1.6),
        FreeParam::Range("gamma", 0.2, 1.8),
        FreeParam::Range("q", -1.0, 1.0),
        FreeParam::Choice("a", &[2.0, 3.0, 4.0, 5.0]),
    ],
    derive: derive_auf2,
    interval: interval_default,
    build: build_auf2,
    variants: &[],
};

// ---------------------------------------------------------------------------
// ID-HH1
// ---------------------------------------------------------------------------

fn interval_hh1(p: &Params) -> Result<(f64, f64)> {
    let hp = heun_from(p)?;
    let (mut lo, mut hi) = default_interval(hp.a());
    let d = crate::lagrange::delta_discriminant(&hp);
    for root in d.real_roots() {
        if root > lo - 0.05 && root < hi + 0.05 {
            // shrink away from the h-singularity
            if root < 0.5 * (lo + hi) {
                lo = lo.max(root + 0.05);
            } else {
                hi = hi.min(root - 0.05);
            }
        }
    }
    if hi - lo < 0.1 {
        return Err(Error::Interval(format!(
            "interval ({lo}, {hi}) conflicts with the h-singularities"
        )));
    }
    Ok((lo, hi))
}

fn build_hh1(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let hp = heun_from(params)?;
    // literal h, h', h'' from the printed branch formulas; the residual then
    // genuinely tests whether the printed h solves P h' + Q h = 0
    let d = crate::lagrange::delta_discriminant(&hp);
    let ab = hp.alpha() * hp.beta();
    let q = hp.q();
    let class = d.classification();
    let h3: Arc<dyn Fn(f64) -> Result<(f64, f64, f64)> + Send + Sync> = match class {
        crate::lagrange::DeltaClass::Positive => {
            let e = -ab / (2.0 * d.k2);
            let sd = d.delta.sqrt();
            let zeta = (ab * d.k1 + 2.0 * q * d.k2) / (2.0 * d.k2 * sd);
            Arc::new(move |x: f64| {
                let kx = d.k_at(x);
                let kpx = 2.0 * d.k2 * x + d.k1;
                let v = (2.0 * d.k2 * x + d.k1) / (2.0 * sd);
                // log-derivative of h and its derivative
                let l = e * kpx / kx + zeta * (d.k2 / sd) / (1.0 + v * v);
                let lp = e * (2.0 * d.k2 * kx - kpx * kpx) / (kx * kx)
                    + zeta * (d.k2 / sd) * (-2.0 * v * (d.k2 / sd)) / ((1.0 + v * v) * (1.0 + v * v));
                let h = crate::lagrange::pow_pos_base(kx, e) * (zeta * v.atan()).exp();
                Ok((h, l * h, (lp + l * l) * h))
            })
        }
        crate::lagrange::DeltaClass::Negative => {
            let e = -ab / (2.0 * d.k2);
            let sd = (-d.delta).sqrt();
            let eta = (ab * d.k1 + 2.0 * q * d.k2) / (4.0 * d.k2 * sd);
            Arc::new(move |x: f64| {
                let kx = d.k_at(x);
                let kpx = 2.0 * d.k2 * x + d.k1;
                let num = 2.0 * d.k2 * x + d.k1 - 2.0 * sd;
                let den = 2.0 * d.k2 * x + d.k1 + 2.0 * sd;
                if num.abs() < 1e-12 || den.abs() < 1e-12 {
                    return Err(Error::Domain(format!("x = {x} hits a root of K")));
                }
                // log h = e·ln|K| + eta·(ln|num| - ln|den|)
                let l = e * kpx / kx + eta * (2.0 * d.k2 / num - 2.0 * d.k2 / den);
                let lp = e * (2.0 * d.k2 * kx - kpx * kpx) / (kx * kx)
                    + eta
                        * (-4.0 * d.k2 * d.k2 / (num * num) + 4.0 * d.k2 * d.k2 / (den * den));
                let h = crate::lagrange::pow_pos_base(kx, e)
                    * crate::lagrange::pow_pos_base((num / den).abs(), eta);
                Ok((h, l * h, (lp + l * l) * h))
            })
        }
        _ => {
            return Err(Error::Param(format!(
                "HH1 draws require a nondegenerate quadratic K ({class:?})"
            )))
        }
    };

    let hs = h3.clone();
    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (h, _, _) = hs(x)?;
        let (y, _) = heun_l_both(&hp, x)?;
        let p = hp.p_at(x);
        let qx = hp.q_at(x);
        let wqp = qx * hp.p_prime_at(x) - p * hp.q_prime_at(x);
        Ok(weight_pos(&hp, x)? * h * (qx * qx + wqp) / (p * p) * y)
    });
    let hs = h3.clone();
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (h, _, _) = hs(x)?;
        let (y, y1) = heun_l_both(&hp, x)?;
        Ok(-weight_pos(&hp, x)? * h * (hp.q_at(x) / hp.p_at(x) * y + y1))
    });
    let hs = h3;
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (h, h1, _) = hs(x)?;
        let (y, y1, y2) = heun_triple(&hp, x)?;
        let w = weight_pos(&hp, x)?;
        let p = hp.p_at(x);
        let qx = hp.q_at(x);
        let ratio = qx / p;
        let ratio_p = (hp.q_prime_at(x) * p - qx * hp.p_prime_at(x)) / (p * p);
        let b = ratio * y + y1;
        let bp = ratio_p * y + ratio * y1 + y2;
        Ok(-(p * w * h * b + w * h1 * b + w * h * bp))
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

pub(super) const HH1: Identity = Identity {
    id: "ID-HH1",
    paper_anchor: "Eq. (hh1) with h from Eq. (ccc)",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "k2 = alpha+beta+1 nonzero; roots of K outside the interval",
    free: &[
        FreeParam::Range("alpha", 0.2, 1.6),
        FreeParam::Range("beta", 0.2, 1.6),
        FreeParam::Range("gamma", 0.2, 2.0),
        FreeParam::Range("delta", 0.2, 2.0),
        FreeParam::Range("q", -1.0, 1.0),
        FreeParam::Choice("a", &[2.0, 3.0, 4.0, 5.0]),
    ],
    derive: derive_epsilon_only,
    interval: interval_hh1,
    build: build_hh1,
    variants: &[],
};

// ---------------------------------------------------------------------------
// ID-CONJ
// ---------------------------------------------------------------------------

fn derive_conj(p: &mut Params) -> Result<()> {
    let q = get(p, "q")?;
    if q.abs() < 0.05 {
        return Err(Error::Param(format!(
            "conjugate product integral requires q away from 0, got {q}"
        )));
    }
    derive_epsilon_only(p)
}

fn build_conj(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let hp = heun_from(params)?;
    let hn = hp.with_negated_q();
    let (a, ga, de, eps, q) = (hp.a(), hp.gamma(), hp.delta(), hp.epsilon(), hp.q());
    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (hq, _) = heun_l_both(&hp, x)?;
        let (hm, _) = heun_l_both(&hn, x)?;
        Ok(x.powf(ga - 1.0) * (1.0 - x).powf(de - 1.0) * (a - x).powf(eps - 1.0) * hq * hm)
    });
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (hq, hq1) = heun_l_both(&hp, x)?;
        let (hm, hm1) = heun_l_both(&hn, x)?;
        Ok(weight_pos(&hp, x)? / (2.0 * q) * (hm * hq1 - hq * hm1))
    });
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (hq, hq1, hq2) = heun_triple(&hp, x)?;
        let (hm, hm1) = heun_l_both(&hn, x)?;
        let hm2 = -hn.p_at(x) * hm1 - hn.q_at(x) * hm;
        let w = weight_pos(&hp, x)?;
        let wr = hm * hq1 - hq * hm1;
        let wrp = hm * hq2 - hq * hm2;
        Ok((hp.p_at(x) * w * wr + w * wrp) / (2.0 * q))
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

pub(super) const CONJ: Identity = Identity {
    id: "ID-CONJ",
    paper_anchor: "conjugate-pair product integral after Eq. (HeunHH), q != 0",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "q != 0; h = H_l(a, -q; ...) solves the conjugate equation",
    free: &[
        FreeParam::Range("alpha", 0.2, 1.6),
        FreeParam::Range("beta", 0.2, 1.6),
        FreeParam::Range("gamma", 0.2, 2.0),
        FreeParam::Range("delta", 0.2, 2.0),
        FreeParam::Range("q", 0.15, 1.0),
        FreeParam::Choice("a", &[2.0, 3.0, 4.0, 5.0]),
    ],
    derive: derive_conj,
    interval: interval_default,
    build: build_conj,
    variants: &[],
};

