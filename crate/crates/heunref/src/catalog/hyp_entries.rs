//! Identities in pure hypergeometric variables (the z-forms).

use super::{get, hyp_triple, Forms, FreeParam, Identity, Params, StatusNote, Variant};
use crate::error::{Error, Result};
use crate::specfun::ellip_f_incomplete;
use std::sync::Arc;

fn derive_nothing(_p: &mut Params) -> Result<()> {
    Ok(())
}

fn z_interval(_p: &Params) -> Result<(f64, f64)> {
    Ok((0.08, 0.85))
}

// ---------------------------------------------------------------------------
// ID-LAUT
// ---------------------------------------------------------------------------

fn derive_laut(p: &mut Params) -> Result<()> {
    let a = get(p, "ah")?;
    if a.abs() < 0.03 || (a - 0.25).abs() < 0.03 {
        return Err(Error::Param(format!(
            "constraint a ∉ {{0, 1/4}} violated (a = {a})"
        )));
    }
    Ok(())
}

fn build_laut(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let a = get(params, "ah")?;
    let half = std::f64::consts::FRAC_1_SQRT_2;
    // F(psi(z), 1/sqrt2) with psi = arcsin sqrt(1 - sqrt(1-z)); its derivative
    // comes from the x = 1 - sqrt(1-z) substitution: dF/dz = sqrt2/(4 r(x) sqrt(1-z))
    // with r(x) = sqrt(x(1-x)(2-x))
    let psi_f = move |z: f64| -> Result<(f64, f64)> {
        if !(0.0 < z && z < 1.0) {
            return Err(Error::Domain(format!("z = {z} outside (0,1)")));
        }
        let s = (1.0 - z).sqrt();
        let x = 1.0 - s;
        let f = ellip_f_incomplete(x.sqrt().asin(), half)?;
        let r = (x * (1.0 - x) * (2.0 - x)).sqrt();
        Ok((f, 2.0f64.sqrt() / (4.0 * r * s)))
    };
    let integrand = Arc::new(move |z: f64| -> Result<f64> {
        let (f, _) = psi_f(z)?;
        let (g, _, _) = hyp_triple(a, 0.25 - a, 0.5, z)?;
        Ok(z.powf(-0.5) * (1.0 - z).powf(-0.25) * f * g)
    });
    let lead = 2.0f64.sqrt() / (a * (4.0 * a - 1.0));
    let anti = Arc::new(move |z: f64| -> Result<f64> {
        let (f, _) = psi_f(z)?;
        let (g, _, _) = hyp_triple(a, 0.25 - a, 0.5, z)?;
        let (g2, _, _) = hyp_triple(a + 1.0, 1.25 - a, 1.5, z)?;
        Ok(lead * g + 2.0 * z.sqrt() * (1.0 - z).powf(0.75) * f * g2)
    });
    let anti_prime = Arc::new(move |z: f64| -> Result<f64> {
        let (f, fp) = psi_f(z)?;
        let (_, g1, _) = hyp_triple(a, 0.25 - a, 0.5, z)?;
        let (g2, g21, _) = hyp_triple(a + 1.0, 1.25 - a, 1.5, z)?;
        let u = z.sqrt() * (1.0 - z).powf(0.75);
        let up = 0.5 / z.sqrt() * (1.0 - z).powf(0.75) - 0.75 * z.sqrt() * (1.0 - z).powf(-0.25);
        Ok(lead * g1 + 2.0 * (up * f * g2 + u * fp * g2 + u * f * g21))
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

pub(super) const LAUT: Identity = Identity {
    id: "ID-LAUT",
    paper_anchor: "Eq. (laut)",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "a ∉ {0, 1/4}; psi(z) = arcsin sqrt(1 - sqrt(1-z)); modulus 1/sqrt2",
    free: &[FreeParam::Range("ah", 0.15, 1.3)],
    derive: derive_laut,
    interval: z_interval,
    build: build_laut,
    variants: &[],
};

// ---------------------------------------------------------------------------
// ID-HHH1
// ---------------------------------------------------------------------------

fn derive_hhh1(p: &mut Params) -> Result<()> {
    let a = get(p, "ah")?;
    let b = get(p, "bh")?;
    let c = get(p, "c")?;
    let den = 2.0 * (a + b + a * b) - c + 1.0;
    if den.abs() < 0.05 {
        return Err(Error::Param(format!(
            "rho3 denominator 2(a+b+ab)-c+1 = {den} too close to 0"
        )));
    }
    p.insert("rho1".into(), (1.0 + 2.0 * (a + b + 2.0 * a * b)) / (2.0 * (1.0 - c + 2.0 * (a + b + a * b))));
    p.insert("rho2".into(), (1.0 + 2.0 * (a + b)) / (2.0 * c));
    p.insert("rho3".into(), 2.0 * c / den);
    p.insert("omega".into(), 2.0 * a * b / (1.0 + 2.0 * (a + b)));
    Ok(())
}

fn interval_hhh1(p: &Params) -> Result<(f64, f64)> {
    let rho2 = get(p, "rho2")?;
    let mut hi = 0.85f64;
    if rho2 > 0.0 {
        hi = hi.min(1.0 / rho2 - 0.05);
    }
    if hi < 0.18 {
        return Err(Error::Interval(format!(
            "1/rho2 = {} leaves no room below 0.85",
            1.0 / rho2
        )));
    }
    Ok((0.08, hi))
}

fn build_hhh1(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let a = get(params, "ah")?;
    let b = get(params, "bh")?;
    let c = get(params, "c")?;
    let r1 = get(params, "rho1")?;
    let r2 = get(params, "rho2")?;
    let r3 = get(params, "rho3")?;
    let om = get(params, "omega")?;
    let mu = a + b + 1.0 - c;
    let integrand = Arc::new(move |z: f64| -> Result<f64> {
        let (g, _, _) = hyp_triple(a, b, c, z)?;
        let base = 1.0 - r2 * z;
        if base <= 0.0 {
            return Err(Error::Domain(format!("1 - rho2 z = {base} not positive")));
        }
        Ok(z.powf(c) * (1.0 - z).powf(a + b - c) * (1.0 - r1 * z) * base.powf(-2.0 - om) * g)
    });
    let bracket = move |z: f64| -> Result<(f64, f64, f64)> {
        let (g, g1, _) = hyp_triple(a, b, c, z)?;
        let (g2, g21, _) = hyp_triple(a + 1.0, b + 1.0, c + 1.0, z)?;
        let base = 1.0 - r2 * z;
        if base <= 0.0 {
            return Err(Error::Domain(format!("1 - rho2 z = {base} not positive")));
        }
        let br = g / base - g2;
        let brp = g1 / base + g * r2 / (base * base) - g21;
        Ok((br, brp, base))
    };
    let anti = Arc::new(move |z: f64| -> Result<f64> {
        let (br, _, base) = bracket(z)?;
        Ok(r3 * z.powf(c) * (1.0 - z).powf(mu) * base.powf(-om) * br)
    });
    let anti_prime = Arc::new(move |z: f64| -> Result<f64> {
        let (br, brp, base) = bracket(z)?;
        let w = z.powf(c) * (1.0 - z).powf(mu) * base.powf(-om);
        let wlog = c / z - mu / (1.0 - z) + om * r2 / base;
        Ok(r3 * w * (wlog * br + brp))
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

pub(super) const HHH1: Identity = Identity {
    id: "ID-HHH1",
    paper_anchor: "Eq. (hhh1)",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "a = alpha/2, b = beta/2, c = gamma from the a=2, q=alpha*beta, delta=alpha+beta-2*gamma+1 Heun frame; 1-rho2·z > 0 on the interval",
    free: &[
        FreeParam::Range("ah", 0.1, 1.2),
        FreeParam::Range("bh", 0.1, 1.2),
        FreeParam::Range("c", 0.3, 1.8),
    ],
    derive: derive_hhh1,
    interval: interval_hhh1,
    build: build_hhh1,
    variants: &[],
};

// ---------------------------------------------------------------------------
// ID-HHH1N (known)
// ---------------------------------------------------------------------------

fn derive_hhh1n(p: &mut Params) -> Result<()> {
    let a = get(p, "ah")?;
    let b = get(p, "bh")?;
    p.insert("c".into(), a + b + 0.5);
    p.insert("lambda".into(), 2.0 * (2.0 * a + 2.0 * b + 1.0) / (2.0 * (2.0 * a * b + a + b) + 1.0));
    p.insert("xi".into(), 2.0 * a * b / (2.0 * a + 2.0 * b + 1.0));
    Ok(())
}

fn build_hhh1n(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let a = get(params, "ah")?;
    let b = get(params, "bh")?;
    let c = get(params, "c")?;
    let lam = get(params, "lambda")?;
    let xi = get(params, "xi")?;
    let integrand = Arc::new(move |z: f64| -> Result<f64> {
        let (g, _, _) = hyp_triple(a, b, c, z)?;
        Ok(z.powf(c) * (1.0 - z).powf(-1.5 - xi) * g)
    });
    let bracket = move |z: f64| -> Result<(f64, f64)> {
        let (g, g1, _) = hyp_triple(a, b, c, z)?;
        let (g2, g21, _) = hyp_triple(a + 1.0, b + 1.0, c + 1.0, z)?;
        let s = (1.0 - z).sqrt();
        let br = g / s - s * g2;
        let brp = g1 / s + 0.5 * g / (s * s * s) + 0.5 * g2 / s - s * g21;
        Ok((br, brp))
    };
    let anti = Arc::new(move |z: f64| -> Result<f64> {
        let (br, _) = bracket(z)?;
        Ok(lam * z.powf(c) * (1.0 - z).powf(-xi) * br)
    });
    let anti_prime = Arc::new(move |z: f64| -> Result<f64> {
        let (br, brp) = bracket(z)?;
        let w = z.powf(c) * (1.0 - z).powf(-xi);
        let wlog = c / z + xi / (1.0 - z);
        Ok(lam * w * (wlog * br + brp))
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

pub(super) const HHH1N: Identity = Identity {
    id: "ID-HHH1N",
    paper_anchor: "Eq. (hhh1n)",
    status_note: StatusNote::Known,
    constraints_text: "c = a + b + 1/2 (the Delta = 0, gamma = (alpha+beta+1)/2 branch)",
    free: &[
        FreeParam::Range("ah", 0.1, 1.2),
        FreeParam::Range("bh", 0.1, 1.2),
    ],
    derive: derive_hhh1n,
    interval: z_interval,
    build: build_hhh1n,
    variants: &[],
};

// ---------------------------------------------------------------------------
// ID-HHH1NT
// ---------------------------------------------------------------------------

fn derive_hhh1nt(p: &mut Params) -> Result<()> {
    let b = get(p, "bh")?;
    let c = get(p, "c")?;
    let den = b * (2.0 * b + 1.0) + c;
    if den.abs() < 0.05 {
        return Err(Error::Param(format!(
            "lambda1 denominator b(2b+1)+c = {den} too close to 0"
        )));
    }
    p.insert("lambda1".into(), 2.0 * c / den);
    p.insert("p1".into(), b * (2.0 * b + 1.0) / den);
    p.insert("p2".into(), b * (2.0 * b + 1.0) / (2.0 * c));
    Ok(())
}

fn build_hhh1nt(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    let b = get(params, "bh")?;
    let c = get(params, "c")?;
    let lam1 = get(params, "lambda1")?;
    let p1 = get(params, "p1")?;
    let p2 = get(params, "p2")?;
    let integrand = Arc::new(move |z: f64| -> Result<f64> {
        let (g, _, _) = hyp_triple(-b - 0.5, b, c, z)?;
        Ok(z.powf(c) * (1.0 - z).powf(-c - 0.5) * (1.0 - p1 * z) * (-p2 * z).exp() * g)
    });
    let bracket = move |z: f64| -> Result<(f64, f64)> {
        let (g, g1, _) = hyp_triple(-b - 0.5, b, c, z)?;
        let (g2, g21, _) = hyp_triple(-b + 0.5, b + 1.0, c + 1.0, z)?;
        Ok((g2 - g, g21 - g1))
    };
    let anti = Arc::new(move |z: f64| -> Result<f64> {
        let (br, _) = bracket(z)?;
        Ok(lam1 * z.powf(c) * (1.0 - z).powf(0.5 - c) * (-p2 * z).exp() * br)
    });
    let anti_prime = Arc::new(move |z: f64| -> Result<f64> {
        let (br, brp) = bracket(z)?;
        let w = z.powf(c) * (1.0 - z).powf(0.5 - c) * (-p2 * z).exp();
        let wlog = c / z - (0.5 - c) / (1.0 - z) - p2;
        Ok(lam1 * w * (wlog * br + brp))
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

pub(super) const HHH1NT: Identity = Identity {
    id: "ID-HHH1NT",
    paper_anchor: "Eq. (hhh1nT)",
    status_note: StatusNote::ClaimedNew,
    constraints_text: "b = beta/2, c = gamma from the alpha = -beta-1 branch",
    free: &[
        FreeParam::Range("bh", 0.1, 1.2),
        FreeParam::Range("c", 0.3, 1.8),
    ],
    derive: derive_hhh1nt,
    interval: z_interval,
    build: build_hhh1nt,
    variants: &[],
};

// ---------------------------------------------------------------------------
// ID-PRUDF (known regression) with the three change-of-variable mappings
// as variants
// ---------------------------------------------------------------------------

fn prudf_z_forms(a: f64, b: f64, c: f64) -> Forms {
    let sig = a + b - c;
    let integrand = Arc::new(move |z: f64| -> Result<f64> {
        let (g, _, _) = hyp_triple(a, b, c, z)?;
        Ok(z.powf(c - 1.0) * (1.0 - z).powf(sig) * g)
    });
    let anti = Arc::new(move |z: f64| -> Result<f64> {
        let (g2, _, _) = hyp_triple(a + 1.0, b + 1.0, c + 1.0, z)?;
        Ok(z.powf(c) / c * (1.0 - z).powf(sig + 1.0) * g2)
    });
    let anti_prime = Arc::new(move |z: f64| -> Result<f64> {
        let (g2, g21, _) = hyp_triple(a + 1.0, b + 1.0, c + 1.0, z)?;
        let w = z.powf(c) / c * (1.0 - z).powf(sig + 1.0);
        let wlog = c / z - (sig + 1.0) / (1.0 - z);
        Ok(w * (wlog * g2 + g21))
    });
    Forms {
        integrand,
        antiderivative: anti,
        antiderivative_prime: anti_prime,
    }
}

fn build_prudf(params: &Params, iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    Ok((
        prudf_z_forms(get(params, "ah")?, get(params, "bh")?, get(params, "c")?),
        iv,
    ))
}

/// Rebuilds the z-identity through a substitution z = map(x) on the x-interval.
fn prudf_mapped(
    params: &Params,
    x_iv: (f64, f64),
    map: fn(f64) -> (f64, f64),
) -> Result<(Forms, (f64, f64))> {
    let z = prudf_z_forms(get(params, "ah")?, get(params, "bh")?, get(params, "c")?);
    let (zi, za, zp) = (z.integrand, z.antiderivative, z.antiderivative_prime);
    let integrand = Arc::new(move |x: f64| -> Result<f64> {
        let (zz, dz) = map(x);
        Ok(zi(zz)? * dz)
    });
    let anti = Arc::new(move |x: f64| -> Result<f64> {
        let (zz, _) = map(x);
        za(zz)
    });
    let anti_prime = Arc::new(move |x: f64| -> Result<f64> {
        let (zz, dz) = map(x);
        Ok(zp(zz)? * dz)
    });
    Ok((
        Forms {
            integrand,
            antiderivative: anti,
            antiderivative_prime: anti_prime,
        },
        x_iv,
    ))
}

fn build_prudf_map_h(params: &Params, _iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    // z = h(x) = x(2-x) = 2x - x^2, x = 1 - sqrt(1-z)
    prudf_mapped(params, (0.05, 0.6), |x| (2.0 * x - x * x, 2.0 - 2.0 * x))
}

fn build_prudf_map_f(params: &Params, _iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    // z = f(x) = x(x-3)^2/4, x = 2 + 1/g(z) + g(z), g = cbrt(2 sqrt(z^2-z) + 2z - 1)
    prudf_mapped(params, (0.08, 0.58), |x| {
        (
            x * (x - 3.0) * (x - 3.0) / 4.0,
            0.75 * (1.0 - x) * (3.0 - x),
        )
    })
}

fn build_prudf_map_g(params: &Params, _iv: (f64, f64), _seed: u64) -> Result<(Forms, (f64, f64))> {
    // z = g(x) = -4x(x-1)^2(x-2), x = 1 + sqrt(2 + 2 sqrt(1-z))/2
    prudf_mapped(params, (0.06, 0.16), |x| {
        (
            -4.0 * x * (x - 1.0) * (x - 1.0) * (x - 2.0),
            8.0 * (1.0 - x) * (2.0 * x * x - 4.0 * x + 1.0),
        )
    })
}

pub(super) const PRUDF: Identity = Identity {
    id: "ID-PRUDF",
    paper_anchor: "Eq. (PrudF), reproducing Prudnikov 1.15.3.9",
    status_note: StatusNote::Known,
    constraints_text: "pure hypergeometric variables; the three change-of-variable mappings z = h(x), f(x), g(x) are registered as variants",
    free: &[
        FreeParam::Range("ah", 0.2, 1.6),
        FreeParam::Range("bh", 0.2, 1.6),
        FreeParam::Range("c", 0.3, 2.2),
    ],
    derive: derive_nothing,
    interval: z_interval,
    build: build_prudf,
    variants: &[
        Variant {
            name: "map-h",
            build: build_prudf_map_h,
        },
        Variant {
            name: "map-f",
            build: build_prudf_map_f,
        },
        Variant {
            name: "map-g",
            build: build_prudf_map_g,
        },
    ],
};
