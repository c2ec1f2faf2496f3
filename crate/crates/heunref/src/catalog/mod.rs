//! Hand-encoded records of the integral identities under test.
//!
//! Every record stores both sides as printed (suspected typos included) in
//! the positive-base real form used on its verification interval, plus the
//! closed-form derivative of the claimed antiderivative. Candidate
//! corrections are registered as named variants and verified side by side;
//! the tool never silently repairs a formula.

mod heun_entries;
mod hyp_entries;
mod product_entries;

use crate::error::{Error, Result};
use crate::lagrange::RealFnArc;
use crate::specfun::{heun_l_both, heun_l_prime, hyp2f1, HeunParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// A (possibly partial) parameter assignment by name.
pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatusNote {
    Known,
    ClaimedNew,
}

impl StatusNote {
    pub fn as_str(&self) -> &'static str {
        match self {
            StatusNote::Known => "KNOWN",
            StatusNote::ClaimedNew => "CLAIMED_NEW",
        }
    }
}

/// Sampling specification of one free parameter.
#[derive(Debug, Clone, Copy)]
pub enum FreeParam {
    Range(&'static str, f64, f64),
    Choice(&'static str, &'static [f64]),
}

/// The two callables of a concrete identity plus the exact derivative of the
/// antiderivative (series derivatives, method relations and chain rules; no
/// numerical differentiation).
pub struct Forms {
    pub integrand: RealFnArc,
    pub antiderivative: RealFnArc,
    pub antiderivative_prime: RealFnArc,
}

pub(crate) type BuildFn = fn(&Params, (f64, f64), u64) -> Result<(Forms, (f64, f64))>;

/// A registered alternative reading of an entry.
pub struct Variant {
    pub name: &'static str,
    pub(crate) build: BuildFn,
}

/// One catalog record.
pub struct Identity {
    pub id: &'static str,
    pub paper_anchor: &'static str,
    pub status_note: StatusNote,
    pub constraints_text: &'static str,
    pub(crate) free: &'static [FreeParam],
    /// Fills derived parameters and validates all constraints.
    pub(crate) derive: fn(&mut Params) -> Result<()>,
    /// Default verification interval for the (derived) parameters.
    pub(crate) interval: fn(&Params) -> Result<(f64, f64)>,
    pub(crate) build: BuildFn,
    pub(crate) variants: &'static [Variant],
}

/// A validated, evaluable instantiation of an identity.
pub struct ConcreteIdentity {
    pub id: String,
    pub variant: Option<String>,
    params: Params,
    interval: (f64, f64),
    forms: Forms,
}

impl ConcreteIdentity {
    pub fn integrand_at(&self, x: f64) -> Result<f64> {
        (self.forms.integrand)(x)
    }
    pub fn antiderivative_at(&self, x: f64) -> Result<f64> {
        (self.forms.antiderivative)(x)
    }
    pub fn antiderivative_prime_at(&self, x: f64) -> Result<f64> {
        (self.forms.antiderivative_prime)(x)
    }
    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }
    /// Full parameter assignment, derived values included.
    pub fn params(&self) -> &Params {
        &self.params
    }
}

impl Identity {
    pub fn variant_names(&self) -> Vec<&'static str> {
        self.variants.iter().map(|v| v.name).collect()
    }

    /// Draws the free parameters (derived ones are filled by `derive`).
    pub fn draw_params(&self, rng: &mut ChaCha8Rng) -> Params {
        let mut p = Params::new();
        for f in self.free {
            match f {
                FreeParam::Range(name, lo, hi) => {
                    p.insert(name.to_string(), rng.gen_range(*lo..*hi));
                }
                FreeParam::Choice(name, choices) => {
                    let i = rng.gen_range(0..choices.len());
                    p.insert(name.to_string(), choices[i]);
                }
            }
        }
        p
    }

    /// Validates, derives, and builds the requested form.
    pub fn instantiate_with(
        &self,
        params: &Params,
        variant: Option<&str>,
        ic_seed: u64,
    ) -> Result<ConcreteIdentity> {
        let mut full = params.clone();
        (self.derive)(&mut full)?;
        let default_iv = (self.interval)(&full)?;
        if default_iv.1 - default_iv.0 < 0.1 {
            return Err(Error::Interval(format!(
                "default interval ({}, {}) for {} is too narrow",
                default_iv.0, default_iv.1, self.id
            )));
        }
        let build = match variant {
            None => self.build,
            Some(name) => {
                self.variants
                    .iter()
                    .find(|v| v.name == name)
                    .ok_or_else(|| {
                        Error::Config(format!("unknown variant '{name}' of {}", self.id))
                    })?
                    .build
            }
        };
        let (forms, interval) = build(&full, default_iv, ic_seed)?;
        Ok(ConcreteIdentity {
            id: self.id.to_string(),
            variant: variant.map(|s| s.to_string()),
            params: full,
            interval,
        forms,
        })
    }
}

/// The full catalog, one record per identity in the source.
pub fn catalog() -> &'static [Identity] {
    &ENTRIES
}

/// Finds one entry by exact id.
pub fn find(id: &str) -> Option<&'static Identity> {
    ENTRIES.iter().find(|e| e.id == id)
}

/// Instantiates an entry's printed form from an explicit assignment of its
/// free parameters; constrained parameters are auto-derived.
pub fn instantiate(id: &str, params: &Params) -> Result<ConcreteIdentity> {
    let entry =
        find(id).ok_or_else(|| Error::Config(format!("no catalog entry with id '{id}'")))?;
    entry.instantiate_with(params, None, 0)
}

static ENTRIES: [Identity; 20] = [
    heun_entries::HEUN2_SIN,
    heun_entries::HEUN2_COS,
    heun_entries::F12,
    heun_entries::HFE,
    heun_entries::HN,
    hyp_entries::LAUT,
    heun_entries::AUF1,
    heun_entries::AUF2,
    heun_entries::HH1,
    hyp_entries::HHH1,
    hyp_entries::HHH1N,
    hyp_entries::HHH1NT,
    product_entries::HEUNHH_1,
    product_entries::HEUNHH_2,
    product_entries::HEUNHH_Q0_1,
    product_entries::HEUNHH_Q0_2,
    product_entries::HEUNHH_DEGEN,
    heun_entries::CONJ,
    product_entries::ELLE,
    hyp_entries::PRUDF,
];

// ---------------------------------------------------------------------------
// shared helpers for entry builders
// ---------------------------------------------------------------------------

pub(crate) fn get(p: &Params, key: &str) -> Result<f64> {
    p.get(key)
        .copied()
        .ok_or_else(|| Error::Param(format!("missing parameter '{key}'")))
}

pub(crate) fn heun_from(p: &Params) -> Result<HeunParams> {
    HeunParams::new(
        get(p, "a")?,
        get(p, "q")?,
        get(p, "alpha")?,
        get(p, "beta")?,
        get(p, "gamma")?,
        get(p, "delta")?,
    )
}

/// Uniform default interval policy: (0.08, 0.9·min(1, a) - 0.05).
pub(crate) fn default_interval(a: f64) -> (f64, f64) {
    (0.08, 0.9 * a.min(1.0) - 0.05)
}

/// (H, H′, H″) of the local Heun function, H″ from the defining equation.
pub(crate) fn heun_triple(p: &HeunParams, x: f64) -> Result<(f64, f64, f64)> {
    let (h, hp) = heun_l_both(p, x)?;
    Ok((h, hp, -p.p_at(x) * hp - p.q_at(x) * h))
}

/// Positive-base power with value, first and second derivative in the base.
pub(crate) fn ppb3(base: f64, e: f64) -> (f64, f64, f64) {
    use crate::lagrange::pow_pos_base;
    let v = pow_pos_base(base, e);
    let s = if crate::specfun::near_integer(e, 1e-9) {
        1.0
    } else {
        base.signum()
    };
    (
        v,
        e * pow_pos_base(base, e - 1.0) * s,
        e * (e - 1.0) * pow_pos_base(base, e - 2.0),
    )
}

/// ₂F₁ with its first and second z-derivatives via contiguous shifts.
pub(crate) fn hyp_triple(a: f64, b: f64, c: f64, z: f64) -> Result<(f64, f64, f64)> {
    let f = hyp2f1(a, b, c, z)?;
    let f1 = a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z)?;
    let f2 = a * b / c * ((a + 1.0) * (b + 1.0) / (c + 1.0))
        * hyp2f1(a + 2.0, b + 2.0, c + 2.0, z)?;
    Ok((f, f1, f2))
}

// ---------------------------------------------------------------------------
// reductions to the Gauss hypergeometric function
// ---------------------------------------------------------------------------

/// The three parameter specializations that collapse H_l to ₂F₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionCase {
    L1,
    L2,
    L3,
}

/// Heun parameters of a reduction case from (α, β) and, for L1, γ.
pub fn reduction_params(case: ReductionCase, alpha: f64, beta: f64, gamma: f64) -> Result<HeunParams> {
    match case {
        ReductionCase::L1 => HeunParams::new(
            2.0,
            alpha * beta,
            alpha,
            beta,
            gamma,
            alpha + beta - 2.0 * gamma + 1.0,
        ),
        ReductionCase::L2 => HeunParams::new(
            4.0,
            alpha * beta,
            alpha,
            beta,
            0.5,
            2.0 / 3.0 * (alpha + beta),
        ),
        ReductionCase::L3 => HeunParams::new(
            2.0,
            alpha * beta,
            alpha,
            beta,
            (alpha + beta + 2.0) / 4.0,
            (alpha + beta) / 2.0,
        ),
    }
}

fn mapped_argument(case: ReductionCase, x: f64) -> f64 {
    match case {
        ReductionCase::L1 => x * (2.0 - x),
        ReductionCase::L2 => x * (x - 3.0) * (x - 3.0) / 4.0,
        ReductionCase::L3 => -4.0 * x * (x - 1.0) * (x - 1.0) * (x - 2.0),
    }
}

fn check_reduction_params(case: ReductionCase, p: &HeunParams) -> Result<()> {
    let want = reduction_params(case, p.alpha(), p.beta(), p.gamma())?;
    let ok = (p.a() - want.a()).abs() < 1e-9
        && (p.q() - want.q()).abs() < 1e-9
        && (p.gamma() - want.gamma()).abs() < 1e-9
        && (p.delta() - want.delta()).abs() < 1e-9;
    if !ok {
        return Err(Error::Param(format!(
            "parameters do not match the {case:?} specialization"
        )));
    }
    Ok(())
}

/// Both sides of the reduction: (H_l(x), ₂F₁ at the mapped argument).
pub fn reduce_to_2f1(case: ReductionCase, p: &HeunParams, x: f64) -> Result<(f64, f64)> {
    check_reduction_params(case, p)?;
    let z = mapped_argument(case, x);
    let lhs = crate::specfun::heun_l(p, x)?;
    let rhs = match case {
        ReductionCase::L1 => hyp2f1(p.alpha() / 2.0, p.beta() / 2.0, p.gamma(), z)?,
        ReductionCase::L2 => hyp2f1(p.alpha() / 3.0, p.beta() / 3.0, 0.5, z)?,
        ReductionCase::L3 => hyp2f1(
            p.alpha() / 4.0,
            p.beta() / 4.0,
            (p.alpha() + p.beta() + 2.0) / 4.0,
            z,
        )?,
    };
    Ok((lhs, rhs))
}

/// Derivative reductions: (H′_l(x), prefactor(x)·₂F₁(shifted; mapped arg)).
/// The prefactors are t, s and r with κ = 2αβ/(α+β+2).
pub fn reduce_prime_to_2f1(case: ReductionCase, p: &HeunParams, x: f64) -> Result<(f64, f64)> {
    check_reduction_params(case, p)?;
    let z = mapped_argument(case, x);
    let (al, be) = (p.alpha(), p.beta());
    let lhs = heun_l_prime(p, x)?;
    let rhs = match case {
        ReductionCase::L1 => {
            let t = al * be * (1.0 - x) / (2.0 * p.gamma());
            t * hyp2f1(al / 2.0 + 1.0, be / 2.0 + 1.0, p.gamma() + 1.0, z)?
        }
        ReductionCase::L2 => {
            let s = al * be * (1.0 - x) * (3.0 - x) / 6.0;
            s * hyp2f1(al / 3.0 + 1.0, be / 3.0 + 1.0, 1.5, z)?
        }
        ReductionCase::L3 => {
            let kappa = 2.0 * al * be / (al + be + 2.0);
            let r = kappa * (1.0 - x) * (2.0 * x * x - 4.0 * x + 1.0);
            r * hyp2f1(al / 4.0 + 1.0, be / 4.0 + 1.0, (al + be + 6.0) / 4.0, z)?
        }
    };
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rel(got: f64, want: f64, tol: f64, msg: &str) {
        assert!(
            (got - want).abs() <= tol * (1.0 + want.abs()),
            "{msg}: got {got}, want {want}"
        );
    }

    #[test]
    fn catalog_shape() {
        let cat = catalog();
        assert!(cat.len() >= 18, "catalog has {} entries", cat.len());
        for e in cat {
            assert!(!e.paper_anchor.is_empty(), "{} anchor", e.id);
        }
        assert_eq!(find("ID-LAUT").unwrap().status_note, StatusNote::ClaimedNew);
        assert_eq!(find("ID-PRUDF").unwrap().status_note, StatusNote::Known);
        assert_eq!(find("ID-HHH1N").unwrap().status_note, StatusNote::Known);
        // ids are unique
        let mut ids: Vec<_> = cat.iter().map(|e| e.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), cat.len());
    }

    #[test]
    fn instantiate_hfe_examples() {
        let mut p = Params::new();
        p.insert("alpha".into(), 1.0 / 3.0);
        p.insert("a".into(), 2.0);
        let ci = instantiate("ID-HFE", &p).unwrap();
        assert_rel(ci.params()["q"], 2.0 / 9.0, 1e-15, "auto-derived q");
        let mut bad = Params::new();
        bad.insert("alpha".into(), 1.0);
        bad.insert("a".into(), 2.0);
        match instantiate("ID-HFE", &bad) {
            Err(Error::Param(msg)) => assert!(msg.contains("alpha"), "message: {msg}"),
            Err(other) => panic!("expected Param error, got {other:?}"),
            Ok(_) => panic!("expected Param error, got a concrete identity"),
        }
    }

    #[test]
    fn instantiate_hn_autoderive() {
        let mut p = Params::new();
        p.insert("alpha".into(), 0.2);
        p.insert("a".into(), 3.0);
        p.insert("q".into(), 0.1);
        let ci = instantiate("ID-HN", &p).unwrap();
        assert_rel(ci.params()["beta"], 0.3, 1e-15, "beta = 1/2 - alpha");
    }

    #[test]
    fn reductions_match_examples() {
        // L1 at x = 0: both sides 1
        let p = reduction_params(ReductionCase::L1, 1.1, 0.7, 0.8).unwrap();
        let (l, r) = reduce_to_2f1(ReductionCase::L1, &p, 0.0).unwrap();
        assert_eq!(l, 1.0);
        assert_eq!(r, 1.0);
        // L2 mapped argument at x = 0.1
        assert_rel(mapped_argument(ReductionCase::L2, 0.1), 0.21025, 1e-12, "f(0.1)");
        // L3 mapped argument at x = 0.1
        assert_rel(mapped_argument(ReductionCase::L3, 0.1), 0.6156, 1e-12, "g(0.1)");
        // wrong parameters rejected
        let bad = HeunParams::new(3.0, 0.77, 1.1, 0.7, 0.8, 0.5).unwrap();
        assert!(reduce_to_2f1(ReductionCase::L1, &bad, 0.1).is_err());
    }

    #[test]
    fn reduction_sides_agree() {
        for case in [ReductionCase::L1, ReductionCase::L2, ReductionCase::L3] {
            let p = reduction_params(case, 1.1, 0.7, 0.8).unwrap();
            let hi = if case == ReductionCase::L3 { 0.17 } else { 0.39 };
            for i in 0..8 {
                let x = 0.02 + hi * i as f64 / 8.0;
                let (l, r) = reduce_to_2f1(case, &p, x).unwrap();
                assert_rel(l, r, 1e-10, &format!("{case:?} at {x}"));
                let (lp, rp) = reduce_prime_to_2f1(case, &p, x).unwrap();
                assert_rel(lp, rp, 1e-9, &format!("{case:?} prime at {x}"));
            }
        }
    }
}
