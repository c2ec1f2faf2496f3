//! Verification engine: sampling plans, residual checks, verdicts, reports.

pub mod ode;
pub mod quad;

pub use ode::{ode_oracle, propagate, propagate_dense, OdeSolution, ODE_RTOL};
pub use quad::quad_adaptive;

use crate::catalog::{ConcreteIdentity, Identity};
use crate::error::{Error, Result};
use crate::report::{DrawRecord, FormReport, IdentityReport, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Sweep configuration. `Default` is the plan used by the CLI.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePlan {
    pub n_param_draws: usize,
    pub rng_seed: u64,
    pub tol_residual: f64,
    pub tol_quad: f64,
    pub refute_factor: f64,
    pub points_per_interval: usize,
}

impl Default for SamplePlan {
    fn default() -> Self {
        Self {
            n_param_draws: 8,
            rng_seed: 42,
            tol_residual: 1e-8,
            tol_quad: 1e-8,
            refute_factor: 1e3,
            points_per_interval: 50,
        }
    }
}

impl SamplePlan {
    pub fn validate(&self) -> Result<()> {
        if self.n_param_draws == 0 {
            return Err(Error::Config("n_param_draws must be positive".into()));
        }
        if self.tol_residual <= 0.0 || self.tol_quad <= 0.0 {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.refute_factor <= 1.0 {
            return Err(Error::Config("refute_factor must exceed 1".into()));
        }
        if self.points_per_interval == 0 {
            return Err(Error::Config("points_per_interval must be positive".into()));
        }
        Ok(())
    }
}

/// FNV-1a hash, used to derive per-identity RNG streams deterministically.
fn fnv1a(s: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn draw_rng(plan: &SamplePlan, id: &str, draw: usize) -> ChaCha8Rng {
    let seed = plan
        .rng_seed
        .wrapping_mul(0x9e3779b97f4a7c15)
        .wrapping_add(fnv1a(id))
        .wrapping_add((draw as u64).wrapping_mul(0x517cc1b727220a95));
    ChaCha8Rng::seed_from_u64(seed)
}

/// |d/dx antiderivative - integrand| / (1 + |integrand|), derivatives exact.
pub fn residual_derivative(ci: &ConcreteIdentity, x: f64) -> Result<f64> {
    let lhs = ci.integrand_at(x)?;
    let dprime = ci.antiderivative_prime_at(x)?;
    Ok((dprime - lhs).abs() / (1.0 + lhs.abs()))
}

fn draw_verdict(plan: &SamplePlan, max_residual: f64, quad_mismatch: f64) -> Verdict {
    let refute = max_residual > plan.refute_factor * plan.tol_residual
        || quad_mismatch > plan.refute_factor * plan.tol_quad;
    if refute {
        Verdict::Refuted
    } else if max_residual <= plan.tol_residual && quad_mismatch <= plan.tol_quad {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive
    }
}

fn aggregate(draws: &[DrawRecord]) -> Verdict {
    if draws.is_empty() {
        return Verdict::Inconclusive;
    }
    let refuted = draws.iter().filter(|d| d.verdict == Verdict::Refuted).count();
    if refuted as f64 >= 0.8 * draws.len() as f64 && refuted > 0 {
        return Verdict::Refuted;
    }
    if draws.iter().all(|d| d.verdict == Verdict::Confirmed) {
        return Verdict::Confirmed;
    }
    Verdict::Inconclusive
}

/// Verifies one concrete instantiation over its interval.
fn check_concrete(ci: &ConcreteIdentity, plan: &SamplePlan, fault_eps: Option<f64>) -> (f64, f64) {
    let (lo, hi) = ci.interval();
    let n = plan.points_per_interval;
    let mut max_res = 0.0f64;
    let fault = fault_eps.unwrap_or(0.0);
    for j in 0..n {
        let x = lo + (hi - lo) * (j as f64 + 0.5) / n as f64;
        let r = match (ci.integrand_at(x), ci.antiderivative_prime_at(x)) {
            (Ok(lhs), Ok(dp)) => ((dp + fault) - lhs).abs() / (1.0 + lhs.abs()),
            _ => f64::NAN,
        };
        if r.is_nan() {
            return (f64::NAN, f64::NAN);
        }
        max_res = max_res.max(r);
    }
    // confirmatory quadrature check over the whole interval
    let integrand = |x: f64| ci.integrand_at(x);
    let quad = quad_adaptive(&integrand, lo, hi, plan.tol_quad * 0.02);
    let anti = (ci.antiderivative_at(hi), ci.antiderivative_at(lo));
    let mismatch = match (quad, anti) {
        (Ok((v, _)), (Ok(ahi), Ok(alo))) => {
            let delta = (ahi + fault * hi) - (alo + fault * lo);
            (v - delta).abs() / (1.0 + v.abs())
        }
        _ => f64::NAN,
    };
    (max_res, mismatch)
}

fn run_draw(
    entry: &Identity,
    variant: Option<&str>,
    plan: &SamplePlan,
    draw: usize,
    fault_eps: Option<f64>,
) -> DrawRecord {
    let mut rng = draw_rng(plan, entry.id, draw);
    const ATTEMPTS: usize = 80;
    for _ in 0..ATTEMPTS {
        let params = entry.draw_params(&mut rng);
        let ic_seed = rng.gen::<u64>();
        match entry.instantiate_with(&params, variant, ic_seed) {
            Ok(ci) => {
                let (max_residual, quad_mismatch) = check_concrete(&ci, plan, fault_eps);
                let verdict = if max_residual.is_nan() || quad_mismatch.is_nan() {
                    Verdict::Inconclusive
                } else {
                    draw_verdict(plan, max_residual, quad_mismatch)
                };
                return DrawRecord {
                    params,
                    interval: [ci.interval().0, ci.interval().1],
                    max_residual,
                    quad_mismatch,
                    verdict,
                    excluded: false,
                };
            }
            Err(_) => continue,
        }
    }
    DrawRecord {
        params: Default::default(),
        interval: [f64::NAN, f64::NAN],
        max_residual: f64::NAN,
        quad_mismatch: f64::NAN,
        verdict: Verdict::Inconclusive,
        excluded: true,
    }
}

/// Runs the sweep for one identity (main form plus all registered variants,
/// on the same parameter draws) and assembles its report.
pub fn verify_with_fault(
    entry: &Identity,
    plan: &SamplePlan,
    fault_eps: Option<f64>,
) -> Result<IdentityReport> {
    plan.validate().map_err(|e| e)?;
    let draws: Vec<usize> = (0..plan.n_param_draws).collect();
    let main: Vec<DrawRecord> = draws
        .par_iter()
        .map(|i| run_draw(entry, None, plan, *i, fault_eps))
        .collect();
    if main.iter().all(|d| d.excluded) {
        return Err(Error::EmptyPlan(format!(
            "every draw for {} was excluded by the entry's parameter predicates",
            entry.id
        )));
    }
    let active: Vec<DrawRecord> = main.iter().filter(|d| !d.excluded).cloned().collect();
    let verdict = aggregate(&active);
    let mut variants = Vec::new();
    for v in entry.variant_names() {
        let recs: Vec<DrawRecord> = draws
            .par_iter()
            .map(|i| run_draw(entry, Some(v), plan, *i, fault_eps))
            .collect();
        let act: Vec<DrawRecord> = recs.iter().filter(|d| !d.excluded).cloned().collect();
        variants.push(FormReport {
            name: v.to_string(),
            verdict: aggregate(&act),
            draws: recs,
        });
    }
    let confirmed_variant = if verdict != Verdict::Confirmed {
        variants
            .iter()
            .find(|f| f.verdict == Verdict::Confirmed)
            .map(|f| f.name.clone())
    } else {
        None
    };
    let effective_verdict = if verdict == Verdict::Confirmed || confirmed_variant.is_some() {
        Verdict::Confirmed
    } else {
        verdict
    };
    Ok(IdentityReport {
        identity: entry.id.to_string(),
        anchor: entry.paper_anchor.to_string(),
        status_note: entry.status_note.as_str().to_string(),
        verdict,
        effective_verdict,
        confirmed_variant,
        draws: main,
        variants,
    })
}

/// Runs the sweep for one identity with no fault injection.
pub fn verify(entry: &Identity, plan: &SamplePlan) -> Result<IdentityReport> {
    verify_with_fault(entry, plan, None)
}
