//! Local Heun function at the origin via its Frobenius series.
//!
//! The Heun equation in self-adjoint-free form is
//!
//! ```text
//! x(x-1)(x-a) y″ + [γ(x-1)(x-a) + δx(x-a) + εx(x-1)] y′ + (αβx - q) y = 0
//! ```
//!
//! with ε = α+β+1-γ-δ. Substituting y = Σ c_k x^k gives the three-term
//! recurrence
//!
//! ```text
//! a(n+1)(n+γ) c_{n+1} = { n[(n-1+γ)(1+a) + aδ + ε] + q } c_n
//!                       - (n-1+α)(n-1+β) c_{n-1}
//! ```
//!
//! with c_0 = 1, c_1 = q/(aγ). The series converges for |x| < min(1, |a|);
//! evaluation refuses |x| > 0.9·min(1, |a|).

use super::{near_nonpositive_integer, KahanSum};
use crate::error::{Error, Result};

/// Relative term size below which the series is considered converged.
const SERIES_EPS: f64 = 1e-17;
/// Consecutive small terms required before stopping.
const SERIES_RUN: usize = 3;
/// Hard cap on the series order.
const SERIES_MAX: usize = 10_000;
/// Fraction of the convergence radius accepted for evaluation.
const DISK_SAFETY: f64 = 0.9;

/// Parameters (a, q; α, β, γ, δ) of the Heun equation, with ε derived from
/// the Fuchsian condition ε = α+β+1-γ-δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunParams {
    a: f64,
    q: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
}

impl HeunParams {
    /// Validates a ∉ {0, 1} and γ not zero or a negative integer.
    pub fn new(a: f64, q: f64, alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        if !a.is_finite() || a.abs() < 1e-12 || (a - 1.0).abs() < 1e-12 {
            return Err(Error::Param(format!(
                "singularity location a = {a} must be a real number outside {{0, 1}}"
            )));
        }
        if near_nonpositive_integer(gamma, 1e-9) {
            return Err(Error::Param(format!(
                "gamma = {gamma} is zero or a negative integer; the origin series is undefined"
            )));
        }
        for (name, v) in [
            ("q", q),
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("delta", delta),
        ] {
            if !v.is_finite() {
                return Err(Error::Param(format!("{name} = {v} is not finite")));
            }
        }
        Ok(Self {
            a,
            q,
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// ε = α+β+1-γ-δ (Fuchsian condition).
    pub fn epsilon(&self) -> f64 {
        self.alpha + self.beta + 1.0 - self.gamma - self.delta
    }

    /// Convergence radius of the origin series, min(1, |a|).
    pub fn radius(&self) -> f64 {
        1.0f64.min(self.a.abs())
    }

    /// Largest |x| accepted for series evaluation.
    pub fn eval_limit(&self) -> f64 {
        DISK_SAFETY * self.radius()
    }

    /// Same parameters with the accessory parameter negated (conjugate
    /// equation).
    pub fn with_negated_q(&self) -> Self {
        Self { q: -self.q, ..*self }
    }

    /// P(x) = γ/x + δ/(x-1) + ε/(x-a).
    pub fn p_at(&self, x: f64) -> f64 {
        self.gamma / x + self.delta / (x - 1.0) + self.epsilon() / (x - self.a)
    }

    /// dP/dx.
    pub fn p_prime_at(&self, x: f64) -> f64 {
        let d0 = x;
        let d1 = x - 1.0;
        let da = x - self.a;
        -self.gamma / (d0 * d0) - self.delta / (d1 * d1) - self.epsilon() / (da * da)
    }

    /// Q(x) = (αβx - q)/(x(x-1)(x-a)).
    pub fn q_at(&self, x: f64) -> f64 {
        (self.alpha * self.beta * x - self.q) / (x * (x - 1.0) * (x - self.a))
    }

    /// dQ/dx.
    pub fn q_prime_at(&self, x: f64) -> f64 {
        let ab = self.alpha * self.beta;
        let d = x * (x - 1.0) * (x - self.a);
        let dp = 3.0 * x * x - 2.0 * (1.0 + self.a) * x + self.a;
        (ab * d - (ab * x - self.q) * dp) / (d * d)
    }

    /// The three finite regular singular points {0, 1, a}.
    pub fn singular_points(&self) -> [f64; 3] {
        [0.0, 1.0, self.a]
    }
}

/// Truncated Frobenius expansion of the local solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion {
    coeffs: Vec<f64>,
    radius: f64,
    truncation_bound: f64,
}

impl SeriesExpansion {
    /// Coefficients c_0 ... c_n.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Convergence radius min(1, |a|).
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Estimated magnitude of the first dropped term at the evaluation
    /// limit 0.9·radius.
    pub fn truncation_bound(&self) -> f64 {
        self.truncation_bound
    }
}

/// Next series coefficient from the three-term recurrence.
#[inline]
fn next_coeff(p: &HeunParams, n: usize, c_n: f64, c_nm1: f64) -> f64 {
    let nf = n as f64;
    let t1 = (nf * ((nf - 1.0 + p.gamma()) * (1.0 + p.a()) + p.a() * p.delta() + p.epsilon())
        + p.q())
        * c_n;
    let t2 = (nf - 1.0 + p.alpha()) * (nf - 1.0 + p.beta()) * c_nm1;
    (t1 - t2) / (p.a() * (nf + 1.0) * (nf + p.gamma()))
}

/// Coefficients c_0 ... c_n of the origin-local solution, c_0 = 1.
pub fn heun_series_coeffs(p: &HeunParams, n: usize) -> Result<SeriesExpansion> {
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    if n >= 1 {
        coeffs.push(p.q() / (p.a() * p.gamma()));
    }
    for k in 1..n {
        let c = next_coeff(p, k, coeffs[k], coeffs[k - 1]);
        coeffs.push(c);
    }
    let radius = p.radius();
    let xl = DISK_SAFETY * radius;
    // first dropped term, crudely extended one order past the truncation
    let truncation_bound = if coeffs.len() >= 2 {
        let k = coeffs.len() - 1;
        next_coeff(p, k, coeffs[k], coeffs[k - 1]).abs() * xl.powi(k as i32 + 1)
    } else {
        p.q().abs() / (p.a() * p.gamma()).abs() * xl
    };
    Ok(SeriesExpansion {
        coeffs,
        radius,
        truncation_bound,
    })
}

fn check_disk(p: &HeunParams, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("x = {x} is not finite")));
    }
    let lim = p.eval_limit();
    if x.abs() > lim {
        return Err(Error::Domain(format!(
            "|x| = {} exceeds the safe series disk {} = 0.9·min(1, |a|); no analytic continuation",
            x.abs(),
            lim
        )));
    }
    Ok(())
}

/// Value and derivative of H_l at x, summed jointly with adaptive truncation.
pub fn heun_l_both(p: &HeunParams, x: f64) -> Result<(f64, f64)> {
    check_disk(p, x)?;
    let mut sum = KahanSum::default();
    let mut dsum = KahanSum::default();
    sum.add(1.0);
    let c1 = p.q() / (p.a() * p.gamma());
    let mut c_prev = 1.0; // c_0
    let mut c_cur = c1;
    sum.add(c1 * x);
    dsum.add(c1);
    let mut xk = x; // x^k for current k
    let mut small_run = 0usize;
    for k in 1..SERIES_MAX {
        let c_next = next_coeff(p, k, c_cur, c_prev);
        xk *= x;
        let term = c_next * xk; // c_{k+1} x^{k+1}
        sum.add(term);
        dsum.add((k as f64 + 1.0) * c_next * if x == 0.0 { 0.0 } else { xk / x });
        if term.abs() < SERIES_EPS * (1.0 + sum.value().abs()) {
            small_run += 1;
            if small_run >= SERIES_RUN {
                return Ok((sum.value(), dsum.value()));
            }
        } else {
            small_run = 0;
        }
        c_prev = c_cur;
        c_cur = c_next;
    }
    Err(Error::Convergence(format!(
        "Heun series did not settle within {SERIES_MAX} terms at x = {x}"
    )))
}

/// H_l(a, q; α, β, γ, δ; x), the origin-analytic solution with H_l(0) = 1.
pub fn heun_l(p: &HeunParams, x: f64) -> Result<f64> {
    heun_l_both(p, x).map(|(v, _)| v)
}

/// H′_l, the term-wise differentiated series; H′_l(0) = q/(aγ).
pub fn heun_l_prime(p: &HeunParams, x: f64) -> Result<f64> {
    heun_l_both(p, x).map(|(_, d)| d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(got: f64, want: f64, tol: f64, msg: &str) {
        let diff = (got - want).abs();
        assert!(
            diff <= tol * (1.0 + want.abs()),
            "{msg}: got {got}, want {want}, diff {diff}"
        );
    }

    fn p_basic() -> HeunParams {
        HeunParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(HeunParams::new(0.0, 0.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(HeunParams::new(1.0, 0.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(HeunParams::new(2.0, 0.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(HeunParams::new(2.0, 0.0, 1.0, 1.0, -3.0, 0.0).is_err());
        assert!(HeunParams::new(2.0, 0.0, 1.0, 1.0, 0.5, 0.0).is_ok());
    }

    #[test]
    fn first_coefficients() {
        let s = heun_series_coeffs(&p_basic(), 1).unwrap();
        assert_eq!(s.coeffs()[0], 1.0);
        assert_close(s.coeffs()[1], 0.5, 1e-15, "c1 = q/(a gamma)");
        // n = 0 keeps only the normalization coefficient
        let s0 = heun_series_coeffs(&p_basic(), 0).unwrap();
        assert_eq!(s0.coeffs(), &[1.0]);
    }

    #[test]
    fn constant_solution_when_q_and_ab_vanish() {
        let p = HeunParams::new(2.0, 0.0, 0.0, 1.3, 0.8, 0.4).unwrap();
        let s = heun_series_coeffs(&p, 12).unwrap();
        for (k, c) in s.coeffs().iter().enumerate().skip(1) {
            assert!(c.abs() < 1e-300, "c_{k} = {c} should vanish");
        }
        assert_close(heun_l(&p, 0.3).unwrap(), 1.0, 1e-15, "constant solution");
        assert_close(heun_l_prime(&p, 0.3).unwrap(), 0.0, 1e-15, "constant slope");
    }

    #[test]
    fn normalization_and_slope_at_origin() {
        let p = p_basic();
        assert_eq!(heun_l(&p, 0.0).unwrap(), 1.0);
        assert_close(heun_l_prime(&p, 0.0).unwrap(), 0.5, 1e-15, "H'(0)");
    }

    #[test]
    fn two_term_truncation_example() {
        // H(0.01) = 1 + 0.5*0.01 + O(1e-4)
        let v = heun_l(&p_basic(), 0.01).unwrap();
        assert!((v - 1.00500).abs() < 1e-4, "got {v}");
    }

    #[test]
    fn closed_form_geometric_case() {
        // With (a,q,α,β,γ,δ) = (2,1,1,1,1,0) the local solution is 2/(2-x).
        let p = p_basic();
        let (h, hp) = heun_l_both(&p, 0.3).unwrap();
        assert_close(h, 20.0 / 17.0, 1e-14, "H = 2/(2-x)");
        assert_close(hp, 200.0 / 289.0, 1e-14, "H' = 2/(2-x)^2");
    }

    #[test]
    fn refuses_outside_disk() {
        let p = p_basic();
        assert!(matches!(heun_l(&p, 0.95), Err(Error::Domain(_))));
        assert!(heun_l(&p, 0.89).is_ok());
        let pw = HeunParams::new(0.5, 0.1, 1.0, 1.0, 1.0, 0.0).unwrap();
        // radius is |a| = 0.5 here
        assert!(heun_l(&pw, 0.46).is_err());
        assert!(heun_l(&pw, 0.44).is_ok());
    }

    #[test]
    fn series_resubstitution_residual_vanishes() {
        // Multiply the truncated series into the polynomial form of the ODE
        // and check that all coefficients below the truncation order vanish.
        let p = HeunParams::new(3.0, 0.4, 1.2, 0.8, 0.7, 0.5).unwrap();
        let n = 40;
        let c = heun_series_coeffs(&p, n).unwrap().coeffs().to_vec();
        let (a, ga, de, eps) = (p.a(), p.gamma(), p.delta(), p.epsilon());
        let ab = p.alpha() * p.beta();
        // x(x-1)(x-a) = x^3 - (1+a)x^2 + a x
        let p3 = [0.0, a, -(1.0 + a), 1.0];
        // γ(x-1)(x-a) + δx(x-a) + εx(x-1)
        let p2 = [
            ga * a,
            -(ga * (1.0 + a) + a * de + eps),
            ga + de + eps,
            0.0,
        ];
        let p1 = [-p.q(), ab, 0.0, 0.0];
        let mut res = vec![0.0f64; n + 4];
        let mut mag = vec![0.0f64; n + 4];
        for k in 0..=n {
            // y'' term: k(k-1) c_k x^{k-2} * p3
            if k >= 2 {
                for (j, pj) in p3.iter().enumerate() {
                    let t = (k as f64) * (k as f64 - 1.0) * c[k] * pj;
                    res[k + j - 2] += t;
                    mag[k + j - 2] += t.abs();
                }
            }
            for (j, pj) in p2.iter().enumerate() {
                if k >= 1 {
                    let pow = k + j;
                    let t = (k as f64) * c[k] * pj;
                    res[pow - 1] += t;
                    mag[pow - 1] += t.abs();
                }
            }
            for (j, pj) in p1.iter().enumerate() {
                let t = c[k] * pj;
                res[k + j] += t;
                mag[k + j] += t.abs();
            }
        }
        for m in 0..n - 1 {
            let rel = res[m].abs() / (1.0 + mag[m]);
            assert!(rel < 1e-13, "order {m}: residual {rel}");
        }
    }
}
