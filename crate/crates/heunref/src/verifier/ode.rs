//! Independent ODE oracle: adaptive Dormand–Prince 5(4) integration of
//! y″ + P y′ + Q y = 0 as a first-order system, with quintic-Hermite dense
//! output built from (y, y′, y″) at the accepted steps.

use crate::error::{Error, Result};
use crate::lagrange::CoefficientPair;
use crate::specfun::{heun_l_both, HeunParams};

/// Relative tolerance of the embedded error control.
pub const ODE_RTOL: f64 = 1e-11;
const ODE_ATOL: f64 = 1e-13;
const MAX_STEPS: usize = 200_000;

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

type State = [f64; 2];

fn rhs(cp: &CoefficientPair, x: f64, y: &State) -> Result<State> {
    Ok([y[1], -cp.p_at(x)? * y[1] - cp.q_at(x)? * y[0]])
}

/// One dense-output segment with endpoint derivatives up to third order.
#[derive(Debug, Clone)]
struct Segment {
    x0: f64,
    x1: f64,
    // y, y', y'' and y''', at both ends
    left: [f64; 4],
    right: [f64; 4],
}

impl Segment {
    /// Quintic Hermite interpolation from (f, f′, f″) at both endpoints.
    fn quintic(x0: f64, x1: f64, l: [f64; 3], r: [f64; 3], x: f64) -> f64 {
        let h = x1 - x0;
        let t = (x - x0) / h;
        // basis for value/derivative/second-derivative matching
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h21 = 0.5 * t3 - t4 + 0.5 * t5;
        h00 * l[0]
            + h10 * h * l[1]
            + h20 * h * h * l[2]
            + h01 * r[0]
            + h11 * h * r[1]
            + h21 * h * h * r[2]
    }

    fn eval(&self, x: f64) -> (f64, f64) {
        let y = Self::quintic(
            self.x0,
            self.x1,
            [self.left[0], self.left[1], self.left[2]],
            [self.right[0], self.right[1], self.right[2]],
            x,
        );
        let yp = Self::quintic(
            self.x0,
            self.x1,
            [self.left[1], self.left[2], self.left[3]],
            [self.right[1], self.right[2], self.right[3]],
            x,
        );
        (y, yp)
    }
}

/// Dense solution of one propagation run.
pub struct OdeSolution {
    segments: Vec<Segment>,
    x_start: f64,
    x_end: f64,
}

impl OdeSolution {
    /// (y, y′) anywhere inside the propagated span.
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let (lo, hi) = if self.x_start <= self.x_end {
            (self.x_start, self.x_end)
        } else {
            (self.x_end, self.x_start)
        };
        let guard = 1e-9 * (1.0 + x.abs());
        if x < lo - guard || x > hi + guard {
            return Err(Error::Domain(format!(
                "x = {x} outside the propagated span [{lo}, {hi}]"
            )));
        }
        let seg = self
            .segments
            .iter()
            .find(|s| {
                let (a, b) = if s.x0 <= s.x1 { (s.x0, s.x1) } else { (s.x1, s.x0) };
                (a - guard..=b + guard).contains(&x)
            })
            .ok_or_else(|| Error::Domain(format!("no dense segment covers x = {x}")))?;
        Ok(seg.eval(x))
    }

    pub fn span(&self) -> (f64, f64) {
        (self.x_start, self.x_end)
    }
}

/// y''' = -P·y″ - (P′+Q)·y′ - Q′·y, with P′ and Q′ by central differences of
/// the coefficient closures. y''' only feeds the highest Hermite basis term,
/// so the differencing error is far below the interpolation error.
fn third_derivative(cp: &CoefficientPair, x: f64, y: &State, ypp: f64) -> Result<f64> {
    let d = 1e-6 * (1.0 + x.abs());
    let pp = (cp.p_at(x + d)? - cp.p_at(x - d)?) / (2.0 * d);
    let qp = (cp.q_at(x + d)? - cp.q_at(x - d)?) / (2.0 * d);
    Ok(-cp.p_at(x)? * ypp - pp * y[1] - qp * y[0] - cp.q_at(x)? * y[1])
}

fn endpoint_data(cp: &CoefficientPair, x: f64, y: &State) -> Result<[f64; 4]> {
    let ypp = -cp.p_at(x)? * y[1] - cp.q_at(x)? * y[0];
    let yppp = third_derivative(cp, x, y, ypp)?;
    Ok([y[0], y[1], ypp, yppp])
}

/// Checks that no singular point of `cp` lies inside [min, max] of the path.
fn check_path(cp: &CoefficientPair, from: f64, to: f64) -> Result<()> {
    let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
    for s in cp.singular_points() {
        if *s >= lo - 1e-9 && *s <= hi + 1e-9 {
            return Err(Error::Propagation(format!(
                "singular point {s} lies on the path from {from} to {to}"
            )));
        }
    }
    Ok(())
}

/// Propagates (y, y′) from `x_start` to `x_end`, returning a dense solution.
pub fn propagate_dense(
    cp: &CoefficientPair,
    x_start: f64,
    y0: (f64, f64),
    x_end: f64,
) -> Result<OdeSolution> {
    check_path(cp, x_start, x_end)?;
    let mut segments = Vec::new();
    if (x_end - x_start).abs() < 1e-15 {
        return Ok(OdeSolution {
            segments,
            x_start,
            x_end,
        });
    }
    let dir = (x_end - x_start).signum();
    let span = (x_end - x_start).abs();
    let mut x = x_start;
    let mut y: State = [y0.0, y0.1];
    let mut h = dir * (span / 100.0).min(1e-3);
    let end_tol = 1e-12 * (1.0 + x_end.abs());
    let mut k: [State; 7] = [[0.0; 2]; 7];
    k[0] = rhs(cp, x, &y)?;
    for _ in 0..MAX_STEPS {
        if (x - x_end).abs() < end_tol {
            return Ok(OdeSolution {
                segments,
                x_start,
                x_end,
            });
        }
        if (h / dir) > (x_end - x) / dir {
            h = x_end - x;
        }
        if h.abs() < 1e-14 * (1.0 + x.abs()) {
            return Err(Error::Propagation(format!(
                "step size underflow at x = {x} (near a singularity?)"
            )));
        }
        // stages
        let mut failed = false;
        for i in 1..7 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i) {
                yi[0] += h * A[i][j] * kj[0];
                yi[1] += h * A[i][j] * kj[1];
            }
            match rhs(cp, x + C[i] * h, &yi) {
                Ok(v) => k[i] = v,
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            h *= 0.5;
            continue;
        }
        let mut y5: State = y;
        let mut y4: State = y;
        for i in 0..7 {
            y5[0] += h * B5[i] * k[i][0];
            y5[1] += h * B5[i] * k[i][1];
            y4[0] += h * B4[i] * k[i][0];
            y4[1] += h * B4[i] * k[i][1];
        }
        let mut err = 0.0f64;
        for i in 0..2 {
            let sc = ODE_ATOL + ODE_RTOL * y[i].abs().max(y5[i].abs());
            err += ((y5[i] - y4[i]) / sc).powi(2);
        }
        err = (err / 2.0).sqrt();
        if err <= 1.0 {
            let left = endpoint_data(cp, x, &y)?;
            let right = endpoint_data(cp, x + h, &y5)?;
            segments.push(Segment {
                x0: x,
                x1: x + h,
                left,
                right,
            });
            x += h;
            y = y5;
            k[0] = rhs(cp, x, &y)?; // FSAL would reuse k[6]; recompute for clarity
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= fac;
    }
    Err(Error::Propagation(format!(
        "exceeded {MAX_STEPS} steps propagating from {x_start} to {x_end}"
    )))
}

/// Propagates from `x_start` with given initial values and reports (y, y′)
/// at each requested point (sorted internally; both directions supported).
pub fn propagate(
    cp: &CoefficientPair,
    x_start: f64,
    y0: (f64, f64),
    targets: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let mut fwd: Vec<f64> = targets.iter().copied().filter(|t| *t >= x_start).collect();
    let mut bwd: Vec<f64> = targets.iter().copied().filter(|t| *t < x_start).collect();
    fwd.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bwd.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut out = vec![(0.0, 0.0); targets.len()];
    for (dirlist, _) in [(&fwd, 1.0), (&bwd, -1.0)] {
        if dirlist.is_empty() {
            continue;
        }
        let last = *dirlist.last().unwrap();
        let sol = propagate_dense(cp, x_start, y0, last)?;
        for t in dirlist {
            let v = if (t - x_start).abs() < 1e-15 {
                y0
            } else {
                sol.eval(*t)?
            };
            for (i, ti) in targets.iter().enumerate() {
                if ti == t {
                    out[i] = v;
                }
            }
        }
    }
    Ok(out)
}

/// Independent oracle for the local Heun function: initial values from the
/// origin series at `x_start` (inside the disk), then adaptive integration
/// of the Heun equation to each requested point.
pub fn ode_oracle(p: &HeunParams, x_start: f64, xs: &[f64]) -> Result<Vec<(f64, f64)>> {
    let ic = heun_l_both(p, x_start)?;
    let cp = CoefficientPair::heun(p);
    propagate(&cp, x_start, ic, xs)
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
    fn constant_solution() {
        let p = HeunParams::new(2.0, 0.0, 0.0, 1.3, 0.8, 0.4).unwrap();
        let xs = [0.1, 0.3, 0.5, 0.7];
        let out = ode_oracle(&p, 0.05, &xs).unwrap();
        for (y, yp) in out {
            assert_rel(y, 1.0, 1e-12, "y = 1");
            assert!(yp.abs() < 1e-12, "y' = 0, got {yp}");
        }
    }

    #[test]
    fn matches_series_inside_disk() {
        let p = HeunParams::new(3.0, 0.4, 1.2, 0.8, 0.7, 0.5).unwrap();
        let xs = [0.1, 0.25, 0.45, 0.6, 0.8];
        let out = ode_oracle(&p, 0.02, &xs).unwrap();
        for (x, (y, yp)) in xs.iter().zip(out) {
            let (hs, hps) = heun_l_both(&p, *x).unwrap();
            assert_rel(y, hs, 1e-9, &format!("y at {x}"));
            assert_rel(yp, hps, 1e-9, &format!("y' at {x}"));
        }
    }

    #[test]
    fn geometric_closed_form() {
        // H_l(2,1;1,1,1,0;x) = 2/(2-x)
        let p = HeunParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        let out = ode_oracle(&p, 0.01, &[0.5]).unwrap();
        assert_rel(out[0].0, 2.0 / 1.5, 1e-10, "2/(2-x)");
        assert_rel(out[0].1, 2.0 / 2.25, 1e-10, "2/(2-x)^2");
    }

    #[test]
    fn refuses_singular_path() {
        let p = HeunParams::new(2.0, 0.4, 1.2, 0.8, 0.7, 0.5).unwrap();
        assert!(matches!(
            ode_oracle(&p, 0.5, &[1.5]),
            Err(Error::Propagation(_))
        ));
        // backward through the origin is also refused
        assert!(ode_oracle(&p, 0.5, &[-0.2]).is_err());
    }

    #[test]
    fn dense_output_consistency() {
        let p = HeunParams::new(3.0, 0.4, 1.2, 0.8, 0.7, 0.5).unwrap();
        let cp = CoefficientPair::heun(&p);
        let ic = heun_l_both(&p, 0.05).unwrap();
        let sol = propagate_dense(&cp, 0.05, ic, 0.8).unwrap();
        for i in 0..50 {
            let x = 0.06 + 0.7 * i as f64 / 49.0;
            let (y, yp) = sol.eval(x).unwrap();
            let (hs, hps) = heun_l_both(&p, x).unwrap();
            assert_rel(y, hs, 1e-9, &format!("dense y at {x}"));
            assert_rel(yp, hps, 1e-9, &format!("dense y' at {x}"));
        }
    }
}
