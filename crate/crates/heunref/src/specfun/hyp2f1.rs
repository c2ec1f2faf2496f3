//! Gauss hypergeometric function ₂F₁(a, b; c; z) for real arguments z < 1.
//!
//! Region strategy:
//! * terminating series whenever a or b is a nonpositive integer;
//! * direct series for |z| ≤ 0.5;
//! * Euler transformation (1-z)^(c-a-b) ₂F₁(c-a, c-b; c; z) for z ∈ (0.5, 0.9);
//! * Pfaff transformation z → z/(z-1) for z < -0.5;
//! * refusal for z ∈ [0.9, 1) and for arguments the transformations cannot
//!   bring below 0.9 (z < -9).

use super::{near_nonpositive_integer, KahanSum};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 4_000;
const SERIES_EPS: f64 = 1e-17;
/// Upper end of the supported argument range.
const Z_REFUSE: f64 = 0.9;

fn check_c(a: f64, b: f64, c: f64) -> Result<()> {
    if near_nonpositive_integer(c, 1e-9) {
        // a terminating numerator parameter may stop the series before the
        // pole in (c)_k; c = 0 itself is always rejected
        let pole = (-c.round()) as i64 + 1; // first k with (c)_k = 0
        let stops = |v: f64| near_nonpositive_integer(v, 1e-9) && ((-v.round()) as i64) < pole;
        if c.round() == 0.0 || !(stops(a) || stops(b)) {
            return Err(Error::Param(format!(
                "c = {c} is zero or a negative integer not protected by a terminating numerator"
            )));
        }
    }
    Ok(())
}

/// Direct power series; caller guarantees |z| small enough to converge.
fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut acc = KahanSum::default();
    acc.add(1.0);
    let mut term = 1.0f64;
    let mut run = 0usize;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        if term == 0.0 {
            return Ok(acc.value()); // terminated
        }
        acc.add(term);
        if term.abs() < SERIES_EPS * (1.0 + acc.value().abs()) {
            run += 1;
            if run >= 2 {
                return Ok(acc.value());
            }
        } else {
            run = 0;
        }
    }
    Err(Error::Convergence(format!(
        "2F1 series did not settle within {MAX_TERMS} terms (a={a}, b={b}, c={c}, z={z})"
    )))
}

/// Finite sum for a terminating numerator parameter a = 0, -1, -2, ...
fn polynomial(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let m = (-a.round()) as usize;
    let mut acc = KahanSum::default();
    acc.add(1.0);
    let mut term = 1.0f64;
    for n in 0..m {
        let nf = n as f64;
        let denom = c + nf;
        if denom.abs() < 1e-300 {
            return Err(Error::Param(format!(
                "terminating series hit the pole of (c)_k at k = {} (c = {c})",
                n + 1
            )));
        }
        term *= (a + nf) * (b + nf) / (denom * (nf + 1.0)) * z;
        acc.add(term);
    }
    Ok(acc.value())
}

fn in_region(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if z.abs() <= 0.5 {
        return series(a, b, c, z);
    }
    if z > 0.5 && z < Z_REFUSE {
        // Euler transformation keeps the argument but flattens the
        // coefficient growth for the catalog's parameter ranges
        let pre = (1.0 - z).powf(c - a - b);
        let (aa, bb) = (c - a, c - b);
        if near_nonpositive_integer(aa, 1e-9) {
            return Ok(pre * polynomial(aa, bb, c, z)?);
        }
        if near_nonpositive_integer(bb, 1e-9) {
            return Ok(pre * polynomial(bb, aa, c, z)?);
        }
        return Ok(pre * series(aa, bb, c, z)?);
    }
    Err(Error::Domain(format!(
        "z = {z} lies in the refused band [{Z_REFUSE}, 1) after transformation"
    )))
}

/// ₂F₁(a, b; c; z) for real z < 1; relative error ≤ 1e-12 on the supported
/// range (direct series, Euler and Pfaff regions).
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    for (name, v) in [("a", a), ("b", b), ("c", c), ("z", z)] {
        if !v.is_finite() {
            return Err(Error::Param(format!("{name} = {v} is not finite")));
        }
    }
    if z >= 1.0 {
        return Err(Error::Domain(format!("z = {z} is outside the real domain z < 1")));
    }
    check_c(a, b, c)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    // terminating cases hold for any z < 1
    if near_nonpositive_integer(a, 1e-9) {
        return polynomial(a, b, c, z);
    }
    if near_nonpositive_integer(b, 1e-9) {
        return polynomial(b, a, c, z);
    }
    if z >= Z_REFUSE {
        return Err(Error::Domain(format!(
            "z = {z} lies in the refused band [{Z_REFUSE}, 1)"
        )));
    }
    if z >= -0.5 {
        return in_region(a, b, c, z);
    }
    // Pfaff: 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1));
    // keep the smaller numerator parameter in the prefactor exponent
    let (a1, b1) = if a.abs() <= b.abs() { (a, b) } else { (b, a) };
    let w = z / (z - 1.0);
    let pre = (1.0 - z).powf(-a1);
    if near_nonpositive_integer(c - b1, 1e-9) {
        return Ok(pre * polynomial(c - b1, a1, c, w)?);
    }
    Ok(pre * in_region(a1, c - b1, c, w)?)
}

/// d/dz ₂F₁(a, b; c; z) = (ab/c)·₂F₁(a+1, b+1; c+1; z).
pub fn hyp2f1_prime(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if c.abs() < 1e-12 {
        return Err(Error::Param("c = 0 in the contiguous derivative".into()));
    }
    // a or b at zero terminates the series at order 0: flat derivative
    if (a.abs() < 1e-12) || (b.abs() < 1e-12) {
        return Ok(0.0);
    }
    Ok(a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rel(got: f64, want: f64, tol: f64, msg: &str) {
        let diff = (got - want).abs();
        assert!(
            diff <= tol * want.abs().max(1.0),
            "{msg}: got {got}, want {want}, rel {}",
            diff / want.abs().max(1.0)
        );
    }

    #[test]
    fn trivial_values() {
        assert_eq!(hyp2f1(0.7, 1.9, 2.3, 0.0).unwrap(), 1.0);
        // terminating polynomial: 1 - (2/3)·z at a = -1, b = 2, c = 3
        assert_rel(
            hyp2f1(-1.0, 2.0, 3.0, 0.25).unwrap(),
            1.0 - 2.0 / 3.0 * 0.25,
            1e-15,
            "terminating",
        );
    }

    #[test]
    fn log_closed_form() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        let z = 0.5;
        assert_rel(
            hyp2f1(1.0, 1.0, 2.0, z).unwrap(),
            1.3862943611198906,
            1e-14,
            "2F1(1,1;2;1/2)",
        );
        let z = -0.8;
        assert_rel(
            hyp2f1(1.0, 1.0, 2.0, z).unwrap(),
            -(1.0f64 - z).ln() / z,
            1e-13,
            "2F1(1,1;2;-0.8)",
        );
    }

    #[test]
    fn pfaff_region_matches_reference() {
        // frozen with a 40-digit series oracle
        assert_rel(
            hyp2f1(0.5, 2.5, 1.7, -2.0).unwrap(),
            0.48256843253263037184,
            1e-12,
            "Pfaff region",
        );
    }

    #[test]
    fn euler_region_matches_reference() {
        assert_rel(
            hyp2f1(0.5, 2.5, 1.7, 0.75).unwrap(),
            3.2687686631611148335,
            1e-12,
            "Euler region",
        );
        assert_rel(
            hyp2f1(1.2, 0.4, 0.9, 0.85).unwrap(),
            2.9875368021822693857,
            1e-12,
            "Euler region near refusal band",
        );
    }

    #[test]
    fn reduction_to_heun_test_value() {
        assert_rel(
            hyp2f1(0.75, 0.25, 1.0, 0.36).unwrap(),
            1.0853573342965474034,
            1e-13,
            "L1 oracle point",
        );
    }

    #[test]
    fn domain_refusals() {
        assert!(matches!(hyp2f1(0.5, 0.5, 1.5, 0.95), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(0.5, 0.5, 1.5, 1.0), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(0.5, 0.5, 1.5, 1.7), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(0.5, 0.5, 0.0, 0.2), Err(Error::Param(_))));
        assert!(matches!(hyp2f1(0.5, 0.5, -2.0, 0.2), Err(Error::Param(_))));
        // a = -1 terminates before the pole of c = -2 at k = 3
        assert!(hyp2f1(-1.0, 0.5, -2.0, 0.2).is_ok());
        // c = 0 is always rejected, even with a terminating numerator
        assert!(hyp2f1(-1.0, 0.5, 0.0, 0.2).is_err());
    }

    #[test]
    fn prime_values() {
        // first series coefficient
        assert_rel(hyp2f1_prime(0.7, 1.1, 2.3, 0.0).unwrap(), 0.7 * 1.1 / 2.3, 1e-15, "ab/c");
        // derivative of a linear polynomial is constant
        for z in [-0.3, 0.1, 0.6] {
            assert_rel(hyp2f1_prime(-1.0, 2.0, 3.0, z).unwrap(), -2.0 / 3.0, 1e-14, "linear");
        }
        // (1/2)·2F1(2,2;3;1/2), frozen with the series oracle
        assert_rel(
            hyp2f1_prime(1.0, 1.0, 2.0, 0.5).unwrap(),
            0.5 * 2.4548225555204375247,
            1e-13,
            "prime at 1/2",
        );
    }

    #[test]
    fn derivative_consistency_on_grid() {
        // central difference of hyp2f1 vs hyp2f1_prime, 1e-6 relative
        let (a, b, c) = (0.8, 1.4, 1.9);
        let h = 1e-6;
        for i in 0..20 {
            let z = -0.8 + 0.08 * i as f64;
            let num = (hyp2f1(a, b, c, z + h).unwrap() - hyp2f1(a, b, c, z - h).unwrap()) / (2.0 * h);
            let exact = hyp2f1_prime(a, b, c, z).unwrap();
            assert_rel(num, exact, 1e-6, &format!("derivative at z = {z}"));
        }
    }
}
