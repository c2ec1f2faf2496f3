//! Carlson symmetric forms and Legendre elliptic integrals (modulus
//! convention: k, with k² the parameter).
//!
//! F(φ, k) = sin φ · R_F(cos²φ, 1 - k²sin²φ, 1)
//! K(k) = F(π/2, k)                      (same Carlson call by construction)
//! E(k) = R_F(0, 1-k², 1) - (k²/3)·R_D(0, 1-k², 1)

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

const MAX_ITER: usize = 120;
// duplication-theorem error tolerances (error ~ tol^6 for RF, tol^4.5 for RD)
const RF_TOL: f64 = 0.0020;
const RD_TOL: f64 = 0.0012;

/// Carlson symmetric integral R_F(x, y, z) of the first kind.
///
/// Arguments must be nonnegative with at most one equal to zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 {
        return Err(Error::Domain(format!(
            "R_F requires nonnegative arguments, got ({x}, {y}, {z})"
        )));
    }
    let zeros = [x, y, z].iter().filter(|v| **v == 0.0).count();
    if zeros > 1 {
        return Err(Error::Domain(
            "R_F diverges when more than one argument is zero".into(),
        ));
    }
    let (mut xt, mut yt, mut zt) = (x, y, z);
    for _ in 0..MAX_ITER {
        let (sx, sy, sz) = (xt.sqrt(), yt.sqrt(), zt.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        let ave = (xt + yt + zt) / 3.0;
        let dx = (ave - xt) / ave;
        let dy = (ave - yt) / ave;
        let dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < RF_TOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return Ok((1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt());
        }
    }
    Err(Error::Convergence("R_F duplication did not converge".into()))
}

/// Carlson symmetric integral R_D(x, y, z) of the second kind
/// (degenerate third kind); z must be positive.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z <= 0.0 {
        return Err(Error::Domain(format!(
            "R_D requires x, y >= 0 and z > 0, got ({x}, {y}, {z})"
        )));
    }
    if x + y == 0.0 {
        return Err(Error::Domain(
            "R_D diverges when x and y are both zero".into(),
        ));
    }
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let mut sum = 0.0f64;
    let mut fac = 1.0f64;
    for _ in 0..MAX_ITER {
        let (sx, sy, sz) = (xt.sqrt(), yt.sqrt(), zt.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (zt + lam));
        fac *= 0.25;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        let ave = 0.2 * (xt + yt + 3.0 * zt);
        let dx = (ave - xt) / ave;
        let dy = (ave - yt) / ave;
        let dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < RD_TOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let s = ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee)
                + dz * (ee / 6.0 + dz * (-9.0 / 22.0 * ec + 3.0 / 26.0 * dz * ea));
            return Ok(3.0 * sum + fac * (1.0 + s) / (ave * ave.sqrt()));
        }
    }
    Err(Error::Convergence("R_D duplication did not converge".into()))
}

/// Incomplete elliptic integral of the first kind,
/// F(φ, k) = ∫₀^φ dθ/√(1 - k²sin²θ), for φ ∈ [0, π/2], k ∈ [0, 1).
pub fn ellip_f_incomplete(phi: f64, k: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2 + 1e-12).contains(&phi) {
        return Err(Error::Domain(format!("phi = {phi} outside [0, pi/2]")));
    }
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus k = {k} outside [0, 1)")));
    }
    if phi == 0.0 {
        return Ok(0.0);
    }
    let s = phi.sin();
    let c = phi.cos();
    Ok(s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0)?)
}

/// Complete elliptic integral of the first kind, K(k) = F(π/2, k).
pub fn ellip_k_complete(k: f64) -> Result<f64> {
    ellip_f_incomplete(FRAC_PI_2, k)
}

/// Complete elliptic integral of the second kind,
/// E(k) = ∫₀^{π/2} √(1 - k²sin²θ) dθ, for k ∈ [0, 1].
pub fn ellip_e_complete(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus k = {k} outside [0, 1]")));
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    let kc2 = 1.0 - k * k;
    Ok(carlson_rf(0.0, kc2, 1.0)? - k * k / 3.0 * carlson_rd(0.0, kc2, 1.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn assert_rel(got: f64, want: f64, tol: f64, msg: &str) {
        let diff = (got - want).abs();
        assert!(
            diff <= tol * want.abs().max(1.0),
            "{msg}: got {got}, want {want}"
        );
    }

    /// AGM oracle for K(k), independent of the Carlson route.
    pub(crate) fn agm_k(k: f64) -> f64 {
        let mut a = 1.0f64;
        let mut b = (1.0 - k * k).sqrt();
        for _ in 0..40 {
            let an = 0.5 * (a + b);
            let bn = (a * b).sqrt();
            if (an - bn).abs() < 1e-17 * an {
                return PI / (2.0 * an);
            }
            a = an;
            b = bn;
        }
        PI / (a + b)
    }

    /// AGM oracle for E(k): E = K·(1 - Σ 2^{n-1} c_n²), c_0 = k.
    pub(crate) fn agm_e(k: f64) -> f64 {
        let mut a = 1.0f64;
        let mut b = (1.0 - k * k).sqrt();
        let mut c = k;
        let mut sum = 0.5 * c * c;
        let mut pow = 0.5f64;
        for _ in 0..40 {
            let an = 0.5 * (a + b);
            let bn = (a * b).sqrt();
            c = 0.5 * (a - b);
            pow *= 2.0;
            sum += pow * c * c;
            a = an;
            b = bn;
            if c.abs() < 1e-17 {
                break;
            }
        }
        PI / (2.0 * a) * (1.0 - sum)
    }

    #[test]
    fn rf_special_values() {
        assert_rel(carlson_rf(1.0, 1.0, 1.0).unwrap(), 1.0, 1e-15, "RF(1,1,1)");
        assert_rel(carlson_rf(0.0, 1.0, 1.0).unwrap(), PI / 2.0, 1e-13, "RF(0,1,1)");
        // lemniscatic point: RF(0,1,2) = K(1/sqrt2)/sqrt2, fixed by the AGM oracle
        let want = agm_k(0.5f64.sqrt()) / 2.0f64.sqrt();
        assert_rel(carlson_rf(0.0, 1.0, 2.0).unwrap(), want, 1e-13, "RF(0,1,2)");
        assert_rel(want, 1.3110287771460599052, 1e-14, "frozen lemniscatic value");
        assert!(carlson_rf(0.0, 0.0, 1.0).is_err());
        assert!(carlson_rf(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn f_incomplete_values() {
        assert_eq!(ellip_f_incomplete(0.0, 0.3).unwrap(), 0.0);
        for phi in [0.3, 0.9, FRAC_PI_2] {
            assert_rel(ellip_f_incomplete(phi, 0.0).unwrap(), phi, 1e-14, "k = 0");
        }
        let k = 0.5f64.sqrt();
        assert_rel(
            ellip_f_incomplete(FRAC_PI_2, k).unwrap(),
            1.8540746773013719,
            1e-12,
            "F(pi/2, 1/sqrt2)",
        );
        // F(pi/6, k = 0.5); frozen from a 40-digit oracle
        assert_rel(
            ellip_f_incomplete(PI / 6.0, 0.5).unwrap(),
            0.52942862705190581774,
            1e-13,
            "F(pi/6, 0.5)",
        );
        assert!(ellip_f_incomplete(-0.1, 0.5).is_err());
        assert!(ellip_f_incomplete(2.0, 0.5).is_err());
        assert!(ellip_f_incomplete(0.5, 1.0).is_err());
    }

    #[test]
    fn complete_integrals_match_agm_oracle() {
        assert_rel(ellip_k_complete(0.0).unwrap(), PI / 2.0, 1e-14, "K(0)");
        assert_rel(ellip_e_complete(0.0).unwrap(), PI / 2.0, 1e-14, "E(0)");
        assert_eq!(ellip_e_complete(1.0).unwrap(), 1.0);
        let k = 0.5f64.sqrt();
        assert_rel(ellip_k_complete(k).unwrap(), agm_k(k), 1e-12, "K(1/sqrt2) vs AGM");
        assert_rel(ellip_e_complete(k).unwrap(), agm_e(k), 1e-12, "E(1/sqrt2) vs AGM");
        assert_rel(agm_k(k), 1.8540746773013719184, 1e-15, "frozen K");
        assert_rel(agm_e(k), 1.3506438810476755025, 1e-15, "frozen E");
        for i in 1..=9 {
            let k = i as f64 / 10.0;
            assert_rel(ellip_k_complete(k).unwrap(), agm_k(k), 1e-12, "K sweep");
            assert_rel(ellip_e_complete(k).unwrap(), agm_e(k), 1e-12, "E sweep");
        }
        assert!(ellip_k_complete(1.0).is_err());
        assert!(ellip_e_complete(1.1).is_err());
    }

    #[test]
    fn f_at_right_angle_is_bitwise_k() {
        for i in 0..30 {
            let k = 0.03 * i as f64;
            let f = ellip_f_incomplete(FRAC_PI_2, k).unwrap();
            let kk = ellip_k_complete(k).unwrap();
            assert_eq!(f.to_bits(), kk.to_bits(), "k = {k}");
        }
    }

    #[test]
    fn derivative_relation_8_123_4() {
        // dE/dk = (E(k) - K(k))/k under central differences, 1e-6
        let h = 1e-6;
        for i in 1..9 {
            let k = i as f64 / 10.0;
            let num =
                (ellip_e_complete(k + h).unwrap() - ellip_e_complete(k - h).unwrap()) / (2.0 * h);
            let exact = (ellip_e_complete(k).unwrap() - ellip_k_complete(k).unwrap()) / k;
            assert_rel(num, exact, 1e-6, &format!("8.123(4) at k = {k}"));
        }
    }
}
