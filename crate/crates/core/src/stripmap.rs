//! The conformal map P of the disc onto the vertical strip
//! alpha < Re w < beta with P(0) = 1, its derivative, Maclaurin
//! coefficients, and containment checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernel::{principal_log, DiscPoint};

/// Validated strip parameters (alpha, beta) with the opening angle
/// phi = 2 pi (1 - alpha) / (beta - alpha) cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripParams {
    alpha: f64,
    beta: f64,
    phi: f64,
}

impl StripParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) || beta <= 1.0 || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Params { alpha, beta });
        }
        let phi = 2.0 * PI * (1.0 - alpha) / (beta - alpha);
        Ok(StripParams { alpha, beta, phi })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn width(&self) -> f64 {
        self.beta - self.alpha
    }

    /// e^{i phi}
    pub fn rotation(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.phi)
    }
}

/// P(z) = 1 + ((beta-alpha) i / pi) log((1 - e^{i phi} z) / (1 - z)).
pub fn eval_p(p: &StripParams, z: DiscPoint) -> Complex64 {
    let z = z.get();
    let ratio = (1.0 - p.rotation() * z) / (1.0 - z);
    // ratio has positive real part on the disc, so the principal log is safe
    let log = principal_log(ratio).expect("ratio is nonzero on the open disc");
    1.0 + Complex64::new(0.0, p.width() / PI) * log
}

/// P'(z) = ((beta-alpha) i / pi) (1 - e^{i phi}) / ((1 - z)(1 - e^{i phi} z)).
pub fn eval_p_prime(p: &StripParams, z: DiscPoint) -> Complex64 {
    let z = z.get();
    let e = p.rotation();
    Complex64::new(0.0, p.width() / PI) * (1.0 - e) / ((1.0 - z) * (1.0 - e * z))
}

/// Maclaurin coefficients (p_1, ..., p_n_max) of P(z) - 1,
/// p_n = ((beta-alpha) i / pi) (1 - e^{i n phi}) / n.
pub fn series_coeffs(p: &StripParams, n_max: usize) -> Vec<Complex64> {
    let pref = Complex64::new(0.0, p.width() / PI);
    (1..=n_max)
        .map(|n| {
            let e_n = Complex64::from_polar(1.0, p.phi * n as f64);
            pref * (1.0 - e_n) / n as f64
        })
        .collect()
}

/// True iff alpha + margin < Re w < beta - margin.
pub fn strip_contains(p: &StripParams, w: Complex64, margin: f64) -> bool {
    p.alpha + margin < w.re && w.re < p.beta - margin
}

/// Smallest N (capped) with tail bound
/// (2(beta-alpha)/pi) r^{N+1} / ((N+1)(1-r)) below `tol`.
pub fn truncation_terms(p: &StripParams, radius: f64, tol: f64, cap: usize) -> usize {
    let c = 2.0 * p.width() / PI;
    let mut n = 1usize;
    while n < cap {
        let tail = c * radius.powi(n as i32 + 1) / ((n + 1) as f64 * (1.0 - radius));
        if tail < tol {
            return n;
        }
        // geometric-ish growth keeps this loop cheap
        n = (n * 2).min(cap);
    }
    cap
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dp(re: f64, im: f64) -> DiscPoint {
        DiscPoint::new(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn params_anchors() {
        assert!((StripParams::new(0.0, 2.0).unwrap().phi() - PI).abs() < 1e-15);
        assert!((StripParams::new(0.5, 2.0).unwrap().phi() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!(StripParams::new(0.5, 1.0).is_err());
        assert!(StripParams::new(1.0, 2.0).is_err());
        assert!(StripParams::new(-0.1, 2.0).is_err());
    }

    #[test]
    fn eval_p_anchors() {
        let p = StripParams::new(0.0, 2.0).unwrap();
        assert_eq!(eval_p(&p, dp(0.0, 0.0)), Complex64::new(1.0, 0.0));

        let v = eval_p(&p, dp(0.5, 0.0));
        let expect = Complex64::new(1.0, 2.0 / PI * 3.0f64.ln());
        assert!((v - expect).norm() < 1e-15);

        let v = eval_p(&p, dp(0.9, 0.0));
        let expect = Complex64::new(1.0, 2.0 / PI * 19.0f64.ln());
        assert!((v - expect).norm() < 1e-14);
        assert!(v.re > 0.0 && v.re < 2.0);
    }

    #[test]
    fn eval_p_prime_anchors() {
        let p = StripParams::new(0.0, 2.0).unwrap();
        let v = eval_p_prime(&p, dp(0.0, 0.0));
        assert!((v - Complex64::new(0.0, 4.0 / PI)).norm() < 1e-15);

        let p = StripParams::new(0.5, 2.0).unwrap();
        let v = eval_p_prime(&p, dp(0.0, 0.0));
        let expect = Complex64::new(0.0, 1.5 / PI) * Complex64::new(1.5, -(3.0f64.sqrt()) / 2.0);
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = StripParams::new(0.25, 4.0).unwrap();
        let h = 1e-5;
        for &(re, im) in &[(0.3, 0.2), (-0.6, 0.1), (0.0, -0.85), (0.5, 0.5)] {
            let z = Complex64::new(re, im);
            let fd = (eval_p(&p, DiscPoint::new(z + h).unwrap())
                - eval_p(&p, DiscPoint::new(z - h).unwrap()))
                / (2.0 * h);
            let d = eval_p_prime(&p, DiscPoint::new(z).unwrap());
            assert!((fd - d).norm() / d.norm() < 1e-6, "at z = {z}");
        }
    }

    #[test]
    fn series_coeff_anchors() {
        let p = StripParams::new(0.0, 2.0).unwrap();
        let c = series_coeffs(&p, 4);
        assert!((c[0] - Complex64::new(0.0, 4.0 / PI)).norm() < 1e-15);
        assert!(c[1].norm() < 1e-15); // e^{2 pi i} = 1
    }

    #[test]
    fn partial_sums_converge_to_eval_p() {
        let p = StripParams::new(0.0, 2.0).unwrap();
        let z = Complex64::new(0.5, 0.0);
        let n = truncation_terms(&p, 0.5, 1e-10, 8192);
        let coeffs = series_coeffs(&p, n);
        let mut sum = Complex64::new(1.0, 0.0);
        let mut zp = Complex64::new(1.0, 0.0);
        for c in &coeffs {
            zp *= z;
            sum += c * zp;
        }
        let exact = eval_p(&p, DiscPoint::new(z).unwrap());
        assert!((sum - exact).norm() < 1e-9);
    }

    #[test]
    fn strip_contains_anchors() {
        let p = StripParams::new(0.0, 2.0).unwrap();
        assert!(strip_contains(&p, Complex64::new(1.0, 0.0), 0.0));
        assert!(!strip_contains(&p, Complex64::new(2.1, 0.0), 0.0));
        assert!(strip_contains(&p, Complex64::new(1.0, 100.0), 0.0));
    }
}
