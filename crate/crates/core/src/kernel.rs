//! Branch-correct logarithm primitives and the elementary inequalities
//! (log-modulus bounds, Schwarz-Pick) that the norm estimates rest on.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.norm() < 1.0 {
            Ok(DiscPoint(z))
        } else {
            Err(Error::Domain(format!("|z| = {} is not < 1", z.norm())))
        }
    }

    /// Polar construction; requires r in [0, 1).
    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(r, theta))
    }

    pub fn get(self) -> Complex64 {
        self.0
    }
}

impl From<DiscPoint> for Complex64 {
    fn from(p: DiscPoint) -> Complex64 {
        p.0
    }
}

/// Principal branch of the complex logarithm with arg in (-pi, pi].
///
/// The platform atan2 returns -pi for negative real inputs carrying a
/// signed-zero imaginary part; that is normalized to +pi here so the
/// branch cut is reproducible bit for bit.
pub fn principal_log(z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("log 0 is undefined".into()));
    }
    let mut arg = z.im.atan2(z.re);
    if arg == -PI {
        arg = PI;
    }
    Ok(Complex64::new(z.norm().ln(), arg))
}

/// Upper bound sqrt(|z-1|^2 + pi^2) for |log z| when |z| >= 1.
pub fn log_modulus_bound_outer(z: Complex64) -> Result<f64> {
    if z.norm() < 1.0 {
        return Err(Error::Domain(format!(
            "outer bound needs |z| >= 1, got |z| = {}",
            z.norm()
        )));
    }
    Ok(((z - 1.0).norm_sqr() + PI * PI).sqrt())
}

/// Upper bound sqrt(|(z-1)/z|^2 + pi^2) for |log z| when 0 < |z| < 1.
pub fn log_modulus_bound_inner(z: Complex64) -> Result<f64> {
    let r = z.norm();
    if r == 0.0 || r >= 1.0 {
        return Err(Error::Domain(format!(
            "inner bound needs 0 < |z| < 1, got |z| = {r}"
        )));
    }
    Ok((((z - 1.0) / z).norm_sqr() + PI * PI).sqrt())
}

/// Schwarz-Pick slack (1-|w(z)|^2)/(1-|z|^2) - |w'(z)|.
///
/// Nonnegative (up to rounding) whenever `w_val`, `w_deriv` really are the
/// value and derivative of a Schwarz function at `z`.
pub fn schwarz_pick_defect(w_val: DiscPoint, w_deriv: Complex64, z: DiscPoint) -> f64 {
    (1.0 - w_val.get().norm_sqr()) / (1.0 - z.get().norm_sqr()) - w_deriv.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn principal_log_anchors() {
        assert_eq!(principal_log(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        // branch includes +pi, not -pi
        assert_eq!(principal_log(c(-1.0, 0.0)).unwrap(), c(0.0, PI));
        assert_eq!(principal_log(c(-1.0, -0.0)).unwrap(), c(0.0, PI));
        let l = principal_log(c(0.0, std::f64::consts::E)).unwrap();
        assert!((l - c(1.0, PI / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn principal_log_rejects_zero() {
        assert!(principal_log(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn outer_bound_anchors() {
        assert!((log_modulus_bound_outer(c(1.0, 0.0)).unwrap() - PI).abs() < 1e-15);
        let b = log_modulus_bound_outer(c(-1.0, 0.0)).unwrap();
        assert!((b - (4.0 + PI * PI).sqrt()).abs() < 1e-15);
        assert!(PI <= b);
        let b2 = log_modulus_bound_outer(c(2.0, 0.0)).unwrap();
        assert!((b2 - (1.0 + PI * PI).sqrt()).abs() < 1e-15);
        assert!(2.0f64.ln() <= b2);
        assert!(log_modulus_bound_outer(c(0.5, 0.0)).is_err());
    }

    #[test]
    fn inner_bound_anchors() {
        let b = log_modulus_bound_inner(c(0.5, 0.0)).unwrap();
        assert!((b - (1.0 + PI * PI).sqrt()).abs() < 1e-15);
        assert!(0.5f64.ln().abs() <= b);

        let b = log_modulus_bound_inner(c(0.0, 0.5)).unwrap();
        assert!((b - (5.0 + PI * PI).sqrt()).abs() < 1e-14);
        let exact = (2.0f64.ln().powi(2) + PI * PI / 4.0).sqrt();
        assert!(exact <= b);

        let b = log_modulus_bound_inner(c(0.9, 0.0)).unwrap();
        assert!((b - ((1.0f64 / 81.0) + PI * PI).sqrt()).abs() < 1e-14);

        assert!(log_modulus_bound_inner(c(0.0, 0.0)).is_err());
        assert!(log_modulus_bound_inner(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn schwarz_pick_anchors() {
        let z = DiscPoint::new(c(0.5, 0.0)).unwrap();
        // w(z) = z: equality case
        assert_eq!(schwarz_pick_defect(z, c(1.0, 0.0), z), 0.0);
        // w(z) = z^2
        let w = DiscPoint::new(c(0.25, 0.0)).unwrap();
        let d = schwarz_pick_defect(w, c(1.0, 0.0), z);
        assert!((d - 0.25).abs() < 1e-15);
        // w = 0 constant
        let w0 = DiscPoint::new(c(0.0, 0.0)).unwrap();
        let d = schwarz_pick_defect(w0, c(0.0, 0.0), z);
        assert!((d - 1.0 / 0.75).abs() < 1e-15);
    }
}
