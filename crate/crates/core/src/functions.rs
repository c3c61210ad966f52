//! Concrete analytic functions on the disc: closed-form catalog entries,
//! the extremal functions for the strip-starlike class built by
//! coefficient recurrence, and a constructed member of the V class,
//! together with grid-based membership checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::kernel::{principal_log, DiscPoint};
use crate::stripmap::{self, StripParams};

/// Certified evaluation radius for constructed series models. Covers the
/// deepest default radius level 1 - 2^{-12}.
pub const MAX_SERIES_RADIUS: f64 = 0.9998;
pub const DEFAULT_N_TERMS: usize = 512;
pub const MAX_N_TERMS: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogName {
    /// f(z) = z
    Identity,
    /// f(z) = z / (1 - z)^2
    Koebe,
    /// f(z) = z / (1 - z)
    Cayley,
    /// f(z) = e^z - 1
    Exp,
}

impl CatalogName {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "identity" => Ok(CatalogName::Identity),
            "koebe" => Ok(CatalogName::Koebe),
            "cayley" => Ok(CatalogName::Cayley),
            "exp" => Ok(CatalogName::Exp),
            other => Err(Error::UnknownFunction(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CatalogName::Identity => "identity",
            CatalogName::Koebe => "koebe",
            CatalogName::Cayley => "cayley",
            CatalogName::Exp => "exp",
        }
    }
}

/// Closed-form pre-Schwarzian attached to a model, used in preference to
/// the series quotient f''/f'.
#[derive(Debug, Clone, Copy)]
pub enum ClosedPreSchwarzian {
    Zero,
    /// Koebe: (4 + 2z) / (1 - z^2)
    Koebe,
    /// z/(1-z): 2 / (1 - z)
    Cayley,
    /// e^z - 1: identically 1
    One,
    /// extremal of S(alpha,beta): (P(z)-1)/z + P'(z)/P(z)
    ExtremalS(StripParams),
    /// rotated extremal: same shape with the rotated driver Q
    ExtremalRotated(StripParams),
}

impl ClosedPreSchwarzian {
    pub fn eval(&self, z: DiscPoint) -> Complex64 {
        let zv = z.get();
        match *self {
            ClosedPreSchwarzian::Zero => Complex64::new(0.0, 0.0),
            ClosedPreSchwarzian::Koebe => (4.0 + 2.0 * zv) / (1.0 - zv * zv),
            ClosedPreSchwarzian::Cayley => 2.0 / (1.0 - zv),
            ClosedPreSchwarzian::One => Complex64::new(1.0, 0.0),
            ClosedPreSchwarzian::ExtremalS(p) => {
                let q_minus_1_over_z = if zv.norm() < 1e-3 {
                    driver_series_head(&stripmap::series_coeffs(&p, 8), zv)
                } else {
                    (stripmap::eval_p(&p, z) - 1.0) / zv
                };
                let pv = stripmap::eval_p(&p, z);
                q_minus_1_over_z + stripmap::eval_p_prime(&p, z) / pv
            }
            ClosedPreSchwarzian::ExtremalRotated(p) => {
                let q = rotated_driver_eval(&p, z);
                let q_minus_1_over_z = if zv.norm() < 1e-3 {
                    driver_series_head(&rotated_driver_coeffs(&p, 8), zv)
                } else {
                    (q - 1.0) / zv
                };
                q_minus_1_over_z + rotated_driver_prime(&p, z) / q
            }
        }
    }
}

/// Head of sum p_n z^{n-1}, used for (Q(z)-1)/z near the origin.
fn driver_series_head(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Q(z) = 1 + ((beta-alpha) i / pi) log((1 - e^{i phi} z)/(1 - e^{-i phi} z)).
pub fn rotated_driver_eval(p: &StripParams, z: DiscPoint) -> Complex64 {
    let zv = z.get();
    let e = p.rotation();
    // both factors have positive real part, so the principal branch agrees
    // with the analytic branch vanishing at 0
    let ratio = (1.0 - e * zv) / (1.0 - e.conj() * zv);
    let log = principal_log(ratio).expect("nonzero on the open disc");
    1.0 + Complex64::new(0.0, p.width() / PI) * log
}

/// Q'(z) = ((beta-alpha) i / pi)(e^{-i phi} - e^{i phi}) /
///         ((1 - e^{i phi} z)(1 - e^{-i phi} z)).
pub fn rotated_driver_prime(p: &StripParams, z: DiscPoint) -> Complex64 {
    let zv = z.get();
    let e = p.rotation();
    Complex64::new(0.0, p.width() / PI) * (e.conj() - e)
        / ((1.0 - e * zv) * (1.0 - e.conj() * zv))
}

/// Maclaurin coefficients q_n = (2(beta-alpha)/pi) sin(n phi) / n of Q - 1.
pub fn rotated_driver_coeffs(p: &StripParams, n_max: usize) -> Vec<Complex64> {
    let c = 2.0 * p.width() / PI;
    (1..=n_max)
        .map(|n| Complex64::new(c * (p.phi() * n as f64).sin() / n as f64, 0.0))
        .collect()
}

#[derive(Debug, Clone)]
enum Repr {
    Catalog(CatalogName),
    Series {
        /// a_1..a_N of f(z) = sum a_n z^n, a_1 = 1.
        coeffs: Vec<Complex64>,
        closed_t: Option<ClosedPreSchwarzian>,
        params: Option<StripParams>,
    },
}

#[derive(Debug, Clone)]
pub struct AnalyticModel {
    kind: String,
    repr: Repr,
}

impl AnalyticModel {
    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn params(&self) -> Option<StripParams> {
        match &self.repr {
            Repr::Series { params, .. } => *params,
            Repr::Catalog(_) => None,
        }
    }

    pub fn n_terms(&self) -> usize {
        match &self.repr {
            Repr::Series { coeffs, .. } => coeffs.len(),
            Repr::Catalog(_) => 0,
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        match &self.repr {
            Repr::Series { coeffs, .. } => coeffs,
            Repr::Catalog(_) => &[],
        }
    }

    pub fn closed_pre_schwarzian(&self) -> Option<&ClosedPreSchwarzian> {
        match &self.repr {
            Repr::Catalog(name) => Some(match name {
                CatalogName::Identity => &ClosedPreSchwarzian::Zero,
                CatalogName::Koebe => &ClosedPreSchwarzian::Koebe,
                CatalogName::Cayley => &ClosedPreSchwarzian::Cayley,
                CatalogName::Exp => &ClosedPreSchwarzian::One,
            }),
            Repr::Series { closed_t, .. } => closed_t.as_ref(),
        }
    }

    pub fn certified_radius(&self) -> f64 {
        match &self.repr {
            Repr::Catalog(_) => 1.0,
            Repr::Series { .. } => MAX_SERIES_RADIUS,
        }
    }

    fn check_radius(&self, z: DiscPoint) -> Result<()> {
        let r = z.get().norm();
        let cert = self.certified_radius();
        if r > cert {
            Err(Error::TruncationBudget {
                radius: r,
                certified: cert,
            })
        } else {
            Ok(())
        }
    }

    pub fn eval_f(&self, z: DiscPoint) -> Result<Complex64> {
        self.check_radius(z)?;
        let zv = z.get();
        Ok(match &self.repr {
            Repr::Catalog(CatalogName::Identity) => zv,
            Repr::Catalog(CatalogName::Koebe) => zv / ((1.0 - zv) * (1.0 - zv)),
            Repr::Catalog(CatalogName::Cayley) => zv / (1.0 - zv),
            Repr::Catalog(CatalogName::Exp) => zv.exp() - 1.0,
            Repr::Series { coeffs, .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in coeffs.iter().rev() {
                    acc = acc * zv + a;
                }
                acc * zv
            }
        })
    }

    pub fn eval_f1(&self, z: DiscPoint) -> Result<Complex64> {
        self.check_radius(z)?;
        let zv = z.get();
        Ok(match &self.repr {
            Repr::Catalog(CatalogName::Identity) => Complex64::new(1.0, 0.0),
            Repr::Catalog(CatalogName::Koebe) => (1.0 + zv) / (1.0 - zv).powi(3),
            Repr::Catalog(CatalogName::Cayley) => 1.0 / ((1.0 - zv) * (1.0 - zv)),
            Repr::Catalog(CatalogName::Exp) => zv.exp(),
            Repr::Series { coeffs, .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (n, a) in coeffs.iter().enumerate().rev() {
                    acc = acc * zv + (n + 1) as f64 * a;
                }
                acc
            }
        })
    }

    pub fn eval_f2(&self, z: DiscPoint) -> Result<Complex64> {
        self.check_radius(z)?;
        let zv = z.get();
        Ok(match &self.repr {
            Repr::Catalog(CatalogName::Identity) => Complex64::new(0.0, 0.0),
            Repr::Catalog(CatalogName::Koebe) => (4.0 + 2.0 * zv) / (1.0 - zv).powi(4),
            Repr::Catalog(CatalogName::Cayley) => 2.0 / (1.0 - zv).powi(3),
            Repr::Catalog(CatalogName::Exp) => zv.exp(),
            Repr::Series { coeffs, .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (n, a) in coeffs.iter().enumerate().rev().take_while(|(n, _)| *n >= 1) {
                    let k = (n + 1) as f64;
                    acc = acc * zv + k * (k - 1.0) * a;
                }
                acc
            }
        })
    }
}

/// Catalog lookup by name.
pub fn catalog(name: &str) -> Result<AnalyticModel> {
    let cn = CatalogName::parse(name)?;
    Ok(AnalyticModel {
        kind: cn.name().to_string(),
        repr: Repr::Catalog(cn),
    })
}

/// Number of terms needed at `radius`: starts at the default and doubles
/// while the driver tail bound stays above 1e-8, capped.
pub fn auto_n_terms(p: &StripParams, radius: f64) -> usize {
    let c = 2.0 * p.width() / PI;
    let mut n = DEFAULT_N_TERMS;
    while n < MAX_N_TERMS {
        let tail = c * radius.powi(n as i32 + 1) / ((n + 1) as f64 * (1.0 - radius));
        if tail < 1e-8 {
            break;
        }
        n *= 2;
    }
    n
}

/// Solve (n-1) a_n = sum_{k=1}^{n-1} d_k a_{n-k}, a_1 = 1, i.e. the
/// coefficient form of z f'/f = 1 + sum d_k z^k.
fn series_from_driver(drivers: &[Complex64], n_terms: usize) -> Vec<Complex64> {
    let mut a = Vec::with_capacity(n_terms);
    a.push(Complex64::new(1.0, 0.0));
    for n in 2..=n_terms {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 1..n {
            s += drivers[k - 1] * a[n - k - 1];
        }
        a.push(s / (n - 1) as f64);
    }
    a
}

/// The extremal function of S(alpha,beta): z f'/f = P(z).
pub fn extremal_s(p: &StripParams, n_terms: usize) -> AnalyticModel {
    let drivers = stripmap::series_coeffs(p, n_terms.saturating_sub(1).max(1));
    AnalyticModel {
        kind: "extremal".to_string(),
        repr: Repr::Series {
            coeffs: series_from_driver(&drivers, n_terms),
            closed_t: Some(ClosedPreSchwarzian::ExtremalS(*p)),
            params: Some(*p),
        },
    }
}

/// The rotated extremal: z f'/f = Q(z) with the real driver
/// q_k = (2(beta-alpha)/pi) sin(k phi)/k.
pub fn extremal_s_rotated(p: &StripParams, n_terms: usize) -> AnalyticModel {
    let drivers = rotated_driver_coeffs(p, n_terms.saturating_sub(1).max(1));
    AnalyticModel {
        kind: "extremal-rotated".to_string(),
        repr: Repr::Series {
            coeffs: series_from_driver(&drivers, n_terms),
            closed_t: Some(ClosedPreSchwarzian::ExtremalRotated(*p)),
            params: Some(*p),
        },
    }
}

/// Damping factor for the Schwarz function behind [`sample_v_member`]:
/// the largest c in the halving ladder from 1/2 with
/// sum_k |p_k| c^k / (2k - 1) <= 0.8, which keeps |z/f| >= 0.2 on the
/// closed disc and the reciprocal series well conditioned.
pub fn v_sample_damping(p: &StripParams, n_terms: usize) -> f64 {
    let p_coeffs = stripmap::series_coeffs(p, (n_terms.saturating_sub(1) / 2).max(1));
    let mut c = 0.5f64;
    loop {
        let mut sum = 0.0;
        let mut ck = 1.0;
        for (k, pk) in p_coeffs.iter().enumerate() {
            ck *= c;
            sum += pk.norm() * ck / (2 * (k + 1) - 1) as f64;
            if sum > 0.8 {
                break;
            }
        }
        if sum <= 0.8 || c <= 1e-3 {
            return c;
        }
        c *= 0.5;
    }
}

/// A member of V(alpha,beta) built from the Schwarz function w(z) = c z^2:
/// with g = z/f, the defining identity (z/f)^2 f' = P(c z^2) reduces to
/// g - z g' = P(c z^2), solved by b_{2k} = c^k p_k / (1 - 2k) and odd
/// b_n = 0; f = z/g by power-series reciprocal. The undamped w(z) = z^2
/// makes g vanish inside the disc for most parameters, so c is picked by
/// [`v_sample_damping`].
pub fn sample_v_member(p: &StripParams, n_terms: usize) -> Result<AnalyticModel> {
    let n_g = n_terms.saturating_sub(1);
    let p_coeffs = stripmap::series_coeffs(p, n_g / 2);
    let c_damp = v_sample_damping(p, n_terms);
    // g = 1 + sum b_n z^n
    let mut b = vec![Complex64::new(0.0, 0.0); n_g + 1];
    b[0] = Complex64::new(1.0, 0.0);
    let mut ck = 1.0;
    for (k, pk) in p_coeffs.iter().enumerate() {
        ck *= c_damp;
        let n = 2 * (k + 1);
        if n <= n_g {
            b[n] = ck * pk / (1.0 - n as f64);
        }
    }
    // reciprocal: c_0 = 1, c_n = -sum_{j=1}^{n} b_j c_{n-j}
    let mut c = vec![Complex64::new(0.0, 0.0); n_g + 1];
    c[0] = Complex64::new(1.0, 0.0);
    for n in 1..=n_g {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 1..=n {
            s += b[j] * c[n - j];
        }
        c[n] = -s;
    }
    // guard against g vanishing inside the certified radius
    for &r in &[0.5, 0.9, 0.99, 0.999, MAX_SERIES_RADIUS] {
        for j in 0..256 {
            let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 256.0);
            let mut g = Complex64::new(0.0, 0.0);
            for bn in b.iter().rev() {
                g = g * z + bn;
            }
            if g.norm() < 1e-6 {
                return Err(Error::Construction(format!(
                    "z/f(z) nearly vanishes at z = {z}; reciprocal series is unreliable"
                )));
            }
        }
    }
    Ok(AnalyticModel {
        kind: "v-sample".to_string(),
        repr: Repr::Series {
            coeffs: c,
            closed_t: None,
            params: Some(*p),
        },
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MembershipReport {
    pub class_name: String,
    pub alpha: f64,
    pub beta: f64,
    pub grid: GridSpec,
    pub verdict: bool,
    /// Signed distance of the worst Re-value to the nearest strip boundary;
    /// negative means a violation.
    pub worst_margin: f64,
    /// [re, im] of the grid point realizing the worst margin.
    pub worst_point: (f64, f64),
}

fn membership_scan<F>(
    class_name: &str,
    p: &StripParams,
    grid: &GridSpec,
    quantity: F,
) -> Result<MembershipReport>
where
    F: Fn(DiscPoint) -> Result<Complex64>,
{
    // the defining quantity tends to 1 at the origin
    let mut worst_margin = (1.0 - p.alpha()).min(p.beta() - 1.0);
    let mut worst_point = Complex64::new(0.0, 0.0);
    for r in grid.radii() {
        for theta in grid.thetas() {
            let z = DiscPoint::from_polar(r, theta)?;
            let q = quantity(z)?;
            let margin = (q.re - p.alpha()).min(p.beta() - q.re);
            if margin < worst_margin {
                worst_margin = margin;
                worst_point = z.get();
            }
        }
    }
    Ok(MembershipReport {
        class_name: class_name.to_string(),
        alpha: p.alpha(),
        beta: p.beta(),
        grid: *grid,
        verdict: worst_margin > 0.0,
        worst_margin,
        worst_point: (worst_point.re, worst_point.im),
    })
}

/// Grid check of alpha < Re(z f'/f) < beta.
pub fn check_membership_s(
    model: &AnalyticModel,
    p: &StripParams,
    grid: &GridSpec,
) -> Result<MembershipReport> {
    let name = format!("S({},{})", p.alpha(), p.beta());
    membership_scan(&name, p, grid, |z| {
        let f = model.eval_f(z)?;
        if f.norm() < 1e-14 {
            return Err(Error::Singularity {
                z: z.get(),
                abs: f.norm(),
            });
        }
        Ok(z.get() * model.eval_f1(z)? / f)
    })
}

/// Grid check of alpha < Re((z/f)^2 f') < beta.
pub fn check_membership_v(
    model: &AnalyticModel,
    p: &StripParams,
    grid: &GridSpec,
) -> Result<MembershipReport> {
    let name = format!("V({},{})", p.alpha(), p.beta());
    membership_scan(&name, p, grid, |z| {
        let f = model.eval_f(z)?;
        if f.norm() < 1e-14 {
            return Err(Error::Singularity {
                z: z.get(),
                abs: f.norm(),
            });
        }
        let ratio = z.get() / f;
        Ok(ratio * ratio * model.eval_f1(z)?)
    })
}

/// Reproducible JSON form of a model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDoc {
    pub kind: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub n_terms: usize,
    pub coefficients: Vec<(f64, f64)>,
}

impl AnalyticModel {
    pub fn to_doc(&self) -> ModelDoc {
        ModelDoc {
            kind: self.kind.clone(),
            alpha: self.params().map(|p| p.alpha()),
            beta: self.params().map(|p| p.beta()),
            n_terms: self.n_terms(),
            coefficients: self
                .coefficients()
                .iter()
                .map(|c| (c.re, c.im))
                .collect(),
        }
    }

    pub fn from_doc(doc: &ModelDoc) -> Result<AnalyticModel> {
        if doc.coefficients.is_empty() {
            // catalog documents round-trip through the name
            return catalog(&doc.kind);
        }
        let params = match (doc.alpha, doc.beta) {
            (Some(a), Some(b)) => Some(StripParams::new(a, b)?),
            _ => None,
        };
        let coeffs: Vec<Complex64> = doc
            .coefficients
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect();
        if (coeffs[0] - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::Construction(
                "series must be normalized (a_1 = 1)".into(),
            ));
        }
        let closed_t = match (doc.kind.as_str(), params) {
            ("extremal", Some(p)) => Some(ClosedPreSchwarzian::ExtremalS(p)),
            ("extremal-rotated", Some(p)) => Some(ClosedPreSchwarzian::ExtremalRotated(p)),
            _ => None,
        };
        Ok(AnalyticModel {
            kind: doc.kind.clone(),
            repr: Repr::Series {
                coeffs,
                closed_t,
                params,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dp(re: f64, im: f64) -> DiscPoint {
        DiscPoint::new(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn catalog_anchors() {
        let k = catalog("koebe").unwrap();
        assert_eq!(k.eval_f(dp(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(k.eval_f1(dp(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(k.eval_f2(dp(0.0, 0.0)).unwrap(), Complex64::new(4.0, 0.0));
        let t = k.closed_pre_schwarzian().unwrap().eval(dp(0.5, 0.0));
        assert!((t - Complex64::new(20.0 / 3.0, 0.0)).norm() < 1e-14);

        let c = catalog("cayley").unwrap();
        let t = c.closed_pre_schwarzian().unwrap().eval(dp(0.0, 0.0));
        assert!((t - Complex64::new(2.0, 0.0)).norm() < 1e-15);

        let id = catalog("identity").unwrap();
        assert_eq!(id.eval_f2(dp(0.3, 0.2)).unwrap(), Complex64::new(0.0, 0.0));

        assert!(catalog("nope").is_err());
    }

    #[test]
    fn extremal_second_coefficient() {
        let p = StripParams::new(0.0, 2.0).unwrap();
        let m = extremal_s(&p, 8);
        // a_2 = ((beta-alpha) i / pi)(1 - e^{i phi}) = 4i/pi here
        let a2 = m.coefficients()[1];
        assert!((a2 - Complex64::new(0.0, 4.0 / PI)).norm() < 1e-15);
        // f''(0)/2 = a_2
        let f2 = m.eval_f2(dp(0.0, 0.0)).unwrap();
        assert!((f2 / 2.0 - a2).norm() < 1e-15);
    }

    #[test]
    fn extremal_satisfies_defining_identity() {
        let p = StripParams::new(0.25, 4.0).unwrap();
        let m = extremal_s(&p, auto_n_terms(&p, 0.9));
        for &(re, im) in &[(0.5, 0.0), (0.2, -0.6), (-0.85, 0.1), (0.0, 0.9)] {
            let z = dp(re, im);
            let f = m.eval_f(z).unwrap();
            let f1 = m.eval_f1(z).unwrap();
            let residual = (z.get() * f1 - stripmap::eval_p(&p, z) * f).norm();
            assert!(residual < 1e-8, "residual {residual} at {re}+{im}i");
        }
    }

    #[test]
    fn rotated_driver_is_real_and_kills_a2_at_phi_pi() {
        let p = StripParams::new(0.0, 2.0).unwrap();
        let m = extremal_s_rotated(&p, 8);
        assert!(m.coefficients()[1].norm() < 1e-15); // sin(pi) = 0

        let p = StripParams::new(0.5, 2.0).unwrap();
        let m = extremal_s_rotated(&p, 8);
        let expect = 1.5 / PI * 2.0 * (2.0 * PI / 3.0).sin();
        assert!((m.coefficients()[1] - Complex64::new(expect, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn v_sample_coefficients() {
        let p = StripParams::new(0.0, 2.0).unwrap();
        let m = sample_v_member(&p, 64).unwrap();
        // a_1 = 1; g's b_1 = 0 forces a_2 = -b_1 = 0
        assert!((m.coefficients()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(m.coefficients()[1].norm() < 1e-15);
    }

    #[test]
    fn v_sample_defining_identity() {
        let p = StripParams::new(0.0, 2.0).unwrap();
        let n = auto_n_terms(&p, 0.9);
        let m = sample_v_member(&p, n).unwrap();
        let c = v_sample_damping(&p, n);
        for &(re, im) in &[(0.5, 0.0), (0.3, 0.6), (-0.8, -0.2)] {
            let z = dp(re, im);
            let f = m.eval_f(z).unwrap();
            let ratio = z.get() / f;
            let lhs = ratio * ratio * m.eval_f1(z).unwrap();
            let w = DiscPoint::new(c * z.get() * z.get()).unwrap();
            let rhs = stripmap::eval_p(&p, w);
            assert!((lhs - rhs).norm() < 1e-8);
        }
    }

    #[test]
    fn membership_anchors() {
        let p = StripParams::new(0.0, 2.0).unwrap();
        let grid = GridSpec::new(5, 32, 0, 0.5).unwrap();

        let id = catalog("identity").unwrap();
        assert!(check_membership_s(&id, &p, &grid).unwrap().verdict);
        assert!(check_membership_v(&id, &p, &grid).unwrap().verdict);

        // Re(z k'/k) = Re((1+z)/(1-z)) is unbounded above
        let grid_deep = GridSpec::new(7, 32, 0, 0.5).unwrap();
        let koebe = catalog("koebe").unwrap();
        let rep = check_membership_s(&koebe, &p, &grid_deep).unwrap();
        assert!(!rep.verdict);
        assert!(rep.worst_margin < 0.0);

        // (z/f)^2 f' = 1 identically for z/(1-z)
        let cayley = catalog("cayley").unwrap();
        assert!(check_membership_v(&cayley, &p, &grid).unwrap().verdict);

        let v = sample_v_member(&p, 512).unwrap();
        assert!(check_membership_v(&v, &p, &grid).unwrap().verdict);
    }

    #[test]
    fn truncation_budget_enforced() {
        let p = StripParams::new(0.0, 2.0).unwrap();
        let m = extremal_s(&p, 64);
        let z = dp(0.9999, 0.0);
        assert!(matches!(
            m.eval_f(z),
            Err(Error::TruncationBudget { .. })
        ));
    }

    #[test]
    fn model_doc_round_trip() {
        let p = StripParams::new(0.5, 2.0).unwrap();
        let m = extremal_s(&p, 32);
        let doc = m.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let back: ModelDoc = serde_json::from_str(&json).unwrap();
        let m2 = AnalyticModel::from_doc(&back).unwrap();
        let z = dp(0.4, 0.3);
        assert_eq!(m.eval_f(z).unwrap(), m2.eval_f(z).unwrap());
        assert_eq!(m2.kind(), "extremal");
        assert!(m2.closed_pre_schwarzian().is_some());
    }
}
