//! Polar discretization of the disc used by the norm estimator and the
//! membership checks: radii 1 - 2^{-k} accumulating at the boundary,
//! uniformly spaced angles, optional nested refinement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Number of radius levels K; radii are r_k = 1 - 2^{-k}, k = 1..=K.
    pub radius_levels: usize,
    /// Angles per circle M; theta_j = 2 pi j / M.
    pub angles: usize,
    /// Local refinement rounds around the running argmax.
    pub refine_rounds: usize,
    /// Extent shrink factor per refinement round, in (0, 1).
    pub refine_shrink: f64,
}

impl GridSpec {
    pub fn new(
        radius_levels: usize,
        angles: usize,
        refine_rounds: usize,
        refine_shrink: f64,
    ) -> Result<Self> {
        if radius_levels < 1 {
            return Err(Error::Grid("radius_levels must be >= 1".into()));
        }
        if angles < 8 {
            return Err(Error::Grid("angles must be >= 8".into()));
        }
        if !(refine_shrink > 0.0 && refine_shrink < 1.0) {
            return Err(Error::Grid("refine_shrink must lie in (0, 1)".into()));
        }
        Ok(GridSpec {
            radius_levels,
            angles,
            refine_rounds,
            refine_shrink,
        })
    }

    pub fn radius(&self, level: usize) -> f64 {
        1.0 - 0.5f64.powi(level as i32)
    }

    /// Largest radius of the base grid; refinement never goes beyond it.
    pub fn max_radius(&self) -> f64 {
        self.radius(self.radius_levels)
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.radius_levels).map(|k| self.radius(k))
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        let m = self.angles;
        (0..m).map(move |j| 2.0 * std::f64::consts::PI * j as f64 / m as f64)
    }

    pub fn base_points(&self) -> usize {
        self.radius_levels * self.angles + 1 // + the origin
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            radius_levels: 10,
            angles: 128,
            refine_rounds: 3,
            refine_shrink: 0.5,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GridSpec::new(0, 128, 3, 0.5).is_err());
        assert!(GridSpec::new(10, 4, 3, 0.5).is_err());
        assert!(GridSpec::new(10, 128, 3, 1.0).is_err());
        assert!(GridSpec::new(12, 256, 3, 0.5).is_ok());
    }

    #[test]
    fn radii_accumulate_at_boundary() {
        let g = GridSpec::default();
        let radii: Vec<f64> = g.radii().collect();
        assert_eq!(radii.len(), 10);
        assert!((radii[0] - 0.5).abs() < 1e-15);
        assert!(g.max_radius() < 1.0);
        assert!(radii.windows(2).all(|w| w[0] < w[1]));
    }
}
