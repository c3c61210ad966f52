//! Numerics for the hyperbolic sup-norm ||f|| = sup (1-|z|^2)|f''/f'| of
//! analytic functions on the unit disc, built around the conformal map of
//! the disc onto a vertical strip and the associated starlike classes.

pub mod error;
pub mod functions;
pub mod grid;
pub mod kernel;
pub mod norm;
pub mod stripmap;

pub use error::{Error, Result};
pub use functions::{AnalyticModel, MembershipReport, ModelDoc};
pub use grid::GridSpec;
pub use kernel::DiscPoint;
pub use norm::{BoundReport, FinitenessReport, NormEstimate, SharpnessReport};
pub use stripmap::StripParams;
