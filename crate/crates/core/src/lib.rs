//! Equilibrium solver for a two-outcome parimutuel wagering game.
//!
//! The market is populated by a continuum of *diffuse* bettors, each holding a
//! negligible amount of wealth, together with a single *atomic* bettor whose
//! wagers move the pool. Diffuse wealth is described by a [`BeliefMeasure`]
//! over beliefs `p ∈ [0, 1]` that Outcome 1 occurs.
//!
//! The equilibrium is computed as the unique fixed point of the implied
//! probability map (see [`equilibrium`]), from which the full strategy profile
//! is reconstructed. [`metrics`] turns an equilibrium into market statistics,
//! [`stackelberg`] optimises the house take, and [`oracle`] provides a
//! brute-force finite-population check of the continuum solver.
//!
//! ```
//! use parimutuel_core::{equilibrium, BeliefMeasure, MarketParams};
//!
//! let measure = BeliefMeasure::uniform();
//! let params = MarketParams::new(0.8, 0.5, 1.0).unwrap();
//! let eq = equilibrium::solve(&params, &measure, 1e-10).unwrap();
//! assert!((eq.p_star - 0.5).abs() < 1e-9);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod equilibrium;
mod error;
pub mod measure;
pub mod metrics;
pub mod numeric;
pub mod oracle;
pub mod response;
pub mod stackelberg;

pub use equilibrium::{Equilibrium, PhiContext};
pub use error::{Error, Result};
pub use measure::{BeliefMeasure, MeasureSpec};
pub use metrics::MarketReport;
pub use response::{AtomicBet, DiffuseAggregate, DiffuseThresholds, MarketParams};
pub use stackelberg::TakeOptimum;

/// Lower end of the house-take sweep domain in `κ`.
pub const KAPPA_MIN: f64 = 0.5 + 1e-4;
/// Upper end of the house-take sweep domain in `κ`.
pub const KAPPA_MAX: f64 = 1.0 - 1e-4;
/// Default fixed-point tolerance.
pub const DEFAULT_FP_TOL: f64 = 1e-10;
