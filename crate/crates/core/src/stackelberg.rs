//! Revenue-maximising choice of the house take.
//!
//! The house moves first by fixing `κ`; bettors then play the equilibrium for
//! that `κ`. Revenue is not concave in `κ` in general and has kinks where the
//! atomic bettor hits her budget, so the search is a uniform grid followed by
//! golden-section refinement inside the best grid cell.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::solve;
use crate::measure::BeliefMeasure;
use crate::metrics::house_revenue;
use crate::numeric::golden_max;
use crate::response::MarketParams;
use crate::{Error, Result, KAPPA_MAX, KAPPA_MIN};

pub const DEFAULT_GRID_POINTS: usize = 256;
pub const DEFAULT_REFINE_TOL: f64 = 1e-5;
pub const MIN_GRID_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TakeOptimum {
    pub kappa_star: f64,
    pub revenue_star: f64,
    /// `(κ, revenue)` on the search grid, in increasing `κ`.
    pub profile: Vec<(f64, f64)>,
}

/// Equilibrium house revenue at retention `kappa`.
pub fn revenue_at(measure: &BeliefMeasure, q: f64, w: f64, kappa: f64, fp_tol: f64) -> Result<f64> {
    let params = MarketParams::new(kappa, q, w)?;
    let eq = solve(&params, measure, fp_tol)?;
    Ok(house_revenue(&eq, &params))
}

/// Uniform grid of `points` values spanning `[lo, hi]`.
pub fn kappa_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

pub fn optimize_take(
    measure: &BeliefMeasure,
    q: f64,
    w: f64,
    grid_points: usize,
    refine_tol: f64,
    fp_tol: f64,
) -> Result<TakeOptimum> {
    if grid_points < MIN_GRID_POINTS {
        return Err(Error::domain(format!(
            "take optimisation needs at least {MIN_GRID_POINTS} grid points, got {grid_points}"
        )));
    }
    let grid = kappa_grid(KAPPA_MIN, KAPPA_MAX, grid_points);
    let profile = grid
        .par_iter()
        .map(|&k| revenue_at(measure, q, w, k, fp_tol).map(|r| (k, r)))
        .collect::<Result<Vec<_>>>()?;

    let best = profile
        .iter()
        .enumerate()
        .fold(0, |b, (i, s)| if s.1 > profile[b].1 { i } else { b });
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (k_ref, r_ref) = golden_max(|k| revenue_at(measure, q, w, k, fp_tol), lo, hi, refine_tol)?;

    let (kappa_star, revenue_star) = if r_ref >= profile[best].1 {
        (k_ref, r_ref)
    } else {
        profile[best]
    };
    Ok(TakeOptimum {
        kappa_star,
        revenue_star,
        profile,
    })
}
