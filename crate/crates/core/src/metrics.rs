//! Market statistics at an equilibrium.

use serde::{Deserialize, Serialize};

use crate::equilibrium::Equilibrium;
use crate::measure::BeliefMeasure;
use crate::response::MarketParams;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketReport {
    pub house_revenue: f64,
    /// Present only when an actual outcome probability was supplied.
    pub diffuse_actual_profit: Option<f64>,
    pub diffuse_subjective_profit: f64,
    pub atomic_subjective_profit: f64,
    pub pool_total: f64,
}

impl MarketReport {
    pub fn new(
        eq: &Equilibrium,
        params: &MarketParams,
        measure: &BeliefMeasure,
        p_actual: Option<f64>,
    ) -> Result<Self> {
        Ok(MarketReport {
            house_revenue: house_revenue(eq, params),
            diffuse_actual_profit: p_actual
                .map(|p| diffuse_actual_profit(eq, params, p))
                .transpose()?,
            diffuse_subjective_profit: diffuse_subjective_profit(eq, params, measure)?,
            atomic_subjective_profit: atomic_subjective_profit(eq, params),
            pool_total: eq.pool_total(),
        })
    }
}

/// The house keeps `1 - κ` of the whole pool, whatever the outcome.
pub fn house_revenue(eq: &Equilibrium, params: &MarketParams) -> f64 {
    params.house_take() * eq.pool_total()
}

/// Expected profit of wagers `(s1, s2)` when Outcome 1 has probability `p`
/// and pays at implied probability `implied`.
fn expected_profit(s1: f64, s2: f64, p: f64, implied: f64, kappa: f64) -> f64 {
    let mut v = 0.0;
    if s1 > 0.0 {
        v += s1 * (kappa * p / implied - 1.0);
    }
    if s2 > 0.0 {
        v += s2 * (kappa * (1.0 - p) / (1.0 - implied) - 1.0);
    }
    v
}

/// Total diffuse expected profit when Outcome 1 actually occurs with probability `p_actual`.
pub fn diffuse_actual_profit(
    eq: &Equilibrium,
    params: &MarketParams,
    p_actual: f64,
) -> Result<f64> {
    check_probability(p_actual)?;
    Ok(expected_profit(
        eq.d1_star,
        eq.d2_star,
        p_actual,
        eq.p_star,
        params.kappa,
    ))
}

/// Atomic expected profit under `p_actual`; counterpart of [`diffuse_actual_profit`].
pub fn atomic_actual_profit(eq: &Equilibrium, params: &MarketParams, p_actual: f64) -> Result<f64> {
    check_probability(p_actual)?;
    Ok(expected_profit(
        eq.atomic.a1,
        eq.atomic.a2,
        p_actual,
        eq.p_star,
        params.kappa,
    ))
}

/// Total diffuse expected profit, each bettor judged by her own belief.
pub fn diffuse_subjective_profit(
    eq: &Equilibrium,
    params: &MarketParams,
    measure: &BeliefMeasure,
) -> Result<f64> {
    let kappa = params.kappa;
    let p_star = eq.p_star;
    let upper = eq.thresholds.bet1_above.clamp(0.0, 1.0);
    let lower = eq.thresholds.bet2_below.clamp(0.0, 1.0);
    let on1 = measure.integrate(|p| kappa * p / p_star - 1.0, upper, 1.0)?;
    let on2 = measure.integrate(|p| kappa * (1.0 - p) / (1.0 - p_star) - 1.0, 0.0, lower)?;
    Ok(on1 + on2)
}

/// Atomic expected profit under her own belief `q`.
pub fn atomic_subjective_profit(eq: &Equilibrium, params: &MarketParams) -> f64 {
    expected_profit(
        eq.atomic.a1,
        eq.atomic.a2,
        params.q,
        eq.p_star,
        params.kappa,
    )
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "actual probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}
