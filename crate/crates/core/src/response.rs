//! Best responses of diffuse and atomic bettors to the rest of the market.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Slack allowed on the atomic budget constraint `a1 + a2 <= w`.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Exogenous market parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    /// Fraction of the pool paid back to winners; the house take is `1 - kappa`.
    pub kappa: f64,
    /// Atomic bettor's probability for Outcome 1.
    pub q: f64,
    /// Atomic bettor's budget.
    pub w: f64,
}

impl MarketParams {
    pub fn new(kappa: f64, q: f64, w: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::domain(format!(
                "kappa must lie in (0, 1), got {kappa}"
            )));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::domain(format!("q must lie in [0, 1], got {q}")));
        }
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::domain(format!("w must be positive, got {w}")));
        }
        Ok(MarketParams { kappa, q, w })
    }

    pub fn house_take(&self) -> f64 {
        1.0 - self.kappa
    }

    pub fn with_kappa(self, kappa: f64) -> Result<Self> {
        Self::new(kappa, self.q, self.w)
    }
}

/// Total diffuse wagers on each outcome.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DiffuseAggregate {
    pub d1: f64,
    pub d2: f64,
}

impl DiffuseAggregate {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        if !(d1 >= 0.0 && d2 >= 0.0) {
            return Err(Error::domain(format!(
                "diffuse totals must be nonnegative, got ({d1}, {d2})"
            )));
        }
        Ok(DiffuseAggregate { d1, d2 })
    }

    fn require_positive(&self) -> Result<()> {
        if !(self.d1 > 0.0 && self.d2 > 0.0) {
            return Err(Error::domain(format!(
                "atomic response needs positive diffuse totals, got ({}, {})",
                self.d1, self.d2
            )));
        }
        Ok(())
    }
}

/// The atomic bettor's wagers on Outcome 1 and Outcome 2.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AtomicBet {
    pub a1: f64,
    pub a2: f64,
}

impl AtomicBet {
    pub const NONE: AtomicBet = AtomicBet { a1: 0.0, a2: 0.0 };

    pub fn new(a1: f64, a2: f64, w: f64) -> Result<Self> {
        if !(a1 >= 0.0 && a2 >= 0.0) || a1 + a2 > w + FEASIBILITY_TOL {
            return Err(Error::domain(format!(
                "infeasible atomic bet ({a1}, {a2}) for budget {w}"
            )));
        }
        Ok(AtomicBet { a1, a2 })
    }

    pub fn total(&self) -> f64 {
        self.a1 + self.a2
    }
}

/// Belief cut points of the diffuse best response.
///
/// Bettors with belief strictly above `bet1_above` stake everything on
/// Outcome 1, those strictly below `bet2_below` stake everything on Outcome 2,
/// everyone else (including the two cut points themselves) abstains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffuseThresholds {
    pub bet1_above: f64,
    pub bet2_below: f64,
}

impl DiffuseThresholds {
    /// Fraction of wealth `(f1, f2)` a bettor with belief `p` places on each outcome.
    pub fn stake(&self, p: f64) -> (f64, f64) {
        let f1 = if p > self.bet1_above { 1.0 } else { 0.0 };
        let f2 = if p < self.bet2_below { 1.0 } else { 0.0 };
        (f1, f2)
    }
}

/// Share of the pool on Outcome 1.
pub fn implied_probability(d: DiffuseAggregate, a: AtomicBet) -> Result<f64> {
    let total = d.d1 + d.d2 + a.a1 + a.a2;
    if !(total > 0.0) {
        return Err(Error::EmptyPool);
    }
    Ok((d.d1 + a.a1) / total)
}

pub fn diffuse_best_response(implied: f64, kappa: f64) -> Result<DiffuseThresholds> {
    check_implied(implied)?;
    check_kappa(kappa)?;
    Ok(DiffuseThresholds {
        bet1_above: implied / kappa,
        bet2_below: 1.0 - (1.0 - implied) / kappa,
    })
}

/// Per-unit expected profit of a unit bet on each outcome for a bettor with belief `p`.
pub fn diffuse_unit_edge(p: f64, implied: f64, kappa: f64) -> Result<(f64, f64)> {
    check_implied(implied)?;
    Ok((
        kappa * p / implied - 1.0,
        kappa * (1.0 - p) / (1.0 - implied) - 1.0,
    ))
}

/// Atomic expected profit (under belief `q`) of betting `b` against diffuse totals `d`.
pub fn atomic_profit(b: AtomicBet, d: DiffuseAggregate, params: &MarketParams) -> Result<f64> {
    d.require_positive()?;
    Ok(atomic_profit_unchecked(b.a1, b.a2, d, params))
}

pub(crate) fn atomic_profit_unchecked(
    b1: f64,
    b2: f64,
    d: DiffuseAggregate,
    params: &MarketParams,
) -> f64 {
    let MarketParams { kappa, q, .. } = *params;
    let pool = b1 + d.d1 + b2 + d.d2;
    let mut profit = 0.0;
    if b1 > 0.0 {
        profit += b1 * (kappa * pool * q / (b1 + d.d1) - 1.0);
    }
    if b2 > 0.0 {
        profit += b2 * (kappa * pool * (1.0 - q) / (b2 + d.d2) - 1.0);
    }
    profit
}

/// Which outcome, if any, the atomic bettor backs against `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomicSide {
    Outcome1,
    Outcome2,
    Abstain,
}

pub fn atomic_side(d: DiffuseAggregate, params: &MarketParams) -> Result<AtomicSide> {
    d.require_positive()?;
    let MarketParams { kappa, q, .. } = *params;
    let total = d.d1 + d.d2;
    Ok(if q > d.d1 / (kappa * total) {
        AtomicSide::Outcome1
    } else if 1.0 - q > d.d2 / (kappa * total) {
        AtomicSide::Outcome2
    } else {
        AtomicSide::Abstain
    })
}

/// Unconstrained optimal stake `sqrt(k c d1 d2 / (1 - k c)) - own`, where `c`
/// is the believed probability of the backed outcome and `own` the diffuse
/// total already on it.
pub(crate) fn unconstrained_stake(kappa: f64, belief: f64, own: f64, d1: f64, d2: f64) -> f64 {
    let kb = kappa * belief;
    debug_assert!(kb < 1.0, "kappa * belief must stay below 1");
    (kb * d1 * d2 / (1.0 - kb)).sqrt() - own
}

/// Profit-maximising feasible atomic bet against diffuse totals `d`.
pub fn atomic_best_response(d: DiffuseAggregate, params: &MarketParams) -> Result<AtomicBet> {
    let MarketParams { kappa, q, w } = *params;
    Ok(match atomic_side(d, params)? {
        AtomicSide::Outcome1 => AtomicBet {
            a1: w
                .min(unconstrained_stake(kappa, q, d.d1, d.d1, d.d2))
                .max(0.0),
            a2: 0.0,
        },
        AtomicSide::Outcome2 => AtomicBet {
            a1: 0.0,
            a2: w
                .min(unconstrained_stake(kappa, 1.0 - q, d.d2, d.d1, d.d2))
                .max(0.0),
        },
        AtomicSide::Abstain => AtomicBet::NONE,
    })
}

fn check_implied(implied: f64) -> Result<()> {
    if !(implied > 0.0 && implied < 1.0) {
        return Err(Error::domain(format!(
            "implied probability must lie in (0, 1), got {implied}"
        )));
    }
    Ok(())
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::domain(format!(
            "kappa must lie in (0, 1), got {kappa}"
        )));
    }
    Ok(())
}
