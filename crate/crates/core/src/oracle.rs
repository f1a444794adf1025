//! Finite-population cross-check of the continuum solver.
//!
//! The diffuse continuum is replaced by `N` bettors of equal wealth placed at
//! the mass-medians of `N` equal-mass cells of the measure. Best responses are
//! then iterated on the implied probability with damping until it settles.

use serde::{Deserialize, Serialize};

use crate::measure::BeliefMeasure;
use crate::numeric::bisect;
use crate::response::{atomic_best_response, AtomicBet, DiffuseAggregate, MarketParams};
use crate::{Error, Result};

pub const DEFAULT_DAMPING: f64 = 0.5;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITERS: usize = 10_000;

/// Tolerance on belief positions when inverting the cumulative mass.
const INVERSION_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePopulation {
    beliefs: Vec<f64>,
    wealths: Vec<f64>,
    /// `prefix[i]` = wealth of bettors `0..i`.
    prefix: Vec<f64>,
}

impl DiscretePopulation {
    pub fn new(beliefs: Vec<f64>, wealths: Vec<f64>) -> Result<Self> {
        if beliefs.is_empty() || beliefs.len() != wealths.len() {
            return Err(Error::domain(
                "population needs matching, non-empty beliefs and wealths",
            ));
        }
        if beliefs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("beliefs must be strictly increasing"));
        }
        if beliefs.iter().any(|b| !(0.0..=1.0).contains(b)) || wealths.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::domain(
                "beliefs must lie in [0, 1] and wealths be positive",
            ));
        }
        let mut prefix = Vec::with_capacity(wealths.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for w in &wealths {
            acc += w;
            prefix.push(acc);
        }
        Ok(DiscretePopulation {
            beliefs,
            wealths,
            prefix,
        })
    }

    pub fn len(&self) -> usize {
        self.beliefs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beliefs.is_empty()
    }

    pub fn beliefs(&self) -> &[f64] {
        &self.beliefs
    }

    pub fn wealths(&self) -> &[f64] {
        &self.wealths
    }

    pub fn total_wealth(&self) -> f64 {
        self.prefix[self.prefix.len() - 1]
    }

    /// Diffuse totals when everyone responds to implied probability `p`.
    /// Bettors exactly at a threshold abstain.
    pub fn totals_at(&self, p: f64, kappa: f64) -> DiffuseAggregate {
        let upper = p / kappa;
        let lower = 1.0 - (1.0 - p) / kappa;
        let first_above = self.beliefs.partition_point(|b| *b <= upper);
        let first_not_below = self.beliefs.partition_point(|b| *b < lower);
        DiffuseAggregate {
            d1: self.total_wealth() - self.prefix[first_above],
            d2: self.prefix[first_not_below],
        }
    }
}

/// Splits the measure into `n` equal-mass cells and places one bettor at each
/// cell's mass-median.
pub fn discretize(measure: &BeliefMeasure, n: usize) -> Result<DiscretePopulation> {
    if n < 2 {
        return Err(Error::domain(format!(
            "discretisation needs at least 2 bettors, got {n}"
        )));
    }
    let total = measure.total_mass();
    let share = total / n as f64;
    let beliefs = (0..n)
        .map(|i| {
            let target = (i as f64 + 0.5) * share;
            bisect(
                |x| Ok(measure.mass(0.0, x)? - target),
                0.0,
                1.0,
                INVERSION_TOL,
                f64::INFINITY,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    DiscretePopulation::new(beliefs, vec![share; n])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub p_approx: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Discrete diffuse totals at `p_approx`.
    pub diffuse: DiffuseAggregate,
    pub atomic: AtomicBet,
}

/// Damped best-response iteration on the implied probability, from `P = 0.5`.
///
/// Each round sets every discrete bettor's stake by the threshold rule at the
/// current `P`, the atomic bet by her best response to the discrete totals,
/// and moves `P` a fraction `λ` of the way to the resulting pool share. The
/// finite population makes that share a step function of `P`, so `λ` is halved
/// whenever the step direction reverses; the iteration then closes in on the
/// crossing point instead of cycling across it.
pub fn iterate_best_response(
    pop: &DiscretePopulation,
    params: &MarketParams,
    max_iters: usize,
    tol: f64,
) -> Result<OracleOutcome> {
    iterate_best_response_damped(pop, params, max_iters, tol, DEFAULT_DAMPING)
}

pub fn iterate_best_response_damped(
    pop: &DiscretePopulation,
    params: &MarketParams,
    max_iters: usize,
    tol: f64,
    damping: f64,
) -> Result<OracleOutcome> {
    if !(params.kappa > 0.5) {
        return Err(Error::NoEquilibrium {
            kappa: params.kappa,
        });
    }
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::domain(format!(
            "damping must lie in (0, 1], got {damping}"
        )));
    }
    let respond = |p: f64| -> Result<(DiffuseAggregate, AtomicBet, f64)> {
        let d = pop.totals_at(p, params.kappa);
        let a = if d.d1 > 0.0 && d.d2 > 0.0 {
            atomic_best_response(d, params)?
        } else {
            AtomicBet::NONE
        };
        let total = d.d1 + d.d2 + a.a1 + a.a2;
        let share = if total > 0.0 {
            (d.d1 + a.a1) / total
        } else {
            p
        };
        Ok((d, a, share))
    };

    let mut p = 0.5;
    let mut lambda = damping;
    let mut last_dir = 0.0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let (_, _, share) = respond(p)?;
        let diff = share - p;
        let dir = diff.signum();
        if diff != 0.0 && last_dir != 0.0 && dir != last_dir {
            lambda *= 0.5;
        }
        if diff != 0.0 {
            last_dir = dir;
        }
        let step = lambda * diff;
        p += step;
        if step.abs() < tol {
            converged = true;
            break;
        }
    }
    let (diffuse, atomic, _) = respond(p)?;
    Ok(OracleOutcome {
        p_approx: p,
        converged,
        iterations,
        diffuse,
        atomic,
    })
}
