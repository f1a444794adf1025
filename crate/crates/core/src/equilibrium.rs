//! Equilibrium computation through the implied-probability map.
//!
//! For a candidate implied probability `p ∈ [1-κ, κ]`, diffuse bettors respond
//! with the threshold rule and the atomic bettor with her best response to the
//! resulting diffuse totals. Recomputing the pool share on Outcome 1 from those
//! wagers gives `φ(p)`. The map is continuous and decreasing with `φ(1-κ) = 1`
//! and `φ(κ) = 0`, so it has exactly one fixed point, located here by bisection.
//! The equilibrium strategy profile is then read off that fixed point.

use serde::{Deserialize, Serialize};

use crate::measure::BeliefMeasure;
use crate::numeric::bisect;
use crate::response::{
    atomic_best_response, diffuse_best_response, implied_probability, unconstrained_stake,
    AtomicBet, DiffuseAggregate, DiffuseThresholds, MarketParams,
};
use crate::{Error, Result};

/// A solved market.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    /// Implied probability of Outcome 1.
    pub p_star: f64,
    pub d1_star: f64,
    pub d2_star: f64,
    pub atomic: AtomicBet,
    pub thresholds: DiffuseThresholds,
    /// `|φ(p_star) - p_star|`.
    pub residual: f64,
}

impl Equilibrium {
    pub fn diffuse(&self) -> DiffuseAggregate {
        DiffuseAggregate {
            d1: self.d1_star,
            d2: self.d2_star,
        }
    }

    /// Total amount in the pool.
    pub fn pool_total(&self) -> f64 {
        self.d1_star + self.d2_star + self.atomic.a1 + self.atomic.a2
    }
}

/// Everything needed to evaluate `φ` for one market, with the atomic
/// switching points `p̄₁`, `p̄₂` precomputed.
#[derive(Debug, Clone)]
pub struct PhiContext<'a> {
    params: MarketParams,
    measure: &'a BeliefMeasure,
    pbar1: f64,
    pbar2: f64,
    fp_tol: f64,
}

impl<'a> PhiContext<'a> {
    pub fn new(params: MarketParams, measure: &'a BeliefMeasure, fp_tol: f64) -> Result<Self> {
        if !(params.kappa > 0.5) {
            return Err(Error::NoEquilibrium {
                kappa: params.kappa,
            });
        }
        if !(fp_tol > 0.0) {
            return Err(Error::domain(format!(
                "fixed-point tolerance must be positive, got {fp_tol}"
            )));
        }
        let mut ctx = PhiContext {
            params,
            measure,
            pbar1: params.kappa,
            pbar2: 1.0 - params.kappa,
            fp_tol,
        };
        ctx.pbar1 = compute_pbar1(&ctx)?;
        ctx.pbar2 = compute_pbar2(&ctx)?;
        Ok(ctx)
    }

    pub fn params(&self) -> &MarketParams {
        &self.params
    }

    pub fn measure(&self) -> &BeliefMeasure {
        self.measure
    }

    /// Implied probability above which the atomic bettor backs Outcome 1.
    pub fn pbar1(&self) -> f64 {
        self.pbar1
    }

    /// Implied probability below which the atomic bettor backs Outcome 2.
    pub fn pbar2(&self) -> f64 {
        self.pbar2
    }

    /// The interval `[1-κ, κ]` where every candidate implied probability lives.
    pub fn domain(&self) -> (f64, f64) {
        (1.0 - self.params.kappa, self.params.kappa)
    }

    fn check_domain(&self, p: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&p) {
            return Err(Error::domain(format!(
                "implied probability {p} outside [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    /// Diffuse wealth on Outcome 1 when the implied probability is `p`: `μ(p/κ, 1]`.
    pub fn d1_of(&self, p: f64) -> Result<f64> {
        self.check_domain(p)?;
        self.measure.mass((p / self.params.kappa).min(1.0), 1.0)
    }

    /// Diffuse wealth on Outcome 2: `μ[0, 1 - (1-p)/κ)`.
    pub fn d2_of(&self, p: f64) -> Result<f64> {
        self.check_domain(p)?;
        self.measure
            .mass(0.0, (1.0 - (1.0 - p) / self.params.kappa).max(0.0))
    }

    fn diffuse_at(&self, p: f64) -> Result<(f64, f64)> {
        Ok((self.d1_of(p)?, self.d2_of(p)?))
    }

    /// Unconstrained atomic stake on Outcome 1, defined on `[p̄₁, κ]`.
    pub fn zeta1(&self, p: f64) -> Result<f64> {
        if !(self.pbar1..=self.params.kappa).contains(&p) {
            return Err(Error::domain(format!(
                "zeta1 is defined on [{}, {}], got {p}",
                self.pbar1, self.params.kappa
            )));
        }
        let (d1, d2) = self.diffuse_at(p)?;
        Ok(unconstrained_stake(self.params.kappa, self.params.q, d1, d1, d2).max(0.0))
    }

    /// Unconstrained atomic stake on Outcome 2, defined on `[1-κ, p̄₂]`.
    pub fn zeta2(&self, p: f64) -> Result<f64> {
        if !(1.0 - self.params.kappa..=self.pbar2).contains(&p) {
            return Err(Error::domain(format!(
                "zeta2 is defined on [{}, {}], got {p}",
                1.0 - self.params.kappa,
                self.pbar2
            )));
        }
        let (d1, d2) = self.diffuse_at(p)?;
        Ok(unconstrained_stake(self.params.kappa, 1.0 - self.params.q, d2, d1, d2).max(0.0))
    }

    /// The implied-probability map.
    pub fn phi(&self, p: f64) -> Result<f64> {
        self.check_domain(p)?;
        let w = self.params.w;
        let (d1, d2) = self.diffuse_at(p)?;
        if p < self.pbar2 {
            let a2 = w.min(self.zeta2(p)?);
            Ok(d1 / (a2 + d1 + d2))
        } else if p <= self.pbar1 {
            Ok(d1 / (d1 + d2))
        } else {
            let a1 = w.min(self.zeta1(p)?);
            Ok((a1 + d1) / (a1 + d1 + d2))
        }
    }

    /// Bisects `φ(p) - p` between `from` and `to` (either orientation).
    pub fn fixed_point_between(&self, from: f64, to: f64) -> Result<f64> {
        bisect(|p| Ok(self.phi(p)? - p), from, to, self.fp_tol, self.fp_tol)
    }

    pub fn fixed_point(&self) -> Result<f64> {
        let (lo, hi) = self.domain();
        self.fixed_point_between(lo, hi)
    }

    /// Rebuilds the full strategy profile at a fixed point of `φ`.
    pub fn reconstruct(&self, p_star: f64) -> Result<Equilibrium> {
        let (d1, d2) = self.diffuse_at(p_star)?;
        let diffuse = DiffuseAggregate::new(d1, d2)?;
        let atomic = atomic_best_response(diffuse, &self.params)?;
        Ok(Equilibrium {
            p_star,
            d1_star: d1,
            d2_star: d2,
            atomic,
            thresholds: diffuse_best_response(p_star, self.params.kappa)?,
            residual: (self.phi(p_star)? - p_star).abs(),
        })
    }

    /// `d1 / (κ (d1 + d2))`: decreasing from `1/κ` to `0` on `[1-κ, κ]`.
    fn outcome1_ratio(&self, p: f64) -> Result<f64> {
        let (d1, d2) = self.diffuse_at(p)?;
        Ok(d1 / (self.params.kappa * (d1 + d2)))
    }

    /// `d2 / (κ (d1 + d2))`: increasing from `0` to `1/κ` on `[1-κ, κ]`.
    fn outcome2_ratio(&self, p: f64) -> Result<f64> {
        let (d1, d2) = self.diffuse_at(p)?;
        Ok(d2 / (self.params.kappa * (d1 + d2)))
    }
}

/// Root in `(1-κ, κ]` of `q = d1 / (κ (d1 + d2))`; exactly `κ` when `q = 0`.
pub fn compute_pbar1(ctx: &PhiContext<'_>) -> Result<f64> {
    let MarketParams { kappa, q, .. } = ctx.params;
    if q == 0.0 {
        return Ok(kappa);
    }
    bisect(
        |p| Ok(ctx.outcome1_ratio(p)? - q),
        1.0 - kappa,
        kappa,
        ctx.fp_tol,
        f64::INFINITY,
    )
}

/// Root in `[1-κ, κ)` of `1 - q = d2 / (κ (d1 + d2))`; exactly `1-κ` when `q = 1`.
pub fn compute_pbar2(ctx: &PhiContext<'_>) -> Result<f64> {
    let MarketParams { kappa, q, .. } = ctx.params;
    if q == 1.0 {
        return Ok(1.0 - kappa);
    }
    bisect(
        |p| Ok(ctx.outcome2_ratio(p)? - (1.0 - q)),
        1.0 - kappa,
        kappa,
        ctx.fp_tol,
        f64::INFINITY,
    )
}

/// Solves the market to fixed-point tolerance `fp_tol`.
///
/// Fails with [`Error::NoEquilibrium`] unless `κ > 0.5`.
pub fn solve(params: &MarketParams, measure: &BeliefMeasure, fp_tol: f64) -> Result<Equilibrium> {
    let ctx = PhiContext::new(*params, measure, fp_tol)?;
    let p_star = ctx.fixed_point()?;
    ctx.reconstruct(p_star)
}

/// Implied probability recomputed from an equilibrium's own wagers.
pub fn realized_implied_probability(eq: &Equilibrium) -> Result<f64> {
    implied_probability(eq.diffuse(), eq.atomic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TOL: f64 = 1e-10;

    fn uniform_ctx(measure: &BeliefMeasure, kappa: f64, q: f64, w: f64) -> PhiContext<'_> {
        PhiContext::new(MarketParams::new(kappa, q, w).unwrap(), measure, TOL).unwrap()
    }

    #[test]
    fn diffuse_totals_at_domain_edges() {
        let m = BeliefMeasure::uniform();
        let ctx = uniform_ctx(&m, 0.8, 0.5, 1.0);
        assert_relative_eq!(ctx.d1_of(0.6).unwrap(), 0.25, epsilon = 1e-15);
        assert_eq!(ctx.d1_of(0.8).unwrap(), 0.0);
        assert_eq!(ctx.d2_of(0.2).unwrap(), 0.0);
        assert!(ctx.d1_of(0.85).is_err());
        assert!(ctx.d2_of(0.1).is_err());
    }

    #[test]
    fn pbar_edge_cases() {
        let m = BeliefMeasure::wedge(10).unwrap();
        let ctx = uniform_ctx(&m, 0.7, 0.0, 1.0);
        assert_eq!(ctx.pbar1(), 0.7);
        let ctx = uniform_ctx(&m, 0.7, 1.0, 1.0);
        assert_eq!(ctx.pbar2(), 1.0 - 0.7);
        for q in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let ctx = uniform_ctx(&m, 0.7, q, 1.0);
            assert!(ctx.pbar2() < ctx.pbar1(), "q={q}");
            assert!(ctx.pbar1() > 0.3 && ctx.pbar1() <= 0.7);
            assert!(ctx.pbar2() >= 0.3 && ctx.pbar2() < 0.7);
        }
    }

    #[test]
    fn pbar1_matches_grid_bracketing() {
        // Independent bracketing of 0.5 = (1 - p/0.8) / (0.8 (2 - p/0.8 - (1-p)/0.8))
        // on a dense grid, using the unit density directly.
        let f = |p: f64| {
            let d1 = 1.0 - p / 0.8;
            let d2 = 1.0 - (1.0 - p) / 0.8;
            d1 / (0.8 * (d1 + d2)) - 0.5
        };
        let n = 1_000_000;
        let (lo, hi) = (0.2, 0.8);
        let mut root = f64::NAN;
        for i in 0..n {
            let a = lo + (hi - lo) * i as f64 / n as f64;
            let b = lo + (hi - lo) * (i + 1) as f64 / n as f64;
            if f(a) > 0.0 && f(b) <= 0.0 {
                root = 0.5 * (a + b);
                break;
            }
        }
        // linear masses make this solvable by hand: (0.8 - p) / 0.48 = 0.5
        assert_relative_eq!(root, 0.56, epsilon = 1e-6);
        let m = BeliefMeasure::uniform();
        let ctx = uniform_ctx(&m, 0.8, 0.5, 1.0);
        assert_relative_eq!(ctx.pbar1(), root, epsilon = 1e-6);
    }

    #[test]
    fn zeta_vanishes_at_its_endpoints() {
        let m = BeliefMeasure::wedge(3).unwrap();
        let ctx = uniform_ctx(&m, 0.75, 0.6, 1.0);
        assert!(ctx.zeta1(ctx.pbar1()).unwrap() < 1e-6);
        assert_eq!(ctx.zeta1(0.75).unwrap(), 0.0);
        assert_eq!(ctx.zeta2(0.25).unwrap(), 0.0);
        assert!(ctx.zeta2(ctx.pbar2()).unwrap() < 1e-6);
        assert!(ctx.zeta1(0.25).is_err());
        assert!(ctx.zeta2(0.75).is_err());
    }

    #[test]
    fn zeta1_uniform_example() {
        let m = BeliefMeasure::uniform();
        let ctx = uniform_ctx(&m, 0.8, 0.9, 10.0);
        assert_relative_eq!(ctx.d1_of(0.7).unwrap(), 0.125, epsilon = 1e-15);
        assert_relative_eq!(ctx.d2_of(0.7).unwrap(), 0.625, epsilon = 1e-15);
        let z = ctx.zeta1(0.7).unwrap();
        assert_relative_eq!(
            z,
            (0.72f64 * 0.078125 / 0.28).sqrt() - 0.125,
            epsilon = 1e-14
        );
        assert_relative_eq!(z, 0.32321, epsilon = 1e-5);
    }

    #[test]
    fn phi_endpoint_values_and_symmetry() {
        for m in [BeliefMeasure::uniform(), BeliefMeasure::wedge(10).unwrap()] {
            for q in [0.0, 0.3, 1.0] {
                let ctx = uniform_ctx(&m, 0.8, q, 1.0);
                assert_relative_eq!(ctx.phi(0.2).unwrap(), 1.0, epsilon = 1e-15);
                assert_eq!(ctx.phi(0.8).unwrap(), 0.0);
            }
        }
        let m = BeliefMeasure::uniform();
        for kappa in [0.51, 0.7, 0.95] {
            let ctx = uniform_ctx(&m, kappa, 0.5, 1.0);
            assert_relative_eq!(ctx.phi(0.5).unwrap(), 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn phi_is_continuous_at_switch_points() {
        let m = BeliefMeasure::wedge(5).unwrap();
        let ctx = uniform_ctx(&m, 0.85, 0.55, 1.0);
        for pbar in [ctx.pbar1(), ctx.pbar2()] {
            let h = 1e-9;
            let left = ctx.phi(pbar - h).unwrap();
            let right = ctx.phi(pbar + h).unwrap();
            let at = ctx.phi(pbar).unwrap();
            assert!((left - at).abs() < 1e-6 && (right - at).abs() < 1e-6);
        }
    }

    #[test]
    fn solve_examples() {
        let m = BeliefMeasure::uniform();
        let err = solve(&MarketParams::new(0.4, 0.5, 1.0).unwrap(), &m, TOL).unwrap_err();
        assert_eq!(err, Error::NoEquilibrium { kappa: 0.4 });
        assert_eq!(
            err.to_string(),
            "no equilibrium: kappa must exceed 0.5 (got 0.4)"
        );

        let eq = solve(&MarketParams::new(0.8, 0.5, 1.0).unwrap(), &m, TOL).unwrap();
        assert!((eq.p_star - 0.5).abs() < 1e-10);
        assert_eq!(eq.atomic, AtomicBet::NONE);

        let m100 = BeliefMeasure::wedge(100).unwrap();
        let eq = solve(&MarketParams::new(0.8, 0.0, 1.0).unwrap(), &m100, TOL).unwrap();
        assert!((eq.p_star - 0.2).abs() < 0.02);
        assert!(eq.residual <= TOL);
    }

    #[test]
    fn reconstruction_is_self_consistent() {
        let m = BeliefMeasure::wedge(10).unwrap();
        for (kappa, q, w) in [
            (0.6, 0.95, 1.0),
            (0.9, 0.95, 1.0),
            (0.9, 0.05, 0.2),
            (0.75, 0.5, 1e-10),
        ] {
            let eq = solve(&MarketParams::new(kappa, q, w).unwrap(), &m, TOL).unwrap();
            assert!(eq.d1_star > 0.0 && eq.d2_star > 0.0);
            assert!(eq.p_star > 1.0 - kappa && eq.p_star < kappa);
            let realized = realized_implied_probability(&eq).unwrap();
            assert!(
                (realized - eq.p_star).abs() <= 10.0 * TOL,
                "{realized} vs {}",
                eq.p_star
            );
        }
    }

    #[test]
    fn fixed_point_independent_of_bracket_orientation() {
        let m = BeliefMeasure::gaussian_mixture(vec![1.0, 0.5], vec![0.25, 0.8], vec![0.1, 0.05])
            .unwrap();
        let params = MarketParams::new(0.82, 0.7, 0.3).unwrap();
        let ctx = PhiContext::new(params, &m, TOL).unwrap();
        let (lo, hi) = ctx.domain();
        let up = ctx.fixed_point_between(lo, hi).unwrap();
        let down = ctx.fixed_point_between(hi, lo).unwrap();
        let fine = PhiContext::new(params, &m, TOL / 10.0)
            .unwrap()
            .fixed_point()
            .unwrap();
        assert!((up - down).abs() <= TOL);
        assert!((up - fine).abs() <= TOL);
    }
}
