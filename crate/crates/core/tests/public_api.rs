use parimutuel_core::equilibrium::{realized_implied_probability, solve};
use parimutuel_core::metrics::{atomic_actual_profit, diffuse_actual_profit, house_revenue};
use parimutuel_core::{BeliefMeasure, MarketParams, MarketReport, DEFAULT_FP_TOL};

fn solve_with(measure: &BeliefMeasure, kappa: f64, q: f64, w: f64) -> parimutuel_core::Equilibrium {
    let params = MarketParams::new(kappa, q, w).unwrap();
    solve(&params, measure, DEFAULT_FP_TOL).unwrap()
}

#[test]
fn crate_level_example() {
    let measure = BeliefMeasure::uniform();
    let params = MarketParams::new(0.8, 0.5, 1.0).unwrap();
    let eq = solve(&params, &measure, 1e-10).unwrap();
    assert!((eq.p_star - 0.5).abs() < 1e-9);
}

#[test]
fn mirrored_market_mirrors_the_price() {
    let m =
        BeliefMeasure::gaussian_mixture(vec![1.0, 0.5], vec![0.3, 0.8], vec![0.1, 0.05]).unwrap();
    let mirror =
        BeliefMeasure::gaussian_mixture(vec![1.0, 0.5], vec![0.7, 0.2], vec![0.1, 0.05]).unwrap();
    for (kappa, q, w) in [(0.7, 0.9, 0.3), (0.85, 0.2, 2.0), (0.95, 0.5, 1.0)] {
        let a = solve_with(&m, kappa, q, w);
        let b = solve_with(&mirror, kappa, 1.0 - q, w);
        assert!(
            (a.p_star - (1.0 - b.p_star)).abs() < 1e-8,
            "{} vs {}",
            a.p_star,
            b.p_star
        );
        assert!((a.atomic.a1 - b.atomic.a2).abs() < 1e-7);
        assert!((a.atomic.a2 - b.atomic.a1).abs() < 1e-7);
    }
}

#[test]
fn scaling_wealth_leaves_the_price_unchanged() {
    let m = BeliefMeasure::wedge(5).unwrap();
    let big = m.scaled(4.0).unwrap();
    for kappa in [0.6, 0.75, 0.9] {
        let a = solve_with(&m, kappa, 0.85, 0.25);
        let b = solve_with(&big, kappa, 0.85, 1.0);
        assert!((a.p_star - b.p_star).abs() < 1e-8);
        assert!((4.0 * a.pool_total() - b.pool_total()).abs() < 1e-7);
    }
}

#[test]
fn equilibrium_wagers_reproduce_the_price() {
    let m = BeliefMeasure::symmetrized_wedge(7).unwrap();
    for kappa in [0.55, 0.7, 0.85, 0.99] {
        for q in [0.0, 0.3, 0.65, 1.0] {
            let eq = solve_with(&m, kappa, q, 0.4);
            let realized = realized_implied_probability(&eq).unwrap();
            assert!((realized - eq.p_star).abs() <= 10.0 * DEFAULT_FP_TOL);
        }
    }
}

#[test]
fn money_is_conserved() {
    let m = BeliefMeasure::tabulated(vec![(0.0, 0.5), (0.4, 2.0), (1.0, 1.0)]).unwrap();
    for p_actual in [0.0, 0.35, 1.0] {
        let params = MarketParams::new(0.8, 0.9, 0.5).unwrap();
        let eq = solve(&params, &m, DEFAULT_FP_TOL).unwrap();
        let bettors = diffuse_actual_profit(&eq, &params, p_actual).unwrap()
            + atomic_actual_profit(&eq, &params, p_actual).unwrap();
        assert!((bettors + house_revenue(&eq, &params)).abs() < 1e-9);
        let report = MarketReport::new(&eq, &params, &m, Some(p_actual)).unwrap();
        assert!(report.atomic_subjective_profit >= 0.0);
        assert!(report.diffuse_subjective_profit >= 0.0);
    }
}
