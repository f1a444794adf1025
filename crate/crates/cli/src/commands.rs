use parimutuel_core::equilibrium::solve;
use parimutuel_core::oracle::{discretize, iterate_best_response, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use parimutuel_core::stackelberg::{optimize_take, DEFAULT_REFINE_TOL};
use parimutuel_core::{BeliefMeasure, MarketParams, MarketReport};
use rayon::prelude::*;

use crate::error::CliError;
use crate::scenario::{KappaSpec, Metric, Scenario};
use crate::table::{fmt_num, text_field, Table, SOLVE_COLUMNS};

/// Budget used for the no-atomic-bettor comparison rows.
pub const BASELINE_W: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    Main,
    Baseline,
}

impl Case {
    fn as_str(&self) -> &'static str {
        match self {
            Case::Main => "main",
            Case::Baseline => "baseline",
        }
    }
}

fn wants(scenario: &Scenario, m: Metric) -> bool {
    if m == Metric::DiffuseActualProfit && scenario.p_actual.is_none() {
        return false;
    }
    scenario.metrics.is_empty() || scenario.metrics.contains(&m)
}

fn solve_row(
    scenario: &Scenario,
    measure: &BeliefMeasure,
    case: Case,
    kappa: f64,
    fp_tol: f64,
) -> Result<Vec<String>, CliError> {
    let w = match case {
        Case::Main => scenario.w,
        Case::Baseline => BASELINE_W,
    };
    let params = MarketParams::new(kappa, scenario.q, w)?;
    let eq = solve(&params, measure, fp_tol)?;
    let report = MarketReport::new(&eq, &params, measure, scenario.p_actual)?;

    let metric = |m: Metric, v: Option<f64>| match v {
        Some(v) if wants(scenario, m) => fmt_num(v),
        _ => String::new(),
    };
    Ok(vec![
        text_field(&scenario.name),
        case.as_str().to_string(),
        fmt_num(kappa),
        fmt_num(scenario.q),
        fmt_num(w),
        "ok".to_string(),
        fmt_num(eq.p_star),
        fmt_num(eq.d1_star),
        fmt_num(eq.d2_star),
        fmt_num(eq.atomic.a1),
        fmt_num(eq.atomic.a2),
        fmt_num(eq.residual),
        metric(Metric::HouseRevenue, Some(report.house_revenue)),
        metric(Metric::DiffuseActualProfit, report.diffuse_actual_profit),
        metric(
            Metric::DiffuseSubjectiveProfit,
            Some(report.diffuse_subjective_profit),
        ),
        metric(
            Metric::AtomicSubjectiveProfit,
            Some(report.atomic_subjective_profit),
        ),
        metric(Metric::PoolTotal, Some(report.pool_total)),
    ])
}

fn failed_row(scenario: &Scenario, case: Case, kappa: f64, err: &CliError) -> Vec<String> {
    let w = match case {
        Case::Main => scenario.w,
        Case::Baseline => BASELINE_W,
    };
    let status = match err {
        CliError::NoEquilibrium(_) => "no_equilibrium".to_string(),
        other => text_field(&format!("error: {other}")),
    };
    let mut row = vec![
        text_field(&scenario.name),
        case.as_str().to_string(),
        fmt_num(kappa),
        fmt_num(scenario.q),
        fmt_num(w),
        status,
    ];
    row.resize(SOLVE_COLUMNS.len(), String::new());
    row
}

/// Solves the scenario at its single `κ`.
pub fn run_solve(scenario: &Scenario, fp_tol: f64) -> Result<String, CliError> {
    let kappa = match scenario.kappa {
        Some(KappaSpec::Fixed(k)) => k,
        _ => {
            return Err(CliError::Config {
                line: None,
                message: "solve needs a scalar kappa; use sweep for a kappa range".into(),
            })
        }
    };
    let measure = scenario.build_measure()?;
    let mut table = Table::new(&SOLVE_COLUMNS);
    table.push_row(solve_row(scenario, &measure, Case::Main, kappa, fp_tol)?);
    Ok(table.into_string())
}

/// Solves every `κ` of the scenario, in ascending order. A failure at one `κ`
/// is recorded in that row's status rather than aborting the sweep.
pub fn run_sweep(scenario: &Scenario, baseline: bool, fp_tol: f64) -> Result<String, CliError> {
    let Some(spec) = scenario.kappa else {
        return Err(CliError::Config {
            line: None,
            message: "sweep needs a kappa value or range".into(),
        });
    };
    let measure = scenario.build_measure()?;
    let mut kappas = spec.values();
    kappas.sort_by(f64::total_cmp);

    let cases: &[Case] = if baseline {
        &[Case::Main, Case::Baseline]
    } else {
        &[Case::Main]
    };
    let jobs: Vec<(f64, Case)> = kappas
        .iter()
        .flat_map(|&k| cases.iter().map(move |&c| (k, c)))
        .collect();
    let rows: Vec<Vec<String>> = jobs
        .par_iter()
        .map(|&(k, c)| {
            solve_row(scenario, &measure, c, k, fp_tol)
                .unwrap_or_else(|e| failed_row(scenario, c, k, &e))
        })
        .collect();

    let mut table = Table::new(&SOLVE_COLUMNS);
    for r in rows {
        table.push_row(r);
    }
    Ok(table.into_string())
}

#[derive(Debug, Clone)]
pub struct TakeReport {
    /// One-row table with the optimum.
    pub summary: String,
    /// Revenue on the search grid.
    pub profile: String,
}

pub fn run_optimize_take(
    scenario: &Scenario,
    grid_points: usize,
    fp_tol: f64,
) -> Result<TakeReport, CliError> {
    let measure = scenario.build_measure()?;
    let opt = optimize_take(
        &measure,
        scenario.q,
        scenario.w,
        grid_points,
        DEFAULT_REFINE_TOL,
        fp_tol,
    )?;

    let mut summary = Table::new(&[
        "name",
        "q",
        "w",
        "grid_points",
        "kappa_star",
        "revenue_star",
    ]);
    summary.push_row([
        text_field(&scenario.name),
        fmt_num(scenario.q),
        fmt_num(scenario.w),
        grid_points.to_string(),
        fmt_num(opt.kappa_star),
        fmt_num(opt.revenue_star),
    ]);
    let mut profile = Table::new(&["kappa", "house_revenue"]);
    for (k, r) in &opt.profile {
        profile.push_row([fmt_num(*k), fmt_num(*r)]);
    }
    Ok(TakeReport {
        summary: summary.into_string(),
        profile: profile.into_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub kappa: f64,
    pub n: usize,
    pub p_approx: f64,
    pub p_star: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl OracleReport {
    pub fn gap(&self) -> f64 {
        (self.p_approx - self.p_star).abs()
    }
}

/// Compares the continuum equilibrium against a population of `n` bettors at
/// every `κ` of the scenario.
pub fn run_oracle(
    scenario: &Scenario,
    n: usize,
    fp_tol: f64,
) -> Result<Vec<OracleReport>, CliError> {
    let Some(spec) = scenario.kappa else {
        return Err(CliError::Config {
            line: None,
            message: "oracle needs a kappa value or range".into(),
        });
    };
    let measure = scenario.build_measure()?;
    let pop = discretize(&measure, n)?;
    spec.values()
        .par_iter()
        .map(|&kappa| {
            let params = MarketParams::new(kappa, scenario.q, scenario.w)?;
            let eq = solve(&params, &measure, fp_tol)?;
            let out = iterate_best_response(&pop, &params, DEFAULT_MAX_ITERS, DEFAULT_TOL)?;
            Ok(OracleReport {
                kappa,
                n,
                p_approx: out.p_approx,
                p_star: eq.p_star,
                converged: out.converged,
                iterations: out.iterations,
            })
        })
        .collect()
}

pub fn oracle_table(scenario: &Scenario, reports: &[OracleReport]) -> String {
    let mut table = Table::new(&[
        "name",
        "kappa",
        "n",
        "p_approx",
        "p_star",
        "gap",
        "converged",
        "iterations",
    ]);
    for r in reports {
        table.push_row([
            text_field(&scenario.name),
            fmt_num(r.kappa),
            r.n.to_string(),
            fmt_num(r.p_approx),
            fmt_num(r.p_star),
            fmt_num(r.gap()),
            r.converged.to_string(),
            r.iterations.to_string(),
        ]);
    }
    table.into_string()
}
