//! Scenario files.
//!
//! A scenario is a JSON document:
//!
//! ```json
//! {
//!   "name": "example1",
//!   "measure": { "kind": "uniform" },
//!   "q": 0.9,
//!   "w": 1.0,
//!   "kappa": { "lo": 0.5001, "hi": 0.9999, "steps": 50 },
//!   "p_actual": 0.9,
//!   "metrics": ["house_revenue", "diffuse_actual_profit"]
//! }
//! ```
//!
//! `kappa` is either a number or a sweep record; it may be omitted for
//! `optimize-take`, which searches over `κ` itself.

use std::fmt;
use std::path::Path;

use parimutuel_core::{BeliefMeasure, MeasureSpec, KAPPA_MAX, KAPPA_MIN};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Slack when comparing sweep ends against the `κ` domain limits, so that
/// writing `0.5001` in a file is accepted.
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub measure: MeasureSpec,
    pub q: f64,
    pub w: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_actual: Option<f64>,
    #[serde(default)]
    pub metrics: Vec<Metric>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KappaSpec {
    Fixed(f64),
    Sweep { lo: f64, hi: f64, steps: usize },
}

impl KappaSpec {
    /// The grid of `κ` values, ascending.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            KappaSpec::Fixed(k) => vec![k],
            KappaSpec::Sweep { lo, hi, steps } => {
                parimutuel_core::stackelberg::kappa_grid(lo, hi, steps)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    HouseRevenue,
    DiffuseActualProfit,
    DiffuseSubjectiveProfit,
    AtomicSubjectiveProfit,
    PoolTotal,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::HouseRevenue,
        Metric::DiffuseActualProfit,
        Metric::DiffuseSubjectiveProfit,
        Metric::AtomicSubjectiveProfit,
        Metric::PoolTotal,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::HouseRevenue => "house_revenue",
            Metric::DiffuseActualProfit => "diffuse_actual_profit",
            Metric::DiffuseSubjectiveProfit => "diffuse_subjective_profit",
            Metric::AtomicSubjectiveProfit => "atomic_subjective_profit",
            Metric::PoolTotal => "pool_total",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Scenario {
    /// Parses and validates a scenario. Errors name the offending line when
    /// it can be located.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let scenario: Scenario = serde_json::from_str(text).map_err(|e| CliError::Config {
            line: Some(e.line()),
            message: e.to_string(),
        })?;
        scenario
            .validate()
            .map_err(|(field, message)| CliError::Config {
                line: line_of_key(text, field),
                message,
            })?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text).map_err(|e| e.in_file(path))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    pub fn build_measure(&self) -> Result<BeliefMeasure, CliError> {
        BeliefMeasure::new(self.measure.clone()).map_err(|e| CliError::Config {
            line: None,
            message: e.to_string(),
        })
    }

    fn validate(&self) -> Result<(), (&'static str, String)> {
        if !(0.0..=1.0).contains(&self.q) {
            return Err(("q", format!("q must lie in [0, 1], got {}", self.q)));
        }
        if !(self.w > 0.0) || !self.w.is_finite() {
            return Err(("w", format!("w must be positive, got {}", self.w)));
        }
        if let Some(p) = self.p_actual {
            if !(0.0..=1.0).contains(&p) {
                return Err(("p_actual", format!("p_actual must lie in [0, 1], got {p}")));
            }
        }
        if self.metrics.contains(&Metric::DiffuseActualProfit) && self.p_actual.is_none() {
            return Err(("metrics", "diffuse_actual_profit requires p_actual".into()));
        }
        match self.kappa {
            Some(KappaSpec::Fixed(k)) if !(k > 0.0 && k < 1.0) => {
                return Err(("kappa", format!("kappa must lie in (0, 1), got {k}")));
            }
            Some(KappaSpec::Sweep { lo, hi, steps }) => {
                if lo < KAPPA_MIN - DOMAIN_SLACK || hi > KAPPA_MAX + DOMAIN_SLACK || lo >= hi {
                    return Err((
                        "kappa",
                        format!("kappa sweep [{lo}, {hi}] must satisfy {KAPPA_MIN} <= lo < hi <= {KAPPA_MAX}"),
                    ));
                }
                if steps < 2 {
                    return Err((
                        "steps",
                        format!("kappa sweep needs at least 2 steps, got {steps}"),
                    ));
                }
            }
            _ => {}
        }
        BeliefMeasure::new(self.measure.clone()).map_err(|e| ("measure", e.to_string()))?;
        Ok(())
    }
}

fn line_of_key(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1)
}
