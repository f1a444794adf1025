//! The wealth measure of the diffuse population over beliefs in `[0, 1]`.
//!
//! A [`BeliefMeasure`] wraps a continuous, everywhere-positive density. Mass
//! queries use a closed-form antiderivative where the family has one and
//! adaptive Simpson quadrature otherwise; [`BeliefMeasure::quadrature_mass`]
//! always takes the quadrature path so the two can be compared.

use serde::{Deserialize, Serialize};

use crate::numeric::adaptive_simpson;
use crate::{Error, Result};

/// Absolute tolerance for every quadrature over a measure.
pub const QUAD_TOL: f64 = 1e-10;
/// Recursion limit for adaptive Simpson.
pub const QUAD_MAX_DEPTH: u32 = 40;
/// Number of grid points used to validate positivity of a density.
pub const POSITIVITY_GRID: usize = 10_001;

/// Serializable description of a measure, as written in scenario files.
///
/// `{"kind":"wedge","n":10}`, `{"kind":"uniform"}`,
/// `{"kind":"gaussian_mixture","weights":[..],"means":[..],"stddevs":[..]}`,
/// `{"kind":"tabulated","knots":[[0.0,1.0],[1.0,2.0]]}`,
/// `{"kind":"symmetrized_wedge","n":100}`,
/// `{"kind":"scaled","base":{..},"factor":0.5}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    /// Wealth piled up near `p = 0`: density `g_n` with unit total mass.
    Wedge {
        n: u32,
    },
    /// Lebesgue measure on `[0, 1]` (same as `Wedge { n: 1 }`).
    Uniform,
    GaussianMixture {
        weights: Vec<f64>,
        means: Vec<f64>,
        stddevs: Vec<f64>,
    },
    /// Piecewise-linear density through `(p, value)` knots spanning `[0, 1]`.
    Tabulated {
        knots: Vec<(f64, f64)>,
    },
    /// `(g_n(p) + g_n(1 - p)) / 2`.
    SymmetrizedWedge {
        n: u32,
    },
    Scaled {
        base: Box<MeasureSpec>,
        factor: f64,
    },
}

/// Density of the wedge family: `-2n(n-1)p + 2(n-1) + 1/n` below `1/n`, flat `1/n` above.
pub fn wedge_density(n: u32, p: f64) -> Result<f64> {
    check_n(n)?;
    check_unit(p)?;
    Ok(wedge_density_unchecked(n, p))
}

pub fn symmetrized_wedge_density(n: u32, p: f64) -> Result<f64> {
    check_n(n)?;
    check_unit(p)?;
    Ok(0.5 * (wedge_density_unchecked(n, p) + wedge_density_unchecked(n, 1.0 - p)))
}

pub fn gaussian_mixture_density(
    weights: &[f64],
    means: &[f64],
    stddevs: &[f64],
    p: f64,
) -> Result<f64> {
    check_mixture(weights, means, stddevs)?;
    Ok(mixture_unchecked(weights, means, stddevs, p))
}

fn wedge_density_unchecked(n: u32, p: f64) -> f64 {
    let n = f64::from(n);
    if p < 1.0 / n {
        -2.0 * n * (n - 1.0) * p + 2.0 * (n - 1.0) + 1.0 / n
    } else {
        1.0 / n
    }
}

/// Antiderivative of the wedge density with `G(0) = 0`.
fn wedge_cdf(n: u32, p: f64) -> f64 {
    let n = f64::from(n);
    let knee = 1.0 / n;
    if p < knee {
        -n * (n - 1.0) * p * p + (2.0 * (n - 1.0) + 1.0 / n) * p
    } else {
        let at_knee = (n - 1.0) / n + 1.0 / (n * n);
        at_knee + (p - knee) / n
    }
}

fn mixture_unchecked(weights: &[f64], means: &[f64], stddevs: &[f64], p: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
    weights
        .iter()
        .zip(means)
        .zip(stddevs)
        .map(|((w, m), s)| {
            let z = (p - m) / s;
            w * INV_SQRT_2PI / s * (-0.5 * z * z).exp()
        })
        .sum()
}

fn check_n(n: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::domain("wedge index n must be at least 1"));
    }
    Ok(())
}

fn check_unit(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("belief {p} is outside [0, 1]")));
    }
    Ok(())
}

fn check_mixture(weights: &[f64], means: &[f64], stddevs: &[f64]) -> Result<()> {
    if weights.is_empty() || weights.len() != means.len() || weights.len() != stddevs.len() {
        return Err(Error::domain(
            "gaussian mixture needs equally many (>0) weights, means and stddevs",
        ));
    }
    if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::domain("gaussian mixture weights must be positive"));
    }
    if stddevs.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
        return Err(Error::domain("gaussian mixture stddevs must be positive"));
    }
    if means.iter().any(|m| !m.is_finite()) {
        return Err(Error::domain("gaussian mixture means must be finite"));
    }
    Ok(())
}

fn check_knots(knots: &[(f64, f64)]) -> Result<()> {
    if knots.len() < 2 {
        return Err(Error::InvalidMeasure(
            "tabulated density needs at least two knots".into(),
        ));
    }
    if knots[0].0 != 0.0 || knots[knots.len() - 1].0 != 1.0 {
        return Err(Error::InvalidMeasure(
            "tabulated knots must start at 0 and end at 1".into(),
        ));
    }
    if knots.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::InvalidMeasure(
            "tabulated knot positions must be strictly increasing".into(),
        ));
    }
    if let Some((p, v)) = knots.iter().find(|(_, v)| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidMeasure(format!(
            "tabulated density value {v} at p={p} is not positive"
        )));
    }
    Ok(())
}

impl MeasureSpec {
    fn validate(&self) -> Result<()> {
        match self {
            MeasureSpec::Wedge { n } | MeasureSpec::SymmetrizedWedge { n } => check_n(*n),
            MeasureSpec::Uniform => Ok(()),
            MeasureSpec::GaussianMixture {
                weights,
                means,
                stddevs,
            } => check_mixture(weights, means, stddevs),
            MeasureSpec::Tabulated { knots } => check_knots(knots),
            MeasureSpec::Scaled { base, factor } => {
                if !(*factor > 0.0) || !factor.is_finite() {
                    return Err(Error::InvalidMeasure(format!(
                        "scale factor {factor} must be positive"
                    )));
                }
                base.validate()
            }
        }
    }

    fn density(&self, p: f64) -> f64 {
        match self {
            MeasureSpec::Wedge { n } => wedge_density_unchecked(*n, p),
            MeasureSpec::Uniform => 1.0,
            MeasureSpec::GaussianMixture {
                weights,
                means,
                stddevs,
            } => mixture_unchecked(weights, means, stddevs, p),
            MeasureSpec::Tabulated { knots } => {
                let i = segment(knots, p);
                let (x0, v0) = knots[i];
                let (x1, v1) = knots[i + 1];
                v0 + (v1 - v0) * (p - x0) / (x1 - x0)
            }
            MeasureSpec::SymmetrizedWedge { n } => {
                0.5 * (wedge_density_unchecked(*n, p) + wedge_density_unchecked(*n, 1.0 - p))
            }
            MeasureSpec::Scaled { base, factor } => factor * base.density(p),
        }
    }

    /// Closed-form `∫_0^p g`, where the family has one.
    fn cdf(&self, p: f64) -> Option<f64> {
        match self {
            MeasureSpec::Wedge { n } => Some(wedge_cdf(*n, p)),
            MeasureSpec::Uniform => Some(p),
            MeasureSpec::GaussianMixture { .. } => None,
            MeasureSpec::Tabulated { knots } => {
                let i = segment(knots, p);
                let before: f64 = knots[..=i]
                    .windows(2)
                    .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
                    .sum();
                let (x0, v0) = knots[i];
                let (x1, v1) = knots[i + 1];
                let h = p - x0;
                let slope = (v1 - v0) / (x1 - x0);
                Some(before + v0 * h + 0.5 * slope * h * h)
            }
            MeasureSpec::SymmetrizedWedge { n } => {
                // ∫_0^p g(1-t) dt = G(1) - G(1-p)
                let total = wedge_cdf(*n, 1.0);
                Some(0.5 * (wedge_cdf(*n, p) + total - wedge_cdf(*n, 1.0 - p)))
            }
            MeasureSpec::Scaled { base, factor } => base.cdf(p).map(|c| factor * c),
        }
    }

    /// Interior points where the density has a kink or a sharp feature.
    fn breakpoints(&self, out: &mut Vec<f64>) {
        match self {
            MeasureSpec::Wedge { n } => out.push(1.0 / f64::from(*n)),
            MeasureSpec::Uniform => {}
            MeasureSpec::GaussianMixture { means, stddevs, .. } => {
                for (m, s) in means.iter().zip(stddevs) {
                    out.extend([m - s, *m, m + s]);
                }
            }
            MeasureSpec::Tabulated { knots } => out.extend(knots.iter().map(|k| k.0)),
            MeasureSpec::SymmetrizedWedge { n } => {
                let knee = 1.0 / f64::from(*n);
                out.extend([knee, 1.0 - knee]);
            }
            MeasureSpec::Scaled { base, .. } => base.breakpoints(out),
        }
    }
}

/// Index `i` of the tabulated segment `[x_i, x_{i+1}]` containing `p`.
fn segment(knots: &[(f64, f64)], p: f64) -> usize {
    let idx = knots.partition_point(|k| k.0 <= p);
    idx.saturating_sub(1).min(knots.len() - 2)
}

/// Diffuse-population wealth measure with a validated positive density.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefMeasure {
    spec: MeasureSpec,
    total_mass: f64,
    breaks: Vec<f64>,
}

impl BeliefMeasure {
    pub fn new(spec: MeasureSpec) -> Result<Self> {
        spec.validate()?;
        let mut breaks = Vec::new();
        spec.breakpoints(&mut breaks);
        breaks.retain(|b| *b > 0.0 && *b < 1.0);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();

        let step = 1.0 / (POSITIVITY_GRID - 1) as f64;
        for i in 0..POSITIVITY_GRID {
            let p = i as f64 * step;
            let g = spec.density(p);
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "density is not positive at p={p} (value {g})"
                )));
            }
        }

        let mut m = BeliefMeasure {
            spec,
            total_mass: 0.0,
            breaks,
        };
        m.total_mass = m.raw_mass(0.0, 1.0)?;
        Ok(m)
    }

    pub fn uniform() -> Self {
        Self::new(MeasureSpec::Uniform).expect("uniform measure is valid")
    }

    pub fn wedge(n: u32) -> Result<Self> {
        Self::new(MeasureSpec::Wedge { n })
    }

    pub fn symmetrized_wedge(n: u32) -> Result<Self> {
        Self::new(MeasureSpec::SymmetrizedWedge { n })
    }

    pub fn gaussian_mixture(weights: Vec<f64>, means: Vec<f64>, stddevs: Vec<f64>) -> Result<Self> {
        Self::new(MeasureSpec::GaussianMixture {
            weights,
            means,
            stddevs,
        })
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(MeasureSpec::Tabulated { knots })
    }

    /// The same measure with its density multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(MeasureSpec::Scaled {
            base: Box::new(self.spec.clone()),
            factor,
        })
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    /// `μ([0, 1])`.
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Density at `p`. Callers are expected to stay in `[0, 1]`.
    pub fn density(&self, p: f64) -> f64 {
        self.spec.density(p)
    }

    /// `μ` of the interval between `lo` and `hi`; endpoints may be open or closed.
    pub fn mass(&self, lo: f64, hi: f64) -> Result<f64> {
        check_interval(lo, hi)?;
        self.raw_mass(lo, hi)
    }

    /// Mass by adaptive quadrature, bypassing any closed form.
    pub fn quadrature_mass(&self, lo: f64, hi: f64) -> Result<f64> {
        check_interval(lo, hi)?;
        self.integrate(|_| 1.0, lo, hi)
    }

    /// `∫_lo^hi f(p) g(p) dp`, splitting the range at the density's kinks.
    pub fn integrate<F>(&self, f: F, lo: f64, hi: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        check_interval(lo, hi)?;
        if lo == hi {
            return Ok(0.0);
        }
        let mut cuts = Vec::with_capacity(self.breaks.len() + 2);
        cuts.push(lo);
        cuts.extend(self.breaks.iter().copied().filter(|b| *b > lo && *b < hi));
        cuts.push(hi);
        let tol = QUAD_TOL / (cuts.len() - 1) as f64;
        let integrand = |p: f64| f(p) * self.spec.density(p);
        cuts.windows(2)
            .map(|w| adaptive_simpson(&integrand, w[0], w[1], tol, QUAD_MAX_DEPTH))
            .sum()
    }

    fn raw_mass(&self, lo: f64, hi: f64) -> Result<f64> {
        if lo == hi {
            return Ok(0.0);
        }
        match (self.spec.cdf(lo), self.spec.cdf(hi)) {
            (Some(a), Some(b)) => Ok((b - a).max(0.0)),
            _ => self.integrate(|_| 1.0, lo, hi),
        }
    }
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    check_unit(lo)?;
    check_unit(hi)?;
    if lo > hi {
        return Err(Error::domain(format!("interval [{lo}, {hi}] has lo > hi")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn families() -> Vec<BeliefMeasure> {
        vec![
            BeliefMeasure::uniform(),
            BeliefMeasure::wedge(3).unwrap(),
            BeliefMeasure::wedge(100).unwrap(),
            BeliefMeasure::symmetrized_wedge(100).unwrap(),
            BeliefMeasure::gaussian_mixture(vec![1.0, 2.0], vec![0.2, 0.7], vec![0.05, 0.1])
                .unwrap(),
            BeliefMeasure::tabulated(vec![(0.0, 1.0), (0.3, 3.0), (1.0, 0.5)]).unwrap(),
            BeliefMeasure::wedge(100).unwrap().scaled(0.5).unwrap(),
        ]
    }

    #[test]
    fn wedge_total_mass_is_one() {
        for n in 1..=100 {
            let m = BeliefMeasure::wedge(n).unwrap();
            assert!((m.mass(0.0, 1.0).unwrap() - 1.0).abs() <= QUAD_TOL, "n={n}");
            assert!(
                (m.quadrature_mass(0.0, 1.0).unwrap() - 1.0).abs() <= QUAD_TOL,
                "n={n}"
            );
        }
    }

    #[test]
    fn uniform_wedge_is_lebesgue() {
        let m = BeliefMeasure::wedge(1).unwrap();
        assert_relative_eq!(m.mass(0.25, 0.75).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(wedge_density(1, 0.7).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_interval_has_no_mass() {
        for m in families() {
            assert_eq!(m.mass(0.3, 0.3).unwrap(), 0.0);
        }
    }

    #[test]
    fn wedge_density_values() {
        assert_relative_eq!(
            wedge_density(3, 0.0).unwrap(),
            4.0 + 1.0 / 3.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(wedge_density(3, 0.5).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert!(wedge_density(0, 0.5).is_err());
        assert!(wedge_density(3, 1.5).is_err());
    }

    #[test]
    fn symmetrized_wedge_values() {
        assert_relative_eq!(
            symmetrized_wedge_density(100, 0.5).unwrap(),
            0.01,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            symmetrized_wedge_density(100, 0.0).unwrap(),
            99.01,
            epsilon = 1e-12
        );
        for p in [0.0, 0.13, 0.5, 0.9] {
            assert_relative_eq!(
                symmetrized_wedge_density(1, p).unwrap(),
                1.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn gaussian_values() {
        let peak = gaussian_mixture_density(&[1.0], &[0.5], &[0.1], 0.5).unwrap();
        assert_relative_eq!(peak, 3.989_422_804_014_327, epsilon = 1e-12);
        // second kernel sits 12 stddevs away: exp(-72) is far below 1e-12
        let v = gaussian_mixture_density(&[1.0, 1.0], &[0.2, 0.8], &[0.05, 0.05], 0.2).unwrap();
        assert_relative_eq!(v, 7.978_845_608_028_654, epsilon = 1e-12);
        let w = [1.0, 1.0];
        let m = [0.3, 0.7];
        let s = [0.08, 0.08];
        for p in [0.0, 0.1, 0.45, 0.5] {
            let a = gaussian_mixture_density(&w, &m, &s, p).unwrap();
            let b = gaussian_mixture_density(&w, &m, &s, 1.0 - p).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
        assert!(gaussian_mixture_density(&[0.0], &[0.5], &[0.1], 0.5).is_err());
        assert!(gaussian_mixture_density(&[1.0], &[0.5], &[-0.1], 0.5).is_err());
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for m in families() {
            for &(lo, hi) in &[
                (0.0, 1.0),
                (0.0, 0.005),
                (0.004, 0.3),
                (0.25, 0.999),
                (0.6, 1.0),
            ] {
                let a = m.mass(lo, hi).unwrap();
                let b = m.quadrature_mass(lo, hi).unwrap();
                assert!(
                    (a - b).abs() <= 2.0 * QUAD_TOL,
                    "{:?} [{lo},{hi}]: {a} vs {b}",
                    m.spec()
                );
            }
        }
    }

    #[test]
    fn rejects_bad_intervals_and_measures() {
        let m = BeliefMeasure::uniform();
        assert!(m.mass(0.6, 0.4).is_err());
        assert!(m.mass(-0.1, 0.4).is_err());
        assert!(m.mass(0.1, 1.2).is_err());
        assert!(BeliefMeasure::tabulated(vec![(0.0, 1.0), (1.0, 0.0)]).is_err());
        assert!(BeliefMeasure::tabulated(vec![(0.0, 1.0), (0.9, 1.0)]).is_err());
        assert!(BeliefMeasure::uniform().scaled(0.0).is_err());
        assert!(BeliefMeasure::wedge(0).is_err());
    }

    #[test]
    fn every_family_is_positive_on_grid() {
        for m in families() {
            let min = (0..POSITIVITY_GRID)
                .map(|i| m.density(i as f64 / (POSITIVITY_GRID - 1) as f64))
                .fold(f64::INFINITY, f64::min);
            assert!(min > 0.0);
        }
    }

    proptest! {
        #[test]
        fn mass_is_additive(a in 0.0f64..=1.0, idx in 0usize..7) {
            let m = &families()[idx];
            let whole = m.mass(0.0, 1.0).unwrap();
            let split = m.mass(0.0, a).unwrap() + m.mass(a, 1.0).unwrap();
            prop_assert!((whole - split).abs() <= 2.0 * QUAD_TOL);
        }

        #[test]
        fn mass_is_monotone(xs in proptest::array::uniform4(0.0f64..=1.0), idx in 0usize..7) {
            let mut xs = xs;
            xs.sort_by(f64::total_cmp);
            let m = &families()[idx];
            let inner = m.mass(xs[1], xs[2]).unwrap();
            let outer = m.mass(xs[0], xs[3]).unwrap();
            prop_assert!(inner <= outer + QUAD_TOL);
        }
    }
}
