//! Scalar numerical routines: bracketing root finding, golden-section
//! maximisation and adaptive Simpson quadrature.

use crate::{Error, Result};

/// Hard cap on bisection steps. Interval halving reaches the resolution of
/// `f64` long before this.
const MAX_BISECTIONS: usize = 2_000;

/// Finds a root of `f` in the bracket spanned by `a` and `b`.
///
/// The endpoints may be given in either order and `f` must change sign
/// between them (a zero at an endpoint is accepted). Iteration stops once the
/// bracket is narrower than `x_tol` *and* `|f(mid)| <= f_tol`, or when the
/// bracket cannot be split further in floating point. In the latter case the
/// bracket end with the smaller `|f|` is returned.
pub fn bisect<F>(mut f: F, a: f64, b: f64, x_tol: f64, f_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let fa = f(a)?;
    if fa == 0.0 {
        return Ok(a);
    }
    let fb = f(b)?;
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::domain(format!(
            "bisection bracket [{a}, {b}] does not change sign ({fa}, {fb})"
        )));
    }
    // `pos` is the endpoint where f > 0.
    let (mut pos, mut neg, mut f_pos, mut f_neg) = if fa > 0.0 {
        (a, b, fa, fb)
    } else {
        (b, a, fb, fa)
    };
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (pos + neg);
        if mid == pos || mid == neg {
            return Ok(if f_pos.abs() <= f_neg.abs() { pos } else { neg });
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        let narrow = (pos - neg).abs() < x_tol;
        if narrow && fm.abs() <= f_tol {
            return Ok(mid);
        }
        if fm > 0.0 {
            pos = mid;
            f_pos = fm;
        } else {
            neg = mid;
            f_neg = fm;
        }
    }
    Err(Error::IterationLimit {
        what: "bisection",
        iterations: MAX_BISECTIONS,
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximiser of `f` on `[lo, hi]`.
///
/// Returns `(argmax, max)`. Assumes nothing beyond continuity; on a
/// multimodal interval it finds a local maximum.
pub fn golden_max<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo <= hi) || !(tol > 0.0) {
        return Err(Error::domain(format!(
            "golden-section search needs lo <= hi and tol > 0 (got [{lo}, {hi}], tol {tol})"
        )));
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid)?;
    // Report the best point actually evaluated.
    let best = [(mid, fm), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((mid, fm), |acc, c| if c.1 > acc.1 { c } else { acc });
    Ok(best)
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: &F, lo: f64, hi: f64, tol: f64, max_depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    if lo == hi {
        return Ok(0.0);
    }
    let fa = f(lo);
    let fb = f(hi);
    let m = 0.5 * (lo + hi);
    let fm = f(m);
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, lo, hi, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature { lo: a, hi: b });
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2_either_orientation() {
        let f = |x: f64| Ok(x * x - 2.0);
        let r1 = bisect(f, 0.0, 2.0, 1e-12, 1e-12).unwrap();
        let r2 = bisect(f, 2.0, 0.0, 1e-12, 1e-12).unwrap();
        assert!((r1 - 2f64.sqrt()).abs() < 1e-12);
        assert!((r2 - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-9, 1e-9).is_err());
    }

    #[test]
    fn bisect_drives_residual_of_steep_function() {
        // slope -1000: width alone would leave a residual 1000x the width
        let r = bisect(|x| Ok(-1000.0 * (x - 0.3)), 0.0, 1.0, 1e-10, 1e-10).unwrap();
        assert!((1000.0 * (r - 0.3)).abs() <= 1e-10);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, fx) = golden_max(|x| Ok(-(x - 0.37) * (x - 0.37) + 2.0), 0.0, 1.0, 1e-9).unwrap();
        // a flat peak only pins x down to about sqrt(machine epsilon)
        assert!((x - 0.37).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn simpson_integrates_smooth_and_kinked() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 40).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
        let v = adaptive_simpson(&|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-12, 40).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-10);
    }
}
