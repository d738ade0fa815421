//! One module per experiment, plus the shared test functions and fits.

pub mod admissible;
pub mod constants;
pub mod power_indicator;
pub mod hardy_check;
pub mod maximal;
pub mod rearrange;
pub mod riesz;
pub mod riesz_bound;
pub mod sobolev;
pub mod weak_type;

use dunkl_core::operators::{DunklEngine, GridFunction1D};

use crate::HarnessError;

/// e^{-1/(1-x^2)} on (-1, 1).
pub fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

pub fn gaussian(x: f64) -> f64 {
    (-x * x / 2.0).exp()
}

/// Real test functions addressable by name.
pub fn test_function(name: &str) -> Result<fn(f64) -> f64, HarnessError> {
    Ok(match name {
        "gaussian" => gaussian,
        "bump" => bump,
        "indicator" => |x: f64| if x.abs() < 1.0 { 1.0 } else { 0.0 },
        "shifted_gaussian" => |x: f64| gaussian(x - 1.0),
        "zero" => |_| 0.0,
        other => {
            return Err(HarnessError::Refused(format!(
                "unknown test function {other:?}; known: gaussian, bump, indicator, shifted_gaussian, zero"
            )))
        }
    })
}

/// Least squares of log c against a constant model: the geometric mean and the max/min spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub constant: f64,
    pub spread: f64,
}

pub fn fit_constant(ratios: &[f64]) -> Fit {
    let logs: Vec<f64> = ratios.iter().filter(|r| **r > 0.0 && r.is_finite()).map(|r| r.ln()).collect();
    if logs.is_empty() {
        return Fit { constant: f64::NAN, spread: f64::NAN };
    }
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    Fit { constant: mean.exp(), spread: drift(ratios) }
}

/// max/min - 1 over positive finite values.
pub fn drift(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .filter(|r| **r > 0.0 && r.is_finite())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    if hi == 0.0 {
        f64::NAN
    } else {
        hi / lo - 1.0
    }
}

/// Least-squares slope of log y against log x.
pub fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(n, d), (x, y)| (n + (x - mx) * (y - my), d + (x - mx).powi(2)));
    num / den
}

/// Weighted q-norm of grid samples that decay like C_{+-} |x|^e outside the grid.
///
/// The tail constants are fitted on the outer 30% of each half-line and the
/// power tail beyond the last node is added in closed form.
pub struct TailNorm {
    pub norm: f64,
    /// Fraction of norm^q contributed by the fitted tails.
    pub tail_fraction: f64,
    /// Spread of |g| |x|^{-e} over the fitting windows.
    pub fit_spread: f64,
}

pub fn tail_corrected_norm(
    engine: &DunklEngine,
    g: &GridFunction1D,
    q: f64,
    delta: f64,
    e: f64,
) -> Result<TailNorm, HarnessError> {
    let k = engine.multiplicity();
    let base = engine.weighted_norm(g, q, delta)?.powf(q);
    let m = e * q + delta + 2.0 * k;
    if !(m < -1.0) {
        return Err(HarnessError::Refused(format!(
            "|g|^{q} |x|^{} decays like |x|^{m}, which is not integrable at infinity",
            delta + 2.0 * k
        )));
    }
    let grid = g.grid;
    let edge = grid.node(grid.len() - 1);
    let mut tail = 0.0;
    let mut spread: f64 = 0.0;
    for positive in [true, false] {
        let c: Vec<f64> = grid
            .nodes()
            .iter()
            .zip(&g.values)
            .filter(|(x, _)| (**x > 0.0) == positive && x.abs() >= 0.7 * edge)
            .map(|(x, v)| v.norm() * x.abs().powf(-e))
            .collect();
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        spread = spread.max(drift(&c));
        tail += mean.powf(q) * edge.powf(m + 1.0) / -(m + 1.0);
    }
    let total = base + tail;
    Ok(TailNorm { norm: total.powf(1.0 / q), tail_fraction: tail / total, fit_spread: spread })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_and_slopes() {
        let f = fit_constant(&[2.0, 8.0]);
        assert!((f.constant - 4.0).abs() < 1e-12);
        assert!((f.spread - 3.0).abs() < 1e-12);
        let xs = [0.5, 1.0, 2.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.75)).collect();
        assert!((log_slope(&xs, &ys) + 0.75).abs() < 1e-12);
    }

    #[test]
    fn bump_is_smooth_and_supported() {
        assert_eq!(bump(1.0), 0.0);
        assert!((bump(0.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!(bump(0.999) < 1e-200);
    }
}
