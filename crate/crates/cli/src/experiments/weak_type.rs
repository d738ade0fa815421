//! nu_k{|I_alpha f| > lambda} against (||f||_1 / lambda)^{n/(n-alpha)} with one fitted constant,
//! compared across a grid and its refinement.

use dunkl_core::operators::{DunklEngine, Grid1D, GridFunction1D, Symbol};
use dunkl_core::rearrangement::{distribution_function, MeasurableSample};
use dunkl_core::DunklStructure;
use num_complex::Complex64;

use super::{fit_constant, test_function};
use crate::report::{Check, Report, Row};
use crate::spec::ExperimentSpec;
use crate::HarnessError;

pub const STABILITY_TOL: f64 = 0.1;

/// I_alpha f on the grid and ||f||_{1,k}; indicators use their exact spectrum.
fn potential(
    engine: &DunklEngine,
    name: &str,
    radius: f64,
    alpha: f64,
) -> Result<(GridFunction1D, f64), HarnessError> {
    let k = engine.multiplicity();
    if name == "indicator" {
        let spec = engine.indicator_spectrum(radius).apply_symbol(Symbol::riesz_potential(alpha));
        let l1 = 2.0 * radius.powf(2.0 * k + 1.0) / (2.0 * k + 1.0);
        return Ok((engine.inverse(&spec)?, l1));
    }
    let phi = test_function(name)?;
    let f = GridFunction1D::from_real_fn(engine.grid(), k, |x| phi(x / radius))?;
    Ok((engine.riesz_potential(&f, alpha)?, engine.norm(&f, 1.0)?))
}

struct Sweep {
    ratios: Vec<f64>,
    measures: Vec<f64>,
    bounds: Vec<f64>,
}

fn sweep(g: &GridFunction1D, l1: f64, levels: &[f64], cfg: &DunklStructure, alpha: f64) -> Result<Sweep, HarnessError> {
    let n = cfg.homogeneous_dimension();
    let sample = MeasurableSample::Grid(g.clone());
    let mut out = Sweep { ratios: Vec::new(), measures: Vec::new(), bounds: Vec::new() };
    for &level in levels {
        let d = distribution_function(&sample, cfg, level)?.to_f64();
        let bound = (l1 / level).powf(n / (n - alpha));
        out.measures.push(d);
        out.bounds.push(bound);
        out.ratios.push(d / bound);
    }
    Ok(out)
}

pub fn run(spec: &ExperimentSpec) -> Result<Report, HarnessError> {
    let prm = &spec.parameters;
    let k = spec.rank_one_k()?;
    let n = 2.0 * k + 1.0;
    let alpha = prm.f64("alpha")?;
    if !(alpha > 0.0 && alpha < n) {
        return Err(HarnessError::Refused(format!("alpha = {alpha} must lie in (0, {n})")));
    }
    let size = prm.usize_or("n", 512)?;
    let count = prm.usize_or("levels", 24)?;
    let tol = prm.f64_or("tolerance", STABILITY_TOL)?;
    let radius = prm.f64_or("radius", 1.0)?;
    let name = prm.str_or("test_function", "indicator")?;
    test_function(name)?;
    if name == "zero" || !(radius > 0.0) || count < 2 {
        return Err(HarnessError::Refused("need a nonzero L^1 test function, radius > 0 and at least two levels".into()));
    }
    let coarse = Grid1D::balanced(size)?;
    let fine = coarse.refined();
    let (e_coarse, e_fine) = (DunklEngine::new(k, coarse)?, DunklEngine::new(k, fine)?);
    let (g_coarse, l1) = potential(&e_coarse, name, radius, alpha)?;
    let (g_fine, l1_fine) = potential(&e_fine, name, radius, alpha)?;

    // Levels whose superlevel sets stay well inside the grid.
    let edge = coarse.node(coarse.len() - 1);
    let outer = g_coarse
        .nodes()
        .iter()
        .zip(&g_coarse.values)
        .filter(|(x, _)| x.abs() >= 0.7 * edge)
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    let (lo, hi) = (1.01 * outer, 0.95 * g_coarse.max_abs());
    if !(hi > lo) {
        return Err(HarnessError::Compute("I_alpha f does not decay inside the grid".into()));
    }
    let levels: Vec<f64> = (0..count).map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64)).collect();

    let cfg = &spec.cfg;
    let a = sweep(&g_coarse, l1, &levels, cfg, alpha)?;
    let b = sweep(&g_fine, l1_fine, &levels, cfg, alpha)?;
    let tight = |s: &Sweep| s.ratios.iter().copied().fold(0.0, f64::max);
    let (c_coarse, c_fine) = (tight(&a), tight(&b));
    let mut report = Report::new(spec);
    for (i, &level) in levels.iter().enumerate() {
        report.rows.push(
            Row::new("fine", level)
                .input("lambda", level)
                .sides(b.measures[i], b.bounds[i])
                .fitted(c_fine),
        );
        report.rows.push(
            Row::new("coarse", level)
                .input("lambda", level)
                .sides(a.measures[i], a.bounds[i])
                .fitted(c_coarse),
        );
    }
    let stability = (c_fine / c_coarse - 1.0).abs();
    report.check(Check::at_most("fitted constant under grid doubling", stability, tol));
    report.check(Check::holds(
        "superlevel measure non-increasing in lambda",
        b.measures.windows(2).all(|w| w[1] <= w[0]),
        "",
    ));
    // Doubling f doubles I_alpha f, so D at 2 lambda is unchanged and the bound
    // picks up 2^{n/(n-alpha)}.
    let doubled = GridFunction1D::new(fine, k, g_fine.values.iter().map(|v| v * Complex64::new(2.0, 0.0)).collect())?;
    let d2 = sweep(&doubled, 2.0 * l1_fine, &levels.iter().map(|l| 2.0 * l).collect::<Vec<_>>(), cfg, alpha)?;
    let dev = d2.ratios.iter().zip(&b.ratios).map(|(x, y)| (x / y - 1.0).abs()).filter(|d| d.is_finite()).fold(0.0, f64::max);
    report.check(Check::at_most("doubling ||f||_1 leaves the fitted constant fixed", dev, 1e-12));
    report.summarize("fitted_constant_coarse", c_coarse);
    report.summarize("fitted_constant_fine", c_fine);
    report.summarize("geometric_mean_ratio", fit_constant(&b.ratios).constant);
    report.summarize("bound_exponent", n / (n - alpha));
    report.summarize("l1_norm", l1_fine);
    report.environment.set("coarse_grid_size", size);
    report.environment.set("fine_grid_size", fine.len());
    report.environment.set("half_width", coarse.half_width());
    report.environment.set("stability_tolerance", tol);
    Ok(report)
}
