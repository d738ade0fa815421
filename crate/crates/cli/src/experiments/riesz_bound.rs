//! ||I_alpha f_lambda||_{q,u} / ||f_lambda||_{p,v} over a dilation family f_lambda = phi(lambda x).
//!
//! With u = |x|^delta and v = |x|^beta the ratio scales like lambda^{-e},
//! e = alpha + (delta + n)/q - (beta + n)/p, so admissible exponents give a flat ratio.

use dunkl_core::operators::{DunklEngine, Grid1D, GridFunction1D};
use dunkl_core::weights::power_weight_admissible;

use super::{drift, fit_constant, log_slope, tail_corrected_norm, test_function};
use crate::report::{Check, Report, Row};
use crate::spec::ExperimentSpec;
use crate::HarnessError;

pub const RATIO_TOL: f64 = 0.02;
pub const MIN_DRIFT: f64 = 0.2;

pub fn scaling_exponent(p: f64, q: f64, alpha: f64, delta: f64, beta: f64, n: f64) -> f64 {
    alpha + (delta + n) / q - (beta + n) / p
}

pub fn run(spec: &ExperimentSpec) -> Result<Report, HarnessError> {
    let prm = &spec.parameters;
    let k = spec.rank_one_k()?;
    let n = 2.0 * k + 1.0;
    let (p, q, alpha) = (prm.f64("p")?, prm.f64("q")?, prm.f64("alpha")?);
    let (delta, beta) = (prm.f64_or("delta", 0.0)?, prm.f64_or("beta", 0.0)?);
    let lambdas = prm.list_or("lambdas", &[0.5, 1.0, 2.0, 4.0])?;
    let size = prm.usize_or("n", 1024)?;
    let tol = prm.f64_or("tolerance", RATIO_TOL)?;
    let min_drift = prm.f64_or("min_drift", MIN_DRIFT)?;
    let expect_drift = match prm.str_or("expect", "constant")? {
        "constant" => false,
        "drift" => true,
        other => return Err(HarnessError::Refused(format!("expect must be constant or drift, got {other:?}"))),
    };
    let name = prm.str_or("test_function", "gaussian")?;
    let phi = test_function(name)?;
    if lambdas.iter().any(|l| !(*l > 0.0)) || lambdas.len() < 2 {
        return Err(HarnessError::Refused("need at least two positive dilations".into()));
    }
    if !(2.0 * k + delta > -1.0 && 2.0 * k + beta > -1.0) {
        return Err(HarnessError::Refused(format!(
            "|x|^delta and |x|^beta must be locally integrable for nu_k (delta, beta > {})",
            -n
        )));
    }
    let adm = power_weight_admissible(p, q, alpha, delta, beta, prm.opt_f64("r")?, &spec.cfg)?;
    let failed: Vec<String> = adm.reasons.iter().filter(|c| !c.holds).map(|c| format!("{} ({})", c.name, c.detail)).collect();
    if !expect_drift && !adm.admissible {
        return Err(HarnessError::Refused(format!("weights are not admissible: {}", failed.join("; "))));
    }
    if expect_drift && adm.admissible {
        return Err(HarnessError::Refused("drift was requested but the weights are admissible".into()));
    }
    let e = scaling_exponent(p, q, alpha, delta, beta, n);

    let grid = Grid1D::balanced(size)?;
    let engine = DunklEngine::new(k, grid)?;
    let mut report = Report::new(spec);
    report.summarize("admissible", adm.admissible);
    report.summarize("failed_conditions", failed);
    report.summarize("predicted_log_slope", 0.0 - e);
    report.environment.set("grid_size", size);
    report.environment.set("half_width", grid.half_width());
    report.environment.set("test_function", name);

    let mut ratios = Vec::new();
    let mut tail_max: f64 = 0.0;
    for &lambda in &lambdas {
        let f = GridFunction1D::from_real_fn(grid, k, |x| phi(lambda * x))?;
        let rhs = engine.weighted_norm(&f, p, beta)?;
        if rhs == 0.0 {
            report.rows.push(Row::new("dilation", lambda).input("lambda", lambda).sides(0.0, 0.0));
            continue;
        }
        let potential = engine.riesz_potential(&f, alpha)?;
        let lhs = tail_corrected_norm(&engine, &potential, q, delta, alpha - n)?;
        tail_max = tail_max.max(lhs.tail_fraction);
        ratios.push(lhs.norm / rhs);
        report.rows.push(
            Row::new("dilation", lambda)
                .input("lambda", lambda)
                .input("tail_fraction", lhs.tail_fraction)
                .input("tail_fit_spread", lhs.fit_spread)
                .sides(lhs.norm, rhs),
        );
    }
    if ratios.is_empty() {
        report.check(Check::holds("trivial", true, "f = 0: both norms vanish"));
        return Ok(report);
    }
    let fit = fit_constant(&ratios);
    let used: Vec<f64> = report.rows.iter().filter(|r| r.ratio.is_some()).map(|r| r.sweep).collect();
    let slope = log_slope(&used, &ratios);
    for r in report.rows.iter_mut() {
        r.fitted_constant = Some(fit.constant);
        r.tolerance = Some(if expect_drift { min_drift } else { tol });
    }
    report.summarize("fitted_constant", fit.constant);
    report.summarize("measured_log_slope", slope);
    report.summarize("max_tail_fraction", tail_max);
    let spread = drift(&ratios);
    if expect_drift {
        report.check(Check::at_least("ratio drift across dilations", spread, min_drift));
    } else {
        report.check(Check::at_most("ratio drift across dilations", spread, tol));
    }
    Ok(report)
}
