//! ||f_lambda||_{q,u} / || |T f_lambda| ||_p over dilations of the bump, u = |x|^delta.
//!
//! The ratio scales like lambda^{n/p - 1 - (delta + n)/q}; the Sobolev exponent
//! delta = q[n(1/p - 1/q) - 1] makes it flat.

use dunkl_core::operators::{dunkl_gradient_norm, DunklEngine, Grid1D, GridFunction1D};
use dunkl_core::rearrangement::WeightSpec;
use dunkl_core::weights::{rearranged_weight, sobolev_conditions, sobolev_power_exponent, AdmissibilityVerdict};

use super::{drift, fit_constant, test_function};
use crate::report::{Check, Report, Row};
use crate::spec::ExperimentSpec;
use crate::HarnessError;

pub const RATIO_TOL: f64 = 0.03;
/// Relative slack when matching delta to the Sobolev exponent.
pub const EXPONENT_TOL: f64 = 1e-9;

pub fn run(spec: &ExperimentSpec) -> Result<Report, HarnessError> {
    let prm = &spec.parameters;
    let k = spec.rank_one_k()?;
    let n = 2.0 * k + 1.0;
    let p = prm.f64("p")?;
    let q = match prm.opt_f64("q")? {
        Some(q) => q,
        // u = 1: 1/q = 1/p - 1/n.
        None if (1.0 / p - 1.0 / n) > 0.0 => 1.0 / (1.0 / p - 1.0 / n),
        None => return Err(HarnessError::Refused(format!("no conformal q for p = {p}, n = {n}"))),
    };
    let want = sobolev_power_exponent(p, q, n);
    let delta = prm.f64_or("delta", want)?;
    if (delta - want).abs() > EXPONENT_TOL * (1.0 + want.abs()) {
        return Err(HarnessError::Refused(format!(
            "delta = {delta} differs from q[n(1/p-1/q)-1] = {want}"
        )));
    }
    if !(2.0 * k + delta > -1.0) {
        return Err(HarnessError::Refused(format!("|x|^{delta} is not locally integrable for nu_k")));
    }
    let r = prm.f64_or("r", (p.max(1.0) + n) / 2.0)?;
    let u_star = rearranged_weight(&WeightSpec::Power(delta), &spec.cfg)?;
    let conditions = sobolev_conditions(&u_star, p, q, r, &spec.cfg)?;
    if conditions.verdict != AdmissibilityVerdict::Admissible {
        return Err(HarnessError::Refused(format!(
            "weight |x|^{delta} fails the Sobolev conditions with r = {r}: {:?}",
            conditions.verdict
        )));
    }
    let lambdas = prm.list_or("lambdas", &[0.5, 1.0, 2.0])?;
    if lambdas.iter().any(|l| !(*l > 0.0)) {
        return Err(HarnessError::Refused("dilations must be positive".into()));
    }
    let size = prm.usize_or("n", 4096)?;
    let half_width = prm.f64_or("half_width", 2.5)?;
    let tol = prm.f64_or("tolerance", RATIO_TOL)?;
    let name = prm.str_or("test_function", "bump")?;
    let phi = test_function(name)?;
    let grid = Grid1D::new(size, half_width)?;
    let engine = DunklEngine::new(k, grid)?;

    let mut report = Report::new(spec);
    report.summarize("q", q);
    report.summarize("delta", delta);
    report.summarize("r", r);
    report.summarize("sup_condition_1", conditions.sup_condition_1.value());
    report.summarize("sup_condition_2", conditions.sup_condition_2.value());
    report.environment.set("grid_size", size);
    report.environment.set("half_width", half_width);
    report.environment.set("test_function", name);
    let mut ratios = Vec::new();
    for &lambda in &lambdas {
        let f = GridFunction1D::from_real_fn(grid, k, |x| phi(lambda * x))?;
        if f.boundary_ratio() > 1e-12 && f.max_abs() > 0.0 {
            return Err(HarnessError::Refused(format!("f(lambda x) with lambda = {lambda} is not contained in the grid")));
        }
        let lhs = engine.weighted_norm(&f, q, delta)?;
        let rhs = engine.norm(&dunkl_gradient_norm(&f), p)?;
        let row = Row::new("dilation", lambda).input("lambda", lambda).sides(lhs, rhs);
        if rhs > 0.0 {
            ratios.push(lhs / rhs);
        }
        report.rows.push(row);
    }
    if ratios.is_empty() {
        report.check(Check::holds("trivial", true, "f = 0: both norms vanish"));
        return Ok(report);
    }
    let fit = fit_constant(&ratios);
    for r in report.rows.iter_mut() {
        r.fitted_constant = Some(fit.constant);
        r.tolerance = Some(tol);
    }
    report.summarize("fitted_constant", fit.constant);
    report.check(Check::at_most("ratio drift across dilations", drift(&ratios), tol));
    Ok(report)
}
