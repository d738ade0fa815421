//! gamma, c_k and d_k, with the Gaussian and ball integrals as self-checks.

use dunkl_core::RadialProfile;

use crate::report::{Check, Report};
use crate::spec::ExperimentSpec;
use crate::HarnessError;

pub const GAUSSIAN_TOL: f64 = 1e-8;
pub const BALL_TOL: f64 = 1e-10;

pub fn run(spec: &ExperimentSpec) -> Result<Report, HarnessError> {
    let cfg = &spec.cfg;
    let mut report = Report::new(spec);
    let (gamma, c_k, d_k) = (cfg.gamma_index(), cfg.mehta_constant(), cfg.sphere_constant());
    report.summarize("gamma", gamma);
    report.summarize("c_k", c_k);
    report.summarize("d_k", d_k);
    report.summarize("homogeneous_dimension", cfg.homogeneous_dimension());

    let g = cfg.radial_integral(&RadialProfile::gaussian())?;
    report.check(Check::at_most("gaussian integral = 1/c_k", (g * c_k - 1.0).abs(), GAUSSIAN_TOL));
    let ball = cfg.radial_integral(&RadialProfile::indicator(1.3, 1.0))?;
    let want = cfg.ball_measure(1.3);
    report.check(Check::at_most("indicator integral = ball measure", (ball / want - 1.0).abs(), BALL_TOL));
    report.environment.set("gaussian_tolerance", GAUSSIAN_TOL);
    report.environment.set("ball_tolerance", BALL_TOL);
    Ok(report)
}
