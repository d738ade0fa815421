//! Samples f* on a log grid of t; the CSV view is (t, f_star_t).

use dunkl_core::rearrangement::{decreasing_rearrangement, distribution_function, MeasurableSample};
use dunkl_core::RadialProfile;

use crate::report::{Check, Report, Table};
use crate::spec::ExperimentSpec;
use crate::HarnessError;

/// Equimeasurability slack, relative to 1 + D_f(s).
pub const LEVEL_TOL: f64 = 1e-6;

fn sample(spec: &ExperimentSpec) -> Result<MeasurableSample, HarnessError> {
    let p = &spec.parameters;
    Ok(match p.str_or("sample", "indicator")? {
        "indicator" => MeasurableSample::Indicator { radius: p.f64_or("radius", 1.0)?, height: p.f64_or("height", 1.0)? },
        "power" => MeasurableSample::Power { coefficient: p.f64_or("coefficient", 1.0)?, exponent: p.f64("exponent")? },
        "truncated_power" => {
            MeasurableSample::TruncatedPower { delta: p.f64("exponent")?, radius: p.f64_or("radius", 1.0)? }
        }
        "gaussian" => MeasurableSample::Radial(RadialProfile::gaussian()),
        other => {
            return Err(HarnessError::Refused(format!(
                "unknown sample {other:?}; known: indicator, power, truncated_power, gaussian"
            )))
        }
    })
}

pub fn run(spec: &ExperimentSpec) -> Result<Report, HarnessError> {
    let p = &spec.parameters;
    let f = sample(spec)?;
    let (t_min, t_max) = (p.f64_or("t_min", 1e-3)?, p.f64_or("t_max", 1e3)?);
    let points = p.usize_or("points", 61)?;
    if !(t_min > 0.0 && t_max > t_min && points >= 2) {
        return Err(HarnessError::Refused(format!("need 0 < t_min < t_max and points >= 2, got {t_min}, {t_max}, {points}")));
    }
    let cfg = &spec.cfg;
    let star = decreasing_rearrangement(&f, cfg)?;
    let mut report = Report::new(spec);
    let ts: Vec<f64> = (0..points).map(|i| t_min * (t_max / t_min).powf(i as f64 / (points - 1) as f64)).collect();
    let values: Vec<f64> = ts.iter().map(|&t| star.eval(t)).collect();
    report.check(Check::holds(
        "f* is non-increasing",
        values.windows(2).all(|w| w[1] <= w[0]) && star.is_non_increasing(),
        "",
    ));
    let mut worst: f64 = 0.0;
    for &v in values.iter().filter(|v| **v > 0.0 && v.is_finite()) {
        let s = 0.999 * v;
        let d = distribution_function(&f, cfg, s)?.to_f64();
        let m = star.level_measure(s).to_f64();
        if d.is_finite() {
            worst = worst.max((d - m).abs() / (1.0 + d));
        }
    }
    report.check(Check::at_most("D_f(s) = |{f* > s}|", worst, LEVEL_TOL));
    if let Ok(profile) = serde_json::to_value(&star) {
        report.summarize("profile", profile);
    }
    report.environment.set("level_tolerance", LEVEL_TOL);
    report.table = Some(Table {
        columns: vec!["t".into(), "f_star_t".into()],
        rows: ts.iter().zip(&values).map(|(t, v)| vec![*t, *v]).collect(),
    });
    Ok(report)
}
