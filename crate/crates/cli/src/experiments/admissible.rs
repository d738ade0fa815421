//! Power-weight admissibility for the Riesz potential.

use dunkl_core::weights::power_weight_admissible;

use crate::report::{Check, Report};
use crate::spec::ExperimentSpec;
use crate::HarnessError;

pub fn run(spec: &ExperimentSpec) -> Result<Report, HarnessError> {
    let prm = &spec.parameters;
    let (p, q, alpha) = (prm.f64("p")?, prm.f64("q")?, prm.f64("alpha")?);
    let (delta, beta) = (prm.f64("delta")?, prm.f64("beta")?);
    let r = prm.opt_f64("r")?;
    let result = power_weight_admissible(p, q, alpha, delta, beta, r, &spec.cfg)?;
    let mut report = Report::new(spec);
    report.summarize("admissible", result.admissible);
    report.summarize("reasons", serde_json::to_value(&result.reasons).unwrap());
    if let Some(r) = &result.report {
        report.summarize("conditions", serde_json::to_value(r).unwrap());
    }
    match prm.str_or("expect", "any")? {
        "any" => {}
        "admissible" => report.check(Check::holds("expected admissible", result.admissible, "")),
        "not_admissible" => report.check(Check::holds("expected not admissible", !result.admissible, "")),
        other => {
            return Err(HarnessError::Refused(format!(
                "expect must be any, admissible or not_admissible, got {other:?}"
            )))
        }
    }
    Ok(report)
}
