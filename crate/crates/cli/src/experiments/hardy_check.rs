//! Hardy condition for LineWeight pairs and sampled ratios against the constant bound.

use dunkl_core::hardy::{
    hardy_condition_direct, hardy_condition_dual, hardy_constant_bound, verify_hardy, HardyError, HardySide,
    LineWeight, StepFunction, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{finite, Check, Report, Row};
use crate::spec::ExperimentSpec;
use crate::HarnessError;

/// Relative slack on ratio <= bound * sup.
pub const BOUND_SLACK: f64 = 1e-9;

fn random_step(rng: &mut ChaCha8Rng) -> StepFunction {
    let m = rng.gen_range(1..6);
    let mut edges = vec![rng.gen_range(0.0..0.5)];
    for _ in 0..m {
        let last = *edges.last().unwrap();
        edges.push(last + rng.gen_range(0.1..2.0));
    }
    let values = (0..m).map(|_| rng.gen_range(0.0..3.0)).collect();
    StepFunction::new(edges, values).expect("increasing edges")
}

pub fn run(spec: &ExperimentSpec) -> Result<Report, HarnessError> {
    let prm = &spec.parameters;
    let mu: LineWeight = prm.str_or("mu", "t^-2")?.parse()?;
    let theta: LineWeight = prm.str_or("theta", "1")?.parse()?;
    let (p, q) = (prm.f64("p")?, prm.f64("q")?);
    let side = match prm.str_or("side", "direct")? {
        "direct" => HardySide::Direct,
        "dual" => HardySide::Dual,
        other => return Err(HarnessError::Refused(format!("side must be direct or dual, got {other:?}"))),
    };
    let samples = prm.usize_or("samples", 20)?;
    let condition = match side {
        HardySide::Direct => hardy_condition_direct(&mu, &theta, p, q)?,
        HardySide::Dual => hardy_condition_dual(&mu, &theta, p, q)?,
    };
    let mut report = Report::new(spec);
    let bound = hardy_constant_bound(p, q);
    report.summarize("verdict", serde_json::to_value(condition.verdict).unwrap());
    report.summarize("sup", finite(condition.sup.to_f64()));
    report.summarize("argmax_s", condition.argmax_s);
    report.summarize("constant_bound", bound);
    report.summarize("witnesses", serde_json::to_value(&condition.witnesses).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let f = random_step(&mut rng);
        let row = Row::new("sample", i as f64).input("support_end", *f.edges.last().unwrap());
        match verify_hardy(&f, &mu, &theta, p, q, side) {
            Ok(c) => {
                worst = worst.max(c.ratio);
                report.rows.push(row.sides(c.lhs, c.rhs).fitted(c.ratio));
            }
            Err(HardyError::DivergentRhs) => report.rows.push(row.sides(f64::NAN, f64::INFINITY)),
            Err(e) => return Err(e.into()),
        }
    }
    match condition.verdict {
        Verdict::Finite => {
            let limit = bound * condition.sup.to_f64();
            report.check(
                Check::at_most("max ratio <= q^(1/q) p'^(1/p') B", worst, limit * (1.0 + BOUND_SLACK))
                    .detail(format!("B = {}", condition.sup)),
            );
        }
        Verdict::Infinite => report.check(Check::holds(
            "condition classified",
            true,
            "B is infinite; sampled ratios are reported without a bound",
        )),
        Verdict::CannotClassify => report.check(Check::holds(
            "condition classified",
            false,
            "tail behaviour of the weights could not be determined",
        )),
    }
    report.environment.set("samples", samples);
    report.environment.set("bound_slack", BOUND_SLACK);
    Ok(report)
}
