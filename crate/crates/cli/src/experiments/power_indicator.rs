//! Power weights u = |x|^delta, v = |x|^beta and f = chi_{(0,r)}(|x|): closed forms
//! against the numeric level-set path of the rearrangement module.

use dunkl_core::rearrangement::{
    decreasing_rearrangement, distribution_function, hl_pairing, reciprocal_rearrangement, MeasurableSample,
    WeightSpec,
};
use dunkl_core::{DunklStructure, RadialProfile};
use serde::{Deserialize, Serialize};

use crate::report::{Check, Report, Row};
use crate::spec::ExperimentSpec;
use crate::HarnessError;

pub const REL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tuple {
    pub multiplicities: Vec<f64>,
    pub delta: f64,
    pub beta: f64,
    pub r: f64,
}

/// (multiplicities, delta, beta, r) over d = 1, 2, 3.
pub fn default_tuples() -> Vec<Tuple> {
    let t = |ks: &[f64], delta, beta, r| Tuple { multiplicities: ks.to_vec(), delta, beta, r };
    vec![
        t(&[0.0], -0.5, 1.0, 2.0),
        t(&[0.5], -0.5, 1.0, 2.0),
        t(&[1.0], -0.5, 1.0, 2.0),
        t(&[1.0], -2.5, 0.5, 0.7),
        t(&[2.5], -1.0, 3.0, 1.5),
        t(&[0.0], -0.9, 0.3, 5.0),
        t(&[2.5], -5.5, 2.0, 0.5),
        t(&[0.0, 0.0], -1.0, 2.0, 1.0),
        t(&[0.5, 1.5], -0.5, 1.0, 2.0),
        t(&[1.0, 1.0], -4.0, 0.25, 3.0),
        t(&[0.25, 0.75], -0.1, 4.0, 1.2),
        t(&[0.5, 0.5, 0.5], -2.0, 1.5, 0.8),
    ]
}

pub const S_POINTS: [f64; 2] = [0.5, 2.0];
pub const T_POINTS: [f64; 3] = [0.1, 1.0, 10.0];

/// One compared quantity: name, closed form, numeric value.
pub struct Quantity {
    pub name: String,
    pub exact: f64,
    pub numeric: f64,
}

pub fn quantities(tuple: &Tuple) -> Result<Vec<Quantity>, HarnessError> {
    let cfg = DunklStructure::z2(&tuple.multiplicities)?;
    let n = cfg.homogeneous_dimension();
    let (delta, beta, r) = (tuple.delta, tuple.beta, tuple.r);
    if !(delta < 0.0 && beta > 0.0 && delta > -n && r > 0.0) {
        return Err(HarnessError::Refused(format!(
            "need -(2 gamma + d) < delta < 0 < beta and r > 0, got delta = {delta}, beta = {beta}, r = {r} with 2 gamma + d = {n}"
        )));
    }
    let nu1 = cfg.ball_measure(1.0);
    let dk = cfg.sphere_constant();
    let big_r = nu1 * r.powf(n);
    let u = MeasurableSample::Radial(RadialProfile::power(1.0, delta));
    let inv_v = MeasurableSample::Radial(RadialProfile::power(1.0, -beta));
    let f = MeasurableSample::Radial(RadialProfile::indicator(r, 1.0));
    let mut out = Vec::new();
    let mut push = |name: String, exact: f64, numeric: f64| out.push(Quantity { name, exact, numeric });
    for s in S_POINTS {
        push(format!("D_u(s={s})"), nu1 * s.powf(n / delta), distribution_function(&u, &cfg, s)?.to_f64());
        push(format!("D_1/v(s={s})"), nu1 * s.powf(-n / beta), distribution_function(&inv_v, &cfg, s)?.to_f64());
    }
    push("D_f(s=0.5)".into(), big_r, distribution_function(&f, &cfg, 0.5)?.to_f64());
    push("D_f(s=1.5)".into(), 0.0, distribution_function(&f, &cfg, 1.5)?.to_f64());
    let u_star = decreasing_rearrangement(&u, &cfg)?;
    let v_star = reciprocal_rearrangement(&WeightSpec::Radial(RadialProfile::power(1.0, beta)), &cfg)?;
    for t in T_POINTS {
        push(format!("u*(t={t})"), nu1.powf(-delta / n) * t.powf(delta / n), u_star.eval(t));
        push(format!("(1/v)*(t={t})"), nu1.powf(beta / n) * t.powf(-beta / n), v_star.eval(t));
    }
    let f_star = decreasing_rearrangement(&f, &cfg)?;
    push("f*(t=R/2)".into(), 1.0, f_star.eval(0.5 * big_r));
    push("f*(t=2R)".into(), 0.0, f_star.eval(2.0 * big_r));
    let pu = hl_pairing(&f, &WeightSpec::Radial(RadialProfile::power(1.0, delta)), &cfg)?;
    let want_u = dk * r.powf(delta + n) / (delta + n);
    push("int f u".into(), want_u, pu.lhs_direct.to_f64());
    push("int f* u*".into(), want_u, pu.rhs_upper.to_f64());
    let pv = hl_pairing(&f, &WeightSpec::Radial(RadialProfile::power(1.0, beta)), &cfg)?;
    let want_v = dk * r.powf(beta + n) / (beta + n);
    push("int f v".into(), want_v, pv.lhs_direct.to_f64());
    push("int f* / (1/v)*".into(), want_v, pv.lhs_lower.to_f64());
    Ok(out)
}

/// Relative deviation, absolute when the exact value is zero.
pub fn deviation(exact: f64, numeric: f64) -> f64 {
    if exact == 0.0 {
        numeric.abs()
    } else {
        (numeric - exact).abs() / exact.abs()
    }
}

pub fn run(spec: &ExperimentSpec) -> Result<Report, HarnessError> {
    let prm = &spec.parameters;
    let tol = prm.f64_or("tolerance", REL_TOL)?;
    let tuples: Vec<Tuple> = match prm.0.get("tuples") {
        None => default_tuples(),
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| HarnessError::Refused(format!("tuples must be a list of {{multiplicities, delta, beta, r}}: {e}")))?,
    };
    let mut report = Report::new(spec);
    let mut worst: f64 = 0.0;
    // Validate everything before computing anything.
    for t in &tuples {
        let cfg = DunklStructure::z2(&t.multiplicities)?;
        let n = cfg.homogeneous_dimension();
        if !(t.delta < 0.0 && t.beta > 0.0 && t.delta > -n && t.r > 0.0) {
            return Err(HarnessError::Refused(format!("tuple {t:?} violates -(2 gamma + d) < delta < 0 < beta, r > 0")));
        }
    }
    for (i, t) in tuples.iter().enumerate() {
        for q in quantities(t)? {
            let dev = deviation(q.exact, q.numeric);
            worst = worst.max(dev);
            report.rows.push(
                Row::new(format!("t{i:02} {}", q.name), i as f64)
                    .input("d", t.multiplicities.len() as f64)
                    .input("gamma", t.multiplicities.iter().sum())
                    .input("delta", t.delta)
                    .input("beta", t.beta)
                    .input("r", t.r)
                    .sides(q.numeric, q.exact)
                    .judged(tol, dev <= tol),
            );
        }
    }
    report.check(Check::at_most("max closed-vs-numeric deviation", worst, tol));
    report.summarize("tuples", serde_json::to_value(&tuples).unwrap());
    report.environment.set("tolerance", tol);
    Ok(report)
}
