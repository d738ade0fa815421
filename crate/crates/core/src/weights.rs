//! Two-weight boundedness conditions expressed through rearranged weights.
//!
//! Every condition reduces to a supremum of a product of two profile moments,
//! which `hardy::sup_product` evaluates. Power profiles integrate in closed form.

use serde::{Deserialize, Serialize};

use crate::extended::Extended;
use crate::hardy::{sup_product, Factor, HardyError, Integrand, Side, SupReport, Verdict, EXPONENT_TOL};
use crate::measure::DunklStructure;
use crate::rearrangement::{
    combined_hints, decreasing_rearrangement, moment, moment_by_quadrature, reciprocal_rearrangement,
    MeasurableSample, RearrangedProfile, RearrangementError, WeightSpec,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightsError {
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error(transparent)]
    Hardy(#[from] HardyError),
    #[error(transparent)]
    Rearrangement(#[from] RearrangementError),
}

type Result<T> = std::result::Result<T, WeightsError>;

/// Simultaneous weak types (p1, q1) and (p2, q2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakTypePair {
    pub p1: f64,
    pub q1: f64,
    pub p2: f64,
    pub q2: f64,
}

impl WeakTypePair {
    pub fn new(p1: f64, q1: f64, p2: f64, q2: f64) -> Result<Self> {
        if !(1.0 <= p1 && p1 < p2 && p2.is_finite()) {
            return Err(WeightsError::Range(format!("need 1 <= p1 < p2 < inf, got p1 = {p1}, p2 = {p2}")));
        }
        if !(1.0 <= q1 && q1 < q2 && q2.is_finite()) {
            return Err(WeightsError::Range(format!("need 1 <= q1 < q2 < inf, got q1 = {q1}, q2 = {q2}")));
        }
        Ok(Self { p1, q1, p2, q2 })
    }

    /// Weak (1, n/(n-alpha)) and strong (r, 1/(1/r - alpha/n)) types of I_alpha.
    pub fn riesz(alpha: f64, r: f64, n: f64) -> Result<Self> {
        check_riesz_range(alpha, r, n)?;
        Self::new(1.0, 1.0 / (1.0 - alpha / n), r, 1.0 / (1.0 / r - alpha / n))
    }

    pub fn lambda1(&self) -> f64 {
        1.0 / self.q1 - 1.0 / self.q2
    }

    pub fn lambda2(&self) -> f64 {
        1.0 / self.p1 - 1.0 / self.p2
    }
}

fn check_riesz_range(alpha: f64, r: f64, n: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < n) {
        return Err(WeightsError::Range(format!("alpha = {alpha} must lie in (0, {n})")));
    }
    if !(r > 1.0 && r < n / alpha) {
        return Err(WeightsError::Range(format!("r = {r} must lie in (1, {})", n / alpha)));
    }
    Ok(())
}

fn check_pq(p: f64, q: f64) -> Result<()> {
    if !(p > 1.0 && p <= q && q.is_finite()) {
        return Err(WeightsError::Range(format!("need 1 < p <= q < inf, got p = {p}, q = {q}")));
    }
    Ok(())
}

/// t^c prod_j f_j(t)^{m_j} as an integrand.
pub struct ProfileMoment<'a> {
    factors: Vec<(&'a RearrangedProfile, f64)>,
    c: f64,
    quadrature: bool,
}

impl<'a> ProfileMoment<'a> {
    pub fn new(factors: Vec<(&'a RearrangedProfile, f64)>, c: f64) -> Self {
        Self { factors: factors.into_iter().filter(|(_, m)| *m != 0.0).collect(), c, quadrature: false }
    }

    pub fn by_quadrature(mut self) -> Self {
        self.quadrature = true;
        self
    }

    fn involves_grid(&self) -> bool {
        self.factors.iter().any(|(p, _)| matches!(p, RearrangedProfile::Grid { .. }))
    }
}

impl Integrand for ProfileMoment<'_> {
    fn eval(&self, t: f64) -> f64 {
        self.factors.iter().fold(t.powf(self.c), |acc, (p, m)| acc * p.eval(t).powf(*m))
    }

    fn integral(&self, a: f64, b: f64) -> std::result::Result<Extended, HardyError> {
        let r = if self.quadrature {
            moment_by_quadrature(&self.factors, self.c, a, b)
        } else {
            moment(&self.factors, self.c, a, b)
        };
        Ok(r?)
    }

    fn zero_exponent(&self) -> Option<f64> {
        combined_hints(&self.factors, self.c).0.zero_exponent
    }

    fn infinity_exponent(&self) -> Option<f64> {
        combined_hints(&self.factors, self.c).0.infinity_exponent
    }

    fn is_exact(&self) -> bool {
        !self.quadrature && self.factors.iter().all(|(p, _)| p.pieces().is_some())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AdmissibilityVerdict {
    Admissible,
    NotAdmissible,
    Undecided,
}

/// Both suprema of a two-condition test with the parameters that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub sup_condition_1: Extended,
    pub sup_condition_2: Extended,
    pub verdict: AdmissibilityVerdict,
    pub argmax_1: Option<f64>,
    pub argmax_2: Option<f64>,
    pub condition_1: SupReport,
    pub condition_2: SupReport,
    pub notes: Vec<String>,
    pub params: serde_json::Value,
}

/// How the profile moments are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupMethod {
    /// Closed forms where the profiles allow them.
    #[default]
    Exact,
    Quadrature,
}

fn verdict_of(r: &SupReport, grid: bool) -> AdmissibilityVerdict {
    match r.verdict {
        Verdict::Infinite => AdmissibilityVerdict::NotAdmissible,
        Verdict::CannotClassify => AdmissibilityVerdict::Undecided,
        Verdict::Finite if grid => AdmissibilityVerdict::Undecided,
        Verdict::Finite => AdmissibilityVerdict::Admissible,
    }
}

fn combine(
    c1: SupReport,
    c2: SupReport,
    grid: bool,
    params: serde_json::Value,
) -> AdmissibilityReport {
    let (v1, v2) = (verdict_of(&c1, grid), verdict_of(&c2, grid));
    use AdmissibilityVerdict::*;
    let verdict = if v1 == NotAdmissible || v2 == NotAdmissible {
        NotAdmissible
    } else if v1 == Undecided || v2 == Undecided {
        Undecided
    } else {
        Admissible
    };
    let mut notes = Vec::new();
    if grid {
        notes.push("sampled profile: the supremum over unbounded s is not certified beyond the probed window".into());
    }
    for (i, c) in [&c1, &c2].iter().enumerate() {
        for w in &c.witnesses {
            notes.push(format!("condition {}: {} at {}: {}", i + 1, w.factor, w.endpoint, w.reason));
        }
    }
    AdmissibilityReport {
        sup_condition_1: c1.sup,
        sup_condition_2: c2.sup,
        verdict,
        argmax_1: c1.argmax_s,
        argmax_2: c2.argmax_s,
        condition_1: c1,
        condition_2: c2,
        notes,
        params,
    }
}

fn moments<'a>(
    u_star: &'a RearrangedProfile,
    inv_v_star: &'a RearrangedProfile,
    u_c: f64,
    v_m: f64,
    v_c: f64,
    method: SupMethod,
) -> (ProfileMoment<'a>, ProfileMoment<'a>) {
    let mut a = ProfileMoment::new(vec![(u_star, 1.0)], u_c);
    let mut b = ProfileMoment::new(vec![(inv_v_star, v_m)], v_c);
    if method == SupMethod::Quadrature {
        a = a.by_quadrature();
        b = b.by_quadrature();
    }
    (a, b)
}

/// Conditions of the two-weight theorem for operators of simultaneous weak types.
///
/// With tau = s^{1/lambda2} the first condition reads
/// sup_tau (int_{tau^rho}^inf u* t^{-q/q1})^{1/q} (int_0^tau [(1/v)*]^{p'-1} t^{p'(1/p1-1)})^{1/p'},
/// rho = lambda2/lambda1, and the second swaps the sides with q2, p2.
pub fn two_weight_check(
    u_star: &RearrangedProfile,
    inv_v_star: &RearrangedProfile,
    p: f64,
    q: f64,
    wt: WeakTypePair,
) -> Result<AdmissibilityReport> {
    two_weight_check_with(u_star, inv_v_star, p, q, wt, SupMethod::Exact)
}

pub fn two_weight_check_with(
    u_star: &RearrangedProfile,
    inv_v_star: &RearrangedProfile,
    p: f64,
    q: f64,
    wt: WeakTypePair,
    method: SupMethod,
) -> Result<AdmissibilityReport> {
    check_pq(p, q)?;
    let pc = p / (p - 1.0);
    let rho = wt.lambda2() / wt.lambda1();
    let (u1, v1) = moments(u_star, inv_v_star, -q / wt.q1, pc - 1.0, pc * (1.0 / wt.p1 - 1.0), method);
    let (u2, v2) = moments(u_star, inv_v_star, -q / wt.q2, pc - 1.0, pc * (1.0 / wt.p2 - 1.0), method);
    let grid = u1.involves_grid() || v1.involves_grid();
    let c1 = sup_product(
        &[
            Factor::new("int u* t^(-q/q1) over (s^(1/lambda1), inf)", &u1, Side::Upper, 1.0 / q).mapped(rho),
            Factor::new("int [(1/v)*]^(p'-1) t^(p'(1/p1-1)) over (0, s^(1/lambda2))", &v1, Side::Lower, 1.0 / pc),
        ],
        0.0,
    )?;
    let c2 = sup_product(
        &[
            Factor::new("int u* t^(-q/q2) over (0, s^(1/lambda1))", &u2, Side::Lower, 1.0 / q).mapped(rho),
            Factor::new("int [(1/v)*]^(p'-1) t^(p'(1/p2-1)) over (s^(1/lambda2), inf)", &v2, Side::Upper, 1.0 / pc),
        ],
        0.0,
    )?;
    let params = serde_json::json!({ "p": p, "q": q, "p1": wt.p1, "q1": wt.q1, "p2": wt.p2, "q2": wt.q2,
        "lambda1": wt.lambda1(), "lambda2": wt.lambda2() });
    Ok(combine(c1, c2, grid, params))
}

/// Conditions for I_alpha from L^p(v) to L^q(u), written out for the Riesz weak types.
pub fn riesz_conditions(
    u_star: &RearrangedProfile,
    inv_v_star: &RearrangedProfile,
    p: f64,
    q: f64,
    r: f64,
    alpha: f64,
    cfg: &DunklStructure,
) -> Result<AdmissibilityReport> {
    riesz_conditions_with(u_star, inv_v_star, p, q, r, alpha, cfg, SupMethod::Exact)
}

#[allow(clippy::too_many_arguments)]
pub fn riesz_conditions_with(
    u_star: &RearrangedProfile,
    inv_v_star: &RearrangedProfile,
    p: f64,
    q: f64,
    r: f64,
    alpha: f64,
    cfg: &DunklStructure,
    method: SupMethod,
) -> Result<AdmissibilityReport> {
    let n = cfg.homogeneous_dimension();
    check_riesz_range(alpha, r, n)?;
    check_pq(p, q)?;
    let pc = p / (p - 1.0);
    let (u1, v1) = moments(u_star, inv_v_star, -q * (1.0 - alpha / n), pc - 1.0, 0.0, method);
    let (u2, v2) = moments(u_star, inv_v_star, -q * (1.0 / r - alpha / n), pc - 1.0, pc * (1.0 / r - 1.0), method);
    let grid = u1.involves_grid() || v1.involves_grid();
    let c1 = sup_product(
        &[
            Factor::new("int_s^inf u* t^(-q(1-alpha/n))", &u1, Side::Upper, 1.0 / q),
            Factor::new("int_0^s [(1/v)*]^(p'-1)", &v1, Side::Lower, 1.0 / pc),
        ],
        0.0,
    )?;
    let c2 = sup_product(
        &[
            Factor::new("int_0^s u* t^(-q(1/r-alpha/n))", &u2, Side::Lower, 1.0 / q),
            Factor::new("int_s^inf [(1/v)*]^(p'-1) t^(p'(1/r-1))", &v2, Side::Upper, 1.0 / pc),
        ],
        0.0,
    )?;
    let params = serde_json::json!({ "p": p, "q": q, "r": r, "alpha": alpha, "n": n });
    Ok(combine(c1, c2, grid, params))
}

/// Sobolev conditions on u: the best constants c with
/// (int_s^inf u* t^{-q(1-1/n)})^{1/q} <= c s^{1/p-1} and
/// (int_0^s u* t^{-q(1/r-1/n)})^{1/q} <= c s^{1/p-1/r}.
pub fn sobolev_conditions(
    u_star: &RearrangedProfile,
    p: f64,
    q: f64,
    r: f64,
    cfg: &DunklStructure,
) -> Result<AdmissibilityReport> {
    let n = cfg.homogeneous_dimension();
    check_pq(p, q)?;
    if !(r > 1.0 && r < n) {
        return Err(WeightsError::Range(format!("r = {r} must lie in (1, {n})")));
    }
    if !(p < r) {
        return Err(WeightsError::Range(format!("need p < r, got p = {p}, r = {r}")));
    }
    let a = ProfileMoment::new(vec![(u_star, 1.0)], -q * (1.0 - 1.0 / n));
    let b = ProfileMoment::new(vec![(u_star, 1.0)], -q * (1.0 / r - 1.0 / n));
    let grid = a.involves_grid();
    let c1 = sup_product(&[Factor::new("int_s^inf u* t^(-q(1-1/n))", &a, Side::Upper, 1.0 / q)], 1.0 - 1.0 / p)?;
    let c2 = sup_product(&[Factor::new("int_0^s u* t^(-q(1/r-1/n))", &b, Side::Lower, 1.0 / q)], 1.0 / r - 1.0 / p)?;
    let params = serde_json::json!({ "p": p, "q": q, "r": r, "n": n });
    Ok(combine(c1, c2, grid, params))
}

/// u* for u, with u* = inf when every level set of u has infinite measure.
pub fn rearranged_weight(u: &WeightSpec, cfg: &DunklStructure) -> Result<RearrangedProfile> {
    match decreasing_rearrangement(&MeasurableSample::from(u.clone()), cfg) {
        Ok(p) => Ok(p),
        Err(RearrangementError::NotRearrangeable(_)) => Ok(RearrangedProfile::constant(f64::INFINITY)),
        Err(e) => Err(e.into()),
    }
}

/// (1/v)*, infinite when 1/v is not rearrangeable.
pub fn rearranged_reciprocal(v: &WeightSpec, cfg: &DunklStructure) -> Result<RearrangedProfile> {
    match reciprocal_rearrangement(v, cfg) {
        Ok(p) => Ok(p),
        Err(RearrangementError::NotRearrangeable(_)) => Ok(RearrangedProfile::constant(f64::INFINITY)),
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubCondition {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerAdmissibility {
    pub admissible: bool,
    pub reasons: Vec<SubCondition>,
    /// Present on the general (p, q) path.
    pub report: Option<AdmissibilityReport>,
}

/// Power weights u = |x|^delta, v = |x|^beta for I_alpha.
///
/// p = q uses the exponent conditions delta < 0 < beta = delta + alpha p < n(p-1);
/// p != q includes u = v = 1 (delta = beta = 0), whose conditions reduce to p < r and 1/q = 1/p - alpha/n.
/// otherwise the Riesz conditions are evaluated with r (default p) on the exact profiles.
pub fn power_weight_admissible(
    p: f64,
    q: f64,
    alpha: f64,
    delta: f64,
    beta: f64,
    r: Option<f64>,
    cfg: &DunklStructure,
) -> Result<PowerAdmissibility> {
    let n = cfg.homogeneous_dimension();
    check_pq(p, q)?;
    if !(alpha > 0.0 && alpha < n) {
        return Err(WeightsError::Range(format!("alpha = {alpha} must lie in (0, {n})")));
    }
    let balance = delta + alpha * p;
    let cond = |name: &str, holds: bool, detail: String| SubCondition { name: name.into(), holds, detail };
    let mut reasons = vec![cond("p < n/alpha", p < n / alpha, format!("p = {p}, n/alpha = {}", n / alpha))];
    if p == q {
        reasons.push(cond("delta < 0", delta < 0.0, format!("delta = {delta}")));
        let scale = 1.0 + beta.abs().max(balance.abs());
        reasons.push(cond("beta > 0", beta > 0.0, format!("beta = {beta}")));
        reasons.push(cond("beta < n(p-1)", beta < n * (p - 1.0), format!("n(p-1) = {}", n * (p - 1.0))));
        reasons.push(cond(
            "beta = delta + alpha p",
            (beta - balance).abs() <= 1e-12 * scale,
            format!("delta + alpha p = {balance}"),
        ));
        return Ok(PowerAdmissibility { admissible: reasons.iter().all(|c| c.holds), reasons, report: None });
    }
    let r = r.unwrap_or(p);
    let u_star = rearranged_weight(&WeightSpec::Power(delta), cfg)?;
    let inv_v = rearranged_reciprocal(&WeightSpec::Power(beta), cfg)?;
    let report = riesz_conditions(&u_star, &inv_v, p, q, r, alpha, cfg)?;
    reasons.push(cond(
        "riesz conditions",
        report.verdict == AdmissibilityVerdict::Admissible,
        format!("{:?} with r = {r}", report.verdict),
    ));
    Ok(PowerAdmissibility { admissible: reasons.iter().all(|c| c.holds), reasons, report: Some(report) })
}

/// The Sobolev power weight delta = q[n(1/p - 1/q) - 1].
pub fn sobolev_power_exponent(p: f64, q: f64, n: f64) -> f64 {
    q * (n * (1.0 / p - 1.0 / q) - 1.0)
}

/// The exponent l = 1/(1/p - alpha/n) of the unweighted Riesz bound.
pub fn conformal_exponent(p: f64, alpha: f64, n: f64) -> Option<f64> {
    let inv = 1.0 / p - alpha / n;
    (inv > EXPONENT_TOL).then(|| 1.0 / inv)
}

/// t^{-1/q1} int_0^sigma s^{1/p1-1} f* + t^{-1/q2} int_sigma^inf s^{1/p2-1} f*, sigma = t^{lambda1/lambda2}.
pub fn calderon_bound(f_star: &RearrangedProfile, t: f64, wt: WeakTypePair) -> Result<Extended> {
    if !(t > 0.0) {
        return Err(WeightsError::Range(format!("t = {t} must be positive")));
    }
    let sigma = t.powf(wt.lambda1() / wt.lambda2());
    let low = moment(&[(f_star, 1.0)], 1.0 / wt.p1 - 1.0, 0.0, sigma)?;
    let high = moment(&[(f_star, 1.0)], 1.0 / wt.p2 - 1.0, sigma, f64::INFINITY)?;
    Ok(low * t.powf(-1.0 / wt.q1) + high * t.powf(-1.0 / wt.q2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn line(k: f64) -> DunklStructure {
        DunklStructure::rank_one(k).unwrap()
    }

    #[test]
    fn identity_weights_at_the_conformal_exponent() {
        let cfg = line(0.5);
        let one = RearrangedProfile::constant(1.0);
        let (alpha, r, p) = (0.5, 3.0, 1.5);
        let q = conformal_exponent(p, alpha, 2.0).unwrap();
        let rep = riesz_conditions(&one, &one, p, q, r, alpha, &cfg).unwrap();
        assert_eq!(rep.verdict, AdmissibilityVerdict::Admissible, "{:?}", rep.notes);
        let off = riesz_conditions(&one, &one, p, q * 1.1, r, alpha, &cfg).unwrap();
        assert_eq!(off.verdict, AdmissibilityVerdict::NotAdmissible);
        assert!(riesz_conditions(&one, &one, p, q, 5.0, alpha, &cfg).is_err());
    }

    #[test]
    fn power_weights_with_balanced_exponents() {
        let cfg = line(0.5);
        let a = power_weight_admissible(1.5, 1.5, 0.5, -0.5, 0.25, None, &cfg).unwrap();
        assert!(a.admissible, "{:?}", a.reasons);
        assert!(!power_weight_admissible(1.5, 1.5, 0.5, 0.0, 0.75, None, &cfg).unwrap().admissible);
        // beta = n(p-1) = 1 exactly, delta chosen to keep the balance.
        let edge = power_weight_admissible(1.5, 1.5, 0.5, 0.25, 1.0, None, &cfg).unwrap();
        assert!(!edge.reasons.iter().find(|c| c.name == "beta < n(p-1)").unwrap().holds);

        let u = rearranged_weight(&WeightSpec::Power(-0.5), &cfg).unwrap();
        let v = rearranged_reciprocal(&WeightSpec::Power(0.25), &cfg).unwrap();
        let rep = riesz_conditions(&u, &v, 1.5, 1.5, 1.5, 0.5, &cfg).unwrap();
        assert_eq!(rep.verdict, AdmissibilityVerdict::Admissible, "{:?}", rep.notes);
    }

    #[test]
    fn positive_delta_is_rejected() {
        let cfg = line(1.0);
        let u = rearranged_weight(&WeightSpec::Power(0.3), &cfg).unwrap();
        let v = rearranged_reciprocal(&WeightSpec::Power(0.3 + 0.5 * 1.5), &cfg).unwrap();
        let rep = riesz_conditions(&u, &v, 1.5, 1.5, 1.5, 0.5, &cfg).unwrap();
        assert_eq!(rep.verdict, AdmissibilityVerdict::NotAdmissible);
        assert_eq!(rep.sup_condition_1, Extended::Infinite);
    }

    #[test]
    fn unbalanced_constant_weight() {
        let one = RearrangedProfile::constant(1.0);
        let wt = WeakTypePair::riesz(0.5, 3.0, 2.0).unwrap();
        let q = conformal_exponent(1.5, 0.5, 2.0).unwrap();
        let ok = two_weight_check(&one, &one, 1.5, q, wt).unwrap();
        assert_eq!(ok.verdict, AdmissibilityVerdict::Admissible);
        let shifted = RearrangedProfile::power(1.0, 0.1);
        let bad = two_weight_check(&shifted, &one, 1.5, q, wt).unwrap();
        assert_eq!(bad.verdict, AdmissibilityVerdict::NotAdmissible);
    }

    #[test]
    fn grid_profiles_are_undecided() {
        let one = RearrangedProfile::constant(1.0);
        let g = RearrangedProfile::Grid { knots: vec![1.0, 2.0, 4.0], values: vec![3.0, 2.0, 1.0] };
        let wt = WeakTypePair::riesz(0.5, 3.0, 2.0).unwrap();
        let rep = two_weight_check(&g, &one, 1.5, 3.0, wt).unwrap();
        assert_ne!(rep.verdict, AdmissibilityVerdict::Admissible);
        assert!(!rep.notes.is_empty());
    }

    #[test]
    fn sobolev_power_weight() {
        let cfg = line(1.0);
        let n = 3.0;
        let (p, q, r) = (1.5, 2.5, 2.0);
        let delta = sobolev_power_exponent(p, q, n);
        assert!(delta < 0.0);
        let u = rearranged_weight(&WeightSpec::Power(delta), &cfg).unwrap();
        let rep = sobolev_conditions(&u, p, q, r, &cfg).unwrap();
        assert_eq!(rep.verdict, AdmissibilityVerdict::Admissible, "{:?}", rep.notes);
        let off = rearranged_weight(&WeightSpec::Power(delta + 0.1), &cfg).unwrap();
        assert_eq!(sobolev_conditions(&off, p, q, r, &cfg).unwrap().verdict, AdmissibilityVerdict::NotAdmissible);
        let one = RearrangedProfile::constant(1.0);
        let q0 = 1.0 / (1.0 / p - 1.0 / n);
        assert_eq!(sobolev_conditions(&one, p, q0, r, &cfg).unwrap().verdict, AdmissibilityVerdict::Admissible);
        assert_eq!(sobolev_power_exponent(2.0, 2.0, n), -2.0);
    }

    #[test]
    fn calderon_examples() {
        let wt = WeakTypePair::new(1.0, 1.5, 3.0, 4.0).unwrap();
        let f = RearrangedProfile::IndicatorForm { length: 1.0, height: 1.0 };
        // t = 1 gives sigma = 1 for any exponents.
        assert_relative_eq!(calderon_bound(&f, 1.0, wt).unwrap().to_f64(), wt.p1);
        assert_eq!(calderon_bound(&RearrangedProfile::constant(0.0), 2.0, wt).unwrap(), Extended::ZERO);
        // f* = s^{-1/p}: both integrals are pure powers.
        let p = 2.0;
        let g = RearrangedProfile::power(1.0, -1.0 / p);
        let t: f64 = 3.0;
        let sigma = t.powf(wt.lambda1() / wt.lambda2());
        let (a, b) = (1.0 / wt.p1 - 1.0 / p, 1.0 / wt.p2 - 1.0 / p);
        let want = t.powf(-1.0 / wt.q1) * sigma.powf(a) / a - t.powf(-1.0 / wt.q2) * sigma.powf(b) / b;
        assert_relative_eq!(calderon_bound(&g, t, wt).unwrap().to_f64(), want, max_relative = 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn calderon_is_non_increasing(
            heights in proptest::collection::vec(0.0f64..2.0, 1..6),
            p1 in 1.0f64..2.0, dp in 0.2f64..3.0, q1 in 1.0f64..2.0, dq in 0.2f64..3.0,
        ) {
            let mut values = heights.clone();
            values.sort_by(|a, b| b.total_cmp(a));
            let knots: Vec<f64> = (1..=values.len()).map(|i| 0.5 * i as f64 * i as f64).collect();
            let f = RearrangedProfile::Grid { knots, values };
            let wt = WeakTypePair::new(p1, q1, p1 + dp, q1 + dq).unwrap();
            let mut last = f64::INFINITY;
            for i in 0..100 {
                let t = 10f64.powf(-3.0 + 6.0 * i as f64 / 99.0);
                let v = calderon_bound(&f, t, wt).unwrap().to_f64();
                prop_assert!(v <= last * (1.0 + 1e-12) + 1e-300, "t={} {} > {}", t, v, last);
                last = v;
            }
        }
    }
}
