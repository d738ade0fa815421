//! Two-weight Hardy inequalities on (0, inf).
//!
//! B(x) = x^kappa prod_i I_i(x^{m_i})^{e_i}, where each I_i integrates a
//! nonnegative function over (0, y) or (y, inf). Boundedness of B on (0, inf)
//! is decided from the power-law behaviour of the integrands at the two
//! endpoints; the value of the supremum comes from a log-spaced probe scan
//! with golden-section refinement.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::extended::Extended;
use crate::quadrature::{integrate_range, QuadratureError, TailHints, Tolerance};
use crate::rearrangement::RearrangementError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HardyError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("right-hand side diverges")]
    DivergentRhs,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Rearrangement(#[from] RearrangementError),
}

type Result<T> = std::result::Result<T, HardyError>;

/// Probe window and resolution of the supremum search.
pub const PROBE_MIN: f64 = 1e-6;
pub const PROBE_MAX: f64 = 1e6;
pub const PROBES: usize = 512;
/// Tolerance on boundary exponents and exponent balances.
pub const EXPONENT_TOL: f64 = 1e-9;

/// A nonnegative function on (0, inf) that can be integrated over subintervals.
pub trait Integrand: Send + Sync {
    fn eval(&self, t: f64) -> f64;
    /// int_a^b, 0 <= a < b <= inf.
    fn integral(&self, a: f64, b: f64) -> Result<Extended>;
    /// e with g(t) ~ C t^e as t -> 0; +inf if g vanishes near 0.
    fn zero_exponent(&self) -> Option<f64>;
    /// e with g(t) ~ C t^e as t -> inf; -inf if g vanishes near inf.
    fn infinity_exponent(&self) -> Option<f64>;
    /// True when `integral` is a closed form rather than quadrature.
    fn is_exact(&self) -> bool {
        false
    }
}

/// int_a^b C t^e dt.
pub fn power_integral(c: f64, e: f64, a: f64, b: f64) -> Extended {
    if c == 0.0 || !(b > a) {
        return Extended::ZERO;
    }
    let m = e + 1.0;
    if (a == 0.0 && m <= 0.0) || (b.is_infinite() && m >= 0.0) {
        return Extended::Infinite;
    }
    let v = if a == 0.0 {
        b.powf(m) / m
    } else if b.is_infinite() {
        -a.powf(m) / m
    } else if m == 0.0 {
        (b / a).ln()
    } else {
        a.powf(m) * (m * (b / a).ln()).exp_m1() / m
    };
    Extended::from_f64(c * v)
}

/// A weight on (0, inf), either C t^a exactly or a callable with hints.
#[derive(Clone)]
pub struct LineWeight {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    power: Option<(f64, f64)>,
    pub hints: TailHints,
}

impl fmt::Debug for LineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power {
            Some((c, a)) => write!(f, "LineWeight({c} t^{a})"),
            None => f.debug_struct("LineWeight").field("hints", &self.hints).finish_non_exhaustive(),
        }
    }
}

impl LineWeight {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self { f: Arc::new(f), power: None, hints: TailHints::default() }
    }

    pub fn power(coefficient: f64, exponent: f64) -> Self {
        let mut w = Self::new(move |t| coefficient * t.powf(exponent));
        w.power = Some((coefficient, exponent));
        w.hints.zero_exponent = Some(exponent);
        w.hints.infinity_exponent = Some(exponent);
        w
    }

    pub fn one() -> Self {
        Self::power(1.0, 0.0)
    }

    pub fn with_exponents(mut self, zero: Option<f64>, infinity: Option<f64>) -> Self {
        self.hints.zero_exponent = zero;
        self.hints.infinity_exponent = infinity;
        self
    }

    pub fn with_breakpoint(mut self, t: f64) -> Self {
        self.hints.breakpoints.push(t);
        self
    }

    pub fn supported_on(mut self, t: f64) -> Self {
        self.hints.support_end = Some(t);
        self.hints.infinity_exponent = Some(f64::NEG_INFINITY);
        self
    }

    pub fn as_power(&self) -> Option<(f64, f64)> {
        self.power
    }

    /// Same function with the closed form forgotten; hints are kept.
    pub fn numeric(&self) -> Self {
        Self { f: self.f.clone(), power: None, hints: self.hints.clone() }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        let f = self.f.clone();
        Self {
            f: Arc::new(move |t| lambda * f(t)),
            power: self.power.map(|(c, a)| (lambda * c, a)),
            hints: self.hints.clone(),
        }
    }

    /// w^e; hints follow, with support flipping to a blow-up when e < 0.
    pub fn powf(&self, e: f64) -> Self {
        let f = self.f.clone();
        let mut hints = self.hints.clone();
        hints.zero_exponent = hints.zero_exponent.map(|z| z * e);
        hints.infinity_exponent = match hints.infinity_exponent {
            Some(x) if x == f64::NEG_INFINITY && e < 0.0 => Some(f64::INFINITY),
            other => other.map(|x| x * e),
        };
        if e < 0.0 {
            hints.support_end = None;
        }
        Self { f: Arc::new(move |t| f(t).powf(e)), power: self.power.map(|(c, a)| (c.powf(e), a * e)), hints }
    }

    /// Checks that the closed form matches the callable at probe points.
    pub fn hints_consistent(&self) -> bool {
        match self.power {
            None => true,
            Some((c, a)) => [1e-3, 0.37, 1.0, 2.9, 1e3]
                .iter()
                .all(|&t| ((self.f)(t) - c * t.powf(a)).abs() <= 1e-8 * (c * t.powf(a)).abs().max(1e-300)),
        }
    }
}

impl Integrand for LineWeight {
    fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    fn integral(&self, a: f64, b: f64) -> Result<Extended> {
        if let Some((c, e)) = self.power {
            return Ok(power_integral(c, e, a, b));
        }
        let b = self.hints.support_end.map_or(b, |s| b.min(s));
        if !(b > a) {
            return Ok(Extended::ZERO);
        }
        match integrate_range(|t| (self.f)(t), a, b, &self.hints, Tolerance { abs: 1e-300, rel: 1e-11 }) {
            Ok(v) => Ok(Extended::from_f64(v)),
            Err(QuadratureError::Divergent(_)) | Err(QuadratureError::NonFinite(_)) => Ok(Extended::Infinite),
            Err(e) => Err(e.into()),
        }
    }

    fn zero_exponent(&self) -> Option<f64> {
        self.hints.zero_exponent
    }

    fn infinity_exponent(&self) -> Option<f64> {
        self.hints.infinity_exponent
    }

    fn is_exact(&self) -> bool {
        self.power.is_some()
    }
}

/// Parses the power shorthand `t^a`, `c*t^a`, `1`.
impl FromStr for LineWeight {
    type Err = HardyError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().replace(' ', "");
        let bad = || HardyError::Parameter(format!("cannot parse weight '{s}', expected t^<float>"));
        let (coef, rest) = match s.split_once('*') {
            Some((c, r)) => (c.parse::<f64>().map_err(|_| bad())?, r.to_string()),
            None => (1.0, s.clone()),
        };
        if let Some(e) = rest.strip_prefix("t^") {
            let e = e.trim_start_matches('(').trim_end_matches(')');
            return Ok(LineWeight::power(coef, e.parse().map_err(|_| bad())?));
        }
        if rest == "t" {
            return Ok(LineWeight::power(coef, 1.0));
        }
        rest.parse::<f64>().map(|c| LineWeight::power(coef * c, 0.0)).map_err(|_| bad())
    }
}

/// Which part of the half line a factor integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// int_0^y
    Lower,
    /// int_y^inf
    Upper,
}

/// (int over Side of g, evaluated at y = x^map)^power.
pub struct Factor<'a> {
    pub label: String,
    pub integrand: &'a dyn Integrand,
    pub side: Side,
    pub map: f64,
    pub power: f64,
}

impl<'a> Factor<'a> {
    pub fn new(label: impl Into<String>, integrand: &'a dyn Integrand, side: Side, power: f64) -> Self {
        Self { label: label.into(), integrand, side, map: 1.0, power }
    }

    pub fn mapped(mut self, m: f64) -> Self {
        self.map = m;
        self
    }

    fn value(&self, x: f64) -> Result<Extended> {
        let y = x.powf(self.map);
        let v = match self.side {
            Side::Lower => self.integrand.integral(0.0, y)?,
            Side::Upper => self.integrand.integral(y, f64::INFINITY)?,
        };
        Ok(v.powf(self.power))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Finite,
    Infinite,
    CannotClassify,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub factor: String,
    pub endpoint: String,
    pub reason: String,
}

/// Outcome of a supremum search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupReport {
    pub sup: Extended,
    pub argmax_s: Option<f64>,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// B(x) ~ x^e as x -> 0 and as x -> inf.
    pub exponent_at_zero: Option<f64>,
    pub exponent_at_infinity: Option<f64>,
    pub exact: bool,
}

/// Contribution of one factor to the boundary exponent of B: (exponent, log factor present).
enum Boundary {
    Exponent(f64, bool),
    Divergent(String),
    Unknown(String),
}

fn estimate_exponent(g: &dyn Integrand, at_zero: bool) -> Option<f64> {
    let pts: [f64; 3] = if at_zero { [1e-12, 1e-11, 1e-10] } else { [1e10, 1e11, 1e12] };
    let v: Vec<f64> = pts.iter().map(|&t| g.eval(t)).collect();
    if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return None;
    }
    let s1 = (v[1] / v[0]).ln() / 10f64.ln();
    let s2 = (v[2] / v[1]).ln() / 10f64.ln();
    ((s1 - s2).abs() <= 1e-6 * (1.0 + s1.abs())).then_some(s2)
}

fn boundary(f: &Factor, at_zero: bool) -> Boundary {
    let g = f.integrand;
    let eta = if at_zero { g.zero_exponent() } else { g.infinity_exponent() };
    let eta = match eta.or_else(|| estimate_exponent(g, at_zero)) {
        Some(e) => e,
        None => {
            return Boundary::Unknown(format!(
                "no tail exponent at {} and the integrand is not a stable power there",
                if at_zero { "0" } else { "infinity" }
            ))
        }
    };
    // Exponent of the integral itself in y, as y -> endpoint.
    let (e, log) = match (f.side, at_zero) {
        (Side::Lower, true) if eta <= -1.0 => return Boundary::Divergent(format!("integrand ~ t^{eta} is not integrable at 0")),
        (Side::Lower, true) => (eta + 1.0, false),
        (Side::Upper, false) if eta >= -1.0 => {
            return Boundary::Divergent(format!("integrand ~ t^{eta} is not integrable at infinity"))
        }
        (Side::Upper, false) => (eta + 1.0, false),
        (Side::Upper, true) if eta < -1.0 => (eta + 1.0, false),
        (Side::Upper, true) => (0.0, eta == -1.0),
        (Side::Lower, false) if eta > -1.0 => (eta + 1.0, false),
        (Side::Lower, false) => (0.0, eta == -1.0),
    };
    Boundary::Exponent(e * f.map * f.power, log)
}

/// Golden-section maximisation of h over log x in [a, b].
fn golden_max<H: Fn(f64) -> f64>(h: H, mut a: f64, mut b: f64) -> (f64, f64) {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - phi * (b - a), a + phi * (b - a));
    let (mut hc, mut hd) = (h(c.exp()), h(d.exp()));
    for _ in 0..80 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if hc > hd {
            b = d;
            d = c;
            hd = hc;
            c = b - phi * (b - a);
            hc = h(c.exp());
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + phi * (b - a);
            hd = h(d.exp());
        }
    }
    if hc > hd {
        (c.exp(), hc)
    } else {
        (d.exp(), hd)
    }
}

/// Supremum over x > 0 of x^kappa prod_i factor_i(x).
pub fn sup_product(factors: &[Factor], kappa: f64) -> Result<SupReport> {
    let mut witnesses = Vec::new();
    let mut unknown = Vec::new();
    let mut ends = [Some(kappa), Some(kappa)];
    let mut logs = [false, false];
    for f in factors {
        for (slot, at_zero) in [(0usize, true), (1usize, false)] {
            match boundary(f, at_zero) {
                Boundary::Exponent(e, log) => {
                    ends[slot] = ends[slot].map(|x| x + e);
                    logs[slot] |= log;
                }
                Boundary::Divergent(reason) => {
                    witnesses.push(Witness {
                        factor: f.label.clone(),
                        endpoint: if at_zero { "0".into() } else { "infinity".into() },
                        reason: format!("{reason}; the factor is infinite for every s"),
                    });
                }
                Boundary::Unknown(reason) => {
                    ends[slot] = None;
                    unknown.push(Witness {
                        factor: f.label.clone(),
                        endpoint: if at_zero { "0".into() } else { "infinity".into() },
                        reason,
                    });
                }
            }
        }
    }
    let exact = factors.iter().all(|f| f.integrand.is_exact());
    if !witnesses.is_empty() {
        return Ok(SupReport {
            sup: Extended::Infinite,
            argmax_s: None,
            verdict: Verdict::Infinite,
            witnesses,
            exponent_at_zero: ends[0],
            exponent_at_infinity: ends[1],
            exact,
        });
    }
    let [e0, e_inf] = ends;
    if let Some(e) = e0.filter(|e| e.is_nan()) {
        unknown.push(Witness { factor: "B".into(), endpoint: "0".into(), reason: format!("indeterminate exponent {e}") });
    }
    if let Some(e) = e_inf.filter(|e| e.is_nan()) {
        unknown.push(Witness { factor: "B".into(), endpoint: "infinity".into(), reason: format!("indeterminate exponent {e}") });
    }
    if let Some(e) = e0.filter(|e| *e < -EXPONENT_TOL || (e.abs() <= EXPONENT_TOL && logs[0])) {
        witnesses.push(Witness {
            factor: "B".into(),
            endpoint: "0".into(),
            reason: if e.abs() <= EXPONENT_TOL { "B(s) grows like a logarithm as s -> 0".into() } else { format!("B(s) ~ s^{e} as s -> 0") },
        });
    }
    if let Some(e) = e_inf.filter(|e| *e > EXPONENT_TOL || (e.abs() <= EXPONENT_TOL && logs[1])) {
        witnesses.push(Witness {
            factor: "B".into(),
            endpoint: "infinity".into(),
            reason: if e.abs() <= EXPONENT_TOL {
                "B(s) grows like a logarithm as s -> infinity".into()
            } else {
                format!("B(s) ~ s^{e} as s -> infinity")
            },
        });
    }

    let eval = |x: f64| -> Result<Extended> {
        let mut acc = x.powf(kappa);
        let mut infinite = false;
        for f in factors {
            match f.value(x)? {
                // 0 * inf = 0 here: an empty factor kills the product.
                Extended::Finite(v) if v == 0.0 => return Ok(Extended::ZERO),
                Extended::Finite(v) => acc *= v,
                Extended::Infinite => infinite = true,
            }
        }
        Ok(if infinite { Extended::Infinite } else { Extended::from_f64(acc) })
    };
    let xs: Vec<f64> = (0..PROBES)
        .map(|i| PROBE_MIN * (PROBE_MAX / PROBE_MIN).powf(i as f64 / (PROBES - 1) as f64))
        .collect();
    let mut values = Vec::with_capacity(PROBES);
    for &x in &xs {
        let v = eval(x)?;
        if !v.is_finite() && witnesses.is_empty() {
            witnesses.push(Witness { factor: "B".into(), endpoint: format!("s = {x:e}"), reason: "B(s) is infinite".into() });
        }
        values.push(v.to_f64());
    }
    if !witnesses.is_empty() {
        return Ok(SupReport {
            sup: Extended::Infinite,
            argmax_s: None,
            verdict: Verdict::Infinite,
            witnesses,
            exponent_at_zero: e0,
            exponent_at_infinity: e_inf,
            exact,
        });
    }
    let i = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let (mut argmax, mut sup) = (xs[i], values[i]);
    if sup > 0.0 && sup.is_finite() {
        let lo = xs[i.saturating_sub(1)].ln();
        let hi = xs[(i + 1).min(PROBES - 1)].ln();
        let (x, v) = golden_max(|x| eval(x).map(|v| v.to_f64()).unwrap_or(f64::NAN), lo, hi);
        if v > sup {
            argmax = x;
            sup = v;
        }
    }
    let verdict = if unknown.is_empty() { Verdict::Finite } else { Verdict::CannotClassify };
    Ok(SupReport {
        sup: Extended::Finite(sup),
        argmax_s: Some(argmax),
        verdict,
        witnesses: unknown,
        exponent_at_zero: e0,
        exponent_at_infinity: e_inf,
        exact,
    })
}

fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

fn check_exponents(p: f64, q: f64) -> Result<()> {
    if !(p > 1.0 && p <= q && q.is_finite()) {
        return Err(HardyError::Parameter(format!("need 1 < p <= q < inf, got p = {p}, q = {q}")));
    }
    Ok(())
}

/// sup_s (int_s^inf mu)^{1/q} (int_0^s theta^{1-p'})^{1/p'}.
pub fn hardy_condition_direct(mu: &LineWeight, theta: &LineWeight, p: f64, q: f64) -> Result<SupReport> {
    check_exponents(p, q)?;
    let pc = conjugate(p);
    let dual_theta = theta.powf(1.0 - pc);
    sup_product(
        &[
            Factor::new("int_s^inf mu", mu, Side::Upper, 1.0 / q),
            Factor::new("int_0^s theta^(1-p')", &dual_theta, Side::Lower, 1.0 / pc),
        ],
        0.0,
    )
}

/// sup_s (int_0^s mu)^{1/q} (int_s^inf theta^{1-p'})^{1/p'}.
pub fn hardy_condition_dual(mu: &LineWeight, theta: &LineWeight, p: f64, q: f64) -> Result<SupReport> {
    check_exponents(p, q)?;
    let pc = conjugate(p);
    let dual_theta = theta.powf(1.0 - pc);
    sup_product(
        &[
            Factor::new("int_0^s mu", mu, Side::Lower, 1.0 / q),
            Factor::new("int_s^inf theta^(1-p')", &dual_theta, Side::Upper, 1.0 / pc),
        ],
        0.0,
    )
}

/// Upper bound on the best Hardy constant relative to B: q^{1/q} p'^{1/p'}.
pub fn hardy_constant_bound(p: f64, q: f64) -> f64 {
    let pc = conjugate(p);
    q.powf(1.0 / q) * pc.powf(1.0 / pc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HardySide {
    Direct,
    Dual,
}

/// Nonnegative step function: values[i] on [edges[i], edges[i+1]), zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    pub edges: Vec<f64>,
    pub values: Vec<f64>,
}

impl StepFunction {
    pub fn new(edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if edges.len() != values.len() + 1 || edges.windows(2).any(|w| !(w[1] > w[0])) || edges[0] < 0.0 {
            return Err(HardyError::Parameter("edges must be increasing, nonnegative, one more than values".into()));
        }
        if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(HardyError::Parameter("values must be finite and nonnegative".into()));
        }
        if edges.last().map_or(true, |e| !e.is_finite()) {
            return Err(HardyError::Parameter("support must be bounded".into()));
        }
        Ok(Self { edges, values })
    }

    pub fn indicator(a: f64, b: f64) -> Self {
        Self { edges: vec![a, b], values: vec![1.0] }
    }

    pub fn total(&self) -> f64 {
        self.values.iter().zip(self.edges.windows(2)).map(|(v, w)| v * (w[1] - w[0])).sum()
    }

    /// int_0^t f.
    pub fn primitive(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (v, w) in self.values.iter().zip(self.edges.windows(2)) {
            if t <= w[0] {
                break;
            }
            acc += v * (t.min(w[1]) - w[0]);
        }
        acc
    }
}

/// Both sides of the Hardy inequality for a sample f.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub condition: SupReport,
    /// Set when the condition is not certified finite.
    pub flagged: bool,
}

pub fn verify_hardy(
    f: &StepFunction,
    mu: &LineWeight,
    theta: &LineWeight,
    p: f64,
    q: f64,
    side: HardySide,
) -> Result<HardyCheck> {
    let condition = match side {
        HardySide::Direct => hardy_condition_direct(mu, theta, p, q)?,
        HardySide::Dual => hardy_condition_dual(mu, theta, p, q)?,
    };
    let mut rhs = 0.0;
    for (v, w) in f.values.iter().zip(f.edges.windows(2)) {
        if *v > 0.0 {
            match theta.integral(w[0], w[1])? {
                Extended::Finite(x) => rhs += v.powf(p) * x,
                Extended::Infinite => return Err(HardyError::DivergentRhs),
            }
        }
    }
    let rhs = rhs.powf(1.0 / p);
    let total = f.total();
    let first = f.edges[0];
    let last = *f.edges.last().unwrap();
    let mut hints = mu.hints.clone();
    hints.breakpoints.extend(f.edges.iter().copied().filter(|&e| e > 0.0));
    let (a, b, func): (f64, f64, Box<dyn Fn(f64) -> f64>) = match side {
        HardySide::Direct => {
            hints.zero_exponent = hints.zero_exponent.map(|e| e + q);
            (first, f64::INFINITY, Box::new(|t| f.primitive(t).powf(q) * mu.eval(t)))
        }
        HardySide::Dual => {
            hints.support_end = Some(hints.support_end.map_or(last, |s| s.min(last)));
            hints.infinity_exponent = Some(f64::NEG_INFINITY);
            (0.0, last, Box::new(|t| (total - f.primitive(t)).max(0.0).powf(q) * mu.eval(t)))
        }
    };
    let lhs = if total == 0.0 {
        0.0
    } else {
        match integrate_range(func, a, b, &hints, Tolerance { abs: 1e-300, rel: 1e-10 }) {
            Ok(v) => v.powf(1.0 / q),
            Err(QuadratureError::Divergent(_)) | Err(QuadratureError::NonFinite(_)) => f64::INFINITY,
            Err(e) => return Err(e.into()),
        }
    };
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(HardyCheck { lhs, rhs, ratio, flagged: condition.verdict != Verdict::Finite, condition })
}
