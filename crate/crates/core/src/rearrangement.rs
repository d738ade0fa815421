//! Distribution functions and decreasing rearrangements with respect to nu_k.
//!
//! Power weights, indicators and truncated powers have exact rearrangements.
//! Other radial functions are rearranged on demand from their level sets;
//! sampled functions on the line use the Gauss-point atoms of the product rule,
//! so the rearranged integral reproduces the direct quadrature.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::extended::Extended;
use crate::measure::{DunklStructure, MeasureError, RadialProfile};
use crate::operators::{measure_atoms, DunklEngine, GridFunction1D};
use crate::quadrature::{integrate_range, QuadratureError, TailHints, Tolerance};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RearrangementError {
    #[error("function is not rearrangeable: {0}")]
    NotRearrangeable(String),
    #[error("weight vanishes on a set of positive measure near r = {0:e}")]
    VanishingWeight(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

type Result<T> = std::result::Result<T, RearrangementError>;

/// A nonnegative weight on R^d.
#[derive(Debug, Clone)]
pub enum WeightSpec {
    /// |x|^a.
    Power(f64),
    Radial(RadialProfile),
    One,
}

impl WeightSpec {
    pub fn profile(&self) -> RadialProfile {
        match self {
            WeightSpec::Power(a) => RadialProfile::power(1.0, *a),
            WeightSpec::Radial(p) => p.clone(),
            WeightSpec::One => RadialProfile::power(1.0, 0.0),
        }
    }
}

/// |f| in one of the representations the module can rearrange.
#[derive(Debug, Clone)]
pub enum MeasurableSample {
    /// height * chi_{(0, radius)}(|x|).
    Indicator { radius: f64, height: f64 },
    /// |x|^delta chi_{(0, radius)}(|x|).
    TruncatedPower { delta: f64, radius: f64 },
    /// coefficient * |x|^exponent.
    Power { coefficient: f64, exponent: f64 },
    Radial(RadialProfile),
    /// Samples on the line; the structure must be rank one with the same k.
    Grid(GridFunction1D),
}

impl From<WeightSpec> for MeasurableSample {
    fn from(w: WeightSpec) -> Self {
        match w {
            WeightSpec::Power(a) => MeasurableSample::Power { coefficient: 1.0, exponent: a },
            WeightSpec::Radial(p) => MeasurableSample::Radial(p),
            WeightSpec::One => MeasurableSample::Power { coefficient: 1.0, exponent: 0.0 },
        }
    }
}

impl MeasurableSample {
    /// Radial form of |f|, if the sample is radial.
    pub fn profile(&self) -> Option<RadialProfile> {
        Some(match self {
            MeasurableSample::Indicator { radius, height } => RadialProfile::indicator(*radius, height.abs()),
            MeasurableSample::TruncatedPower { delta, radius } => RadialProfile::truncated_power(*delta, *radius),
            MeasurableSample::Power { coefficient, exponent } => RadialProfile::power(coefficient.abs(), *exponent),
            MeasurableSample::Radial(p) => p.abs_pow(1.0),
            MeasurableSample::Grid(_) => return None,
        })
    }
}

/// One piece C t^e of a piecewise power function on [lo, hi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub coefficient: f64,
    pub exponent: f64,
}

/// A non-increasing function on (0, inf).
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RearrangedProfile {
    /// coefficient * t^exponent on (0, cutoff), zero beyond.
    PowerForm {
        coefficient: f64,
        exponent: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff: Option<f64>,
    },
    /// height * chi_{(0, length)}.
    IndicatorForm { length: f64, height: f64 },
    /// Step function: values[i] on [knots[i-1], knots[i]), knots[-1] = 0, zero after the last knot.
    Grid { knots: Vec<f64>, values: Vec<f64> },
    /// Evaluated on demand from the level sets of a radial function.
    #[serde(skip)]
    Numeric(Arc<LevelSets>),
}

impl fmt::Debug for RearrangedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RearrangedProfile::PowerForm { coefficient, exponent, cutoff } => f
                .debug_struct("PowerForm")
                .field("coefficient", coefficient)
                .field("exponent", exponent)
                .field("cutoff", cutoff)
                .finish(),
            RearrangedProfile::IndicatorForm { length, height } => {
                f.debug_struct("IndicatorForm").field("length", length).field("height", height).finish()
            }
            RearrangedProfile::Grid { knots, .. } => write!(f, "Grid({} steps)", knots.len()),
            RearrangedProfile::Numeric(_) => write!(f, "Numeric"),
        }
    }
}

impl RearrangedProfile {
    pub fn constant(c: f64) -> Self {
        RearrangedProfile::PowerForm { coefficient: c, exponent: 0.0, cutoff: None }
    }

    pub fn power(coefficient: f64, exponent: f64) -> Self {
        RearrangedProfile::PowerForm { coefficient, exponent, cutoff: None }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            RearrangedProfile::PowerForm { coefficient, exponent, cutoff } => {
                if cutoff.map_or(false, |c| t >= c) {
                    0.0
                } else {
                    coefficient * t.powf(*exponent)
                }
            }
            RearrangedProfile::IndicatorForm { length, height } => {
                if t < *length {
                    *height
                } else {
                    0.0
                }
            }
            RearrangedProfile::Grid { knots, values } => {
                let i = knots.partition_point(|&k| k <= t);
                values.get(i).copied().unwrap_or(0.0)
            }
            RearrangedProfile::Numeric(l) => l.rearrangement_at(t),
        }
    }

    /// lambda * f*, the rearrangement of lambda |f|.
    pub fn scaled(&self, lambda: f64) -> Self {
        match self {
            RearrangedProfile::PowerForm { coefficient, exponent, cutoff } => {
                RearrangedProfile::PowerForm { coefficient: coefficient * lambda, exponent: *exponent, cutoff: *cutoff }
            }
            RearrangedProfile::IndicatorForm { length, height } => {
                RearrangedProfile::IndicatorForm { length: *length, height: height * lambda }
            }
            RearrangedProfile::Grid { knots, values } => RearrangedProfile::Grid {
                knots: knots.clone(),
                values: values.iter().map(|v| v * lambda).collect(),
            },
            RearrangedProfile::Numeric(l) => RearrangedProfile::Numeric(Arc::new(l.scaled(lambda))),
        }
    }

    /// Exact piecewise-power form; `None` for numeric profiles.
    pub fn pieces(&self) -> Option<Vec<Piece>> {
        Some(match self {
            RearrangedProfile::PowerForm { coefficient, exponent, cutoff } => vec![Piece {
                lo: 0.0,
                hi: cutoff.unwrap_or(f64::INFINITY),
                coefficient: *coefficient,
                exponent: *exponent,
            }],
            RearrangedProfile::IndicatorForm { length, height } => {
                vec![Piece { lo: 0.0, hi: *length, coefficient: *height, exponent: 0.0 }]
            }
            RearrangedProfile::Grid { knots, values } => {
                let mut out = Vec::with_capacity(knots.len());
                let mut lo = 0.0;
                for (&hi, &v) in knots.iter().zip(values) {
                    if hi > lo {
                        out.push(Piece { lo, hi, coefficient: v, exponent: 0.0 });
                        lo = hi;
                    }
                }
                out
            }
            RearrangedProfile::Numeric(_) => return None,
        })
    }

    /// Tail behaviour of the profile itself, in the sense of `TailHints`.
    pub fn hints(&self) -> TailHints {
        match self {
            RearrangedProfile::Numeric(l) => l.rearrangement_hints(),
            other => {
                let pieces = other.pieces().unwrap_or_default();
                let first = pieces.first().filter(|p| p.lo == 0.0 && p.coefficient != 0.0);
                let last = pieces.last();
                let support_end = last.map(|p| p.hi).filter(|h| h.is_finite()).or(Some(0.0).filter(|_| pieces.is_empty()));
                TailHints {
                    zero_exponent: Some(first.map_or(0.0, |p| p.exponent)),
                    infinity_exponent: Some(match (support_end, last) {
                        (Some(_), _) | (None, None) => f64::NEG_INFINITY,
                        (None, Some(p)) => p.exponent,
                    }),
                    breakpoints: pieces.iter().map(|p| p.lo).filter(|&x| x > 0.0).collect(),
                    support_end,
                }
            }
        }
    }

    /// Measure of {t : f*(t) > s}.
    pub fn level_measure(&self, s: f64) -> Extended {
        match self {
            RearrangedProfile::PowerForm { coefficient, exponent, cutoff } => {
                let cap = cutoff.map_or(Extended::Infinite, Extended::Finite);
                if *exponent == 0.0 {
                    if *coefficient > s {
                        cap
                    } else {
                        Extended::ZERO
                    }
                } else if *exponent < 0.0 {
                    if s <= 0.0 {
                        return cap;
                    }
                    let t = (s / coefficient).powf(1.0 / exponent);
                    Extended::Finite(cutoff.map_or(t, |c| t.min(c)))
                } else {
                    // Increasing powers are never rearrangements.
                    Extended::Infinite
                }
            }
            RearrangedProfile::IndicatorForm { length, height } => {
                if *height > s {
                    Extended::Finite(*length)
                } else {
                    Extended::ZERO
                }
            }
            RearrangedProfile::Grid { knots, values } => {
                let count = values.partition_point(|&v| v > s);
                if count == 0 {
                    Extended::ZERO
                } else {
                    Extended::Finite(knots[count - 1])
                }
            }
            RearrangedProfile::Numeric(l) => l.distribution(s),
        }
    }

    /// Checks the non-increasing invariant of grid profiles.
    pub fn is_non_increasing(&self) -> bool {
        match self {
            RearrangedProfile::Grid { knots, values } => {
                knots.windows(2).all(|w| w[0] <= w[1]) && values.windows(2).all(|w| w[1] <= w[0])
            }
            RearrangedProfile::PowerForm { exponent, .. } => *exponent <= 0.0,
            _ => true,
        }
    }
}

fn power_integral(c: f64, e: f64, lo: f64, hi: f64) -> Extended {
    if c == 0.0 || !(hi > lo) {
        return Extended::ZERO;
    }
    let m = e + 1.0;
    if (lo == 0.0 && m <= 0.0) || (hi.is_infinite() && m >= 0.0) {
        return Extended::Infinite;
    }
    let v = if lo == 0.0 {
        hi.powf(m) / m
    } else if hi.is_infinite() {
        -lo.powf(m) / m
    } else if m == 0.0 {
        (hi / lo).ln()
    } else {
        lo.powf(m) * (m * (hi / lo).ln()).exp_m1() / m
    };
    Extended::from_f64(c * v)
}

fn probe(lo: f64, hi: f64) -> f64 {
    if lo == 0.0 {
        0.5 * hi
    } else if hi.is_infinite() {
        2.0 * lo
    } else {
        0.5 * (lo + hi)
    }
}

fn covering(pieces: &[Piece], t: f64) -> Option<&Piece> {
    let i = pieces.partition_point(|p| p.hi <= t);
    pieces.get(i).filter(|p| p.lo <= t)
}

/// int_a^b t^c prod_j f_j(t)^{m_j} dt over profiles f_j.
///
/// Exact for piecewise-power profiles. A factor that vanishes kills its
/// interval when raised to a positive power and makes it infinite when
/// raised to a negative one (unless another factor kills it).
pub fn moment(factors: &[(&RearrangedProfile, f64)], c: f64, a: f64, b: f64) -> Result<Extended> {
    if !(b > a) {
        return Ok(Extended::ZERO);
    }
    let active: Vec<(&RearrangedProfile, f64)> = factors.iter().copied().filter(|(_, m)| *m != 0.0).collect();
    let exact: Option<Vec<(Vec<Piece>, f64)>> = active.iter().map(|(p, m)| Some((p.pieces()?, *m))).collect();
    match exact {
        Some(exact) => Ok(exact_moment(&exact, c, a, b)),
        None => moment_by_quadrature(&active, c, a, b),
    }
}

fn exact_moment(factors: &[(Vec<Piece>, f64)], c: f64, a: f64, b: f64) -> Extended {
    let mut cuts = vec![a, b];
    for (pieces, _) in factors {
        for p in pieces {
            for x in [p.lo, p.hi] {
                if x > a && x < b {
                    cuts.push(x);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = Extended::ZERO;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let t = probe(lo, hi);
        let mut coef = 1.0;
        let mut exponent = c;
        let mut killed = false;
        let mut blown = false;
        for (pieces, m) in factors {
            match covering(pieces, t).filter(|p| p.coefficient != 0.0) {
                Some(p) => {
                    coef *= p.coefficient.powf(*m);
                    exponent += p.exponent * m;
                }
                None if *m > 0.0 => killed = true,
                None => blown = true,
            }
        }
        if killed {
            continue;
        }
        if blown {
            return Extended::Infinite;
        }
        total = total + power_integral(coef, exponent, lo, hi);
        if !total.is_finite() {
            return total;
        }
    }
    total
}

/// Tail hints of t^c prod_j f_j^{m_j}, and the point beyond which a factor
/// with m_j < 0 vanishes (making the integrand infinite).
pub fn combined_hints(factors: &[(&RearrangedProfile, f64)], c: f64) -> (TailHints, Option<f64>) {
    let mut hints = TailHints { zero_exponent: Some(c), infinity_exponent: Some(c), ..Default::default() };
    let mut blown: Option<f64> = None;
    let mut killed: Option<f64> = None;
    for (p, m) in factors.iter().filter(|(_, m)| *m != 0.0) {
        let h = p.hints();
        hints.zero_exponent = hints.zero_exponent.zip(h.zero_exponent).map(|(x, y)| x + m * y);
        if let Some(end) = h.support_end {
            let slot = if *m > 0.0 { &mut killed } else { &mut blown };
            *slot = Some(slot.map_or(end, |t| t.min(end)));
        } else {
            hints.infinity_exponent = hints.infinity_exponent.zip(h.infinity_exponent).map(|(x, y)| x + m * y);
        }
        hints.breakpoints.extend(h.breakpoints);
    }
    if let Some(end) = killed {
        hints.support_end = Some(end);
        hints.infinity_exponent = Some(f64::NEG_INFINITY);
        if end == 0.0 {
            hints.zero_exponent = Some(f64::INFINITY);
        }
    }
    let blown = blown.filter(|&b| killed.map_or(true, |k| b < k));
    if blown.is_some() {
        hints.infinity_exponent = Some(f64::INFINITY);
    }
    (hints, blown)
}

/// `moment` by adaptive quadrature, ignoring any exact piecewise form.
pub fn moment_by_quadrature(factors: &[(&RearrangedProfile, f64)], c: f64, a: f64, b: f64) -> Result<Extended> {
    if !(b > a) {
        return Ok(Extended::ZERO);
    }
    let (hints, blown) = combined_hints(factors, c);
    if blown.map_or(false, |t| b > t) {
        return Ok(Extended::Infinite);
    }
    if hints.support_end == Some(0.0) {
        return Ok(Extended::ZERO);
    }
    let f = |t: f64| {
        let mut v = t.powf(c);
        for (p, m) in factors.iter().filter(|(_, m)| *m != 0.0) {
            let x = p.eval(t);
            if x == 0.0 {
                return if *m > 0.0 { 0.0 } else { f64::INFINITY };
            }
            v *= x.powf(*m);
        }
        v
    };
    match integrate_range(f, a, b, &hints, Tolerance { abs: 1e-300, rel: 1e-10 }) {
        Ok(v) => Ok(Extended::from_f64(v)),
        Err(QuadratureError::Divergent(_)) | Err(QuadratureError::NonFinite(_)) => Ok(Extended::Infinite),
        Err(e) => Err(e.into()),
    }
}

const SCAN_MIN_DECADE: i32 = -30;
const SCAN_MAX_DECADE: i32 = 30;
const SCAN_PER_DECADE: i32 = 24;
const BISECTIONS: usize = 64;

/// Level-set structure of a radial function |F(|x|)| under nu_k.
pub struct LevelSets {
    profile: RadialProfile,
    scale: f64,
    unit_ball: f64,
    n: f64,
    r: Vec<f64>,
    f: Vec<f64>,
    monotone: bool,
    sup: f64,
}

impl fmt::Debug for LevelSets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LevelSets").field("monotone", &self.monotone).field("sup", &self.sup).finish_non_exhaustive()
    }
}

impl LevelSets {
    /// Scans |F| on a log grid of radii 1e-30..1e30, refined at the hint breakpoints.
    pub fn new(profile: &RadialProfile, cfg: &DunklStructure) -> Result<Self> {
        let mut r: Vec<f64> = (SCAN_MIN_DECADE * SCAN_PER_DECADE..=SCAN_MAX_DECADE * SCAN_PER_DECADE)
            .map(|i| 10f64.powf(i as f64 / SCAN_PER_DECADE as f64))
            .collect();
        let marks = profile.hints.breakpoints.iter().chain(profile.hints.support_end.iter());
        for &b in marks {
            if b > 0.0 && b.is_finite() {
                r.extend([b * (1.0 - 1e-12), b, b * (1.0 + 1e-12)]);
            }
        }
        r.sort_by(f64::total_cmp);
        r.dedup();
        let f: Vec<f64> = r.iter().map(|&x| profile.eval(x).abs()).collect();
        if let Some(i) = f.iter().position(|v| v.is_nan()) {
            return Err(RearrangementError::Invalid(format!("profile is NaN at r = {:e}", r[i])));
        }
        let monotone = f.windows(2).all(|w| w[1] <= w[0]);
        let sup = f.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            profile: profile.clone(),
            scale: 1.0,
            unit_ball: cfg.ball_measure(1.0),
            n: cfg.homogeneous_dimension(),
            r,
            f,
            monotone,
            sup,
        })
    }

    fn scaled(&self, lambda: f64) -> Self {
        Self {
            profile: self.profile.clone(),
            scale: self.scale * lambda,
            unit_ball: self.unit_ball,
            n: self.n,
            r: self.r.clone(),
            f: self.f.iter().map(|v| v * lambda).collect(),
            monotone: self.monotone,
            sup: self.sup * lambda,
        }
    }

    fn value(&self, r: f64) -> f64 {
        self.scale * self.profile.eval(r).abs()
    }

    fn ball(&self, r: f64) -> f64 {
        self.unit_ball * r.powf(self.n)
    }

    pub fn sup(&self) -> f64 {
        self.sup
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// Boundary of {|F| > s} between two scan radii, by bisection in log r.
    fn crossing(&self, mut lo: f64, mut hi: f64, s: f64) -> f64 {
        let inside_at_lo = self.value(lo) > s;
        for _ in 0..BISECTIONS {
            let mid = (lo * hi).sqrt();
            if mid <= lo || mid >= hi {
                break;
            }
            if (self.value(mid) > s) == inside_at_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo * hi).sqrt()
    }

    /// D(s) = nu_k{|F| > s}.
    pub fn distribution(&self, s: f64) -> Extended {
        let last = self.f.len() - 1;
        if self.f[last] > s {
            return Extended::Infinite;
        }
        if self.monotone {
            let count = self.f.partition_point(|&v| v > s);
            if count == 0 {
                return Extended::ZERO;
            }
            let rho = self.crossing(self.r[count - 1], self.r[count], s);
            return Extended::from_f64(self.ball(rho));
        }
        let mut total = 0.0;
        let mut start = if self.f[0] > s { Some(0.0) } else { None };
        for i in 0..last {
            let (a, b) = (self.f[i] > s, self.f[i + 1] > s);
            if a != b {
                let x = self.crossing(self.r[i], self.r[i + 1], s);
                match start.take() {
                    Some(x0) => total += self.ball(x) - self.ball(x0),
                    None => start = Some(x),
                }
            }
        }
        Extended::from_f64(total)
    }

    /// f*(t) = inf{s >= 0 : D(s) <= t}.
    pub fn rearrangement_at(&self, t: f64) -> f64 {
        if self.monotone {
            let rho = (t / self.unit_ball).powf(1.0 / self.n);
            return self.value(rho);
        }
        let mut hi = self.sup * (1.0 + 1e-12);
        let mut lo = self.sup * 1e-300;
        if hi == 0.0 || self.distribution(lo) <= Extended::Finite(t) {
            return 0.0;
        }
        for _ in 0..BISECTIONS {
            let mid = (lo * hi).sqrt();
            if self.distribution(mid) <= Extended::Finite(t) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    fn slope(&self, t1: f64, t2: f64) -> Option<f64> {
        let (a, b) = (self.rearrangement_at(t1), self.rearrangement_at(t2));
        (a > 0.0 && b > 0.0).then(|| (b / a).ln() / (t2 / t1).ln())
    }

    fn rearrangement_hints(&self) -> TailHints {
        let n = self.n;
        let zero_exponent = match self.profile.hints.zero_exponent {
            Some(a) if self.monotone => Some((a / n).min(0.0)),
            _ => self.slope(self.ball(1e-25), self.ball(1e-20)).map(|e| e.min(0.0)),
        };
        let support = self.distribution(0.0).value();
        let infinity_exponent = match (support, self.profile.hints.infinity_exponent) {
            (Some(_), _) => Some(f64::NEG_INFINITY),
            (None, Some(b)) if self.monotone => Some(b / n),
            _ => self.slope(self.ball(1e20), self.ball(1e25)),
        };
        TailHints { zero_exponent, infinity_exponent, breakpoints: Vec::new(), support_end: support }
    }

    /// Step profile on `count` geometric thresholds spanning [sup 1e-8, sup].
    pub fn to_grid(&self, count: usize) -> Result<RearrangedProfile> {
        let count = count.max(2);
        let s: Vec<f64> = (0..count)
            .map(|i| self.sup * 1e-8f64.powf(i as f64 / (count - 1) as f64))
            .collect();
        let mut knots = Vec::with_capacity(count - 1);
        for w in s.windows(2) {
            match self.distribution(w[1]) {
                Extended::Finite(t) => knots.push(t),
                Extended::Infinite => {
                    return Err(RearrangementError::NotRearrangeable(format!(
                        "level set at {:e} has infinite measure",
                        w[1]
                    )))
                }
            }
        }
        Ok(RearrangedProfile::Grid { knots, values: s[..count - 1].to_vec() })
    }
}

fn rank_one_k(f: &GridFunction1D, cfg: &DunklStructure) -> Result<()> {
    match cfg.rank_one_multiplicity() {
        Some(k) if k == f.k => Ok(()),
        _ => Err(RearrangementError::Invalid("sampled functions need the rank-one structure of their grid".into())),
    }
}

/// D_f(s) = nu_k{|f| > s}.
pub fn distribution_function(f: &MeasurableSample, cfg: &DunklStructure, s: f64) -> Result<Extended> {
    if !(s >= 0.0) {
        return Err(RearrangementError::Invalid(format!("threshold {s} must be nonnegative")));
    }
    let n = cfg.homogeneous_dimension();
    Ok(match f {
        MeasurableSample::Indicator { radius, height } => {
            if height.abs() > s {
                Extended::Finite(cfg.ball_measure(*radius))
            } else {
                Extended::ZERO
            }
        }
        MeasurableSample::TruncatedPower { delta, radius } if *delta <= 0.0 => {
            let r = if *delta == 0.0 || s < radius.powf(*delta) { *radius } else { s.powf(1.0 / delta) };
            if *delta == 0.0 && s >= 1.0 {
                Extended::ZERO
            } else {
                Extended::Finite(cfg.ball_measure(r))
            }
        }
        MeasurableSample::Power { coefficient, exponent } => {
            let c = coefficient.abs();
            if c == 0.0 {
                Extended::ZERO
            } else if *exponent < 0.0 && s > 0.0 {
                Extended::Finite(cfg.ball_measure(1.0) * (s / c).powf(n / exponent))
            } else if *exponent == 0.0 && s >= c {
                Extended::ZERO
            } else {
                Extended::Infinite
            }
        }
        MeasurableSample::Grid(g) => {
            rank_one_k(g, cfg)?;
            let (values, weights) = measure_atoms(g);
            Extended::Finite(values.iter().zip(&weights).filter(|(v, _)| **v > s).map(|(_, w)| w).sum())
        }
        other => LevelSets::new(&other.profile().unwrap(), cfg)?.distribution(s),
    })
}

/// f* as a profile: closed forms where available.
pub fn decreasing_rearrangement(f: &MeasurableSample, cfg: &DunklStructure) -> Result<RearrangedProfile> {
    let n = cfg.homogeneous_dimension();
    let unit = cfg.ball_measure(1.0);
    match f {
        MeasurableSample::Indicator { radius, height } => Ok(RearrangedProfile::IndicatorForm {
            length: cfg.ball_measure(*radius),
            height: height.abs(),
        }),
        MeasurableSample::TruncatedPower { delta, radius } if *delta <= 0.0 => Ok(RearrangedProfile::PowerForm {
            coefficient: unit.powf(-delta / n),
            exponent: delta / n,
            cutoff: Some(cfg.ball_measure(*radius)),
        }),
        MeasurableSample::Power { coefficient, exponent } => {
            if *exponent > 0.0 && *coefficient != 0.0 {
                return Err(RearrangementError::NotRearrangeable(format!(
                    "|x|^{exponent} has level sets of infinite measure"
                )));
            }
            Ok(RearrangedProfile::power(coefficient.abs() * unit.powf(-exponent / n), exponent / n))
        }
        MeasurableSample::Grid(g) => {
            rank_one_k(g, cfg)?;
            let (values, weights) = measure_atoms(g);
            let mut order: Vec<usize> = (0..values.len()).collect();
            order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
            let mut acc = 0.0;
            let mut knots = Vec::with_capacity(order.len());
            let mut sorted = Vec::with_capacity(order.len());
            for i in order {
                if values[i] == 0.0 {
                    break;
                }
                acc += weights[i];
                knots.push(acc);
                sorted.push(values[i]);
            }
            Ok(RearrangedProfile::Grid { knots, values: sorted })
        }
        other => {
            let levels = LevelSets::new(&other.profile().unwrap(), cfg)?;
            if levels.sup() > 0.0 && !levels.distribution(levels.sup() * (1.0 - 1e-3)).is_finite() {
                return Err(RearrangementError::NotRearrangeable("every level set has infinite measure".into()));
            }
            Ok(RearrangedProfile::Numeric(Arc::new(levels)))
        }
    }
}

/// (1/v)*.
pub fn reciprocal_rearrangement(v: &WeightSpec, cfg: &DunklStructure) -> Result<RearrangedProfile> {
    match v {
        WeightSpec::One => Ok(RearrangedProfile::constant(1.0)),
        WeightSpec::Power(beta) if *beta < 0.0 => Err(RearrangementError::NotRearrangeable(format!(
            "1/v = |x|^{} has level sets of infinite measure",
            -beta
        ))),
        WeightSpec::Power(beta) => decreasing_rearrangement(
            &MeasurableSample::Power { coefficient: 1.0, exponent: -beta },
            cfg,
        ),
        WeightSpec::Radial(p) => {
            let levels = LevelSets::new(p, cfg)?;
            let zero = levels.f.windows(2).position(|w| w[0] == 0.0 && w[1] == 0.0);
            if let Some(i) = zero {
                return Err(RearrangementError::VanishingWeight(levels.r[i]));
            }
            let inner = p.clone();
            let mut recip = RadialProfile::new(move |r| 1.0 / inner.eval(r).abs());
            recip.hints.zero_exponent = p.hints.zero_exponent.map(|e| -e);
            recip.hints.infinity_exponent = p.hints.infinity_exponent.map(|e| -e);
            recip.hints.breakpoints = p.hints.breakpoints.clone();
            decreasing_rearrangement(&MeasurableSample::Radial(recip), cfg)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormRoute {
    Direct,
    Rearranged,
}

/// ||f||_{p,k}, either by weighted quadrature or as (int_0^inf (f*)^p)^{1/p}.
pub fn lp_norm(f: &MeasurableSample, p: f64, cfg: &DunklStructure, via: NormRoute) -> Result<Extended> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(RearrangementError::Invalid(format!("exponent p = {p} must lie in [1, inf)")));
    }
    match via {
        NormRoute::Rearranged => {
            let star = decreasing_rearrangement(f, cfg)?;
            Ok(moment(&[(&star, p)], 0.0, 0.0, f64::INFINITY)?.powf(1.0 / p))
        }
        NormRoute::Direct => match f {
            MeasurableSample::Grid(g) => {
                rank_one_k(g, cfg)?;
                let engine = DunklEngine::new(g.k, g.grid).map_err(|e| RearrangementError::Invalid(e.to_string()))?;
                Ok(Extended::Finite(engine.norm(g, p).map_err(|e| RearrangementError::Invalid(e.to_string()))?))
            }
            other => radial_direct(&other.profile().unwrap().abs_pow(p), cfg).map(|v| v.powf(1.0 / p)),
        },
    }
}

fn radial_direct(f: &RadialProfile, cfg: &DunklStructure) -> Result<Extended> {
    match cfg.radial_integral(f) {
        Ok(v) => Ok(Extended::Finite(v)),
        Err(MeasureError::Divergent(_)) => Ok(Extended::Infinite),
        Err(e) => Err(e.into()),
    }
}

/// The three integrals of the Hardy-Littlewood rearrangement inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    /// int f w d nu_k.
    pub lhs_direct: Extended,
    /// int f* w* dt.
    pub rhs_upper: Extended,
    /// int f* / (1/w)* dt.
    pub lhs_lower: Extended,
}

impl Pairing {
    /// lhs_lower <= lhs_direct <= rhs_upper up to a relative slack.
    pub fn sandwich_holds(&self, slack: f64) -> bool {
        let le = |a: Extended, b: Extended| match (a, b) {
            (_, Extended::Infinite) => true,
            (Extended::Infinite, _) => false,
            (Extended::Finite(x), Extended::Finite(y)) => x <= y + slack * y.abs().max(x.abs()),
        };
        le(self.lhs_lower, self.lhs_direct) && le(self.lhs_direct, self.rhs_upper)
    }
}

pub fn hl_pairing(f: &MeasurableSample, w: &WeightSpec, cfg: &DunklStructure) -> Result<Pairing> {
    let n = cfg.homogeneous_dimension();
    if let WeightSpec::Power(a) = w {
        if *a <= -n {
            return Err(RearrangementError::Invalid(format!("|x|^{a} is not locally integrable for nu_k")));
        }
    }
    let lhs_direct = match (f, w) {
        (MeasurableSample::Grid(g), _) => {
            rank_one_k(g, cfg)?;
            let engine = DunklEngine::new(g.k, g.grid).map_err(|e| RearrangementError::Invalid(e.to_string()))?;
            let (samples, s) = match w {
                WeightSpec::Power(a) => (g.values.iter().map(|v| v.norm().into()).collect::<Vec<_>>(), 2.0 * g.k + a),
                WeightSpec::One => (g.values.iter().map(|v| v.norm().into()).collect(), 2.0 * g.k),
                WeightSpec::Radial(p) => (
                    g.values.iter().zip(g.nodes()).map(|(v, x)| (v.norm() * p.eval(x.abs()).abs()).into()).collect(),
                    2.0 * g.k,
                ),
            };
            Extended::Finite(engine.integrate_spatial(&samples, s, false).re)
        }
        (MeasurableSample::Indicator { radius, height }, WeightSpec::Power(a)) => {
            Extended::Finite(height.abs() * cfg.sphere_constant() * radius.powf(a + n) / (a + n))
        }
        (MeasurableSample::Indicator { radius, height }, WeightSpec::One) => {
            Extended::Finite(height.abs() * cfg.ball_measure(*radius))
        }
        (f, w) => radial_direct(&f.profile().unwrap().product(&w.profile().abs_pow(1.0)), cfg)?,
    };
    let f_star = decreasing_rearrangement(f, cfg)?;
    let w_star = decreasing_rearrangement(&MeasurableSample::from(w.clone()), cfg);
    let rhs_upper = match w_star {
        Ok(w_star) => moment(&[(&f_star, 1.0), (&w_star, 1.0)], 0.0, 0.0, f64::INFINITY)?,
        // An increasing weight has w* = inf.
        Err(RearrangementError::NotRearrangeable(_)) => Extended::Infinite,
        Err(e) => return Err(e),
    };
    let lhs_lower = match reciprocal_rearrangement(w, cfg) {
        Ok(inv_star) => moment(&[(&f_star, 1.0), (&inv_star, -1.0)], 0.0, 0.0, f64::INFINITY)?,
        // (1/w)* = inf when 1/w increases.
        Err(RearrangementError::NotRearrangeable(_)) => Extended::ZERO,
        Err(e) => return Err(e),
    };
    Ok(Pairing { lhs_direct, rhs_upper, lhs_lower })
}
