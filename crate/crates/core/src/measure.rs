//! Reflection structures, the weight w_k, the measure nu_k and its constants.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::quadrature::{self, gauss_legendre, integrate, QuadratureError, TailHints, Tolerance};
use crate::special::ln_gamma;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeasureError {
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("quadrature for the normalizing constant did not converge (achieved relative tolerance {achieved:e})")]
    ConstantNotConverged { achieved: f64 },
    #[error("divergent integral: {0}")]
    Divergent(String),
    #[error(transparent)]
    Quadrature(QuadratureError),
}

impl From<QuadratureError> for MeasureError {
    fn from(e: QuadratureError) -> Self {
        match e {
            QuadratureError::Divergent(end) => MeasureError::Divergent(format!("integrand not integrable at {end}")),
            other => MeasureError::Quadrature(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReflectionModel {
    /// One multiplicity per coordinate reflection.
    Z2Power { multiplicities: Vec<f64> },
    /// Explicit positive roots with their multiplicities.
    GeneralRoots { roots: Vec<Vec<f64>>, multiplicities: Vec<f64> },
}

/// JSON form: {"dimension", "model", "multiplicities", "roots"?}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureConfig {
    pub dimension: usize,
    pub model: String,
    pub multiplicities: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<Vec<f64>>>,
}

/// A reflection structure with its derived constants gamma, c_k and d_k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StructureConfig", into = "StructureConfig")]
pub struct DunklStructure {
    dimension: usize,
    model: ReflectionModel,
    gamma: f64,
    mehta: f64,
    sphere: f64,
}

fn check_multiplicities(ks: &[f64]) -> Result<(), MeasureError> {
    match ks.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
        Some(k) => Err(MeasureError::Invalid(format!("multiplicity {k} is not a finite nonnegative number"))),
        None => Ok(()),
    }
}

/// 2^{gamma+d/2-1} Gamma(gamma+d/2): the radial factor of the Gaussian integral.
fn radial_gaussian_factor(gamma_index: f64, d: usize) -> f64 {
    let a = gamma_index + d as f64 / 2.0;
    ((a - 1.0) * LN_2 + ln_gamma(a)).exp()
}

impl DunklStructure {
    pub fn new(dimension: usize, model: ReflectionModel) -> Result<Self, MeasureError> {
        if dimension == 0 {
            return Err(MeasureError::Invalid("dimension must be positive".into()));
        }
        let gamma_index = match &model {
            ReflectionModel::Z2Power { multiplicities } => {
                if multiplicities.len() != dimension {
                    return Err(MeasureError::Invalid(format!(
                        "z2_power needs {dimension} multiplicities, got {}",
                        multiplicities.len()
                    )));
                }
                check_multiplicities(multiplicities)?;
                multiplicities.iter().sum::<f64>()
            }
            ReflectionModel::GeneralRoots { roots, multiplicities } => {
                if roots.len() != multiplicities.len() {
                    return Err(MeasureError::Invalid(format!(
                        "{} roots but {} multiplicities",
                        roots.len(),
                        multiplicities.len()
                    )));
                }
                check_multiplicities(multiplicities)?;
                for r in roots {
                    if r.len() != dimension {
                        return Err(MeasureError::Invalid(format!("root {r:?} does not have dimension {dimension}")));
                    }
                    if !r.iter().all(|x| x.is_finite()) || r.iter().all(|x| *x == 0.0) {
                        return Err(MeasureError::Invalid(format!("root {r:?} must be finite and nonzero")));
                    }
                }
                multiplicities.iter().sum::<f64>()
            }
        };
        let mut s = Self { dimension, model, gamma: gamma_index, mehta: f64::NAN, sphere: f64::NAN };
        let radial = radial_gaussian_factor(gamma_index, dimension);
        match &s.model {
            ReflectionModel::Z2Power { multiplicities } => {
                let log_inv: f64 = multiplicities
                    .iter()
                    .map(|&k| (k + 0.5) * LN_2 + ln_gamma(k + 0.5))
                    .sum();
                s.mehta = (-log_inv).exp();
                s.sphere = log_inv.exp() / radial;
            }
            ReflectionModel::GeneralRoots { .. } => {
                if dimension <= 3 {
                    let sphere = s.sphere_weight_integral()?;
                    s.sphere = sphere;
                    s.mehta = 1.0 / (sphere * radial);
                } else {
                    let inv = s.box_gaussian_integral()?;
                    s.mehta = 1.0 / inv;
                    s.sphere = inv / radial;
                }
            }
        }
        Ok(s)
    }

    /// Rank-one structure on the line with multiplicity k.
    pub fn rank_one(k: f64) -> Result<Self, MeasureError> {
        Self::new(1, ReflectionModel::Z2Power { multiplicities: vec![k] })
    }

    pub fn z2(multiplicities: &[f64]) -> Result<Self, MeasureError> {
        Self::new(multiplicities.len(), ReflectionModel::Z2Power { multiplicities: multiplicities.to_vec() })
    }

    pub fn general_roots(dimension: usize, roots: Vec<Vec<f64>>, multiplicities: Vec<f64>) -> Result<Self, MeasureError> {
        Self::new(dimension, ReflectionModel::GeneralRoots { roots, multiplicities })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn model(&self) -> &ReflectionModel {
        &self.model
    }

    /// gamma = sum of the multiplicities over the positive roots.
    pub fn gamma_index(&self) -> f64 {
        self.gamma
    }

    /// 2 gamma + d, the homogeneous dimension of nu_k.
    pub fn homogeneous_dimension(&self) -> f64 {
        2.0 * self.gamma + self.dimension as f64
    }

    /// The multiplicity of a rank-one structure, if this is one.
    pub fn rank_one_multiplicity(&self) -> Option<f64> {
        match &self.model {
            ReflectionModel::Z2Power { multiplicities } if self.dimension == 1 => Some(multiplicities[0]),
            _ => None,
        }
    }

    /// w_k(x) = prod |<xi, x>|^{2 k(xi)}.
    pub fn weight_eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dimension, "point has the wrong dimension");
        match &self.model {
            ReflectionModel::Z2Power { multiplicities } => multiplicities
                .iter()
                .zip(x)
                .filter(|(k, _)| **k != 0.0)
                .map(|(k, xi)| xi.abs().powf(2.0 * k))
                .product(),
            ReflectionModel::GeneralRoots { roots, multiplicities } => roots
                .iter()
                .zip(multiplicities)
                .filter(|(_, k)| **k != 0.0)
                .map(|(r, k)| {
                    let dot: f64 = r.iter().zip(x).map(|(a, b)| a * b).sum();
                    dot.abs().powf(2.0 * k)
                })
                .product(),
        }
    }

    /// c_k = (int e^{-|x|^2/2} w_k dx)^{-1}.
    pub fn mehta_constant(&self) -> f64 {
        self.mehta
    }

    /// d_k, with d nu_k = d_k r^{2 gamma + d - 1} dr on radial functions.
    pub fn sphere_constant(&self) -> f64 {
        self.sphere
    }

    /// nu_k of the ball of radius r about the origin.
    pub fn ball_measure(&self, r: f64) -> f64 {
        assert!(r >= 0.0, "radius must be nonnegative");
        let n = self.homogeneous_dimension();
        self.sphere * r.powf(n) / n
    }

    /// int F(|x|) d nu_k(x) = d_k int_0^inf F(r) r^{2 gamma + d - 1} dr.
    pub fn radial_integral(&self, f: &RadialProfile) -> Result<f64, MeasureError> {
        let m = self.homogeneous_dimension() - 1.0;
        let hints = f.hints.shifted(m);
        let v = quadrature::integrate_half_line(|r| f.eval(r) * r.powf(m), &hints, Tolerance::default())?;
        Ok(self.sphere * v)
    }

    /// Surface integral of w_k over the unit sphere, for d <= 3.
    fn sphere_weight_integral(&self) -> Result<f64, MeasureError> {
        let ReflectionModel::GeneralRoots { roots, multiplicities } = &self.model else {
            unreachable!()
        };
        let tol = Tolerance { abs: 1e-300, rel: 1e-12 };
        let achieved = |e: QuadratureError| match e {
            QuadratureError::NotConverged { value, error } => MeasureError::ConstantNotConverged {
                achieved: error / value.abs().max(f64::MIN_POSITIVE),
            },
            other => MeasureError::Quadrature(other),
        };
        match self.dimension {
            1 => Ok(self.weight_eval(&[1.0]) + self.weight_eval(&[-1.0])),
            2 => {
                let w = |t: f64| self.weight_eval(&[t.cos(), t.sin()]);
                let mut cuts = vec![0.0, 2.0 * PI];
                for r in roots {
                    let t0 = (-r[0]).atan2(r[1]).rem_euclid(PI);
                    cuts.push(t0);
                    cuts.push(t0 + PI);
                }
                integrate_pieces(w, cuts, tol).map_err(achieved)
            }
            3 => {
                let pairs: Vec<(&Vec<f64>, f64)> = roots.iter().zip(multiplicities.iter().copied()).collect();
                let inner = |theta: f64| -> Result<f64, QuadratureError> {
                    let (st, ct) = theta.sin_cos();
                    let w = |phi: f64| {
                        let (sp, cp) = phi.sin_cos();
                        self.weight_eval(&[st * cp, st * sp, ct])
                    };
                    let mut cuts = vec![0.0, 2.0 * PI];
                    for (r, _) in &pairs {
                        // r0 st cos(phi) + r1 st sin(phi) + r2 ct = 0
                        let amp = st * r[0].hypot(r[1]);
                        let c = r[2] * ct;
                        if amp > 0.0 && c.abs() <= amp {
                            let phase = r[1].atan2(r[0]);
                            let delta = (-c / amp).acos();
                            cuts.push((phase + delta).rem_euclid(2.0 * PI));
                            cuts.push((phase - delta).rem_euclid(2.0 * PI));
                        }
                    }
                    Ok(integrate_pieces(w, cuts, tol)? * st)
                };
                let mut cuts = vec![0.0, PI];
                for (r, _) in &pairs {
                    let t = r[2].abs().atan2(r[0].hypot(r[1]));
                    cuts.push(t);
                    cuts.push(PI - t);
                    cuts.push(0.5 * PI - t);
                    cuts.push(0.5 * PI + t);
                }
                let failure = std::cell::Cell::new(None);
                let outer = |theta: f64| match inner(theta) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.set(Some(e));
                        0.0
                    }
                };
                let v = integrate_pieces(outer, cuts, Tolerance { abs: 1e-300, rel: 1e-10 }).map_err(achieved)?;
                match failure.take() {
                    Some(e) => Err(achieved(e)),
                    None => Ok(v),
                }
            }
            _ => unreachable!(),
        }
    }

    /// Tensor Gauss-Legendre on a truncated box for the Gaussian integral.
    fn box_gaussian_integral(&self) -> Result<f64, MeasureError> {
        let d = self.dimension;
        let n = self.homogeneous_dimension();
        let mut half = 8.0f64;
        while (-half * half / 2.0).exp() * half.powf(n) > 1e-16 {
            half += 0.5;
        }
        let estimate = |m: usize| -> Option<f64> {
            let (gx, gw) = gauss_legendre(m);
            let nodes: Vec<f64> = gx.iter().map(|x| half * x).collect();
            let weights: Vec<f64> = gw.iter().map(|w| half * w).collect();
            let total = m.checked_pow(d as u32)?;
            if total > 20_000_000 {
                return None;
            }
            let mut idx = vec![0usize; d];
            let mut x = vec![0.0; d];
            let mut sum = 0.0;
            for _ in 0..total {
                let mut w = 1.0;
                let mut r2 = 0.0;
                for i in 0..d {
                    x[i] = nodes[idx[i]];
                    w *= weights[idx[i]];
                    r2 += x[i] * x[i];
                }
                sum += w * (-r2 / 2.0).exp() * self.weight_eval(&x);
                for i in 0..d {
                    idx[i] += 1;
                    if idx[i] < m {
                        break;
                    }
                    idx[i] = 0;
                }
            }
            Some(sum)
        };
        let coarse = estimate(52).ok_or(MeasureError::ConstantNotConverged { achieved: f64::INFINITY })?;
        let Some(fine) = estimate(66) else {
            return Err(MeasureError::ConstantNotConverged { achieved: f64::INFINITY });
        };
        let achieved = ((fine - coarse) / fine).abs();
        if achieved > 1e-8 {
            return Err(MeasureError::ConstantNotConverged { achieved });
        }
        Ok(fine)
    }
}

fn integrate_pieces<F: Fn(f64) -> f64>(f: F, mut cuts: Vec<f64>, tol: Tolerance) -> Result<f64, QuadratureError> {
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(&f, w[0], w[1], tol)?.value;
    }
    Ok(total)
}

impl TryFrom<StructureConfig> for DunklStructure {
    type Error = MeasureError;
    fn try_from(c: StructureConfig) -> Result<Self, MeasureError> {
        let model = match c.model.as_str() {
            "z2_power" => {
                if c.roots.is_some() {
                    return Err(MeasureError::Invalid("z2_power does not take roots".into()));
                }
                ReflectionModel::Z2Power { multiplicities: c.multiplicities }
            }
            "general_roots" => ReflectionModel::GeneralRoots {
                roots: c.roots.ok_or_else(|| MeasureError::Invalid("general_roots needs a roots list".into()))?,
                multiplicities: c.multiplicities,
            },
            other => return Err(MeasureError::Invalid(format!("unknown model {other:?}"))),
        };
        DunklStructure::new(c.dimension, model)
    }
}

impl From<DunklStructure> for StructureConfig {
    fn from(s: DunklStructure) -> Self {
        match s.model {
            ReflectionModel::Z2Power { multiplicities } => StructureConfig {
                dimension: s.dimension,
                model: "z2_power".into(),
                multiplicities,
                roots: None,
            },
            ReflectionModel::GeneralRoots { roots, multiplicities } => StructureConfig {
                dimension: s.dimension,
                model: "general_roots".into(),
                multiplicities,
                roots: Some(roots),
            },
        }
    }
}

type RadialFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A function of |x| with optional tail hints for improper integrals.
#[derive(Clone)]
pub struct RadialProfile {
    eval: Arc<RadialFn>,
    pub hints: TailHints,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile").field("hints", &self.hints).finish_non_exhaustive()
    }
}

impl RadialProfile {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self { eval: Arc::new(f), hints: TailHints::default() }
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.eval)(r)
    }

    pub fn with_zero_exponent(mut self, e: f64) -> Self {
        self.hints.zero_exponent = Some(e);
        self
    }

    pub fn with_infinity_exponent(mut self, e: f64) -> Self {
        self.hints.infinity_exponent = Some(e);
        self
    }

    pub fn with_breakpoint(mut self, r: f64) -> Self {
        self.hints.breakpoints.push(r);
        self
    }

    pub fn supported_on(mut self, r: f64) -> Self {
        self.hints.support_end = Some(r);
        self.hints.infinity_exponent = Some(f64::NEG_INFINITY);
        self
    }

    pub fn gaussian() -> Self {
        Self::new(|r| (-r * r / 2.0).exp())
            .with_zero_exponent(0.0)
            .with_infinity_exponent(f64::NEG_INFINITY)
    }

    /// height * chi_{(0, radius)}.
    pub fn indicator(radius: f64, height: f64) -> Self {
        Self::new(move |r| if r < radius { height } else { 0.0 })
            .with_zero_exponent(0.0)
            .supported_on(radius)
    }

    /// coefficient * r^delta.
    pub fn power(coefficient: f64, delta: f64) -> Self {
        Self::new(move |r| coefficient * r.powf(delta))
            .with_zero_exponent(delta)
            .with_infinity_exponent(delta)
    }

    /// r^delta chi_{(0, radius)}.
    pub fn truncated_power(delta: f64, radius: f64) -> Self {
        Self::new(move |r| if r < radius { r.powf(delta) } else { 0.0 })
            .with_zero_exponent(delta)
            .supported_on(radius)
    }

    /// Pointwise product, with hints combined where both are known.
    pub fn product(&self, other: &RadialProfile) -> RadialProfile {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let add = |x: Option<f64>, y: Option<f64>| Some(x? + y?);
        let mut breakpoints = self.hints.breakpoints.clone();
        breakpoints.extend(other.hints.breakpoints.iter().copied());
        let support_end = match (self.hints.support_end, other.hints.support_end) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let mut infinity_exponent = add(self.hints.infinity_exponent, other.hints.infinity_exponent);
        if support_end.is_some() {
            infinity_exponent = Some(f64::NEG_INFINITY);
        }
        RadialProfile {
            eval: Arc::new(move |r| a(r) * b(r)),
            hints: TailHints {
                zero_exponent: add(self.hints.zero_exponent, other.hints.zero_exponent),
                infinity_exponent,
                breakpoints,
                support_end,
            },
        }
    }

    /// |F|^p with hints scaled accordingly.
    pub fn abs_pow(&self, p: f64) -> RadialProfile {
        let a = self.eval.clone();
        RadialProfile {
            eval: Arc::new(move |r| a(r).abs().powf(p)),
            hints: TailHints {
                zero_exponent: self.hints.zero_exponent.map(|e| e * p),
                infinity_exponent: self.hints.infinity_exponent.map(|e| e * p),
                breakpoints: self.hints.breakpoints.clone(),
                support_end: self.hints.support_end,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn gamma_index_examples() {
        assert_eq!(DunklStructure::z2(&[0.0, 0.0]).unwrap().gamma_index(), 0.0);
        assert_eq!(DunklStructure::rank_one(0.5).unwrap().gamma_index(), 0.5);
        assert_eq!(DunklStructure::z2(&[1.0, 2.0]).unwrap().gamma_index(), 3.0);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(DunklStructure::z2(&[0.0, 0.0]).unwrap().weight_eval(&[3.0, -2.0]), 1.0);
        assert_eq!(DunklStructure::rank_one(1.0).unwrap().weight_eval(&[2.0]), 4.0);
        assert_relative_eq!(DunklStructure::z2(&[0.5, 0.5]).unwrap().weight_eval(&[1.0, 2.0]), 2.0);
    }

    #[test]
    fn constants_in_closed_form() {
        let c0 = DunklStructure::rank_one(0.0).unwrap();
        assert_relative_eq!(c0.mehta_constant(), (2.0 * PI).powf(-0.5), epsilon = 1e-15);
        assert_relative_eq!(DunklStructure::rank_one(0.5).unwrap().mehta_constant(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(DunklStructure::z2(&[0.0, 0.0]).unwrap().mehta_constant(), 1.0 / (2.0 * PI), epsilon = 1e-15);
        for &k in &[0.0, 0.5, 1.0, 2.5, 3.7] {
            assert_relative_eq!(DunklStructure::rank_one(k).unwrap().sphere_constant(), 2.0, epsilon = 1e-12);
        }
        assert_relative_eq!(DunklStructure::z2(&[0.0, 0.0]).unwrap().sphere_constant(), 2.0 * PI, epsilon = 1e-14);
    }

    #[test]
    fn ball_measure_examples() {
        let s = DunklStructure::rank_one(0.0).unwrap();
        assert_eq!(s.ball_measure(0.0), 0.0);
        assert_relative_eq!(s.ball_measure(1.0), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn general_roots_match_coordinate_model() {
        let z = DunklStructure::z2(&[0.3, 1.2]).unwrap();
        let g = DunklStructure::general_roots(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.3, 1.2]).unwrap();
        assert_relative_eq!(g.mehta_constant(), z.mehta_constant(), epsilon = 1e-10);
        assert_relative_eq!(g.sphere_constant(), z.sphere_constant(), epsilon = 1e-10);
        let z3 = DunklStructure::z2(&[0.5, 0.25, 1.0]).unwrap();
        let g3 = DunklStructure::general_roots(
            3,
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            vec![0.5, 0.25, 1.0],
        )
        .unwrap();
        assert_relative_eq!(g3.mehta_constant(), z3.mehta_constant(), epsilon = 1e-8);
    }

    #[test]
    fn rotated_rank_one_root() {
        // A single unit root gives the same constant wherever it points.
        let s = 0.5f64.sqrt();
        let g = DunklStructure::general_roots(2, vec![vec![s, -s]], vec![0.35]).unwrap();
        let z = DunklStructure::z2(&[0.35, 0.0]).unwrap();
        assert_relative_eq!(g.mehta_constant(), z.mehta_constant(), epsilon = 1e-10);
    }

    #[test]
    fn box_rule_in_four_dimensions() {
        let e: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let g = DunklStructure::general_roots(4, e, vec![1.0, 0.0, 2.0, 0.0]).unwrap();
        let z = DunklStructure::z2(&[1.0, 0.0, 2.0, 0.0]).unwrap();
        assert_relative_eq!(g.mehta_constant(), z.mehta_constant(), epsilon = 1e-9);
    }

    #[test]
    fn invalid_structures_are_rejected() {
        assert!(DunklStructure::z2(&[-0.1]).is_err());
        assert!(DunklStructure::general_roots(2, vec![vec![0.0, 0.0]], vec![1.0]).is_err());
        assert!(DunklStructure::general_roots(2, vec![vec![1.0]], vec![1.0]).is_err());
    }

    #[test]
    fn radial_integrals() {
        for s in [
            DunklStructure::rank_one(0.0).unwrap(),
            DunklStructure::rank_one(2.5).unwrap(),
            DunklStructure::z2(&[0.5, 1.5]).unwrap(),
        ] {
            let g = s.radial_integral(&RadialProfile::gaussian()).unwrap();
            assert_relative_eq!(g, 1.0 / s.mehta_constant(), epsilon = 1e-10);
            let n = s.homogeneous_dimension();
            let b = s.radial_integral(&RadialProfile::indicator(1.7, 1.0)).unwrap();
            assert_relative_eq!(b, s.ball_measure(1.7), epsilon = 1e-11);
            let t = s.radial_integral(&RadialProfile::truncated_power(-0.5, 2.0)).unwrap();
            assert_relative_eq!(t, s.sphere_constant() * 2f64.powf(n - 0.5) / (n - 0.5), epsilon = 1e-10);
        }
        let s = DunklStructure::rank_one(0.5).unwrap();
        assert!(matches!(s.radial_integral(&RadialProfile::power(1.0, -1.0)), Err(MeasureError::Divergent(_))));
    }

    #[test]
    fn json_config_round_trip() {
        let text = r#"{"dimension":2,"model":"z2_power","multiplicities":[0.5,1.0]}"#;
        let s: DunklStructure = serde_json::from_str(text).unwrap();
        assert_eq!(s.gamma_index(), 1.5);
        assert_eq!(serde_json::to_string(&s).unwrap(), text);
        let bad = r#"{"dimension":1,"model":"a2","multiplicities":[1.0]}"#;
        assert!(serde_json::from_str::<DunklStructure>(bad).is_err());
    }

    proptest! {
        #[test]
        fn weight_is_homogeneous(
            x in prop::collection::vec(-3.0f64..3.0, 2),
            lambda in -4.0f64..4.0,
            k1 in 0.0f64..3.0,
            k2 in 0.0f64..3.0,
        ) {
            let s = DunklStructure::z2(&[k1, k2]).unwrap();
            let scaled: Vec<f64> = x.iter().map(|v| v * lambda).collect();
            let lhs = s.weight_eval(&scaled);
            let rhs = lambda.abs().powf(2.0 * s.gamma_index()) * s.weight_eval(&x);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300));
        }

        #[test]
        fn ball_measure_scales(r in 0.01f64..10.0, lambda in 0.01f64..10.0, k in 0.0f64..3.0) {
            let s = DunklStructure::rank_one(k).unwrap();
            let n = s.homogeneous_dimension();
            let lhs = s.ball_measure(lambda * r);
            let rhs = lambda.powf(n) * s.ball_measure(r);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }
    }
}
