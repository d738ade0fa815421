//! Adaptive Gauss-Kronrod integration, half-line integrals with power-law
//! tails, and Gauss-Jacobi rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::special::ln_gamma;

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208931124875,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-300, rel: 1e-11 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Zero,
    Infinity,
}

impl std::fmt::Display for Endpoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Endpoint::Zero => write!(f, "0"),
            Endpoint::Infinity => write!(f, "infinity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("adaptive quadrature did not converge: estimate {value:e}, achieved error {error:e}")]
    NotConverged { value: f64, error: f64 },
    #[error("divergent integral at {0}")]
    Divergent(Endpoint),
    #[error("integrand is not finite at x = {0:e}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// One 21-point Kronrod panel: (kronrod value, error estimate).
fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64), QuadratureError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !fc.is_finite() {
        return Err(QuadratureError::NonFinite(c));
    }
    let mut gauss = 0.0;
    let mut kron = fc * WGK[10];
    for j in 0..10 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x), f(c + x));
        if !f1.is_finite() {
            return Err(QuadratureError::NonFinite(c - x));
        }
        if !f2.is_finite() {
            return Err(QuadratureError::NonFinite(c + x));
        }
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((kron * h, ((kron - gauss) * h).abs()))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

const MAX_PANELS: usize = 4000;

/// Globally adaptive Gauss-Kronrod 10/21 on a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<Estimate, QuadratureError> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let (v, e) = kronrod21(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, error: e });
    let mut value = v;
    let mut error = e;
    // Panels too narrow to split are parked here.
    let mut frozen_error = 0.0;
    while error > tol.abs.max(tol.rel * value.abs()) {
        if heap.len() >= MAX_PANELS {
            return Err(QuadratureError::NotConverged { value, error });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-14 * mid.abs() {
            frozen_error += worst.error;
            if frozen_error > tol.abs.max(tol.rel * value.abs()) {
                return Err(QuadratureError::NotConverged { value, error });
            }
            continue;
        }
        let (v1, e1) = kronrod21(&f, worst.a, mid)?;
        let (v2, e2) = kronrod21(&f, mid, worst.b)?;
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        if heap.is_empty() {
            break;
        }
    }
    // Resum to shed accumulated rounding in the running totals.
    let value: f64 = heap.iter().map(|p| p.value).sum::<f64>();
    let error: f64 = heap.iter().map(|p| p.error).sum::<f64>() + frozen_error;
    Ok(Estimate { value, error })
}

/// Side information for integrals over subsets of (0, inf).
///
/// Exponents describe the integrand itself: f(x) ~ C x^e at the endpoint.
/// `f64::NEG_INFINITY` at infinity means faster than any power.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TailHints {
    pub zero_exponent: Option<f64>,
    pub infinity_exponent: Option<f64>,
    pub breakpoints: Vec<f64>,
    pub support_end: Option<f64>,
}

impl TailHints {
    /// Hints for x^m f(x) given hints for f.
    pub fn shifted(&self, m: f64) -> Self {
        Self {
            zero_exponent: self.zero_exponent.map(|e| e + m),
            infinity_exponent: self.infinity_exponent.map(|e| e + m),
            breakpoints: self.breakpoints.clone(),
            support_end: self.support_end,
        }
    }
}

const MAX_SHELLS: usize = 600;

/// Sum of dyadic shells from `x0` toward 0 or infinity, closed by a geometric
/// tail once consecutive shell ratios settle.
fn shell_sum<F: Fn(f64) -> f64>(
    f: &F,
    x0: f64,
    toward: Endpoint,
    hint: Option<f64>,
    tol: Tolerance,
) -> Result<f64, QuadratureError> {
    if let Some(e) = hint {
        let divergent = match toward {
            Endpoint::Zero => e <= -1.0,
            Endpoint::Infinity => e >= -1.0,
        };
        if divergent {
            return Err(QuadratureError::Divergent(toward));
        }
    }
    let shell_tol = Tolerance { abs: tol.abs, rel: tol.rel * 0.1 };
    let mut sum = 0.0;
    let mut prev: Option<f64> = None;
    let mut prev_ratio: Option<f64> = None;
    let mut growing = 0usize;
    let mut x = x0;
    for _ in 0..MAX_SHELLS {
        let (lo, hi, next) = match toward {
            Endpoint::Zero => (0.5 * x, x, 0.5 * x),
            Endpoint::Infinity => (x, 2.0 * x, 2.0 * x),
        };
        if !(lo > 0.0) || !hi.is_finite() {
            break;
        }
        let piece = match integrate(f, lo, hi, shell_tol) {
            Ok(est) => est.value,
            Err(QuadratureError::NotConverged { value, .. }) => value,
            Err(e) => return Err(e),
        };
        sum += piece;
        x = next;
        let small = piece.abs() <= 1e-3 * tol.rel * sum.abs() || piece.abs() <= tol.abs;
        if small && prev.map_or(false, |p: f64| p.abs() <= 1e-3 * tol.rel * sum.abs() || p.abs() <= tol.abs) {
            return Ok(sum);
        }
        if let Some(p) = prev {
            if p != 0.0 && piece != 0.0 {
                let ratio = piece / p;
                if ratio.abs() >= 1.0 - 1e-9 {
                    growing += 1;
                    if growing >= 12 {
                        return Err(QuadratureError::Divergent(toward));
                    }
                } else {
                    growing = 0;
                }
                if let Some(r0) = prev_ratio {
                    if ratio.abs() < 1.0 - 1e-9 && (ratio - r0).abs() <= 1e-10 * ratio.abs().max(1e-3) {
                        return Ok(sum + piece * ratio / (1.0 - ratio));
                    }
                }
                prev_ratio = Some(ratio);
            }
        }
        prev = Some(piece);
    }
    match prev_ratio {
        Some(r) if r.abs() >= 1.0 - 1e-6 => Err(QuadratureError::Divergent(toward)),
        _ => Err(QuadratureError::NotConverged { value: sum, error: prev.unwrap_or(0.0).abs() }),
    }
}

/// Integral of f over (a, b) with 0 <= a < b <= inf.
///
/// The bounded core is split at the breakpoints; an endpoint at 0 or at
/// infinity is handled by dyadic shells with geometric extrapolation, which
/// is exact for pure power tails.
pub fn integrate_range<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    hints: &TailHints,
    tol: Tolerance,
) -> Result<f64, QuadratureError> {
    assert!(a >= 0.0, "lower limit must be nonnegative");
    let b = match hints.support_end {
        Some(s) => b.min(s),
        None => b,
    };
    if !(b > a) {
        return Ok(0.0);
    }
    let lo = if a > 0.0 {
        a
    } else {
        let first = hints
            .breakpoints
            .iter()
            .copied()
            .filter(|&x| x > 0.0)
            .fold(1.0f64, f64::min);
        0.5 * first.min(b)
    };
    let hi = if b.is_finite() {
        b
    } else {
        let last = hints.breakpoints.iter().copied().fold(1.0f64, f64::max);
        2.0 * last.max(lo)
    };
    let mut cuts: Vec<f64> = vec![lo];
    let mut inner: Vec<f64> = hints
        .breakpoints
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(hi);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += match integrate(&f, w[0], w[1], tol) {
            Ok(est) => est.value,
            Err(QuadratureError::NotConverged { value, error }) => {
                if error <= 1e-6 * value.abs().max(tol.abs) {
                    value
                } else {
                    return Err(QuadratureError::NotConverged { value, error });
                }
            }
            Err(e) => return Err(e),
        };
    }
    if a == 0.0 {
        total += shell_sum(&f, lo, Endpoint::Zero, hints.zero_exponent, tol)?;
    }
    if b.is_infinite() {
        total += shell_sum(&f, hi, Endpoint::Infinity, hints.infinity_exponent, tol)?;
    }
    Ok(total)
}

/// Integral of f over (0, inf).
pub fn integrate_half_line<F: Fn(f64) -> f64>(
    f: F,
    hints: &TailHints,
    tol: Tolerance,
) -> Result<f64, QuadratureError> {
    integrate_range(f, 0.0, f64::INFINITY, hints, tol)
}

/// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1, 1], by Golub-Welsch.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && a > -1.0 && b > -1.0);
    let ab = a + b;
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(ab + 2.0))
    .exp();
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let k = i as f64;
        let s = 2.0 * k + ab;
        jac[(i, i)] = if i == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if i + 1 < n {
            let m = k + 1.0;
            let t = 2.0 * m + ab;
            let beta = if i == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * m * (m + a) * (m + b) * (m + ab) / (t * t * (t + 1.0) * (t - 1.0))
            };
            let off = beta.sqrt();
            jac[(i, i + 1)] = off;
            jac[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    gauss_jacobi(n, 0.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn smooth_and_singular_finite_integrals() {
        let t = Tolerance::default();
        let v = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, t).unwrap();
        assert_relative_eq!(v.value, 2.0, epsilon = 1e-13);
        let v = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, t).unwrap();
        assert_relative_eq!(v.value, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn half_line_power_tails() {
        let t = Tolerance::default();
        let hints = TailHints { zero_exponent: Some(-0.5), infinity_exponent: Some(-2.5), ..Default::default() };
        // int_0^1 x^-1/2 + int_1^inf x^-5/2 = 2 + 2/3
        let v = integrate_half_line(|x: f64| if x < 1.0 { x.powf(-0.5) } else { x.powf(-2.5) }, &TailHints { breakpoints: vec![1.0], ..hints }, t)
            .unwrap();
        assert_relative_eq!(v, 2.0 + 2.0 / 3.0, epsilon = 1e-10);
        let g = integrate_half_line(|x: f64| (-x * x / 2.0).exp(), &TailHints::default(), t).unwrap();
        assert_relative_eq!(g, (std::f64::consts::PI / 2.0).sqrt(), epsilon = 1e-11);
    }

    #[test]
    fn slow_tail_without_hints() {
        let v = integrate_half_line(|x: f64| 1.0 / (1.0 + x).powf(1.5), &TailHints::default(), Tolerance::default()).unwrap();
        assert_relative_eq!(v, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn divergence_is_reported() {
        let r = integrate_half_line(|x: f64| 1.0 / (1.0 + x), &TailHints::default(), Tolerance::default());
        assert_eq!(r, Err(QuadratureError::Divergent(Endpoint::Infinity)));
        let hints = TailHints { zero_exponent: Some(-1.0), ..Default::default() };
        let r = integrate_range(|x: f64| 1.0 / x, 0.0, 1.0, &hints, Tolerance::default());
        assert_eq!(r, Err(QuadratureError::Divergent(Endpoint::Zero)));
        let r = integrate_range(|x: f64| x.powf(-1.2), 0.0, 1.0, &TailHints::default(), Tolerance::default());
        assert_eq!(r, Err(QuadratureError::Divergent(Endpoint::Zero)));
    }

    #[test]
    fn jacobi_rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_jacobi(8, 0.0, 0.7);
        // int_{-1}^1 (1+x)^0.7 x^3 dx via substitution t = 1+x
        let exact: f64 = {
            let m = |p: f64| 2f64.powf(p + 1.0) / (p + 1.0);
            let s = 0.7;
            m(s + 3.0) - 3.0 * m(s + 2.0) + 3.0 * m(s + 1.0) - m(s)
        };
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(3)).sum();
        assert_relative_eq!(got, exact, epsilon = 1e-13);
        let (x, w) = gauss_legendre(5);
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert_relative_eq!(got, 2.0 / 9.0, epsilon = 1e-14);
    }
}
