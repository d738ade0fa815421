//! Gamma wrappers, normalized Bessel functions and the rank-one Dunkl kernel.

use num_complex::Complex64;
use std::f64::consts::PI;

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Below this argument the power series is used, above it the Hankel expansion.
const SERIES_LIMIT: f64 = 12.0;

fn series(nu: f64, z: f64) -> f64 {
    let w = -0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..200 {
        let m = m as f64;
        term *= w / (m * (nu + m));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Hankel asymptotic series: returns (P, Q) with
/// J_nu(z) ~ sqrt(2/(pi z)) (P cos w - Q sin w), w = z - (nu/2 + 1/4) pi.
fn hankel_pq(nu: f64, z: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for j in 1..60 {
        let odd = (2 * j - 1) as f64;
        term *= (mu - odd * odd) / (j as f64 * 8.0 * z);
        let size = term.abs();
        if size > last {
            break;
        }
        match j % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if size < 1e-17 {
            break;
        }
        last = size;
    }
    (p, q)
}

/// Normalized Bessel function j_nu(z) = Gamma(nu+1) (2/z)^nu J_nu(z), with j_nu(0) = 1.
///
/// Valid for nu > -1. Even in z.
pub fn normalized_bessel(nu: f64, z: f64) -> f64 {
    let z = z.abs();
    if z < SERIES_LIMIT {
        return series(nu, z);
    }
    let scale = normalization(nu);
    asymptotic(nu, z, scale)
}

fn normalization(nu: f64) -> f64 {
    // Gamma(nu+1) 2^nu sqrt(2/pi), kept in log form for large nu.
    (ln_gamma(nu + 1.0) + nu * std::f64::consts::LN_2).exp() * (2.0 / PI).sqrt()
}

fn asymptotic(nu: f64, z: f64, scale: f64) -> f64 {
    let (p, q) = hankel_pq(nu, z);
    let w = z - (0.5 * nu + 0.25) * PI;
    scale * z.powf(-nu - 0.5) * (p * w.cos() - q * w.sin())
}

/// The rank-one Dunkl kernel E_k(x, iy) as a function of z = xy.
///
/// E_k(x, iy) = j_{k-1/2}(xy) + i xy/(2k+1) j_{k+1/2}(xy).
#[derive(Debug, Clone, Copy)]
pub struct DunklKernel {
    k: f64,
    scale_even: f64,
    scale_odd: f64,
}

impl DunklKernel {
    pub fn new(k: f64) -> Self {
        assert!(k >= 0.0, "multiplicity must be nonnegative");
        Self {
            k,
            scale_even: normalization(k - 0.5),
            scale_odd: normalization(k + 0.5),
        }
    }

    pub fn multiplicity(&self) -> f64 {
        self.k
    }

    /// E_k(z, i) for real z; E_k(x, iy) = eval(x*y).
    pub fn eval(&self, z: f64) -> Complex64 {
        if self.k == 0.0 {
            return Complex64::new(z.cos(), z.sin());
        }
        let k = self.k;
        let a = z.abs();
        let (even, odd) = if a < SERIES_LIMIT {
            (series(k - 0.5, a), a / (2.0 * k + 1.0) * series(k + 0.5, a))
        } else {
            (
                asymptotic(k - 0.5, a, self.scale_even),
                a / (2.0 * k + 1.0) * asymptotic(k + 0.5, a, self.scale_odd),
            )
        };
        Complex64::new(even, if z < 0.0 { -odd } else { odd })
    }
}

/// E_k(x, iy) for the rank-one structure with multiplicity k.
pub fn dunkl_kernel_1d(k: f64, x: f64, y: f64) -> Complex64 {
    DunklKernel::new(k).eval(x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kernel_for_unit_multiplicity_is_elementary() {
        let e = DunklKernel::new(1.0);
        for &z in &[-20.0, -5.0, -0.4, 0.5, 2.0, 5.0, 13.0, 40.0] {
            let f: f64 = z;
            let (s, c) = f.sin_cos();
            let odd = (s - f * c) / (f * f);
            let v = e.eval(f);
            assert!((v.re - s / f).abs() < 3e-12 && (v.im - odd).abs() < 3e-12, "z={z}");
        }
    }

    #[test]
    fn half_integer_orders_are_elementary() {
        for &z in &[0.3, 1.0, 5.0, 11.9, 12.1, 30.0, 250.0] {
            // Cancellation in the series costs about three digits just below the switch.
            assert!((normalized_bessel(-0.5, z) - z.cos()).abs() < 3e-12);
            assert!((normalized_bessel(0.5, z) - z.sin() / z).abs() < 3e-12);
            let j32 = 3.0 * (z.sin() / z.powi(3) - z.cos() / (z * z));
            assert!((normalized_bessel(1.5, z) - j32).abs() < 3e-12);
        }
    }

    #[test]
    fn integer_order_matches_reference() {
        // J_0(20) and J_1(20)/10 from tables.
        assert_relative_eq!(normalized_bessel(0.0, 20.0), 0.16702466434058316, epsilon = 1e-12);
        assert_relative_eq!(
            normalized_bessel(1.0, 20.0),
            2.0 * 0.06683312417584993 / 20.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(normalized_bessel(0.0, 5.0), -0.17759677131433830, epsilon = 1e-13);
    }

    #[test]
    fn branches_agree_at_the_switch() {
        for &nu in &[0.0, 0.25, 1.0, 2.0, 3.0] {
            let z = SERIES_LIMIT;
            let s = series(nu, z);
            let a = asymptotic(nu, z, normalization(nu));
            assert!((s - a).abs() < 1e-11, "nu={nu}: {s} vs {a}");
        }
    }

    #[test]
    fn kernel_reduces_to_exponential() {
        let e = DunklKernel::new(0.0).eval(1.7);
        assert_relative_eq!(e.re, 1.7f64.cos());
        assert_relative_eq!(e.im, 1.7f64.sin());
        let k = DunklKernel::new(1e-300);
        for &z in &[0.5, -3.0, 14.0, -40.0] {
            let e = k.eval(z);
            assert!((e.re - z.cos()).abs() < 1e-12);
            assert!((e.im - z.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_at_origin_is_one() {
        for &k in &[0.0, 0.5, 1.0, 2.5] {
            assert_eq!(dunkl_kernel_1d(k, 3.0, 0.0), Complex64::new(1.0, 0.0));
        }
    }
}
