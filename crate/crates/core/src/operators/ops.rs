//! Dunkl operators on the line built on the transform engine.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::special::normalized_bessel;

use super::engine::DunklEngine;
use super::grid::{GridFunction1D, SpectralFunction1D, Symbol};
use super::OperatorError;

/// Fourth-order first derivative of the samples.
fn finite_difference(values: &[Complex64], dx: f64) -> Vec<Complex64> {
    let n = values.len();
    let f = |j: usize| values[j];
    let h = 12.0 * dx;
    (0..n)
        .map(|j| match j {
            0 => (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) / h,
            1 => (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) / h,
            j if j == n - 2 => {
                (3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5)) / h
            }
            j if j == n - 1 => {
                (25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) + 3.0 * f(n - 5)) / h
            }
            j => (f(j - 2) - 8.0 * f(j - 1) + 8.0 * f(j + 1) - f(j + 2)) / h,
        })
        .collect()
}

/// T f(x) = f'(x) + k (f(x) - f(-x)) / x.
///
/// The midpoint grid never contains x = 0, so the difference quotient is
/// evaluated directly at +-Delta/2.
pub fn dunkl_derivative(f: &GridFunction1D) -> GridFunction1D {
    let g = f.grid;
    let d = finite_difference(&f.values, g.spacing());
    let values = (0..g.len())
        .map(|j| {
            let x = g.node(j);
            d[j] + f.k * (f.values[j] - f.values[g.mirror(j)]) / x
        })
        .collect();
    GridFunction1D { grid: g, k: f.k, values }
}

/// |T f| on the line.
pub fn dunkl_gradient_norm(f: &GridFunction1D) -> GridFunction1D {
    dunkl_derivative(f).abs()
}

/// Result of one fractional maximal evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaximalValue {
    pub x: f64,
    pub value: f64,
    pub argmax_radius: f64,
    /// Largest clamped negative mass relative to nu_k(B_r) over the radii.
    pub clamped_fraction: f64,
    pub warning: bool,
}

/// Options for the fractional maximal function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalOptions {
    pub radii: usize,
    pub min_radius: Option<f64>,
    pub max_radius: Option<f64>,
}

impl Default for MaximalOptions {
    fn default() -> Self {
        Self { radii: 128, min_radius: None, max_radius: None }
    }
}

impl DunklEngine {
    fn require_alpha(&self, alpha: f64, allow_zero: bool) -> Result<(), OperatorError> {
        let n = self.homogeneous_dimension();
        let lower_ok = if allow_zero { alpha >= 0.0 } else { alpha > 0.0 };
        if !(lower_ok && alpha < n) {
            return Err(OperatorError::Parameter(format!(
                "alpha = {alpha} outside {}0, {n})",
                if allow_zero { "[" } else { "(" }
            )));
        }
        Ok(())
    }

    /// tau_x f = F^{-1}(E_k(ix, .) F_k f).
    pub fn translation(&self, f: &GridFunction1D, x: f64) -> Result<GridFunction1D, OperatorError> {
        let spec = self.transform(f)?;
        let kernel = *self.kernel();
        self.inverse(&spec.multiply(|xi| kernel.eval(x * xi)))
    }

    /// f *_k g = F^{-1}(F_k f F_k g).
    pub fn convolution(&self, f: &GridFunction1D, g: &GridFunction1D) -> Result<GridFunction1D, OperatorError> {
        f.same_layout(g)?;
        let prod = self.transform(f)?.product(&self.transform(g)?)?;
        self.inverse(&prod)
    }

    /// I_alpha f = F^{-1}(|xi|^{-alpha} F_k f), 0 < alpha < 2k+1.
    pub fn riesz_potential(&self, f: &GridFunction1D, alpha: f64) -> Result<GridFunction1D, OperatorError> {
        self.require_alpha(alpha, false)?;
        self.inverse(&self.transform(f)?.apply_symbol(Symbol::riesz_potential(alpha)))
    }

    /// R f = F^{-1}(-i sign(xi) F_k f).
    pub fn riesz_transform(&self, f: &GridFunction1D) -> Result<GridFunction1D, OperatorError> {
        self.inverse(&self.transform(f)?.apply_symbol(Symbol::riesz_transform()))
    }

    /// F_k of the indicator of (-r, r): 2 c_k r^{2k+1}/(2k+1) j_{k+1/2}(r xi).
    pub fn indicator_spectrum(&self, r: f64) -> SpectralFunction1D {
        let k = self.multiplicity();
        let scale = 2.0 * self.mehta() * r.powf(2.0 * k + 1.0) / (2.0 * k + 1.0);
        let grid = self.dual_grid();
        SpectralFunction1D {
            grid,
            k,
            values: grid
                .nodes()
                .iter()
                .map(|xi| Complex64::new(scale * normalized_bessel(k + 0.5, r * xi), 0.0))
                .collect(),
            symbol: Symbol::identity(),
            boundary_warning: false,
        }
    }

    /// m_k = (c_k 2^{k+1/2} Gamma(k+3/2))^{alpha/(2k+1) - 1}.
    pub fn maximal_normalization(&self, alpha: f64) -> f64 {
        let k = self.multiplicity();
        // c_k 2^{k+1/2} Gamma(k+3/2) reduces to k + 1/2.
        (k + 0.5).powf(alpha / self.homogeneous_dimension() - 1.0)
    }

    /// M_{k,alpha} f at each point of `xs`.
    pub fn fractional_maximal(
        &self,
        f: &GridFunction1D,
        alpha: f64,
        xs: &[f64],
        opts: MaximalOptions,
    ) -> Result<Vec<MaximalValue>, OperatorError> {
        self.require_alpha(alpha, true)?;
        let grid = self.grid();
        if f.grid != grid || f.k != self.multiplicity() {
            return Err(OperatorError::Grid("function does not match the engine".into()));
        }
        let n = self.homogeneous_dimension();
        let m_k = self.maximal_normalization(alpha);
        let r_min = opts.min_radius.unwrap_or(grid.spacing());
        let r_max = opts.max_radius.unwrap_or(2.0 * grid.half_width());
        let count = opts.radii.max(2);
        let radii: Vec<f64> = (0..count)
            .map(|i| r_min * (r_max / r_min).powf(i as f64 / (count - 1) as f64))
            .collect();
        // Lanczos sigma factors damp the Gibbs ringing of the truncated indicator spectrum.
        let band = self.dual_grid().half_width();
        let sigma: Vec<f64> = self
            .dual_grid()
            .nodes()
            .iter()
            .map(|xi| {
                let t = std::f64::consts::PI * xi / band;
                t.sin() / t
            })
            .collect();
        let spectra: Vec<SpectralFunction1D> = radii
            .iter()
            .map(|&r| {
                let mut s = self.indicator_spectrum(r);
                for (v, w) in s.values.iter_mut().zip(&sigma) {
                    *v *= w;
                }
                s
            })
            .collect();
        let modulus: Vec<f64> = f.values.iter().map(|v| v.norm()).collect();
        let kernel = *self.kernel();
        let k = self.multiplicity();
        let mut out = Vec::with_capacity(xs.len());
        for &x in xs {
            let shift: Vec<Complex64> = self.dual_grid().nodes().iter().map(|xi| kernel.eval(x * xi)).collect();
            let mut best = MaximalValue { x, value: 0.0, argmax_radius: radii[0], clamped_fraction: 0.0, warning: false };
            for (r, spec) in radii.iter().zip(&spectra) {
                let mut shifted = spec.clone();
                for (v, s) in shifted.values.iter_mut().zip(&shift) {
                    *v *= s;
                }
                let translated = self.inverse(&shifted)?;
                let mut positive = Vec::with_capacity(grid.len());
                let mut negative = Vec::with_capacity(grid.len());
                let mut weighted = Vec::with_capacity(grid.len());
                for (t, m) in translated.values.iter().zip(&modulus) {
                    let t = t.re;
                    positive.push(t.max(0.0));
                    negative.push((-t).max(0.0));
                    weighted.push(m * t.max(0.0));
                }
                let ball = 2.0 * r.powf(2.0 * k + 1.0) / (2.0 * k + 1.0);
                let clamped = self.integrate_measure(&negative) / ball;
                best.clamped_fraction = best.clamped_fraction.max(clamped);
                let value = self.integrate_measure(&weighted).max(0.0) / (m_k * r.powf(n - alpha));
                if value > best.value {
                    best.value = value;
                    best.argmax_radius = *r;
                }
            }
            best.warning = best.clamped_fraction > 0.01;
            out.push(best);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::grid::Grid1D;

    #[test]
    fn derivative_of_odd_and_even_functions() {
        let g = Grid1D::new(256, 8.0).unwrap();
        let k = 0.7;
        let lin = GridFunction1D::from_real_fn(g, k, |x| x).unwrap();
        let t = dunkl_derivative(&lin);
        for v in &t.values {
            assert!((v.re - (1.0 + 2.0 * k)).abs() < 1e-10);
        }
        let even = GridFunction1D::from_real_fn(g, k, |x| (-x * x).exp()).unwrap();
        let t = dunkl_derivative(&even);
        for (v, x) in t.values.iter().zip(g.nodes()) {
            assert!((v.re + 2.0 * x * (-x * x).exp()).abs() < 1e-4);
        }
        let konst = GridFunction1D::from_real_fn(g, k, |_| 3.0).unwrap();
        assert!(dunkl_gradient_norm(&konst).max_abs() < 1e-12);
    }

    #[test]
    fn symbolic_derivative_oracle() {
        // f = x e^{-x^2}: f' = (1 - 2x^2) e^{-x^2}, (f(x) - f(-x))/x = 2 e^{-x^2}.
        let g = Grid1D::new(1024, 8.0).unwrap();
        let k = 1.5;
        let f = GridFunction1D::from_real_fn(g, k, |x| x * (-x * x).exp()).unwrap();
        let t = dunkl_gradient_norm(&f);
        for (v, x) in t.values.iter().zip(g.nodes()) {
            let exact = ((1.0 - 2.0 * x * x) * (-x * x).exp() + 2.0 * k * (-x * x).exp()).abs();
            assert!((v.re - exact).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn maximal_normalization_classical() {
        let e = DunklEngine::new(0.0, Grid1D::balanced(64).unwrap()).unwrap();
        assert!((e.maximal_normalization(0.0) - 2.0).abs() < 1e-15);
        assert!(e.riesz_potential(&GridFunction1D::from_real_fn(e.grid(), 0.0, |_| 0.0).unwrap(), 1.0).is_err());
    }
}
