//! The rank-one Dunkl transform by product integration on a midpoint grid.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::measure::DunklStructure;
use crate::special::{ln_gamma, DunklKernel};

use super::grid::{Grid1D, GridFunction1D, SpectralFunction1D, Symbol};
use super::rule::{ProductRule, STENCIL};
use super::OperatorError;

/// Dense quadrature matrix, row-major, rows = output nodes.
#[derive(Debug)]
pub(crate) struct Matrix {
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl Matrix {
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b))
            .collect()
    }
}

type Key = (u64, bool);

/// Transform engine for one multiplicity and one spatial grid.
///
/// Matrices are built lazily and cached, so an engine is cheap to create
/// and should be reused across calls.
#[derive(Debug)]
pub struct DunklEngine {
    k: f64,
    grid: Grid1D,
    dual: Grid1D,
    mehta: f64,
    kernel: DunklKernel,
    forward: OnceLock<Arc<Matrix>>,
    inverse: Mutex<HashMap<Key, Arc<Matrix>>>,
    weights: Mutex<HashMap<(bool, u64, bool), Arc<Vec<f64>>>>,
}

/// c_k for the rank-one structure.
pub fn mehta_rank_one(k: f64) -> f64 {
    (-((k + 0.5) * std::f64::consts::LN_2 + ln_gamma(k + 0.5))).exp()
}

impl DunklEngine {
    pub fn new(k: f64, grid: Grid1D) -> Result<Self, OperatorError> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(OperatorError::Parameter(format!("multiplicity must be nonnegative, got {k}")));
        }
        Ok(Self {
            k,
            grid,
            dual: grid.dual(),
            mehta: mehta_rank_one(k),
            kernel: DunklKernel::new(k),
            forward: OnceLock::new(),
            inverse: Mutex::new(HashMap::new()),
            weights: Mutex::new(HashMap::new()),
        })
    }

    pub fn for_structure(cfg: &DunklStructure, grid: Grid1D) -> Result<Self, OperatorError> {
        let k = cfg
            .rank_one_multiplicity()
            .ok_or_else(|| OperatorError::Parameter("operators need a rank-one structure".into()))?;
        Self::new(k, grid)
    }

    pub fn multiplicity(&self) -> f64 {
        self.k
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn dual_grid(&self) -> Grid1D {
        self.dual
    }

    pub fn mehta(&self) -> f64 {
        self.mehta
    }

    /// 2k + 1.
    pub fn homogeneous_dimension(&self) -> f64 {
        2.0 * self.k + 1.0
    }

    pub fn kernel(&self) -> &DunklKernel {
        &self.kernel
    }

    /// Matrix of c_k int g(y) K(t y) |y|^s sign^odd dy for t over `out` (conj: kernel conjugated).
    fn build(&self, input: &Grid1D, out: &Grid1D, s: f64, odd: bool, conj: bool) -> Matrix {
        let rule = ProductRule::new(input, s, odd);
        let n_in = input.len();
        let n_out = out.len();
        let mut data = vec![Complex64::new(0.0, 0.0); n_out * n_in];
        let weights: Vec<f64> = rule.w.iter().map(|w| w * self.mehta).collect();
        let (upper, lower) = data.split_at_mut(n_out / 2 * n_in);
        for l in 0..n_out / 2 {
            let t = out.node(l);
            let m = out.mirror(l) - n_out / 2;
            let row_a = &mut upper[l * n_in..(l + 1) * n_in];
            let row_b = &mut lower[m * n_in..(m + 1) * n_in];
            for v in 0..rule.len() {
                let kv = self.kernel.eval(t * rule.y[v]) * weights[v];
                // K(-z) = conj K(z) gives the mirror row for free.
                let (a, b) = if conj { (kv.conj(), kv) } else { (kv, kv.conj()) };
                let start = rule.start[v];
                let coef = &rule.coef[v];
                for i in 0..STENCIL {
                    row_a[start + i] += a * coef[i];
                    row_b[start + i] += b * coef[i];
                }
            }
        }
        Matrix { cols: n_in, data }
    }

    fn forward_matrix(&self) -> Arc<Matrix> {
        self.forward
            .get_or_init(|| Arc::new(self.build(&self.grid, &self.dual, 2.0 * self.k, false, true)))
            .clone()
    }

    fn inverse_matrix(&self, power: f64, odd: bool) -> Result<Arc<Matrix>, OperatorError> {
        let s = 2.0 * self.k + power;
        if !(s > -1.0) {
            return Err(OperatorError::Parameter(format!(
                "multiplier |xi|^{power} is not locally integrable against |xi|^{}",
                2.0 * self.k
            )));
        }
        let key = (power.to_bits(), odd);
        if let Some(m) = self.inverse.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.build(&self.dual, &self.grid, s, odd, false));
        self.inverse.lock().unwrap().insert(key, m.clone());
        Ok(m)
    }

    fn check_spatial(&self, f: &GridFunction1D) -> Result<(), OperatorError> {
        if f.grid != self.grid || f.k != self.k {
            return Err(OperatorError::Grid("function does not match the engine grid or multiplicity".into()));
        }
        Ok(())
    }

    fn check_spectral(&self, f: &SpectralFunction1D) -> Result<(), OperatorError> {
        if f.grid != self.dual || f.k != self.k {
            return Err(OperatorError::Grid("spectrum does not match the engine dual grid".into()));
        }
        Ok(())
    }

    /// F_k f(xi) = c_k int f(y) E_k(-i xi, y) |y|^{2k} dy on the dual grid.
    pub fn transform(&self, f: &GridFunction1D) -> Result<SpectralFunction1D, OperatorError> {
        self.check_spatial(f)?;
        let values = self.forward_matrix().apply(&f.values);
        Ok(SpectralFunction1D {
            grid: self.dual,
            k: self.k,
            values,
            symbol: Symbol::identity(),
            boundary_warning: f.boundary_ratio() > 1e-10,
        })
    }

    /// Inverse transform, integrating the pending multiplier exactly near xi = 0.
    pub fn inverse(&self, f: &SpectralFunction1D) -> Result<GridFunction1D, OperatorError> {
        self.check_spectral(f)?;
        let m = self.inverse_matrix(f.symbol.power, f.symbol.odd)?;
        let c = f.symbol.coefficient;
        let values = m.apply(&f.values).into_iter().map(|v| v * c).collect();
        GridFunction1D::new(self.grid, self.k, values)
    }

    /// Inverse transform evaluated at arbitrary points.
    pub fn inverse_at(&self, f: &SpectralFunction1D, xs: &[f64]) -> Result<Vec<Complex64>, OperatorError> {
        self.check_spectral(f)?;
        let s = 2.0 * self.k + f.symbol.power;
        if !(s > -1.0) {
            return Err(OperatorError::Parameter("multiplier is not locally integrable".into()));
        }
        let rule = ProductRule::new(&self.dual, s, f.symbol.odd);
        // Collapse the interpolant once per node group: value at each virtual node.
        let interp: Vec<Complex64> = (0..rule.len())
            .map(|v| {
                let start = rule.start[v];
                rule.coef[v]
                    .iter()
                    .enumerate()
                    .fold(Complex64::new(0.0, 0.0), |acc, (i, c)| acc + f.values[start + i] * *c)
                    * rule.w[v]
            })
            .collect();
        Ok(xs
            .iter()
            .map(|&x| {
                let sum = (0..rule.len()).fold(Complex64::new(0.0, 0.0), |acc, v| {
                    acc + self.kernel.eval(x * rule.y[v]) * interp[v]
                });
                sum * self.mehta * f.symbol.coefficient
            })
            .collect())
    }

    fn sample_weights(&self, spectral: bool, s: f64, odd: bool) -> Arc<Vec<f64>> {
        let key = (spectral, s.to_bits(), odd);
        if let Some(w) = self.weights.lock().unwrap().get(&key) {
            return w.clone();
        }
        let grid = if spectral { self.dual } else { self.grid };
        let w = Arc::new(ProductRule::new(&grid, s, odd).collapse(grid.len()));
        self.weights.lock().unwrap().insert(key, w.clone());
        w
    }

    /// int g(x) |x|^s sign(x)^odd dx over the spatial grid span.
    pub fn integrate_spatial(&self, g: &[Complex64], s: f64, odd: bool) -> Complex64 {
        let w = self.sample_weights(false, s, odd);
        g.iter().zip(w.iter()).map(|(g, w)| g * *w).sum()
    }

    /// int g(xi) |xi|^s sign(xi)^odd d xi over the dual grid span.
    pub fn integrate_spectral(&self, g: &[Complex64], s: f64, odd: bool) -> Complex64 {
        let w = self.sample_weights(true, s, odd);
        g.iter().zip(w.iter()).map(|(g, w)| g * *w).sum()
    }

    /// int g d nu_k for real samples.
    pub fn integrate_measure(&self, g: &[f64]) -> f64 {
        let w = self.sample_weights(false, 2.0 * self.k, false);
        g.iter().zip(w.iter()).map(|(g, w)| g * w).sum()
    }

    /// (int |f|^p |x|^{2k + delta} dx)^{1/p}.
    pub fn weighted_norm(&self, f: &GridFunction1D, p: f64, delta: f64) -> Result<f64, OperatorError> {
        self.check_spatial(f)?;
        let s = 2.0 * self.k + delta;
        if !(s > -1.0) {
            return Err(OperatorError::Parameter(format!("weight |x|^{delta} is not locally integrable")));
        }
        let w = self.sample_weights(false, s, false);
        let v: f64 = f.values.iter().zip(w.iter()).map(|(f, w)| f.norm().powf(p) * w).sum();
        Ok(v.max(0.0).powf(1.0 / p))
    }

    /// ||f||_{p,k}.
    pub fn norm(&self, f: &GridFunction1D, p: f64) -> Result<f64, OperatorError> {
        self.weighted_norm(f, p, 0.0)
    }

    /// ||F||_{2,k} over the dual grid, pending multiplier included.
    pub fn spectral_norm(&self, f: &SpectralFunction1D) -> Result<f64, OperatorError> {
        self.check_spectral(f)?;
        let g: Vec<Complex64> = f.values.iter().map(|v| Complex64::new(v.norm_sqr(), 0.0)).collect();
        let c = f.symbol.coefficient.norm_sqr();
        let v = self.integrate_spectral(&g, 2.0 * self.k + 2.0 * f.symbol.power, false).re * c;
        Ok(v.max(0.0).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_and_inverse_share_layout() {
        let g = Grid1D::balanced(64).unwrap();
        let e = DunklEngine::new(0.5, g).unwrap();
        let f = GridFunction1D::from_real_fn(g, 0.5, |x| (-x * x / 2.0).exp()).unwrap();
        let spec = e.transform(&f).unwrap();
        assert_eq!(spec.values.len(), 64);
        assert!(!spec.boundary_warning);
        let back = e.inverse(&spec).unwrap();
        assert!(back.sup_distance(&f) < 1e-4);
        let wrong = GridFunction1D::from_real_fn(g, 1.0, |x| x).unwrap();
        assert!(e.transform(&wrong).is_err());
    }
}
