//! Uniform symmetric grids, sampled functions and homogeneous multipliers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::OperatorError;

/// Midpoint grid x_j = -L + (j + 1/2) Delta, Delta = 2L/N, N even.
///
/// The origin is never a node and x_{N-1-j} = -x_j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    n: usize,
    half_width: f64,
}

impl Grid1D {
    pub fn new(n: usize, half_width: f64) -> Result<Self, OperatorError> {
        if n < 64 || n % 2 != 0 {
            return Err(OperatorError::Grid(format!("need an even number of nodes >= 64, got {n}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(OperatorError::Grid(format!("half-width must be positive, got {half_width}")));
        }
        Ok(Self { n, half_width })
    }

    /// The grid whose dual has the same half-width: L = sqrt(pi N / 2).
    pub fn balanced(n: usize) -> Result<Self, OperatorError> {
        Self::new(n, (std::f64::consts::PI * n as f64 / 2.0).sqrt())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + (j as f64 + 0.5) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Index of the mirror node -x_j.
    pub fn mirror(&self, j: usize) -> usize {
        self.n - 1 - j
    }

    /// Frequency grid: spacing pi/L, half-width pi/Delta.
    pub fn dual(&self) -> Grid1D {
        Grid1D { n: self.n, half_width: std::f64::consts::PI / self.spacing() }
    }

    /// Same half-width with twice the nodes.
    pub fn refined(&self) -> Grid1D {
        Grid1D { n: 2 * self.n, half_width: self.half_width }
    }
}

/// Samples f(x_j) of a function on a grid, for the structure with multiplicity k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction1D {
    pub grid: Grid1D,
    pub k: f64,
    pub values: Vec<Complex64>,
}

impl GridFunction1D {
    pub fn new(grid: Grid1D, k: f64, values: Vec<Complex64>) -> Result<Self, OperatorError> {
        if values.len() != grid.len() {
            return Err(OperatorError::Grid(format!("{} samples for a grid of {}", values.len(), grid.len())));
        }
        if !(k.is_finite() && k >= 0.0) {
            return Err(OperatorError::Grid(format!("multiplicity must be nonnegative, got {k}")));
        }
        if let Some(j) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(OperatorError::NonFinite(format!("sample {j} is not finite")));
        }
        Ok(Self { grid, k, values })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Grid1D, k: f64, f: F) -> Result<Self, OperatorError> {
        Self::new(grid, k, grid.nodes().into_iter().map(f).collect())
    }

    pub fn from_real_fn<F: Fn(f64) -> f64>(grid: Grid1D, k: f64, f: F) -> Result<Self, OperatorError> {
        Self::from_fn(grid, k, |x| Complex64::new(f(x), 0.0))
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.grid.nodes()
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self { grid: self.grid, k: self.k, values: self.values.iter().map(|v| f(*v)).collect() }
    }

    pub fn abs(&self) -> Self {
        self.map(|v| Complex64::new(v.norm(), 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |f| at the two end nodes relative to the overall maximum.
    pub fn boundary_ratio(&self) -> f64 {
        let m = self.max_abs();
        if m == 0.0 {
            return 0.0;
        }
        self.values[0].norm().max(self.values[self.grid.len() - 1].norm()) / m
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub(crate) fn same_layout(&self, other: &Self) -> Result<(), OperatorError> {
        if self.grid != other.grid || self.k != other.k {
            return Err(OperatorError::Grid("functions live on different grids or structures".into()));
        }
        Ok(())
    }
}

/// A multiplier c |xi|^a sign(xi)^odd.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Symbol {
    pub coefficient: Complex64,
    pub power: f64,
    pub odd: bool,
}

impl Symbol {
    pub fn identity() -> Self {
        Self { coefficient: Complex64::new(1.0, 0.0), power: 0.0, odd: false }
    }

    /// i xi, the multiplier of T.
    pub fn derivative() -> Self {
        Self { coefficient: Complex64::new(0.0, 1.0), power: 1.0, odd: true }
    }

    /// -i sign(xi).
    pub fn riesz_transform() -> Self {
        Self { coefficient: Complex64::new(0.0, -1.0), power: 0.0, odd: true }
    }

    /// |xi|^{-alpha}.
    pub fn riesz_potential(alpha: f64) -> Self {
        Self { coefficient: Complex64::new(1.0, 0.0), power: -alpha, odd: false }
    }

    pub fn compose(&self, other: &Symbol) -> Symbol {
        Symbol {
            coefficient: self.coefficient * other.coefficient,
            power: self.power + other.power,
            odd: self.odd != other.odd,
        }
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        let mut v = self.coefficient;
        if self.power != 0.0 {
            v *= xi.abs().powf(self.power);
        }
        if self.odd && xi < 0.0 {
            v = -v;
        }
        v
    }

    pub fn is_identity(&self) -> bool {
        *self == Symbol::identity()
    }
}

/// Transform samples on the dual grid together with a pending homogeneous multiplier.
///
/// Represented value at xi_l: symbol(xi_l) * values[l]. Keeping the symbol
/// apart lets the inverse integrate its |xi|^a singularity exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFunction1D {
    pub grid: Grid1D,
    pub k: f64,
    pub values: Vec<Complex64>,
    pub symbol: Symbol,
    /// Set when the input did not decay to 1e-10 of its maximum at the grid ends.
    pub boundary_warning: bool,
}

impl SpectralFunction1D {
    pub fn nodes(&self) -> Vec<f64> {
        self.grid.nodes()
    }

    /// Samples with the pending multiplier applied.
    pub fn samples(&self) -> Vec<Complex64> {
        self.grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(xi, v)| self.symbol.eval(*xi) * v)
            .collect()
    }

    pub fn apply_symbol(&self, s: Symbol) -> Self {
        let mut out = self.clone();
        out.symbol = self.symbol.compose(&s);
        out
    }

    /// Multiply the smooth part by a function of xi.
    pub fn multiply<F: Fn(f64) -> Complex64>(&self, m: F) -> Self {
        let mut out = self.clone();
        for (v, xi) in out.values.iter_mut().zip(self.grid.nodes()) {
            *v *= m(xi);
        }
        out
    }

    /// Pointwise product; symbols compose.
    pub fn product(&self, other: &Self) -> Result<Self, OperatorError> {
        if self.grid != other.grid || self.k != other.k {
            return Err(OperatorError::Grid("spectra live on different grids".into()));
        }
        Ok(Self {
            grid: self.grid,
            k: self.k,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
            symbol: self.symbol.compose(&other.symbol),
            boundary_warning: self.boundary_warning || other.boundary_warning,
        })
    }

    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self, OperatorError> {
        if self.grid != other.grid || self.k != other.k || self.symbol != other.symbol {
            return Err(OperatorError::Grid("spectra must share grid and multiplier".into()));
        }
        let mut out = self.clone();
        for (v, w) in out.values.iter_mut().zip(&other.values) {
            *v = a * *v + b * w;
        }
        out.boundary_warning |= other.boundary_warning;
        Ok(out)
    }
}
