//! Product integration on a midpoint grid.
//!
//! The sampled factor is replaced by its local degree-7 Lagrange interpolant
//! on each cell; the remaining factors (|y|^s, sign, kernels) are evaluated
//! exactly at Gauss points. The cell straddling the origin is split there and
//! each half uses a Gauss-Jacobi rule for |y|^s.

use num_complex::Complex64;

use crate::quadrature::{gauss_jacobi, gauss_legendre};

use super::grid::{Grid1D, GridFunction1D};

pub(crate) const STENCIL: usize = 8;
const GAUSS_POINTS: usize = 8;

#[derive(Debug, Clone)]
pub(crate) struct ProductRule {
    pub y: Vec<f64>,
    pub w: Vec<f64>,
    pub start: Vec<usize>,
    pub coef: Vec<[f64; STENCIL]>,
}

fn lagrange(tau: f64) -> [f64; STENCIL] {
    let mut out = [0.0; STENCIL];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut num = 1.0;
        let mut den = 1.0;
        for m in 0..STENCIL {
            if m != i {
                num *= tau - m as f64;
                den *= i as f64 - m as f64;
            }
        }
        *slot = num / den;
    }
    out
}

impl ProductRule {
    /// Rule for int g(y) |y|^s sign(y)^odd dy over [x_0, x_{N-1}].
    pub fn new(grid: &Grid1D, s: f64, odd: bool) -> Self {
        assert!(s > -1.0, "weight exponent must exceed -1");
        let n = grid.len();
        let dx = grid.spacing();
        let (gx, gw) = gauss_legendre(GAUSS_POINTS);
        let (jx, jw) = gauss_jacobi(GAUSS_POINTS, 0.0, s);
        let centre = n / 2 - 1;
        let mut rule = ProductRule {
            y: Vec::with_capacity((n - 1) * GAUSS_POINTS + GAUSS_POINTS),
            w: Vec::new(),
            start: Vec::new(),
            coef: Vec::new(),
        };
        let sign = |y: f64| if odd && y < 0.0 { -1.0 } else { 1.0 };
        for c in 0..n - 1 {
            let start = c.saturating_sub(STENCIL / 2 - 1).min(n - STENCIL);
            let x0 = grid.node(start);
            let a = grid.node(c);
            let mut push = |y: f64, w: f64| {
                rule.y.push(y);
                rule.w.push(w);
                rule.start.push(start);
                rule.coef.push(lagrange((y - x0) / dx));
            };
            if c == centre {
                let h = 0.5 * dx;
                let scale = (h / 2.0).powf(s + 1.0);
                for (t, w) in jx.iter().zip(&jw).rev() {
                    let u = h * (1.0 + t) / 2.0;
                    push(-u, sign(-1.0) * scale * w);
                }
                for (t, w) in jx.iter().zip(&jw) {
                    let u = h * (1.0 + t) / 2.0;
                    push(u, scale * w);
                }
            } else {
                for (t, w) in gx.iter().zip(&gw) {
                    let y = a + 0.5 * dx * (1.0 + t);
                    push(y, 0.5 * dx * w * y.abs().powf(s) * sign(y));
                }
            }
        }
        rule
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    /// Per-sample weights W_j with int g |y|^s sign^odd ~ sum_j W_j g_j.
    pub fn collapse(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for v in 0..self.len() {
            for (i, c) in self.coef[v].iter().enumerate() {
                out[self.start[v] + i] += self.w[v] * c;
            }
        }
        out
    }
}

/// Gauss-point atoms of |f| for nu_k: interpolated moduli and their masses.
pub(crate) fn measure_atoms(f: &GridFunction1D) -> (Vec<f64>, Vec<f64>) {
    let rule = ProductRule::new(&f.grid, 2.0 * f.k, false);
    let values = (0..rule.len())
        .map(|v| {
            let start = rule.start[v];
            rule.coef[v]
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (i, c)| acc + f.values[start + i] * *c)
                .norm()
        })
        .collect();
    (values, rule.w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomials_times_singular_weight() {
        let g = Grid1D::new(64, 3.0).unwrap();
        let nodes = g.nodes();
        let lo = nodes[0];
        let hi = nodes[63];
        for &s in &[0.0, 1.0, -0.5, 2.3] {
            let w = ProductRule::new(&g, s, false).collapse(64);
            // g(y) = 1 + y^2 is reproduced exactly by the interpolant.
            let got: f64 = nodes.iter().zip(&w).map(|(y, w)| w * (1.0 + y * y)).sum();
            let m = |p: f64, x: f64| x.powf(p + 1.0) / (p + 1.0);
            let exact = m(s, -lo) + m(s + 2.0, -lo) + m(s, hi) + m(s + 2.0, hi);
            assert_relative_eq!(got, exact, epsilon = 1e-10);
        }
    }

    #[test]
    fn odd_weight_flips_the_left_half() {
        let g = Grid1D::new(64, 2.0).unwrap();
        let nodes = g.nodes();
        let w = ProductRule::new(&g, 0.5, true).collapse(64);
        let got: f64 = nodes.iter().zip(&w).map(|(y, w)| w * y).sum();
        // int |y|^0.5 sign(y) y dy = 2 int_0^b y^1.5
        let b = nodes[63];
        assert_relative_eq!(got, 2.0 * b.powf(2.5) / 2.5, epsilon = 1e-12);
    }
}
