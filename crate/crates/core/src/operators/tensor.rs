//! Separable functions under Z2^d: the transform factorizes over coordinates.

use num_complex::Complex64;

use crate::measure::{DunklStructure, ReflectionModel};

use super::engine::DunklEngine;
use super::grid::{Grid1D, GridFunction1D, SpectralFunction1D};
use super::OperatorError;

#[derive(Debug)]
pub struct SeparableTransform {
    engines: Vec<DunklEngine>,
}

impl SeparableTransform {
    pub fn new(cfg: &DunklStructure, grid: Grid1D) -> Result<Self, OperatorError> {
        let ReflectionModel::Z2Power { multiplicities } = cfg.model() else {
            return Err(OperatorError::Parameter("separable transforms need the Z2^d model".into()));
        };
        let engines = multiplicities
            .iter()
            .map(|&k| DunklEngine::new(k, grid))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { engines })
    }

    pub fn engines(&self) -> &[DunklEngine] {
        &self.engines
    }

    /// Transforms of the factors of f(x) = prod_i f_i(x_i).
    pub fn transform(&self, factors: &[GridFunction1D]) -> Result<Vec<SpectralFunction1D>, OperatorError> {
        if factors.len() != self.engines.len() {
            return Err(OperatorError::Parameter(format!(
                "{} factors for dimension {}",
                factors.len(),
                self.engines.len()
            )));
        }
        self.engines.iter().zip(factors).map(|(e, f)| e.transform(f)).collect()
    }

    /// Value of the product spectrum at a multi-index of dual nodes.
    pub fn value(spectra: &[SpectralFunction1D], index: &[usize]) -> Complex64 {
        spectra
            .iter()
            .zip(index)
            .map(|(s, &i)| s.symbol.eval(s.grid.node(i)) * s.values[i])
            .product()
    }

    /// ||f||_{2,k} of the product from its factors.
    pub fn norm(&self, factors: &[GridFunction1D]) -> Result<f64, OperatorError> {
        self.engines
            .iter()
            .zip(factors)
            .map(|(e, f)| e.norm(f, 2.0))
            .product()
    }

    pub fn spectral_norm(&self, spectra: &[SpectralFunction1D]) -> Result<f64, OperatorError> {
        self.engines
            .iter()
            .zip(spectra)
            .map(|(e, s)| e.spectral_norm(s))
            .product()
    }
}
