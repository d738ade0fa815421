//! Numeric Dunkl operators for the rank-one structure, and Z2^d tensor products.

mod engine;
mod grid;
mod ops;
mod rule;
mod tensor;

pub use engine::{mehta_rank_one, DunklEngine};
pub use grid::{Grid1D, GridFunction1D, SpectralFunction1D, Symbol};
pub use ops::{dunkl_derivative, dunkl_gradient_norm, MaximalOptions, MaximalValue};
pub use tensor::SeparableTransform;

pub use crate::special::dunkl_kernel_1d;

pub(crate) use rule::measure_atoms;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OperatorError {
    #[error("grid error: {0}")]
    Grid(String),
    #[error("non-finite input: {0}")]
    NonFinite(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
}
