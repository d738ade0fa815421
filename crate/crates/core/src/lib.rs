//! Weighted Dunkl analysis on the line and on Z2^d: measures, decreasing
//! rearrangements, two-weight Hardy conditions and the Dunkl operators.

pub mod extended;
pub mod hardy;
pub mod measure;
pub mod operators;
pub mod quadrature;
pub mod rearrangement;
pub mod special;
pub mod weights;

pub use extended::Extended;
pub use measure::{DunklStructure, RadialProfile, ReflectionModel};
