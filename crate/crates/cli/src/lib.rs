//! Reproducible verification runs for weighted inequalities of Dunkl operators.
//!
//! Each experiment takes an [`ExperimentSpec`] and returns a [`Report`] with
//! per-case rows, the named checks they were judged by, and a verdict.

pub mod experiments;
pub mod gridio;
pub mod report;
pub mod spec;

pub use report::{Check, Report, Row};
pub use spec::{ConfigFile, Experiment, ExperimentSpec, Params};

use dunkl_core::hardy::HardyError;
use dunkl_core::measure::MeasureError;
use dunkl_core::operators::OperatorError;
use dunkl_core::rearrangement::RearrangementError;
use dunkl_core::weights::WeightsError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    /// A precondition failed before any computation.
    #[error("refused: {0}")]
    Refused(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Refused(_) => 2,
            HarnessError::Compute(_) | HarnessError::Io(_) => 1,
        }
    }
}

impl From<OperatorError> for HarnessError {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::Parameter(m) => HarnessError::Refused(m),
            e => HarnessError::Compute(e.to_string()),
        }
    }
}

impl From<WeightsError> for HarnessError {
    fn from(e: WeightsError) -> Self {
        match e {
            WeightsError::Range(m) => HarnessError::Refused(m),
            WeightsError::Hardy(e) => e.into(),
            WeightsError::Rearrangement(e) => e.into(),
        }
    }
}

impl From<HardyError> for HarnessError {
    fn from(e: HardyError) -> Self {
        match e {
            HardyError::Parameter(m) => HarnessError::Refused(m),
            e => HarnessError::Compute(e.to_string()),
        }
    }
}

impl From<RearrangementError> for HarnessError {
    fn from(e: RearrangementError) -> Self {
        match e {
            RearrangementError::Invalid(m) => HarnessError::Refused(m),
            e => HarnessError::Compute(e.to_string()),
        }
    }
}

impl From<MeasureError> for HarnessError {
    fn from(e: MeasureError) -> Self {
        HarnessError::Compute(e.to_string())
    }
}

/// Validates the spec and runs the experiment.
pub fn run(spec: &ExperimentSpec) -> Result<Report, HarnessError> {
    spec.check_keys()?;
    let report = match spec.experiment {
        Experiment::Constants => experiments::constants::run(spec)?,
        Experiment::Rearrange => experiments::rearrange::run(spec)?,
        Experiment::HardyCheck => experiments::hardy_check::run(spec)?,
        Experiment::Admissible => experiments::admissible::run(spec)?,
        Experiment::RieszBound => experiments::riesz_bound::run(spec)?,
        Experiment::WeakType => experiments::weak_type::run(spec)?,
        Experiment::Maximal => experiments::maximal::run(spec)?,
        Experiment::Sobolev => experiments::sobolev::run(spec)?,
        Experiment::PowerIndicator => experiments::power_indicator::run(spec)?,
        Experiment::Riesz => experiments::riesz::run(spec)?,
    };
    Ok(report.finish())
}
