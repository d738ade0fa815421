//! I_alpha of a sampled function read from CSV; the CSV view is (x, re, im).

use std::fs::File;

use dunkl_core::operators::DunklEngine;

use crate::gridio::read_grid_function;
use crate::report::{Check, Report, Table};
use crate::spec::ExperimentSpec;
use crate::HarnessError;

pub fn run(spec: &ExperimentSpec) -> Result<Report, HarnessError> {
    let prm = &spec.parameters;
    let k = spec.rank_one_k()?;
    let alpha = prm.f64("alpha")?;
    let path = prm.str_or("input", "")?;
    if path.is_empty() {
        return Err(HarnessError::Refused("riesz needs --input f.csv".into()));
    }
    let file = File::open(path).map_err(|e| HarnessError::Config(format!("{path}: {e}")))?;
    let f = read_grid_function(file, k)?;
    let engine = DunklEngine::new(k, f.grid)?;
    let spectrum = engine.transform(&f)?;
    let out = engine.riesz_potential(&f, alpha)?;
    let mut report = Report::new(spec);
    report.check(Check::holds(
        "input decays at the grid edge",
        !spectrum.boundary_warning,
        format!("edge/max = {:e}", f.boundary_ratio()),
    ));
    report.summarize("norm_in", engine.norm(&f, 2.0)?);
    report.environment.set("grid_size", f.grid.len());
    report.environment.set("half_width", f.grid.half_width());
    report.table = Some(Table {
        columns: vec!["x".into(), "re".into(), "im".into()],
        rows: f.grid.nodes().iter().zip(&out.values).map(|(x, v)| vec![*x, v.re, v.im]).collect(),
    });
    Ok(report)
}
