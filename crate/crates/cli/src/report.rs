//! Versioned JSON reports and their CSV view.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::spec::ExperimentSpec;

pub const SCHEMA: u32 = 1;

/// Non-finite values have no JSON form; they become null.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub case: String,
    /// Sort key of the sweep.
    pub sweep: f64,
    pub inputs: BTreeMap<String, f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub ratio: Option<f64>,
    pub fitted_constant: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
}

impl Row {
    pub fn new(case: impl Into<String>, sweep: f64) -> Self {
        Self { case: case.into(), sweep, ..Default::default() }
    }

    pub fn input(mut self, key: &str, value: f64) -> Self {
        self.inputs.insert(key.to_string(), value);
        self
    }

    pub fn sides(mut self, lhs: f64, rhs: f64) -> Self {
        self.lhs = finite(lhs);
        self.rhs = finite(rhs);
        self.ratio = finite(lhs / rhs);
        self
    }

    pub fn fitted(mut self, c: f64) -> Self {
        self.fitted_constant = finite(c);
        self
    }

    pub fn judged(mut self, tolerance: f64, pass: bool) -> Self {
        self.tolerance = Some(tolerance);
        self.pass = Some(pass);
        self
    }
}

/// A named assertion with the threshold it was judged against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    /// Passes when measured <= tolerance.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured: finite(measured),
            tolerance: Some(tolerance),
            pass: measured <= tolerance,
            detail: String::new(),
        }
    }

    /// Passes when measured >= threshold.
    pub fn at_least(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured: finite(measured),
            tolerance: Some(threshold),
            pass: measured >= threshold,
            detail: String::new(),
        }
    }

    pub fn holds(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), measured: None, tolerance: None, pass, detail: detail.into() }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

/// Grid sizes and other settings the numbers depend on.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub settings: BTreeMap<String, Value>,
}

impl Environment {
    pub fn new() -> Self {
        Self { version: env!("CARGO_PKG_VERSION").to_string(), settings: BTreeMap::new() }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.settings.insert(key.to_string(), value.into());
    }
}

/// A plain numeric table for experiments whose CSV is not the row list.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub experiment: String,
    pub spec: ExperimentSpec,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
    pub summary: BTreeMap<String, Value>,
    pub passed: bool,
    pub environment: Environment,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl Report {
    pub fn new(spec: &ExperimentSpec) -> Self {
        Self {
            schema: SCHEMA,
            experiment: spec.experiment.name().to_string(),
            spec: spec.clone(),
            rows: Vec::new(),
            checks: Vec::new(),
            summary: BTreeMap::new(),
            passed: false,
            environment: Environment::new(),
            table: None,
        }
    }

    pub fn summarize(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Sorts rows and sets the overall verdict from checks and judged rows.
    pub fn finish(mut self) -> Self {
        self.rows.sort_by(|a, b| a.case.cmp(&b.case).then(a.sweep.total_cmp(&b.sweep)));
        self.passed = self.checks.iter().all(|c| c.pass) && self.rows.iter().all(|r| r.pass != Some(false));
        self
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
        out.extend(self.rows.iter().filter(|r| r.pass == Some(false)).map(|r| format!("{} @ {}", r.case, r.sweep)));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let cell = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        if let Some(t) = &self.table {
            w.write_record(&t.columns)?;
            for r in &t.rows {
                w.write_record(r.iter().map(|v| v.to_string()))?;
            }
            return w.flush().map_err(Into::into);
        }
        let mut keys: Vec<&String> = self.rows.iter().flat_map(|r| r.inputs.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut header = vec!["case".to_string(), "sweep".to_string()];
        header.extend(keys.iter().map(|k| k.to_string()));
        header.extend(["lhs", "rhs", "ratio", "fitted_constant", "tolerance", "pass"].map(String::from));
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.case.clone(), r.sweep.to_string()];
            rec.extend(keys.iter().map(|k| cell(r.inputs.get(*k).copied())));
            rec.extend([r.lhs, r.rhs, r.ratio, r.fitted_constant, r.tolerance].map(cell));
            rec.push(r.pass.map(|p| p.to_string()).unwrap_or_default());
            w.write_record(&rec)?;
        }
        w.flush().map_err(Into::into)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::Experiment;
    use dunkl_core::DunklStructure;

    #[test]
    fn rows_sort_and_verdict_follows_judgements() {
        let spec = ExperimentSpec::new(Experiment::Constants, DunklStructure::rank_one(0.0).unwrap());
        let mut r = Report::new(&spec);
        r.rows.push(Row::new("b", 1.0).sides(1.0, 2.0));
        r.rows.push(Row::new("a", 2.0).sides(f64::INFINITY, 1.0).judged(0.1, false));
        r.rows.push(Row::new("a", 1.0));
        r.check(Check::at_most("x", 0.5, 1.0));
        let r = r.finish();
        let order: Vec<_> = r.rows.iter().map(|x| (x.case.as_str(), x.sweep)).collect();
        assert_eq!(order, [("a", 1.0), ("a", 2.0), ("b", 1.0)]);
        assert!(!r.passed);
        assert_eq!(r.failures(), ["a @ 2"]);
        assert_eq!(r.rows[1].lhs, None);
        assert_eq!(r.rows[2].ratio, Some(0.5));
        let mut csv = Vec::new();
        r.write_csv(&mut csv).unwrap();
        assert!(String::from_utf8(csv).unwrap().starts_with("case,sweep,lhs,rhs,ratio"));
    }
}
