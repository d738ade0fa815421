//! Experiment specifications and their parameter maps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use dunkl_core::DunklStructure;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Constants,
    Rearrange,
    HardyCheck,
    Admissible,
    RieszBound,
    WeakType,
    Maximal,
    Sobolev,
    PowerIndicator,
    Riesz,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Constants,
        Experiment::Rearrange,
        Experiment::HardyCheck,
        Experiment::Admissible,
        Experiment::RieszBound,
        Experiment::WeakType,
        Experiment::Maximal,
        Experiment::Sobolev,
        Experiment::PowerIndicator,
        Experiment::Riesz,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Constants => "constants",
            Experiment::Rearrange => "rearrange",
            Experiment::HardyCheck => "hardy-check",
            Experiment::Admissible => "admissible",
            Experiment::RieszBound => "riesz-bound",
            Experiment::WeakType => "weak-type",
            Experiment::Maximal => "maximal",
            Experiment::Sobolev => "sobolev",
            Experiment::PowerIndicator => "power-indicator",
            Experiment::Riesz => "riesz",
        }
    }

    /// Parameter keys the experiment understands.
    pub fn keys(&self) -> &'static [&'static str] {
        match self {
            Experiment::Constants => &[],
            Experiment::Rearrange => {
                &["sample", "exponent", "coefficient", "radius", "height", "t_min", "t_max", "points"]
            }
            Experiment::HardyCheck => &["mu", "theta", "p", "q", "side", "samples"],
            Experiment::Admissible => &["p", "q", "r", "alpha", "delta", "beta", "expect"],
            Experiment::RieszBound => {
                &["p", "q", "r", "alpha", "delta", "beta", "lambdas", "n", "tolerance", "test_function", "expect", "min_drift"]
            }
            Experiment::WeakType => &["alpha", "n", "levels", "tolerance", "test_function", "radius"],
            Experiment::Maximal => &["alpha", "n", "radii", "stride", "window", "tolerance", "test_functions"],
            Experiment::Sobolev => &["p", "q", "r", "delta", "lambdas", "n", "half_width", "tolerance", "test_function"],
            Experiment::PowerIndicator => &["tuples", "tolerance"],
            Experiment::Riesz => &["alpha", "input"],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown experiment {s:?}")))
    }
}

/// Flat key -> value parameter map.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Params(pub BTreeMap<String, Value>);

impl Params {
    pub fn insert(&mut self, key: &str, value: Value) {
        self.0.insert(key.to_string(), value);
    }

    pub fn has(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    pub fn f64(&self, key: &str) -> Result<f64, HarnessError> {
        self.opt_f64(key)?.ok_or_else(|| HarnessError::Refused(format!("missing parameter {key:?}")))
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>, HarnessError> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => number(key, v).map(Some),
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, HarnessError> {
        Ok(self.opt_f64(key)?.unwrap_or(default))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, HarnessError> {
        match self.opt_f64(key)? {
            None => Ok(default),
            Some(x) if x >= 0.0 && x.fract() == 0.0 && x < 1e9 => Ok(x as usize),
            Some(x) => Err(HarnessError::Refused(format!("parameter {key:?} = {x} is not a count"))),
        }
    }

    pub fn list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, HarnessError> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(default.to_vec()),
            Some(Value::Array(items)) => items.iter().map(|v| number(key, v)).collect(),
            Some(v) => Ok(vec![number(key, v)?]),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> Result<&'a str, HarnessError> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(default),
            Some(Value::String(s)) => Ok(s),
            Some(v) => Err(HarnessError::Refused(format!("parameter {key:?} must be a string, got {v}"))),
        }
    }

    pub fn strings_or(&self, key: &str, default: &[&str]) -> Result<Vec<String>, HarnessError> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(default.iter().map(|s| s.to_string()).collect()),
            Some(Value::String(s)) => Ok(s.split(',').map(|s| s.trim().to_string()).collect()),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    v => Err(HarnessError::Refused(format!("parameter {key:?} holds a non-string {v}"))),
                })
                .collect(),
            Some(v) => Err(HarnessError::Refused(format!("parameter {key:?} must be a list of strings, got {v}"))),
        }
    }
}

fn number(key: &str, v: &Value) -> Result<f64, HarnessError> {
    let x = match v {
        Value::Number(n) => n.as_f64(),
        // Command-line values arrive as strings.
        Value::String(s) => s.trim().parse::<f64>().ok(),
        _ => None,
    };
    match x {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(HarnessError::Refused(format!("parameter {key:?} must be a finite number, got {v}"))),
    }
}

/// One experiment run: structure, parameters and the seed for randomized sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub cfg: DunklStructure,
    #[serde(default)]
    pub parameters: Params,
    #[serde(default)]
    pub seed: u64,
}

/// The `--config` file: a bare structure, or a structure with parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ConfigFile {
    Full {
        cfg: DunklStructure,
        #[serde(default)]
        parameters: Params,
        #[serde(default)]
        seed: Option<u64>,
    },
    Structure(DunklStructure),
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let raw: Value = serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("invalid JSON: {e}")))?;
        // Untagged errors are opaque, so report the structure error directly when there is one.
        let structure = raw.get("cfg").cloned().unwrap_or_else(|| raw.clone());
        if let Err(e) = serde_json::from_value::<DunklStructure>(structure) {
            return Err(HarnessError::Config(format!("invalid structure: {e}")));
        }
        serde_json::from_value(raw).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn into_spec(self, experiment: Experiment, seed: Option<u64>) -> ExperimentSpec {
        match self {
            ConfigFile::Full { cfg, parameters, seed: s } => {
                ExperimentSpec { experiment, cfg, parameters, seed: seed.or(s).unwrap_or(0) }
            }
            ConfigFile::Structure(cfg) => {
                ExperimentSpec { experiment, cfg, parameters: Params::default(), seed: seed.unwrap_or(0) }
            }
        }
    }
}

impl ExperimentSpec {
    pub fn new(experiment: Experiment, cfg: DunklStructure) -> Self {
        Self { experiment, cfg, parameters: Params::default(), seed: 0 }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key, value.into());
        self
    }

    /// Rejects keys the experiment does not know.
    pub fn check_keys(&self) -> Result<(), HarnessError> {
        let known = self.experiment.keys();
        match self.parameters.0.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) if known.is_empty() => {
                Err(HarnessError::Refused(format!("{} takes no parameters (got {k:?})", self.experiment)))
            }
            Some(k) => Err(HarnessError::Refused(format!(
                "{} does not take parameter {k:?}; known: {}",
                self.experiment,
                known.join(", ")
            ))),
            None => Ok(()),
        }
    }

    /// The rank-one multiplicity, required by the line experiments.
    pub fn rank_one_k(&self) -> Result<f64, HarnessError> {
        self.cfg.rank_one_multiplicity().ok_or_else(|| {
            HarnessError::Refused(format!("{} needs a one-dimensional structure", self.experiment))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn numbers_may_arrive_as_strings() {
        let mut p = Params::default();
        p.insert("a", json!("1.5"));
        p.insert("b", json!("inf"));
        p.insert("c", json!([1, "2"]));
        assert_eq!(p.f64("a").unwrap(), 1.5);
        assert!(matches!(p.f64("b"), Err(HarnessError::Refused(_))));
        assert!(matches!(p.f64("missing"), Err(HarnessError::Refused(_))));
        assert_eq!(p.list_or("c", &[]).unwrap(), vec![1.0, 2.0]);
        assert_eq!(p.usize_or("a", 3).map_err(|_| ()), Err(()));
    }

    #[test]
    fn names_round_trip_and_keys_are_checked() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        let cfg = DunklStructure::rank_one(1.0).unwrap();
        assert!(ExperimentSpec::new(Experiment::Admissible, cfg.clone()).with("alpha", 1.0).check_keys().is_ok());
        assert!(ExperimentSpec::new(Experiment::Admissible, cfg).with("lambda", 1.0).check_keys().is_err());
    }

    #[test]
    fn config_forms() {
        let bare = ConfigFile::parse(r#"{"dimension":1,"model":"z2_power","multiplicities":[0.5]}"#).unwrap();
        let spec = bare.into_spec(Experiment::Constants, Some(9));
        assert_eq!(spec.seed, 9);
        let full = ConfigFile::parse(
            r#"{"cfg":{"dimension":1,"model":"z2_power","multiplicities":[0.5]},"parameters":{"p":2},"seed":3}"#,
        )
        .unwrap();
        let spec = full.into_spec(Experiment::Admissible, None);
        assert_eq!((spec.seed, spec.parameters.f64("p").unwrap()), (3, 2.0));
        assert!(matches!(ConfigFile::parse("{"), Err(HarnessError::Config(_))));
    }
}
