use std::fs::{self, File};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser};
use dunkl_kit::{run, ConfigFile, Experiment, HarnessError, Report};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "dunkl-kit", version, about = "Verification runs for weighted Dunkl operator inequalities")]
struct Cli {
    /// constants, rearrange, hardy-check, admissible, riesz-bound, weak-type, maximal, sobolev, power-indicator, riesz
    experiment: String,
    /// Structure JSON, optionally wrapped as {"cfg": ..., "parameters": {...}, "seed": N}.
    #[arg(long)]
    config: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the rows (or the experiment's table) as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    flags: Flags,
}

/// Per-experiment flags; each overrides the parameter of the same name.
#[derive(Args, Debug, Default)]
struct Flags {
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Input samples (x, re, im) for `riesz`.
    #[arg(long)]
    input: Option<String>,
    /// Any other parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

impl Flags {
    fn pairs(&self) -> anyhow::Result<Vec<(String, Value)>> {
        let named = [
            ("mu", &self.mu),
            ("theta", &self.theta),
            ("p", &self.p),
            ("q", &self.q),
            ("r", &self.r),
            ("alpha", &self.alpha),
            ("delta", &self.delta),
            ("beta", &self.beta),
            ("input", &self.input),
        ];
        let mut out: Vec<(String, Value)> =
            named.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), Value::String(v.clone())))).collect();
        for kv in &self.params {
            let (k, v) = kv.split_once('=').with_context(|| format!("--param {kv:?} is not KEY=VALUE"))?;
            // JSON values (lists, numbers) pass through; anything else is a string.
            let v = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
            out.push((k.to_string(), v));
        }
        Ok(out)
    }
}

fn execute(cli: &Cli) -> Result<Report, HarnessError> {
    let experiment: Experiment = cli.experiment.parse()?;
    let text = fs::read_to_string(&cli.config)
        .map_err(|e| HarnessError::Config(format!("{}: {e}", cli.config.display())))?;
    let mut spec = ConfigFile::parse(&text)?.into_spec(experiment, cli.seed);
    for (k, v) in cli.flags.pairs().map_err(|e| HarnessError::Config(e.to_string()))? {
        spec.parameters.insert(&k, v);
    }
    run(&spec)
}

fn emit(cli: &Cli, report: &Report) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", report.to_json()),
    }
    if let Some(path) = &cli.csv {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        report.write_csv(file)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            if report.passed {
                eprintln!("{}: PASS", report.experiment);
                ExitCode::SUCCESS
            } else {
                eprintln!("{}: FAIL ({})", report.experiment, report.failures().join(", "));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
