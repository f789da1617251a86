//! Command-line front end for the `qheun` library.
//!
//! [`run`] turns a [`RunConfig`] into a [`Report`]; [`main_entry`] adds
//! argument parsing, output writing and the exit-code contract:
//! 0 success, 1 I/O failure, 2 invalid input, 3 numerical failure.

pub mod args;
pub mod commands;
pub mod input;
pub mod output;

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use qheun::{BasePoint, Tolerances};

pub use input::{ParamSet, SweepAxis};
pub use output::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{location}: {message}")]
    Parse { location: String, message: String },

    #[error("{location}: {message}")]
    Validation { location: String, message: String },

    #[error(transparent)]
    Library(#[from] qheun::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Library(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Validation { .. } => "ValidationError",
            CliError::Library(e) => e.kind(),
            CliError::Io { .. } => "IoError",
        }
    }

    fn category(&self) -> &'static str {
        match self.exit_code() {
            1 => "io",
            3 => "numerical",
            _ if matches!(self, CliError::Parse { .. }) => "parse",
            _ => "validation",
        }
    }

    /// Structured form written to the error stream.
    pub fn to_json(&self) -> Value {
        let mut body = json!({
            "kind": self.kind(),
            "category": self.category(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let CliError::Parse { location, .. } | CliError::Validation { location, .. } = self {
            body["location"] = json!(location);
        }
        json!({ "error": body })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    Exponents,
    Series,
    Apparency,
    Characterize,
    Qes,
    Limit,
    Hypergeom,
}

impl Operation {
    pub fn name(self) -> &'static str {
        match self {
            Operation::Exponents => "exponents",
            Operation::Series => "series",
            Operation::Apparency => "apparency",
            Operation::Characterize => "characterize",
            Operation::Qes => "qes",
            Operation::Limit => "limit",
            Operation::Hypergeom => "hypergeom",
        }
    }
}

/// A fully parsed invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub operation: Operation,
    pub params: ParamSet,
    /// Series order, at least 1 except for `series` which accepts 0.
    pub order: usize,
    pub point: Option<BasePoint>,
    pub lambda: Option<f64>,
    pub epsilons: Vec<f64>,
    /// Empty for a single run; otherwise the grid axes.
    pub sweeps: Vec<SweepAxis>,
    pub tolerances: Tolerances,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(operation: Operation, params: ParamSet) -> Self {
        RunConfig {
            operation,
            params,
            order: 32,
            point: None,
            lambda: None,
            epsilons: default_epsilons(),
            sweeps: Vec::new(),
            tolerances: Tolerances::default(),
            format: Format::Json,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.order == 0 && self.operation != Operation::Series {
            return Err(CliError::Validation {
                location: "--order".into(),
                message: "order >= 1 required".into(),
            });
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("vanish", t.vanish),
            ("integrality", t.integrality),
            ("exponent_match", t.exponent_match),
            ("eigen_residual", t.eigen_residual),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Validation {
                    location: format!("tolerance {name}"),
                    message: format!("tolerances > 0 required, got {v}"),
                });
            }
        }
        Ok(())
    }
}

/// `10^-1.5, 10^-2, 10^-2.5`.
pub fn default_epsilons() -> Vec<f64> {
    [-1.5f64, -2.0, -2.5].iter().map(|e| 10f64.powf(*e)).collect()
}

/// Applies one `key=value` tolerance override.
pub fn override_tolerance(tol: &mut Tolerances, spec: &str, origin: &str) -> Result<(), CliError> {
    let bad = |message: String| CliError::Parse {
        location: origin.to_string(),
        message,
    };
    let (key, value) = spec.split_once('=').ok_or_else(|| bad(format!("expected key=value, got '{spec}'")))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| bad(format!("'{}' is not a decimal number", value.trim())))?;
    match key.trim() {
        "vanish" => tol.vanish = v,
        "integrality" => tol.integrality = v,
        "exponent_match" => tol.exponent_match = v,
        "eigen_residual" => tol.eigen_residual = v,
        other => return Err(bad(format!("unknown tolerance '{other}'"))),
    }
    Ok(())
}

/// Sets every tolerance to the value of `QHEUN_TOLERANCE`.
pub fn global_tolerance(text: &str) -> Result<Tolerances, CliError> {
    let v: f64 = text.trim().parse().map_err(|_| CliError::Parse {
        location: "QHEUN_TOLERANCE".into(),
        message: format!("'{}' is not a decimal number", text.trim()),
    })?;
    Ok(Tolerances {
        vanish: v,
        integrality: v,
        exponent_match: v,
        eigen_residual: v,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub inputs: Value,
    pub tolerances: Tolerances,
    pub result: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct SweepRow {
    index: usize,
    values: Value,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
}

fn grid(axes: &[SweepAxis]) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for ax in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                ax.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    points
}

fn sweep(config: &RunConfig) -> Result<Value, CliError> {
    let points = grid(&config.sweeps);
    let rows: Vec<SweepRow> = points
        .par_iter()
        .enumerate()
        .map(|(index, values)| {
            let mut params = config.params.clone();
            let mut echo = serde_json::Map::new();
            let outcome = config
                .sweeps
                .iter()
                .zip(values)
                .try_for_each(|(ax, &v)| {
                    echo.insert(ax.key.clone(), json!(v));
                    params.set(&ax.key, v, &format!("--sweep {}", ax.key))
                })
                .and_then(|_| commands::execute(config, &params));
            let (status, result, error) = match outcome {
                Ok((_, result)) => ("ok", Some(result), None),
                Err(e) => ("error", None, Some(e.to_json()["error"].clone())),
            };
            SweepRow {
                index,
                values: Value::Object(echo),
                status,
                result,
                error,
            }
        })
        .collect();
    Ok(json!({
        "axes": config.sweeps,
        "rows": rows,
    }))
}

/// Executes the configured operation, or the whole sweep grid.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let (inputs, result) = if config.sweeps.is_empty() {
        commands::execute(config, &config.params)?
    } else {
        (json!({ "parameters": config.params.raw() }), sweep(config)?)
    };
    let mut inputs = inputs;
    inputs["order"] = json!(config.order);
    if let Some(p) = config.point {
        inputs["point"] = json!(p);
    }
    if let Some(l) = config.lambda {
        inputs["lambda"] = json!(l);
    }
    if config.operation == Operation::Limit {
        inputs["epsilons"] = json!(config.epsilons);
    }
    Ok(Report {
        command: config.operation.name().to_string(),
        version: qheun::VERSION.to_string(),
        inputs,
        tolerances: config.tolerances,
        result,
    })
}

/// Parses `args`, runs, writes the report; returns the process exit code.
pub fn main_entry<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match <args::Cli as clap::Parser>::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let env_tol = std::env::var("QHEUN_TOLERANCE").ok();
    let outcome = cli
        .into_config(env_tol.as_deref())
        .and_then(|config| run(&config).and_then(|report| output::emit(&report, &config)));
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
