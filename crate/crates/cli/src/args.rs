//! Command-line grammar.

use std::io::Read;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use qheun::{BasePoint, Tolerances};

use crate::{global_tolerance, override_tolerance, CliError, Format, Operation, ParamSet, RunConfig, SweepAxis};

#[derive(Debug, Parser)]
#[command(name = "qheun", version, about = "Local analysis, characterization, QES and q -> 1 limits of the q-Heun family")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Characteristic exponents at 0 and infinity.
    Exponents(Common),
    /// Frobenius-type series about 0 or infinity.
    Series(Common),
    /// Regularity and apparency of the singular points.
    Apparency(Common),
    /// Derive the variant coefficients and check the characterization conditions.
    Characterize(Common),
    /// Invariant polynomial subspaces and their eigenpairs.
    Qes(Common),
    /// Convergence of the q-series to the limit differential equation.
    Limit(Common),
    /// Reduction to the q-hypergeometric equation.
    Hypergeom(Common),
    /// Run any operation over a parameter grid.
    Sweep {
        /// Operation evaluated at each grid point.
        #[arg(long = "command", value_enum)]
        target: Operation,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Parameter file of `key = value` lines; `-` reads stdin.
    pub param_file: Option<String>,

    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Comma list.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    /// Comma list.
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<String>,
    /// Comma list.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Eigenvalue (accessory parameter).
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<String>,
    /// Rescaled accessory parameter of a limit study.
    #[arg(long = "e-tilde", allow_hyphen_values = true)]
    pub e_tilde: Option<String>,
    /// Any parameter as `key=value`; repeatable.
    #[arg(long = "param", allow_hyphen_values = true)]
    pub param: Vec<String>,

    /// Number of series coefficients beyond the leading one.
    #[arg(long, default_value_t = 32)]
    pub order: usize,
    /// `0` or `inf`.
    #[arg(long)]
    pub point: Option<String>,
    /// Exponent for `series`; both exponents when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Values of `q - 1` for `limit`, comma separated.
    #[arg(long = "epsilon", value_delimiter = ',')]
    pub epsilons: Vec<f64>,
    /// Grid axis `key=start:stop:step`; repeatable.
    #[arg(long = "sweep", allow_hyphen_values = true)]
    pub sweep: Vec<String>,
    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol")]
    pub tol: Vec<String>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn read_source(path: &str) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

impl Common {
    fn params(&self) -> Result<ParamSet, CliError> {
        let mut set = match &self.param_file {
            Some(path) => {
                let name = if path == "-" { "stdin" } else { path.as_str() };
                ParamSet::parse_text(&read_source(path)?, name)?
            }
            None => ParamSet::new(),
        };
        let mut flags = ParamSet::new();
        let named = [
            ("family", &self.family),
            ("q", &self.q),
            ("h", &self.h),
            ("l", &self.l),
            ("t", &self.t),
            ("alpha1", &self.alpha1),
            ("alpha2", &self.alpha2),
            ("beta", &self.beta),
            ("energy", &self.energy),
            ("e_tilde", &self.e_tilde),
        ];
        for (key, value) in named {
            if let Some(v) = value {
                let flag = format!("--{}", key.replace('_', "-"));
                flags.insert(key, v.trim(), &flag)?;
            }
        }
        for spec in &self.param {
            let origin = format!("--param {spec}");
            let (k, v) = spec.split_once('=').ok_or_else(|| CliError::Parse {
                location: origin.clone(),
                message: "expected key=value".into(),
            })?;
            flags.insert(k.trim(), v.trim(), &origin)?;
        }
        set.merge(flags)?;
        Ok(set)
    }

    fn config(&self, operation: Operation, env_tol: Option<&str>) -> Result<RunConfig, CliError> {
        let mut tolerances = match env_tol {
            Some(text) => global_tolerance(text)?,
            None => Tolerances::default(),
        };
        for spec in &self.tol {
            override_tolerance(&mut tolerances, spec, &format!("--tol {spec}"))?;
        }
        let point = self
            .point
            .as_deref()
            .map(|p| {
                BasePoint::from_str(p).map_err(|e| CliError::Parse {
                    location: "--point".into(),
                    message: e.to_string(),
                })
            })
            .transpose()?;
        let mut config = RunConfig::new(operation, self.params()?);
        config.order = self.order;
        config.point = point;
        config.lambda = self.lambda;
        if !self.epsilons.is_empty() {
            config.epsilons = self.epsilons.clone();
        }
        config.sweeps = self.sweep.iter().map(|s| SweepAxis::parse(s)).collect::<Result<_, _>>()?;
        config.tolerances = tolerances;
        config.format = self.format;
        config.output = self.output.clone();
        config.validate()?;
        Ok(config)
    }
}

impl Cli {
    /// `env_tol` is the value of `QHEUN_TOLERANCE`, if set.
    pub fn into_config(self, env_tol: Option<&str>) -> Result<RunConfig, CliError> {
        let (op, common) = match &self.command {
            Sub::Exponents(c) => (Operation::Exponents, c),
            Sub::Series(c) => (Operation::Series, c),
            Sub::Apparency(c) => (Operation::Apparency, c),
            Sub::Characterize(c) => (Operation::Characterize, c),
            Sub::Qes(c) => (Operation::Qes, c),
            Sub::Limit(c) => (Operation::Limit, c),
            Sub::Hypergeom(c) => (Operation::Hypergeom, c),
            Sub::Sweep { target, common } => {
                if common.sweep.is_empty() {
                    return Err(CliError::Parse {
                        location: "--sweep".into(),
                        message: "sweep needs at least one --sweep axis".into(),
                    });
                }
                (*target, common)
            }
        };
        common.config(op, env_tol)
    }
}
