//! Argument and configuration handling: clap definitions, the key=value
//! config file, and the precedence rules (flags over config file over the
//! `XXZSWAP_MAX_DEN` environment variable over built-in defaults).

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use xxzswap::qlinalg::{Complex64, State2, CONSTRUCT_NORM_TOL, INPUT_NORM_TOL};
use xxzswap::swap_analysis::DEFAULT_MAX_DENOMINATOR;
use xxzswap::ModelParams;

use crate::AppError;

pub const ENV_MAX_DEN: &str = "XXZSWAP_MAX_DEN";

#[derive(Parser, Debug)]
#[command(
    name = "xxzswap",
    version,
    about = "Swap-gate timing, feasibility and field-error analysis for the two-qubit XXZ model",
    arg_required_else_help = true
)]
pub struct Cli {
    #[command(flatten)]
    pub globals: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Planar exchange coupling J (nonzero; default 1)
    #[arg(long = "J", global = true, allow_hyphen_values = true)]
    pub coupling: Option<f64>,

    /// Anisotropy lambda (default 1)
    #[arg(long = "lambda", global = true, allow_hyphen_values = true)]
    pub anisotropy: Option<f64>,

    /// Uniform field B >= 0 (default 0)
    #[arg(long = "B", global = true, allow_hyphen_values = true)]
    pub field: Option<f64>,

    /// Field imbalance b (default 0)
    #[arg(long = "b", global = true, allow_hyphen_values = true)]
    pub imbalance: Option<f64>,

    /// Spin-1 |1> amplitude as re:im (default 1:0)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha1: Option<String>,

    /// Spin-1 |0> amplitude as re:im (default 0:0)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha2: Option<String>,

    /// Spin-2 |1> amplitude as re:im (default 0:0)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta1: Option<String>,

    /// Spin-2 |0> amplitude as re:im (default 1:0)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta2: Option<String>,

    /// RNG seed for randomized commands (default 42)
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Write CSV output to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// key=value config file; explicit flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the four closed-form eigenpairs and the derived scalars
    Eigensystem,

    /// Evolve the product state over a time grid, reporting state amplitudes,
    /// the reduced density of spin 1, and the purity functional
    Evolve {
        #[arg(long)]
        t_start: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },

    /// Scan the disentanglement functional of spin 1 over a time grid
    PurityScan {
        #[arg(long)]
        t_start: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },

    /// Classify the anisotropy and print return/swap times with phases
    SwapTimes {
        /// Denominator cap for rational detection
        #[arg(long)]
        max_den: Option<u64>,
        /// Report periods 1..=k
        #[arg(long)]
        k: Option<u32>,
    },

    /// Minimize 2 + cos(2Jt) + cos(2*lambda*Jt) over a time window
    Tau {
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        grid_points: Option<usize>,
        /// Evaluate over a lambda grid instead of the single global lambda
        #[arg(long)]
        lambda_min: Option<f64>,
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long)]
        lambda_steps: Option<usize>,
    },

    /// Field-error report (mixture weights, success probability, error
    /// measures) for each delta in a comma-separated list
    Error {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        delta: Option<Vec<f64>>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        max_den: Option<u64>,
    },

    /// Normalized error surface over the (|alpha1|^2, |beta1|^2) unit square
    Fig1 {
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
    },

    /// Classification and tau sweep over an anisotropy grid
    Sweep {
        #[arg(long)]
        lambda_min: Option<f64>,
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long)]
        lambda_steps: Option<usize>,
        #[arg(long)]
        grid_points: Option<usize>,
        #[arg(long)]
        max_den: Option<u64>,
    },

    /// Cross-check every closed form against brute-force evolution; exits
    /// nonzero on any tolerance breach
    Validate {
        #[arg(long)]
        trials: Option<usize>,
        /// Also run the slow second-tier integrator cross-check
        #[arg(long)]
        deep: bool,
    },
}

/// The config file as a validated key-value map.
#[derive(Debug, Default)]
pub struct ConfigMap {
    entries: HashMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "J",
    "lambda",
    "B",
    "b",
    "alpha1",
    "alpha2",
    "beta1",
    "beta2",
    "seed",
    "out",
    "max_den",
    "t_start",
    "t_end",
    "t_max",
    "steps",
    "grid_points",
    "delta",
    "grid",
    "k",
    "trials",
    "lambda_min",
    "lambda_max",
    "lambda_steps",
];

impl ConfigMap {
    pub fn load(path: Option<&Path>) -> Result<Self, AppError> {
        let mut entries = HashMap::new();
        let Some(path) = path else {
            return Ok(Self { entries });
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            AppError::Usage(format!("--config {}: {e}", path.display()))
        })?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(AppError::Usage(format!(
                    "--config {}: line {} is not key=value: {raw:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(AppError::Usage(format!(
                    "--config {}: unknown key {key:?} on line {}",
                    path.display(),
                    lineno + 1
                )));
            }
            entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn get_raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, AppError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(text) => text.parse::<T>().map(Some).map_err(|_| {
                AppError::Usage(format!("config key {key} = {text:?} is not a valid value"))
            }),
        }
    }
}

/// Parses `re:im` (or a bare real part) into a complex amplitude.
pub fn parse_amplitude(text: &str, flag: &str) -> Result<Complex64, AppError> {
    let bad = || AppError::Usage(format!("{flag}: expected re:im, got {text:?}"));
    match text.split_once(':') {
        Some((re, im)) => {
            let re: f64 = re.trim().parse().map_err(|_| bad())?;
            let im: f64 = im.trim().parse().map_err(|_| bad())?;
            Ok(Complex64::new(re, im))
        }
        None => {
            let re: f64 = text.trim().parse().map_err(|_| bad())?;
            Ok(Complex64::new(re, 0.0))
        }
    }
}

/// Builds a qubit state from amplitudes, warning on stderr when the input
/// needed silent renormalization and rejecting it beyond the input tolerance.
pub fn build_qubit(up: Complex64, down: Complex64, which: &str) -> Result<State2, AppError> {
    let deviation = (up.norm_sqr() + down.norm_sqr() - 1.0).abs();
    if deviation > INPUT_NORM_TOL {
        return Err(AppError::Usage(format!(
            "--{which}1/--{which}2: norm^2 deviates from 1 by {deviation:.3e} (max {INPUT_NORM_TOL:.0e})"
        )));
    }
    if deviation > CONSTRUCT_NORM_TOL {
        eprintln!(
            "warning: --{which}1/--{which}2 renormalized (norm^2 deviation {deviation:.3e})"
        );
    }
    State2::new(up, down).map_err(|e| AppError::Usage(format!("--{which}1/--{which}2: {e}")))
}

/// Fully resolved global context shared by all commands.
pub struct Context {
    pub params: ModelParams,
    pub alpha: State2,
    pub beta: State2,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub max_den: u64,
    pub file: ConfigMap,
}

fn resolve<T: FromStr + Copy>(
    flag: Option<T>,
    file: &ConfigMap,
    key: &str,
    default: T,
) -> Result<T, AppError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    Ok(file.get::<T>(key)?.unwrap_or(default))
}

impl Context {
    pub fn build(globals: &GlobalArgs) -> Result<Self, AppError> {
        let file = ConfigMap::load(globals.config.as_deref())?;

        let coupling = resolve(globals.coupling, &file, "J", 1.0)?;
        let anisotropy = resolve(globals.anisotropy, &file, "lambda", 1.0)?;
        let field = resolve(globals.field, &file, "B", 0.0)?;
        let imbalance = resolve(globals.imbalance, &file, "b", 0.0)?;
        let params = ModelParams::new(coupling, anisotropy, field, imbalance)
            .map_err(|e| AppError::Usage(format!("--J/--lambda/--B/--b: {e}")))?;

        let amplitude = |flag: &Option<String>, key: &str, default: Complex64| {
            match flag.as_deref().or_else(|| file.get_raw(key)) {
                Some(text) => parse_amplitude(text, &format!("--{key}")),
                None => Ok(default),
            }
        };
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        // Defaults put spin 1 up and spin 2 down: the canonical swap input.
        let alpha1 = amplitude(&globals.alpha1, "alpha1", one)?;
        let alpha2 = amplitude(&globals.alpha2, "alpha2", zero)?;
        let beta1 = amplitude(&globals.beta1, "beta1", zero)?;
        let beta2 = amplitude(&globals.beta2, "beta2", one)?;
        let alpha = build_qubit(alpha1, alpha2, "alpha")?;
        let beta = build_qubit(beta1, beta2, "beta")?;

        let seed = resolve(globals.seed, &file, "seed", 42)?;
        let out = match &globals.out {
            Some(path) => Some(path.clone()),
            None => file.get_raw("out").map(PathBuf::from),
        };

        let env_max_den = match std::env::var(ENV_MAX_DEN) {
            Ok(text) => Some(text.parse::<u64>().map_err(|_| {
                AppError::Usage(format!("{ENV_MAX_DEN}={text:?} is not a valid denominator cap"))
            })?),
            Err(_) => None,
        };
        let max_den = match file.get::<u64>("max_den")? {
            Some(v) => v,
            None => env_max_den.unwrap_or(DEFAULT_MAX_DENOMINATOR),
        };

        Ok(Self {
            params,
            alpha,
            beta,
            seed,
            out,
            max_den,
            file,
        })
    }

    /// Applies a subcommand-level `--max-den` override.
    pub fn max_den_with(&self, flag: Option<u64>) -> u64 {
        flag.unwrap_or(self.max_den)
    }
}
