use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::failure::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eval,
    Theta,
    Z,
    Zeros,
    Mean,
    Lemma2,
    Bound,
    Convexity,
    Growth,
    Search,
    Density,
    ExploreZ,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Theta => "theta",
            Command::Z => "z",
            Command::Zeros => "zeros",
            Command::Mean => "mean",
            Command::Lemma2 => "lemma2",
            Command::Bound => "bound",
            Command::Convexity => "convexity",
            Command::Growth => "growth",
            Command::Search => "search",
            Command::Density => "density",
            Command::ExploreZ => "explore-z",
            Command::Report => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Both,
}

/// Every operation parameter. Config-file keys are the flag names.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Params {
    /// Real part of s, or the abscissa of the vertical line
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Imaginary part of s for a single evaluation
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Start of a table or scan
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    /// End of a table or scan
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    /// Spacing of a table, or the sign-change grid of a zero scan
    #[arg(long)]
    pub step: Option<f64>,
    /// Height (window start, shift height or rectangle centre)
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub big_t: Option<f64>,
    /// Comma-separated list of heights
    #[arg(long)]
    pub heights: Option<String>,
    /// Target domain length
    #[arg(long = "H")]
    #[serde(rename = "H")]
    pub h: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long = "A", allow_hyphen_values = true)]
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[arg(long = "B", allow_hyphen_values = true)]
    #[serde(rename = "B")]
    pub b: Option<f64>,
    #[arg(long = "C", allow_hyphen_values = true)]
    #[serde(rename = "C")]
    pub c: Option<f64>,
    /// Upper bound for |zeta| on the convexity rectangle (default: certified grid max)
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<f64>,
    /// JSON file with a full set of convexity parameters
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub grid_min: Option<f64>,
    #[arg(long)]
    pub grid_max: Option<f64>,
    /// Uniform shift spacing; phase-locked when omitted
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// const:<re>[,<im>] | poly:<c0>,<c1>,... | zeta:<sigma>,<T0> | abszeta:<T0> | CSV file t,re,im
    #[arg(long)]
    pub target: Option<String>,
    /// unit | CSV file t,re[,im]
    #[arg(long)]
    pub weight: Option<String>,
    /// l1 | sup
    #[arg(long)]
    pub norm: Option<String>,
    /// Z | absZ | loglog
    #[arg(long)]
    pub mode: Option<String>,
    /// Allowed relative shortfall below (2/pi) * integral |f|
    #[arg(long)]
    pub slack: Option<f64>,
    /// Consecutive windows averaged per height in a growth fit
    #[arg(long)]
    pub windows: Option<usize>,
    #[arg(long = "T-max")]
    #[serde(rename = "T-max")]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub sample_step: Option<f64>,
    /// Use the threshold eps * T^(1/2 - sigma)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub scaled: bool,
    /// Absolute quadrature tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// gk15 | simpson
    #[arg(long)]
    pub rule: Option<String>,
    /// Comma-separated record files for `report`
    #[arg(long)]
    pub inputs: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Parser)]
#[command(
    name = "zlab",
    version,
    about = "Zeta, theta and Hardy Z evaluation and translate-distance experiments"
)]
struct Cli {
    #[arg(value_enum)]
    command: Option<Command>,
    /// JSON file whose keys are flag names; flags on the command line win
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the merged configuration as JSON and exit
    #[arg(long)]
    dump_config: bool,
    #[command(flatten)]
    params: Params,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// The configuration as a config document: flag names plus `command`.
    pub fn to_json(&self) -> String {
        let mut doc = match serde_json::to_value(&self.params).expect("params serialize") {
            Value::Object(map) => map,
            _ => unreachable!(),
        };
        doc.retain(|_, v| !v.is_null());
        doc.insert("command".into(), Value::String(self.command.name().into()));
        serde_json::to_string_pretty(&Value::Object(doc)).expect("config serializes")
    }
}

pub enum Parsed {
    Run(RunConfig),
    DumpConfig(RunConfig),
    Info(String),
}

fn load_config(path: &Path) -> Result<Map<String, Value>, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("--config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(Failure::usage(format!(
            "--config {}: expected a JSON object",
            path.display()
        ))),
        Err(e) => Err(Failure::usage(format!("--config {}: {e}", path.display()))),
    }
}

/// Config values first, then every flag given on the command line on top.
fn merge(file: Map<String, Value>, cli: &Params) -> Result<Params, Failure> {
    let mut merged = Map::new();
    for (key, value) in file {
        let value = match value {
            Value::Array(items) => Value::String(
                items
                    .iter()
                    .map(|v| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            other => other,
        };
        merged.insert(key, value);
    }
    if let Value::Object(flags) = serde_json::to_value(cli).expect("params serialize") {
        for (key, value) in flags {
            if !value.is_null() {
                merged.insert(key, value);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| Failure::usage(format!("config: {e}")))
}

pub fn parse_args<I, S>(argv: I) -> Result<Parsed, Failure>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Parsed::Info(e.to_string())),
                _ => Err(Failure::usage(
                    e.kind().to_string() + ": " + &first_line(&e.to_string()),
                )),
            };
        }
    };
    let (mut file, file_command) = match &cli.config {
        Some(path) => {
            let mut map = load_config(path)?;
            let command = match map.remove("command") {
                None => None,
                Some(v) => Some(
                    serde_json::from_value::<Command>(v)
                        .map_err(|e| Failure::usage(format!("config key 'command': {e}")))?,
                ),
            };
            (map, command)
        }
        None => (Map::new(), None),
    };
    if file.get("scaled") == Some(&Value::Bool(false)) {
        file.remove("scaled");
    }
    let command = cli
        .command
        .or(file_command)
        .ok_or_else(|| Failure::usage("no command given (eval, theta, z, zeros, mean, lemma2, bound, convexity, growth, search, density, explore-z, report)"))?;
    let mut params = merge(file, &cli.params)?;
    params.scaled |= cli.params.scaled;
    let config = RunConfig {
        command,
        output_path: params.out.clone(),
        format: params.format.unwrap_or_default(),
        params,
    };
    Ok(if cli.dump_config {
        Parsed::DumpConfig(config)
    } else {
        Parsed::Run(config)
    })
}

fn first_line(s: &str) -> String {
    s.lines()
        .find(|l| !l.trim().is_empty())
        .unwrap_or("")
        .trim_start_matches("error: ")
        .to_string()
}
