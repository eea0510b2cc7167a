//! Experiment configuration: a JSON file, overridden by command-line flags.
//!
//! File schema (every key optional, unknown keys rejected):
//!
//! ```json
//! { "subcommand": "eden", "params": { "steps": 1000 }, "seed": 7,
//!   "output": "eden.json", "format": "json" }
//! ```

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

/// Seed used when neither the file nor `--seed` gives one.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Histories,
    Sequences,
    #[value(name = "locality-1d")]
    #[serde(rename = "locality-1d")]
    Locality1d,
    Table1,
    Kupin,
    TreeFamily,
    Blowup,
    Eden,
    Crosscheck,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Histories => "histories",
            Experiment::Sequences => "sequences",
            Experiment::Locality1d => "locality-1d",
            Experiment::Table1 => "table1",
            Experiment::Kupin => "kupin",
            Experiment::TreeFamily => "tree-family",
            Experiment::Blowup => "blowup",
            Experiment::Eden => "eden",
            Experiment::Crosscheck => "crosscheck",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    subcommand: Option<Experiment>,
    #[serde(default)]
    params: Map<String, Value>,
    seed: Option<u64>,
    output: Option<PathBuf>,
    format: Option<Format>,
}

/// Values given on the command line; each one replaces the file's.
#[derive(Debug, Default)]
pub struct Overrides {
    pub subcommand: Option<Experiment>,
    pub config: Option<PathBuf>,
    /// `key=value` pairs; the value is read as JSON, or as a string if it is not JSON.
    pub set: Vec<String>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub subcommand: Experiment,
    pub params: Map<String, Value>,
    pub seed: u64,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn resolve(o: Overrides) -> Result<ExperimentConfig, CliError> {
        let file = match &o.config {
            Some(p) => read_file(p)?,
            None => ConfigFile::default(),
        };
        let mut params = file.params;
        for kv in &o.set {
            let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Config(format!("--set expects key=value, got {kv:?}")))?;
            let v = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
            params.insert(k.to_string(), v);
        }
        let subcommand = o
            .subcommand
            .or(file.subcommand)
            .ok_or_else(|| CliError::Config("no subcommand given on the command line or in the config file".into()))?;
        Ok(ExperimentConfig {
            subcommand,
            params,
            seed: o.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            output: o.output.or(file.output),
            format: o.format.or(file.format).unwrap_or_default(),
        })
    }

    /// Typed parameters with defaults filled in. The echoed map is replaced
    /// by the complete set so the report records every value used.
    pub fn typed<P: DeserializeOwned + Serialize>(&mut self) -> Result<P, CliError> {
        let p: P = serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| CliError::Config(format!("{} parameters: {e}", self.subcommand.name())))?;
        match serde_json::to_value(&p) {
            Ok(Value::Object(m)) => self.params = m,
            _ => unreachable!("parameter structs serialize to objects"),
        }
        Ok(p)
    }
}

fn read_file(p: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Serialize, Deserialize, PartialEq)]
    #[serde(default, deny_unknown_fields)]
    struct P {
        n: usize,
        z: [f64; 2],
        label: String,
    }

    impl Default for P {
        fn default() -> Self {
            P { n: 3, z: [0.0, 0.3], label: "x".into() }
        }
    }

    fn base(set: &[&str]) -> Overrides {
        Overrides { subcommand: Some(Experiment::Eden), set: set.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    #[test]
    fn flags_fill_typed_params() {
        let mut c = ExperimentConfig::resolve(base(&["n=5", "z=[1,2]", "label=hello"])).unwrap();
        assert_eq!(c.typed::<P>().unwrap(), P { n: 5, z: [1.0, 2.0], label: "hello".into() });
        assert_eq!(c.seed, DEFAULT_SEED);
        let mut d = ExperimentConfig::resolve(base(&[])).unwrap();
        assert_eq!(d.typed::<P>().unwrap(), P::default());
        assert_eq!(d.params["n"], 3);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut c = ExperimentConfig::resolve(base(&["m=5"])).unwrap();
        assert!(matches!(c.typed::<P>(), Err(CliError::Config(_))));
        assert!(ExperimentConfig::resolve(base(&["novalue"])).is_err());
        assert!(serde_json::from_str::<ConfigFile>(r#"{"seeds": 1}"#).is_err());
        let f: ConfigFile = serde_json::from_str(r#"{"subcommand": "locality-1d", "format": "csv"}"#).unwrap();
        assert_eq!((f.subcommand, f.format), (Some(Experiment::Locality1d), Some(Format::Csv)));
    }
}
