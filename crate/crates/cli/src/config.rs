//! JSON run configurations, expanded into ordinary command lines so that
//! clap validates every key.

use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::output::CliError;

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunArgs {
    /// Config file: {"command": ..., "params": {...}, "seed": ..., "out": ...}.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand words, e.g. "toy" or ["atom", "scf"].
    pub command: CommandName,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum CommandName {
    One(String),
    Path(Vec<String>),
}

fn scalar(key: &str, v: &Value) -> Result<String, CliError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(CliError::Input(format!("parameter `{key}` must be a string, number, boolean or list"))),
    }
}

/// The argument vector (without the program name) described by a config.
pub fn expand(args: &RunArgs) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.config.display())))?;
    let cfg: RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", args.config.display())))?;
    let mut argv = match cfg.command {
        CommandName::One(s) => s.split_whitespace().map(str::to_owned).collect(),
        CommandName::Path(p) => p,
    };
    if argv.first().map(String::as_str) == Some("run") {
        return Err(CliError::Input("a config may not invoke `run` again".into()));
    }
    for (key, value) in &cfg.params {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts = items.iter().map(|v| scalar(key, v)).collect::<Result<Vec<_>, _>>()?;
                argv.push(flag);
                argv.push(parts.join(","));
            }
            other => {
                argv.push(flag);
                argv.push(scalar(key, other)?);
            }
        }
    }
    if let Some(seed) = cfg.seed {
        argv.push("--seed".into());
        argv.push(seed.to_string());
    }
    if let Some(out) = cfg.out {
        argv.push("--out".into());
        argv.push(out.to_string_lossy().into_owned());
    }
    Ok(argv)
}
