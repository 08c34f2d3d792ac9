//! Artifact envelopes, file output and exit codes.

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};

use crate::GlobalArgs;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A command result: the JSON payload and an optional CSV table.
pub struct Artifact {
    pub result: Value,
    pub table: Option<String>,
    /// Set when the run completed but a verification it performed failed.
    pub failure: Option<String>,
}

impl Artifact {
    pub fn new(result: Value) -> Self {
        Artifact {
            result,
            table: None,
            failure: None,
        }
    }

    pub fn with_table(mut self, csv: String) -> Self {
        self.table = Some(csv);
        self
    }

    pub fn failed_if(mut self, failed: bool, why: impl Into<String>) -> Self {
        if failed {
            self.failure = Some(why.into());
        }
        self
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Rejected arguments; clap already formatted the message.
    Usage(String),
    Input(String),
    Numerical { message: String, details: Value },
}

impl From<bogoliubov::Error> for CliError {
    fn from(e: bogoliubov::Error) -> Self {
        if e.is_input_error() {
            return CliError::Input(e.to_string());
        }
        let details = match &e {
            bogoliubov::Error::NoConvergence {
                iterations,
                residual,
                history,
            } => json!({ "iterations": iterations, "residual": residual, "history": history }),
            _ => Value::Null,
        };
        CliError::Numerical {
            message: e.to_string(),
            details,
        }
    }
}

impl CliError {
    pub fn report(&self) -> ExitCode {
        match self {
            CliError::Usage(msg) => {
                eprint!("{msg}");
                ExitCode::from(2)
            }
            CliError::Input(msg) => {
                let diag = json!({ "status": "invalid-input", "version": VERSION, "error": msg });
                eprintln!("{}", serde_json::to_string_pretty(&diag).expect("json"));
                ExitCode::from(2)
            }
            CliError::Numerical { message, details } => {
                let diag = json!({
                    "status": "numerical-failure",
                    "version": VERSION,
                    "error": message,
                    "details": details,
                });
                eprintln!("{}", serde_json::to_string_pretty(&diag).expect("json"));
                ExitCode::from(3)
            }
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        }
    }
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub struct Sink {
    global: GlobalArgs,
}

impl Sink {
    pub fn new(global: GlobalArgs) -> Self {
        Sink { global }
    }

    /// Wraps the result with the command, its effective configuration and
    /// the artifact version, then writes it where the globals say.
    pub fn emit<C: Serialize>(&self, command: &str, config: &C, art: Artifact) -> Result<(), CliError> {
        let status = if art.failure.is_some() { "verification-failed" } else { "ok" };
        let doc = json!({
            "command": command,
            "version": VERSION,
            "status": status,
            "config": config,
            "result": art.result,
        });
        let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
        let mut artifacts = Vec::new();
        if let Some(dir) = &self.global.out_dir {
            let stem = command.replace(' ', "-");
            let json_path = dir.join(format!("{stem}.json"));
            write(&json_path, &text)?;
            artifacts.push(json_path.file_name().unwrap().to_string_lossy().into_owned());
            if let Some(csv) = &art.table {
                let csv_path = dir.join(format!("{stem}.csv"));
                write(&csv_path, csv)?;
                artifacts.push(csv_path.file_name().unwrap().to_string_lossy().into_owned());
            }
            let manifest = json!({
                "command": command,
                "version": VERSION,
                "status": status,
                "config": config,
                "artifacts": artifacts,
            });
            write(&dir.join("manifest.json"), &(serde_json::to_string_pretty(&manifest).expect("json") + "\n"))?;
        }
        if let Some(path) = &self.global.out {
            write(path, &text)?;
        }
        if let (Some(path), Some(csv)) = (&self.global.csv, &art.table) {
            write(path, csv)?;
        }
        if self.global.out.is_none() && self.global.out_dir.is_none() {
            print!("{text}");
        }
        match art.failure {
            Some(why) => Err(CliError::Numerical {
                message: why,
                details: json!({ "command": command }),
            }),
            None => Ok(()),
        }
    }
}

/// Serializes a numeric table as CSV.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
