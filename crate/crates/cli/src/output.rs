use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use qchain_core::Error;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Cli, Format};

/// Error classes with their process exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or input files (exit 2).
    Validation(String),
    /// A numerical routine failed or a tolerance was breached (exit 3).
    Numerical(String),
    /// Reading or writing a file failed (exit 4).
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Io(_) => 4,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "invalid input: {m}"),
            Failure::Numerical(m) => f.write_str(m),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    // serde_json messages carry the line and column
    serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

/// Result of one command before it is wrapped in the report envelope.
pub struct Outcome {
    pub result: Value,
    /// Rows including the header.
    pub csv: Vec<Vec<String>>,
    pub tolerances: BTreeMap<&'static str, f64>,
    /// False when the command ran but its checks did not all pass.
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> ExitCode {
        if self.passed {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(3)
        }
    }
}

/// The JSON document every command writes.
#[derive(Debug, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub result: Value,
    /// Wall-clock data; absent in deterministic mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

fn command_name(config: &Value) -> String {
    config
        .get("command")
        .and_then(|c| c.as_object())
        .and_then(|c| c.keys().next().cloned())
        .unwrap_or_default()
}

pub fn emit(cli: &Cli, outcome: &Outcome, elapsed: Duration) -> Result<(), Failure> {
    let text = match cli.common.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &outcome.csv {
                w.write_record(row).map_err(|e| Failure::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))?
        }
        Format::Json => {
            let config = serde_json::to_value(cli).map_err(|e| Failure::Validation(e.to_string()))?;
            let report = Report {
                tool: "qchain".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                command: command_name(&config),
                config,
                seed: cli.common.seed,
                tolerances: outcome.tolerances.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                result: outcome.result.clone(),
                timing: (!cli.common.deterministic).then_some(Timing {
                    elapsed_ms: elapsed.as_secs_f64() * 1e3,
                }),
            };
            let mut s = serde_json::to_string_pretty(&report).map_err(|e| Failure::Numerical(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    match &cli.common.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
