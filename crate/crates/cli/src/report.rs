//! Report files and console output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::spec::SCHEMA_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// One report file. Everything in it is a function of the inputs and the tool version;
/// `timestamp` comes from `SOURCE_DATE_EPOCH` and is `null` when that is unset.
#[derive(Clone, Debug, Serialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub timestamp: Option<u64>,
    pub command: String,
    pub model: String,
    pub parameters: BTreeMap<String, String>,
    pub passed: bool,
    pub verdict: String,
    pub result: serde_json::Value,
}

/// What a single command produced, before it is printed and saved.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub command: String,
    pub model: String,
    pub parameters: BTreeMap<String, String>,
    pub passed: bool,
    pub verdict: String,
    /// Human-readable lines; the first is the one-line verdict.
    pub lines: Vec<String>,
    pub result: serde_json::Value,
    /// `(domain, codomain, rank)` for checks backed by a matrix.
    pub dims: Option<(usize, usize, usize)>,
}

impl Outcome {
    pub fn new(command: &str, model: &str, passed: bool, verdict: impl Into<String>) -> Self {
        Outcome {
            command: command.to_string(),
            model: model.to_string(),
            parameters: BTreeMap::new(),
            passed,
            verdict: verdict.into(),
            lines: Vec::new(),
            result: serde_json::Value::Null,
            dims: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn line(mut self, line: impl Into<String>) -> Self {
        self.lines.push(line.into());
        self
    }

    pub fn result(mut self, value: impl Serialize) -> Self {
        self.result = serde_json::to_value(value).expect("results serialize");
        self
    }

    pub fn report(&self) -> ReportFile {
        ReportFile {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp: source_date_epoch(),
            command: self.command.clone(),
            model: self.model.clone(),
            parameters: self.parameters.clone(),
            passed: self.passed,
            verdict: self.verdict.clone(),
            result: self.result.clone(),
        }
    }

    /// `command_model_k=v_..json`, with anything outside `[A-Za-z0-9.=-]` replaced.
    pub fn file_name(&self) -> String {
        let mut parts = vec![self.command.replace(' ', "-"), self.model.clone()];
        parts.extend(self.parameters.iter().map(|(k, v)| format!("{k}={v}")));
        let raw = parts.join("_");
        let clean: String = raw
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || "_.=-".contains(c) { c } else { '-' })
            .collect();
        format!("{clean}.json")
    }
}

pub fn source_date_epoch() -> Option<u64> {
    std::env::var("SOURCE_DATE_EPOCH").ok()?.trim().parse().ok()
}

pub fn to_pretty_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Prints an outcome and, if `out` is set, writes its report file.
pub fn emit(outcome: &Outcome, format: Format, out: Option<&Path>) -> CliResult<()> {
    let report = outcome.report();
    match format {
        Format::Text => {
            for line in &outcome.lines {
                println!("{line}");
            }
        }
        Format::Structured => {
            println!("{}", serde_json::to_string(&report).expect("reports serialize"));
        }
    }
    if let Some(dir) = out {
        write_file(dir, &outcome.file_name(), &to_pretty_json(&report))?;
    }
    Ok(())
}
