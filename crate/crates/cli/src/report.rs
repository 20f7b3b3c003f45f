//! JSON experiment reports with a fixed layout.

use crate::error::{CliError, CliResult, ExitStatus};
use crate::io::write_atomic;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const TIMESTAMP_KEY: &str = "timestamp";

/// A checked statement; a failing claim is an anomaly, not an error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug)]
pub struct Report {
    command: String,
    config: Value,
    seed: u64,
    tolerances: BTreeMap<String, f64>,
    claims: Vec<Claim>,
    results: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, config: Value, seed: u64) -> Self {
        Self {
            command: command.into(),
            config,
            seed,
            tolerances: BTreeMap::new(),
            claims: Vec::new(),
            results: Map::new(),
        }
    }

    pub fn tolerance(&mut self, name: &str, value: f64) -> &mut Self {
        self.tolerances.insert(name.into(), value);
        self
    }

    pub fn claim(&mut self, name: &str, pass: bool, detail: Value) -> &mut Self {
        self.claims.push(Claim { name: name.into(), pass, detail });
        self
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.results.insert(key.into(), serde_json::to_value(value).expect("report values serialize"));
        self
    }

    pub fn claims(&self) -> &[Claim] {
        &self.claims
    }

    pub fn results(&self) -> &Map<String, Value> {
        &self.results
    }

    pub fn status(&self) -> ExitStatus {
        if self.claims.iter().all(|c| c.pass) {
            ExitStatus::Success
        } else {
            ExitStatus::Anomaly
        }
    }

    pub fn to_value(&self, timestamp: u64) -> Value {
        json!({
            "claims": self.claims,
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "seed": self.seed,
            "status": self.status().code(),
            TIMESTAMP_KEY: timestamp,
            "tolerances": self.tolerances,
            "tool_version": TOOL_VERSION,
        })
    }

    pub fn render(&self, timestamp: u64) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value(timestamp)).expect("report values serialize");
        s.push('\n');
        s
    }

    /// Writes to `path`, or to stdout when no path is given.
    pub fn emit(&self, path: Option<&Path>) -> CliResult<()> {
        let text = self.render(unix_time());
        match path {
            Some(p) => write_atomic(p, text.as_bytes()),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

pub fn unix_time() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Rendered report with the timestamp zeroed, for byte comparisons.
pub fn without_timestamp(text: &str) -> CliResult<String> {
    let mut v: Value =
        serde_json::from_str(text).map_err(|source| CliError::Json { path: "<report>".into(), source })?;
    if let Some(obj) = v.as_object_mut() {
        obj.insert(TIMESTAMP_KEY.into(), json!(0));
    }
    Ok(serde_json::to_string_pretty(&v).expect("parsed JSON serializes"))
}
