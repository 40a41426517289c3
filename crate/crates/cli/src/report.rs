use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "report_v1";

/// Machine-readable result of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub pass: bool,
    pub tolerances: BTreeMap<String, f64>,
    pub tool_version: String,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value, pass: bool) -> Report {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            inputs,
            results,
            pass,
            tolerances: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn tolerance(mut self, name: &str, value: f64) -> Report {
        self.tolerances.insert(name.into(), value);
        self
    }

    pub fn to_json(&self) -> Result<String, serde_json::Error> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }
}
