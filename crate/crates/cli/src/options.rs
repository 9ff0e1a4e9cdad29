use std::collections::BTreeMap;

use clap::ValueEnum;
use serde_json::Value;

use crate::registry::DemoError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
}

/// Knobs shared by all demos. Unset values fall back to per-demo defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DemoOptions {
    pub depth: Option<u64>,
    pub cols: Option<u64>,
    pub bound: Option<u64>,
    pub cap: Option<u64>,
    pub seed: u64,
    /// Record wall-clock time in the report (breaks byte-identical output).
    pub timing: bool,
}

impl DemoOptions {
    pub fn validate(&self) -> Result<(), DemoError> {
        for (name, v) in [
            ("depth", self.depth),
            ("cols", self.cols),
            ("bound", self.bound),
            ("cap", self.cap),
        ] {
            if v == Some(0) {
                return Err(DemoError::InvalidOption {
                    name,
                    reason: "must be positive".into(),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn get(&self, name: &'static str, default: u64, max: u64) -> Result<u64, DemoError> {
        let v = match name {
            "depth" => self.depth,
            "cols" => self.cols,
            "bound" => self.bound,
            "cap" => self.cap,
            _ => None,
        }
        .unwrap_or(default);
        if v == 0 {
            return Err(DemoError::InvalidOption {
                name,
                reason: "must be positive".into(),
            });
        }
        if v > max {
            return Err(DemoError::InvalidOption {
                name,
                reason: format!("{v} exceeds the limit {max}"),
            });
        }
        Ok(v)
    }
}

/// Resolved inputs, recorded in the report.
#[derive(Default)]
pub(crate) struct Inputs(BTreeMap<String, Value>);

impl Inputs {
    pub(crate) fn set(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_string(), v.into());
        self
    }

    pub(crate) fn into_map(self) -> BTreeMap<String, Value> {
        self.0
    }
}
