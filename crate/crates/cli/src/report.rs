use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::options::Format;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// The outcome of one demo or verification run.
///
/// `result` carries the machine-readable verdicts together with their
/// certificates; `witnesses` is a rendering-friendly view of the same data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub scenario: String,
    pub anchor: String,
    pub inputs: BTreeMap<String, Value>,
    pub passed: bool,
    pub summary: String,
    pub checks: Vec<Check>,
    pub witnesses: WitnessTable,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Report {
    pub(crate) fn new(scenario: &str, anchor: &str, inputs: BTreeMap<String, Value>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            scenario: scenario.to_string(),
            anchor: anchor.to_string(),
            inputs,
            passed: true,
            summary: String::new(),
            checks: Vec::new(),
            witnesses: WitnessTable::default(),
            result: Value::Null,
            elapsed_ms: None,
        }
    }

    pub(crate) fn check(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) {
        self.passed &= passed;
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Renders a report. Both formats are deterministic for a fixed report.
pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Table => table(report),
    }
}

fn inputs_line(inputs: &BTreeMap<String, Value>) -> String {
    if inputs.is_empty() {
        return "(none)".into();
    }
    inputs
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn table(r: &Report) -> String {
    let mut out = String::new();
    let status = if r.passed { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "scenario: {}", r.scenario);
    let _ = writeln!(out, "anchor:   {}", r.anchor);
    let _ = writeln!(out, "inputs:   {}", inputs_line(&r.inputs));
    let _ = writeln!(out, "result:   {status}: {}", r.summary);
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(out, "elapsed:  {ms:.1} ms");
    }
    let _ = writeln!(out, "checks:");
    for c in &r.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        if c.detail.is_empty() {
            let _ = writeln!(out, "  [{mark}] {}", c.name);
        } else {
            let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.detail);
        }
    }
    let w = &r.witnesses;
    if w.rows.is_empty() {
        let _ = writeln!(out, "witnesses: (no witnesses)");
        return out;
    }
    let _ = writeln!(out, "witnesses ({}):", w.rows.len());
    let mut widths: Vec<usize> = w.columns.iter().map(|c| c.chars().count()).collect();
    for row in &w.rows {
        for (i, cell) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        format!("  {}", padded.join("  ").trim_end())
    };
    let _ = writeln!(out, "{}", line(&w.columns));
    for row in &w.rows {
        let _ = writeln!(out, "{}", line(row));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_witnesses_marker() {
        let r = Report::new("x", "y", BTreeMap::new());
        assert!(emit(&r, Format::Table).contains("(no witnesses)"));
    }

    #[test]
    fn failing_check_fails_report() {
        let mut r = Report::new("x", "y", BTreeMap::new());
        r.check("a", true, "");
        r.check("b", false, "broken");
        assert!(!r.passed);
        let t = emit(&r, Format::Table);
        assert!(t.contains("result:   FAIL"));
        assert!(t.contains("[FAIL] b: broken"));
    }
}
