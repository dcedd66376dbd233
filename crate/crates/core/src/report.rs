//! Structured pass/fail records and the machine-readable report encoding.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The bound only constrains large scales and this input lies below the
    /// empirically observed onset; recorded, not a failure.
    BelowRegime,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_failure(self) -> bool {
        self == Verdict::Fail
    }
}

/// One row of the `checks` array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, bound: f64, passed: bool) -> Self {
        Self { name: name.into(), measured, bound, passed }
    }

    /// `measured <= bound`.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, bound, measured <= bound)
    }

    /// `measured >= bound`.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, bound, measured >= bound)
    }
}

/// Outcome of a diagnostic check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    pub measured: f64,
    pub bound: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl DiagnosticReport {
    pub fn new(name: impl Into<String>, measured: f64, bound: f64, verdict: Verdict) -> Self {
        Self {
            name: name.into(),
            inputs: BTreeMap::new(),
            measured,
            bound,
            verdict,
            checks: Vec::new(),
            note: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn with_check(mut self, check: Check) -> Self {
        self.checks.push(check);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// The headline check followed by any sub-checks.
    pub fn all_checks(&self) -> Vec<Check> {
        let mut out = vec![Check::new(
            self.name.clone(),
            self.measured,
            self.bound,
            !self.verdict.is_failure(),
        )];
        out.extend(self.checks.iter().cloned());
        out
    }
}

/// Compact JSON with every float written with 17 significant digits.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }
}

/// `value` with 17 significant digits in scientific notation.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serialise with sorted keys and 17-digit floats; identical input gives
/// identical bytes.
pub fn to_json_bytes(value: &Value) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value.serialize(&mut ser).expect("writing to a Vec cannot fail");
    out.push(b'\n');
    out
}

/// The top-level report document: `command`, `params`, `results`, `checks`.
pub fn report_document(command: &str, params: Value, results: Vec<Value>, checks: &[Check]) -> Value {
    serde_json::json!({
        "command": command,
        "params": params,
        "results": results,
        "checks": checks,
    })
}

/// CSV with a header row and 17-digit floats.
pub fn to_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format_f64(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let v = serde_json::json!({"x": 0.1, "n": 3, "bad": f64::NAN});
        let s = String::from_utf8(to_json_bytes(&v)).unwrap();
        assert!(s.contains("1.0000000000000001e-1") || s.contains("1.0000000000000000e-1"), "{s}");
        let parsed: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["x"].as_f64().unwrap(), 0.1);
        assert!(parsed["bad"].is_null());
        assert_eq!(parsed["n"].as_u64(), Some(3));
    }

    #[test]
    fn csv_layout() {
        let s = to_csv(&["a", "b"], &[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(s.lines().count(), 3);
        assert!(s.starts_with("a,b\n"));
    }
}
