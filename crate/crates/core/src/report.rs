//! Structured verification reports.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// How a check's measured value is compared with its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `value < threshold`
    Below,
    /// `value > threshold`
    Above,
    /// `|value − expected| ≤ threshold`
    Within,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    pub relation: Relation,
    pub threshold: f64,
    pub pass: bool,
}

/// Record of the checks run by one command. `overall` is the conjunction of
/// every check's `pass` flag; a report with no checks does not pass.
///
/// Serialization is deterministic: struct fields keep declaration order and
/// `inputs` is a sorted map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub overall: bool,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            inputs: BTreeMap::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            overall: false,
            wall_time_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.inputs.insert(key.to_string(), v);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    fn push(&mut self, check: Check) -> bool {
        let pass = check.pass;
        self.checks.push(check);
        self.overall = self.checks.iter().all(|c| c.pass);
        pass
    }

    /// Passes when `value < threshold`. NaN never passes.
    pub fn below(&mut self, name: impl Into<String>, value: f64, threshold: f64) -> bool {
        self.push(Check {
            name: name.into(),
            value,
            expected: None,
            relation: Relation::Below,
            threshold,
            pass: value < threshold,
        })
    }

    /// Passes when `value > threshold`. NaN never passes.
    pub fn above(&mut self, name: impl Into<String>, value: f64, threshold: f64) -> bool {
        self.push(Check {
            name: name.into(),
            value,
            expected: None,
            relation: Relation::Above,
            threshold,
            pass: value > threshold,
        })
    }

    pub fn within(&mut self, name: impl Into<String>, value: f64, expected: f64, tol: f64) -> bool {
        self.push(Check {
            name: name.into(),
            value,
            expected: Some(expected),
            relation: Relation::Within,
            threshold: tol,
            pass: (value - expected).abs() <= tol,
        })
    }

    /// Exact comparison of counts.
    pub fn count(&mut self, name: impl Into<String>, value: usize, expected: usize) -> bool {
        self.within(name, value as f64, expected as f64, 0.0)
    }

    /// Appends another report's checks with a name prefix.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}: {}", c.name);
            self.push(c);
        }
        self.notes.extend(other.notes.into_iter().map(|n| format!("{prefix}: {n}")));
    }

    pub fn passed(&self) -> bool {
        self.overall
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Largest value among checks whose name starts with `prefix`.
    pub fn max_value(&self, prefix: &str) -> Option<f64> {
        self.checks
            .iter()
            .filter(|c| c.name.starts_with(prefix))
            .map(|c| c.value)
            .reduce(f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.command, if self.overall { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            let rel = match c.relation {
                Relation::Below => format!("< {:.3e}", c.threshold),
                Relation::Above => format!("> {:.6}", c.threshold),
                Relation::Within => {
                    format!("= {} ± {:.3e}", c.expected.unwrap_or(f64::NAN), c.threshold)
                }
            };
            writeln!(f, "  [{}] {}: {:.6e} ({rel})", if c.pass { "ok" } else { "FAIL" }, c.name, c.value)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
