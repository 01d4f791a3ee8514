//! Machine-readable results of engine checks.
//!
//! Every check yields a [`Report`]: the instance parameters, one [`Check`]
//! per tested item, the spans that were built, and (for chain-style checks)
//! the verified equality steps. Fractions are always rendered as `"p/q"`
//! strings, and [`Report::to_json`] emits maps in sorted key order so that
//! identical runs produce identical bytes.

use serde::Serialize;
use serde_json::{json, Value};

use crate::frac::FracIndex;
use crate::model::Model;
use crate::monomial::Vector;
use crate::rational::{self, Rational};
use crate::subspace::Certificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Passed,
    Contained,
    Undecided,
    Failed,
    Untestable,
}

/// Aggregate verdict, mapped to process exit codes by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Passed,
    Undecided,
    Failed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub inputs: Value,
    pub status: Status,
    #[serde(rename = "containedAtW", skip_serializing_if = "Option::is_none")]
    pub contained_at: Option<u32>,
    #[serde(rename = "certificateId", skip_serializing_if = "Option::is_none")]
    pub certificate_id: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(label: impl Into<String>, inputs: Value, status: Status) -> Self {
        Self { label: label.into(), inputs, status, contained_at: None, certificate_id: None, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanRecord {
    pub kind: String,
    pub grades: [String; 2],
    #[serde(rename = "W")]
    pub w: u32,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    pub step: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub instance: Value,
    pub scope: Vec<String>,
    pub checks: Vec<Check>,
    pub spans: Vec<SpanRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub chain: Vec<ChainStep>,
    /// Computed value for commands that return an element rather than a verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    /// Membership proofs referenced by `certificateId`; emitted only on request.
    #[serde(skip)]
    pub certificates: Vec<Certificate>,
}

impl Report {
    pub fn new(command: impl Into<String>, instance: Value) -> Self {
        Self {
            command: command.into(),
            instance,
            scope: Vec::new(),
            checks: Vec::new(),
            spans: Vec::new(),
            chain: Vec::new(),
            result: None,
            certificates: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.scope.push(text.into());
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn outcome(&self) -> Outcome {
        outcome_of(self.checks.iter().map(|c| c.status))
    }

    /// Appends another report's checks, spans and chain under a label prefix.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.label = format!("{prefix}{}", c.label);
            if let Some(id) = c.certificate_id.as_mut() {
                *id += self.certificates.len();
            }
            self.checks.push(c);
        }
        self.certificates.extend(other.certificates);
        self.spans.extend(other.spans);
        self.chain.extend(other.chain);
        for s in other.scope {
            if !self.scope.contains(&s) {
                self.scope.push(s);
            }
        }
    }

    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        let summary = json!({
            "outcome": self.outcome(),
            "passed": self.count(Status::Passed),
            "contained": self.count(Status::Contained),
            "undecided": self.count(Status::Undecided),
            "failed": self.count(Status::Failed),
            "untestable": self.count(Status::Untestable),
        });
        v["summary"] = summary;
        v
    }

    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report serializes")
    }

    /// Like [`Report::to_value`], with every certificate spelled out.
    pub fn to_value_with_certificates(&self, model: &Model) -> Value {
        let mut v = self.to_value();
        v["certificates"] = Value::Array(self.certificates.iter().map(|c| c.to_value(model)).collect());
        v
    }
}

/// Failed dominates undecided, which dominates passed; untestable items are neutral.
pub fn outcome_of(statuses: impl IntoIterator<Item = Status>) -> Outcome {
    let mut out = Outcome::Passed;
    for s in statuses {
        let o = match s {
            Status::Failed => Outcome::Failed,
            Status::Undecided => Outcome::Undecided,
            _ => Outcome::Passed,
        };
        out = out.max(o);
    }
    out
}

pub fn q(x: &Rational) -> Value {
    Value::String(rational::to_string(x))
}

pub fn fi(x: FracIndex) -> Value {
    Value::String(x.to_string())
}

pub fn vector(model: &Model, v: &Vector) -> Value {
    Value::String(model.render(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_precedence() {
        use Status::*;
        assert_eq!(outcome_of([Passed, Contained, Untestable]), Outcome::Passed);
        assert_eq!(outcome_of([Passed, Undecided]), Outcome::Undecided);
        assert_eq!(outcome_of([Undecided, Failed, Passed]), Outcome::Failed);
        assert_eq!(outcome_of([]), Outcome::Passed);
    }

    #[test]
    fn json_keys_are_sorted() {
        let mut r = Report::new("demo", json!({"z": 1, "a": 2}));
        r.push(Check::new("x", json!({}), Status::Passed));
        let text = r.to_json();
        let a = text.find("\"a\"").unwrap();
        let z = text.find("\"z\"").unwrap();
        assert!(a < z);
        assert!(text.find("\"checks\"").unwrap() < text.find("\"command\"").unwrap());
    }
}
