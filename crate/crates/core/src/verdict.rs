//! Three-valued check outcomes.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
}

/// Outcome of one check. A failure carries the first counterexample in
/// canonical order; `checked` counts the instances examined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub checked: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Verdict {
    pub fn pass(check: impl Into<String>, checked: usize) -> Self {
        Verdict { check: check.into(), status: Status::Pass, witness: None, checked, notes: vec![], data: Value::Null }
    }

    pub fn fail(check: impl Into<String>, checked: usize, witness: impl Into<String>) -> Self {
        Verdict {
            check: check.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
            checked,
            notes: vec![],
            data: Value::Null,
        }
    }

    pub fn inapplicable(check: impl Into<String>, reason: impl Into<String>) -> Self {
        Verdict {
            check: check.into(),
            status: Status::Inapplicable,
            witness: None,
            checked: 0,
            notes: vec![reason.into()],
            data: Value::Null,
        }
    }

    /// Pass when `witness` is `None`.
    pub fn from_witness(check: impl Into<String>, checked: usize, witness: Option<String>) -> Self {
        match witness {
            None => Verdict::pass(check, checked),
            Some(w) => Verdict::fail(check, checked, w),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_data(mut self, data: Value) -> Self {
        self.data = data;
        self
    }

    /// Conjunction of applicable verdicts: fails with the first failure,
    /// inapplicable only if every part is.
    pub fn all(check: impl Into<String>, parts: &[Verdict]) -> Verdict {
        let check = check.into();
        let checked = parts.iter().map(|v| v.checked).sum();
        if let Some(f) = parts.iter().find(|v| v.failed()) {
            let w = format!("{}: {}", f.check, f.witness.as_deref().unwrap_or("failed"));
            return Verdict::fail(check, checked, w);
        }
        if !parts.is_empty() && parts.iter().all(|v| v.status == Status::Inapplicable) {
            return Verdict::inapplicable(check, "no applicable part");
        }
        Verdict::pass(check, checked)
    }
}
