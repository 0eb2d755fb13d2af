use serde::Serialize;

/// One broken rule with the elements that break it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: String,
    pub witness: Vec<usize>,
    pub detail: String,
}

/// Outcome of an exhaustive structural validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records a violation unless `rule` already has a witness.
    pub(crate) fn flag(&mut self, rule: &str, witness: &[usize], detail: impl Into<String>) {
        if self.violations.iter().any(|v| v.rule == rule) {
            return;
        }
        self.violations.push(Violation {
            rule: rule.to_string(),
            witness: witness.to_vec(),
            detail: detail.into(),
        });
    }

    pub fn violation(&self, rule: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.rule == rule)
    }
}

/// Pass/fail/skip status shared by axiom checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
}

/// A single verdict with an optional replayable witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Verdict {
            status: Status::Fail,
            witness: Some(witness.into()),
        }
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        Verdict {
            status: Status::Skipped,
            witness: Some(reason.into()),
        }
    }

    pub fn inconclusive(reason: impl Into<String>) -> Self {
        Verdict {
            status: Status::Inconclusive,
            witness: Some(reason.into()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}
