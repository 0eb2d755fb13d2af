use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::report::Status;

use super::checks::{execute, CheckSpec};
use super::scenario::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
    Error,
}

impl From<Status> for CheckStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Pass => CheckStatus::Pass,
            Status::Fail => CheckStatus::Fail,
            Status::Skipped => CheckStatus::Skipped,
            Status::Inconclusive => CheckStatus::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: &'static str,
    pub subject: String,
    pub status: CheckStatus,
    pub summary: String,
    pub detail: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exit_class: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub inconclusive: usize,
    pub error: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub seed: u64,
    pub limits: Limits,
    pub checks: Vec<CheckResult>,
    pub counts: Counts,
    pub overall: CheckStatus,
    pub exit_code: i32,
}

impl RunReport {
    /// One line per check and a closing status line.
    pub fn to_text(&self) -> String {
        let mut out = format!("scenario {} (seed {})\n", self.scenario, self.seed);
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
                CheckStatus::Inconclusive => "INCO",
                CheckStatus::Error => "ERR ",
            };
            out.push_str(&format!("{tag} {:<22} {:<28} {}\n", c.check, c.subject, c.summary));
        }
        let n = &self.counts;
        out.push_str(&format!(
            "{} pass, {} fail, {} skipped, {} inconclusive, {} error; exit {}\n",
            n.pass, n.fail, n.skipped, n.inconclusive, n.error, self.exit_code
        ));
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub timings: bool,
    /// Keep only checks of these kinds.
    pub only: Option<Vec<&'static str>>,
}

/// Effective limits: scenario values, then overrides, then the global caps.
pub fn effective_limits(scenario: &Scenario, overrides: impl FnOnce(&mut Limits)) -> Result<Limits> {
    let mut limits = scenario.limits.clone().unwrap_or_default();
    overrides(&mut limits);
    limits.check()?;
    Ok(limits)
}

/// Builds the universe and runs the checks stage by stage. Checks inside a
/// stage run concurrently; the report keeps stage order, then file order.
pub fn run(scenario: &Scenario, limits: &Limits, opts: &RunOptions) -> Result<RunReport> {
    let universe = scenario.build(limits)?;
    let seed = opts.seed.unwrap_or(scenario.seed);
    let mut order: Vec<&CheckSpec> = scenario
        .checks
        .iter()
        .filter(|c| opts.only.as_ref().map_or(true, |k| k.contains(&c.kind())))
        .collect();
    order.sort_by_key(|c| c.stage());
    let checks: Vec<CheckResult> = order
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let result = execute(c, &universe, seed, limits);
            let elapsed_ms = opts.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
            match result {
                Ok(o) => CheckResult {
                    check: c.kind(),
                    subject: c.subject(),
                    status: o.status.into(),
                    summary: o.summary,
                    detail: o.detail,
                    exit_class: None,
                    elapsed_ms,
                },
                Err(e) => CheckResult {
                    check: c.kind(),
                    subject: c.subject(),
                    status: CheckStatus::Error,
                    summary: e.to_string(),
                    detail: serde_json::Value::Null,
                    exit_class: Some(e.exit_code()),
                    elapsed_ms,
                },
            }
        })
        .collect();
    let mut counts = Counts::default();
    for c in &checks {
        match c.status {
            CheckStatus::Pass => counts.pass += 1,
            CheckStatus::Fail => counts.fail += 1,
            CheckStatus::Skipped => counts.skipped += 1,
            CheckStatus::Inconclusive => counts.inconclusive += 1,
            CheckStatus::Error => counts.error += 1,
        }
    }
    // errors outrank failures; a cap error outranks an input error
    let exit_code = checks
        .iter()
        .filter_map(|c| c.exit_class)
        .max()
        .unwrap_or(if counts.fail > 0 { 1 } else { 0 });
    let overall = if counts.error > 0 {
        CheckStatus::Error
    } else if counts.fail > 0 {
        CheckStatus::Fail
    } else {
        CheckStatus::Pass
    };
    Ok(RunReport {
        scenario: scenario.name.clone(),
        seed,
        limits: limits.clone(),
        checks,
        counts,
        overall,
        exit_code,
    })
}

/// Loads a scenario file, mapping I/O failures to input errors.
pub fn load(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Scenario::from_json(&text)
}
