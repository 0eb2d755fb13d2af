//! Scenario runner behind the `branes` binary.

mod checks;
mod run;
mod scenario;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::entropy::{fuzzy_entropy, sharp_entropy, EntropyReport, FuzzConfig, StateSystem};
use crate::error::Result;

pub use checks::{execute, CheckSpec, CoverRef, DerivationRef, DescentRef, Outcome, PointRef, CATALOG};
pub use run::{effective_limits, load, run, CheckResult, CheckStatus, Counts, RunOptions, RunReport};
pub use scenario::{BraneSpec, NamedEnergy, NamedFunctor, NamedModule, NamedRing, NamedSite, NamedSystem, Scenario, Universe};

/// Input of the `entropy` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct StateTable {
    pub energies: Vec<f64>,
    pub beta: f64,
    #[serde(default)]
    pub fuzz: Option<FuzzConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyOutput {
    pub sharp: EntropyReport,
    /// Absent when some energy is zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzzy: Option<EntropyReport>,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn entropy_table(table: &StateTable, default_fuzz: FuzzConfig) -> Result<EntropyOutput> {
    let sys = StateSystem::new(table.energies.clone(), table.beta)?;
    let fuzz = table.fuzz.clone().unwrap_or(default_fuzz);
    fuzz.validate()?;
    let sharp = sharp_entropy(&sys)?;
    let fuzzy = if sys.energies.iter().all(|&e| e > 0.0) {
        Some(fuzzy_entropy(&sys, &fuzz)?)
    } else {
        None
    };
    let passed = sharp.residual <= fuzz.tolerance && fuzzy.as_ref().map_or(true, |f| f.residual <= fuzz.tolerance);
    Ok(EntropyOutput {
        sharp,
        fuzzy,
        tolerance: fuzz.tolerance,
        passed,
    })
}

/// JSON schemas of the scenario and state-table formats.
pub fn schema() -> serde_json::Value {
    serde_json::json!({
        "scenario": schemars::schema_for!(Scenario),
        "state_table": schemars::schema_for!(StateTable),
    })
}
