use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard ceilings that no scenario or flag may exceed.
pub const GLOBAL_MAX_DIM: usize = 8;
pub const GLOBAL_CARRIER_CAP: usize = 1024;
pub const GLOBAL_EX_CAP: usize = 3;

/// Caps and numerical settings shared by every module.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Truncation dimension of every simplicial set that gets built.
    pub max_dim: usize,
    /// Largest ring or module carrier that may be constructed.
    pub carrier_cap: usize,
    /// Largest `k` accepted by `ex_k`.
    pub ex_cap: usize,
    /// Number of `Ex` applications used by the path-space fiber branch.
    pub fiber_ex: usize,
    /// Largest number of simplices in any single level.
    pub simplex_cap: usize,
    /// Largest number of combinations an exhaustive scan may visit.
    pub combination_cap: usize,
    /// Composite Gauss-Legendre panels per state.
    pub quad_panels: usize,
    /// Gauss-Legendre nodes per panel.
    pub quad_points: usize,
    /// Numerical tolerance for entropy checks.
    pub tolerance: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: 4,
            carrier_cap: 64,
            ex_cap: 2,
            fiber_ex: 1,
            simplex_cap: 200_000,
            combination_cap: 2_000_000,
            quad_panels: 16,
            quad_points: 8,
            tolerance: 1e-9,
        }
    }
}

impl Limits {
    pub fn with_max_dim(mut self, d: usize) -> Self {
        self.max_dim = d;
        self
    }

    /// Rejects settings beyond the global ceilings.
    pub fn check(&self) -> Result<()> {
        if self.max_dim > GLOBAL_MAX_DIM {
            return Err(Error::cap("max_dim", GLOBAL_MAX_DIM, self.max_dim));
        }
        if self.carrier_cap > GLOBAL_CARRIER_CAP {
            return Err(Error::cap("carrier_cap", GLOBAL_CARRIER_CAP, self.carrier_cap));
        }
        if self.ex_cap > GLOBAL_EX_CAP {
            return Err(Error::cap("ex_cap", GLOBAL_EX_CAP, self.ex_cap));
        }
        if self.fiber_ex > self.ex_cap {
            return Err(Error::cap("fiber_ex", self.ex_cap, self.fiber_ex));
        }
        if self.quad_panels < 2 {
            return Err(Error::Invalid("quad_panels must be at least 2".into()));
        }
        if self.quad_points == 0 || self.quad_points > 64 {
            return Err(Error::Invalid("quad_points must lie in 1..=64".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Invalid("tolerance must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn check_carrier(&self, what: &str, size: usize) -> Result<()> {
        if size > self.carrier_cap {
            Err(Error::cap(format!("carrier of {what}"), self.carrier_cap, size))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_level(&self, what: &str, size: usize) -> Result<()> {
        if size > self.simplex_cap {
            Err(Error::cap(format!("simplices of {what}"), self.simplex_cap, size))
        } else {
            Ok(())
        }
    }
}
