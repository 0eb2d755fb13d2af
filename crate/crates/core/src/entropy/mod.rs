//! Sharp and fuzzy statistical entropy in bits.
//!
//! Each fuzzy state smears its energy over the signed deviation
//! `d ∈ [-ε, ε]` with plain Lebesgue measure, so
//! `Z = Σ_i ∫ e^{-β(ε_i + d)} dd` and `S_N = -Σ_i ∫ p log₂ p dd`.

mod quadrature;

use std::f64::consts::LN_2;

use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::config::Limits;
use crate::error::{Error, Result};

pub use quadrature::GaussLegendre;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct StateSystem {
    pub energies: Vec<f64>,
    pub beta: f64,
}

impl StateSystem {
    pub fn new(energies: Vec<f64>, beta: f64) -> Result<Self> {
        let s = StateSystem { energies, beta };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.energies.is_empty() {
            return Err(Error::Invalid("state system has no states".into()));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::Invalid(format!("beta must be positive, got {}", self.beta)));
        }
        if let Some(e) = self.energies.iter().find(|e| !e.is_finite() || **e < 0.0) {
            return Err(Error::Invalid(format!("energies must be finite and nonnegative, got {e}")));
        }
        Ok(())
    }

    fn validate_fuzzy(&self) -> Result<()> {
        self.validate()?;
        if let Some((i, e)) = self.energies.iter().enumerate().find(|(_, e)| **e <= 0.0) {
            return Err(Error::Precondition(format!("fuzzy states need ε > 0; state {i} has ε = {e}")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    #[default]
    GaussLegendre,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct FuzzConfig {
    pub rule: QuadratureRule,
    pub panels: usize,
    pub points: usize,
    pub tolerance: f64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig::from_limits(&Limits::default())
    }
}

impl FuzzConfig {
    pub fn from_limits(limits: &Limits) -> Self {
        FuzzConfig {
            rule: QuadratureRule::GaussLegendre,
            panels: limits.quad_panels,
            points: limits.quad_points,
            tolerance: limits.tolerance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.panels < 2 {
            return Err(Error::Invalid(format!("need at least 2 panels, got {}", self.panels)));
        }
        if self.points == 0 || self.points > 64 {
            return Err(Error::Invalid(format!("points per panel must be in 1..=64, got {}", self.points)));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::Invalid(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }

    fn rule(&self) -> GaussLegendre {
        GaussLegendre::new(self.points)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyKind {
    Sharp,
    Fuzzy,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateContribution {
    pub energy: f64,
    /// Probability (sharp) or integrated probability mass (fuzzy).
    pub mass: f64,
    /// This state's share of `S`, in bits.
    pub entropy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub kind: EntropyKind,
    pub beta: f64,
    pub z: f64,
    pub states: Vec<StateContribution>,
    pub entropy_bits: f64,
    /// `|Σ mass - 1|`
    pub residual: f64,
    pub error_estimate: f64,
}

impl EntropyReport {
    /// One row per state plus a total row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("state,energy,mass,entropy_bits\n");
        for (i, s) in self.states.iter().enumerate() {
            out.push_str(&format!("{i},{},{},{}\n", s.energy, s.mass, s.entropy));
        }
        let mass: f64 = self.states.iter().map(|s| s.mass).sum();
        out.push_str(&format!("total,,{mass},{}\n", self.entropy_bits));
        out
    }
}

/// `S = -Σ p log₂ p` with `p_i = e^{-βε_i} / Z`.
pub fn sharp_entropy(sys: &StateSystem) -> Result<EntropyReport> {
    sys.validate()?;
    let min = sys.energies.iter().copied().fold(f64::INFINITY, f64::min);
    // shift by the ground energy to keep the weights in range
    let weights: Vec<f64> = sys.energies.iter().map(|e| (-sys.beta * (e - min)).exp()).collect();
    let shifted: f64 = weights.iter().sum();
    let log_z = shifted.ln() - sys.beta * min;
    let states: Vec<StateContribution> = sys
        .energies
        .iter()
        .zip(&weights)
        .map(|(&energy, &w)| {
            let p = w / shifted;
            let entropy = if p > 0.0 { -p * p.log2() } else { 0.0 };
            StateContribution { energy, mass: p, entropy }
        })
        .collect();
    let mass: f64 = states.iter().map(|s| s.mass).sum();
    Ok(EntropyReport {
        kind: EntropyKind::Sharp,
        beta: sys.beta,
        z: log_z.exp(),
        entropy_bits: states.iter().map(|s| s.entropy).sum(),
        residual: (mass - 1.0).abs(),
        error_estimate: 0.0,
        states,
    })
}

/// `∫_{-ε}^{ε} e^{-β(ε+d)} dd = (1 - e^{-2βε}) / β`.
pub fn partition_closed_form(epsilon: f64, beta: f64) -> f64 {
    -(-2.0 * beta * epsilon).exp_m1() / beta
}

/// Differential entropy in bits of the single-state density
/// `e^{-β(ε+d)} / Z` on `[-ε, ε]`.
pub fn single_state_entropy_closed_form(epsilon: f64, beta: f64) -> f64 {
    let z = partition_closed_form(epsilon, beta);
    let l = 2.0 * epsilon;
    // E[u] for u = ε + d ∈ [0, 2ε]
    let mean = (1.0 - (-beta * l).exp() * (1.0 + beta * l)) / (beta * beta * z);
    (z.ln() + beta * mean) / LN_2
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PartitionValue {
    pub value: f64,
    pub error_estimate: f64,
}

fn per_state<T: Send>(sys: &StateSystem, f: impl Fn(f64) -> T + Sync) -> Vec<T> {
    sys.energies.par_iter().map(|&e| f(e)).collect()
}

/// State-by-state quadrature of the fuzzy partition function.
pub fn fuzzy_partition(sys: &StateSystem, cfg: &FuzzConfig) -> Result<PartitionValue> {
    sys.validate_fuzzy()?;
    cfg.validate()?;
    let rule = cfg.rule();
    let beta = sys.beta;
    let parts = per_state(sys, |e| rule.integrate_with_error(|d| (-beta * (e + d)).exp(), -e, e, cfg.panels));
    Ok(PartitionValue {
        value: parts.iter().map(|p| p.0).sum(),
        error_estimate: parts.iter().map(|p| p.1).sum(),
    })
}

/// `Σ_i ∫ e^{-β(ε_i+d)} / z dd`, the total mass under normalizer `z`.
fn total_mass(sys: &StateSystem, cfg: &FuzzConfig, z: f64) -> Vec<f64> {
    let rule = cfg.rule();
    let beta = sys.beta;
    per_state(sys, |e| rule.integrate(|d| (-beta * (e + d)).exp() / z, -e, e, cfg.panels))
}

pub fn fuzzy_entropy(sys: &StateSystem, cfg: &FuzzConfig) -> Result<EntropyReport> {
    let z = fuzzy_partition(sys, cfg)?;
    let rule = cfg.rule();
    let (beta, ln_z) = (sys.beta, z.value.ln());
    let masses = total_mass(sys, cfg, z.value);
    let pieces = per_state(sys, |e| {
        rule.integrate_with_error(
            |d| {
                let u = e + d;
                let p = (-beta * u).exp() / z.value;
                // -p log₂ p with log p = -βu - ln Z
                p * (beta * u + ln_z) / LN_2
            },
            -e,
            e,
            cfg.panels,
        )
    });
    let states: Vec<StateContribution> = sys
        .energies
        .iter()
        .zip(&masses)
        .zip(&pieces)
        .map(|((&energy, &mass), &(entropy, _))| StateContribution { energy, mass, entropy })
        .collect();
    let mass: f64 = masses.iter().sum();
    Ok(EntropyReport {
        kind: EntropyKind::Fuzzy,
        beta,
        z: z.value,
        entropy_bits: states.iter().map(|s| s.entropy).sum(),
        residual: (mass - 1.0).abs(),
        error_estimate: z.error_estimate / z.value + pieces.iter().map(|p| p.1).sum::<f64>(),
        states,
    })
}

/// `|Σ_i ∫ p dd - 1|` with the computed partition function.
pub fn normalization_check(sys: &StateSystem, cfg: &FuzzConfig) -> Result<f64> {
    let z = fuzzy_partition(sys, cfg)?;
    normalization_residual(sys, cfg, z.value)
}

/// Residual under an arbitrary normalizer, for fault injection.
pub fn normalization_residual(sys: &StateSystem, cfg: &FuzzConfig, z: f64) -> Result<f64> {
    sys.validate_fuzzy()?;
    cfg.validate()?;
    Ok((total_mass(sys, cfg, z).iter().sum::<f64>() - 1.0).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(e: &[f64], beta: f64) -> StateSystem {
        StateSystem::new(e.to_vec(), beta).unwrap()
    }

    #[test]
    fn two_equal_states_carry_one_bit() {
        let r = sharp_entropy(&sys(&[1.0, 1.0], 1.0)).unwrap();
        assert!((r.entropy_bits - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hand_derived_sharp_value() {
        // p = (2/3, 1/3)
        let r = sharp_entropy(&sys(&[0.0, LN_2], 1.0)).unwrap();
        assert!((r.entropy_bits - 0.918_295_834_054_489_5).abs() < 1e-12);
        assert!((r.states[0].mass - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.z - 1.5).abs() < 1e-15);
    }

    #[test]
    fn closed_form_partition_oracle() {
        let cfg = FuzzConfig::default();
        let z = fuzzy_partition(&sys(&[1.0], 1.0), &cfg).unwrap();
        // (1 - e^{-2}) at 25 digits
        let oracle = 0.864_664_716_763_387_308_1;
        assert!((z.value - oracle).abs() / oracle < 1e-12);
        let two = fuzzy_partition(&sys(&[1.0, 1.0], 1.0), &cfg).unwrap();
        assert!((two.value - 2.0 * z.value).abs() < 1e-14);
    }

    #[test]
    fn small_beta_limits() {
        let cfg = FuzzConfig::default();
        let s = sys(&[1.0], 1e-6);
        let z = fuzzy_partition(&s, &cfg).unwrap();
        assert!((z.value - 1.999_998_000_001_333_3).abs() < 1e-12);
        let r = fuzzy_entropy(&s, &cfg).unwrap();
        assert!((r.entropy_bits - 0.999_999_999_999_759_6).abs() < 1e-10);
    }

    #[test]
    fn doubled_normalizer_leaves_half() {
        let cfg = FuzzConfig::default();
        let s = sys(&[0.5, 1.0, 2.0], 0.7);
        let z = fuzzy_partition(&s, &cfg).unwrap().value;
        let r = normalization_residual(&s, &cfg, 2.0 * z).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
        assert!(normalization_check(&s, &cfg).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_bad_systems() {
        assert!(StateSystem::new(vec![], 1.0).is_err());
        assert!(StateSystem::new(vec![1.0], 0.0).is_err());
        let zero = sys(&[0.0, 1.0], 1.0);
        assert!(matches!(fuzzy_partition(&zero, &FuzzConfig::default()), Err(Error::Precondition(_))));
        let cfg = FuzzConfig {
            panels: 1,
            ..FuzzConfig::default()
        };
        assert!(fuzzy_partition(&sys(&[1.0], 1.0), &cfg).is_err());
    }

    #[test]
    fn csv_has_total_row() {
        let r = sharp_entropy(&sys(&[1.0, 2.0], 1.0)).unwrap();
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().last().unwrap().starts_with("total,,"));
    }
}
