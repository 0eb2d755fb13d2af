//! Scenario files: a named universe of rings, modules, sites, energies,
//! functors, branes and state systems, plus the checks to run on it.

use std::collections::BTreeMap;
use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteCommRing, FiniteModule, ModuleSpec, RingSpec};
use crate::config::Limits;
use crate::entropy::{FuzzConfig, StateSystem};
use crate::error::{Error, Result};
use crate::functors::{compose, Brane, EnergyFunctor, EnergySpec, EvaluableFunctor, FunctorSpec, Resolver};
use crate::site::{FiniteSite, SiteSpec};

use super::checks::CheckSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub limits: Option<Limits>,
    #[serde(default)]
    pub rings: Vec<NamedRing>,
    #[serde(default)]
    pub modules: Vec<NamedModule>,
    #[serde(default)]
    pub sites: Vec<NamedSite>,
    #[serde(default)]
    pub energies: Vec<NamedEnergy>,
    #[serde(default)]
    pub functors: Vec<NamedFunctor>,
    #[serde(default)]
    pub branes: Vec<BraneSpec>,
    #[serde(default)]
    pub systems: Vec<NamedSystem>,
    pub checks: Vec<CheckSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct NamedRing {
    pub name: String,
    pub ring: RingSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct NamedModule {
    pub name: String,
    pub module: ModuleSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct NamedSite {
    pub name: String,
    pub site: SiteSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct NamedEnergy {
    pub name: String,
    pub energy: EnergySpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct NamedFunctor {
    pub name: String,
    pub functor: FunctorSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct BraneSpec {
    pub name: String,
    /// Functor name.
    pub observable: String,
    /// Energy name.
    pub energy: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct NamedSystem {
    pub name: String,
    pub system: StateSystem,
    #[serde(default)]
    pub fuzz: Option<FuzzConfig>,
}

/// Every entity of a scenario, built and resolved by name.
#[derive(Default)]
pub struct Universe {
    pub rings: BTreeMap<String, Arc<FiniteCommRing>>,
    pub modules: BTreeMap<String, Arc<FiniteModule>>,
    pub sites: BTreeMap<String, Arc<FiniteSite>>,
    pub energies: BTreeMap<String, Arc<EnergyFunctor>>,
    pub functors: BTreeMap<String, Arc<EvaluableFunctor>>,
    pub branes: BTreeMap<String, Arc<Brane>>,
    pub systems: BTreeMap<String, (StateSystem, Option<FuzzConfig>)>,
}

fn insert<T>(map: &mut BTreeMap<String, T>, kind: &str, name: &str, value: T) -> Result<()> {
    if map.insert(name.to_string(), value).is_some() {
        return Err(Error::Parse(format!("{kind} `{name}` is defined twice")));
    }
    Ok(())
}

fn get<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T> {
    map.get(name).ok_or_else(|| Error::Parse(format!("unknown {kind} `{name}`")))
}

impl Universe {
    pub fn ring(&self, name: &str) -> Result<&Arc<FiniteCommRing>> {
        get(&self.rings, "ring", name)
    }

    pub fn module(&self, name: &str) -> Result<&Arc<FiniteModule>> {
        get(&self.modules, "module", name)
    }

    pub fn site(&self, name: &str) -> Result<&Arc<FiniteSite>> {
        get(&self.sites, "site", name)
    }

    pub fn energy(&self, name: &str) -> Result<&Arc<EnergyFunctor>> {
        get(&self.energies, "energy", name)
    }

    pub fn functor(&self, name: &str) -> Result<&Arc<EvaluableFunctor>> {
        get(&self.functors, "functor", name)
    }

    pub fn brane(&self, name: &str) -> Result<&Arc<Brane>> {
        get(&self.branes, "brane", name)
    }

    pub fn system(&self, name: &str) -> Result<&(StateSystem, Option<FuzzConfig>)> {
        get(&self.systems, "state system", name)
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Builds entities in file order; each may refer to those before it.
    pub fn build(&self, limits: &Limits) -> Result<Universe> {
        let mut u = Universe::default();
        for r in &self.rings {
            let built = {
                let lookup = |n: &str| u.rings.get(n).cloned();
                r.ring.build(&lookup, limits)?
            };
            insert(&mut u.rings, "ring", &r.name, Arc::new(built.renamed(r.name.clone())))?;
        }
        for m in &self.modules {
            let ring = u.ring(&m.module.ring)?.clone();
            let built = m.module.build(ring, limits)?.renamed(m.name.clone());
            insert(&mut u.modules, "module", &m.name, Arc::new(built))?;
        }
        for s in &self.sites {
            let built = {
                let lookup = |n: &str| u.rings.get(n).cloned();
                s.site.build(&s.name, &lookup, limits)?
            };
            insert(&mut u.sites, "site", &s.name, Arc::new(built))?;
        }
        for e in &self.energies {
            let built = {
                let ring = |n: &str| u.rings.get(n).cloned();
                let site = |n: &str| u.sites.get(n).cloned();
                let energy = |n: &str| u.energies.get(n).cloned();
                let r = Resolver {
                    ring: &ring,
                    site: &site,
                    energy: &energy,
                };
                e.energy.build(&e.name, &r)?
            };
            insert(&mut u.energies, "energy", &e.name, Arc::new(built))?;
        }
        for f in &self.functors {
            let built = {
                let ring = |n: &str| u.rings.get(n).cloned();
                let site = |n: &str| u.sites.get(n).cloned();
                let energy = |n: &str| u.energies.get(n).cloned();
                let r = Resolver {
                    ring: &ring,
                    site: &site,
                    energy: &energy,
                };
                f.functor.build(&r, limits)?
            };
            insert(&mut u.functors, "functor", &f.name, Arc::new(built))?;
        }
        for b in &self.branes {
            let brane = compose(u.functor(&b.observable)?.clone(), u.energy(&b.energy)?.clone())?;
            insert(&mut u.branes, "brane", &b.name, Arc::new(brane))?;
        }
        for s in &self.systems {
            s.system.validate()?;
            if let Some(f) = &s.fuzz {
                f.validate()?;
            }
            insert(&mut u.systems, "state system", &s.name, (s.system.clone(), s.fuzz.clone()))?;
        }
        Ok(u)
    }
}
