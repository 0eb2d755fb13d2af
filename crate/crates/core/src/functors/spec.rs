//! Structured-text energy and functor definitions. Sites, rings and energies
//! are referenced by their scenario names.

use std::collections::BTreeMap;
use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::algebra::FiniteCommRing;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::simplicial::{build, SimplicialSet};
use crate::site::FiniteSite;

use super::energy::{AlgebraAction, EnergyFunctor};
use super::evaluable::{EvaluableFunctor, NerveRule};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct EnergySpec {
    pub source: String,
    pub target: String,
    /// Source object name to target object name. Omitted means identity on
    /// names.
    #[serde(default)]
    pub objects: Option<BTreeMap<String, String>>,
    /// Needed only when the target has parallel arrows.
    #[serde(default)]
    pub morphisms: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub algebra: AlgebraAction,
    #[serde(default)]
    pub probe: Option<String>,
    /// The one axiom this energy is built to break.
    #[serde(default)]
    pub intended_fault: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ShapeSpec {
    Point,
    Simplex { n: usize },
    Boundary { n: usize },
    Horn { n: usize, j: usize },
    Discrete { labels: Vec<String> },
}

impl ShapeSpec {
    pub fn build(&self, limits: &Limits) -> Result<SimplicialSet> {
        let dim = limits.max_dim;
        match self {
            ShapeSpec::Point => Ok(build::point(dim)),
            ShapeSpec::Simplex { n } => build::simplex(*n, dim, limits),
            ShapeSpec::Boundary { n } => build::boundary(*n, dim, limits),
            ShapeSpec::Horn { n, j } => build::horn(*n, *j, dim, limits),
            ShapeSpec::Discrete { labels } => Ok(build::discrete(labels.clone(), dim)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum FunctorSpec {
    Representable { ring: String },
    SiteRepresentable { site: String, object: String },
    Constant { shape: ShapeSpec },
    Units,
    Composite { observable: Box<FunctorSpec>, energy: String },
}

/// Name lookups used while building from specs.
pub struct Resolver<'a> {
    pub ring: &'a dyn Fn(&str) -> Option<Arc<FiniteCommRing>>,
    pub site: &'a dyn Fn(&str) -> Option<Arc<FiniteSite>>,
    pub energy: &'a dyn Fn(&str) -> Option<Arc<EnergyFunctor>>,
}

impl Resolver<'_> {
    pub fn ring(&self, name: &str) -> Result<Arc<FiniteCommRing>> {
        (self.ring)(name).ok_or_else(|| Error::Parse(format!("unknown ring `{name}`")))
    }

    pub fn site(&self, name: &str) -> Result<Arc<FiniteSite>> {
        (self.site)(name).ok_or_else(|| Error::Parse(format!("unknown site `{name}`")))
    }

    pub fn energy(&self, name: &str) -> Result<Arc<EnergyFunctor>> {
        (self.energy)(name).ok_or_else(|| Error::Parse(format!("unknown energy `{name}`")))
    }
}

fn object(site: &FiniteSite, name: &str) -> Result<usize> {
    site.category()
        .object_id(name)
        .ok_or_else(|| Error::Parse(format!("unknown object `{name}` in site {}", site.name())))
}

impl EnergySpec {
    pub fn build(&self, name: &str, r: &Resolver) -> Result<EnergyFunctor> {
        let source = r.site(&self.source)?;
        let target = r.site(&self.target)?;
        let c = source.category();
        let objects = (0..c.object_count())
            .map(|o| {
                let from = &c.objects()[o];
                let to = match &self.objects {
                    Some(map) => map
                        .get(from)
                        .ok_or_else(|| Error::Parse(format!("energy {name}: object `{from}` is not mapped")))?,
                    None => from,
                };
                object(&target, to)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut e = match &self.morphisms {
            None => EnergyFunctor::from_object_map(name, source, target.clone(), objects)?,
            Some(map) => {
                let morphisms = (0..c.morphism_count())
                    .map(|f| {
                        let from = &c.morphism(f).name;
                        let to = map
                            .get(from)
                            .ok_or_else(|| Error::Parse(format!("energy {name}: morphism `{from}` is not mapped")))?;
                        target
                            .category()
                            .morphism_id(to)
                            .ok_or_else(|| Error::Parse(format!("energy {name}: unknown morphism `{to}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                EnergyFunctor::new(name, source, target, objects, morphisms)?
            }
        };
        e = e.with_algebra(self.algebra);
        if let Some(p) = &self.probe {
            e = e.with_probe(r.ring(p)?);
        }
        if let Some(fault) = &self.intended_fault {
            e = e.with_intended_fault(fault.clone());
        }
        Ok(e)
    }
}

impl FunctorSpec {
    pub fn build(&self, r: &Resolver, limits: &Limits) -> Result<EvaluableFunctor> {
        Ok(match self {
            FunctorSpec::Representable { ring } => EvaluableFunctor::Representable(r.ring(ring)?),
            FunctorSpec::SiteRepresentable { site, object: o } => {
                let site = r.site(site)?;
                let object = object(&site, o)?;
                EvaluableFunctor::SiteRepresentable { site, object }
            }
            FunctorSpec::Constant { shape } => EvaluableFunctor::Constant(Arc::new(shape.build(limits)?)),
            FunctorSpec::Units => EvaluableFunctor::NerveValued(NerveRule::Units),
            FunctorSpec::Composite { observable, energy } => EvaluableFunctor::Composite {
                observable: Arc::new(observable.build(r, limits)?),
                energy: r.energy(energy)?,
            },
        })
    }
}
