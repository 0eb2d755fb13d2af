//! Structured-text site definitions.
//!
//! ```json
//! {
//!   "category": {"kind": "Powerset", "points": ["a", "b"]},
//!   "pullbacks": {"mode": "Auto"},
//!   "topology": {"kind": "Closed", "subset": ["b"]}
//! }
//! ```

use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::algebra::FiniteCommRing;
use crate::category::{FiniteCategory, Morphism};
use crate::config::Limits;
use crate::error::{Error, Result};

use super::affine::affine_category;
use super::limits::Cone;
use super::{Factorization, FiniteSite, PullbackMode, Topology};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SiteSpec {
    pub category: CategorySpec,
    #[serde(default)]
    pub pullbacks: PullbackSpec,
    pub topology: TopologySpec,
    #[serde(default)]
    pub factorizations: Vec<FactorizationSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum CategorySpec {
    /// Subsets of `points` under inclusion; morphisms are named `{a}<={a,b}`.
    Powerset { points: Vec<String> },
    /// The order generated by the listed pairs `[x, y]` meaning `x ≤ y`.
    Poset { elements: Vec<String>, order: Vec<[String; 2]> },
    /// Sets of size `0..=max` and all functions, named `a->b:[images]`.
    FiniteSets { max: usize },
    /// Non-identity arrows plus the composites `[g, f, g∘f]` of every
    /// composable non-identity pair.
    Explicit {
        objects: Vec<String>,
        arrows: Vec<ArrowSpec>,
        #[serde(default)]
        composites: Vec<[String; 3]>,
    },
    /// `Spec` of each named ring, one morphism per ring hom.
    Affine { rings: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "mode", deny_unknown_fields)]
pub enum PullbackSpec {
    #[default]
    Auto,
    Search,
    Declared { pullbacks: Vec<DeclaredPullback> },
}

/// The square `apex → left.source`, `apex → right.source` over the cospan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DeclaredPullback {
    pub left: String,
    pub right: String,
    pub apex: String,
    pub legs: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum TopologySpec {
    Trivial,
    Indiscrete,
    /// Powerset sites: families whose union is the target.
    Union,
    /// Powerset sites: families covering the target outside `subset`.
    Closed { subset: Vec<String> },
    /// Affine sites: isomorphisms and `Spec` of injective ring maps.
    Injective,
    Listed {
        covers: Vec<CoverSpec>,
        #[serde(default = "yes")]
        with_isomorphisms: bool,
    },
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub object: String,
    pub families: Vec<Vec<String>>,
}

/// `morphism = right ∘ left` through `middle`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct FactorizationSpec {
    pub morphism: String,
    pub middle: String,
    pub left: String,
    pub right: String,
}

fn object(c: &FiniteCategory, name: &str) -> Result<usize> {
    c.object_id(name)
        .ok_or_else(|| Error::Parse(format!("unknown object `{name}` in {}", c.name())))
}

fn morphism(c: &FiniteCategory, name: &str) -> Result<usize> {
    c.morphism_id(name)
        .ok_or_else(|| Error::Parse(format!("unknown morphism `{name}` in {}", c.name())))
}

impl CategorySpec {
    pub fn build(
        &self,
        name: &str,
        rings: &dyn Fn(&str) -> Option<Arc<FiniteCommRing>>,
    ) -> Result<(FiniteCategory, Option<usize>, Option<super::AffineData>)> {
        Ok(match self {
            CategorySpec::Powerset { points } => {
                let pts: Vec<&str> = points.iter().map(String::as_str).collect();
                (FiniteCategory::powerset(&pts)?, Some(points.len()), None)
            }
            CategorySpec::Poset { elements, order } => {
                let n = elements.len();
                let mut leq = vec![false; n * n];
                for i in 0..n {
                    leq[i * n + i] = true;
                }
                for [x, y] in order {
                    let find = |e: &str| {
                        elements
                            .iter()
                            .position(|z| z == e)
                            .ok_or_else(|| Error::Parse(format!("unknown element `{e}` in order")))
                    };
                    leq[find(x)? * n + find(y)?] = true;
                }
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            if leq[i * n + k] && leq[k * n + j] {
                                leq[i * n + j] = true;
                            }
                        }
                    }
                }
                (FiniteCategory::poset(name, elements.clone(), |x, y| leq[x * n + y])?, None, None)
            }
            CategorySpec::FiniteSets { max } => (FiniteCategory::finite_sets(*max)?, None, None),
            CategorySpec::Explicit {
                objects,
                arrows,
                composites,
            } => {
                let obj = |s: &str| {
                    objects
                        .iter()
                        .position(|o| o == s)
                        .ok_or_else(|| Error::Parse(format!("unknown object `{s}`")))
                };
                let arr = |s: &str| {
                    arrows
                        .iter()
                        .position(|a| a.name == s)
                        .ok_or_else(|| Error::Parse(format!("unknown arrow `{s}`")))
                };
                let parts = arrows
                    .iter()
                    .map(|a| {
                        Ok(Morphism {
                            name: a.name.clone(),
                            source: obj(&a.source)?,
                            target: obj(&a.target)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let comps = composites
                    .iter()
                    .map(|[g, f, h]| Ok((arr(g)?, arr(f)?, arr(h)?)))
                    .collect::<Result<Vec<_>>>()?;
                (FiniteCategory::from_parts(name, objects.clone(), parts, &comps)?, None, None)
            }
            CategorySpec::Affine { rings: names } => {
                let list = names
                    .iter()
                    .map(|n| rings(n).ok_or_else(|| Error::Parse(format!("unknown ring `{n}`"))))
                    .collect::<Result<Vec<_>>>()?;
                let (c, data) = affine_category(&list)?;
                (c, None, Some(data))
            }
        })
    }
}

impl SiteSpec {
    pub fn build(
        &self,
        name: &str,
        rings: &dyn Fn(&str) -> Option<Arc<FiniteCommRing>>,
        limits: &Limits,
    ) -> Result<FiniteSite> {
        let (category, powerset, affine) = self.category.build(name, rings)?;
        let c = &category;
        let (mode, declared) = match &self.pullbacks {
            PullbackSpec::Auto => (PullbackMode::Auto, Vec::new()),
            PullbackSpec::Search => (PullbackMode::Search, Vec::new()),
            PullbackSpec::Declared { pullbacks } => {
                let declared = pullbacks
                    .iter()
                    .map(|p| {
                        Ok((
                            (morphism(c, &p.left)?, morphism(c, &p.right)?),
                            Cone {
                                apex: object(c, &p.apex)?,
                                legs: vec![morphism(c, &p.legs[0])?, morphism(c, &p.legs[1])?],
                            },
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                (PullbackMode::Declared, declared)
            }
        };
        let topology = match &self.topology {
            TopologySpec::Trivial => Topology::Trivial,
            TopologySpec::Indiscrete => Topology::Indiscrete,
            TopologySpec::Union => Topology::Union,
            TopologySpec::Closed { subset } => {
                let CategorySpec::Powerset { points } = &self.category else {
                    return Err(Error::Parse("Closed topology needs a Powerset category".into()));
                };
                let mut mask = 0;
                for p in subset {
                    let i = points
                        .iter()
                        .position(|q| q == p)
                        .ok_or_else(|| Error::Parse(format!("unknown point `{p}`")))?;
                    mask |= 1 << i;
                }
                Topology::Closed(mask)
            }
            TopologySpec::Injective => {
                let data = affine
                    .as_ref()
                    .ok_or_else(|| Error::Parse("Injective topology needs an Affine category".into()))?;
                Topology::Listed(with_isos(c, data.injective_covers(c)))
            }
            TopologySpec::Listed {
                covers,
                with_isomorphisms,
            } => {
                let mut listed = vec![Vec::new(); c.object_count()];
                for cover in covers {
                    let u = object(c, &cover.object)?;
                    for fam in &cover.families {
                        listed[u].push(fam.iter().map(|f| morphism(c, f)).collect::<Result<Vec<_>>>()?);
                    }
                }
                if *with_isomorphisms {
                    listed = with_isos(c, listed);
                }
                Topology::Listed(listed)
            }
        };
        let factorizations = self
            .factorizations
            .iter()
            .map(|f| {
                Ok((
                    morphism(c, &f.morphism)?,
                    Factorization {
                        middle: object(c, &f.middle)?,
                        left: morphism(c, &f.left)?,
                        right: morphism(c, &f.right)?,
                    },
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let site = FiniteSite::new(name, Arc::new(category), powerset, mode, declared, &topology, factorizations, limits)?;
        Ok(match affine {
            Some(data) => site.with_affine(Arc::new(data)),
            None => site,
        })
    }
}

fn with_isos(c: &FiniteCategory, mut listed: Vec<Vec<Vec<usize>>>) -> Vec<Vec<Vec<usize>>> {
    for f in 0..c.morphism_count() {
        if c.is_iso(f) {
            listed[c.target(f)].push(vec![f]);
        }
    }
    listed
}
