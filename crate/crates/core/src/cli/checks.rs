use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::Limits;
use crate::deformation::{delta_sampler, derivations, relative_derivations, tangent, uncertainty_product, DeltaSample, PointedEvaluation};
use crate::entropy::{fuzzy_entropy, normalization_check, sharp_entropy, FuzzConfig};
use crate::error::{Error, Result};
use crate::functors::{check_descent, check_energy, EvaluableFunctor, SampleConfig};
use crate::report::{Status, Verdict};
use crate::site::{cech_nerve, is_hypercover, FiniteSite};

use super::scenario::Universe;

/// A vertex of `F(A)`, by index or by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(untagged)]
pub enum PointRef {
    Index(usize),
    Label(String),
}

impl Default for PointRef {
    fn default() -> Self {
        PointRef::Index(0)
    }
}

/// `(A, x, M)` by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DerivationRef {
    pub ring: String,
    #[serde(default)]
    pub point: PointRef,
    pub module: String,
}

/// A Čech nerve along one covering arrow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct CoverRef {
    pub site: String,
    /// Morphism name.
    pub cover: String,
    #[serde(default = "one")]
    pub levels: usize,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    Topology {
        site: String,
    },
    Hypercover {
        nerve: CoverRef,
    },
    EnergyAxioms {
        energy: String,
        #[serde(default)]
        samples: SampleConfig,
        /// Descent sample run with the observable along a cover in an affine site.
        #[serde(default)]
        descent: Option<DescentRef>,
    },
    Descent {
        functor: String,
        nerve: CoverRef,
    },
    BraneCoherence {
        brane: String,
        /// Rings for ring-valued observables.
        #[serde(default)]
        universe: Vec<String>,
    },
    Functoriality {
        functor: String,
        universe: Vec<String>,
    },
    Derivations {
        functor: String,
        at: DerivationRef,
        #[serde(default)]
        expect_pi0: Option<usize>,
    },
    DeltaSampler {
        functor: String,
        samples: Vec<DerivationRef>,
    },
    Tangent {
        functor: String,
        ring: String,
        #[serde(default)]
        expect_vertices: Option<usize>,
    },
    RelativeDerivations {
        functor: String,
        at: DerivationRef,
        #[serde(default)]
        expect_pi0: Option<usize>,
    },
    Uncertainty {
        brane: String,
        observable_at: DerivationRef,
        energy_at: DerivationRef,
    },
    SharpEntropy {
        system: String,
    },
    FuzzyEntropy {
        system: String,
    },
    Normalization {
        system: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DescentRef {
    pub functor: String,
    pub nerve: CoverRef,
}

/// `(name, stage, description)` for every check kind.
pub const CATALOG: &[(&str, usize, &str)] = &[
    ("topology", 0, "isomorphism, composition and pullback-stability axioms of a site's covers"),
    ("hypercover", 0, "levelwise matching-object test of a Čech nerve"),
    ("energy_axioms", 1, "cover, pullback, factorization and tensor axioms of an energy, with gated consequences"),
    ("descent", 2, "F(B) against the equalizer of F(A0) ⇉ F(A1) along a cover"),
    ("brane_coherence", 2, "composite V∘E agrees with V after E on every object and arrow"),
    ("functoriality", 2, "identities and composites preserved on a ring universe"),
    ("derivations", 3, "homotopy fiber of F(A⊕M) → F(A) over a point"),
    ("delta_sampler", 3, "derivation summaries over a list of (A, x, M)"),
    ("tangent", 3, "F(A[ε]) with section and projection, checking the retraction"),
    ("relative_derivations", 3, "homotopy fiber of dσ between derivation spaces"),
    ("uncertainty", 4, "non-contractibility of Der_{V/TV} × Der_E"),
    ("sharp_entropy", 5, "Shannon entropy of the Boltzmann distribution in bits"),
    ("fuzzy_entropy", 5, "entropy of the deviation-smeared distribution by quadrature"),
    ("normalization", 5, "total probability mass of the fuzzy distribution"),
];

impl CheckSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            CheckSpec::Topology { .. } => "topology",
            CheckSpec::Hypercover { .. } => "hypercover",
            CheckSpec::EnergyAxioms { .. } => "energy_axioms",
            CheckSpec::Descent { .. } => "descent",
            CheckSpec::BraneCoherence { .. } => "brane_coherence",
            CheckSpec::Functoriality { .. } => "functoriality",
            CheckSpec::Derivations { .. } => "derivations",
            CheckSpec::DeltaSampler { .. } => "delta_sampler",
            CheckSpec::Tangent { .. } => "tangent",
            CheckSpec::RelativeDerivations { .. } => "relative_derivations",
            CheckSpec::Uncertainty { .. } => "uncertainty",
            CheckSpec::SharpEntropy { .. } => "sharp_entropy",
            CheckSpec::FuzzyEntropy { .. } => "fuzzy_entropy",
            CheckSpec::Normalization { .. } => "normalization",
        }
    }

    /// Position in the run order: topology, energy axioms, consequences,
    /// derivations, uncertainty, entropy.
    pub fn stage(&self) -> usize {
        let kind = self.kind();
        CATALOG.iter().find(|c| c.0 == kind).map(|c| c.1).expect("every kind is catalogued")
    }

    pub fn subject(&self) -> String {
        match self {
            CheckSpec::Topology { site } => site.clone(),
            CheckSpec::Hypercover { nerve } => format!("{}:{}", nerve.site, nerve.cover),
            CheckSpec::EnergyAxioms { energy, .. } => energy.clone(),
            CheckSpec::Descent { functor, nerve } => format!("{functor} along {}", nerve.cover),
            CheckSpec::BraneCoherence { brane, .. } => brane.clone(),
            CheckSpec::Functoriality { functor, .. } => functor.clone(),
            CheckSpec::Derivations { functor, at, .. } | CheckSpec::RelativeDerivations { functor, at, .. } => {
                format!("{functor} at ({}, {})", at.ring, at.module)
            }
            CheckSpec::DeltaSampler { functor, .. } => functor.clone(),
            CheckSpec::Tangent { functor, ring, .. } => format!("{functor} at {ring}"),
            CheckSpec::Uncertainty { brane, .. } => brane.clone(),
            CheckSpec::SharpEntropy { system } | CheckSpec::FuzzyEntropy { system } | CheckSpec::Normalization { system } => {
                system.clone()
            }
        }
    }
}

/// Outcome of one check before it is placed in the report.
pub struct Outcome {
    pub status: Status,
    pub summary: String,
    pub detail: Value,
}

fn outcome(status: Status, summary: impl Into<String>, detail: impl Serialize) -> Result<Outcome> {
    Ok(Outcome {
        status,
        summary: summary.into(),
        detail: serde_json::to_value(detail).map_err(|e| Error::Invalid(e.to_string()))?,
    })
}

fn from_verdict(v: &Verdict, pass: &str) -> (Status, String) {
    let summary = match &v.witness {
        Some(w) => w.clone(),
        None => pass.to_string(),
    };
    (v.status, summary)
}

fn resolve_point(f: &Arc<EvaluableFunctor>, u: &Universe, at: &DerivationRef, limits: &Limits) -> Result<PointedEvaluation> {
    let ring = u.ring(&at.ring)?.clone();
    match &at.point {
        PointRef::Index(i) => PointedEvaluation::new(f.clone(), ring, *i, limits),
        PointRef::Label(l) => PointedEvaluation::by_label(f.clone(), ring, l, limits),
    }
}

fn cover_nerve(u: &Universe, nerve: &CoverRef, limits: &Limits) -> Result<(Arc<FiniteSite>, crate::site::SimplicialObject)> {
    let site = u.site(&nerve.site)?.clone();
    let f = site
        .category()
        .morphism_id(&nerve.cover)
        .ok_or_else(|| Error::Parse(format!("unknown morphism `{}` in site {}", nerve.cover, nerve.site)))?;
    let x = cech_nerve(&site, f, nerve.levels, limits)?;
    Ok((site, x))
}

fn fuzz_for(u: &Universe, name: &str, limits: &Limits) -> Result<(crate::entropy::StateSystem, FuzzConfig)> {
    let (sys, fuzz) = u.system(name)?;
    Ok((sys.clone(), fuzz.clone().unwrap_or_else(|| FuzzConfig::from_limits(limits))))
}

/// Runs one check. `Err` means the check could not be asked.
pub fn execute(check: &CheckSpec, u: &Universe, seed: u64, limits: &Limits) -> Result<Outcome> {
    match check {
        CheckSpec::Topology { site } => {
            let r = u.site(site)?.check_topology_axioms(limits)?;
            match r.first_failure() {
                None => outcome(Status::Pass, "all three axioms hold", &r),
                Some((axiom, v)) => {
                    let (status, w) = from_verdict(v, "");
                    outcome(status, format!("{axiom}: {w}"), &r)
                }
            }
        }
        CheckSpec::Hypercover { nerve } => {
            let (_, x) = cover_nerve(u, nerve, limits)?;
            let r = is_hypercover(&x, nerve.levels, limits)?;
            let (status, summary) = from_verdict(&r.overall, "every level is a cover");
            outcome(status, summary, &r)
        }
        CheckSpec::EnergyAxioms { energy, samples, descent } => {
            let e = u.energy(energy)?;
            let descent = match descent {
                None => None,
                Some(d) => {
                    let (_, x) = cover_nerve(u, &d.nerve, limits)?;
                    Some(check_descent(u.functor(&d.functor)?, &x, limits)?.verdict)
                }
            };
            let cfg = SampleConfig {
                seed: samples.seed.wrapping_add(seed),
                ..*samples
            };
            let r = check_energy(e, &cfg, descent, limits)?;
            let failures = r.failures();
            let intended = e.intended_fault().map(str::to_string);
            let matches_intended = intended.as_ref().map(|i| failures.len() == 1 && failures[0] == i.as_str());
            let status = if failures.is_empty() && r.consequence_violations.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            };
            let summary = if failures.is_empty() {
                "every axiom holds".to_string()
            } else {
                let first = r.verdicts().into_iter().find(|(_, v)| v.failed()).expect("a failure");
                format!("{} failed: {}", first.0, first.1.witness.clone().unwrap_or_default())
            };
            outcome(
                status,
                summary,
                json!({
                    "report": r,
                    "failures": failures,
                    "intended_fault": intended,
                    "matches_intended": matches_intended,
                }),
            )
        }
        CheckSpec::Descent { functor, nerve } => {
            let (_, x) = cover_nerve(u, nerve, limits)?;
            let r = check_descent(u.functor(functor)?, &x, limits)?;
            let (status, summary) = from_verdict(&r.verdict, &format!("{} = {}", r.base, r.equalizer));
            outcome(status, summary, &r)
        }
        CheckSpec::BraneCoherence { brane, universe } => {
            let rings = universe.iter().map(|n| u.ring(n).cloned()).collect::<Result<Vec<_>>>()?;
            let r = u.brane(brane)?.check_coherence(&rings, limits)?;
            let status = if r.passed() { Status::Pass } else { Status::Fail };
            let summary = r.violations.first().map(|v| v.detail.clone()).unwrap_or_else(|| "pointwise equal".into());
            outcome(status, summary, &r)
        }
        CheckSpec::Functoriality { functor, universe } => {
            let rings = universe.iter().map(|n| u.ring(n).cloned()).collect::<Result<Vec<_>>>()?;
            let r = u.functor(functor)?.check_functoriality(&rings, limits)?;
            let status = if r.passed() { Status::Pass } else { Status::Fail };
            let summary = r.violations.first().map(|v| v.detail.clone()).unwrap_or_else(|| "functorial".into());
            outcome(status, summary, &r)
        }
        CheckSpec::Derivations { functor, at, expect_pi0 } => {
            let f = u.functor(functor)?;
            let p = resolve_point(f, u, at, limits)?;
            let d = derivations(f, &p.ring, p.point, u.module(&at.module)?, limits)?;
            let s = d.summary();
            expectation(s.pi0, *expect_pi0, "pi0", &s)
        }
        CheckSpec::RelativeDerivations { functor, at, expect_pi0 } => {
            let f = u.functor(functor)?;
            let p = resolve_point(f, u, at, limits)?;
            let d = relative_derivations(f, &p.ring, p.point, u.module(&at.module)?, limits)?;
            let detail = json!({"summary": d.summary(), "kind": d.kind, "verdict": d.verdict});
            expectation(d.pi0(), *expect_pi0, "pi0", &detail)
        }
        CheckSpec::DeltaSampler { functor, samples } => {
            let f = u.functor(functor)?;
            let universe = samples
                .iter()
                .map(|s| {
                    let p = resolve_point(f, u, s, limits)?;
                    Ok(DeltaSample {
                        ring: p.ring,
                        point: p.point,
                        module: u.module(&s.module)?.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let rows = delta_sampler(f, &universe, limits)?;
            outcome(Status::Pass, format!("{} rows", rows.len()), &rows)
        }
        CheckSpec::Tangent {
            functor,
            ring,
            expect_vertices,
        } => {
            let t = tangent(u.functor(functor)?, u.ring(ring)?, limits)?;
            let retracts = t.retraction_holds()?;
            let vertices = t.space.count(0);
            let section_hits: Vec<String> = (0..t.section.source().count(0))
                .map(|v| t.space.vertex_label(t.section.apply(0, v)).to_string())
                .collect();
            let detail = json!({
                "dual_ring": t.dual.total.name(),
                "vertices": vertices,
                "section_image": section_hits,
                "retraction": retracts,
            });
            if !retracts {
                return outcome(Status::Fail, "projection ∘ section is not the identity", &detail);
            }
            expectation(vertices, *expect_vertices, "vertices", &detail)
        }
        CheckSpec::Uncertainty {
            brane,
            observable_at,
            energy_at,
        } => {
            let b = u.brane(brane)?;
            let v = &b.observable;
            let pv = resolve_point(v, u, observable_at, limits)?;
            let v_side = relative_derivations(v, &pv.ring, pv.point, u.module(&observable_at.module)?, limits)?;
            let e = Arc::new(b.energy.evaluable()?);
            let pe = resolve_point(&e, u, energy_at, limits)?;
            let e_side = derivations(&e, &pe.ring, pe.point, u.module(&energy_at.module)?, limits)?;
            let r = uncertainty_product(&v_side, &e_side)?;
            let status = match r.product.status {
                crate::simplicial::HomotopyStatus::NonContractible => Status::Pass,
                crate::simplicial::HomotopyStatus::Contractible => Status::Fail,
                crate::simplicial::HomotopyStatus::Inconclusive => Status::Inconclusive,
            };
            let summary = match status {
                Status::Pass => format!("product is non-contractible: {}", r.product.witness),
                Status::Fail => format!("product is contractible: {}", r.product.witness),
                _ => r.product.witness.clone(),
            };
            outcome(status, summary, &r)
        }
        CheckSpec::SharpEntropy { system } => {
            let (sys, cfg) = fuzz_for(u, system, limits)?;
            let r = sharp_entropy(&sys)?;
            entropy_outcome(r, cfg.tolerance)
        }
        CheckSpec::FuzzyEntropy { system } => {
            let (sys, cfg) = fuzz_for(u, system, limits)?;
            let r = fuzzy_entropy(&sys, &cfg)?;
            entropy_outcome(r, cfg.tolerance)
        }
        CheckSpec::Normalization { system } => {
            let (sys, cfg) = fuzz_for(u, system, limits)?;
            let residual = normalization_check(&sys, &cfg)?;
            let status = if residual <= cfg.tolerance { Status::Pass } else { Status::Fail };
            outcome(
                status,
                format!("residual {residual:e}"),
                json!({"residual": residual, "tolerance": cfg.tolerance}),
            )
        }
    }
}

fn expectation(actual: usize, expected: Option<usize>, what: &str, detail: impl Serialize) -> Result<Outcome> {
    match expected {
        Some(e) if e != actual => outcome(Status::Fail, format!("{what} = {actual}, expected {e}"), detail),
        _ => outcome(Status::Pass, format!("{what} = {actual}"), detail),
    }
}

fn entropy_outcome(r: crate::entropy::EntropyReport, tolerance: f64) -> Result<Outcome> {
    let status = if r.residual <= tolerance { Status::Pass } else { Status::Fail };
    outcome(status, format!("S = {} bits, residual {:e}", r.entropy_bits, r.residual), &r)
}
