//! The energy axiom suite. Derived checks run only after the axioms their
//! argument uses have passed.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::category::FiniteCategory;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::report::{Status, Verdict};
use crate::simplicial::{build, SimplicialSet};
use crate::site::limits::{is_limit, Cone, Diagram};
use crate::site::{cech_nerve, cotensor_level, is_hypercover, tensor, FiniteSite, SimplicialObject};

use super::energy::EnergyFunctor;

/// Bounds the `(K, A_*)` pairs used by the equivariance and exponential
/// checks. `count = 0` keeps every pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub count: usize,
    pub seed: u64,
    /// Top level of the simplicial samples and of the hypercover checks.
    pub level: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            count: 0,
            seed: 0,
            level: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub energy: String,
    pub source_topology: Verdict,
    pub target_topology: Verdict,
    pub preserves_covers: Verdict,
    pub reflects_covers: Verdict,
    pub preserves_pullbacks: Verdict,
    pub preserves_factorizations: Verdict,
    pub setdelta_equivariance: Verdict,
    pub exponential_lemma: Verdict,
    pub preserves_hfp: Verdict,
    pub preserves_hypercovers: Verdict,
    pub topology_transport: Verdict,
    pub descent: Verdict,
    /// Derived checks that failed although their prerequisites passed.
    pub consequence_violations: Vec<String>,
}

impl AxiomReport {
    /// `(name, verdict)` in report order.
    pub fn verdicts(&self) -> Vec<(&'static str, &Verdict)> {
        vec![
            ("source_topology", &self.source_topology),
            ("target_topology", &self.target_topology),
            ("preserves_covers", &self.preserves_covers),
            ("reflects_covers", &self.reflects_covers),
            ("preserves_pullbacks", &self.preserves_pullbacks),
            ("preserves_factorizations", &self.preserves_factorizations),
            ("setdelta_equivariance", &self.setdelta_equivariance),
            ("exponential_lemma", &self.exponential_lemma),
            ("preserves_hfp", &self.preserves_hfp),
            ("preserves_hypercovers", &self.preserves_hypercovers),
            ("topology_transport", &self.topology_transport),
            ("descent", &self.descent),
        ]
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.verdicts().into_iter().filter(|(_, v)| v.failed()).map(|(n, _)| n).collect()
    }
}

fn isomorphic(c: &FiniteCategory, a: usize, b: usize) -> bool {
    c.hom(a, b).iter().any(|&f| c.is_iso(f))
}

/// `Incomplete` becomes an inconclusive verdict; other errors propagate.
fn soften(r: Result<Verdict>) -> Result<Verdict> {
    match r {
        Err(Error::Incomplete(msg)) => Ok(Verdict::inconclusive(msg)),
        other => other,
    }
}

fn gate(prereqs: &[(&str, &Verdict)]) -> Option<Verdict> {
    prereqs
        .iter()
        .find(|(_, v)| !v.passed())
        .map(|(name, v)| {
            let state = match v.status {
                Status::Fail => "failed",
                Status::Inconclusive => "was inconclusive",
                _ => "was skipped",
            };
            Verdict::skipped(format!("prerequisite {name} {state}"))
        })
}

fn topology_verdict(site: &FiniteSite, limits: &Limits) -> Result<Verdict> {
    soften(site.check_topology_axioms(limits).map(|r| match r.first_failure() {
        None => Verdict::pass(),
        Some((axiom, v)) => Verdict::fail(format!("{axiom}: {}", v.witness.clone().unwrap_or_default())),
    }))
}

pub fn check_preserves_covers(e: &EnergyFunctor) -> Verdict {
    let (s, t) = (e.source(), e.target());
    let c = s.category();
    for u in 0..c.object_count() {
        for fam in s.covers(u) {
            let image: Vec<usize> = fam.iter().map(|&f| e.morphism(f)).collect();
            if !t.is_cover(e.object(u), &image) {
                return Verdict::fail(format!(
                    "cover {} of {} maps to {}, not a cover of {}",
                    s.family_names(fam),
                    c.objects()[u],
                    t.family_names(&image),
                    t.category().objects()[e.object(u)]
                ));
            }
        }
    }
    Verdict::pass()
}

/// Every family into `u` whose image covers `E(u)` must cover `u`.
pub fn check_reflects_covers(e: &EnergyFunctor, limits: &Limits) -> Result<Verdict> {
    let (s, t) = (e.source(), e.target());
    let c = s.category();
    let mut visited = 0usize;
    for u in 0..c.object_count() {
        let into = c.into_object(u);
        if into.len() > 20 {
            return Err(Error::cap(format!("arrows into {}", c.objects()[u]), 20, into.len()));
        }
        for bits in 0..1usize << into.len() {
            visited += 1;
            if visited > limits.combination_cap {
                return Err(Error::cap("reflected family scan", limits.combination_cap, visited));
            }
            let fam: Vec<usize> = (0..into.len()).filter(|i| bits >> i & 1 == 1).map(|i| into[i]).collect();
            let image: Vec<usize> = fam.iter().map(|&f| e.morphism(f)).collect();
            if t.is_cover(e.object(u), &image) && !s.is_cover(u, &fam) {
                return Ok(Verdict::fail(format!(
                    "{} covers {} but {} does not cover {}",
                    t.family_names(&image),
                    t.category().objects()[e.object(u)],
                    s.family_names(&fam),
                    c.objects()[u]
                )));
            }
        }
    }
    Ok(Verdict::pass())
}

pub fn check_preserves_pullbacks(e: &EnergyFunctor, limits: &Limits) -> Result<Verdict> {
    let (s, t) = (e.source(), e.target());
    let (c, d) = (s.category(), t.category());
    for ((f, g), cone) in s.available_pullbacks(limits)? {
        let (ef, eg) = (e.morphism(f), e.morphism(g));
        let image = Cone {
            apex: e.object(cone.apex),
            legs: cone.legs.iter().map(|&l| e.morphism(l)).collect(),
        };
        if !is_limit(d, &Diagram::cospan(d, ef, eg), &image, limits)? {
            let actual = match t.pullback(ef, eg, limits) {
                Ok(p) => d.objects()[p.apex].clone(),
                Err(_) => "none".into(),
            };
            return Ok(Verdict::fail(format!(
                "cospan ({}, {}): pullback {} maps to {}, but the pullback of ({}, {}) is {}",
                c.morphism(f).name,
                c.morphism(g).name,
                c.objects()[cone.apex],
                d.objects()[image.apex],
                d.morphism(ef).name,
                d.morphism(eg).name,
                actual
            )));
        }
    }
    Ok(Verdict::pass())
}

pub fn check_preserves_factorizations(e: &EnergyFunctor) -> Verdict {
    let (s, t) = (e.source(), e.target());
    let (c, d) = (s.category(), t.category());
    for f in 0..c.morphism_count() {
        let fac = s.factorization(f);
        let expected = t.factorization(e.morphism(f));
        let image = (e.object(fac.middle), e.morphism(fac.left), e.morphism(fac.right));
        if image != (expected.middle, expected.left, expected.right) {
            return Verdict::fail(format!(
                "{} factors through {}; its image {} factors through {}, not {}",
                c.morphism(f).name,
                c.objects()[fac.middle],
                d.morphism(e.morphism(f)).name,
                d.objects()[expected.middle],
                d.objects()[image.0]
            ));
        }
    }
    Verdict::pass()
}

/// Deterministic `(K, A_*)` pairs: a few finite simplicial sets against
/// constant objects and Čech nerves of singleton covers.
pub fn samples(site: &Arc<FiniteSite>, config: &SampleConfig, limits: &Limits) -> Result<Vec<(Arc<SimplicialSet>, SimplicialObject)>> {
    let level = config.level.min(limits.max_dim);
    let ks: Vec<Arc<SimplicialSet>> = vec![
        Arc::new(build::simplex(0, level, limits)?.renamed("Δ0")),
        Arc::new(build::boundary(1, level, limits)?.renamed("∂Δ1")),
        Arc::new(build::simplex(1, level, limits)?.renamed("Δ1")),
        Arc::new(build::discrete(vec!["p".into(), "q".into()], level).renamed("2pt")),
        Arc::new(build::boundary(2, level, limits)?.renamed("∂Δ2")),
    ];
    let mut objects = Vec::new();
    let c = site.category();
    for o in 0..c.object_count() {
        objects.push(SimplicialObject::constant(site.clone(), o, level, Some((o, c.identity(o))))?);
    }
    for f in cover_maps(site) {
        match cech_nerve(site, f, level, limits) {
            Ok(x) => objects.push(x),
            Err(Error::Incomplete(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let mut pairs: Vec<(Arc<SimplicialSet>, SimplicialObject)> = objects
        .iter()
        .flat_map(|a| ks.iter().map(move |k| (k.clone(), a.clone())))
        .collect();
    if config.count > 0 && config.count < pairs.len() {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        pairs.shuffle(&mut rng);
        pairs.truncate(config.count);
    }
    Ok(pairs)
}

/// Non-identity morphisms forming a singleton cover.
fn cover_maps(site: &FiniteSite) -> Vec<usize> {
    let c = site.category();
    let mut out: Vec<usize> = (0..c.object_count())
        .flat_map(|u| site.covers(u).iter().filter(|f| f.len() == 1).map(|f| f[0]))
        .filter(|&f| !c.is_identity(f))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn check_setdelta_equivariance(
    e: &EnergyFunctor,
    samples: &[(Arc<SimplicialSet>, SimplicialObject)],
    limits: &Limits,
) -> Result<Verdict> {
    let d = e.target().category();
    let results: Vec<Verdict> = samples
        .par_iter()
        .map(|(k, a)| {
            soften((|| {
                let lhs = e.image(&tensor(k, a, limits)?)?;
                let rhs = tensor(k, &e.image(a)?, limits)?;
                for n in 0..=lhs.dim().min(rhs.dim()) {
                    if !isomorphic(d, lhs.object(n), rhs.object(n)) {
                        return Ok(Verdict::fail(format!(
                            "{} ⊗ {} at level {n}: E gives {}, tensoring the image gives {}",
                            k.name(),
                            a.name(),
                            d.objects()[lhs.object(n)],
                            d.objects()[rhs.object(n)]
                        )));
                    }
                }
                Ok(Verdict::pass())
            })())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(first_problem(results))
}

fn first_problem(results: Vec<Verdict>) -> Verdict {
    if let Some(v) = results.iter().find(|v| v.failed()) {
        return v.clone();
    }
    if let Some(v) = results.iter().find(|v| v.status == Status::Inconclusive) {
        return v.clone();
    }
    Verdict::pass()
}

pub fn check_exponential_lemma(
    e: &EnergyFunctor,
    samples: &[(Arc<SimplicialSet>, SimplicialObject)],
    limits: &Limits,
) -> Result<Verdict> {
    let d = e.target().category();
    let results: Vec<Verdict> = samples
        .par_iter()
        .map(|(k, a)| {
            soften((|| {
                let lhs = e.object(cotensor_level(a, k, limits)?.apex);
                let rhs = cotensor_level(&e.image(a)?, k, limits)?.apex;
                Ok(if isomorphic(d, lhs, rhs) {
                    Verdict::pass()
                } else {
                    Verdict::fail(format!(
                        "{}^{}: E gives {}, the image cotensor is {}",
                        a.name(),
                        k.name(),
                        d.objects()[lhs],
                        d.objects()[rhs]
                    ))
                })
            })())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(first_problem(results))
}

/// `E(X ×^h_Z M) ≅ EX ×^h_{EZ} EM` with `×^h` the pullback along the right
/// half of the declared factorization of `M → Z`.
pub fn check_preserves_hfp(e: &EnergyFunctor, limits: &Limits) -> Result<Verdict> {
    let (s, t) = (e.source(), e.target());
    let (c, d) = (s.category(), t.category());
    let mut results = Vec::new();
    for ((f, g), _) in s.available_pullbacks(limits)? {
        results.push(soften((|| {
            let r = s.factorization(g).right;
            let p = s.pullback(f, r, limits)?;
            let tr = t.factorization(e.morphism(g)).right;
            let q = t.pullback(e.morphism(f), tr, limits)?;
            Ok(if isomorphic(d, e.object(p.apex), q.apex) {
                Verdict::pass()
            } else {
                Verdict::fail(format!(
                    "cospan ({}, {}): E of the homotopy fiber product is {}, the product of images is {}",
                    c.morphism(f).name,
                    c.morphism(g).name,
                    d.objects()[e.object(p.apex)],
                    d.objects()[q.apex]
                ))
            })
        })())?);
    }
    Ok(first_problem(results))
}

/// Čech nerves of singleton covers stay hypercovers under `E` at every level
/// where the source passes.
pub fn check_preserves_hypercovers(e: &EnergyFunctor, level: usize, limits: &Limits) -> Result<Verdict> {
    let s = e.source();
    let level = level.min(limits.max_dim);
    let mut results = Vec::new();
    for f in cover_maps(s) {
        let x = match cech_nerve(s, f, level, limits) {
            Ok(x) => x,
            Err(Error::Incomplete(_)) => continue,
            Err(err) => return Err(err),
        };
        let before = is_hypercover(&x, level, limits)?;
        let after = is_hypercover(&e.image(&x)?, level, limits)?;
        for (b, a) in before.levels.iter().zip(&after.levels) {
            if b.verdict.passed() && !a.verdict.passed() {
                let v = if a.verdict.failed() {
                    Verdict::fail(format!(
                        "{} at level {}: {}",
                        x.name(),
                        a.level,
                        a.verdict.witness.clone().unwrap_or_default()
                    ))
                } else {
                    Verdict::inconclusive(format!("{} at level {}: image undecided", x.name(), a.level))
                };
                results.push(v);
                break;
            }
        }
    }
    Ok(first_problem(results))
}

/// The image cover assignment satisfies the topology axioms.
pub fn check_topology_transport(e: &EnergyFunctor, limits: &Limits) -> Result<Verdict> {
    let image = e.image_site(limits)?;
    topology_verdict(&image, limits)
}

/// Runs the suite in dependency order.
pub fn check_energy(e: &EnergyFunctor, config: &SampleConfig, descent: Option<Verdict>, limits: &Limits) -> Result<AxiomReport> {
    let source_topology = topology_verdict(e.source(), limits)?;
    let target_topology = topology_verdict(e.target(), limits)?;
    let topologies = [("source_topology", &source_topology), ("target_topology", &target_topology)];
    let (preserves_covers, reflects_covers) = match gate(&topologies) {
        Some(skip) => (skip.clone(), skip),
        None => (check_preserves_covers(e), check_reflects_covers(e, limits)?),
    };
    let preserves_pullbacks = check_preserves_pullbacks(e, limits)?;
    let preserves_factorizations = check_preserves_factorizations(e);
    let pairs = samples(e.source(), config, limits)?;
    let setdelta_equivariance = check_setdelta_equivariance(e, &pairs, limits)?;

    let exponential_lemma = match gate(&[("setdelta_equivariance", &setdelta_equivariance)]) {
        Some(skip) => skip,
        None => check_exponential_lemma(e, &pairs, limits)?,
    };
    let preserves_hfp = match gate(&[
        ("preserves_pullbacks", &preserves_pullbacks),
        ("preserves_factorizations", &preserves_factorizations),
    ]) {
        Some(skip) => skip,
        None => check_preserves_hfp(e, limits)?,
    };
    let preserves_hypercovers = match gate(&[
        ("preserves_covers", &preserves_covers),
        ("preserves_hfp", &preserves_hfp),
        ("setdelta_equivariance", &setdelta_equivariance),
    ]) {
        Some(skip) => skip,
        None => check_preserves_hypercovers(e, config.level, limits)?,
    };
    let topology_transport = match gate(&[
        ("preserves_covers", &preserves_covers),
        ("reflects_covers", &reflects_covers),
        ("preserves_pullbacks", &preserves_pullbacks),
    ]) {
        Some(skip) => skip,
        None => check_topology_transport(e, limits)?,
    };
    let descent = descent.unwrap_or_else(|| Verdict::skipped("no descent sample"));

    let mut consequence_violations = Vec::new();
    for (name, v) in [
        ("exponential_lemma", &exponential_lemma),
        ("preserves_hfp", &preserves_hfp),
        ("preserves_hypercovers", &preserves_hypercovers),
        ("topology_transport", &topology_transport),
    ] {
        if v.failed() {
            consequence_violations.push(format!("{name} failed with its prerequisites passing"));
        }
    }
    Ok(AxiomReport {
        energy: e.name().to_string(),
        source_topology,
        target_topology,
        preserves_covers,
        reflects_covers,
        preserves_pullbacks,
        preserves_factorizations,
        setdelta_equivariance,
        exponential_lemma,
        preserves_hfp,
        preserves_hypercovers,
        topology_transport,
        descent,
        consequence_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::{Factorization, PullbackMode, Topology};

    fn site(points: &[&str], topology: Topology) -> Arc<FiniteSite> {
        let c = Arc::new(FiniteCategory::powerset(points).unwrap());
        Arc::new(
            FiniteSite::new("P", c, Some(points.len()), PullbackMode::Auto, Vec::new(), &topology, Vec::new(), &Limits::default())
                .unwrap(),
        )
    }

    fn run(e: &EnergyFunctor) -> AxiomReport {
        check_energy(e, &SampleConfig::default(), None, &Limits::default()).unwrap()
    }

    fn statuses(r: &AxiomReport) -> Vec<(&'static str, Status)> {
        r.verdicts().into_iter().map(|(n, v)| (n, v.status)).collect()
    }

    #[test]
    fn identity_energy_passes_everything() {
        for t in [Topology::Trivial, Topology::Union, Topology::Closed(0b10)] {
            let e = EnergyFunctor::identity(site(&["a", "b"], t.clone()));
            let r = run(&e);
            for (name, v) in r.verdicts() {
                if name != "descent" {
                    assert!(v.passed(), "{t:?} {name}: {v:?}");
                }
            }
            assert!(r.consequence_violations.is_empty());
        }
    }

    #[test]
    fn collapsing_covers_fails_preservation() {
        let (s, t) = (site(&["a", "b"], Topology::Union), site(&["a", "b"], Topology::Trivial));
        let e = EnergyFunctor::from_object_map("collapse", s, t, vec![0, 1, 2, 3]).unwrap();
        let r = run(&e);
        assert_eq!(r.failures(), vec!["preserves_covers"], "{:?}", statuses(&r));
        assert!(r.preserves_covers.witness.as_ref().unwrap().contains("not a cover"));
        assert_eq!(r.preserves_hypercovers.status, Status::Skipped);
        assert!(r.preserves_hypercovers.witness.as_ref().unwrap().contains("preserves_covers"));
    }

    #[test]
    fn more_covers_downstream_fails_reflection() {
        let (s, t) = (site(&["a", "b"], Topology::Union), site(&["a", "b"], Topology::Closed(0b10)));
        let e = EnergyFunctor::from_object_map("more", s, t, vec![0, 1, 2, 3]).unwrap();
        let r = run(&e);
        assert!(r.preserves_covers.passed());
        assert_eq!(r.failures(), vec!["reflects_covers"], "{:?}", statuses(&r));
    }

    #[test]
    fn meet_breaking_map_fails_pullbacks() {
        // {a} ∩ {b} = {} but {a,c} ∩ {b,c} = {c}
        let (s, t) = (site(&["a", "b"], Topology::Trivial), site(&["a", "b", "c"], Topology::Trivial));
        let e = EnergyFunctor::from_object_map("meet", s, t, vec![0, 0b101, 0b110, 0b111]).unwrap();
        let r = run(&e);
        assert_eq!(r.failures(), vec!["preserves_pullbacks"], "{:?}", statuses(&r));
        assert_eq!(r.preserves_hfp.status, Status::Skipped);
        assert!(r.preserves_hfp.witness.as_ref().unwrap().contains("preserves_pullbacks"));
    }

    #[test]
    fn meet_preserving_lattice_map_passes() {
        // S ↦ S ∪ {c} preserves intersections
        let (s, t) = (site(&["a", "b"], Topology::Trivial), site(&["a", "b", "c"], Topology::Trivial));
        let e = EnergyFunctor::from_object_map("shift", s, t, vec![0b100, 0b101, 0b110, 0b111]).unwrap();
        let r = run(&e);
        assert!(r.preserves_pullbacks.passed());
        assert!(r.preserves_hfp.passed());
        assert!(r.preserves_hypercovers.passed(), "{:?}", r.preserves_hypercovers);
    }

    #[test]
    fn mismatched_factorization_is_witnessed() {
        let c = Arc::new(FiniteCategory::powerset(&["a", "b"]).unwrap());
        let s = site(&["a", "b"], Topology::Trivial);
        let f = c.hom(1, 3)[0];
        let fac = Factorization {
            middle: 3,
            left: f,
            right: c.identity(3),
        };
        let t = Arc::new(
            FiniteSite::new("Q", c, Some(2), PullbackMode::Auto, Vec::new(), &Topology::Trivial, vec![(f, fac)], &Limits::default())
                .unwrap(),
        );
        let e = EnergyFunctor::from_object_map("fac", s, t, vec![0, 1, 2, 3]).unwrap();
        let r = run(&e);
        assert_eq!(r.failures(), vec!["preserves_factorizations"], "{:?}", statuses(&r));
    }

    #[test]
    fn coproduct_breaking_map_fails_equivariance() {
        // constant at 1: E(1 ⊔ 1) = 1 but E1 ⊔ E1 = 2
        let c = Arc::new(FiniteCategory::finite_sets(2).unwrap());
        let s = Arc::new(
            FiniteSite::new("Fin", c.clone(), None, PullbackMode::Search, Vec::new(), &Topology::Trivial, Vec::new(), &Limits::default())
                .unwrap(),
        );
        let one = c.object_id("1").unwrap();
        let morphisms = vec![c.identity(one); c.morphism_count()];
        let e = EnergyFunctor::new("const", s.clone(), s, vec![one; 3], morphisms).unwrap();
        let pairs = samples(e.source(), &SampleConfig::default(), &Limits::default()).unwrap();
        let v = check_setdelta_equivariance(&e, &pairs, &Limits::default()).unwrap();
        assert!(v.failed(), "{v:?}");
        assert!(v.witness.unwrap().contains("at level"));
        let r = run(&e);
        assert_eq!(r.exponential_lemma.status, Status::Skipped);
    }

    #[test]
    fn samples_are_seeded() {
        let s = site(&["a", "b"], Topology::Union);
        let cfg = SampleConfig {
            count: 5,
            seed: 7,
            level: 2,
        };
        let names = |v: Vec<(Arc<SimplicialSet>, SimplicialObject)>| {
            v.iter().map(|(k, a)| format!("{}|{}", k.name(), a.name())).collect::<Vec<_>>()
        };
        let a = names(samples(&s, &cfg, &Limits::default()).unwrap());
        let b = names(samples(&s, &cfg, &Limits::default()).unwrap());
        assert_eq!(a.len(), 5);
        assert_eq!(a, b);
    }
}
