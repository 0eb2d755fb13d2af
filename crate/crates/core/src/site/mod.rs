//! Finite sites: finite categories with pullbacks, covering families and
//! factorizations; topology axioms, simplicial objects and hypercovers.
//!
//! Weak equivalences in these models are the isomorphisms, so the homotopy
//! category of a site is the category itself and homotopy fiber products
//! are pullbacks.

mod affine;
pub mod limits;
mod object;
mod spec;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::category::FiniteCategory;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::report::Verdict;

pub use affine::{affine_category, AffineData};
pub use limits::{Cone, Diagram};
pub use object::{cech_nerve, cotensor_level, is_hypercover, tensor, HypercoverReport, LevelReport, SimplicialObject};
pub use spec::{CategorySpec, DeclaredPullback, FactorizationSpec, PullbackSpec, SiteSpec, TopologySpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PullbackMode {
    /// Every cospan is resolved by search when the site is built.
    Auto,
    /// Cospans are resolved by search on demand.
    Search,
    /// Only the listed pullbacks exist.
    Declared,
}

/// `f = right ∘ left` through `middle`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub middle: usize,
    pub left: usize,
    pub right: usize,
}

/// Cover assignments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    /// Singleton families of isomorphisms.
    Trivial,
    /// Every nonempty family.
    Indiscrete,
    /// On a powerset: families whose sources have union the target.
    Union,
    /// On a powerset: `{U_i → U}` covers when `U ⊆ W ∪ ⋃ U_i` (bitmask `W`).
    Closed(usize),
    /// Explicit families per object.
    Listed(Vec<Vec<Vec<usize>>>),
}

#[derive(Clone, Debug)]
pub struct FiniteSite {
    name: String,
    category: Arc<FiniteCategory>,
    mode: PullbackMode,
    pullbacks: HashMap<(usize, usize), Cone>,
    covers: Vec<Vec<Vec<usize>>>,
    factorizations: Vec<Factorization>,
    powerset: Option<usize>,
    affine: Option<Arc<AffineData>>,
}

const MAX_FAMILY_SCAN: usize = 16;

impl FiniteSite {
    /// `powerset` is the number of points when the category is a powerset
    /// (object `i` the subset with bitmask `i`).
    pub fn new(
        name: impl Into<String>,
        category: Arc<FiniteCategory>,
        powerset: Option<usize>,
        mode: PullbackMode,
        declared: Vec<((usize, usize), Cone)>,
        topology: &Topology,
        factorizations: Vec<(usize, Factorization)>,
        limits: &Limits,
    ) -> Result<Self> {
        let name = name.into();
        let report = category.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::Invalid(format!("site {name}: {} at {:?}", v.rule, v.witness)));
        }
        let c = &category;
        let mut pullbacks = HashMap::new();
        for ((f, g), cone) in declared {
            if c.target(f) != c.target(g) {
                return Err(Error::Invalid(format!(
                    "declared pullback of {} and {} is not over a cospan",
                    c.morphism(f).name,
                    c.morphism(g).name
                )));
            }
            let typed = cone.legs.len() == 2
                && c.source(cone.legs[0]) == cone.apex
                && c.source(cone.legs[1]) == cone.apex
                && c.target(cone.legs[0]) == c.source(f)
                && c.target(cone.legs[1]) == c.source(g)
                && c.try_compose(f, cone.legs[0]) == c.try_compose(g, cone.legs[1]);
            if !typed {
                return Err(Error::Invalid(format!(
                    "declared pullback of ({}, {}) is not a commuting square",
                    c.morphism(f).name,
                    c.morphism(g).name
                )));
            }
            let d = Diagram::cospan(c, f, g);
            let full = Cone {
                apex: cone.apex,
                legs: vec![cone.legs[0], cone.legs[1], c.try_compose(f, cone.legs[0]).unwrap_or(usize::MAX)],
            };
            if full.legs[2] == usize::MAX || !limits::is_limit(c, &d, &full, limits)? {
                return Err(Error::Invalid(format!(
                    "declared pullback of ({}, {}) fails the universal property",
                    c.morphism(f).name,
                    c.morphism(g).name
                )));
            }
            pullbacks.insert((f, g), full);
        }
        if mode == PullbackMode::Auto {
            for f in 0..c.morphism_count() {
                for g in 0..c.morphism_count() {
                    if c.target(f) == c.target(g) && !pullbacks.contains_key(&(f, g)) {
                        if let Some(cone) = limits::find_limit(c, &Diagram::cospan(c, f, g), limits)? {
                            pullbacks.insert((f, g), cone);
                        }
                    }
                }
            }
        }
        let mut factor_table: Vec<Factorization> = (0..c.morphism_count())
            .map(|f| Factorization {
                middle: c.source(f),
                left: c.identity(c.source(f)),
                right: f,
            })
            .collect();
        for (f, fac) in factorizations {
            if c.try_compose(fac.right, fac.left) != Some(f) || c.target(fac.left) != fac.middle {
                return Err(Error::Invalid(format!("declared factorization of {} does not compose", c.morphism(f).name)));
            }
            factor_table[f] = fac;
        }
        let mut site = FiniteSite {
            name,
            category,
            mode,
            pullbacks,
            covers: Vec::new(),
            factorizations: factor_table,
            powerset,
            affine: None,
        };
        site.covers = site.build_covers(topology)?;
        Ok(site)
    }

    pub(crate) fn with_affine(mut self, data: Arc<AffineData>) -> Self {
        self.affine = Some(data);
        self
    }

    fn build_covers(&self, topology: &Topology) -> Result<Vec<Vec<Vec<usize>>>> {
        let c = &self.category;
        let n = c.object_count();
        let mask_of = |o: usize| -> Result<usize> {
            self.powerset
                .map(|_| o)
                .ok_or_else(|| Error::Precondition(format!("site {} is not a powerset", self.name)))
        };
        let all_subsets = |u: usize, keep: &dyn Fn(&[usize]) -> bool| -> Result<Vec<Vec<usize>>> {
            let into = c.into_object(u);
            if into.len() > MAX_FAMILY_SCAN {
                return Err(Error::cap(
                    format!("families into {}", c.objects()[u]),
                    MAX_FAMILY_SCAN,
                    into.len(),
                ));
            }
            Ok((0..1usize << into.len())
                .map(|bits| (0..into.len()).filter(|i| bits >> i & 1 == 1).map(|i| into[i]).collect::<Vec<_>>())
                .filter(|fam| keep(fam))
                .collect())
        };
        let mut covers = Vec::with_capacity(n);
        for u in 0..n {
            let mut fams = match topology {
                Topology::Trivial => c.into_object(u).into_iter().filter(|&f| c.is_iso(f)).map(|f| vec![f]).collect(),
                Topology::Indiscrete => all_subsets(u, &|fam| !fam.is_empty())?,
                Topology::Union => {
                    let target = mask_of(u)?;
                    all_subsets(u, &|fam| fam.iter().fold(0, |acc, &f| acc | c.source(f)) == target)?
                }
                Topology::Closed(w) => {
                    let target = mask_of(u)?;
                    all_subsets(u, &|fam| target & !(w | fam.iter().fold(0, |acc, &f| acc | c.source(f))) == 0)?
                }
                Topology::Listed(listed) => {
                    let fams = listed.get(u).cloned().unwrap_or_default();
                    for fam in &fams {
                        if let Some(&f) = fam.iter().find(|&&f| c.target(f) != u) {
                            return Err(Error::Invalid(format!(
                                "{} does not land in {}",
                                c.morphism(f).name,
                                c.objects()[u]
                            )));
                        }
                    }
                    fams
                }
            };
            for fam in fams.iter_mut() {
                fam.sort_unstable();
                fam.dedup();
            }
            fams.sort();
            fams.dedup();
            covers.push(fams);
        }
        Ok(covers)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn category(&self) -> &Arc<FiniteCategory> {
        &self.category
    }

    pub fn affine(&self) -> Option<&Arc<AffineData>> {
        self.affine.as_ref()
    }

    pub fn powerset_points(&self) -> Option<usize> {
        self.powerset
    }

    pub fn pullback_mode(&self) -> PullbackMode {
        self.mode
    }

    pub fn covers(&self, u: usize) -> &[Vec<usize>] {
        &self.covers[u]
    }

    pub fn all_covers(&self) -> &[Vec<Vec<usize>>] {
        &self.covers
    }

    /// Whether the family (in any order, duplicates allowed) covers `u`.
    pub fn is_cover(&self, u: usize, family: &[usize]) -> bool {
        let mut fam = family.to_vec();
        fam.sort_unstable();
        fam.dedup();
        self.covers[u].binary_search(&fam).is_ok()
    }

    pub fn factorization(&self, f: usize) -> Factorization {
        self.factorizations[f]
    }

    /// Same category and pullbacks with a different cover assignment.
    pub fn with_covers(&self, name: impl Into<String>, covers: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let mut out = self.clone();
        out.name = name.into();
        out.covers = out.build_covers(&Topology::Listed(covers))?;
        Ok(out)
    }

    /// Pullback of the cospan `(f, g)` as a cone with legs `[p1, p2, f∘p1]`.
    pub fn pullback(&self, f: usize, g: usize, limits: &Limits) -> Result<Cone> {
        let c = &self.category;
        if let Some(cone) = self.pullbacks.get(&(f, g)) {
            return Ok(cone.clone());
        }
        if self.mode == PullbackMode::Search && c.target(f) == c.target(g) {
            if let Some(cone) = limits::find_limit(c, &Diagram::cospan(c, f, g), limits)? {
                return Ok(cone);
            }
        }
        Err(Error::Incomplete(format!(
            "site {} has no pullback of the cospan ({}, {})",
            self.name,
            c.morphism(f).name,
            c.morphism(g).name
        )))
    }

    /// Every cospan with a known pullback, in cospan order. On search
    /// sites each cospan is tried.
    pub fn available_pullbacks(&self, limits: &Limits) -> Result<Vec<((usize, usize), Cone)>> {
        let c = &self.category;
        let mut out: Vec<((usize, usize), Cone)> = match self.mode {
            PullbackMode::Search => {
                let mut found = Vec::new();
                for f in 0..c.morphism_count() {
                    for g in 0..c.morphism_count() {
                        if c.target(f) == c.target(g) {
                            if let Some(cone) = limits::find_limit(c, &Diagram::cospan(c, f, g), limits)? {
                                found.push(((f, g), cone));
                            }
                        }
                    }
                }
                found
            }
            _ => self.pullbacks.iter().map(|(k, v)| (*k, v.clone())).collect(),
        };
        out.sort_by_key(|(k, _)| *k);
        Ok(out)
    }

    pub fn family_names(&self, family: &[usize]) -> String {
        let names: Vec<&str> = family.iter().map(|&f| self.category.morphism(f).name.as_str()).collect();
        format!("[{}]", names.join(", "))
    }

    /// Isomorphisms cover, covers compose, covers pull back.
    pub fn check_topology_axioms(&self, limits: &Limits) -> Result<TopologyReport> {
        let c = &self.category;
        let mut isomorphisms = Verdict::pass();
        'iso: for f in 0..c.morphism_count() {
            if c.is_iso(f) && !self.is_cover(c.target(f), &[f]) {
                isomorphisms = Verdict::fail(format!("isomorphism {} does not cover {}", c.morphism(f).name, c.objects()[c.target(f)]));
                break 'iso;
            }
        }
        let mut composition = Verdict::pass();
        let mut visited = 0usize;
        'comp: for u in 0..c.object_count() {
            let into = c.into_object(u);
            if into.len() > 64 {
                return Err(Error::cap(format!("arrows into {}", c.objects()[u]), 64, into.len()));
            }
            let bit = |g: usize| 1u64 << into.iter().position(|&h| h == g).expect("composite lands in u");
            for fam in &self.covers[u] {
                // reachable unions of composites, each with one choice of refinements
                let mut reachable: HashMap<u64, Vec<usize>> = HashMap::from([(0, Vec::new())]);
                for &f in fam {
                    let mut options: HashMap<u64, usize> = HashMap::new();
                    for (k, r) in self.covers(c.source(f)).iter().enumerate() {
                        let mask = r.iter().fold(0, |acc, &g| acc | bit(c.compose(f, g)));
                        options.entry(mask).or_insert(k);
                    }
                    let mut next = HashMap::new();
                    for (mask, picks) in &reachable {
                        for (&opt, &k) in &options {
                            visited += 1;
                            if visited > limits.combination_cap {
                                return Err(Error::cap("composite cover scan", limits.combination_cap, visited));
                            }
                            next.entry(mask | opt).or_insert_with(|| {
                                let mut p = picks.clone();
                                p.push(k);
                                p
                            });
                        }
                    }
                    reachable = next;
                }
                let mut masks: Vec<&u64> = reachable.keys().collect();
                masks.sort();
                for mask in masks {
                    let composite: Vec<usize> = (0..into.len()).filter(|i| mask >> i & 1 == 1).map(|i| into[i]).collect();
                    if !self.is_cover(u, &composite) {
                        let picks = &reachable[mask];
                        let refinements: Vec<String> = fam
                            .iter()
                            .zip(picks)
                            .map(|(&f, &k)| self.family_names(&self.covers(c.source(f))[k]))
                            .collect();
                        composition = Verdict::fail(format!(
                            "cover {} of {} refined by [{}] composes to {}, which is not a cover",
                            self.family_names(fam),
                            c.objects()[u],
                            refinements.join("; "),
                            self.family_names(&composite)
                        ));
                        break 'comp;
                    }
                }
            }
        }
        let mut pullback = Verdict::pass();
        'pb: for u in 0..c.object_count() {
            for fam in &self.covers[u] {
                for h in c.into_object(u) {
                    let mut pulled = Vec::with_capacity(fam.len());
                    for &f in fam {
                        pulled.push(self.pullback(f, h, limits)?.legs[1]);
                    }
                    if !self.is_cover(c.source(h), &pulled) {
                        pullback = Verdict::fail(format!(
                            "cover {} of {} pulled back along {} gives {}, which is not a cover",
                            self.family_names(fam),
                            c.objects()[u],
                            c.morphism(h).name,
                            self.family_names(&pulled)
                        ));
                        break 'pb;
                    }
                }
            }
        }
        Ok(TopologyReport {
            site: self.name.clone(),
            isomorphisms,
            composition,
            pullback,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub site: String,
    pub isomorphisms: Verdict,
    pub composition: Verdict,
    pub pullback: Verdict,
}

impl TopologyReport {
    pub fn passed(&self) -> bool {
        self.isomorphisms.passed() && self.composition.passed() && self.pullback.passed()
    }

    pub fn first_failure(&self) -> Option<(&'static str, &Verdict)> {
        [("isomorphisms", &self.isomorphisms), ("composition", &self.composition), ("pullback", &self.pullback)]
            .into_iter()
            .find(|(_, v)| !v.passed())
    }
}
