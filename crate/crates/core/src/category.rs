//! Finite categories given by explicit composition tables, functors between
//! them, and comma categories.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category. Morphism `g ∘ f` is `compose[g * m + f]` when defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    compose: Vec<Option<usize>>,
    homs: Vec<Vec<usize>>,
}

impl FiniteCategory {
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: Vec<Option<usize>>,
    ) -> Result<Self> {
        let (n, m) = (objects.len(), morphisms.len());
        if identities.len() != n || identities.iter().any(|&i| i >= m) {
            return Err(Error::Invalid("one identity per object is required".into()));
        }
        if compose.len() != m * m || compose.iter().flatten().any(|&h| h >= m) {
            return Err(Error::Invalid("composition table has the wrong shape".into()));
        }
        if morphisms.iter().any(|f| f.source >= n || f.target >= n) {
            return Err(Error::Invalid("morphism endpoint outside object set".into()));
        }
        let mut homs = vec![Vec::new(); n * n];
        for (i, f) in morphisms.iter().enumerate() {
            homs[f.source * n + f.target].push(i);
        }
        Ok(FiniteCategory {
            name: name.into(),
            objects,
            morphisms,
            identities,
            compose,
            homs,
        })
    }

    /// Builds from generators: objects, non-identity morphisms and the
    /// composites `(g, f, g∘f)` of composable non-identity pairs.
    /// Identities are added automatically as `id_<object>`.
    pub fn from_parts(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<Morphism>,
        composites: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let n = objects.len();
        let mut morphisms: Vec<Morphism> = (0..n)
            .map(|o| Morphism {
                name: format!("id_{}", objects[o]),
                source: o,
                target: o,
            })
            .collect();
        let identities: Vec<usize> = (0..n).collect();
        morphisms.extend(arrows);
        let m = morphisms.len();
        let mut compose = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                if morphisms[f].target != morphisms[g].source {
                    continue;
                }
                if g < n {
                    compose[g * m + f] = Some(f);
                } else if f < n {
                    compose[g * m + f] = Some(g);
                }
            }
        }
        for &(g, f, h) in composites {
            let (g, f, h) = (g + n, f + n, h + n);
            if g >= m || f >= m || h >= m {
                return Err(Error::Invalid("composite refers to unknown arrow".into()));
            }
            compose[g * m + f] = Some(h);
        }
        Self::new(name, objects, morphisms, identities, compose)
    }

    /// A partial order on `elements`; `leq(x, y)` must be reflexive,
    /// antisymmetric and transitive.
    pub fn poset(
        name: impl Into<String>,
        elements: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let n = elements.len();
        for x in 0..n {
            if !leq(x, x) {
                return Err(Error::Invalid(format!("order is not reflexive at {}", elements[x])));
            }
            for y in 0..n {
                if x != y && leq(x, y) && leq(y, x) {
                    return Err(Error::Invalid(format!(
                        "order is not antisymmetric at {} and {}",
                        elements[x], elements[y]
                    )));
                }
                for z in 0..n {
                    if leq(x, y) && leq(y, z) && !leq(x, z) {
                        return Err(Error::Invalid("order is not transitive".into()));
                    }
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        let mut identities = vec![0; n];
        for x in 0..n {
            for y in 0..n {
                if leq(x, y) {
                    if x == y {
                        identities[x] = morphisms.len();
                    }
                    index.insert((x, y), morphisms.len());
                    morphisms.push(Morphism {
                        name: format!("{}<={}", elements[x], elements[y]),
                        source: x,
                        target: y,
                    });
                }
            }
        }
        let m = morphisms.len();
        let mut compose = vec![None; m * m];
        for (g, mg) in morphisms.iter().enumerate() {
            for (f, mf) in morphisms.iter().enumerate() {
                if mf.target == mg.source {
                    compose[g * m + f] = Some(index[&(mf.source, mg.target)]);
                }
            }
        }
        Self::new(name, elements, morphisms, identities, compose)
    }

    /// Subsets of `points` ordered by inclusion. Object `i` is the subset
    /// whose bitmask is `i`.
    pub fn powerset(points: &[&str]) -> Result<Self> {
        let k = points.len();
        if k > 6 {
            return Err(Error::cap("powerset points", 6, k));
        }
        let names = (0..1usize << k).map(|mask| subset_name(points, mask)).collect();
        Self::poset(format!("P({})", points.join(",")), names, |x, y| x & !y == 0)
    }

    /// One object, morphisms the group elements.
    pub fn group(name: impl Into<String>, labels: Vec<String>, mul: impl Fn(usize, usize) -> usize, identity: usize) -> Result<Self> {
        let m = labels.len();
        let morphisms = labels
            .into_iter()
            .map(|l| Morphism {
                name: l,
                source: 0,
                target: 0,
            })
            .collect();
        let compose = (0..m * m).map(|i| Some(mul(i / m, i % m))).collect();
        Self::new(name, vec!["*".into()], morphisms, vec![identity], compose)
    }

    /// Finite sets `{0..k}` for `k ≤ max` and all functions between them.
    /// Morphism names list the images, e.g. `2:[1,0]`.
    pub fn finite_sets(max: usize) -> Result<Self> {
        if max > 3 {
            return Err(Error::cap("finite set size", 3, max));
        }
        let objects: Vec<String> = (0..=max).map(|k| k.to_string()).collect();
        let mut functions: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for a in 0..=max {
            for b in 0..=max {
                let total = b.pow(a as u32);
                for code in 0..total {
                    let images = (0..a).map(|i| code / b.pow(i as u32) % b).collect();
                    functions.push((a, b, images));
                }
            }
        }
        let index: HashMap<(usize, usize, Vec<usize>), usize> =
            functions.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let morphisms = functions
            .iter()
            .map(|(a, b, images)| Morphism {
                name: format!("{a}->{b}:{images:?}").replace(' ', ""),
                source: *a,
                target: *b,
            })
            .collect();
        let identities = (0..=max).map(|k| index[&(k, k, (0..k).collect())]).collect();
        let m = functions.len();
        let compose = (0..m * m)
            .map(|i| {
                let (g, f) = (&functions[i / m], &functions[i % m]);
                (f.1 == g.0).then(|| index[&(f.0, g.1, f.2.iter().map(|&x| g.2[x]).collect())])
            })
            .collect();
        Self::new(format!("FinSet<={max}"), objects, morphisms, identities, compose)
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_parts(
            format!("disc{n}"),
            (0..n).map(|i| i.to_string()).collect(),
            Vec::new(),
            &[],
        )
        .expect("discrete category")
    }

    pub fn terminal() -> Self {
        Self::discrete(1)
    }

    /// The product category.
    pub fn product(a: &FiniteCategory, b: &FiniteCategory) -> Self {
        let (nb, mb) = (b.object_count(), b.morphism_count());
        let objects = a
            .objects
            .iter()
            .flat_map(|x| b.objects.iter().map(move |y| format!("({x},{y})")))
            .collect();
        let morphisms = a
            .morphisms
            .iter()
            .flat_map(|f| {
                b.morphisms.iter().map(move |g| Morphism {
                    name: format!("({},{})", f.name, g.name),
                    source: f.source * nb + g.source,
                    target: f.target * nb + g.target,
                })
            })
            .collect();
        let identities = (0..a.object_count() * nb)
            .map(|o| a.identities[o / nb] * mb + b.identities[o % nb])
            .collect();
        let m = a.morphism_count() * mb;
        let compose = (0..m * m)
            .map(|i| {
                let (g, f) = (i / m, i % m);
                let ag = a.try_compose(g / mb, f / mb)?;
                let bg = b.try_compose(g % mb, f % mb)?;
                Some(ag * mb + bg)
            })
            .collect();
        Self::new(format!("{}x{}", a.name, b.name), objects, morphisms, identities, compose)
            .expect("product of valid categories")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Full subcategory on `keep` (in that order), with the morphism ids
    /// of the original category for each retained morphism.
    pub fn full_subcategory(&self, keep: &[usize]) -> (FiniteCategory, Vec<usize>) {
        let inside: Vec<bool> = (0..self.object_count()).map(|o| keep.contains(&o)).collect();
        let retained: Vec<usize> = (0..self.morphism_count())
            .filter(|&f| inside[self.source(f)] && inside[self.target(f)])
            .collect();
        self.restrict(keep, retained)
    }

    /// Subcategory on `keep` generated by `generators` (which must stay
    /// inside `keep`) and the identities.
    pub fn subcategory(&self, keep: &[usize], generators: &[usize]) -> Result<(FiniteCategory, Vec<usize>)> {
        let mut members = vec![false; self.morphism_count()];
        for &o in keep {
            members[self.identity(o)] = true;
        }
        for &g in generators {
            if !keep.contains(&self.source(g)) || !keep.contains(&self.target(g)) {
                return Err(Error::Invalid(format!("{} leaves the chosen objects", self.morphisms[g].name)));
            }
            members[g] = true;
        }
        loop {
            let current: Vec<usize> = (0..members.len()).filter(|&f| members[f]).collect();
            let mut grew = false;
            for &g in &current {
                for &f in &current {
                    if let Some(h) = self.try_compose(g, f) {
                        if !members[h] {
                            members[h] = true;
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let retained = (0..members.len()).filter(|&f| members[f]).collect();
        Ok(self.restrict(keep, retained))
    }

    fn restrict(&self, keep: &[usize], retained: Vec<usize>) -> (FiniteCategory, Vec<usize>) {
        let position: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let index: HashMap<usize, usize> = retained.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let morphisms = retained
            .iter()
            .map(|&f| Morphism {
                name: self.morphisms[f].name.clone(),
                source: position[&self.source(f)],
                target: position[&self.target(f)],
            })
            .collect();
        let identities = keep.iter().map(|&o| index[&self.identity(o)]).collect();
        let m = retained.len();
        let compose = (0..m * m)
            .map(|i| self.try_compose(retained[i / m], retained[i % m]).map(|h| index[&h]))
            .collect();
        let objects = keep.iter().map(|&o| self.objects[o].clone()).collect();
        let sub = FiniteCategory::new(format!("{}|sub", self.name), objects, morphisms, identities, compose)
            .expect("subcategory of a valid category");
        (sub, retained)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn source(&self, f: usize) -> usize {
        self.morphisms[f].source
    }

    pub fn target(&self, f: usize) -> usize {
        self.morphisms[f].target
    }

    pub fn object_id(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_id(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|f| f.name == name)
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.source(f)] == f
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a * self.object_count() + b]
    }

    /// Morphisms with the given target.
    pub fn into_object(&self, b: usize) -> Vec<usize> {
        (0..self.morphism_count()).filter(|&f| self.target(f) == b).collect()
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g * self.morphism_count() + f]
    }

    /// `g ∘ f`; panics when not composable.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "{} o {} is undefined in {}",
                self.morphisms[g].name, self.morphisms[f].name, self.name
            )
        })
    }

    /// Composite of a path `f_1, f_2, ...` read left to right (first applied first).
    pub fn compose_path(&self, path: &[usize]) -> Option<usize> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.try_compose(g, acc))
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (a, b) = (self.source(f), self.target(f));
        self.hom(b, a).iter().copied().find(|&g| {
            self.try_compose(g, f) == Some(self.identity(a)) && self.try_compose(f, g) == Some(self.identity(b))
        })
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    pub fn terminal_object(&self) -> Option<usize> {
        (0..self.object_count()).find(|&t| (0..self.object_count()).all(|x| self.hom(x, t).len() == 1))
    }

    pub fn initial_object(&self) -> Option<usize> {
        (0..self.object_count()).find(|&i| (0..self.object_count()).all(|x| self.hom(i, x).len() == 1))
    }

    /// Longest chain of composable non-identity morphisms, or `None` if
    /// arbitrarily long chains exist.
    pub fn chain_bound(&self) -> Option<usize> {
        let n = self.object_count();
        let edges: Vec<(usize, usize)> = (0..self.morphism_count())
            .filter(|&f| !self.is_identity(f))
            .map(|f| (self.source(f), self.target(f)))
            .collect();
        // longest path in the object graph; a cycle means unbounded chains
        let mut longest = vec![0usize; n];
        for _ in 0..=n {
            let mut changed = false;
            for &(s, t) in &edges {
                if longest[s] + 1 > longest[t] {
                    longest[t] = longest[s] + 1;
                    changed = true;
                }
            }
            if !changed {
                return Some(longest.into_iter().max().unwrap_or(0));
            }
        }
        None
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new(format!("category {}", self.name));
        let m = self.morphism_count();
        for f in 0..m {
            let (a, b) = (self.source(f), self.target(f));
            if self.try_compose(self.identity(b), f) != Some(f) || self.try_compose(f, self.identity(a)) != Some(f) {
                report.flag("identity_law", &[f], "identity does not act trivially");
            }
            for g in 0..m {
                let composable = self.target(f) == self.source(g);
                match (composable, self.try_compose(g, f)) {
                    (true, None) => report.flag("composition_total", &[g, f], "composable pair has no composite"),
                    (false, Some(_)) => report.flag("composition_typed", &[g, f], "non-composable pair has a composite"),
                    (true, Some(h)) => {
                        if self.source(h) != self.source(f) || self.target(h) != self.target(g) {
                            report.flag("composition_typed", &[g, f], "composite has wrong endpoints");
                        }
                        for k in 0..m {
                            if self.target(g) != self.source(k) {
                                continue;
                            }
                            let left = self.try_compose(k, g).and_then(|kg| self.try_compose(kg, f));
                            let right = self.try_compose(k, h);
                            if left != right {
                                report.flag("associativity", &[k, g, f], "(kg)f != k(gf)");
                            }
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        report
    }
}

fn subset_name(points: &[&str], mask: usize) -> String {
    let inner: Vec<&str> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| *p)
        .collect();
    format!("{{{}}}", inner.join(","))
}

/// A functor between finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatFunctor {
    pub source: Arc<FiniteCategory>,
    pub target: Arc<FiniteCategory>,
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl CatFunctor {
    pub fn new(
        source: Arc<FiniteCategory>,
        target: Arc<FiniteCategory>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<Self> {
        let f = CatFunctor {
            source,
            target,
            objects,
            morphisms,
        };
        let report = f.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::Invalid(format!("not a functor: {} at {:?}", v.rule, v.witness)));
        }
        Ok(f)
    }

    /// Functor determined by an object map when every target hom-set has at
    /// most one element (posets).
    pub fn from_object_map(
        source: Arc<FiniteCategory>,
        target: Arc<FiniteCategory>,
        objects: Vec<usize>,
    ) -> Result<Self> {
        if objects.len() != source.object_count() {
            return Err(Error::Invalid("object map has the wrong length".into()));
        }
        let morphisms = (0..source.morphism_count())
            .map(|f| {
                let hom = target.hom(objects[source.source(f)], objects[source.target(f)]);
                match hom {
                    [g] => Ok(*g),
                    [] => Err(Error::Invalid(format!(
                        "no morphism for image of {}",
                        source.morphism(f).name
                    ))),
                    _ => Err(Error::Invalid(format!(
                        "image of {} is ambiguous; give a morphism map",
                        source.morphism(f).name
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, objects, morphisms)
    }

    pub fn identity(c: Arc<FiniteCategory>) -> Self {
        CatFunctor {
            objects: (0..c.object_count()).collect(),
            morphisms: (0..c.morphism_count()).collect(),
            source: c.clone(),
            target: c,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let (s, t) = (&self.source, &self.target);
        let mut report = ValidationReport::new(format!("functor {} -> {}", s.name(), t.name()));
        if self.objects.len() != s.object_count() || self.morphisms.len() != s.morphism_count() {
            report.flag("shape", &[], "object or morphism map has the wrong length");
            return report;
        }
        for f in 0..s.morphism_count() {
            let g = self.morphisms[f];
            if t.source(g) != self.objects[s.source(f)] || t.target(g) != self.objects[s.target(f)] {
                report.flag("preserves_endpoints", &[f], "image has wrong endpoints");
            }
        }
        for o in 0..s.object_count() {
            if self.morphisms[s.identity(o)] != t.identity(self.objects[o]) {
                report.flag("preserves_identities", &[o], "identity not sent to identity");
            }
        }
        for g in 0..s.morphism_count() {
            for f in 0..s.morphism_count() {
                if let Some(h) = s.try_compose(g, f) {
                    if t.try_compose(self.morphisms[g], self.morphisms[f]) != Some(self.morphisms[h]) {
                        report.flag("preserves_composition", &[g, f], "F(gf) != F(g)F(f)");
                    }
                }
            }
        }
        report
    }

    pub fn then(&self, other: &CatFunctor) -> CatFunctor {
        CatFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            objects: self.objects.iter().map(|&o| other.objects[o]).collect(),
            morphisms: self.morphisms.iter().map(|&f| other.morphisms[f]).collect(),
        }
    }
}

/// The comma category `(F ↓ d)`: objects `(c, φ: F c → d)`, morphisms
/// `g: c → c'` with `φ' ∘ F g = φ`.
#[derive(Clone, Debug)]
pub struct Comma {
    pub category: Arc<FiniteCategory>,
    /// `(c, φ)` per object
    pub objects: Vec<(usize, usize)>,
    /// `(g, source object, target object)` per morphism
    pub morphisms: Vec<(usize, usize, usize)>,
    pub basepoint: usize,
    pub basepoint_identity: usize,
}

impl Comma {
    pub fn new(f: &CatFunctor, d: usize) -> Result<Self> {
        let (c, t) = (&f.source, &f.target);
        if d >= t.object_count() {
            return Err(Error::Precondition("basepoint is not an object of the target".into()));
        }
        let objects: Vec<(usize, usize)> = (0..c.object_count())
            .flat_map(|x| t.hom(f.objects[x], d).iter().map(move |&phi| (x, phi)))
            .collect();
        let mut morphisms = Vec::new();
        for (i, &(x, phi)) in objects.iter().enumerate() {
            for (j, &(y, psi)) in objects.iter().enumerate() {
                for &g in c.hom(x, y) {
                    if t.try_compose(psi, f.morphisms[g]) == Some(phi) {
                        morphisms.push((g, i, j));
                    }
                }
            }
        }
        let index: HashMap<(usize, usize, usize), usize> =
            morphisms.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let m = morphisms.len();
        let mut compose = vec![None; m * m];
        for (gi, &(g, gs, gt)) in morphisms.iter().enumerate() {
            for (fi, &(h, hs, ht)) in morphisms.iter().enumerate() {
                if ht == gs {
                    compose[gi * m + fi] = index.get(&(c.compose(g, h), hs, gt)).copied();
                }
            }
        }
        let identities = objects
            .iter()
            .enumerate()
            .map(|(i, &(x, _))| index[&(c.identity(x), i, i)])
            .collect();
        let object_names = objects
            .iter()
            .map(|&(x, phi)| format!("({},{})", c.objects()[x], t.morphism(phi).name))
            .collect();
        let arrows = morphisms
            .iter()
            .map(|&(g, s, tt)| Morphism {
                name: format!("{}#{s}>{tt}", c.morphism(g).name),
                source: s,
                target: tt,
            })
            .collect();
        let category = FiniteCategory::new(
            format!("({}|{})", c.name(), t.objects()[d]),
            object_names,
            arrows,
            identities,
            compose,
        )?;
        Ok(Comma {
            category: Arc::new(category),
            objects,
            morphisms,
            basepoint: d,
            basepoint_identity: t.identity(d),
        })
    }

    /// Object `(c, id_d)` for `c` with `F c = d`.
    pub fn object_over(&self, c: usize, identity_of_d: usize) -> Option<usize> {
        self.objects.iter().position(|&o| o == (c, identity_of_d))
    }

    /// Functor between comma categories induced by a commuting square
    /// `F' ∘ G = H ∘ F` with `H(d) = d'`.
    pub fn induced(&self, target: &Comma, g: &CatFunctor, h: &CatFunctor) -> Result<CatFunctor> {
        let obj_index: HashMap<(usize, usize), usize> =
            target.objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let mor_index: HashMap<(usize, usize, usize), usize> =
            target.morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let objects = self
            .objects
            .iter()
            .map(|&(x, phi)| {
                obj_index
                    .get(&(g.objects[x], h.morphisms[phi]))
                    .copied()
                    .ok_or_else(|| Error::Precondition("square does not commute on objects".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let morphisms = self
            .morphisms
            .iter()
            .map(|&(k, s, t)| {
                mor_index
                    .get(&(g.morphisms[k], objects[s], objects[t]))
                    .copied()
                    .ok_or_else(|| Error::Precondition("square does not commute on morphisms".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        CatFunctor::new(self.category.clone(), target.category.clone(), objects, morphisms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<FiniteCategory> {
        Arc::new(FiniteCategory::group("Z/2", vec!["e".into(), "g".into()], |a, b| a ^ b, 0).unwrap())
    }

    #[test]
    fn builders_validate() {
        assert!(z2().validate().passed());
        assert!(FiniteCategory::powerset(&["a", "b", "c"]).unwrap().validate().passed());
        let p = FiniteCategory::product(&z2(), &FiniteCategory::powerset(&["a"]).unwrap());
        assert!(p.validate().passed());
        assert_eq!(p.morphism_count(), 2 * 3);
    }

    #[test]
    fn broken_associativity_is_witnessed() {
        // one object, morphisms {e, a, b} with a∘a = b, b∘a = e, a∘b = a (not associative)
        let table = |g: usize, f: usize| match (g, f) {
            (0, x) | (x, 0) => x,
            (1, 1) => 2,
            (2, 1) => 0,
            (1, 2) => 1,
            _ => 2,
        };
        let c = FiniteCategory::group("bad", vec!["e".into(), "a".into(), "b".into()], table, 0).unwrap();
        assert!(c.validate().violation("associativity").is_some());
    }

    #[test]
    fn terminal_and_chain_bounds() {
        let p = FiniteCategory::powerset(&["a", "b"]).unwrap();
        assert_eq!(p.terminal_object(), Some(3));
        assert_eq!(p.initial_object(), Some(0));
        assert_eq!(p.chain_bound(), Some(2));
        assert_eq!(z2().chain_bound(), None);
        assert_eq!(z2().terminal_object(), None);
    }

    #[test]
    fn comma_of_group_quotient_is_the_group() {
        let g = z2();
        let one = Arc::new(FiniteCategory::group("1", vec!["e".into()], |_, _| 0, 0).unwrap());
        let f = CatFunctor::new(g, one, vec![0], vec![0, 0]).unwrap();
        let comma = Comma::new(&f, 0).unwrap();
        assert_eq!(comma.category.object_count(), 1);
        assert_eq!(comma.category.morphism_count(), 2);
    }

    #[test]
    fn comma_of_trivial_into_group_is_discrete() {
        let one = Arc::new(FiniteCategory::group("1", vec!["e".into()], |_, _| 0, 0).unwrap());
        let f = CatFunctor::new(one, z2(), vec![0], vec![0]).unwrap();
        let comma = Comma::new(&f, 0).unwrap();
        assert_eq!(comma.category.object_count(), 2);
        assert_eq!(comma.category.morphism_count(), 2);
        assert!(comma.category.validate().passed());
    }

    #[test]
    fn non_functor_rejected() {
        let g = z2();
        // sends g to identity but also e to g: identities not preserved
        assert!(CatFunctor::new(g.clone(), g, vec![0], vec![1, 0]).is_err());
    }
}
