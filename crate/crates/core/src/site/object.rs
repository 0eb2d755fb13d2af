//! Simplicial objects in a finite site, tensors and cotensors by finite
//! simplicial sets, Čech nerves and the hypercover test.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::report::{Status, ValidationReport, Verdict};
use crate::simplicial::SimplicialSet;

use super::limits::{factor_from, factor_through, find_colimit, find_limit, Cone, Diagram};
use super::FiniteSite;

/// Levels `0..=dim` with face maps, optional degeneracies and an optional
/// augmentation `X_0 → Y`.
#[derive(Clone, Debug)]
pub struct SimplicialObject {
    name: String,
    site: Arc<FiniteSite>,
    objects: Vec<usize>,
    faces: Vec<Vec<usize>>,
    degens: Option<Vec<Vec<usize>>>,
    augmentation: Option<(usize, usize)>,
}

impl SimplicialObject {
    /// `faces[n][i]` is `d_i: X_n → X_{n-1}` (`faces[0]` is empty);
    /// `degens[n][i]` is `s_i: X_n → X_{n+1}` for `n < dim`.
    pub fn new(
        name: impl Into<String>,
        site: Arc<FiniteSite>,
        objects: Vec<usize>,
        faces: Vec<Vec<usize>>,
        degens: Option<Vec<Vec<usize>>>,
        augmentation: Option<(usize, usize)>,
    ) -> Result<Self> {
        let name = name.into();
        if objects.is_empty() {
            return Err(Error::Invalid(format!("{name}: no levels")));
        }
        let x = SimplicialObject {
            name,
            site,
            objects,
            faces,
            degens,
            augmentation,
        };
        let report = x.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::Invalid(format!("{}: {} ({})", x.name, v.rule, v.detail)));
        }
        Ok(x)
    }

    /// All levels `x`, all structure maps the identity.
    pub fn constant(site: Arc<FiniteSite>, x: usize, dim: usize, augmentation: Option<(usize, usize)>) -> Result<Self> {
        let id = site.category().identity(x);
        let name = format!("const({})", site.category().objects()[x]);
        Self::new(
            name,
            site,
            vec![x; dim + 1],
            (0..=dim).map(|n| vec![id; if n == 0 { 0 } else { n + 1 }]).collect(),
            Some((0..dim).map(|n| vec![id; n + 1]).collect()),
            augmentation,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn site(&self) -> &Arc<FiniteSite> {
        &self.site
    }

    pub fn dim(&self) -> usize {
        self.objects.len() - 1
    }

    pub fn object(&self, n: usize) -> usize {
        self.objects[n]
    }

    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn face(&self, n: usize, i: usize) -> usize {
        self.faces[n][i]
    }

    pub fn degen(&self, n: usize, i: usize) -> Option<usize> {
        self.degens.as_ref().map(|d| d[n][i])
    }

    pub fn has_degeneracies(&self) -> bool {
        self.degens.is_some()
    }

    pub fn augmentation(&self) -> Option<(usize, usize)> {
        self.augmentation
    }

    pub fn validate(&self) -> ValidationReport {
        let c = self.site.category();
        let mut report = ValidationReport::new(&self.name);
        let d = self.dim();
        if self.faces.len() != d + 1 || (0..=d).any(|n| self.faces[n].len() != if n == 0 { 0 } else { n + 1 }) {
            report.flag("shape", &[], "face table shape does not match the levels");
            return report;
        }
        for n in 1..=d {
            for (i, &f) in self.faces[n].iter().enumerate() {
                if c.source(f) != self.objects[n] || c.target(f) != self.objects[n - 1] {
                    report.flag("face_endpoints", &[n, i], format!("d_{i} at level {n} has the wrong endpoints"));
                }
            }
        }
        if !report.passed() {
            return report;
        }
        for n in 2..=d {
            for j in 0..=n {
                for i in 0..j {
                    let lhs = c.compose(self.faces[n - 1][i], self.faces[n][j]);
                    let rhs = c.compose(self.faces[n - 1][j - 1], self.faces[n][i]);
                    if lhs != rhs {
                        report.flag("face_face", &[n, i, j], format!("d_{i} d_{j} != d_{} d_{i} at level {n}", j - 1));
                    }
                }
            }
        }
        if let Some((y, a)) = self.augmentation {
            if c.source(a) != self.objects[0] || c.target(a) != y {
                report.flag("augmentation", &[], "augmentation has the wrong endpoints");
            } else if d >= 1 && c.compose(a, self.faces[1][0]) != c.compose(a, self.faces[1][1]) {
                report.flag("augmentation", &[1], "augmentation does not equalize d_0 and d_1");
            }
        }
        if let Some(degens) = &self.degens {
            if degens.len() != d || (0..d).any(|n| degens[n].len() != n + 1) {
                report.flag("shape", &[], "degeneracy table shape does not match the levels");
                return report;
            }
            for n in 0..d {
                for (i, &s) in degens[n].iter().enumerate() {
                    if c.source(s) != self.objects[n] || c.target(s) != self.objects[n + 1] {
                        report.flag("degeneracy_endpoints", &[n, i], format!("s_{i} at level {n} has the wrong endpoints"));
                        return report;
                    }
                }
            }
            for n in 0..d {
                for j in 0..=n {
                    let s = degens[n][j];
                    for i in 0..=n + 1 {
                        let lhs = c.compose(self.faces[n + 1][i], s);
                        let ok = if i == j || i == j + 1 {
                            c.is_identity(lhs)
                        } else if i < j {
                            n >= 1 && lhs == c.compose(degens[n - 1][j - 1], self.faces[n][i])
                        } else {
                            n >= 1 && lhs == c.compose(degens[n - 1][j], self.faces[n][i - 1])
                        };
                        if !ok {
                            report.flag("face_degeneracy", &[n, i, j], format!("d_{i} s_{j} at level {n}"));
                        }
                    }
                    for i in 0..=j {
                        if n + 1 < d {
                            let lhs = c.compose(degens[n + 1][i], s);
                            let rhs = c.compose(degens[n + 1][j + 1], degens[n][i]);
                            if lhs != rhs {
                                report.flag("degeneracy_degeneracy", &[n, i, j], format!("s_{i} s_{j} at level {n}"));
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Replaces level `n` by `object`, dropping the levels above it and all
    /// degeneracies. Each new face must be the unique morphism available.
    pub fn replace_level(&self, n: usize, object: usize) -> Result<Self> {
        let c = self.site.category();
        if n == 0 || n > self.dim() {
            return Err(Error::Precondition(format!("cannot replace level {n} of {}", self.name)));
        }
        let hom = c.hom(object, self.objects[n - 1]);
        if hom.len() != 1 {
            return Err(Error::Precondition(format!(
                "{} has {} morphisms to {}; faces are ambiguous",
                c.objects()[object],
                hom.len(),
                c.objects()[self.objects[n - 1]]
            )));
        }
        let mut objects = self.objects[..n].to_vec();
        objects.push(object);
        let mut faces = self.faces[..n].to_vec();
        faces.push(vec![hom[0]; n + 1]);
        Self::new(
            format!("{}[{n}:={}]", self.name, c.objects()[object]),
            self.site.clone(),
            objects,
            faces,
            None,
            self.augmentation,
        )
    }

    /// Truncation to levels `0..=dim`.
    pub fn truncate(&self, dim: usize) -> Self {
        let dim = dim.min(self.dim());
        SimplicialObject {
            name: self.name.clone(),
            site: self.site.clone(),
            objects: self.objects[..=dim].to_vec(),
            faces: self.faces[..=dim].to_vec(),
            degens: self.degens.as_ref().map(|d| d[..dim].to_vec()),
            augmentation: self.augmentation,
        }
    }
}

/// The Čech nerve of a single covering map `f: U → X`, augmented over `X`,
/// with `X_n` the `(n+1)`-fold fiber power of `U` over `X`.
pub fn cech_nerve(site: &Arc<FiniteSite>, f: usize, dim: usize, limits: &Limits) -> Result<SimplicialObject> {
    if dim > limits.max_dim {
        return Err(Error::cap("Čech nerve dimension", limits.max_dim, dim));
    }
    let c = site.category();
    let (u, x) = (c.source(f), c.target(f));
    // wide cones: legs p_0..p_n to U followed by the leg to X
    let mut levels: Vec<Cone> = vec![Cone {
        apex: u,
        legs: vec![c.identity(u), f],
    }];
    for n in 1..=dim {
        let prev = &levels[n - 1];
        let to_x = prev.legs[n];
        let pb = site.pullback(to_x, f, limits)?;
        let mut legs: Vec<usize> = prev.legs[..n].iter().map(|&p| c.compose(p, pb.legs[0])).collect();
        legs.push(pb.legs[1]);
        legs.push(c.compose(f, pb.legs[1]));
        levels.push(Cone { apex: pb.apex, legs });
    }
    let mut faces = vec![Vec::new()];
    for n in 1..=dim {
        let mut row = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let legs: Vec<usize> = (0..=n + 1).filter(|&j| j != i).map(|j| levels[n].legs[j]).collect();
            row.push(factor(c, &levels[n - 1], levels[n].apex, &legs, "face")?);
        }
        faces.push(row);
    }
    let mut degens = Vec::new();
    for n in 0..dim {
        let mut row = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut legs: Vec<usize> = Vec::with_capacity(n + 3);
            for j in 0..=n {
                legs.push(levels[n].legs[j]);
                if j == i {
                    legs.push(levels[n].legs[j]);
                }
            }
            legs.push(levels[n].legs[n + 1]);
            row.push(factor(c, &levels[n + 1], levels[n].apex, &legs, "degeneracy")?);
        }
        degens.push(row);
    }
    SimplicialObject::new(
        format!("Cech({})", c.morphism(f).name),
        site.clone(),
        levels.iter().map(|l| l.apex).collect(),
        faces,
        Some(degens),
        Some((x, f)),
    )
}

fn factor(c: &crate::category::FiniteCategory, limit: &Cone, source: usize, legs: &[usize], what: &str) -> Result<usize> {
    factor_through(c, limit, source, legs)
        .ok_or_else(|| Error::Incomplete(format!("{what} map into {} does not factor", c.objects()[limit.apex])))
}

/// `K ⊗ Y`: level `n` is the coproduct of `|K_n|` copies of `Y_n`.
pub fn tensor(k: &SimplicialSet, y: &SimplicialObject, limits: &Limits) -> Result<SimplicialObject> {
    let site = y.site();
    let c = site.category();
    let dim = k.dim().min(y.dim());
    let mut levels = Vec::with_capacity(dim + 1);
    for n in 0..=dim {
        let d = Diagram::discrete(&vec![y.object(n); k.count(n)]);
        let colim = find_colimit(c, &d, limits)?.ok_or_else(|| {
            Error::Incomplete(format!(
                "site {} has no coproduct of {} copies of {}",
                site.name(),
                k.count(n),
                c.objects()[y.object(n)]
            ))
        })?;
        levels.push(colim);
    }
    let induced = |n: usize, m: usize, simplex_map: &dyn Fn(usize) -> usize, y_map: usize| -> Result<usize> {
        let legs: Vec<usize> = (0..k.count(n)).map(|s| c.compose(levels[m].legs[simplex_map(s)], y_map)).collect();
        factor_from(c, &levels[n], levels[m].apex, &legs)
            .ok_or_else(|| Error::Incomplete(format!("coproduct at level {n} does not induce a structure map")))
    };
    let mut faces = vec![Vec::new()];
    for n in 1..=dim {
        let row = (0..=n)
            .map(|i| induced(n, n - 1, &|s| k.face(n, s, i), y.face(n, i)))
            .collect::<Result<Vec<_>>>()?;
        faces.push(row);
    }
    let degens = if y.has_degeneracies() {
        let mut out = Vec::new();
        for n in 0..dim {
            let row = (0..=n)
                .map(|i| induced(n, n + 1, &|s| k.degen(n, s, i), y.degen(n, i).expect("degeneracies present")))
                .collect::<Result<Vec<_>>>()?;
            out.push(row);
        }
        Some(out)
    } else {
        None
    };
    SimplicialObject::new(
        format!("{}⊗{}", k.name(), y.name()),
        site.clone(),
        levels.iter().map(|l| l.apex).collect(),
        faces,
        degens,
        None,
    )
}

/// `(X^K)_0` as the limit of `X_k` over the nondegenerate simplices of `K`
/// and their faces. `K` must be complete, with nondegenerate simplices
/// whose faces are nondegenerate.
pub fn cotensor_level(x: &SimplicialObject, k: &SimplicialSet, limits: &Limits) -> Result<Cone> {
    let site = x.site();
    let c = site.category();
    if !k.is_complete() {
        return Err(Error::Precondition(format!("{} is not known to be complete", k.name())));
    }
    let top = k.dim_bound().unwrap_or(0);
    if top > x.dim() {
        return Err(Error::Incomplete(format!(
            "{} has nondegenerate {top}-simplices but {} stops at level {}",
            k.name(),
            x.name(),
            x.dim()
        )));
    }
    let mut nodes = Vec::new();
    let mut position = Vec::new();
    for n in 0..=top {
        let mut row = vec![usize::MAX; k.count(n)];
        for s in k.nondegenerate(n) {
            row[s] = nodes.len();
            nodes.push((n, s));
        }
        position.push(row);
    }
    let mut arrows = Vec::new();
    for (node, &(n, s)) in nodes.iter().enumerate() {
        if n == 0 {
            continue;
        }
        for i in 0..=n {
            let t = k.face(n, s, i);
            if k.is_degenerate(n - 1, t) {
                return Err(Error::Precondition(format!("{} has a degenerate face of a nondegenerate simplex", k.name())));
            }
            arrows.push((node, position[n - 1][t], x.face(n, i)));
        }
    }
    let d = Diagram {
        nodes: nodes.iter().map(|&(n, _)| x.object(n)).collect(),
        arrows,
    };
    find_limit(c, &d, limits)?.ok_or_else(|| {
        Error::Incomplete(format!("site {} has no limit for {}^{}", site.name(), x.name(), k.name()))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub verdict: Verdict,
    pub matching: Option<String>,
    pub comparison: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypercoverReport {
    pub object: String,
    pub levels: Vec<LevelReport>,
    pub overall: Verdict,
}

impl HypercoverReport {
    pub fn passed(&self) -> bool {
        self.overall.passed()
    }
}

/// For each level `n ≤ up_to`, the comparison `X_n → M_n` into the matching
/// object (the limit of `X` over `∂Δⁿ` fibered over `Y`) must be a cover.
pub fn is_hypercover(x: &SimplicialObject, up_to: usize, limits: &Limits) -> Result<HypercoverReport> {
    let (y, aug) = x
        .augmentation()
        .ok_or_else(|| Error::Precondition(format!("{} has no augmentation", x.name())))?;
    let levels: Vec<LevelReport> = (0..=up_to)
        .into_par_iter()
        .map(|n| level_report(x, y, aug, n, limits))
        .collect::<Result<Vec<_>>>()?;
    let overall = if let Some(bad) = levels.iter().find(|l| l.verdict.failed()) {
        Verdict::fail(format!("level {}: {}", bad.level, bad.verdict.witness.clone().unwrap_or_default()))
    } else if let Some(open) = levels.iter().find(|l| l.verdict.status == Status::Inconclusive) {
        Verdict::inconclusive(format!("level {}: {}", open.level, open.verdict.witness.clone().unwrap_or_default()))
    } else {
        Verdict::pass()
    };
    Ok(HypercoverReport {
        object: x.name().to_string(),
        levels,
        overall,
    })
}

fn level_report(x: &SimplicialObject, y: usize, aug: usize, n: usize, limits: &Limits) -> Result<LevelReport> {
    let site = x.site();
    let c = site.category();
    let open = |reason: String| LevelReport {
        level: n,
        verdict: Verdict::inconclusive(reason),
        matching: None,
        comparison: None,
    };
    if n > x.dim() {
        return Ok(open(format!("{} stops at level {}", x.name(), x.dim())));
    }
    // proper nonempty faces of [n] as bitmasks, plus the node Y
    let faces: Vec<usize> = (1..(1usize << (n + 1)) - 1).collect();
    let node_of = |mask: usize| faces.iter().position(|&m| m == mask).expect("proper face");
    let level_of = |mask: usize| mask.count_ones() as usize - 1;
    let mut nodes: Vec<usize> = faces.iter().map(|&m| x.object(level_of(m))).collect();
    nodes.push(y);
    let y_node = faces.len();
    let mut arrows = Vec::new();
    for (node, &mask) in faces.iter().enumerate() {
        let verts: Vec<usize> = (0..=n).filter(|v| mask >> v & 1 == 1).collect();
        let k = verts.len() - 1;
        if k == 0 {
            arrows.push((node, y_node, aug));
        }
        for i in 0..=k.min(verts.len()) {
            if k == 0 {
                break;
            }
            arrows.push((node, node_of(mask & !(1 << verts[i])), x.face(k, i)));
        }
    }
    let d = Diagram { nodes, arrows };
    let matching = match find_limit(c, &d, limits)? {
        Some(m) => m,
        None => return Ok(open(format!("no matching object at level {n} in site {}", site.name()))),
    };
    // legs out of X_n: faces along the inclusion of each proper face
    let mut legs = Vec::with_capacity(faces.len() + 1);
    for &mask in &faces {
        let mut map = c.identity(x.object(n));
        let mut level = n;
        for v in (0..=n).rev() {
            if mask >> v & 1 == 0 {
                map = c.compose(x.face(level, v), map);
                level -= 1;
            }
        }
        legs.push(map);
    }
    legs.push(if n == 0 { aug } else { c.compose(aug, legs[node_of(1)]) });
    let comparison = factor_through(c, &matching, x.object(n), &legs)
        .ok_or_else(|| Error::Incomplete(format!("level {n} of {} has no comparison map", x.name())))?;
    let verdict = if site.is_cover(matching.apex, &[comparison]) {
        Verdict::pass()
    } else {
        Verdict::fail(format!(
            "comparison {} : {} -> {} is not a cover",
            c.morphism(comparison).name,
            c.objects()[x.object(n)],
            c.objects()[matching.apex]
        ))
    };
    Ok(LevelReport {
        level: n,
        verdict,
        matching: Some(c.objects()[matching.apex].clone()),
        comparison: Some(c.morphism(comparison).name.clone()),
    })
}
