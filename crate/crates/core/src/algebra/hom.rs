use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::ValidationReport;

use super::ring::FiniteCommRing;

/// A unital ring homomorphism given by its element table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingHom {
    source: Arc<FiniteCommRing>,
    target: Arc<FiniteCommRing>,
    map: Vec<usize>,
}

impl RingHom {
    /// Wraps a table without checking the hom axioms; see [`RingHom::validate`].
    pub fn from_table(
        source: Arc<FiniteCommRing>,
        target: Arc<FiniteCommRing>,
        map: Vec<usize>,
    ) -> Result<Self> {
        if map.len() != source.size() || map.iter().any(|&y| y >= target.size()) {
            return Err(Error::Invalid(format!(
                "map table does not go from {} to {}",
                source.name(),
                target.name()
            )));
        }
        Ok(RingHom { source, target, map })
    }

    /// Checked construction.
    pub fn new(
        source: Arc<FiniteCommRing>,
        target: Arc<FiniteCommRing>,
        map: Vec<usize>,
    ) -> Result<Self> {
        let h = Self::from_table(source, target, map)?;
        let report = h.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::Invalid(format!("not a ring hom: {} at {:?}", v.rule, v.witness)));
        }
        Ok(h)
    }

    pub fn identity(ring: Arc<FiniteCommRing>) -> Self {
        let map = ring.elements().collect();
        RingHom {
            source: ring.clone(),
            target: ring,
            map,
        }
    }

    pub fn source(&self) -> &Arc<FiniteCommRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteCommRing> {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingHom) -> Result<RingHom> {
        if !self.target.same_structure(&other.source) {
            return Err(Error::Precondition(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source.name(),
                self.target.name(),
                other.source.name(),
                other.target.name()
            )));
        }
        Ok(RingHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&a| other.map[a]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.source.same_structure(&self.target) && self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn validate(&self) -> ValidationReport {
        let (s, t) = (&self.source, &self.target);
        let mut report = ValidationReport::new(format!("hom {} -> {}", s.name(), t.name()));
        if self.map[s.one()] != t.one() {
            report.flag("preserves_one", &[s.one()], "f(1) != 1");
        }
        for a in s.elements() {
            for b in s.elements() {
                if self.map[s.add(a, b)] != t.add(self.map[a], self.map[b]) {
                    report.flag("preserves_add", &[a, b], "f(a+b) != f(a)+f(b)");
                }
                if self.map[s.mul(a, b)] != t.mul(self.map[a], self.map[b]) {
                    report.flag("preserves_mul", &[a, b], "f(ab) != f(a)f(b)");
                }
            }
        }
        report
    }

    /// Describes the hom by the images of the source's generators.
    pub fn describe(&self) -> String {
        let gens = generating_set(&self.source);
        if gens.is_empty() {
            return "[]".into();
        }
        let parts: Vec<String> = gens
            .iter()
            .map(|&g| format!("{}->{}", self.source.label(g), self.target.label(self.map[g])))
            .collect();
        format!("[{}]", parts.join(","))
    }
}

/// Subring generated by `seeds` together with 0 and 1.
fn closure(r: &FiniteCommRing, seeds: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; r.size()];
    let mut members = Vec::new();
    for &x in [r.zero(), r.one()].iter().chain(seeds) {
        if !inside[x] {
            inside[x] = true;
            members.push(x);
        }
    }
    let mut i = 0;
    while i < members.len() {
        let x = members[i];
        for j in 0..=i {
            let y = members[j];
            for z in [r.add(x, y), r.mul(x, y)] {
                if !inside[z] {
                    inside[z] = true;
                    members.push(z);
                }
            }
        }
        i += 1;
    }
    inside
}

/// Greedy generating set of `r` as a ring: repeatedly adjoin the smallest
/// element not yet generated.
pub fn generating_set(r: &FiniteCommRing) -> Vec<usize> {
    let mut gens = Vec::new();
    loop {
        let inside = closure(r, &gens);
        match inside.iter().position(|&b| !b) {
            Some(x) => gens.push(x),
            None => return gens,
        }
    }
}

/// Every unital ring hom `source -> target`.
///
/// Enumerates images of a generating set of `source` and propagates them
/// through sums and products; a conflict discards the assignment.
pub fn enumerate_homs(source: &Arc<FiniteCommRing>, target: &Arc<FiniteCommRing>) -> Vec<RingHom> {
    let gens = generating_set(source);
    let t = target.size();
    let mut out = Vec::new();
    let mut images = vec![0usize; gens.len()];
    loop {
        if let Some(map) = extend(source, target, &gens, &images) {
            out.push(RingHom {
                source: source.clone(),
                target: target.clone(),
                map,
            });
        }
        // odometer over target^gens
        let mut k = 0;
        loop {
            if k == images.len() {
                out.sort_by(|a, b| a.map.cmp(&b.map));
                return out;
            }
            images[k] += 1;
            if images[k] < t {
                break;
            }
            images[k] = 0;
            k += 1;
        }
    }
}

fn extend(
    s: &FiniteCommRing,
    t: &FiniteCommRing,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let mut map = vec![UNSET; s.size()];
    let mut known = Vec::new();
    let mut queue = VecDeque::new();
    let set = |map: &mut Vec<usize>, x: usize, y: usize, queue: &mut VecDeque<usize>| -> bool {
        if map[x] == UNSET {
            map[x] = y;
            queue.push_back(x);
            true
        } else {
            map[x] == y
        }
    };
    if !set(&mut map, s.zero(), t.zero(), &mut queue) || !set(&mut map, s.one(), t.one(), &mut queue) {
        return None;
    }
    for (&g, &img) in gens.iter().zip(images) {
        if !set(&mut map, g, img, &mut queue) {
            return None;
        }
    }
    while let Some(x) = queue.pop_front() {
        known.push(x);
        for &y in &known {
            let (fx, fy) = (map[x], map[y]);
            if !set(&mut map, s.add(x, y), t.add(fx, fy), &mut queue)
                || !set(&mut map, s.mul(x, y), t.mul(fx, fy), &mut queue)
            {
                return None;
            }
        }
    }
    debug_assert!(map.iter().all(|&y| y != UNSET));
    Some(map)
}
