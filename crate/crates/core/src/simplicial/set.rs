use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::category::FiniteCategory;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::report::ValidationReport;

use super::verdict::Certificate;

/// A levelwise finite simplicial set truncated at dimension `dim`.
///
/// Simplices of level `k` are `0..count(k)`. `faces[k][s * (k + 1) + i]` is
/// `d_i s` (for `k ≥ 1`) and `degens[k][s * (k + 1) + i]` is `s_i s` (for `k < dim`).
#[derive(Clone, Debug)]
pub struct SimplicialSet {
    name: String,
    dim: usize,
    counts: Vec<usize>,
    faces: Vec<Vec<usize>>,
    degens: Vec<Vec<usize>>,
    vertex_labels: Vec<String>,
    degenerate: Vec<Vec<Option<(usize, usize)>>>,
    pub(crate) dim_bound: Option<usize>,
    pub(crate) certificate: Option<Certificate>,
    pub(crate) origin: Option<Arc<FiniteCategory>>,
    pub(crate) factors: Option<(Arc<SimplicialSet>, Arc<SimplicialSet>)>,
}

impl SimplicialSet {
    /// Builds from raw tables, checking only shapes and ranges.
    pub fn from_tables(
        name: impl Into<String>,
        dim: usize,
        counts: Vec<usize>,
        faces: Vec<Vec<usize>>,
        degens: Vec<Vec<usize>>,
        vertex_labels: Vec<String>,
    ) -> Result<Self> {
        if counts.len() != dim + 1 || faces.len() != dim + 1 || degens.len() != dim + 1 {
            return Err(Error::Invalid("one table per level 0..=dim is required".into()));
        }
        if vertex_labels.len() != counts[0] {
            return Err(Error::Invalid("one label per vertex is required".into()));
        }
        for k in 0..=dim {
            let expected = if k == 0 { 0 } else { counts[k] * (k + 1) };
            if faces[k].len() != expected || (k > 0 && faces[k].iter().any(|&f| f >= counts[k - 1])) {
                return Err(Error::Invalid(format!("face table at level {k} is malformed")));
            }
            let expected = if k == dim { 0 } else { counts[k] * (k + 1) };
            if degens[k].len() != expected || (k < dim && degens[k].iter().any(|&s| s >= counts[k + 1])) {
                return Err(Error::Invalid(format!("degeneracy table at level {k} is malformed")));
            }
        }
        let mut degenerate: Vec<Vec<Option<(usize, usize)>>> = counts.iter().map(|&c| vec![None; c]).collect();
        for k in 0..dim {
            for s in 0..counts[k] {
                for i in 0..=k {
                    let t = degens[k][s * (k + 1) + i];
                    let slot = &mut degenerate[k + 1][t];
                    if slot.map_or(true, |(j, _)| i < j) {
                        *slot = Some((i, s));
                    }
                }
            }
        }
        Ok(SimplicialSet {
            name: name.into(),
            dim,
            counts,
            faces,
            degens,
            vertex_labels,
            degenerate,
            dim_bound: None,
            certificate: None,
            origin: None,
            factors: None,
        })
    }

    /// Builds a simplicial set whose level-`k` simplices are `levels[k]`,
    /// with faces and degeneracies computed on keys. Returns the key indices.
    pub(crate) fn from_keys<K: Eq + Hash + Clone>(
        name: impl Into<String>,
        levels: Vec<Vec<K>>,
        face: impl Fn(usize, &K, usize) -> K,
        degen: impl Fn(usize, &K, usize) -> K,
        vertex_label: impl Fn(&K) -> String,
    ) -> Result<(Self, Vec<HashMap<K, usize>>)> {
        if levels.is_empty() {
            return Err(Error::Invalid("at least level 0 is required".into()));
        }
        let dim = levels.len() - 1;
        let index: Vec<HashMap<K, usize>> = levels
            .iter()
            .map(|keys| keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect())
            .collect();
        let lookup = |k: usize, key: &K, what: &str| -> Result<usize> {
            index[k]
                .get(key)
                .copied()
                .ok_or_else(|| Error::Invalid(format!("{what} of a simplex is missing at level {k}")))
        };
        let mut faces = vec![Vec::new()];
        for k in 1..=dim {
            let mut table = Vec::with_capacity(levels[k].len() * (k + 1));
            for key in &levels[k] {
                for i in 0..=k {
                    table.push(lookup(k - 1, &face(k, key, i), "face")?);
                }
            }
            faces.push(table);
        }
        let mut degens = Vec::new();
        for k in 0..=dim {
            let mut table = Vec::new();
            if k < dim {
                table.reserve(levels[k].len() * (k + 1));
                for key in &levels[k] {
                    for i in 0..=k {
                        table.push(lookup(k + 1, &degen(k, key, i), "degeneracy")?);
                    }
                }
            }
            degens.push(table);
        }
        let labels = levels[0].iter().map(vertex_label).collect();
        let counts = levels.iter().map(Vec::len).collect();
        Ok((Self::from_tables(name, dim, counts, faces, degens, labels)?, index))
    }

    /// The empty simplicial set.
    pub fn empty(dim: usize) -> Self {
        let mut s = Self::from_tables(
            "empty",
            dim,
            vec![0; dim + 1],
            vec![Vec::new(); dim + 1],
            vec![Vec::new(); dim + 1],
            Vec::new(),
        )
        .expect("empty set");
        s.dim_bound = Some(0);
        s
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Truncation dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts[k]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn is_empty(&self) -> bool {
        self.counts[0] == 0
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    /// `d_i` of simplex `s` at level `k ≥ 1`.
    pub fn face(&self, k: usize, s: usize, i: usize) -> usize {
        self.faces[k][s * (k + 1) + i]
    }

    /// `s_i` of simplex `s` at level `k < dim`.
    pub fn degen(&self, k: usize, s: usize, i: usize) -> usize {
        self.degens[k][s * (k + 1) + i]
    }

    /// `Some((i, t))` when `s = s_i t` (smallest such `i`).
    pub fn degenerate_from(&self, k: usize, s: usize) -> Option<(usize, usize)> {
        self.degenerate[k][s]
    }

    pub fn is_degenerate(&self, k: usize, s: usize) -> bool {
        self.degenerate[k][s].is_some()
    }

    pub fn nondegenerate(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.counts[k]).filter(move |&s| self.degenerate[k][s].is_none())
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.dim).map(|k| self.nondegenerate(k).count()).collect()
    }

    /// Every simplex above `dim_bound` is degenerate, when known.
    pub fn dim_bound(&self) -> Option<usize> {
        self.dim_bound
    }

    /// True when all nondegenerate simplices are present.
    pub fn is_complete(&self) -> bool {
        self.dim_bound.is_some_and(|b| b <= self.dim)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    pub fn origin(&self) -> Option<&Arc<FiniteCategory>> {
        self.origin.as_ref()
    }

    pub fn factors(&self) -> Option<&(Arc<SimplicialSet>, Arc<SimplicialSet>)> {
        self.factors.as_ref()
    }

    pub(crate) fn with_certificate(mut self, c: Certificate) -> Self {
        self.certificate = Some(c);
        self
    }

    pub(crate) fn with_dim_bound(mut self, b: Option<usize>) -> Self {
        self.dim_bound = b;
        self
    }

    /// Only degenerate simplices above level 0.
    pub fn is_discrete(&self) -> bool {
        (1..=self.dim).all(|k| self.nondegenerate(k).next().is_none())
    }

    /// `θ^* s` for a monotone `θ: [m] → [k]` given as its value list.
    pub fn apply(&self, k: usize, s: usize, theta: &[usize]) -> usize {
        debug_assert!(theta.windows(2).all(|w| w[0] <= w[1]) && theta.iter().all(|&t| t <= k));
        let mut image: Vec<usize> = theta.to_vec();
        image.dedup();
        let (mut level, mut cur) = (k, s);
        for i in (0..=k).rev() {
            if image.binary_search(&i).is_err() {
                cur = self.face(level, cur, i);
                level -= 1;
            }
        }
        for p in 0..theta.len().saturating_sub(1) {
            if theta[p] == theta[p + 1] {
                cur = self.degen(level, cur, p);
                level += 1;
            }
        }
        cur
    }

    /// Applies `s_{ops[0]}`, then `s_{ops[1]}`, ... starting at level `k`.
    pub fn degenerate_by(&self, k: usize, s: usize, ops: &[usize]) -> usize {
        let (mut level, mut cur) = (k, s);
        for &i in ops {
            cur = self.degen(level, cur, i);
            level += 1;
        }
        cur
    }

    /// Eilenberg-Zilber decomposition: `(level, x, ops)` with `x`
    /// nondegenerate and `s = degenerate_by(level, x, ops)`.
    pub fn root(&self, k: usize, s: usize) -> (usize, usize, Vec<usize>) {
        match self.degenerate[k][s] {
            None => (k, s, Vec::new()),
            Some((i, t)) => {
                let (l, x, mut ops) = self.root(k - 1, t);
                ops.push(i);
                (l, x, ops)
            }
        }
    }

    pub fn vertices(&self, k: usize, s: usize) -> Vec<usize> {
        (0..=k).map(|j| self.apply(k, s, &[j])).collect()
    }

    /// Index of the fully degenerate `k`-simplex on vertex `v`.
    pub fn constant(&self, v: usize, k: usize) -> usize {
        self.apply(0, v, &vec![0; k + 1])
    }

    pub fn describe(&self, k: usize, s: usize) -> String {
        let vs: Vec<&str> = self.vertices(k, s).into_iter().map(|v| self.vertex_label(v)).collect();
        format!("{}-simplex #{} [{}]", k, s, vs.join(","))
    }

    /// Exhaustive check of the simplicial identities.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new(format!("simplicial set {}", self.name));
        for k in 2..=self.dim {
            for s in 0..self.counts[k] {
                for j in 1..=k {
                    for i in 0..j {
                        if self.face(k - 1, self.face(k, s, j), i) != self.face(k - 1, self.face(k, s, i), j - 1) {
                            report.flag("face_face", &[k, s, i, j], "d_i d_j != d_{j-1} d_i");
                        }
                    }
                }
            }
        }
        for k in 0..self.dim {
            for s in 0..self.counts[k] {
                for j in 0..=k {
                    let t = self.degen(k, s, j);
                    for i in 0..=k + 1 {
                        let lhs = self.face(k + 1, t, i);
                        let rhs = if i < j {
                            self.degen(k - 1, self.face(k, s, i), j - 1)
                        } else if i == j || i == j + 1 {
                            s
                        } else {
                            self.degen(k - 1, self.face(k, s, i - 1), j)
                        };
                        if lhs != rhs {
                            report.flag("face_degeneracy", &[k, s, i, j], "d_i s_j violates the mixed identity");
                        }
                    }
                    if k + 1 < self.dim {
                        for i in 0..=j {
                            if self.degen(k + 1, t, i) != self.degen(k + 1, self.degen(k, s, i), j + 1) {
                                report.flag("degeneracy_degeneracy", &[k, s, i, j], "s_i s_j != s_{j+1} s_i");
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Restricts to levels `0..=new_dim`.
    pub fn truncate(&self, new_dim: usize) -> Self {
        if new_dim >= self.dim {
            return self.clone();
        }
        let mut out = self.clone();
        out.dim = new_dim;
        out.counts.truncate(new_dim + 1);
        out.faces.truncate(new_dim + 1);
        out.degens.truncate(new_dim + 1);
        out.degens[new_dim].clear();
        out.degenerate.truncate(new_dim + 1);
        out.factors = None;
        out
    }

    /// Rebuilds a complete set at a higher truncation; indices at existing
    /// levels are preserved.
    pub fn extend(&self, new_dim: usize, limits: &Limits) -> Result<Self> {
        if new_dim <= self.dim {
            return Ok(self.truncate(new_dim));
        }
        let bound = match self.dim_bound {
            Some(b) if b <= self.dim => b,
            _ => return Err(Error::Precondition(format!("{} is not complete and cannot be extended", self.name))),
        };
        type Key = (usize, usize, Vec<usize>);
        let mut levels: Vec<Vec<Key>> = Vec::with_capacity(new_dim + 1);
        for m in 0..=new_dim {
            let mut keys = Vec::new();
            for k in 0..=bound.min(m) {
                let nd: Vec<usize> = self.nondegenerate(k).collect();
                if nd.is_empty() {
                    continue;
                }
                for sigma in surjections(m, k) {
                    for &x in &nd {
                        keys.push((k, x, sigma.clone()));
                    }
                }
            }
            if m <= self.dim {
                keys.sort_by_key(|(k, x, sigma)| self.apply(*k, *x, sigma));
            }
            limits.check_level(&self.name, keys.len())?;
            levels.push(keys);
        }
        let face = |_: usize, key: &Key, i: usize| -> Key {
            let (k, x, sigma) = key;
            let mut theta = sigma.clone();
            theta.remove(i);
            let mut image = theta.clone();
            image.dedup();
            let y = self.apply(*k, *x, &image);
            let eps: Vec<usize> = theta.iter().map(|t| image.binary_search(t).unwrap()).collect();
            let (l, z, ops) = self.root(image.len() - 1, y);
            let tau = surjection_of(l, &ops);
            (l, z, eps.iter().map(|&e| tau[e]).collect())
        };
        let degen = |_: usize, key: &Key, i: usize| -> Key {
            let (k, x, sigma) = key;
            let mut sigma = sigma.clone();
            sigma.insert(i, sigma[i]);
            (*k, *x, sigma)
        };
        let (mut out, _) = Self::from_keys(self.name.clone(), levels, face, degen, |(_, x, _)| self.vertex_labels[*x].clone())?;
        out.dim_bound = self.dim_bound;
        out.certificate = self.certificate.clone();
        out.origin = self.origin.clone();
        Ok(out)
    }
}

/// Monotone surjections `[m] → [k]` as value lists.
pub(crate) fn surjections(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(pos: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos > m {
            if cur.last() == Some(&k) {
                out.push(cur.clone());
            }
            return;
        }
        let last = cur.last().copied();
        let choices: &[usize] = &[0, 1];
        for &step in choices {
            let v = match last {
                None if step == 0 => 0,
                None => continue,
                Some(l) => l + step,
            };
            if v > k || k - v > m - pos {
                continue;
            }
            cur.push(v);
            go(pos + 1, m, k, cur, out);
            cur.pop();
        }
    }
    if k > m {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// The surjection `[l + ops.len()] → [l]` realised by applying `s_{ops[0]}, s_{ops[1]}, ...`.
pub(crate) fn surjection_of(l: usize, ops: &[usize]) -> Vec<usize> {
    let mut seq: Vec<usize> = (0..=l).collect();
    for &i in ops {
        seq.insert(i, seq[i]);
    }
    seq
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surjection_counts() {
        assert_eq!(surjections(3, 1).len(), 3);
        assert_eq!(surjections(4, 4).len(), 1);
        assert_eq!(surjections(2, 0), vec![vec![0, 0, 0]]);
        assert!(surjections(1, 2).is_empty());
        assert_eq!(surjection_of(1, &[0, 2]), vec![0, 0, 1, 1]);
    }

    #[test]
    fn empty_is_valid() {
        let e = SimplicialSet::empty(3);
        assert!(e.validate().passed());
        assert!(e.is_empty());
        assert!(e.is_discrete());
    }
}
