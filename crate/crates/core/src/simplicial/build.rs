//! Standard constructions: simplices, boundaries, horns, ordered complexes,
//! nerves and products.

use std::sync::Arc;

use crate::category::FiniteCategory;
use crate::config::Limits;
use crate::error::{Error, Result};

use super::set::SimplicialSet;
use super::verdict::Certificate;

/// Simplicial set whose `k`-simplices are sequences `v_0 ≤ ... ≤ v_k` in
/// the order `leq` whose vertex sets satisfy `admissible` (closed under
/// subsets). Faces delete entries, degeneracies repeat them.
pub fn chain_set(
    name: impl Into<String>,
    dim: usize,
    labels: Vec<String>,
    leq: impl Fn(usize, usize) -> bool,
    admissible: impl Fn(&[usize]) -> bool,
    limits: &Limits,
) -> Result<SimplicialSet> {
    let name = name.into();
    let n = labels.len();
    let strict_admissible = |seq: &[usize]| {
        let mut set = seq.to_vec();
        set.sort_unstable();
        set.dedup();
        admissible(&set)
    };
    let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..n).filter(|&v| strict_admissible(&[v])).map(|v| vec![v]).collect()];
    for k in 1..=dim {
        let mut next = Vec::new();
        for seq in &levels[k - 1] {
            let last = *seq.last().unwrap();
            for v in 0..n {
                if !leq(last, v) {
                    continue;
                }
                let mut ext = seq.clone();
                ext.push(v);
                if strict_admissible(&ext) {
                    next.push(ext);
                }
            }
        }
        limits.check_level(&name, next.len())?;
        levels.push(next);
    }
    // longest strictly increasing admissible chain
    let mut bound = 0;
    let mut frontier: Vec<Vec<usize>> = levels[0].clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for seq in &frontier {
            let last = *seq.last().unwrap();
            for v in 0..n {
                if v != last && leq(last, v) {
                    let mut ext = seq.clone();
                    ext.push(v);
                    if strict_admissible(&ext) {
                        next.push(ext);
                    }
                }
            }
        }
        if !next.is_empty() {
            bound += 1;
        }
        if next.len() > limits.combination_cap {
            return Err(Error::cap(format!("chains of {name}"), limits.combination_cap, next.len()));
        }
        frontier = next;
    }
    let (set, _) = SimplicialSet::from_keys(
        name,
        levels,
        |_, seq, i| {
            let mut s = seq.clone();
            s.remove(i);
            s
        },
        |_, seq, i| {
            let mut s = seq.clone();
            s.insert(i, s[i]);
            s
        },
        |seq| labels[seq[0]].clone(),
    )?;
    Ok(set.with_dim_bound(Some(bound)))
}

fn range_labels(n: usize) -> Vec<String> {
    (0..=n).map(|i| i.to_string()).collect()
}

/// The standard simplex `Δⁿ`.
pub fn simplex(n: usize, dim: usize, limits: &Limits) -> Result<SimplicialSet> {
    let s = chain_set(format!("Delta{n}"), dim, range_labels(n), |a, b| a <= b, |_| true, limits)?;
    Ok(s.with_certificate(Certificate::Cone { apex: n.to_string() }))
}

/// The boundary `∂Δⁿ`.
pub fn boundary(n: usize, dim: usize, limits: &Limits) -> Result<SimplicialSet> {
    chain_set(format!("dDelta{n}"), dim, range_labels(n), |a, b| a <= b, |set| set.len() < n + 1, limits)
}

/// The horn `Λⁿ_j`.
pub fn horn(n: usize, j: usize, dim: usize, limits: &Limits) -> Result<SimplicialSet> {
    if j > n || n == 0 {
        return Err(Error::Invalid(format!("horn {j} of Delta{n} does not exist")));
    }
    chain_set(
        format!("Lambda{n}_{j}"),
        dim,
        range_labels(n),
        |a, b| a <= b,
        |set| set.len() + usize::from(!set.contains(&j)) < n + 1,
        limits,
    )
}

/// Ordered simplicial complex on `labels` with the given facets.
pub fn complex(
    name: impl Into<String>,
    labels: Vec<String>,
    facets: &[Vec<usize>],
    dim: usize,
    limits: &Limits,
) -> Result<SimplicialSet> {
    let n = labels.len();
    if facets.iter().flatten().any(|&v| v >= n) {
        return Err(Error::Invalid("facet refers to an unknown vertex".into()));
    }
    let covered = |set: &[usize]| facets.iter().any(|f| set.iter().all(|v| f.contains(v)));
    if (0..n).any(|v| !covered(&[v])) {
        return Err(Error::Invalid("every vertex must lie in a facet".into()));
    }
    chain_set(name, dim, labels, |a, b| a <= b, covered, limits)
}

/// `n` points.
pub fn discrete(labels: Vec<String>, dim: usize) -> SimplicialSet {
    let n = labels.len();
    let levels: Vec<Vec<usize>> = (0..=dim).map(|_| (0..n).collect()).collect();
    let (s, _) = SimplicialSet::from_keys(format!("disc{n}"), levels, |_, &v, _| v, |_, &v, _| v, |&v| labels[v].clone())
        .expect("discrete set");
    let s = s.with_dim_bound(Some(0));
    if n == 1 {
        s.with_certificate(Certificate::Point)
    } else {
        s
    }
}

pub fn point(dim: usize) -> SimplicialSet {
    discrete(vec!["*".into()], dim).renamed("point")
}

/// The nerve, truncated at `dim`. Level 0 indices are object ids and
/// level 1 indices are morphism ids.
pub fn nerve(c: &Arc<FiniteCategory>, dim: usize, limits: &Limits) -> Result<SimplicialSet> {
    let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..c.object_count()).map(|o| vec![o]).collect()];
    if dim >= 1 {
        levels.push((0..c.morphism_count()).map(|f| vec![f]).collect());
    }
    for k in 2..=dim {
        let mut next = Vec::new();
        for chain in &levels[k - 1] {
            let end = c.target(*chain.last().unwrap());
            for g in 0..c.morphism_count() {
                if c.source(g) == end {
                    let mut ext = chain.clone();
                    ext.push(g);
                    next.push(ext);
                }
            }
            if next.len() > limits.simplex_cap {
                return Err(Error::cap(format!("simplices of nerve {}", c.name()), limits.simplex_cap, next.len()));
            }
        }
        levels.push(next);
    }
    let face = |k: usize, chain: &Vec<usize>, i: usize| -> Vec<usize> {
        if k == 1 {
            let f = chain[0];
            return vec![if i == 0 { c.target(f) } else { c.source(f) }];
        }
        let mut out = chain.clone();
        if i == 0 {
            out.remove(0);
        } else if i == k {
            out.pop();
        } else {
            let composite = c.compose(chain[i], chain[i - 1]);
            out.splice(i - 1..=i, [composite]);
        }
        out
    };
    let degen = |k: usize, chain: &Vec<usize>, i: usize| -> Vec<usize> {
        if k == 0 {
            return vec![c.identity(chain[0])];
        }
        let object = if i == 0 { c.source(chain[0]) } else { c.target(chain[i - 1]) };
        let mut out = chain.clone();
        out.insert(i, c.identity(object));
        out
    };
    let (mut s, _) = SimplicialSet::from_keys(format!("N({})", c.name()), levels, face, degen, |chain| {
        c.objects()[chain[0]].clone()
    })?;
    s.dim_bound = c.chain_bound();
    s.origin = Some(c.clone());
    if let Some(t) = c.terminal_object().or_else(|| c.initial_object()) {
        s.certificate = Some(Certificate::Cone {
            apex: c.objects()[t].clone(),
        });
    }
    Ok(s)
}

/// Levelwise product, truncated at the smaller dimension. The pair
/// `(a, b)` at level `k` has index `a * |Y_k| + b`.
pub fn product(x: &Arc<SimplicialSet>, y: &Arc<SimplicialSet>, limits: &Limits) -> Result<SimplicialSet> {
    let dim = x.dim().min(y.dim());
    for k in 0..=dim {
        let n = x.count(k).saturating_mul(y.count(k));
        limits.check_level(&format!("{} x {}", x.name(), y.name()), n)?;
    }
    let counts: Vec<usize> = (0..=dim).map(|k| x.count(k) * y.count(k)).collect();
    let mut faces = vec![Vec::new()];
    let mut degens = Vec::new();
    for k in 0..=dim {
        let ny = y.count(k);
        if k > 0 {
            let mut t = Vec::with_capacity(counts[k] * (k + 1));
            let nyl = y.count(k - 1);
            for a in 0..x.count(k) {
                for b in 0..ny {
                    for i in 0..=k {
                        t.push(x.face(k, a, i) * nyl + y.face(k, b, i));
                    }
                }
            }
            faces.push(t);
        }
        let mut t = Vec::new();
        if k < dim {
            let nyu = y.count(k + 1);
            t.reserve(counts[k] * (k + 1));
            for a in 0..x.count(k) {
                for b in 0..ny {
                    for i in 0..=k {
                        t.push(x.degen(k, a, i) * nyu + y.degen(k, b, i));
                    }
                }
            }
        }
        degens.push(t);
    }
    let labels = (0..counts[0])
        .map(|v| format!("({},{})", x.vertex_label(v / y.count(0)), y.vertex_label(v % y.count(0))))
        .collect();
    let mut p = SimplicialSet::from_tables(format!("{}x{}", x.name(), y.name()), dim, counts, faces, degens, labels)?;
    p.dim_bound = match (x.dim_bound(), y.dim_bound()) {
        (Some(a), Some(b)) => Some(a + b),
        _ if x.is_empty() || y.is_empty() => Some(0),
        _ => None,
    };
    p.factors = Some((x.clone(), y.clone()));
    if let (Some(a), Some(b)) = (x.certificate(), y.certificate()) {
        p.certificate = Some(Certificate::Product {
            left: Box::new(a.clone()),
            right: Box::new(b.clone()),
        });
    }
    Ok(p)
}
