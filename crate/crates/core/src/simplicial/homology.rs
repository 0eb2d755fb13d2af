//! π₀ and integral reduced homology of the normalized chain complex.

use serde::Serialize;

use super::set::SimplicialSet;

/// Connected components as a vertex → component map (components numbered
/// by first vertex).
pub fn components(x: &SimplicialSet) -> Vec<usize> {
    let n = x.count(0);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    if x.dim() >= 1 {
        for e in 0..x.count(1) {
            let (a, b) = (find(&mut parent, x.face(1, e, 0)), find(&mut parent, x.face(1, e, 1)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    let mut ids = vec![usize::MAX; n];
    let mut next = 0;
    roots
        .iter()
        .map(|&r| {
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            ids[r]
        })
        .collect()
}

pub fn pi0(x: &SimplicialSet) -> usize {
    components(x).into_iter().max().map_or(0, |m| m + 1)
}

/// Reduced homology in degrees `-1..dim`, plus the rank of top-degree
/// cycles (no boundaries exist there in the truncation).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainComplexReport {
    /// `betti[p + 1]` is the rank of reduced `H_p`, `p = -1..dim-1`.
    pub betti: Vec<usize>,
    /// `torsion[p + 1]` lists the invariant factors `> 1` of reduced `H_p`.
    pub torsion: Vec<Vec<u64>>,
    pub nondegenerate: Vec<usize>,
    pub top_cycle_rank: usize,
    pub euler_from_simplices: i64,
    pub euler_from_homology: i64,
}

impl ChainComplexReport {
    pub fn betti(&self, p: usize) -> usize {
        self.betti[p + 1]
    }

    pub fn torsion(&self, p: usize) -> &[u64] {
        &self.torsion[p + 1]
    }

    /// Lowest degree (−1 allowed) with nonzero reduced homology.
    pub fn first_nonzero(&self) -> Option<isize> {
        (0..self.betti.len())
            .find(|&i| self.betti[i] > 0 || !self.torsion[i].is_empty())
            .map(|i| i as isize - 1)
    }

    pub fn describe(&self, p: isize) -> String {
        let i = (p + 1) as usize;
        let mut parts = Vec::new();
        if self.betti[i] > 0 {
            parts.push(if self.betti[i] == 1 { "Z".to_string() } else { format!("Z^{}", self.betti[i]) });
        }
        parts.extend(self.torsion[i].iter().map(|t| format!("Z/{t}")));
        format!("H_{p} = {}", parts.join(" + "))
    }
}

/// Smith normal form diagonal (nonzero invariant factors) of an integer matrix.
pub fn invariant_factors(mut m: Vec<Vec<i128>>) -> Vec<u64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows && t < cols {
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].unsigned_abs());
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = m[i][t].div_euclid(m[t][t]);
                    if q != 0 {
                        for j in t..cols {
                            let v = m[t][j];
                            m[i][j] -= q * v;
                        }
                    }
                    if m[i][t] != 0 {
                        m.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = m[t][j].div_euclid(m[t][t]);
                    if q != 0 {
                        for row in m.iter_mut().skip(t) {
                            let v = row[t];
                            row[j] -= q * v;
                        }
                    }
                    if m[t][j] != 0 {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // the pivot must divide the remaining block
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % m[t][t] != 0));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        let v = m[i][j];
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].unsigned_abs() as u64);
        t += 1;
    }
    diag
}

/// Matrix of `∂_k: N_k → N_{k-1}` on nondegenerate simplices.
fn boundary_matrix(x: &SimplicialSet, k: usize, rows: &[usize], cols: &[usize]) -> Vec<Vec<i128>> {
    let mut row_of = vec![usize::MAX; x.count(k - 1)];
    for (r, &s) in rows.iter().enumerate() {
        row_of[s] = r;
    }
    let mut m = vec![vec![0i128; cols.len()]; rows.len()];
    for (c, &s) in cols.iter().enumerate() {
        for i in 0..=k {
            let f = x.face(k, s, i);
            if row_of[f] != usize::MAX {
                m[row_of[f]][c] += if i % 2 == 0 { 1 } else { -1 };
            }
        }
    }
    m
}

pub fn reduced_homology(x: &SimplicialSet) -> ChainComplexReport {
    let d = x.dim();
    let nd: Vec<Vec<usize>> = (0..=d).map(|k| x.nondegenerate(k).collect()).collect();
    let sizes: Vec<usize> = nd.iter().map(Vec::len).collect();
    // factors[k] = invariant factors of ∂_k, with ∂_0 the augmentation
    let mut factors: Vec<Vec<u64>> = Vec::with_capacity(d + 1);
    factors.push(if sizes[0] > 0 { vec![1] } else { Vec::new() });
    for k in 1..=d {
        factors.push(invariant_factors(boundary_matrix(x, k, &nd[k - 1], &nd[k])));
    }
    let rank = |k: usize| factors[k].len();
    let mut betti = vec![1 - rank(0)];
    let mut torsion = vec![Vec::new()];
    for p in 0..d {
        betti.push(sizes[p] - rank(p) - rank(p + 1));
        torsion.push(factors[p + 1].iter().copied().filter(|&f| f > 1).collect());
    }
    let top_cycle_rank = sizes[d] - rank(d);
    let sign = |p: usize| if p % 2 == 0 { 1i64 } else { -1 };
    let euler_from_simplices = (0..=d).map(|p| sign(p) * sizes[p] as i64).sum();
    let mut euler_from_homology: i64 = (0..d).map(|p| sign(p) * betti[p + 1] as i64).sum();
    euler_from_homology += sign(d) * top_cycle_rank as i64;
    // unreduced H_0 has one more generator than reduced when nonempty
    euler_from_homology += i64::from(sizes[0] > 0);
    ChainComplexReport {
        betti,
        torsion,
        nondegenerate: sizes,
        top_cycle_rank,
        euler_from_simplices,
        euler_from_homology,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::category::FiniteCategory;
    use crate::config::Limits;
    use crate::simplicial::build;

    #[test]
    fn snf_examples() {
        assert_eq!(invariant_factors(vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(invariant_factors(vec![vec![0, 0]]), Vec::<u64>::new());
        assert_eq!(invariant_factors(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn circle_has_h1() {
        let c = build::boundary(2, 3, &Limits::default()).unwrap();
        let h = reduced_homology(&c);
        assert_eq!(h.betti, vec![0, 0, 1, 0]);
        assert_eq!(h.euler_from_simplices, h.euler_from_homology);
        assert_eq!(pi0(&c), 1);
    }

    #[test]
    fn nerve_z2_has_torsion() {
        let z2 = Arc::new(FiniteCategory::group("Z/2", vec!["e".into(), "g".into()], |a, b| a ^ b, 0).unwrap());
        let n = build::nerve(&z2, 4, &Limits::default()).unwrap();
        let h = reduced_homology(&n);
        assert_eq!(h.torsion(1), &[2]);
        assert_eq!(h.betti(1), 0);
        assert_eq!(h.torsion(3), &[2]);
        assert_eq!(h.first_nonzero(), Some(1));
        assert_eq!(h.euler_from_simplices, h.euler_from_homology);
    }

    #[test]
    fn empty_and_discrete() {
        let e = crate::simplicial::SimplicialSet::empty(2);
        assert_eq!(reduced_homology(&e).first_nonzero(), Some(-1));
        let d = build::discrete(vec!["a".into(), "b".into(), "c".into()], 2);
        let h = reduced_homology(&d);
        assert_eq!(h.betti(0), 2);
        assert_eq!(pi0(&d), 3);
        assert_eq!(h.euler_from_simplices, 3);
        assert_eq!(h.euler_from_homology, 3);
    }
}
