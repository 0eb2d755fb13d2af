use std::sync::Arc;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::report::ValidationReport;

use super::hom::RingHom;
use super::ring::FiniteCommRing;

/// A finite module over a finite commutative ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    name: String,
    ring: Arc<FiniteCommRing>,
    labels: Vec<String>,
    add: Vec<usize>,
    zero: usize,
    /// `act[r * m + x] = r · x`
    act: Vec<usize>,
}

impl FiniteModule {
    pub fn from_tables(
        name: impl Into<String>,
        ring: Arc<FiniteCommRing>,
        labels: Vec<String>,
        add: Vec<usize>,
        zero: usize,
        act: Vec<usize>,
    ) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::Invalid("module carrier must be nonempty".into()));
        }
        if add.len() != m * m || act.len() != ring.size() * m {
            return Err(Error::Invalid("module tables have the wrong shape".into()));
        }
        if add.iter().chain(act.iter()).any(|&x| x >= m) || zero >= m {
            return Err(Error::Invalid("module table entry outside carrier".into()));
        }
        Ok(FiniteModule {
            name: name.into(),
            ring,
            labels,
            add,
            zero,
            act,
        })
    }

    /// The zero module.
    pub fn zero(ring: Arc<FiniteCommRing>) -> Self {
        let act = vec![0; ring.size()];
        FiniteModule {
            name: "0".into(),
            ring,
            labels: vec!["0".into()],
            add: vec![0],
            zero: 0,
            act,
        }
    }

    /// `ring^rank` with componentwise operations.
    pub fn free(ring: Arc<FiniteCommRing>, rank: usize, limits: &Limits) -> Result<Self> {
        let n = ring.size();
        let size = n
            .checked_pow(rank as u32)
            .ok_or_else(|| Error::cap("free module carrier", limits.carrier_cap, usize::MAX))?;
        limits.check_carrier("free module", size)?;
        let decode = |mut x: usize| -> Vec<usize> {
            (0..rank)
                .map(|_| {
                    let c = x % n;
                    x /= n;
                    c
                })
                .collect()
        };
        let encode = |c: &[usize]| -> usize { c.iter().rev().fold(0, |acc, &x| acc * n + x) };
        let vecs: Vec<Vec<usize>> = (0..size).map(decode).collect();
        let mut add = Vec::with_capacity(size * size);
        for a in &vecs {
            for b in &vecs {
                let s: Vec<usize> = a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect();
                add.push(encode(&s));
            }
        }
        let mut act = Vec::with_capacity(n * size);
        for r in ring.elements() {
            for v in &vecs {
                let s: Vec<usize> = v.iter().map(|&x| ring.mul(r, x)).collect();
                act.push(encode(&s));
            }
        }
        let labels = vecs
            .iter()
            .map(|v| {
                if rank == 1 {
                    ring.label(v[0]).to_string()
                } else {
                    let parts: Vec<&str> = v.iter().map(|&x| ring.label(x)).collect();
                    format!("<{}>", parts.join(","))
                }
            })
            .collect();
        let zero = encode(&vec![ring.zero(); rank]);
        let name = format!("{}^{}", ring.name(), rank);
        Self::from_tables(name, ring, labels, add, zero, act)
    }

    /// `ring / I` where `I` is the ideal generated by `generators`.
    pub fn quotient(ring: Arc<FiniteCommRing>, generators: &[usize]) -> Result<Self> {
        if generators.iter().any(|&g| g >= ring.size()) {
            return Err(Error::Invalid("ideal generator outside carrier".into()));
        }
        // ideal = additive closure of { r * g }
        let mut inside = vec![false; ring.size()];
        inside[ring.zero()] = true;
        let mut members = vec![ring.zero()];
        for &g in generators {
            for r in ring.elements() {
                let x = ring.mul(r, g);
                if !inside[x] {
                    inside[x] = true;
                    members.push(x);
                }
            }
        }
        let mut i = 0;
        while i < members.len() {
            for j in 0..=i {
                let s = ring.add(members[i], members[j]);
                if !inside[s] {
                    inside[s] = true;
                    members.push(s);
                }
            }
            i += 1;
        }
        // coset representative = smallest element of the coset
        let mut class = vec![usize::MAX; ring.size()];
        let mut reps = Vec::new();
        for a in ring.elements() {
            if class[a] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(a);
            for &x in &members {
                class[ring.add(a, x)] = id;
            }
        }
        let m = reps.len();
        let add = (0..m * m).map(|i| class[ring.add(reps[i / m], reps[i % m])]).collect();
        let act = (0..ring.size() * m)
            .map(|i| class[ring.mul(i / m, reps[i % m])])
            .collect();
        let labels = reps.iter().map(|&a| format!("[{}]", ring.label(a))).collect();
        let gens: Vec<&str> = generators.iter().map(|&g| ring.label(g)).collect();
        let name = format!("{}/({})", ring.name(), gens.join(","));
        let zero = class[ring.zero()];
        Self::from_tables(name, ring, labels, add, zero, act)
    }

    /// The target of `hom` viewed as a module over its source.
    pub fn restriction(hom: &RingHom) -> Result<Self> {
        let (s, t) = (hom.source(), hom.target());
        let m = t.size();
        let add = (0..m * m).map(|i| t.add(i / m, i % m)).collect();
        let act = (0..s.size() * m).map(|i| t.mul(hom.apply(i / m), i % m)).collect();
        Self::from_tables(
            format!("{} over {}", t.name(), s.name()),
            s.clone(),
            t.labels().to_vec(),
            add,
            t.zero(),
            act,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn ring(&self) -> &Arc<FiniteCommRing> {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn zero_element(&self) -> usize {
        self.zero
    }

    pub fn is_zero(&self) -> bool {
        self.size() == 1
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size() + y]
    }

    #[inline]
    pub fn act(&self, r: usize, x: usize) -> usize {
        self.act[r * self.size() + x]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn validate(&self) -> ValidationReport {
        let r = &self.ring;
        let m = self.size();
        let mut report = ValidationReport::new(format!("module {} over {}", self.name, r.name()));
        for x in 0..m {
            if self.add(x, self.zero) != x {
                report.flag("additive_identity", &[x], "x + 0 != x");
            }
            if !(0..m).any(|y| self.add(x, y) == self.zero) {
                report.flag("additive_inverse", &[x], "no y with x + y = 0");
            }
            if self.act(r.one(), x) != x {
                report.flag("unital_action", &[x], "1 x != x");
            }
            for y in 0..m {
                if self.add(x, y) != self.add(y, x) {
                    report.flag("additive_commutativity", &[x, y], "x + y != y + x");
                }
                for z in 0..m {
                    if self.add(self.add(x, y), z) != self.add(x, self.add(y, z)) {
                        report.flag("additive_associativity", &[x, y, z], "(x+y)+z != x+(y+z)");
                    }
                }
            }
        }
        for a in r.elements() {
            for x in 0..m {
                for y in 0..m {
                    if self.act(a, self.add(x, y)) != self.add(self.act(a, x), self.act(a, y)) {
                        report.flag("action_additive_in_module", &[a, x, y], "a(x+y) != ax+ay");
                    }
                }
                for b in r.elements() {
                    if self.act(r.add(a, b), x) != self.add(self.act(a, x), self.act(b, x)) {
                        report.flag("action_additive_in_ring", &[a, b, x], "(a+b)x != ax+bx");
                    }
                    if self.act(r.mul(a, b), x) != self.act(a, self.act(b, x)) {
                        report.flag("action_associative", &[a, b, x], "(ab)x != a(bx)");
                    }
                }
            }
        }
        report
    }
}
