use std::fmt;

use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// A finite commutative ring given by explicit operation tables.
///
/// Elements are the ids `0..size`. Tables are row-major: `add[a * n + b]`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteCommRing {
    name: String,
    labels: Vec<String>,
    add: Vec<usize>,
    mul: Vec<usize>,
    zero: usize,
    one: usize,
    neg: Vec<Option<usize>>,
}

impl fmt::Debug for FiniteCommRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteCommRing({}, |R|={})", self.name, self.size())
    }
}

impl FiniteCommRing {
    /// Builds a ring from tables. Only totality is checked here; the ring
    /// axioms are checked by [`FiniteCommRing::validate`].
    pub fn from_tables(
        name: impl Into<String>,
        labels: Vec<String>,
        add: Vec<usize>,
        mul: Vec<usize>,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Invalid("ring carrier must be nonempty".into()));
        }
        if add.len() != n * n || mul.len() != n * n {
            return Err(Error::Invalid(format!(
                "operation tables must have {} entries",
                n * n
            )));
        }
        if add.iter().chain(mul.iter()).any(|&x| x >= n) || zero >= n || one >= n {
            return Err(Error::Invalid("table entry outside carrier".into()));
        }
        let neg = (0..n)
            .map(|a| (0..n).find(|&b| add[a * n + b] == zero))
            .collect();
        Ok(FiniteCommRing {
            name: name.into(),
            labels,
            add,
            mul,
            zero,
            one,
            neg,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn is_zero_ring(&self) -> bool {
        self.zero == self.one
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size() + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size() + b]
    }

    /// Additive inverse. Panics on tables that are not additive groups.
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a].expect("additive inverse missing: ring tables are not a group")
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    /// Integer multiple `k * a`.
    pub fn times(&self, k: usize, a: usize) -> usize {
        (0..k).fold(self.zero, |acc, _| self.add(acc, a))
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.elements().any(|b| self.mul(a, b) == self.one)
    }

    pub fn units(&self) -> Vec<usize> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    /// Same operation tables, ignoring names and labels.
    pub fn same_structure(&self, other: &FiniteCommRing) -> bool {
        self.add == other.add && self.mul == other.mul && self.zero == other.zero && self.one == other.one
    }

    /// Exhaustive scan of the commutative ring axioms.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new(format!("ring {}", self.name));
        let n = self.size();
        let els = || 0..n;
        for a in els() {
            if self.add(a, self.zero) != a {
                report.flag("additive_identity", &[a], "a + 0 != a");
            }
            if self.mul(a, self.one) != a {
                report.flag("multiplicative_identity", &[a], "a * 1 != a");
            }
            if self.neg[a].is_none() {
                report.flag("additive_inverse", &[a], "no b with a + b = 0");
            }
            for b in els() {
                if self.add(a, b) != self.add(b, a) {
                    report.flag("additive_commutativity", &[a, b], "a + b != b + a");
                }
                if self.mul(a, b) != self.mul(b, a) {
                    report.flag("multiplicative_commutativity", &[a, b], "a * b != b * a");
                }
                for c in els() {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        report.flag("additive_associativity", &[a, b, c], "(a+b)+c != a+(b+c)");
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        report.flag(
                            "multiplicative_associativity",
                            &[a, b, c],
                            "(ab)c != a(bc)",
                        );
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        report.flag("distributivity", &[a, b, c], "a(b+c) != ab+ac");
                    }
                }
            }
        }
        report
    }
}
