use std::sync::Arc;

use crate::config::Limits;
use crate::error::{Error, Result};

use super::hom::RingHom;
use super::module::FiniteModule;
use super::ring::FiniteCommRing;

/// `A ⊕ M` with `(a, m)(a', m') = (aa', am' + a'm)`.
///
/// The element `(a, m)` has id `a * |M| + m`.
#[derive(Clone, Debug)]
pub struct SquareZeroExtension {
    pub base: Arc<FiniteCommRing>,
    pub module: Arc<FiniteModule>,
    pub total: Arc<FiniteCommRing>,
    pub projection: RingHom,
    pub splitting: RingHom,
}

impl SquareZeroExtension {
    pub fn pair(&self, a: usize, m: usize) -> usize {
        a * self.module.size() + m
    }

    pub fn unpair(&self, x: usize) -> (usize, usize) {
        (x / self.module.size(), x % self.module.size())
    }

    /// Elements `(0, m)`, the kernel of the projection.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.module.size()).map(|m| self.pair(self.base.zero(), m)).collect()
    }
}

pub fn square_zero_extend(
    base: &Arc<FiniteCommRing>,
    module: &Arc<FiniteModule>,
    limits: &Limits,
) -> Result<SquareZeroExtension> {
    if !module.ring().same_structure(base) {
        return Err(Error::Precondition(format!(
            "module {} is over {}, not {}",
            module.name(),
            module.ring().name(),
            base.name()
        )));
    }
    let (n, m) = (base.size(), module.size());
    limits.check_carrier("square-zero extension", n * m)?;
    let size = n * m;
    let mut add = Vec::with_capacity(size * size);
    let mut mul = Vec::with_capacity(size * size);
    for x in 0..size {
        let (a, u) = (x / m, x % m);
        for y in 0..size {
            let (b, v) = (y / m, y % m);
            add.push(base.add(a, b) * m + module.add(u, v));
            let cross = module.add(module.act(a, v), module.act(b, u));
            mul.push(base.mul(a, b) * m + cross);
        }
    }
    let labels = (0..size)
        .map(|x| format!("({}|{})", base.label(x / m), module.label(x % m)))
        .collect();
    let zero = base.zero() * m + module.zero_element();
    let one = base.one() * m + module.zero_element();
    let total = Arc::new(FiniteCommRing::from_tables(
        format!("{}+{}", base.name(), module.name()),
        labels,
        add,
        mul,
        zero,
        one,
    )?);
    let projection = RingHom::from_table(total.clone(), base.clone(), (0..size).map(|x| x / m).collect())?;
    let splitting = RingHom::from_table(
        base.clone(),
        total.clone(),
        base.elements().map(|a| a * m + module.zero_element()).collect(),
    )?;
    Ok(SquareZeroExtension {
        base: base.clone(),
        module: module.clone(),
        total,
        projection,
        splitting,
    })
}

/// `A[ε] = A ⊕ A·ε`.
#[derive(Clone, Debug)]
pub struct DualNumbers {
    pub base: Arc<FiniteCommRing>,
    pub total: Arc<FiniteCommRing>,
    /// `ε ↦ 0`
    pub augmentation: RingHom,
    /// `A → A[ε]`
    pub unit: RingHom,
    pub epsilon: usize,
}

pub fn dual_numbers(base: &Arc<FiniteCommRing>, limits: &Limits) -> Result<DualNumbers> {
    let rank_one = Arc::new(FiniteModule::free(base.clone(), 1, limits)?);
    let ext = square_zero_extend(base, &rank_one, limits)?;
    let n = base.size();
    // relabel (a|b) as a+bε
    let labels: Vec<String> = (0..n * n)
        .map(|x| {
            let (a, b) = (x / n, x % n);
            match (a == base.zero(), b == base.zero()) {
                (_, true) => base.label(a).to_string(),
                (true, false) if b == base.one() => "ε".to_string(),
                (true, false) => format!("{}ε", base.label(b)),
                (false, false) if b == base.one() => format!("{}+ε", base.label(a)),
                (false, false) => format!("{}+{}ε", base.label(a), base.label(b)),
            }
        })
        .collect();
    let t = &ext.total;
    let tables = |f: fn(&FiniteCommRing, usize, usize) -> usize| -> Vec<usize> {
        (0..n * n * n * n).map(|i| f(t, i / (n * n), i % (n * n))).collect()
    };
    let total = Arc::new(FiniteCommRing::from_tables(
        format!("{}[ε]", base.name()),
        labels,
        tables(FiniteCommRing::add),
        tables(FiniteCommRing::mul),
        t.zero(),
        t.one(),
    )?);
    let augmentation = RingHom::from_table(total.clone(), base.clone(), ext.projection.table().to_vec())?;
    let unit = RingHom::from_table(base.clone(), total.clone(), ext.splitting.table().to_vec())?;
    Ok(DualNumbers {
        base: base.clone(),
        epsilon: ext.pair(base.zero(), base.one()),
        total,
        augmentation,
        unit,
    })
}

impl DualNumbers {
    /// `φ[ε] : A[ε] → B[ε]`, `a + bε ↦ φ(a) + φ(b)ε`.
    pub fn lift_hom(&self, other: &DualNumbers, phi: &RingHom) -> Result<RingHom> {
        if !phi.source().same_structure(&self.base) || !phi.target().same_structure(&other.base) {
            return Err(Error::Precondition("hom does not match dual-number bases".into()));
        }
        let (n, k) = (self.base.size(), other.base.size());
        let map = (0..n * n).map(|x| phi.apply(x / n) * k + phi.apply(x % n)).collect();
        RingHom::from_table(self.total.clone(), other.total.clone(), map)
    }
}
