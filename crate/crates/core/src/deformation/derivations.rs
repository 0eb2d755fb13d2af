use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{square_zero_extend, FiniteCommRing, FiniteModule};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::functors::EvaluableFunctor;
use crate::simplicial::{contractibility, homotopy_fiber, pi0, FiberBranch, HomotopyStatus, HomotopyVerdict, SimplicialSet};

/// A vertex `x` of `F(A)`.
#[derive(Clone, Debug)]
pub struct PointedEvaluation {
    pub functor: Arc<EvaluableFunctor>,
    pub ring: Arc<FiniteCommRing>,
    pub space: Arc<SimplicialSet>,
    pub point: usize,
}

impl PointedEvaluation {
    pub fn new(functor: Arc<EvaluableFunctor>, ring: Arc<FiniteCommRing>, point: usize, limits: &Limits) -> Result<Self> {
        let space = functor.evaluate(&ring, limits)?;
        if point >= space.count(0) {
            return Err(Error::Precondition(format!(
                "{} has {} vertices, no vertex {point}",
                space.name(),
                space.count(0)
            )));
        }
        Ok(PointedEvaluation {
            functor,
            ring,
            space,
            point,
        })
    }

    /// Picks the vertex by its label.
    pub fn by_label(functor: Arc<EvaluableFunctor>, ring: Arc<FiniteCommRing>, label: &str, limits: &Limits) -> Result<Self> {
        let space = functor.evaluate(&ring, limits)?;
        let point = space
            .vertex_labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Precondition(format!("{} has no vertex `{label}`", space.name())))?;
        Self::new(functor, ring, point, limits)
    }

    pub fn label(&self) -> &str {
        self.space.vertex_label(self.point)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DerivationKind {
    /// `hofib(F(A⊕M) → F(A))`
    Absolute,
    /// `hofib(dσ: Der_F → Der_TF)` with the sizes of both sides.
    Relative { der_f: usize, der_tf: usize },
}

#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub base: PointedEvaluation,
    pub module: Arc<FiniteModule>,
    pub space: Arc<SimplicialSet>,
    pub branch: FiberBranch,
    pub kind: DerivationKind,
    /// Levels the fiber does not determine.
    pub inconclusive: Vec<usize>,
    pub verdict: HomotopyVerdict,
}

impl DerivationSpace {
    pub fn pi0(&self) -> usize {
        pi0(&self.space)
    }

    pub fn summary(&self) -> DerivationSummary {
        DerivationSummary {
            functor: self.base.functor.name(),
            ring: self.base.ring.name().to_string(),
            point: self.base.label().to_string(),
            module: self.module.name().to_string(),
            pi0: self.pi0(),
            branch: self.branch.tag(),
            status: self.verdict.status,
        }
    }
}

/// One row of the sampler table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationSummary {
    pub functor: String,
    pub ring: String,
    pub point: String,
    pub module: String,
    pub pi0: usize,
    pub branch: String,
    pub status: HomotopyStatus,
}

/// `Der_F(X, M) = hofib(F(A⊕M) → F(A))` over `x`.
pub fn derivations(
    f: &Arc<EvaluableFunctor>,
    a: &Arc<FiniteCommRing>,
    x: usize,
    m: &Arc<FiniteModule>,
    limits: &Limits,
) -> Result<DerivationSpace> {
    let base = PointedEvaluation::new(f.clone(), a.clone(), x, limits)?;
    let ext = square_zero_extend(a, m, limits)?;
    let projection = f.map(&ext.projection, limits)?;
    let fiber = homotopy_fiber(&projection, x, limits)?;
    let space = Arc::new((*fiber.space).clone().renamed(format!("Der_{}({}, {})", f.name(), a.name(), m.name())));
    let verdict = contractibility(&fiber.space);
    Ok(DerivationSpace {
        base,
        module: m.clone(),
        space,
        branch: fiber.branch,
        kind: DerivationKind::Absolute,
        inconclusive: fiber.inconclusive.clone(),
        verdict,
    })
}

/// A point of the sampler universe: ring, vertex of `F(A)`, module.
#[derive(Clone, Debug)]
pub struct DeltaSample {
    pub ring: Arc<FiniteCommRing>,
    pub point: usize,
    pub module: Arc<FiniteModule>,
}

/// `ΔF` on every sample, in input order.
pub fn delta_sampler(f: &Arc<EvaluableFunctor>, universe: &[DeltaSample], limits: &Limits) -> Result<Vec<DerivationSummary>> {
    universe
        .par_iter()
        .map(|s| derivations(f, &s.ring, s.point, &s.module, limits).map(|d| d.summary()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::{truncated_poly, zmod};
    use crate::simplicial::build;

    fn f2() -> Arc<FiniteCommRing> {
        Arc::new(zmod(2).unwrap().renamed("F2"))
    }

    fn rep_dual() -> Arc<EvaluableFunctor> {
        Arc::new(EvaluableFunctor::Representable(Arc::new(truncated_poly(2, 2, &Limits::default()).unwrap())))
    }

    #[test]
    fn representable_lifts_over_f2() {
        let lim = Limits::default();
        let m = Arc::new(FiniteModule::free(f2(), 1, &lim).unwrap());
        let d = derivations(&rep_dual(), &f2(), 0, &m, &lim).unwrap();
        // t ↦ (0,0) and t ↦ (0,1)
        assert_eq!(d.pi0(), 2);
        assert_eq!(d.space.count(0), 2);
        assert_eq!(d.branch, FiberBranch::Discrete);
        assert!(d.verdict.is_non_contractible());
    }

    #[test]
    fn zero_module_is_contractible() {
        let lim = Limits::default();
        let zero = Arc::new(FiniteModule::zero(f2()));
        let d = derivations(&rep_dual(), &f2(), 0, &zero, &lim).unwrap();
        assert_eq!(d.space.count(0), 1);
        assert!(d.verdict.is_contractible(), "{:?}", d.verdict);
    }

    #[test]
    fn constant_functor_fiber_is_contractible() {
        let lim = Limits::default().with_max_dim(2);
        let s = Arc::new(build::simplex(1, 2, &lim).unwrap());
        let f = Arc::new(EvaluableFunctor::Constant(s));
        let m = Arc::new(FiniteModule::free(f2(), 1, &lim).unwrap());
        let d = derivations(&f, &f2(), 0, &m, &lim).unwrap();
        assert!(d.verdict.is_contractible());
    }

    #[test]
    fn sampler_keeps_order() {
        let lim = Limits::default();
        let m = Arc::new(FiniteModule::free(f2(), 1, &lim).unwrap());
        let zero = Arc::new(FiniteModule::zero(f2()));
        let universe = vec![
            DeltaSample {
                ring: f2(),
                point: 0,
                module: m.clone(),
            },
            DeltaSample {
                ring: f2(),
                point: 0,
                module: zero,
            },
            DeltaSample {
                ring: f2(),
                point: 0,
                module: m,
            },
        ];
        let rows = delta_sampler(&rep_dual(), &universe, &lim).unwrap();
        assert_eq!(rows.iter().map(|r| r.pi0).collect::<Vec<_>>(), vec![2, 1, 2]);
        assert!(delta_sampler(&rep_dual(), &[], &lim).unwrap().is_empty());
    }

    #[test]
    fn point_out_of_range() {
        let lim = Limits::default();
        assert!(matches!(
            PointedEvaluation::new(rep_dual(), f2(), 5, &lim),
            Err(Error::Precondition(_))
        ));
    }
}
