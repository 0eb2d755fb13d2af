use std::sync::Arc;

use crate::algebra::{dual_numbers, square_zero_extend, DualNumbers, FiniteCommRing, FiniteModule};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::functors::EvaluableFunctor;
use crate::simplicial::{contractibility, homotopy_fiber, pi0, SimplicialMap, SimplicialSet};

use super::derivations::{DerivationKind, DerivationSpace, PointedEvaluation};

/// `TF(A) = F(A[ε])` with the section from the unit `A → A[ε]` and the
/// projection from `ε ↦ 0`.
#[derive(Clone, Debug)]
pub struct TangentEvaluation {
    pub functor: Arc<EvaluableFunctor>,
    pub ring: Arc<FiniteCommRing>,
    pub dual: DualNumbers,
    pub space: Arc<SimplicialSet>,
    pub section: SimplicialMap,
    pub projection: SimplicialMap,
}

impl TangentEvaluation {
    /// `projection ∘ section = id`, compared table by table.
    pub fn retraction_holds(&self) -> Result<bool> {
        let composite = self.section.then(&self.projection)?;
        let base = composite.source();
        Ok(composite.target().counts() == base.counts()
            && (0..=base.dim()).all(|k| composite.level(k).iter().enumerate().all(|(i, &j)| i == j)))
    }
}

pub fn tangent(f: &Arc<EvaluableFunctor>, a: &Arc<FiniteCommRing>, limits: &Limits) -> Result<TangentEvaluation> {
    let dual = dual_numbers(a, limits)?;
    let space = f.evaluate(&dual.total, limits)?;
    let section = f.map(&dual.unit, limits)?;
    let projection = f.map(&dual.augmentation, limits)?;
    Ok(TangentEvaluation {
        functor: f.clone(),
        ring: a.clone(),
        dual,
        space,
        section,
        projection,
    })
}

/// `Der_{F/TF}(Y, M)`: the fiber of `dσ: Der_F(Y,M) → Der_TF(Y,M)` over the
/// image of the trivial derivation at `y`.
pub fn relative_derivations(
    f: &Arc<EvaluableFunctor>,
    a: &Arc<FiniteCommRing>,
    y: usize,
    m: &Arc<FiniteModule>,
    limits: &Limits,
) -> Result<DerivationSpace> {
    let base = PointedEvaluation::new(f.clone(), a.clone(), y, limits)?;
    let ext = square_zero_extend(a, m, limits)?;
    let da = dual_numbers(a, limits)?;
    let dt = dual_numbers(&ext.total, limits)?;

    let p = f.map(&ext.projection, limits)?;
    let der_f = homotopy_fiber(&p, y, limits)?;
    let sigma_a = f.map(&da.unit, limits)?;
    let sigma_t = f.map(&dt.unit, limits)?;
    let tp = f.map(&dt.lift_hom(&da, &ext.projection)?, limits)?;
    let der_tf = homotopy_fiber(&tp, sigma_a.apply(0, y), limits)?;
    let d_sigma = der_f.induced(&der_tf, &sigma_t, &sigma_a)?;

    let trivial = f.map(&ext.splitting, limits)?.apply(0, y);
    let start = der_f
        .lift_vertex(trivial)
        .ok_or_else(|| Error::Incomplete("trivial derivation has no fiber vertex".into()))?;
    let fiber = homotopy_fiber(&d_sigma, d_sigma.apply(0, start), limits)?;
    let space = Arc::new((*fiber.space).clone().renamed(format!("Der_{}/T({}, {})", f.name(), a.name(), m.name())));
    let verdict = contractibility(&fiber.space);
    let mut inconclusive = fiber.inconclusive.clone();
    inconclusive.extend(&der_f.inconclusive);
    inconclusive.extend(&der_tf.inconclusive);
    inconclusive.sort_unstable();
    inconclusive.dedup();
    Ok(DerivationSpace {
        base,
        module: m.clone(),
        space,
        branch: fiber.branch,
        kind: DerivationKind::Relative {
            der_f: pi0(&der_f.space),
            der_tf: pi0(&der_tf.space),
        },
        inconclusive,
        verdict,
    })
}
