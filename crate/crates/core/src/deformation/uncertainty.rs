use serde::Serialize;

use crate::error::{Error, Result};
use crate::functors::EvaluableFunctor;
use crate::simplicial::{contractibility, Certificate, HomotopyStatus, HomotopyVerdict, SimplicialSet};

use super::derivations::{DerivationKind, DerivationSpace};

/// Contractibility of `X × Y` from the factors alone. A nonempty factor is
/// a retract of the product, so any obstruction on one side survives.
pub fn product_verdict(x: &SimplicialSet, y: &SimplicialSet) -> HomotopyVerdict {
    for s in [x, y] {
        if s.is_empty() {
            return HomotopyVerdict {
                status: HomotopyStatus::NonContractible,
                witness: format!("factor {} is empty", s.name()),
                certificate: None,
            };
        }
    }
    let (vx, vy) = (contractibility(x), contractibility(y));
    for (s, v) in [(x, &vx), (y, &vy)] {
        if v.is_non_contractible() {
            return HomotopyVerdict {
                status: HomotopyStatus::NonContractible,
                witness: format!("factor {}: {}", s.name(), v.witness),
                certificate: None,
            };
        }
    }
    match (vx.certificate, vy.certificate) {
        (Some(l), Some(r)) => {
            let c = Certificate::Product {
                left: Box::new(l),
                right: Box::new(r),
            };
            HomotopyVerdict {
                status: HomotopyStatus::Contractible,
                witness: c.describe(),
                certificate: Some(c),
            }
        }
        _ => HomotopyVerdict {
            status: HomotopyStatus::Inconclusive,
            witness: format!("a factor is undecided: {} / {}", vx.witness, vy.witness),
            certificate: None,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    pub label: String,
    pub functor: String,
    pub ring: String,
    pub point: String,
    pub module: String,
    pub kind: DerivationKind,
    pub vertices: usize,
    pub pi0: usize,
    pub branch: String,
    pub inconclusive_levels: Vec<usize>,
    pub verdict: HomotopyVerdict,
}

impl FactorReport {
    fn new(label: &str, d: &DerivationSpace) -> Self {
        FactorReport {
            label: label.to_string(),
            functor: d.base.functor.name(),
            ring: d.base.ring.name().to_string(),
            point: d.base.label().to_string(),
            module: d.module.name().to_string(),
            kind: d.kind,
            vertices: d.space.count(0),
            pi0: d.pi0(),
            branch: d.branch.tag(),
            inconclusive_levels: d.inconclusive.clone(),
            verdict: d.verdict.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UncertaintyVerdict {
    pub v_side: FactorReport,
    pub e_side: FactorReport,
    pub product: HomotopyVerdict,
    /// The principle asks for a non-contractible product.
    pub holds: bool,
}

/// `Der_{V/TV}(Y, M_V) × Der_E(X, M_E)`.
pub fn uncertainty_product(v_side: &DerivationSpace, e_side: &DerivationSpace) -> Result<UncertaintyVerdict> {
    if !matches!(v_side.kind, DerivationKind::Relative { .. }) {
        return Err(Error::Precondition("the observable factor must be a relative derivation space".into()));
    }
    if e_side.kind != DerivationKind::Absolute {
        return Err(Error::Precondition("the energy factor must be an absolute derivation space".into()));
    }
    if !matches!(e_side.base.functor.as_ref(), EvaluableFunctor::Composite { .. }) {
        return Err(Error::Precondition(format!(
            "{} is not derived from an energy functor",
            e_side.base.functor.name()
        )));
    }
    let product = product_verdict(&v_side.space, &e_side.space);
    Ok(UncertaintyVerdict {
        v_side: FactorReport::new("Der_{V/TV}", v_side),
        e_side: FactorReport::new("Der_E", e_side),
        holds: product.is_non_contractible(),
        product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Limits;
    use crate::simplicial::build;

    fn lim() -> Limits {
        Limits::default().with_max_dim(2)
    }

    #[test]
    fn points_give_a_contractible_product() {
        let v = product_verdict(&build::point(2), &build::point(2));
        assert!(v.is_contractible());
    }

    #[test]
    fn two_points_force_non_contractible() {
        let two = build::discrete(vec!["a".into(), "b".into()], 2);
        let v = product_verdict(&build::point(2), &two);
        assert!(v.is_non_contractible());
        assert!(v.witness.contains("pi0"));
    }

    #[test]
    fn empty_factor_is_named() {
        let v = product_verdict(&SimplicialSet::empty(2), &build::point(2));
        assert!(v.is_non_contractible());
        assert!(v.witness.contains("empty"));
    }

    #[test]
    fn circle_factor_survives() {
        let circle = build::boundary(2, 2, &lim()).unwrap();
        let simplex = build::simplex(2, 2, &lim()).unwrap();
        let v = product_verdict(&simplex, &circle);
        assert!(v.is_non_contractible());
    }
}
