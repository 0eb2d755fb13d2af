use std::sync::Arc;

use crate::algebra::{enumerate_homs, FiniteCommRing};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::report::ValidationReport;

use super::energy::EnergyFunctor;
use super::evaluable::EvaluableFunctor;

/// `V ∘ E` with its two factors kept for inspection.
#[derive(Clone, Debug)]
pub struct Brane {
    pub energy: Arc<EnergyFunctor>,
    pub observable: Arc<EvaluableFunctor>,
    pub composite: EvaluableFunctor,
}

pub fn compose(observable: Arc<EvaluableFunctor>, energy: Arc<EnergyFunctor>) -> Result<Brane> {
    if let EvaluableFunctor::SiteRepresentable { site, .. } = observable.as_ref() {
        if site.category() != energy.target().category() {
            return Err(Error::Precondition(format!(
                "{} is defined on {}, but {} lands in {}",
                observable.name(),
                site.name(),
                energy.name(),
                energy.target().name()
            )));
        }
    }
    let composite = EvaluableFunctor::Composite {
        observable: observable.clone(),
        energy: energy.clone(),
    };
    Ok(Brane {
        energy,
        observable,
        composite,
    })
}

impl Brane {
    pub fn name(&self) -> String {
        self.composite.name()
    }

    /// `(V∘E)(U) = V(E(U))` and likewise on arrows: on the objects of the
    /// source site for site-valued observables, on `universe` and its homs
    /// for ring-valued ones.
    pub fn check_coherence(&self, universe: &[Arc<FiniteCommRing>], limits: &Limits) -> Result<ValidationReport> {
        let mut report = ValidationReport::new(format!("coherence of {}", self.name()));
        if self.observable.is_site_valued() {
            let c = self.energy.source().category();
            for o in 0..c.object_count() {
                let lhs = self.composite.evaluate_object(o, limits)?;
                let rhs = self.observable.evaluate_object(self.energy.object(o), limits)?;
                if lhs.counts() != rhs.counts() {
                    report.flag("objects", &[o], format!("values at {} differ", c.objects()[o]));
                }
            }
            for u in 0..c.morphism_count() {
                let lhs = self.composite.map_object(u, limits)?;
                let rhs = self.observable.map_object(self.energy.morphism(u), limits)?;
                if (0..=lhs.source().dim()).any(|n| lhs.level(n) != rhs.level(n)) {
                    report.flag("morphisms", &[u], format!("values at {} differ", c.morphism(u).name));
                }
            }
            return Ok(report);
        }
        for (i, a) in universe.iter().enumerate() {
            let lhs = self.composite.evaluate(a, limits)?;
            let rhs = self.observable.evaluate(&self.energy.apply_ring(a, limits)?, limits)?;
            if lhs.counts() != rhs.counts() {
                report.flag("objects", &[i], format!("values at {} differ", a.name()));
            }
            for (j, b) in universe.iter().enumerate() {
                for (k, phi) in enumerate_homs(a, b).iter().enumerate() {
                    let lhs = self.composite.map(phi, limits)?;
                    let rhs = self.observable.map(&self.energy.apply_hom(phi, limits)?, limits)?;
                    if (0..=lhs.source().dim()).any(|n| lhs.level(n) != rhs.level(n)) {
                        report.flag("morphisms", &[i, j, k], format!("values at {} differ", phi.describe()));
                    }
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FiniteCategory;
    use crate::simplicial::build;
    use crate::site::{FiniteSite, PullbackMode, Topology};

    fn site(name: &str) -> Arc<FiniteSite> {
        let c = Arc::new(FiniteCategory::powerset(&["a", "b"]).unwrap());
        Arc::new(
            FiniteSite::new(name, c, Some(2), PullbackMode::Auto, Vec::new(), &Topology::Union, Vec::new(), &Limits::default())
                .unwrap(),
        )
    }

    #[test]
    fn constant_point_observable() {
        let e = Arc::new(EnergyFunctor::identity(site("P")));
        let b = compose(Arc::new(EvaluableFunctor::Constant(Arc::new(build::point(0)))), e).unwrap();
        let lim = Limits::default();
        for o in 0..4 {
            assert_eq!(b.composite.evaluate_object(o, &lim).unwrap().count(0), 1);
        }
        assert!(b.check_coherence(&[], &lim).unwrap().passed());
    }

    #[test]
    fn swap_relabels_representable() {
        // a <-> b on P(a,b)
        let s = site("P");
        let e = Arc::new(EnergyFunctor::from_object_map("swap", s.clone(), s.clone(), vec![0, 2, 1, 3]).unwrap());
        let v = Arc::new(EvaluableFunctor::SiteRepresentable { site: s, object: 1 });
        let b = compose(v.clone(), e).unwrap();
        let lim = Limits::default();
        let counts = |f: &EvaluableFunctor| (0..4).map(|o| f.evaluate_object(o, &lim).unwrap().count(0)).collect::<Vec<_>>();
        assert_eq!(counts(&v), vec![1, 1, 0, 0]);
        assert_eq!(counts(&b.composite), vec![1, 0, 1, 0]);
        assert!(b.check_coherence(&[], &lim).unwrap().passed());
    }

    #[test]
    fn ring_observable_over_a_power_energy() {
        use crate::algebra::builders::{truncated_poly, zmod};
        use crate::functors::AlgebraAction;
        let lim = Limits::default();
        let e = Arc::new(EnergyFunctor::identity(site("P")).with_algebra(AlgebraAction::Power { k: 2 }));
        let b = Arc::new(truncated_poly(2, 2, &lim).unwrap());
        let brane = compose(Arc::new(EvaluableFunctor::Representable(b)), e).unwrap();
        let universe = vec![Arc::new(zmod(2).unwrap()), Arc::new(truncated_poly(2, 2, &lim).unwrap())];
        assert!(brane.check_coherence(&universe, &lim).unwrap().passed());
        // Hom(F2[t]/t², F2 × F2) has one point
        assert_eq!(brane.composite.evaluate(&universe[0], &lim).unwrap().count(0), 1);
    }

    #[test]
    fn domain_mismatch_is_rejected() {
        let other = Arc::new(FiniteCategory::powerset(&["x"]).unwrap());
        let t = Arc::new(
            FiniteSite::new("Q", other, Some(1), PullbackMode::Auto, Vec::new(), &Topology::Trivial, Vec::new(), &Limits::default())
                .unwrap(),
        );
        let e = Arc::new(EnergyFunctor::identity(site("P")));
        let v = Arc::new(EvaluableFunctor::SiteRepresentable { site: t, object: 0 });
        assert!(matches!(compose(v, e), Err(Error::Precondition(_))));
    }
}
