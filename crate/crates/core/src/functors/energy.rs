use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::algebra::builders::product;
use crate::algebra::{FiniteCommRing, RingHom};
use crate::category::CatFunctor;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::site::{FiniteSite, PullbackMode, SimplicialObject, Topology};

use super::evaluable::EvaluableFunctor;

/// How an energy acts on rings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum AlgebraAction {
    #[default]
    Identity,
    /// `A ↦ A^k`, homs componentwise.
    Power { k: usize },
}

/// A functor between finite sites together with its action on rings.
#[derive(Clone, Debug)]
pub struct EnergyFunctor {
    name: String,
    source: Arc<FiniteSite>,
    target: Arc<FiniteSite>,
    map: Arc<CatFunctor>,
    algebra: AlgebraAction,
    probe: Option<Arc<FiniteCommRing>>,
    intended_fault: Option<String>,
}

impl EnergyFunctor {
    pub fn new(
        name: impl Into<String>,
        source: Arc<FiniteSite>,
        target: Arc<FiniteSite>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<Self> {
        let map = CatFunctor::new(source.category().clone(), target.category().clone(), objects, morphisms)?;
        Ok(Self::from_functor(name, source, target, map))
    }

    /// Morphisms are determined by objects (thin targets).
    pub fn from_object_map(
        name: impl Into<String>,
        source: Arc<FiniteSite>,
        target: Arc<FiniteSite>,
        objects: Vec<usize>,
    ) -> Result<Self> {
        let map = CatFunctor::from_object_map(source.category().clone(), target.category().clone(), objects)?;
        Ok(Self::from_functor(name, source, target, map))
    }

    pub fn identity(site: Arc<FiniteSite>) -> Self {
        let map = CatFunctor::identity(site.category().clone());
        Self::from_functor(format!("id({})", site.name()), site.clone(), site, map)
    }

    fn from_functor(name: impl Into<String>, source: Arc<FiniteSite>, target: Arc<FiniteSite>, map: CatFunctor) -> Self {
        EnergyFunctor {
            name: name.into(),
            source,
            target,
            map: Arc::new(map),
            algebra: AlgebraAction::Identity,
            probe: None,
            intended_fault: None,
        }
    }

    pub fn with_algebra(mut self, algebra: AlgebraAction) -> Self {
        self.algebra = algebra;
        self
    }

    /// The ring `B` of the evaluable `A ↦ Hom(B, E(A))`.
    pub fn with_probe(mut self, probe: Arc<FiniteCommRing>) -> Self {
        self.probe = Some(probe);
        self
    }

    pub fn with_intended_fault(mut self, axiom: impl Into<String>) -> Self {
        self.intended_fault = Some(axiom.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<FiniteSite> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteSite> {
        &self.target
    }

    pub fn functor(&self) -> &Arc<CatFunctor> {
        &self.map
    }

    pub fn algebra(&self) -> AlgebraAction {
        self.algebra
    }

    pub fn probe(&self) -> Option<&Arc<FiniteCommRing>> {
        self.probe.as_ref()
    }

    pub fn intended_fault(&self) -> Option<&str> {
        self.intended_fault.as_deref()
    }

    pub fn object(&self, o: usize) -> usize {
        self.map.objects[o]
    }

    pub fn morphism(&self, f: usize) -> usize {
        self.map.morphisms[f]
    }

    pub fn apply_ring(&self, a: &Arc<FiniteCommRing>, limits: &Limits) -> Result<Arc<FiniteCommRing>> {
        match self.algebra {
            AlgebraAction::Identity => Ok(a.clone()),
            AlgebraAction::Power { k: 0 } => Err(Error::Invalid("power action needs k >= 1".into())),
            AlgebraAction::Power { k: 1 } => Ok(a.clone()),
            AlgebraAction::Power { k } => {
                let factors = vec![a.as_ref(); k];
                Ok(Arc::new(product(&factors, limits)?.renamed(format!("({})^{k}", a.name()))))
            }
        }
    }

    /// `E(φ)` between `apply_ring` of its ends.
    pub fn apply_hom(&self, phi: &RingHom, limits: &Limits) -> Result<RingHom> {
        match self.algebra {
            AlgebraAction::Identity | AlgebraAction::Power { k: 1 } => Ok(phi.clone()),
            AlgebraAction::Power { k } => {
                let source = self.apply_ring(phi.source(), limits)?;
                let target = self.apply_ring(phi.target(), limits)?;
                let (n, m) = (phi.source().size(), phi.target().size());
                let map = (0..source.size())
                    .map(|x| {
                        let mut rest = x;
                        let mut digits = vec![0; k];
                        for d in digits.iter_mut().rev() {
                            *d = rest % n;
                            rest /= n;
                        }
                        digits.iter().fold(0, |acc, &d| acc * m + phi.apply(d))
                    })
                    .collect();
                RingHom::from_table(source, target, map)
            }
        }
    }

    /// `A ↦ Hom(probe, E(A))`.
    pub fn evaluable(self: &Arc<Self>) -> Result<EvaluableFunctor> {
        let probe = self
            .probe
            .clone()
            .ok_or_else(|| Error::Precondition(format!("energy {} has no probe ring", self.name)))?;
        Ok(EvaluableFunctor::Composite {
            observable: Arc::new(EvaluableFunctor::Representable(probe)),
            energy: self.clone(),
        })
    }

    /// Levelwise image in the target site.
    pub fn image(&self, x: &SimplicialObject) -> Result<SimplicialObject> {
        if !Arc::ptr_eq(x.site(), &self.source) && x.site().category() != self.source.category() {
            return Err(Error::Precondition(format!("{} does not live in {}", x.name(), self.source.name())));
        }
        let faces = (0..=x.dim())
            .map(|n| (0..if n == 0 { 0 } else { n + 1 }).map(|i| self.morphism(x.face(n, i))).collect())
            .collect();
        let degens = x.has_degeneracies().then(|| {
            (0..x.dim())
                .map(|n| (0..=n).map(|i| self.morphism(x.degen(n, i).expect("degeneracies present"))).collect())
                .collect()
        });
        SimplicialObject::new(
            format!("E({})", x.name()),
            self.target.clone(),
            x.objects().iter().map(|&o| self.object(o)).collect(),
            faces,
            degens,
            x.augmentation().map(|(y, a)| (self.object(y), self.morphism(a))),
        )
    }

    /// The subcategory of the target generated by the image, with the image
    /// covering families and pullbacks searched inside it.
    pub fn image_site(&self, limits: &Limits) -> Result<FiniteSite> {
        let c = self.target.category();
        let mut objects: Vec<usize> = self.map.objects.clone();
        objects.sort_unstable();
        objects.dedup();
        let (sub, retained) = c.subcategory(&objects, &self.map.morphisms)?;
        let local = |f: usize| retained.binary_search(&f).expect("image morphism retained");
        let mut covers = vec![Vec::new(); objects.len()];
        for u in 0..self.source.category().object_count() {
            let eu = objects.binary_search(&self.object(u)).expect("image object");
            for fam in self.source.covers(u) {
                covers[eu].push(fam.iter().map(|&f| local(self.morphism(f))).collect());
            }
        }
        FiniteSite::new(
            format!("im({})", self.name),
            Arc::new(sub),
            None,
            PullbackMode::Search,
            Vec::new(),
            &Topology::Listed(covers),
            Vec::new(),
            limits,
        )
    }
}
