use std::sync::Arc;

use crate::algebra::{enumerate_homs, FiniteCommRing, RingHom};
use crate::category::{CatFunctor, FiniteCategory};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::simplicial::{build, SimplicialMap, SimplicialSet};
use crate::site::FiniteSite;

use super::energy::EnergyFunctor;

/// Nerve-valued rules on rings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NerveRule {
    /// `A ↦ N(A^×)`, the nerve of the unit group.
    Units,
}

/// A functor from rings (or from the objects of a site) to simplicial sets,
/// evaluated at dimension `limits.max_dim`.
#[derive(Clone, Debug)]
pub enum EvaluableFunctor {
    /// `A ↦ Hom(B, A)`, discrete.
    Representable(Arc<FiniteCommRing>),
    /// `U ↦ Hom(U, b)` on the objects of a site, discrete.
    SiteRepresentable { site: Arc<FiniteSite>, object: usize },
    Constant(Arc<SimplicialSet>),
    NerveValued(NerveRule),
    /// `observable ∘ energy`.
    Composite {
        observable: Arc<EvaluableFunctor>,
        energy: Arc<EnergyFunctor>,
    },
}

impl EvaluableFunctor {
    pub fn name(&self) -> String {
        match self {
            EvaluableFunctor::Representable(b) => format!("Rep({})", b.name()),
            EvaluableFunctor::SiteRepresentable { site, object } => {
                format!("h({})", site.category().objects()[*object])
            }
            EvaluableFunctor::Constant(s) => format!("Const({})", s.name()),
            EvaluableFunctor::NerveValued(NerveRule::Units) => "BUnits".into(),
            EvaluableFunctor::Composite { observable, energy } => format!("{}.{}", observable.name(), energy.name()),
        }
    }

    /// Whether every value is a discrete simplicial set.
    pub fn is_discrete_valued(&self) -> bool {
        match self {
            EvaluableFunctor::Representable(_) | EvaluableFunctor::SiteRepresentable { .. } => true,
            EvaluableFunctor::Constant(s) => s.is_discrete(),
            EvaluableFunctor::NerveValued(_) => false,
            EvaluableFunctor::Composite { observable, .. } => observable.is_discrete_valued(),
        }
    }

    /// Whether the functor is evaluated on site objects rather than rings.
    pub fn is_site_valued(&self) -> bool {
        match self {
            EvaluableFunctor::SiteRepresentable { .. } | EvaluableFunctor::Constant(_) => true,
            EvaluableFunctor::Representable(_) | EvaluableFunctor::NerveValued(_) => false,
            EvaluableFunctor::Composite { observable, .. } => observable.is_site_valued(),
        }
    }

    pub fn evaluate(&self, a: &Arc<FiniteCommRing>, limits: &Limits) -> Result<Arc<SimplicialSet>> {
        let dim = limits.max_dim;
        match self {
            EvaluableFunctor::Representable(b) => {
                let homs = enumerate_homs(b, a);
                let labels = homs.iter().map(|h| h.describe()).collect();
                Ok(Arc::new(build::discrete(labels, dim).renamed(format!("Hom({},{})", b.name(), a.name()))))
            }
            EvaluableFunctor::SiteRepresentable { site, .. } => {
                let data = site
                    .affine()
                    .ok_or_else(|| Error::NotInUniverse(format!("site {} is not affine; evaluate on its objects", site.name())))?;
                let o = data
                    .rings
                    .iter()
                    .position(|r| r.same_structure(a))
                    .ok_or_else(|| Error::NotInUniverse(format!("{} is not a ring of {}", a.name(), site.name())))?;
                self.evaluate_object(o, limits)
            }
            EvaluableFunctor::Constant(s) => constant_at(s, dim, limits),
            EvaluableFunctor::NerveValued(NerveRule::Units) => {
                Ok(Arc::new(build::nerve(&Arc::new(unit_group(a)?), dim, limits)?))
            }
            EvaluableFunctor::Composite { observable, energy } => {
                observable.evaluate(&energy.apply_ring(a, limits)?, limits)
            }
        }
    }

    /// `F(φ): F(A) → F(A')`.
    pub fn map(&self, phi: &RingHom, limits: &Limits) -> Result<SimplicialMap> {
        match self {
            EvaluableFunctor::Representable(b) => {
                let source = self.evaluate(phi.source(), limits)?;
                let target = self.evaluate(phi.target(), limits)?;
                let from = enumerate_homs(b, phi.source());
                let to = enumerate_homs(b, phi.target());
                let vertex_map = from
                    .iter()
                    .map(|h| {
                        let table: Vec<usize> = h.table().iter().map(|&x| phi.apply(x)).collect();
                        to.binary_search_by(|g| g.table().cmp(&table[..]))
                            .map_err(|_| Error::Invalid("composite is not a listed hom".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SimplicialMap::from_vertex_map(source, target, vertex_map)
            }
            EvaluableFunctor::SiteRepresentable { site, .. } => {
                let data = site
                    .affine()
                    .ok_or_else(|| Error::NotInUniverse(format!("site {} is not affine", site.name())))?;
                let find = |r: &FiniteCommRing| {
                    data.rings
                        .iter()
                        .position(|x| x.same_structure(r))
                        .ok_or_else(|| Error::NotInUniverse(format!("{} is not a ring of {}", r.name(), site.name())))
                };
                let (a, b) = (find(phi.source())?, find(phi.target())?);
                let u = data
                    .homs
                    .iter()
                    .enumerate()
                    .position(|(f, h)| {
                        site.category().source(f) == b && site.category().target(f) == a && h.table() == phi.table()
                    })
                    .ok_or_else(|| Error::NotInUniverse("ring hom is not a morphism of the site".into()))?;
                self.map_object(u, limits)
            }
            EvaluableFunctor::Constant(s) => Ok(SimplicialMap::identity(constant_at(s, limits.max_dim, limits)?)),
            EvaluableFunctor::NerveValued(NerveRule::Units) => {
                let (gs, gt) = (Arc::new(unit_group(phi.source())?), Arc::new(unit_group(phi.target())?));
                let units_s = phi.source().units();
                let units_t = phi.target().units();
                let morphisms = units_s
                    .iter()
                    .map(|&u| units_t.binary_search(&phi.apply(u)).expect("units go to units"))
                    .collect();
                let f = Arc::new(CatFunctor::new(gs.clone(), gt.clone(), vec![0], morphisms)?);
                let dim = limits.max_dim;
                SimplicialMap::nerve_of(
                    f,
                    Arc::new(build::nerve(&gs, dim, limits)?),
                    Arc::new(build::nerve(&gt, dim, limits)?),
                )
            }
            EvaluableFunctor::Composite { observable, energy } => observable.map(&energy.apply_hom(phi, limits)?, limits),
        }
    }

    /// Value at an object of the functor's site (or the energy's source site).
    pub fn evaluate_object(&self, o: usize, limits: &Limits) -> Result<Arc<SimplicialSet>> {
        match self {
            EvaluableFunctor::SiteRepresentable { site, object } => {
                let c = site.category();
                let labels = c.hom(o, *object).iter().map(|&f| c.morphism(f).name.clone()).collect();
                Ok(Arc::new(
                    build::discrete(labels, limits.max_dim).renamed(format!("Hom({},{})", c.objects()[o], c.objects()[*object])),
                ))
            }
            EvaluableFunctor::Constant(s) => constant_at(s, limits.max_dim, limits),
            EvaluableFunctor::Composite { observable, energy } => observable.evaluate_object(energy.object(o), limits),
            EvaluableFunctor::Representable(b) => Err(Error::NotInUniverse(format!(
                "Rep({}) is evaluated on rings, not site objects",
                b.name()
            ))),
            EvaluableFunctor::NerveValued(_) => Err(Error::NotInUniverse("nerve-valued functors are evaluated on rings".into())),
        }
    }

    /// `F(u): F(U) → F(U')` for `u: U' → U` (contravariant in objects).
    pub fn map_object(&self, u: usize, limits: &Limits) -> Result<SimplicialMap> {
        match self {
            EvaluableFunctor::SiteRepresentable { site, object } => {
                let c = site.category();
                let (from, to) = (c.target(u), c.source(u));
                let source = self.evaluate_object(from, limits)?;
                let target = self.evaluate_object(to, limits)?;
                let targets = c.hom(to, *object);
                let vertex_map = c
                    .hom(from, *object)
                    .iter()
                    .map(|&g| targets.iter().position(|&h| h == c.compose(g, u)).expect("composite lies in hom"))
                    .collect();
                SimplicialMap::from_vertex_map(source, target, vertex_map)
            }
            EvaluableFunctor::Constant(s) => Ok(SimplicialMap::identity(constant_at(s, limits.max_dim, limits)?)),
            EvaluableFunctor::Composite { observable, energy } => observable.map_object(energy.morphism(u), limits),
            _ => Err(Error::NotInUniverse(format!("{} is evaluated on rings", self.name()))),
        }
    }

    /// Identities to identities and composites to composites on every hom
    /// between rings of `universe`.
    pub fn check_functoriality(&self, universe: &[Arc<FiniteCommRing>], limits: &Limits) -> Result<ValidationReport> {
        let mut report = ValidationReport::new(format!("functoriality of {}", self.name()));
        let homs: Vec<Vec<Vec<RingHom>>> = universe
            .iter()
            .map(|a| universe.iter().map(|b| enumerate_homs(a, b)).collect())
            .collect();
        for (i, a) in universe.iter().enumerate() {
            let id = self.map(&RingHom::identity(a.clone()), limits)?;
            if !is_identity(&id) {
                report.flag("preserves_identities", &[i], format!("F(id_{}) is not the identity", a.name()));
            }
        }
        for i in 0..universe.len() {
            for j in 0..universe.len() {
                for k in 0..universe.len() {
                    for (p, phi) in homs[i][j].iter().enumerate() {
                        let f_phi = self.map(phi, limits)?;
                        for (q, psi) in homs[j][k].iter().enumerate() {
                            let composite = phi.then(psi)?;
                            let lhs = self.map(&composite, limits)?;
                            let rhs = f_phi.then(&self.map(psi, limits)?)?;
                            let same = (0..=lhs.source().dim()).all(|n| lhs.level(n) == rhs.level(n));
                            if !same {
                                report.flag(
                                    "preserves_composition",
                                    &[i, j, k, p, q],
                                    format!("F({} then {}) differs from the composite", phi.describe(), psi.describe()),
                                );
                            }
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}

fn is_identity(f: &SimplicialMap) -> bool {
    f.source().counts() == f.target().counts()
        && (0..=f.source().dim()).all(|n| f.level(n).iter().enumerate().all(|(i, &j)| i == j))
}

fn constant_at(s: &Arc<SimplicialSet>, dim: usize, limits: &Limits) -> Result<Arc<SimplicialSet>> {
    if s.dim() == dim {
        Ok(s.clone())
    } else if s.dim() > dim {
        Ok(Arc::new(s.truncate(dim)))
    } else {
        Ok(Arc::new(s.extend(dim, limits)?))
    }
}

/// The unit group of `a` as a one-object category; morphism `i` is the
/// `i`-th unit in increasing element order.
pub fn unit_group(a: &FiniteCommRing) -> Result<FiniteCategory> {
    let units = a.units();
    let labels = units.iter().map(|&u| a.label(u).to_string()).collect();
    let position = |x: usize| units.binary_search(&x).expect("product of units");
    let identity = position(a.one());
    FiniteCategory::group(format!("{}^x", a.name()), labels, |g, f| position(a.mul(units[g], units[f])), identity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::{truncated_poly, zmod};
    use crate::algebra::dual_numbers;

    fn f2() -> Arc<FiniteCommRing> {
        Arc::new(zmod(2).unwrap())
    }

    #[test]
    fn representable_values() {
        let lim = Limits::default();
        let rep = EvaluableFunctor::Representable(f2());
        assert_eq!(rep.evaluate(&f2(), &lim).unwrap().count(0), 1);
        let b = Arc::new(truncated_poly(2, 2, &lim).unwrap());
        let eps = dual_numbers(&f2(), &lim).unwrap().total;
        let v = EvaluableFunctor::Representable(b).evaluate(&eps, &lim).unwrap();
        assert_eq!(v.count(0), 2);
        assert!(v.is_discrete());
    }

    #[test]
    fn constant_boundary_is_two_points() {
        let lim = Limits::default();
        let k = Arc::new(build::boundary(1, 2, &lim).unwrap());
        let v = EvaluableFunctor::Constant(k).evaluate(&f2(), &lim).unwrap();
        assert_eq!(v.count(0), 2);
        assert_eq!(v.dim(), lim.max_dim);
    }

    #[test]
    fn functoriality_on_a_small_universe() {
        let lim = Limits::default().with_max_dim(2);
        let universe = vec![
            f2(),
            Arc::new(zmod(4).unwrap()),
            Arc::new(truncated_poly(2, 2, &lim).unwrap()),
            dual_numbers(&f2(), &lim).unwrap().total,
        ];
        let b = Arc::new(truncated_poly(2, 2, &lim).unwrap());
        for f in [
            EvaluableFunctor::Representable(b),
            EvaluableFunctor::NerveValued(NerveRule::Units),
            EvaluableFunctor::Constant(Arc::new(build::point(2))),
        ] {
            let r = f.check_functoriality(&universe, &lim).unwrap();
            assert!(r.passed(), "{}: {:?}", f.name(), r.violations);
        }
    }

    #[test]
    fn units_of_f4_is_cyclic_of_order_three() {
        let lim = Limits::default();
        let f4 = crate::algebra::builders::poly_quotient(2, &[1, 1], "w", &lim).unwrap();
        let g = unit_group(&f4).unwrap();
        assert_eq!(g.morphism_count(), 3);
        // 0 = 1 is a unit of the zero ring
        assert_eq!(unit_group(&zmod(1).unwrap()).unwrap().morphism_count(), 1);
    }
}
