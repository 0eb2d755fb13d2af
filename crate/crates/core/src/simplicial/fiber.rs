//! Homotopy fibers: literal fibers of discrete maps, comma categories for
//! nerves of functors, and path-space fibers after `Ex^k`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::category::{CatFunctor, Comma};
use crate::config::Limits;
use crate::error::{Error, Result};

use super::build;
use super::map::SimplicialMap;
use super::mapping::{cotensor, ex_k, ex_map, Cotensor, ExTower};
use super::set::SimplicialSet;
use super::verdict::Certificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum FiberBranch {
    Discrete,
    Comma,
    PathSpace { ex: usize },
}

impl FiberBranch {
    pub fn tag(&self) -> String {
        match self {
            FiberBranch::Discrete => "discrete".into(),
            FiberBranch::Comma => "comma".into(),
            FiberBranch::PathSpace { ex } => format!("path_space(ex={ex})"),
        }
    }
}

#[derive(Debug)]
enum FiberData {
    Discrete {
        vertices: Vec<usize>,
    },
    Comma {
        comma: Comma,
    },
    Path {
        source: ExTower,
        target: ExTower,
        paths: Cotensor,
        keys: Vec<HashMap<(usize, usize), usize>>,
        pairs: Vec<Vec<(usize, usize)>>,
    },
}

/// Homotopy fiber of a map over a vertex of its target.
#[derive(Debug)]
pub struct HomotopyFiber {
    pub space: Arc<SimplicialSet>,
    pub branch: FiberBranch,
    pub basepoint: usize,
    /// Into the source (into `Ex^k` of the source on the path-space branch).
    pub projection: SimplicialMap,
    /// Levels of the source truncation the fiber does not determine.
    pub inconclusive: Vec<usize>,
    data: FiberData,
}

/// Picks the branch from the shape of `f`: discrete sets, nerves of a
/// functor, or anything else through `Ex^{fiber_ex}`.
pub fn homotopy_fiber(f: &SimplicialMap, y: usize, limits: &Limits) -> Result<HomotopyFiber> {
    let (x, t) = (f.source(), f.target());
    if y >= t.count(0) {
        return Err(Error::Precondition(format!("basepoint {y} is not a vertex of {}", t.name())));
    }
    let mut fiber = if x.is_discrete() && t.is_discrete() {
        discrete_fiber(f, y)?
    } else if let (Some(functor), Some(_), Some(_)) = (f.functor(), x.origin(), t.origin()) {
        comma_fiber(f, functor.clone(), y, limits)?
    } else {
        path_fiber(f, y, limits.fiber_ex, limits)?
    };
    let reason = if f.is_iso() {
        Some("the map is an isomorphism")
    } else if fiber.branch != FiberBranch::Comma && x.certificate().is_some() && t.certificate().is_some() {
        Some("source and target are contractible")
    } else {
        None
    };
    if let Some(reason) = reason {
        let space = (*fiber.space).clone().with_certificate(Certificate::FiberOfEquivalence { reason: reason.into() });
        fiber.space = Arc::new(space);
        fiber.projection = SimplicialMap::unchecked(
            fiber.space.clone(),
            fiber.projection.target().clone(),
            (0..=fiber.space.dim()).map(|k| fiber.projection.level(k).to_vec()).collect(),
        )?;
    }
    Ok(fiber)
}

fn discrete_fiber(f: &SimplicialMap, y: usize) -> Result<HomotopyFiber> {
    let x = f.source();
    let vertices: Vec<usize> = (0..x.count(0)).filter(|&v| f.apply(0, v) == y).collect();
    let labels = vertices.iter().map(|&v| x.vertex_label(v).to_string()).collect();
    let space = Arc::new(build::discrete(labels, x.dim()).renamed(format!("fib({})", x.name())));
    let levels = (0..=x.dim()).map(|k| vertices.iter().map(|&v| x.constant(v, k)).collect()).collect();
    let projection = SimplicialMap::unchecked(space.clone(), x.clone(), levels)?;
    Ok(HomotopyFiber {
        space,
        branch: FiberBranch::Discrete,
        basepoint: y,
        projection,
        inconclusive: Vec::new(),
        data: FiberData::Discrete { vertices },
    })
}

fn comma_fiber(f: &SimplicialMap, functor: Arc<CatFunctor>, y: usize, limits: &Limits) -> Result<HomotopyFiber> {
    let comma = Comma::new(&functor, y)?;
    let space = Arc::new(build::nerve(&comma.category, f.source().dim(), limits)?);
    let project = Arc::new(CatFunctor::new(
        comma.category.clone(),
        functor.source.clone(),
        comma.objects.iter().map(|o| o.0).collect(),
        comma.morphisms.iter().map(|m| m.0).collect(),
    )?);
    let projection = SimplicialMap::nerve_of(project, space.clone(), f.source().clone())?;
    Ok(HomotopyFiber {
        space,
        branch: FiberBranch::Comma,
        basepoint: y,
        projection,
        inconclusive: Vec::new(),
        data: FiberData::Comma { comma },
    })
}

/// `Ex^k X ×_{Ex^k Y} (Ex^k Y)^{Δ¹} ×_{Ex^k Y} {y}`.
pub fn path_fiber(f: &SimplicialMap, y: usize, k: usize, limits: &Limits) -> Result<HomotopyFiber> {
    let source = ex_k(f.source(), k, limits)?;
    let target = ex_k(f.target(), k, limits)?;
    let fx = ex_map(f, &source, &target)?;
    let yt = target.inclusion.apply(0, y);
    let interval = build::simplex(1, 1, limits)?;
    let ty = target.space().clone();
    let paths = cotensor(&ty, &interval, ty.dim(), limits)?;
    let p = paths.space().clone();
    let xs = source.space().clone();
    let top = p.dim().min(xs.dim());
    let mut levels: Vec<Vec<(usize, usize)>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut over: HashMap<usize, Vec<usize>> = HashMap::new();
        for s in 0..xs.count(n) {
            over.entry(fx.apply(n, s)).or_default().push(s);
        }
        let end = ty.constant(yt, n);
        let mut pairs = Vec::new();
        for g in 0..p.count(n) {
            if paths.restrict(n, g, 1) != end {
                continue;
            }
            if let Some(xs_over) = over.get(&paths.restrict(n, g, 0)) {
                pairs.extend(xs_over.iter().map(|&s| (s, g)));
            }
        }
        limits.check_level("path-space fiber", pairs.len())?;
        levels.push(pairs);
    }
    let (space, keys) = SimplicialSet::from_keys(
        format!("hofib({})", f.source().name()),
        levels.clone(),
        |n, &(s, g), i| (xs.face(n, s, i), p.face(n, g, i)),
        |n, &(s, g), i| (xs.degen(n, s, i), p.degen(n, g, i)),
        |&(s, _)| xs.vertex_label(s).to_string(),
    )?;
    let space = Arc::new(space);
    let proj_levels = levels.iter().map(|l| l.iter().map(|&(s, _)| s).collect()).collect();
    let projection = SimplicialMap::unchecked(space.clone(), xs.clone(), proj_levels)?;
    Ok(HomotopyFiber {
        space,
        branch: FiberBranch::PathSpace { ex: k },
        basepoint: y,
        projection,
        inconclusive: (top + 1..=f.source().dim()).collect(),
        data: FiberData::Path {
            source,
            target,
            paths,
            keys,
            pairs: levels,
        },
    })
}

impl HomotopyFiber {
    /// The fiber vertex over a source vertex lying exactly over the basepoint
    /// (constant path on the path-space branch).
    pub fn lift_vertex(&self, v: usize) -> Option<usize> {
        match &self.data {
            FiberData::Discrete { vertices } => vertices.iter().position(|&u| u == v),
            FiberData::Comma { comma } => comma.object_over(v, comma.basepoint_identity),
            FiberData::Path {
                source,
                target,
                paths,
                keys,
                ..
            } => {
                let xt = source.inclusion.apply(0, v);
                let yt = target.inclusion.apply(0, self.basepoint);
                let ty = target.space();
                let g = paths.mapping.lookup(0, |k, _| ty.constant(yt, k))?;
                keys[0].get(&(xt, g)).copied()
            }
        }
    }

    pub fn pairs(&self, n: usize) -> Option<&[(usize, usize)]> {
        match &self.data {
            FiberData::Path { pairs, .. } => Some(&pairs[n]),
            _ => None,
        }
    }

    /// Map between fibers induced by a commuting square
    /// `f' ∘ g = h ∘ f` with `h(y) = y'`.
    pub fn induced(&self, other: &HomotopyFiber, g: &SimplicialMap, h: &SimplicialMap) -> Result<SimplicialMap> {
        if h.apply(0, self.basepoint) != other.basepoint {
            return Err(Error::Precondition("square does not carry basepoint to basepoint".into()));
        }
        match (&self.data, &other.data) {
            (FiberData::Discrete { vertices }, FiberData::Discrete { vertices: theirs }) => {
                let image = vertices
                    .iter()
                    .map(|&v| {
                        let w = g.apply(0, v);
                        theirs
                            .iter()
                            .position(|&u| u == w)
                            .ok_or_else(|| Error::Precondition("square does not commute".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let levels = (0..=self.space.dim()).map(|_| image.clone()).collect();
                SimplicialMap::new(self.space.clone(), other.space.clone(), levels)
            }
            (FiberData::Comma { comma }, FiberData::Comma { comma: theirs }) => {
                let (gf, hf) = match (g.functor(), h.functor()) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(Error::Precondition("comma fibers need functor squares".into())),
                };
                let induced = Arc::new(comma.induced(theirs, gf, hf)?);
                SimplicialMap::nerve_of(induced, self.space.clone(), other.space.clone())
            }
            (
                FiberData::Path {
                    source,
                    target,
                    paths,
                    pairs,
                    ..
                },
                FiberData::Path {
                    source: source2,
                    target: target2,
                    paths: paths2,
                    keys: keys2,
                    ..
                },
            ) => {
                let gx = ex_map(g, source, source2)?;
                let hy = ex_map(h, target, target2)?;
                let hp = paths.mapping.postcompose(&hy, &paths2.mapping)?;
                let levels = pairs
                    .iter()
                    .enumerate()
                    .map(|(n, l)| {
                        l.iter()
                            .map(|&(s, p)| {
                                keys2[n]
                                    .get(&(gx.apply(n, s), hp.apply(n, p)))
                                    .copied()
                                    .ok_or_else(|| Error::Precondition("square does not commute".into()))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                SimplicialMap::new(self.space.clone(), other.space.clone(), levels)
            }
            _ => Err(Error::Precondition("fibers were computed by different branches".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FiniteCategory;
    use crate::simplicial::{contractibility, pi0, reduced_homology, HomotopyStatus};

    fn lim() -> Limits {
        Limits::default().with_max_dim(2)
    }

    fn group(n: usize) -> Arc<FiniteCategory> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Arc::new(FiniteCategory::group(format!("Z/{n}"), labels, move |a, b| (a + b) % n, 0).unwrap())
    }

    fn discrete_map(table: &[usize], m: usize, dim: usize) -> SimplicialMap {
        let x = Arc::new(build::discrete((0..table.len()).map(|i| i.to_string()).collect(), dim));
        let y = Arc::new(build::discrete((0..m).map(|i| i.to_string()).collect(), dim));
        SimplicialMap::new(x, y, (0..=dim).map(|_| table.to_vec()).collect()).unwrap()
    }

    #[test]
    fn discrete_branch_counts_preimages() {
        let f = discrete_map(&[0, 1, 0, 1, 0], 2, 2);
        let fib = homotopy_fiber(&f, 0, &lim()).unwrap();
        assert_eq!(fib.branch, FiberBranch::Discrete);
        assert_eq!(pi0(&fib.space), 3);
        assert_eq!(fib.lift_vertex(2), Some(1));
        assert!(fib.projection.validate().passed());
    }

    #[test]
    fn path_branch_agrees_on_discrete_maps() {
        let f = discrete_map(&[0, 1, 0, 1, 0], 3, 2);
        for y in 0..3 {
            let a = homotopy_fiber(&f, y, &lim()).unwrap();
            let c = path_fiber(&f, y, 1, &lim()).unwrap();
            assert_eq!(pi0(&a.space), pi0(&c.space), "basepoint {y}");
            assert!(c.space.validate().passed());
        }
    }

    #[test]
    fn group_quotient_fiber_is_the_classifying_space() {
        let z2 = group(2);
        let one = group(1);
        let f = Arc::new(CatFunctor::new(z2.clone(), one.clone(), vec![0], vec![0, 0]).unwrap());
        let nz = Arc::new(build::nerve(&z2, 3, &lim()).unwrap());
        let no = Arc::new(build::nerve(&one, 3, &lim()).unwrap());
        let m = SimplicialMap::nerve_of(f, nz, no).unwrap();
        let fib = homotopy_fiber(&m, 0, &lim()).unwrap();
        assert_eq!(fib.branch, FiberBranch::Comma);
        let v = contractibility(&fib.space);
        assert_eq!(v.status, HomotopyStatus::NonContractible);
        assert_eq!(reduced_homology(&fib.space).torsion(1), &[2]);
    }

    #[test]
    fn point_into_classifying_space_has_two_point_fiber() {
        let z2 = group(2);
        let one = group(1);
        let f = Arc::new(CatFunctor::new(one.clone(), z2.clone(), vec![0], vec![0]).unwrap());
        let no = Arc::new(build::nerve(&one, 3, &lim()).unwrap());
        let nz = Arc::new(build::nerve(&z2, 3, &lim()).unwrap());
        let m = SimplicialMap::nerve_of(f, no, nz).unwrap();
        let fib = homotopy_fiber(&m, 0, &lim()).unwrap();
        assert_eq!(pi0(&fib.space), 2);
        assert_eq!(fib.lift_vertex(0), Some(0));
    }

    #[test]
    fn identity_fibers_are_contractible() {
        let c = Arc::new(build::boundary(2, 2, &Limits::default()).unwrap());
        let id = SimplicialMap::identity(c);
        let fib = homotopy_fiber(&id, 0, &lim()).unwrap();
        assert!(matches!(fib.branch, FiberBranch::PathSpace { ex: 1 }));
        assert!(fib.space.validate().passed());
        assert!(contractibility(&fib.space).is_contractible());
        assert!(fib.lift_vertex(0).is_some());
        let z2 = group(2);
        let nz = Arc::new(build::nerve(&z2, 3, &lim()).unwrap());
        let idf = Arc::new(CatFunctor::identity(z2));
        let m = SimplicialMap::nerve_of(idf, nz.clone(), nz).unwrap();
        assert!(contractibility(&homotopy_fiber(&m, 0, &lim()).unwrap().space).is_contractible());
    }

    #[test]
    fn induced_maps_between_discrete_fibers() {
        let f = discrete_map(&[0, 1, 0], 2, 1);
        let f2 = discrete_map(&[0, 1, 0, 0], 2, 1);
        let g = SimplicialMap::new(f.source().clone(), f2.source().clone(), vec![vec![0, 1, 3]; 2]).unwrap();
        let h = SimplicialMap::identity(f.target().clone());
        let a = homotopy_fiber(&f, 0, &lim()).unwrap();
        let b = homotopy_fiber(&f2, 0, &lim()).unwrap();
        let m = a.induced(&b, &g, &h).unwrap();
        assert_eq!(m.level(0), &[0, 2]);
        let pa = path_fiber(&f, 0, 1, &lim()).unwrap();
        let pb = path_fiber(&f2, 0, 1, &lim()).unwrap();
        assert!(pa.induced(&pb, &g, &h).unwrap().validate().passed());
    }
}
