use std::collections::HashMap;
use std::sync::Arc;

use crate::category::CatFunctor;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::report::ValidationReport;

use super::set::SimplicialSet;

/// A simplicial map defined on levels `0..=source.dim()`.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    levels: Vec<Vec<usize>>,
    functor: Option<Arc<CatFunctor>>,
}

impl SimplicialMap {
    pub fn new(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, levels: Vec<Vec<usize>>) -> Result<Self> {
        let f = Self::unchecked(source, target, levels)?;
        let report = f.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::Invalid(format!("not a simplicial map: {} at {:?}", v.rule, v.witness)));
        }
        Ok(f)
    }

    pub(crate) fn unchecked(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        levels: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if target.dim() < source.dim() {
            return Err(Error::Invalid(format!(
                "target {} is truncated below source {}",
                target.name(),
                source.name()
            )));
        }
        if levels.len() != source.dim() + 1
            || (0..=source.dim())
                .any(|k| levels[k].len() != source.count(k) || levels[k].iter().any(|&t| t >= target.count(k)))
        {
            return Err(Error::Invalid("map tables have the wrong shape".into()));
        }
        Ok(SimplicialMap {
            source,
            target,
            levels,
            functor: None,
        })
    }

    pub fn identity(x: Arc<SimplicialSet>) -> Self {
        let levels = (0..=x.dim()).map(|k| (0..x.count(k)).collect()).collect();
        SimplicialMap {
            source: x.clone(),
            target: x,
            levels,
            functor: None,
        }
    }

    /// Map into a set whose simplices are determined by their spines
    /// (nerves, ordered complexes), given on vertices and edges.
    pub fn from_spine(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        vertex_map: Vec<usize>,
        edge_map: Vec<usize>,
    ) -> Result<Self> {
        let mut levels = vec![vertex_map];
        if source.dim() >= 1 {
            levels.push(edge_map);
        }
        for k in 2..=source.dim().min(target.dim()) {
            let mut spines: HashMap<Vec<usize>, usize> = HashMap::with_capacity(target.count(k));
            for t in 0..target.count(k) {
                if spines.insert(spine(&target, k, t), t).is_some() {
                    return Err(Error::Precondition(format!("{} is not determined by spines", target.name())));
                }
            }
            let level = (0..source.count(k))
                .map(|s| {
                    let image: Vec<usize> = spine(&source, k, s).into_iter().map(|e| levels[1][e]).collect();
                    spines
                        .get(&image)
                        .copied()
                        .ok_or_else(|| Error::Invalid(format!("image of {} is not a simplex", source.describe(k, s))))
                })
                .collect::<Result<Vec<_>>>()?;
            levels.push(level);
        }
        Self::new(source, target, levels)
    }

    /// Map determined by vertices into a set with at most one edge between
    /// any ordered pair of vertices.
    pub fn from_vertex_map(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.count(0) {
            return Err(Error::Invalid("vertex map has the wrong length".into()));
        }
        let mut edges = HashMap::new();
        if target.dim() >= 1 {
            for e in 0..target.count(1) {
                if edges.insert((target.face(1, e, 1), target.face(1, e, 0)), e).is_some() {
                    return Err(Error::Precondition(format!("{} has parallel edges", target.name())));
                }
            }
        }
        let edge_map = if source.dim() >= 1 {
            (0..source.count(1))
                .map(|e| {
                    let key = (vertex_map[source.face(1, e, 1)], vertex_map[source.face(1, e, 0)]);
                    edges.get(&key).copied().ok_or_else(|| Error::Invalid("vertex map does not preserve edges".into()))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        Self::from_spine(source, target, vertex_map, edge_map)
    }

    /// The nerve of a functor, between nerves built by `build::nerve`.
    pub fn nerve_of(f: Arc<CatFunctor>, source: Arc<SimplicialSet>, target: Arc<SimplicialSet>) -> Result<Self> {
        let mut m = Self::from_spine(source, target, f.objects.clone(), f.morphisms.clone())?;
        m.functor = Some(f);
        Ok(m)
    }

    /// `f × g` between products built by `build::product`.
    pub fn product(
        f: &SimplicialMap,
        g: &SimplicialMap,
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
    ) -> Result<Self> {
        let levels = (0..=source.dim())
            .map(|k| {
                let (ny, ny2) = (g.source.count(k), g.target.count(k));
                (0..source.count(k)).map(|p| f.apply(k, p / ny) * ny2 + g.apply(k, p % ny)).collect()
            })
            .collect();
        Self::unchecked(source, target, levels)
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn functor(&self) -> Option<&Arc<CatFunctor>> {
        self.functor.as_ref()
    }

    pub fn apply(&self, k: usize, s: usize) -> usize {
        self.levels[k][s]
    }

    pub fn level(&self, k: usize) -> &[usize] {
        &self.levels[k]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap> {
        if self.target.dim() < self.source.dim() || other.source.count(0) != self.target.count(0) {
            return Err(Error::Invalid("maps are not composable".into()));
        }
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(k, l)| l.iter().map(|&t| other.apply(k, t)).collect())
            .collect();
        let mut out = Self::unchecked(self.source.clone(), other.target.clone(), levels)?;
        if let (Some(a), Some(b)) = (&self.functor, &other.functor) {
            out.functor = Some(Arc::new(a.then(b)));
        }
        Ok(out)
    }

    /// Restriction to `new_source`, a truncation of the source.
    pub fn truncated(&self, new_source: Arc<SimplicialSet>) -> Self {
        let mut out = self.clone();
        out.levels.truncate(new_source.dim() + 1);
        out.source = new_source;
        out
    }

    pub fn is_iso(&self) -> bool {
        self.source.dim() == self.target.dim()
            && (0..=self.source.dim()).all(|k| {
                let mut seen = vec![false; self.target.count(k)];
                self.source.count(k) == self.target.count(k)
                    && self.levels[k].iter().all(|&t| !std::mem::replace(&mut seen[t], true))
            })
    }

    pub fn validate(&self) -> ValidationReport {
        let (x, y) = (&self.source, &self.target);
        let mut report = ValidationReport::new(format!("map {} -> {}", x.name(), y.name()));
        for k in 0..=x.dim() {
            for s in 0..x.count(k) {
                let t = self.levels[k][s];
                for i in 0..=k {
                    if k > 0 && self.levels[k - 1][x.face(k, s, i)] != y.face(k, t, i) {
                        report.flag("commutes_with_faces", &[k, s, i], "f d_i != d_i f");
                    }
                    if k < x.dim() && self.levels[k + 1][x.degen(k, s, i)] != y.degen(k, t, i) {
                        report.flag("commutes_with_degeneracies", &[k, s, i], "f s_i != s_i f");
                    }
                }
            }
        }
        report
    }
}

fn spine(x: &SimplicialSet, k: usize, s: usize) -> Vec<usize> {
    (1..=k).map(|i| x.apply(k, s, &[i - 1, i])).collect()
}

/// Nondegenerate simplices of a complete domain in an order where faces
/// precede cofaces, with the roots of each face.
#[derive(Clone, Debug)]
pub(crate) struct NondegOrder {
    pub cells: Vec<(usize, usize)>,
    position: HashMap<(usize, usize), usize>,
    face_roots: Vec<Vec<(usize, Vec<usize>, usize)>>,
}

impl NondegOrder {
    pub fn new(a: &SimplicialSet) -> Result<Self> {
        let bound = match a.dim_bound() {
            Some(b) if b <= a.dim() => b,
            _ => return Err(Error::Precondition(format!("domain {} must be complete", a.name()))),
        };
        let mut cells: Vec<(usize, usize)> = (0..=bound).flat_map(|k| a.nondegenerate(k).map(move |s| (k, s))).collect();
        cells.sort_by_key(|&(k, s)| (a.vertices(k, s).into_iter().max().unwrap_or(0), k, s));
        let position: HashMap<(usize, usize), usize> = cells.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        let face_roots = cells
            .iter()
            .map(|&(k, s)| {
                if k == 0 {
                    return Vec::new();
                }
                (0..=k)
                    .map(|i| {
                        let (l, r, ops) = a.root(k - 1, a.face(k, s, i));
                        (position[&(l, r)], ops, l)
                    })
                    .collect()
            })
            .collect();
        Ok(NondegOrder {
            cells,
            position,
            face_roots,
        })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    /// Value at any simplex of the domain of the map with these images.
    pub fn eval(&self, a: &SimplicialSet, x: &SimplicialSet, images: &[usize], k: usize, s: usize) -> usize {
        let (l, r, ops) = a.root(k, s);
        x.degenerate_by(l, images[self.position[&(l, r)]], &ops)
    }

    /// Full level tables of the map with these images.
    #[cfg(test)]
    pub fn tabulate(&self, a: &SimplicialSet, x: &SimplicialSet, images: &[usize]) -> Vec<Vec<usize>> {
        (0..=a.dim()).map(|k| (0..a.count(k)).map(|s| self.eval(a, x, images, k, s)).collect()).collect()
    }
}

/// Every simplicial map `a → x` for a complete `a`, as images of the
/// nondegenerate simplices in `order`.
pub(crate) fn enumerate_maps(
    a: &SimplicialSet,
    order: &NondegOrder,
    x: &SimplicialSet,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    let top = order.cells.iter().map(|c| c.0).max().unwrap_or(0);
    if top > x.dim() {
        return Err(Error::Precondition(format!(
            "{} is truncated at {} but maps from {} need level {}",
            x.name(),
            x.dim(),
            a.name(),
            top
        )));
    }
    let by_faces: Vec<HashMap<Vec<usize>, Vec<usize>>> = (0..=top)
        .map(|k| {
            let mut m: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
            if k > 0 {
                for t in 0..x.count(k) {
                    m.entry((0..=k).map(|i| x.face(k, t, i)).collect()).or_default().push(t);
                }
            }
            m
        })
        .collect();
    let all_vertices: Vec<usize> = (0..x.count(0)).collect();
    let mut out = Vec::new();
    let mut images = vec![0; order.len()];
    let mut visits = 0usize;
    struct Ctx<'a> {
        order: &'a NondegOrder,
        x: &'a SimplicialSet,
        by_faces: &'a [HashMap<Vec<usize>, Vec<usize>>],
        all_vertices: &'a [usize],
        limits: &'a Limits,
        name: &'a str,
    }
    fn go(ctx: &Ctx, p: usize, images: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, visits: &mut usize) -> Result<()> {
        if p == ctx.order.len() {
            if out.len() >= ctx.limits.simplex_cap {
                return Err(Error::cap(format!("maps from {}", ctx.name), ctx.limits.simplex_cap, out.len() + 1));
            }
            out.push(images.clone());
            return Ok(());
        }
        *visits += 1;
        if *visits > ctx.limits.combination_cap {
            return Err(Error::cap(format!("search for maps from {}", ctx.name), ctx.limits.combination_cap, *visits));
        }
        let (k, _) = ctx.order.cells[p];
        let candidates: &[usize] = if k == 0 {
            ctx.all_vertices
        } else {
            let faces: Vec<usize> = ctx.order.face_roots[p]
                .iter()
                .map(|(q, ops, l)| ctx.x.degenerate_by(*l, images[*q], ops))
                .collect();
            match ctx.by_faces[k].get(&faces) {
                Some(c) => c,
                None => return Ok(()),
            }
        };
        for &c in candidates {
            images[p] = c;
            go(ctx, p + 1, images, out, visits)?;
        }
        Ok(())
    }
    let ctx = Ctx {
        order,
        x,
        by_faces: &by_faces,
        all_vertices: &all_vertices,
        limits,
        name: a.name(),
    };
    go(&ctx, 0, &mut images, &mut out, &mut visits)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FiniteCategory;
    use crate::simplicial::build;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn maps_from_simplices_are_simplices() {
        let c = build::boundary(2, 3, &lim()).unwrap();
        for n in 0..=2 {
            let d = build::simplex(n, 3, &lim()).unwrap();
            let order = NondegOrder::new(&d).unwrap();
            assert_eq!(enumerate_maps(&d, &order, &c, &lim()).unwrap().len(), c.count(n));
        }
    }

    #[test]
    fn maps_from_interval_square() {
        let d1 = Arc::new(build::simplex(1, 2, &lim()).unwrap());
        let sq = build::product(&d1, &d1, &lim()).unwrap();
        let order = NondegOrder::new(&sq).unwrap();
        // maps Δ¹×Δ¹ → Δ¹ are order-preserving maps of the 2×2 grid poset: 6
        let maps = enumerate_maps(&sq, &order, &d1, &lim()).unwrap();
        assert_eq!(maps.len(), 6);
        for m in &maps {
            let levels = order.tabulate(&sq, &d1, m);
            SimplicialMap::new(Arc::new(sq.clone()), d1.clone(), levels).unwrap();
        }
    }

    #[test]
    fn nerve_functor_maps_validate() {
        let z2 = Arc::new(FiniteCategory::group("Z/2", vec!["e".into(), "g".into()], |a, b| a ^ b, 0).unwrap());
        let one = Arc::new(FiniteCategory::group("1", vec!["e".into()], |_, _| 0, 0).unwrap());
        let f = Arc::new(CatFunctor::new(z2.clone(), one.clone(), vec![0], vec![0, 0]).unwrap());
        let nz = Arc::new(build::nerve(&z2, 3, &lim()).unwrap());
        let no = Arc::new(build::nerve(&one, 3, &lim()).unwrap());
        let m = SimplicialMap::nerve_of(f, nz.clone(), no).unwrap();
        assert!(m.validate().passed());
        assert!(!m.is_iso());
        assert!(SimplicialMap::identity(nz).is_iso());
    }

    #[test]
    fn corrupted_map_is_flagged() {
        let d1 = Arc::new(build::simplex(1, 2, &lim()).unwrap());
        let id = SimplicialMap::identity(d1.clone());
        let mut levels = id.levels.clone();
        levels[0].swap(0, 1);
        assert!(SimplicialMap::new(d1.clone(), d1, levels).is_err());
    }
}
