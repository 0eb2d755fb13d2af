//! Mapping spaces over cosimplicial domains: `Ex` (maps out of
//! subdivided simplices) and cotensors `X^K` (maps out of `K × Δⁿ`).

use std::collections::HashMap;
use std::sync::Arc;

use crate::config::Limits;
use crate::error::{Error, Result};

use super::build;
use super::map::{enumerate_maps, NondegOrder, SimplicialMap};
use super::set::SimplicialSet;

/// Complete simplicial sets `A_0..A_top` with coface maps `A_{n-1} → A_n`
/// and codegeneracy maps `A_{n+1} → A_n`.
#[derive(Debug)]
pub struct CosimplicialDomain {
    pub name: String,
    objects: Vec<Arc<SimplicialSet>>,
    cofaces: Vec<Vec<SimplicialMap>>,
    codegens: Vec<Vec<SimplicialMap>>,
}

impl CosimplicialDomain {
    /// `sdΔⁿ` for `n ≤ top`, all truncated at `top`.
    pub fn subdivision(top: usize, limits: &Limits) -> Result<Self> {
        let objects = (0..=top)
            .map(|n| subdivided_simplex(n, top, limits).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let image = |mask: usize, f: &dyn Fn(usize) -> usize| -> usize {
            (0..usize::BITS as usize).filter(|b| mask >> b & 1 == 1).fold(0, |acc, b| acc | 1 << f(b))
        };
        let mut cofaces = vec![Vec::new()];
        for n in 1..=top {
            let maps = (0..=n)
                .map(|i| {
                    let vm = (0..objects[n - 1].count(0))
                        .map(|e| image(e + 1, &|j| if j >= i { j + 1 } else { j }) - 1)
                        .collect();
                    SimplicialMap::from_vertex_map(objects[n - 1].clone(), objects[n].clone(), vm)
                })
                .collect::<Result<Vec<_>>>()?;
            cofaces.push(maps);
        }
        let mut codegens = Vec::new();
        for n in 0..top {
            let maps = (0..=n)
                .map(|i| {
                    let vm = (0..objects[n + 1].count(0))
                        .map(|e| image(e + 1, &|j| if j > i { j - 1 } else { j }) - 1)
                        .collect();
                    SimplicialMap::from_vertex_map(objects[n + 1].clone(), objects[n].clone(), vm)
                })
                .collect::<Result<Vec<_>>>()?;
            codegens.push(maps);
        }
        Ok(CosimplicialDomain {
            name: "sd".into(),
            objects,
            cofaces,
            codegens,
        })
    }

    /// `K × Δⁿ` for `n ≤ top`, truncated at `dim K + top`.
    pub fn cylinder(k: &SimplicialSet, top: usize, limits: &Limits) -> Result<Self> {
        let kb = k
            .dim_bound()
            .filter(|&b| b <= k.dim())
            .ok_or_else(|| Error::Precondition(format!("exponent {} must be complete", k.name())))?;
        let t = kb + top;
        let kt = Arc::new(k.extend(t, limits)?);
        let deltas = (0..=top)
            .map(|n| build::simplex(n, t, limits).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let objects = deltas
            .iter()
            .map(|d| build::product(&kt, d, limits).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let id = SimplicialMap::identity(kt.clone());
        let mut cofaces = vec![Vec::new()];
        for n in 1..=top {
            let maps = (0..=n)
                .map(|i| {
                    let vm = (0..n).map(|j| if j >= i { j + 1 } else { j }).collect();
                    let d = SimplicialMap::from_vertex_map(deltas[n - 1].clone(), deltas[n].clone(), vm)?;
                    SimplicialMap::product(&id, &d, objects[n - 1].clone(), objects[n].clone())
                })
                .collect::<Result<Vec<_>>>()?;
            cofaces.push(maps);
        }
        let mut codegens = Vec::new();
        for n in 0..top {
            let maps = (0..=n)
                .map(|i| {
                    let vm = (0..n + 2).map(|j| if j > i { j - 1 } else { j }).collect();
                    let s = SimplicialMap::from_vertex_map(deltas[n + 1].clone(), deltas[n].clone(), vm)?;
                    SimplicialMap::product(&id, &s, objects[n + 1].clone(), objects[n].clone())
                })
                .collect::<Result<Vec<_>>>()?;
            codegens.push(maps);
        }
        Ok(CosimplicialDomain {
            name: format!("{}xDelta", k.name()),
            objects,
            cofaces,
            codegens,
        })
    }

    pub fn top(&self) -> usize {
        self.objects.len() - 1
    }

    pub fn object(&self, n: usize) -> &Arc<SimplicialSet> {
        &self.objects[n]
    }
}

/// `sdΔⁿ`: the nerve of nonempty subsets of `[n]`; vertex `e` is the
/// subset with bitmask `e + 1`.
pub fn subdivided_simplex(n: usize, dim: usize, limits: &Limits) -> Result<SimplicialSet> {
    let labels = (1..1usize << (n + 1))
        .map(|mask| (0..=n).filter(|b| mask >> b & 1 == 1).map(|b| b.to_string()).collect::<String>())
        .collect();
    build::chain_set(format!("sdDelta{n}"), dim, labels, |a, b| (a + 1) & !(b + 1) == 0, |_| true, limits)
}

/// The simplicial set whose `n`-simplices are the maps `A_n → X`.
#[derive(Debug)]
pub struct MappingSpace {
    pub space: Arc<SimplicialSet>,
    domain: Arc<CosimplicialDomain>,
    target: Arc<SimplicialSet>,
    orders: Vec<NondegOrder>,
    keys: Vec<HashMap<Vec<usize>, usize>>,
    images: Vec<Vec<Vec<usize>>>,
}

impl MappingSpace {
    pub fn build(domain: Arc<CosimplicialDomain>, x: Arc<SimplicialSet>, name: String, limits: &Limits) -> Result<Self> {
        let top = domain.top();
        let orders = domain
            .objects
            .iter()
            .map(|a| NondegOrder::new(a))
            .collect::<Result<Vec<_>>>()?;
        let mut levels = Vec::with_capacity(top + 1);
        let mut total = 0usize;
        for n in 0..=top {
            let maps = enumerate_maps(&domain.objects[n], &orders[n], &x, limits)?;
            total += maps.len();
            if total > limits.simplex_cap {
                return Err(Error::cap(format!("simplices of {name}"), limits.simplex_cap, total));
            }
            levels.push(maps);
        }
        let precompose = |n_from: usize, map: &SimplicialMap, images: &Vec<usize>, n_to: usize| -> Vec<usize> {
            let a_to = &domain.objects[n_to];
            let _ = a_to;
            orders[n_to]
                .cells
                .iter()
                .map(|&(k, s)| orders[n_from].eval(&domain.objects[n_from], &x, images, k, map.apply(k, s)))
                .collect()
        };
        let face = |n: usize, images: &Vec<usize>, i: usize| precompose(n, &domain.cofaces[n][i], images, n - 1);
        let degen = |n: usize, images: &Vec<usize>, i: usize| precompose(n, &domain.codegens[n][i], images, n + 1);
        let (space, keys) = SimplicialSet::from_keys(name, levels.clone(), face, degen, |images| {
            x.vertex_label(images[0]).to_string()
        })?;
        Ok(MappingSpace {
            space: Arc::new(space),
            domain,
            target: x,
            orders,
            keys,
            images: levels,
        })
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn domain(&self) -> &Arc<CosimplicialDomain> {
        &self.domain
    }

    /// Value of the `n`-simplex `idx` at the simplex `(k, s)` of `A_n`.
    pub fn eval(&self, n: usize, idx: usize, k: usize, s: usize) -> usize {
        self.orders[n].eval(&self.domain.objects[n], &self.target, &self.images[n][idx], k, s)
    }

    /// Index of the `n`-simplex given by a full evaluation rule on `A_n`.
    pub fn lookup(&self, n: usize, value: impl Fn(usize, usize) -> usize) -> Option<usize> {
        let images: Vec<usize> = self.orders[n].cells.iter().map(|&(k, s)| value(k, s)).collect();
        self.keys[n].get(&images).copied()
    }

    /// Postcomposition with `h: X → Y`, into the mapping space over `Y`
    /// with the same domain.
    pub fn postcompose(&self, h: &SimplicialMap, other: &MappingSpace) -> Result<SimplicialMap> {
        if !Arc::ptr_eq(&self.domain, &other.domain) && self.domain.top() != other.domain.top() {
            return Err(Error::Invalid("mapping spaces have different domains".into()));
        }
        let levels = (0..=self.space.dim())
            .map(|n| {
                self.images[n]
                    .iter()
                    .map(|images| {
                        let mapped: Vec<usize> = self.orders[n]
                            .cells
                            .iter()
                            .zip(images)
                            .map(|(&(k, _), &x)| h.apply(k, x))
                            .collect();
                        other.keys[n]
                            .get(&mapped)
                            .copied()
                            .ok_or_else(|| Error::Invalid("postcomposite is missing from the target space".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SimplicialMap::unchecked(self.space.clone(), other.space.clone(), levels)
    }
}

/// `Ex^k X` with the stages and the inclusion `X → Ex^k X`.
#[derive(Debug)]
pub struct ExTower {
    pub base: Arc<SimplicialSet>,
    pub stages: Vec<MappingSpace>,
    pub inclusion: SimplicialMap,
}

impl ExTower {
    pub fn space(&self) -> &Arc<SimplicialSet> {
        self.stages.last().map_or(&self.base, |s| &s.space)
    }

    pub fn k(&self) -> usize {
        self.stages.len()
    }
}

/// `Ex^k X`, truncated at the dimension of `X`.
pub fn ex_k(x: &Arc<SimplicialSet>, k: usize, limits: &Limits) -> Result<ExTower> {
    if k > limits.ex_cap {
        return Err(Error::cap("Ex iterations", limits.ex_cap, k));
    }
    let mut stages: Vec<MappingSpace> = Vec::new();
    let mut inclusion = SimplicialMap::identity(x.clone());
    if k == 0 {
        return Ok(ExTower {
            base: x.clone(),
            stages,
            inclusion,
        });
    }
    let domain = Arc::new(CosimplicialDomain::subdivision(x.dim(), limits)?);
    for j in 0..k {
        let prev = stages.last().map_or(x.clone(), |s| s.space.clone());
        let name = format!("Ex{}({})", j + 1, x.name());
        let stage = MappingSpace::build(domain.clone(), prev.clone(), name, limits)?;
        let step = last_vertex_inclusion(&prev, &stage)?;
        inclusion = inclusion.then(&step)?;
        stages.push(stage);
    }
    Ok(ExTower {
        base: x.clone(),
        stages,
        inclusion,
    })
}

/// `X → Ex X`, precomposition with the last-vertex map `sdΔⁿ → Δⁿ`.
fn last_vertex_inclusion(x: &Arc<SimplicialSet>, ex: &MappingSpace) -> Result<SimplicialMap> {
    let levels = (0..=x.dim())
        .map(|n| {
            let a = ex.domain.object(n);
            (0..x.count(n))
                .map(|s| {
                    ex.lookup(n, |k, c| {
                        let theta: Vec<usize> = a
                            .vertices(k, c)
                            .into_iter()
                            .map(|e| (usize::BITS - 1 - (e + 1).leading_zeros()) as usize)
                            .collect();
                        x.apply(n, s, &theta)
                    })
                    .ok_or_else(|| Error::Invalid("last-vertex image is missing".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SimplicialMap::unchecked(x.clone(), ex.space.clone(), levels)
}

/// `Ex^k f: Ex^k X → Ex^k Y`.
pub fn ex_map(f: &SimplicialMap, tx: &ExTower, ty: &ExTower) -> Result<SimplicialMap> {
    if tx.k() != ty.k() {
        return Err(Error::Invalid("Ex towers have different heights".into()));
    }
    let mut g = f.clone();
    for (sx, sy) in tx.stages.iter().zip(&ty.stages) {
        g = sx.postcompose(&g, sy)?;
    }
    Ok(g)
}

/// `X^K` up to the largest level the truncation of `X` determines.
#[derive(Debug)]
pub struct Cotensor {
    pub mapping: MappingSpace,
    /// Levels of the requested truncation that could not be computed.
    pub inconclusive: Vec<usize>,
    exponent_top: Vec<usize>,
}

impl Cotensor {
    pub fn space(&self) -> &Arc<SimplicialSet> {
        &self.mapping.space
    }

    /// Restriction `X^K → X` to the vertex `v` of `K`, on an `n`-simplex.
    pub fn restrict(&self, n: usize, idx: usize, v: usize) -> usize {
        let a = self.mapping.domain.object(n);
        let (kt, dn) = a.factors().expect("cylinder objects are products");
        let pair = kt.constant(v, n) * dn.count(n) + self.exponent_top[n];
        let _ = a;
        self.mapping.eval(n, idx, n, pair)
    }
}

/// `X^K`. Level `n` needs `X` through level `dim K + n`; complete `X` is
/// extended as needed, otherwise higher levels are reported inconclusive.
pub fn cotensor(x: &Arc<SimplicialSet>, k: &SimplicialSet, dim: usize, limits: &Limits) -> Result<Cotensor> {
    let kb = k
        .dim_bound()
        .filter(|&b| b <= k.dim())
        .ok_or_else(|| Error::Precondition(format!("exponent {} must be complete", k.name())))?;
    let (x, top) = if x.is_complete() {
        (Arc::new(x.extend(dim + kb, limits)?), dim)
    } else if x.dim() >= kb {
        (x.clone(), (x.dim() - kb).min(dim))
    } else {
        return Err(Error::Incomplete(format!(
            "{} is truncated at {} but maps from {} need level {}",
            x.name(),
            x.dim(),
            k.name(),
            kb
        )));
    };
    let domain = Arc::new(CosimplicialDomain::cylinder(k, top, limits)?);
    let exponent_top = (0..=top)
        .map(|n| {
            let (_, dn) = domain.object(n).factors().expect("product");
            dn.nondegenerate(n).next().expect("top simplex")
        })
        .collect();
    let name = format!("{}^{}", x.name(), k.name());
    let mapping = MappingSpace::build(domain, x, name, limits)?;
    Ok(Cotensor {
        mapping,
        inconclusive: (top + 1..=dim).collect(),
        exponent_top,
    })
}
