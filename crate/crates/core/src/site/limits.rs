//! Finite limits and colimits found by checking the universal property
//! against every object.

use crate::category::{FiniteCategory, Morphism};
use crate::config::Limits;
use crate::error::{Error, Result};

/// A finite diagram: node objects and arrows `(from, to, morphism)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagram {
    pub nodes: Vec<usize>,
    pub arrows: Vec<(usize, usize, usize)>,
}

impl Diagram {
    pub fn cospan(c: &FiniteCategory, f: usize, g: usize) -> Self {
        Diagram {
            nodes: vec![c.source(f), c.source(g), c.target(f)],
            arrows: vec![(0, 2, f), (1, 2, g)],
        }
    }

    pub fn discrete(objects: &[usize]) -> Self {
        Diagram {
            nodes: objects.to_vec(),
            arrows: Vec::new(),
        }
    }
}

/// Apex and legs (one per node).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub apex: usize,
    pub legs: Vec<usize>,
}

/// Every cone over `d` with apex `t`.
pub fn cones_from(c: &FiniteCategory, d: &Diagram, t: usize, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut legs = Vec::with_capacity(d.nodes.len());
    let mut visits = 0usize;
    fn go(
        c: &FiniteCategory,
        d: &Diagram,
        t: usize,
        legs: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        visits: &mut usize,
        cap: usize,
    ) -> Result<()> {
        let j = legs.len();
        if j == d.nodes.len() {
            out.push(legs.clone());
            return Ok(());
        }
        for &leg in c.hom(t, d.nodes[j]) {
            *visits += 1;
            if *visits > cap {
                return Err(Error::cap("cone search", cap, *visits));
            }
            legs.push(leg);
            let ok = d.arrows.iter().all(|&(a, b, m)| {
                a.max(b) > j || c.try_compose(m, legs[a]) == Some(legs[b])
            });
            if ok {
                go(c, d, t, legs, out, visits, cap)?;
            }
            legs.pop();
        }
        Ok(())
    }
    go(c, d, t, &mut legs, &mut out, &mut visits, limits.combination_cap)?;
    Ok(out)
}

/// Whether `cone` is a limit: `u ↦ (leg ∘ u)` is a bijection from
/// `Hom(t, apex)` to the cones with apex `t`, for every object `t`.
pub fn is_limit(c: &FiniteCategory, d: &Diagram, cone: &Cone, limits: &Limits) -> Result<bool> {
    for t in 0..c.object_count() {
        let cones = cones_from(c, d, t, limits)?;
        let hom = c.hom(t, cone.apex);
        if hom.len() != cones.len() {
            return Ok(false);
        }
        let mut images: Vec<Vec<usize>> = hom
            .iter()
            .map(|&u| cone.legs.iter().map(|&l| c.compose(l, u)).collect())
            .collect();
        images.sort();
        images.dedup();
        if images.len() != hom.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First limit in object/leg order, if any.
pub fn find_limit(c: &FiniteCategory, d: &Diagram, limits: &Limits) -> Result<Option<Cone>> {
    for apex in 0..c.object_count() {
        for legs in cones_from(c, d, apex, limits)? {
            let cone = Cone { apex, legs };
            if is_limit(c, d, &cone, limits)? {
                return Ok(Some(cone));
            }
        }
    }
    Ok(None)
}

/// The unique `u` with `limit.legs[i] ∘ u = legs[i]`.
pub fn factor_through(c: &FiniteCategory, limit: &Cone, source: usize, legs: &[usize]) -> Option<usize> {
    c.hom(source, limit.apex)
        .iter()
        .copied()
        .find(|&u| limit.legs.iter().zip(legs).all(|(&l, &g)| c.try_compose(l, u) == Some(g)))
}

/// The opposite category; morphism ids are kept.
pub fn opposite(c: &FiniteCategory) -> FiniteCategory {
    let m = c.morphism_count();
    let morphisms = c
        .morphisms()
        .iter()
        .map(|f| Morphism {
            name: f.name.clone(),
            source: f.target,
            target: f.source,
        })
        .collect();
    let identities = (0..c.object_count()).map(|o| c.identity(o)).collect();
    let compose = (0..m * m).map(|i| c.try_compose(i % m, i / m)).collect();
    FiniteCategory::new(format!("{}^op", c.name()), c.objects().to_vec(), morphisms, identities, compose)
        .expect("opposite of a valid category")
}

/// Colimit of `d` as a limit in the opposite category; legs are the
/// injections.
pub fn find_colimit(c: &FiniteCategory, d: &Diagram, limits: &Limits) -> Result<Option<Cone>> {
    let op = opposite(c);
    let flipped = Diagram {
        nodes: d.nodes.clone(),
        arrows: d.arrows.iter().map(|&(a, b, m)| (b, a, m)).collect(),
    };
    find_limit(&op, &flipped, limits)
}

/// The unique `u` with `u ∘ colimit.legs[i] = legs[i]`.
pub fn factor_from(c: &FiniteCategory, colimit: &Cone, target: usize, legs: &[usize]) -> Option<usize> {
    c.hom(colimit.apex, target)
        .iter()
        .copied()
        .find(|&u| colimit.legs.iter().zip(legs).all(|(&l, &g)| c.try_compose(u, l) == Some(g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn meets_and_joins_in_a_powerset() {
        let p = FiniteCategory::powerset(&["a", "b", "c"]).unwrap();
        let (ab, bc) = (0b011, 0b110);
        let f = p.hom(ab, 0b111)[0];
        let g = p.hom(bc, 0b111)[0];
        let pb = find_limit(&p, &Diagram::cospan(&p, f, g), &lim()).unwrap().unwrap();
        assert_eq!(pb.apex, 0b010);
        let co = find_colimit(&p, &Diagram::discrete(&[0b001, 0b100]), &lim()).unwrap().unwrap();
        assert_eq!(co.apex, 0b101);
        let empty = find_colimit(&p, &Diagram::discrete(&[]), &lim()).unwrap().unwrap();
        assert_eq!(empty.apex, 0);
    }

    #[test]
    fn groups_lack_products() {
        let z2 = FiniteCategory::group("Z/2", vec!["e".into(), "g".into()], |a, b| a ^ b, 0).unwrap();
        assert!(find_limit(&z2, &Diagram::discrete(&[0, 0]), &lim()).unwrap().is_none());
        // the single object is a limit of the one-object diagram
        let one = find_limit(&z2, &Diagram::discrete(&[0]), &lim()).unwrap().unwrap();
        assert_eq!(one.apex, 0);
    }

    #[test]
    fn opposite_swaps_composition() {
        let p = FiniteCategory::powerset(&["a"]).unwrap();
        let op = opposite(&p);
        assert!(op.validate().passed());
        assert_eq!(op.terminal_object(), Some(0));
    }
}
