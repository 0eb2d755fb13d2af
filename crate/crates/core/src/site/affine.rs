//! The opposite of a finite universe of rings: objects `Spec A`, one
//! morphism `Spec B → Spec A` per ring hom `A → B`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{enumerate_homs, FiniteCommRing, RingHom};
use crate::category::{FiniteCategory, Morphism};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct AffineData {
    pub rings: Vec<Arc<FiniteCommRing>>,
    /// Ring hom underlying each morphism (`A → B` for `Spec B → Spec A`).
    pub homs: Vec<RingHom>,
}

impl AffineData {
    pub fn ring_of(&self, object: usize) -> &Arc<FiniteCommRing> {
        &self.rings[object]
    }

    /// Singleton families `{Spec φ}` with `φ` injective.
    pub fn injective_covers(&self, c: &FiniteCategory) -> Vec<Vec<Vec<usize>>> {
        let mut covers = vec![Vec::new(); c.object_count()];
        for (f, hom) in self.homs.iter().enumerate() {
            if hom.is_injective() {
                covers[c.target(f)].push(vec![f]);
            }
        }
        covers
    }
}

pub fn affine_category(rings: &[Arc<FiniteCommRing>]) -> Result<(FiniteCategory, AffineData)> {
    let objects: Vec<String> = rings.iter().map(|r| format!("Spec {}", r.name())).collect();
    let mut morphisms = Vec::new();
    let mut homs: Vec<RingHom> = Vec::new();
    let mut identities = vec![usize::MAX; rings.len()];
    let mut index: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    for (a, ra) in rings.iter().enumerate() {
        for (b, rb) in rings.iter().enumerate() {
            for (k, hom) in enumerate_homs(ra, rb).into_iter().enumerate() {
                let id = morphisms.len();
                if a == b && hom.is_identity() {
                    identities[a] = id;
                }
                index.insert((a, b, hom.table().to_vec()), id);
                morphisms.push(Morphism {
                    name: format!("Spec({}->{}#{k})", ra.name(), rb.name()),
                    source: b,
                    target: a,
                });
                homs.push(hom);
            }
        }
    }
    if identities.contains(&usize::MAX) {
        return Err(Error::Invalid("affine universe contains a ring with no identity hom".into()));
    }
    let m = morphisms.len();
    let mut compose = vec![None; m * m];
    // Spec φ ∘ Spec ψ = Spec (ψ ∘ φ) for φ: A → B, ψ: B → C
    for g in 0..m {
        for f in 0..m {
            if morphisms[f].target != morphisms[g].source {
                continue;
            }
            let (phi, psi) = (&homs[g], &homs[f]);
            let table: Vec<usize> = phi.table().iter().map(|&x| psi.apply(x)).collect();
            let key = (morphisms[g].target, morphisms[f].source, table);
            compose[g * m + f] = index.get(&key).copied();
        }
    }
    let names: Vec<&str> = rings.iter().map(|r| r.name()).collect();
    let category = FiniteCategory::new(format!("Aff({})", names.join(",")), objects, morphisms, identities, compose)?;
    Ok((
        category,
        AffineData {
            rings: rings.to_vec(),
            homs,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::{product, zmod};
    use crate::config::Limits;

    fn boolean_universe() -> Vec<Arc<FiniteCommRing>> {
        let lim = Limits::default();
        let f2 = Arc::new(zmod(2).unwrap().renamed("F2"));
        let f22 = Arc::new(product(&[&f2, &f2], &lim).unwrap().renamed("F2^2"));
        let f24 = Arc::new(product(&[&f22, &f22], &lim).unwrap().renamed("F2^4"));
        vec![f2, f22, f24]
    }

    #[test]
    fn boolean_universe_has_301_morphisms() {
        let (c, data) = affine_category(&boolean_universe()).unwrap();
        assert_eq!(c.morphism_count(), 301);
        assert!(c.validate().passed());
        // Spec F2 is terminal
        assert_eq!(c.terminal_object(), Some(0));
        let covers = data.injective_covers(&c);
        // F2 embeds once into each ring
        assert_eq!(covers[0].len(), 3);
    }
}
