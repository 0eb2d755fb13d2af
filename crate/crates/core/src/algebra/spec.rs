//! Structured-text ring and module definitions.
//!
//! ```json
//! {"kind": "Zmod", "n": 4}
//! {"kind": "TruncatedPoly", "n": 2, "degree": 2}
//! {"kind": "PolyQuotient", "n": 2, "modulus": [1, 1], "var": "w"}
//! {"kind": "Product", "factors": [{"kind": "Ref", "name": "F2"}, {"kind": "Zmod", "n": 3}]}
//! {"kind": "DualNumbers", "base": {"kind": "Zmod", "n": 3}}
//! ```

use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::config::Limits;
use crate::error::{Error, Result};

use super::builders;
use super::module::FiniteModule;
use super::ring::FiniteCommRing;
use super::sqz::dual_numbers;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum RingSpec {
    Zmod {
        n: usize,
    },
    TruncatedPoly {
        n: usize,
        degree: usize,
    },
    PolyQuotient {
        n: usize,
        /// Coefficients of the monic modulus below the leading term, constant first.
        modulus: Vec<usize>,
        #[serde(default = "default_var")]
        var: String,
    },
    Product {
        factors: Vec<RingSpec>,
    },
    DualNumbers {
        base: Box<RingSpec>,
    },
    /// A ring defined elsewhere in the same file.
    Ref {
        name: String,
    },
    Tables {
        labels: Vec<String>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        zero: usize,
        one: usize,
    },
}

fn default_var() -> String {
    "t".into()
}

impl RingSpec {
    pub fn build(
        &self,
        lookup: &dyn Fn(&str) -> Option<Arc<FiniteCommRing>>,
        limits: &Limits,
    ) -> Result<FiniteCommRing> {
        let ring = match self {
            RingSpec::Zmod { n } => {
                limits.check_carrier("Z/n", *n)?;
                builders::zmod(*n)?
            }
            RingSpec::TruncatedPoly { n, degree } => builders::truncated_poly(*n, *degree, limits)?,
            RingSpec::PolyQuotient { n, modulus, var } => builders::poly_quotient(*n, modulus, var, limits)?,
            RingSpec::Product { factors } => {
                let built = factors
                    .iter()
                    .map(|f| f.build(lookup, limits))
                    .collect::<Result<Vec<_>>>()?;
                let refs: Vec<&FiniteCommRing> = built.iter().collect();
                builders::product(&refs, limits)?
            }
            RingSpec::DualNumbers { base } => {
                let b = Arc::new(base.build(lookup, limits)?);
                let d = dual_numbers(&b, limits)?;
                Arc::try_unwrap(d.total).unwrap_or_else(|arc| (*arc).clone())
            }
            RingSpec::Ref { name } => {
                let r = lookup(name).ok_or_else(|| Error::NotInUniverse(format!("ring {name}")))?;
                (*r).clone()
            }
            RingSpec::Tables {
                labels,
                add,
                mul,
                zero,
                one,
            } => {
                limits.check_carrier("table ring", labels.len())?;
                FiniteCommRing::from_tables("tables", labels.clone(), add.concat(), mul.concat(), *zero, *one)?
            }
        };
        Ok(ring)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ModuleSpec {
    /// Name of the ring the module lives over.
    pub ring: String,
    #[serde(flatten)]
    pub kind: ModuleKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind")]
pub enum ModuleKind {
    Zero,
    Free { rank: usize },
    /// Quotient of the ring by the ideal generated by the listed elements.
    Quotient { generators: Vec<String> },
}

impl ModuleSpec {
    pub fn build(&self, ring: Arc<FiniteCommRing>, limits: &Limits) -> Result<FiniteModule> {
        match &self.kind {
            ModuleKind::Zero => Ok(FiniteModule::zero(ring)),
            ModuleKind::Free { rank } => FiniteModule::free(ring, *rank, limits),
            ModuleKind::Quotient { generators } => {
                let gens = generators
                    .iter()
                    .map(|g| {
                        ring.element(g)
                            .ok_or_else(|| Error::Invalid(format!("{} has no element {g}", ring.name())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                FiniteModule::quotient(ring, &gens)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build_named_builders() {
        let spec: RingSpec = serde_json::from_str(r#"{"kind":"Zmod","n":4}"#).unwrap();
        let r = spec.build(&|_| None, &Limits::default()).unwrap();
        assert_eq!(r.size(), 4);
        let spec: RingSpec =
            serde_json::from_str(r#"{"kind":"DualNumbers","base":{"kind":"Zmod","n":2}}"#).unwrap();
        assert_eq!(spec.build(&|_| None, &Limits::default()).unwrap().size(), 4);
    }

    #[test]
    fn unknown_ref_is_reported() {
        let spec = RingSpec::Ref { name: "nope".into() };
        assert!(matches!(
            spec.build(&|_| None, &Limits::default()),
            Err(Error::NotInUniverse(_))
        ));
    }

    #[test]
    fn module_spec_flattens_kind() {
        let m: ModuleSpec = serde_json::from_str(r#"{"ring":"F2","kind":"Free","rank":1}"#).unwrap();
        assert_eq!(m.kind, ModuleKind::Free { rank: 1 });
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<ModuleSpec>(&back).unwrap(), m);
    }
}
