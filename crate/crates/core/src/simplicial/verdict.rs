//! Contractibility verdicts backed by homology witnesses or certificates.

use std::collections::HashMap;

use serde::Serialize;

use super::homology::{pi0, reduced_homology};
use super::set::SimplicialSet;

/// Positive evidence that a space is contractible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Point,
    /// Nerve of a category with a terminal or initial object.
    Cone { apex: String },
    /// Sequence of elementary collapses down to a vertex.
    Collapse { steps: usize },
    Product { left: Box<Certificate>, right: Box<Certificate> },
    /// Homotopy fiber of a weak equivalence.
    FiberOfEquivalence { reason: String },
}

impl Certificate {
    pub fn describe(&self) -> String {
        match self {
            Certificate::Point => "single point".into(),
            Certificate::Cone { apex } => format!("cone on {apex}"),
            Certificate::Collapse { steps } => format!("collapses to a vertex in {steps} steps"),
            Certificate::Product { left, right } => format!("product of ({}) and ({})", left.describe(), right.describe()),
            Certificate::FiberOfEquivalence { reason } => format!("fiber of an equivalence: {reason}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HomotopyStatus {
    Contractible,
    NonContractible,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyVerdict {
    pub status: HomotopyStatus,
    pub witness: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl HomotopyVerdict {
    fn non(witness: String) -> Self {
        HomotopyVerdict {
            status: HomotopyStatus::NonContractible,
            witness,
            certificate: None,
        }
    }

    fn yes(c: Certificate) -> Self {
        HomotopyVerdict {
            status: HomotopyStatus::Contractible,
            witness: c.describe(),
            certificate: Some(c),
        }
    }

    pub fn is_contractible(&self) -> bool {
        self.status == HomotopyStatus::Contractible
    }

    pub fn is_non_contractible(&self) -> bool {
        self.status == HomotopyStatus::NonContractible
    }
}

/// Obstructions (emptiness, π₀, homology below the truncation) are tried
/// first; a contractible verdict needs a certificate.
pub fn contractibility(x: &SimplicialSet) -> HomotopyVerdict {
    if x.is_empty() {
        return HomotopyVerdict::non("empty".into());
    }
    let components = pi0(x);
    if components != 1 {
        return HomotopyVerdict::non(format!("pi0 has {components} elements"));
    }
    let h = reduced_homology(x);
    if let Some(p) = h.first_nonzero() {
        return HomotopyVerdict::non(h.describe(p));
    }
    if let Some(c) = x.certificate() {
        return HomotopyVerdict::yes(c.clone());
    }
    if let Some((a, b)) = x.factors() {
        let (va, vb) = (contractibility(a), contractibility(b));
        if let (Some(l), Some(r)) = (va.certificate, vb.certificate) {
            return HomotopyVerdict::yes(Certificate::Product {
                left: Box::new(l),
                right: Box::new(r),
            });
        }
    }
    if x.is_complete() {
        if let Some(steps) = collapse(x) {
            return HomotopyVerdict::yes(Certificate::Collapse { steps });
        }
    }
    HomotopyVerdict {
        status: HomotopyStatus::Inconclusive,
        witness: format!("reduced homology vanishes below degree {} but no certificate was found", x.dim()),
        certificate: None,
    }
}

/// Greedy elementary collapses on nondegenerate simplices. Returns the
/// number of steps when a single vertex remains.
pub fn collapse(x: &SimplicialSet) -> Option<usize> {
    let bound = x.dim_bound()?.min(x.dim());
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for k in 0..=bound {
        for s in x.nondegenerate(k) {
            ids.insert((k, s), cells.len());
            cells.push((k, s));
        }
    }
    let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
    for (id, &(k, s)) in cells.iter().enumerate() {
        if k == 0 {
            continue;
        }
        for i in 0..=k {
            let (l, r, _) = x.root(k - 1, x.face(k, s, i));
            cofaces[ids[&(l, r)]].push(id);
        }
    }
    let mut alive = vec![true; cells.len()];
    let mut remaining = cells.len();
    let mut steps = 0;
    loop {
        let mut progressed = false;
        for sigma in (0..cells.len()).rev() {
            if !alive[sigma] {
                continue;
            }
            let live: Vec<usize> = cofaces[sigma].iter().copied().filter(|&t| alive[t]).collect();
            if live.len() != 1 {
                continue;
            }
            let tau = live[0];
            if cells[tau].0 != cells[sigma].0 + 1 || cofaces[tau].iter().any(|&r| alive[r]) {
                continue;
            }
            alive[sigma] = false;
            alive[tau] = false;
            remaining -= 2;
            steps += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    (remaining == 1).then_some(steps)
}
