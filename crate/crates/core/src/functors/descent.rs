use crate::config::Limits;
use crate::error::{Error, Result};
use crate::report::Verdict;
use crate::site::{is_hypercover, SimplicialObject};

use super::evaluable::EvaluableFunctor;

/// Outcome of a descent check: `F(B) → eq(F(A0) ⇉ F(A1))` on vertices.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DescentReport {
    pub functor: String,
    pub hypercover: String,
    pub base: usize,
    pub equalizer: usize,
    pub verdict: Verdict,
}

/// Descent of a discrete-valued `F` along a hypercover of an affine site,
/// tested on its 1-truncation.
pub fn check_descent(f: &EvaluableFunctor, h: &SimplicialObject, limits: &Limits) -> Result<DescentReport> {
    let site = h.site();
    let data = site
        .affine()
        .ok_or_else(|| Error::Precondition(format!("{} does not live in an affine site", h.name())))?;
    let (y, aug) = h
        .augmentation()
        .ok_or_else(|| Error::Precondition(format!("{} has no augmentation", h.name())))?;
    let mut report = DescentReport {
        functor: f.name(),
        hypercover: h.name().to_string(),
        base: 0,
        equalizer: 0,
        verdict: Verdict::pass(),
    };
    if h.dim() < 1 {
        return Err(Error::Precondition(format!("{} stops below level 1", h.name())));
    }
    let cover = is_hypercover(h, 1, limits)?;
    if !cover.passed() {
        report.verdict = Verdict::skipped(format!("{} is not a hypercover through level 1", h.name()));
        return Ok(report);
    }
    if !f.is_discrete_valued() {
        report.verdict = Verdict::inconclusive(format!("{} is not discrete-valued", f.name()));
        return Ok(report);
    }
    let _ = y;
    let restrict = f.map(&data.homs[aug], limits)?;
    let d0 = f.map(&data.homs[h.face(1, 0)], limits)?;
    let d1 = f.map(&data.homs[h.face(1, 1)], limits)?;
    let equalizer: Vec<usize> = (0..d0.source().count(0))
        .filter(|&v| d0.apply(0, v) == d1.apply(0, v))
        .collect();
    let mut image: Vec<usize> = restrict.level(0).to_vec();
    report.base = image.len();
    report.equalizer = equalizer.len();
    image.sort_unstable();
    image.dedup();
    report.verdict = if image.len() < report.base {
        Verdict::fail(format!("F({}) → F({}) is not injective", site.category().objects()[y], site.category().objects()[h.object(0)]))
    } else if image != equalizer {
        Verdict::fail(format!(
            "F({}) has {} points but the equalizer has {}",
            site.category().objects()[y],
            report.base,
            report.equalizer
        ))
    } else {
        Verdict::pass()
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::builders::{product, truncated_poly, zmod};
    use crate::algebra::FiniteCommRing;
    use crate::report::Status;
    use crate::simplicial::build;
    use crate::site::{cech_nerve, FiniteSite, SiteSpec};

    fn boolean_site() -> Arc<FiniteSite> {
        let lim = Limits::default();
        let f2 = Arc::new(zmod(2).unwrap().renamed("F2"));
        let f22 = Arc::new(product(&[&f2, &f2], &lim).unwrap().renamed("F2^2"));
        let f24 = Arc::new(product(&[&f22, &f22], &lim).unwrap().renamed("F2^4"));
        let rings = [f2, f22, f24];
        let lookup = |n: &str| rings.iter().find(|r| r.name() == n).cloned();
        let spec: SiteSpec = serde_json::from_str(
            r#"{"category": {"kind": "Affine", "rings": ["F2", "F2^2", "F2^4"]},
                "pullbacks": {"mode": "Search"},
                "topology": {"kind": "Injective"}}"#,
        )
        .unwrap();
        Arc::new(spec.build("Aff", &lookup, &lim).unwrap())
    }

    fn split_cover(site: &Arc<FiniteSite>) -> SimplicialObject {
        let f = site.category().hom(1, 0)[0];
        cech_nerve(site, f, 1, &Limits::default()).unwrap()
    }

    #[test]
    fn representable_descends_along_split_cover() {
        let site = boolean_site();
        let h = split_cover(&site);
        let lim = Limits::default();
        let f22 = site.affine().unwrap().ring_of(1).clone();
        let r = check_descent(&EvaluableFunctor::Representable(f22), &h, &lim).unwrap();
        assert!(r.verdict.passed(), "{r:?}");
        assert_eq!((r.base, r.equalizer), (2, 2));

        let dual: Arc<FiniteCommRing> = Arc::new(truncated_poly(2, 2, &lim).unwrap());
        let r = check_descent(&EvaluableFunctor::Representable(dual), &h, &lim).unwrap();
        assert!(r.verdict.passed());
        assert_eq!((r.base, r.equalizer), (1, 1));
    }

    #[test]
    fn constant_point_descends() {
        let site = boolean_site();
        let h = split_cover(&site);
        let f = EvaluableFunctor::Constant(Arc::new(build::point(0)));
        assert!(check_descent(&f, &h, &Limits::default()).unwrap().verdict.passed());
    }

    #[test]
    fn identity_hypercover_descends() {
        let site = boolean_site();
        let h = SimplicialObject::constant(site.clone(), 1, 1, Some((1, site.category().identity(1)))).unwrap();
        let f22 = site.affine().unwrap().ring_of(1).clone();
        let r = check_descent(&EvaluableFunctor::Representable(f22), &h, &Limits::default()).unwrap();
        assert!(r.verdict.passed());
        assert_eq!(r.base, 4);
    }

    #[test]
    fn nerve_values_are_inconclusive() {
        let site = boolean_site();
        let h = split_cover(&site);
        let f = EvaluableFunctor::NerveValued(crate::functors::NerveRule::Units);
        let r = check_descent(&f, &h, &Limits::default()).unwrap();
        assert_eq!(r.verdict.status, Status::Inconclusive);
    }
}
