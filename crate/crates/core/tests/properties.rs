use std::sync::Arc;

use proptest::prelude::*;

use branes::algebra::builders::{poly_quotient, product, truncated_poly, zmod};
use branes::algebra::{dual_numbers, enumerate_homs, square_zero_extend, FiniteCommRing, FiniteModule};
use branes::category::FiniteCategory;
use branes::deformation::{derivations, product_verdict, relative_derivations};
use branes::entropy::{
    fuzzy_entropy, normalization_check, partition_closed_form, sharp_entropy, FuzzConfig, GaussLegendre, StateSystem,
};
use branes::functors::{check_energy, check_topology_transport, EnergyFunctor, EvaluableFunctor, SampleConfig};
use branes::simplicial::{build, pi0, reduced_homology, HomotopyStatus, SimplicialSet};
use branes::site::{cech_nerve, cotensor_level, is_hypercover, FiniteSite, PullbackMode, SimplicialObject, Topology};
use branes::Limits;

fn lim() -> Limits {
    Limits {
        carrier_cap: 128,
        ..Limits::default()
    }
}

fn ring(i: usize) -> Arc<FiniteCommRing> {
    let l = lim();
    let f2 = zmod(2).unwrap();
    let f3 = zmod(3).unwrap();
    Arc::new(match i {
        0 => zmod(1).unwrap(),
        1 => f2,
        2 => f3,
        3 => zmod(4).unwrap(),
        4 => zmod(6).unwrap(),
        5 => truncated_poly(2, 2, &l).unwrap(),
        6 => truncated_poly(2, 3, &l).unwrap(),
        7 => truncated_poly(3, 2, &l).unwrap(),
        8 => poly_quotient(2, &[1, 1], "w", &l).unwrap(),
        9 => product(&[&f2, &f2], &l).unwrap(),
        _ => product(&[&f2, &f3], &l).unwrap(),
    })
}

const RINGS: usize = 11;

fn module(a: &Arc<FiniteCommRing>, kind: usize, g: usize) -> Arc<FiniteModule> {
    Arc::new(match kind {
        0 => FiniteModule::zero(a.clone()),
        1 => FiniteModule::free(a.clone(), 1, &lim()).unwrap(),
        2 if a.size() <= 4 => FiniteModule::free(a.clone(), 2, &lim()).unwrap(),
        _ => FiniteModule::quotient(a.clone(), &[g % a.size()]).unwrap(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn square_zero_extensions_split(r in 0..RINGS, kind in 0usize..4, g in 0usize..16) {
        let a = ring(r);
        let m = module(&a, kind, g);
        let ext = square_zero_extend(&a, &m, &lim()).unwrap();
        prop_assert!(ext.splitting.then(&ext.projection).unwrap().is_identity());
        let kernel = ext.kernel();
        prop_assert_eq!(kernel.len(), m.size());
        for &x in &kernel {
            for &y in &kernel {
                prop_assert_eq!(ext.total.mul(x, y), ext.total.zero());
            }
        }
    }

    #[test]
    fn dual_numbers_are_the_free_extension(r in 0..RINGS) {
        let a = ring(r);
        let d = dual_numbers(&a, &lim()).unwrap();
        let free = Arc::new(FiniteModule::free(a.clone(), 1, &lim()).unwrap());
        let s = square_zero_extend(&a, &free, &lim()).unwrap();
        prop_assert!(d.total.same_structure(&s.total));
    }

    #[test]
    fn every_hom_lifts_through_the_splitting(b in 0..RINGS, r in 0..RINGS, kind in 0usize..4, g in 0usize..16) {
        let (b, a) = (ring(b), ring(r));
        let m = module(&a, kind, g);
        prop_assume!(a.size() * m.size() <= 36);
        let f = Arc::new(EvaluableFunctor::Representable(b.clone()));
        let lifts = enumerate_homs(&b, &square_zero_extend(&a, &m, &lim()).unwrap().total).len();
        let base = enumerate_homs(&b, &a).len();
        prop_assert!(lifts >= base);
        for x in 0..base {
            let der = derivations(&f, &a, x, &m, &lim()).unwrap();
            prop_assert!(der.pi0() >= 1);
            if m.is_zero() {
                prop_assert_eq!(der.verdict.status, HomotopyStatus::Contractible);
                let rel = relative_derivations(&f, &a, x, &m, &lim()).unwrap();
                prop_assert_eq!(rel.verdict.status, HomotopyStatus::Contractible);
            }
        }
    }
}

fn facets() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (1usize..=5).prop_flat_map(|n| {
        let facet = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=3.min(n));
        (Just(n), proptest::collection::vec(facet, 1..=5))
    })
}

fn complex(n: usize, mut fs: Vec<Vec<usize>>, dim: usize) -> SimplicialSet {
    // make sure every vertex lies in some facet
    fs.extend((0..n).map(|v| vec![v]));
    build::complex("K", (0..n).map(|v| format!("v{v}")).collect(), &fs, dim, &lim()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_characteristic_from_homology((n, fs) in facets()) {
        let k = complex(n, fs, 4);
        let h = reduced_homology(&k);
        prop_assert_eq!(h.euler_from_simplices, h.euler_from_homology);
        prop_assert_eq!(pi0(&k), h.betti(0) + 1);
    }

    #[test]
    fn products_validate((n, fs) in facets(), (m, gs) in facets()) {
        let x = Arc::new(complex(n, fs, 2));
        let y = Arc::new(complex(m, gs, 2));
        let p = build::product(&x, &y, &lim()).unwrap();
        prop_assert!(p.validate().violations.is_empty());
        prop_assert_eq!(pi0(&p), pi0(&x) * pi0(&y));
    }

    #[test]
    fn disconnected_factors_block_contractibility(a in 0usize..4, (n, fs) in facets()) {
        let x = build::discrete((0..a).map(|i| i.to_string()).collect(), 2);
        let y = complex(n, fs, 2);
        let v = product_verdict(&x, &y);
        if pi0(&x) != 1 || pi0(&y) != 1 {
            prop_assert_eq!(v.status, HomotopyStatus::NonContractible);
        }
        prop_assert!(!(v.status == HomotopyStatus::Contractible && reduced_homology(&y).first_nonzero().is_some()));
    }
}

fn powerset_site(points: &[&str], topology: Topology) -> Arc<FiniteSite> {
    let c = Arc::new(FiniteCategory::powerset(points).unwrap());
    Arc::new(FiniteSite::new("P", c, Some(points.len()), PullbackMode::Auto, Vec::new(), &topology, Vec::new(), &lim()).unwrap())
}

fn topology(i: usize) -> Topology {
    match i {
        0 => Topology::Trivial,
        1 => Topology::Union,
        n => Topology::Closed(n - 2),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cech_nerves_of_singleton_covers_are_hypercovers(w in 0usize..8) {
        let s = powerset_site(&["a", "b", "c"], Topology::Closed(w));
        let c = s.category();
        for u in 0..c.object_count() {
            for fam in s.covers(u).iter().filter(|f| f.len() == 1) {
                let x = cech_nerve(&s, fam[0], 3, &lim()).unwrap();
                let r = is_hypercover(&x, 3, &lim()).unwrap();
                prop_assert!(r.passed(), "{:?}", r.overall);
                for n in 0..=3 {
                    let k = build::simplex(n, 3, &lim()).unwrap();
                    prop_assert_eq!(cotensor_level(&x, &k, &lim()).unwrap().apex, x.object(n));
                }
            }
        }
    }

    #[test]
    fn cotensor_of_simplices_recovers_levels(o in 0usize..8) {
        let s = powerset_site(&["a", "b", "c"], Topology::Trivial);
        let x = SimplicialObject::constant(s, o, 3, None).unwrap();
        for n in 0..=3 {
            let k = build::simplex(n, 3, &lim()).unwrap();
            prop_assert_eq!(cotensor_level(&x, &k, &lim()).unwrap().apex, x.object(n));
        }
    }

    #[test]
    fn consequences_follow_from_their_prerequisites(
        objects in proptest::collection::vec(0usize..8, 4),
        ts in 0usize..6,
        tt in 0usize..10,
    ) {
        let s = powerset_site(&["a", "b"], topology(ts));
        let t = powerset_site(&["a", "b", "c"], topology(tt));
        let e = EnergyFunctor::from_object_map("E", s, t, objects);
        prop_assume!(e.is_ok());
        let e = e.unwrap();
        let r = check_energy(&e, &SampleConfig::default(), None, &lim()).unwrap();
        prop_assert!(r.consequence_violations.is_empty(), "{:?}", r.consequence_violations);
        if r.preserves_pullbacks.passed() && r.preserves_factorizations.passed() {
            prop_assert!(r.preserves_hfp.passed(), "{:?}", r.preserves_hfp);
        }
        let cover_side = r.preserves_covers.passed() && r.reflects_covers.passed();
        if cover_side && r.preserves_pullbacks.passed() && r.source_topology.passed() && r.target_topology.passed() {
            prop_assert!(check_topology_transport(&e, &lim()).unwrap().passed());
        }
    }
}

fn system() -> impl Strategy<Value = StateSystem> {
    (proptest::collection::vec(0.01f64..5.0, 1..8), 0.05f64..20.0).prop_map(|(e, b)| StateSystem::new(e, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sharp_entropy_ignores_state_order(sys in system(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = sys.energies.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let a = sharp_entropy(&sys).unwrap().entropy_bits;
        let b = sharp_entropy(&StateSystem::new(shuffled, sys.beta).unwrap()).unwrap().entropy_bits;
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }

    /// Powers of two rescale without rounding, so the equality is exact.
    #[test]
    fn sharp_entropy_is_scale_covariant(sys in system(), k in -6i32..=6) {
        let c = 2f64.powi(k);
        let scaled = StateSystem::new(sys.energies.iter().map(|e| e * c).collect(), sys.beta / c).unwrap();
        let (a, b) = (sharp_entropy(&sys).unwrap(), sharp_entropy(&scaled).unwrap());
        prop_assert_eq!(a.entropy_bits, b.entropy_bits);
        for (x, y) in a.states.iter().zip(&b.states) {
            prop_assert_eq!(x.mass, y.mass);
        }
    }

    #[test]
    fn fuzzy_mass_is_normalized(sys in system()) {
        let cfg = FuzzConfig::default();
        prop_assert!(normalization_check(&sys, &cfg).unwrap() <= cfg.tolerance);
    }

    #[test]
    fn fuzzy_entropy_grows_with_spread(beta in prop::sample::select(vec![0.1, 1.0, 10.0]), e1 in 0.05f64..4.0, de in 0.01f64..2.0) {
        let cfg = FuzzConfig::default();
        let s = |e: f64| fuzzy_entropy(&StateSystem::new(vec![e], beta).unwrap(), &cfg).unwrap().entropy_bits;
        prop_assert!(s(e1 + de) >= s(e1) - 1e-12, "beta {} eps {} -> {}", beta, e1, e1 + de);
    }

    #[test]
    fn gauss_legendre_converges_at_its_order(
        points in 1usize..=3,
        beta in prop::sample::select(vec![0.1, 1.0, 10.0]),
        eps in prop::sample::select(vec![0.5, 1.0, 2.0]),
    ) {
        let rule = GaussLegendre::new(points);
        let exact = partition_closed_form(eps, beta);
        let f = |d: f64| (-beta * (eps + d)).exp();
        // start where a panel spans at most half a decay length
        let panels = ((4.0 * beta * eps).ceil() as usize).max(2);
        let e1 = (rule.integrate(f, -eps, eps, panels) - exact).abs();
        let e2 = (rule.integrate(f, -eps, eps, 2 * panels) - exact).abs();
        prop_assume!(e2 > 1e-13 * exact);
        let observed = (e1 / e2).log2();
        let order = rule.order() as f64;
        prop_assert!((observed - order).abs() <= 0.6, "n = {}: observed {} vs {}", points, observed, order);
    }
}
