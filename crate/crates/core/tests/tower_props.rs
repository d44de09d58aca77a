mod common;

use common::*;
use proptest::prelude::*;
use quadtower::arith::{parse_poly, poly_gcd, Poly};
use quadtower::dynamics::{critical_orbit, zero_orbit, QuadMap};
use quadtower::stability::certify_auto;
use quadtower::tower::{
    certify_level, certify_levels, discriminant_tower, isotrivial_candidate_levels, obstruction,
    refinement_certificate, refinement_product, verify_curve_identity, LevelOptions, LevelVerdict,
    LevelWitness,
};

fn map_strategy(max_h: usize) -> impl Strategy<Value = QuadMap> {
    any::<u64>().prop_map(move |seed| random_map(&mut rng(seed), max_h))
}

fn has_zero_orbit(phi: &QuadMap, n: usize) -> bool {
    critical_orbit(phi, n).iter().any(Poly::is_zero)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn obstruction_recomposes(phi in map_strategy(3), n in 1usize..=4) {
        prop_assume!(!has_zero_orbit(&phi, n));
        let ob = obstruction(&phi, n).unwrap();
        prop_assert_eq!((&ob.d * &ob.y.square()).scale(&ob.u), ob.value.clone());
        prop_assert!(poly_gcd(&ob.d, &ob.d.derivative()).is_one());
        prop_assert!(ob.d.lc().is_some_and(|c| *c == int(1)));
        prop_assert!(ob.y.lc().is_some_and(|c| *c == int(1)));
    }

    #[test]
    fn refinement_product_evaluates(phi in map_strategy(2), n in 2usize..=6, t in -3i64..=3) {
        let p = refinement_product(&phi, n).unwrap();
        let t = int(t);
        let crit = critical_orbit(&phi, n / 2);
        let zero = zero_orbit(&phi, n / 2);
        let expected = crit.iter().chain(&zero).fold(int(1), |acc, f| acc * eval(f, &t));
        prop_assert_eq!(eval(&p, &t), expected);
    }

    #[test]
    fn curve_identity_holds(phi in map_strategy(3), n in 2usize..=4) {
        prop_assume!(!has_zero_orbit(&phi, n));
        prop_assert!(verify_curve_identity(&phi, n).unwrap().holds);
    }

    #[test]
    fn discriminant_law_holds(phi in map_strategy(2)) {
        prop_assume!(!phi.c().is_zero() && !has_zero_orbit(&phi, 3));
        let tower = discriminant_tower(&phi, 3).unwrap();
        prop_assert!(tower.law_holds, "{:?}", tower.steps);
    }
}

// each case certifies stability first, which dominates the cost
proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn coprime_witness_is_checked(phi in map_strategy(2), n in 3usize..=6) {
        let cert = certify_auto(&phi, 8);
        prop_assume!(cert.is_stable() && !has_zero_orbit(&phi, n));
        let report = certify_level(&phi, n, &cert).unwrap();
        if let LevelWitness::CoprimePart { poly, degree } = &report.witness {
            prop_assert_eq!(report.verdict, LevelVerdict::CertifiedMaximal);
            prop_assert_eq!(poly.degree(), Some(*degree));
            let d = obstruction(&phi, n).unwrap().d;
            prop_assert!(poly.divides(&d));
            let refinement = refinement_product(&phi, n).unwrap();
            prop_assert!(poly_gcd(poly, &refinement).is_one());
        } else {
            prop_assert_ne!(report.verdict, LevelVerdict::CertifiedMaximal);
        }
    }

    #[test]
    fn level_two_descent_refines_gcd_route(phi in map_strategy(2)) {
        let cert = certify_auto(&phi, 8);
        prop_assume!(cert.is_stable() && !has_zero_orbit(&phi, 2));
        let exact = certify_level(&phi, 2, &cert).unwrap();
        let gcd_route = refinement_certificate(&phi, 2).unwrap();
        if gcd_route.verdict == LevelVerdict::CertifiedMaximal {
            prop_assert_eq!(exact.verdict, LevelVerdict::CertifiedMaximal);
        }
        prop_assert_ne!(exact.verdict, LevelVerdict::Undetermined);
    }

    #[test]
    fn modular_route_never_contradicts_exact(phi in map_strategy(2)) {
        let cert = certify_auto(&phi, 8);
        prop_assume!(cert.is_stable() && !has_zero_orbit(&phi, 6));
        let modular = LevelOptions { modular_from: Some(3), ..LevelOptions::default() };
        let fast = certify_levels(&phi, 6, &cert, &modular).unwrap();
        let exact = certify_levels(&phi, 6, &cert, &LevelOptions::exact()).unwrap();
        for (f, e) in fast.iter().zip(&exact) {
            prop_assert_eq!(f.n, e.n);
            if f.verdict == LevelVerdict::CertifiedMaximal {
                prop_assert_eq!(e.verdict, LevelVerdict::CertifiedMaximal);
            }
        }
    }
}

#[test]
fn documented_examples() {
    let phi = QuadMap::monic_centered(parse_poly("-t^2 - 1").unwrap());
    let ob = obstruction(&phi, 2).unwrap();
    assert_eq!(ob.value, parse_poly("t^4 + t^2").unwrap());
    assert_eq!(
        (ob.d.clone(), ob.y.clone(), ob.u.clone()),
        (parse_poly("t^2 + 1").unwrap(), Poly::t(), int(1))
    );

    let phi = QuadMap::monic_centered(Poly::t());
    let p4 = refinement_product(&phi, 4).unwrap();
    let t_t2 = parse_poly("t^3 + t^2").unwrap();
    assert_eq!(p4, t_t2.square());
    assert!(verify_curve_identity(&phi, 2).unwrap().holds);
    assert!(verify_curve_identity(&phi, 3).unwrap().holds);
    assert!(verify_curve_identity(&phi, 1).is_err());
}

#[test]
fn isotrivial_candidates_are_complete() {
    for d in 1..=3u32 {
        let phi = QuadMap::new(
            parse_poly(&format!("t^{d}")).unwrap(),
            parse_poly(&format!("t^{d} + 1")).unwrap(),
        );
        let found = isotrivial_candidate_levels(&phi, 8).unwrap();
        assert!(found.complete);
        assert!(found.levels.len() < d as usize, "{:?}", found.levels);
    }
    // not isotrivial
    assert!(isotrivial_candidate_levels(&QuadMap::monic_centered(Poly::t()), 8).is_err());
}
