//! Acceptance run: one PASS/FAIL line per criterion, then a single assertion.
//!
//! `cargo test --test acceptance -- --nocapture` shows the lines.

mod common;

use std::time::{Duration, Instant};

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use quadtower::arith::modular::certify_coprime;
use quadtower::arith::{
    parse_poly, parse_ratfunc, poly_gcd, poly_sqrt_exact, squarefree_decompose,
    squarefree_part_split, Poly,
};
use quadtower::bounds::{
    accumulate_index, part1_bound, part2_threshold, part3_count_bound, pink_bound, BoundKind,
};
use quadtower::cli::{run_classify, RunConfig};
use quadtower::dynamics::{
    base_change, classify, factor_quadratic, predict_height_critical, predict_height_zero,
    PredictionKind, QuadFactorization, QuadMap,
};
use quadtower::stability::{certify_auto, StabilityMethod};
use quadtower::tower::{
    certify_levels, discriminant_tower, verify_curve_identity, LevelOptions, LevelVerdict,
};

fn map(g: &str, c: &str) -> QuadMap {
    QuadMap::new(parse_poly(g).unwrap(), parse_poly(c).unwrap())
}

fn criterion_1() -> bool {
    let start = Instant::now();
    let report = run_classify(&RunConfig::new("0", "t")).unwrap();
    let elapsed = start.elapsed();
    let st = report.stability();
    let stable =
        st.is_stable() && st.method == StabilityMethod::AdjustedOrbit && st.checked_bound == 8;
    let levels_ok = (2..=10).all(|n| {
        report
            .levels()
            .iter()
            .any(|r| r.n == n && r.verdict == LevelVerdict::CertifiedMaximal)
    });
    let ok = stable && levels_ok && elapsed < Duration::from_secs(60);
    verdict(
        1,
        "x^2 + t stable, levels 2..10 certified maximal",
        ok,
        &format!("{:.2?}", elapsed),
    )
}

fn criterion_2() -> bool {
    let report = run_classify(&RunConfig::new("0", "-t^2 - 1")).unwrap();
    let lv = report.levels();
    let shape = lv[0].verdict == LevelVerdict::CertifiedMaximal
        && lv[1].verdict == LevelVerdict::NonMaximalExact;
    let conditional = report
        .bounds()
        .iter()
        .find(|b| b.kind == BoundKind::Accumulated && b.assumption.is_some())
        .and_then(|b| b.log2_bound.as_u64());
    let index = conditional.map(|e| 1u64 << e);
    let ok = shape && index == Some(2) && report.stability().is_stable();
    verdict(
        2,
        "x^2 - t^2 - 1 has index 2 at level 2",
        ok,
        &format!("index {index:?}"),
    )
}

fn criterion_3() -> bool {
    let phi = map("t^3 - 1", "-t");
    let psi = base_change(&phi, &parse_ratfunc("1/t^2").unwrap()).unwrap();
    let expected = [
        parse_ratfunc("(t^6 - t^5 - 1)/t^6").unwrap(),
        parse_ratfunc("(t^6 + t^5 - 1)/t^6").unwrap(),
    ];
    // (x + a)(x + b): the roots are -a, -b
    let ok = match factor_quadratic(&psi) {
        QuadFactorization::SplitLinear { root1, root2 } => {
            let got = [-&root1, -&root2];
            got == expected || got == [expected[1].clone(), expected[0].clone()]
        }
        QuadFactorization::Irreducible => false,
    };
    verdict(
        3,
        "base change by 1/t^2 splits into the two printed factors",
        ok,
        "exact rational functions",
    )
}

fn criterion_4() -> bool {
    let mut failures = Vec::new();
    for d in 1..=4u32 {
        for m in 1..=3i64 {
            let g = format!("t^{d}");
            let phi = map(&g, &format!("t^{d} + {m}"));
            let class = classify(&phi, 64);
            let cert = certify_auto(&phi, 8);
            let levels = if cert.is_stable() {
                certify_levels(&phi, 8, &cert, &LevelOptions::exact()).unwrap()
            } else {
                Vec::new()
            };
            let levels_ok = (2..=8).all(|n| {
                levels
                    .iter()
                    .any(|r| r.n == n && r.verdict == LevelVerdict::CertifiedMaximal)
            });
            let part3 = part3_count_bound(&phi).unwrap().log2_bound.as_u64();
            let pink = pink_bound(&phi).unwrap().log2_bound.as_u64();
            let ok = class.isotrivial
                && class.pcf.is_infinite()
                && cert.is_stable()
                && levels_ok
                && part3 == Some(d as u64 - 1)
                && pink == Some(d.trailing_zeros() as u64);
            if !ok {
                failures.push(format!("d={d} m={m}"));
            }
        }
    }
    verdict(
        4,
        "isotrivial family (x - t^d)^2 + t^d + m",
        failures.is_empty(),
        &format!("failures {failures:?}"),
    )
}

fn criterion_5() -> bool {
    let p1 = part1_bound();
    let acc = accumulate_index(&[], true, 17).unwrap();
    let ok = p1.threshold_level == Some(17)
        && p1.log2_bound.as_u64() == Some(65519)
        && acc.log2_bound.as_u64() == Some(65519)
        && part2_threshold(1, 1).unwrap() == 22
        && part2_threshold(2, 1).unwrap() == 24;
    verdict(
        5,
        "index bound constants 17, 65519, 22, 24",
        ok,
        "exact integers",
    )
}

fn criterion_6() -> bool {
    let mut rng = rng(6);
    let mut checked = 0usize;
    let mut failures = 0usize;
    for _ in 0..200 {
        let phi = random_map(&mut rng, 5);
        let crit = brute_heights(&phi, phi.gamma(), 8);
        let zero = brute_heights(&phi, &Poly::zero(), 8);
        for m in 1..=8 {
            for (pred, actual) in [
                (predict_height_critical(&phi, m).unwrap(), crit[m - 1]),
                (predict_height_zero(&phi, m).unwrap(), zero[m - 1]),
            ] {
                checked += 1;
                let ok = match pred.kind {
                    PredictionKind::Exact => actual == pred.value,
                    PredictionKind::UpperBound => actual <= pred.value,
                };
                if !ok {
                    failures += 1;
                }
            }
        }
    }
    verdict(
        6,
        "height predictions vs brute force, 200 maps",
        failures == 0,
        &format!("{checked} checks, {failures} failures"),
    )
}

fn criterion_7() -> bool {
    let mut rng = rng(7);
    let mut checked = 0usize;
    let mut failures = 0usize;
    let mut nondegenerate = 0usize;
    let mut maps = 0;
    while maps < 50 {
        let phi = random_map(&mut rng, 3);
        if (1..=5).any(|n| phi.iterate_poly(phi.gamma(), n).is_zero()) {
            continue;
        }
        maps += 1;
        for n in 2..=5 {
            checked += 1;
            let check = verify_curve_identity(&phi, n).unwrap();
            // the same identity, evaluated pointwise from the coefficient lists
            let pointwise = [-2i64, 1, 3].iter().all(|&t| {
                let t = int(t);
                eval(&check.lhs, &t) == eval(&check.rhs, &t)
            });
            if !check.lhs.is_zero() {
                nondegenerate += 1;
            }
            if !(check.holds && pointwise) {
                failures += 1;
            }
        }
    }
    verdict(
        7,
        "curve identity, 50 maps, n = 2..5",
        failures == 0,
        &format!("{checked} checks, {nondegenerate} with Y != 0, {failures} failures"),
    )
}

fn criterion_8() -> bool {
    let mut rng = rng(8);
    let mut fitted = Vec::new();
    let mut failures = 0usize;
    let mut maps = 0;
    while maps < 20 {
        let phi = random_map(&mut rng, 2);
        if phi.c().is_zero() || (1..=4).any(|n| phi.iterate_poly(phi.gamma(), n).is_zero()) {
            continue;
        }
        maps += 1;
        let tower = discriminant_tower(&phi, 4).unwrap();
        // independent Sylvester discriminants at two specializations
        for t in [2i64, -3] {
            let tq = int(t);
            let deltas: Vec<_> = (1..=4)
                .map(|m| discriminant(&specialized_iterate(&phi, t, m)))
                .collect();
            for m in 1..=4 {
                if eval(&tower.deltas[m - 1], &tq) != deltas[m - 1] {
                    failures += 1;
                }
            }
            for m in 2..=4 {
                let orbit = eval(&phi.iterate_poly(phi.gamma(), m), &tq);
                let denom = &deltas[m - 2] * &deltas[m - 2] * &orbit;
                if denom.is_zero() {
                    continue;
                }
                match signed_log2(&(&deltas[m - 1] / &denom)) {
                    Some((sign, e)) => fitted.push((m, sign, e)),
                    None => failures += 1,
                }
            }
        }
        for s in &tower.steps {
            fitted.push((s.m, s.sign, s.exponent.map(u64::from).unwrap_or(u64::MAX)));
        }
    }
    // the fitted law: one exponent and one sign per m, across every sample
    let consistent = (2..=4).all(|m| {
        let mut seen: Vec<_> = fitted
            .iter()
            .filter(|f| f.0 == m)
            .map(|f| (f.1, f.2))
            .collect();
        seen.sort();
        seen.dedup();
        seen.len() == 1 && seen[0] == (1, 1u64 << m)
    });
    let ok = failures == 0 && consistent;
    let law: Vec<_> = (2..=4)
        .map(|m| format!("m={m}: +2^{}", 1u64 << m))
        .collect();
    verdict(
        8,
        "discriminant recursion, 20 maps",
        ok,
        &format!("fitted {}, {failures} failures", law.join(", ")),
    )
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config::with_cases(cases),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-12i64..=12, 1..=max_len)
        .prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

fn criterion_9() -> bool {
    let sqrt = runner(1000).run(&(coeffs(5), -9i64..=9), |(p, a)| {
        let p = Poly::from_ints(&p);
        let g = p.square();
        let r = poly_sqrt_exact(&g).expect("square has a root");
        prop_assert_eq!(r.square(), g.clone());
        let shifted = &g * &Poly::from_ints(&[a, 1]);
        prop_assert!(poly_sqrt_exact(&shifted).is_none());
        prop_assert!(poly_sqrt_exact(&-&g).is_none() || g.is_zero());
        Ok(())
    });
    let squarefree = runner(1000).run(&(coeffs(4), coeffs(3), coeffs(3)), |(a, b, c)| {
        let (a, b, c) = (
            Poly::from_ints(&a),
            Poly::from_ints(&b),
            Poly::from_ints(&c),
        );
        let g = &(&a * &b.square()) * &c.pow(3);
        let dec = squarefree_decompose(&g).unwrap();
        prop_assert_eq!(dec.recompose(), g.clone());
        for (i, (f, _)) in dec.factors.iter().enumerate() {
            prop_assert!(poly_gcd(f, &f.derivative()).is_one());
            for (h, _) in &dec.factors[i + 1..] {
                prop_assert!(poly_gcd(f, h).is_one());
            }
        }
        let (d, y, u) = squarefree_part_split(&g).unwrap();
        prop_assert_eq!(&(&d * &y.square()).scale(&u), &g);
        prop_assert!(poly_gcd(&d, &d.derivative()).is_one());
        prop_assert!(d.divides(&(&a * &c)));
        Ok(())
    });
    let gcd = runner(1000).run(&(coeffs(4), coeffs(4), coeffs(3)), |(a, b, h)| {
        let (a, b, h) = (
            Poly::from_ints(&a),
            Poly::from_ints(&b),
            Poly::from_ints(&h),
        );
        let (x, y) = (&a * &h, &b * &h);
        let g = poly_gcd(&x, &y);
        prop_assert!(g.divides(&x) && g.divides(&y));
        prop_assert!(h.divides(&g));
        let (qx, qy) = (x.div_exact(&g).unwrap(), y.div_exact(&g).unwrap());
        prop_assert!(poly_gcd(&qx, &qy).is_one());
        prop_assert!(g.lc().is_some_and(|c| c.is_one()));
        Ok(())
    });
    let mut rng = rng(9);
    let mut contradictions = 0usize;
    for i in 0..200 {
        let shared = random_poly(&mut rng, 1 + i % 3, 6);
        let a = random_poly(&mut rng, 3, 9);
        let b = random_poly(&mut rng, 3, 9);
        let (a, b) = if i % 2 == 0 {
            (&a * &shared, &b * &shared)
        } else {
            (a, b)
        };
        let fast = certify_coprime(&a, &b, 3, &mut rng).is_coprime();
        let exact = poly_gcd(&a, &b).is_one();
        if fast && !exact {
            contradictions += 1;
        }
    }
    let ok = sqrt.is_ok() && squarefree.is_ok() && gcd.is_ok() && contradictions == 0;
    let detail = format!(
        "sqrt {}, square-free {}, gcd {}, modular contradictions {contradictions}/200",
        if sqrt.is_ok() { "ok" } else { "failed" },
        if squarefree.is_ok() { "ok" } else { "failed" },
        if gcd.is_ok() { "ok" } else { "failed" },
    );
    verdict(9, "arithmetic suites", ok, &detail)
}

#[test]
fn acceptance() {
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    let failed: Vec<_> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    println!(
        "{} of {} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
