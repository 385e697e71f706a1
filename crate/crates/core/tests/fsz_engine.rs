mod common;

use common::*;
use fszlab_core::constructions::*;
use fszlab_core::fsz::*;
use fszlab_core::group::{divisors, gcd};
use fszlab_core::kinds::CentralQuotient;
use fszlab_core::{ElementKey, GroupHandle};
use rand::seq::SliceRandom;
use rand::Rng;

/// `m`-th powers by repeated multiplication on the dense index.
fn slow_powers(g: &GroupHandle, m: u64) -> Vec<u32> {
    let ix = g.index().unwrap();
    (0..ix.len() as u32)
        .map(|a| (0..m).fold(0u32, |acc, _| ix.mul(acc, a)))
        .collect()
}

/// `count[u] = #{a : a^m = g, (au)^m = g}` for every `u`.
fn oracle_counts(g: &GroupHandle, pw: &[u32], target: u32) -> Vec<u64> {
    let ix = g.index().unwrap();
    let fiber: Vec<u32> = (0..pw.len() as u32).filter(|&a| pw[a as usize] == target).collect();
    (0..ix.len() as u32)
        .map(|u| fiber.iter().filter(|&&a| pw[ix.mul(a, u) as usize] == target).count() as u64)
        .collect()
}

fn small_corpus() -> Vec<(&'static str, GroupHandle)> {
    corpus().into_iter().filter(|(_, g)| g.order() <= 2500).collect()
}

#[test]
fn convolution_counts_equal_direct_enumeration() {
    for (name, g) in small_corpus() {
        let ix = g.index().unwrap();
        for m in divisors(g.exponent().unwrap()) {
            let pw = slow_powers(&g, m);
            let mut image: Vec<u32> = pw.clone();
            image.sort_unstable();
            image.dedup();
            for &t in &image {
                let want = oracle_counts(&g, &pw, t);
                let got = fiber_convolution_counts(&g, m, &ix.key(t), &ix.key(t)).unwrap();
                for (u, &w) in want.iter().enumerate() {
                    assert_eq!(got.count(&ix.key(u as u32)), w, "{name} m={m} g={} u={u}", ix.key(t));
                }
                assert_eq!(got.total(), got.fiber_g * got.fiber_target);
            }
        }
    }
}

#[test]
fn indicator_sets_agree_with_convolution_counts() {
    let mut r = rng(21);
    for (name, g) in small_corpus() {
        let ix = g.index().unwrap();
        for m in divisors(g.exponent().unwrap()) {
            let pw = ix.power_map(m);
            for _ in 0..8 {
                let t = pw[r.gen_range(0..ix.len())];
                let gk = ix.key(t);
                let counts = fiber_convolution_counts(&g, m, &gk, &gk).unwrap();
                for _ in 0..6 {
                    let u = random_element(&g, &mut r);
                    let set = indicator_set(&g, m, &u, &gk).unwrap();
                    assert_eq!(set.len() as u64, counts.count(&u), "{name} m={m}");
                    for a in &set.members {
                        assert_eq!(g.power(a, m as i64).unwrap(), gk);
                        assert_eq!(g.power(&g.multiply(a, &u).unwrap(), m as i64).unwrap(), gk);
                        assert!(g.commute(a, &gk).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn strategies_reach_identical_verdicts() {
    let reg = StrategyRegistry::standard();
    for (name, g) in small_corpus() {
        for m in divisors(g.exponent().unwrap()) {
            let verdicts: Vec<MVerdict> = reg
                .names()
                .iter()
                .map(|s| fsz_m_test(&g, m, reg.get(s).unwrap().as_ref()).unwrap())
                .collect();
            for v in &verdicts[1..] {
                assert_eq!(v.holds, verdicts[0].holds, "{name} m={m}");
                assert_eq!(v.witness, verdicts[0].witness, "{name} m={m}");
            }
        }
    }
}

#[test]
fn small_m_always_holds() {
    for (name, g) in small_corpus() {
        for m in [1, 2, 3, 4, 6] {
            assert!(fsz_m_test(&g, m, &Auto).unwrap().holds, "{name} m={m}");
        }
    }
}

#[test]
fn abelian_groups_are_fsz() {
    for moduli in [vec![8u64, 4], vec![9, 3, 3], vec![25, 5]] {
        let g = build_abelian(&moduli).unwrap();
        assert!(fsz_test(&g, &FszOptions::default()).unwrap().holds);
        assert!(fsz_plus_test(&g, &FszOptions::default()).unwrap().holds);
    }
}

#[test]
fn f51_is_fsz_and_its_quotient_and_central_product_are_not() {
    let s = spec(5, 1);
    let g = f(5, 1);
    let r = fsz_test(&g, &FszOptions::default()).unwrap();
    assert_eq!(r.ms, vec![1, 5, 25]);
    assert!(r.holds);

    let q = build_s(s).unwrap();
    for strategy in ["auto", "convolution", "fiber-scan"] {
        let v = fsz_m_test(&q, 5, StrategyRegistry::standard().get(strategy).unwrap().as_ref()).unwrap();
        assert!(!v.holds, "{strategy}");
        let w = v.witness.unwrap();
        let at_g = indicator_set(&q, 5, &w.u, &w.g).unwrap();
        let at_gn = indicator_set(&q, 5, &w.u, &w.g_n).unwrap();
        assert_eq!(at_g.len() as u64, w.count_g);
        assert_eq!(at_gn.len() as u64, w.count_gn);
        assert_ne!(w.count_g, w.count_gn);
        assert_eq!(q.power(&w.g, w.n as i64).unwrap(), w.g_n);
        assert_eq!(gcd(w.n, 5), 1);
    }
    assert!(fsz_m_test(&q, 25, &Auto).unwrap().holds);
}

#[test]
fn indicator_sets_outside_the_power_image_are_empty() {
    let g = f(5, 1);
    let center = g.center().unwrap();
    let mut r = rng(2);
    for _ in 0..10 {
        let x = random_element(&g, &mut r);
        if center.contains(&x) {
            continue;
        }
        let u = random_element(&g.centralizer(&x).unwrap(), &mut r);
        assert!(indicator_set(&g, 5, &u, &x).unwrap().is_empty());
    }
}

#[test]
fn wreath_of_cyclic_is_fsz() {
    let w = wreath(&cyclic(5), 5);
    let r = fsz_test(&w, &FszOptions::default()).unwrap();
    assert!(r.holds);
    // u = g = 1, m = 5: all elements of order dividing 5
    let id = w.identity();
    let set = indicator_set(&w, 5, &id, &id).unwrap();
    let brute = w
        .enumerate()
        .unwrap()
        .iter()
        .filter(|a| w.is_identity(&w.power(a, 5).unwrap()))
        .count();
    assert_eq!(set.len(), brute);
}

#[test]
fn inverse_and_conjugation_symmetries() {
    let mut r = rng(33);
    for (name, g) in small_corpus() {
        for m in divisors(g.exponent().unwrap()) {
            for _ in 0..5 {
                let gk = g.power(&random_element(&g, &mut r), m as i64).unwrap();
                let c = g.centralizer(&gk).unwrap();
                let u = random_element(&c, &mut r);
                let n0 = indicator_set(&g, m, &u, &gk).unwrap().len();
                let ui = g.inverse(&u).unwrap();
                assert_eq!(indicator_set(&g, m, &ui, &gk).unwrap().len(), n0, "{name}");
                let t = random_element(&g, &mut r);
                let (ut, gt) = (g.conjugate(&u, &t).unwrap(), g.conjugate(&gk, &t).unwrap());
                assert_eq!(indicator_set(&g, m, &ut, &gt).unwrap().len(), n0, "{name}");
            }
        }
    }
}

#[test]
fn direct_products_multiply_counts() {
    let mut r = rng(8);
    let pairs = [(f(3, 1), s3()), (cyclic(9), wreath(&cyclic(2), 2)), (build_s(spec(3, 1)).unwrap(), cyclic(3))];
    for (h, k) in pairs {
        let hk = build_direct_product(&h, &k).unwrap();
        for m in [1u64, 2, 3, 9] {
            for _ in 0..6 {
                let gh = h.power(&random_element(&h, &mut r), m as i64).unwrap();
                let gk = k.power(&random_element(&k, &mut r), m as i64).unwrap();
                let uh = random_element(&h.centralizer(&gh).unwrap(), &mut r);
                let uk = random_element(&k.centralizer(&gk).unwrap(), &mut r);
                let mut u = uh.clone();
                u.extend_from_slice(uk.coords());
                let mut gg = gh.clone();
                gg.extend_from_slice(gk.coords());
                let whole = indicator_set(&hk, m, &u, &gg).unwrap().len();
                let parts = indicator_set(&h, m, &uh, &gh).unwrap().len() * indicator_set(&k, m, &uk, &gk).unwrap().len();
                assert_eq!(whole, parts);
            }
        }
    }
}

fn central_corpus() -> Vec<(&'static str, GroupHandle)> {
    corpus()
        .into_iter()
        .filter(|(_, g)| g.center().unwrap().len() > 1)
        .collect()
}

#[test]
fn x_sets_project_onto_quotient_indicator_sets() {
    let mut r = rng(44);
    let groups = central_corpus();
    assert!(groups.len() >= 5);
    let mut tuples = 0;
    for (name, g) in &groups {
        let center = g.center().unwrap();
        let exps = divisors(g.exponent().unwrap());
        for _ in 0..12 {
            let z = center[r.gen_range(1..center.len())].clone();
            let h = build_quotient_by_central(g, &z).unwrap();
            let quot = h.downcast::<CentralQuotient>().unwrap();
            let m = *exps.choose(&mut r).unwrap();
            let gk = random_element(g, &mut r);
            let u = random_element(g, &mut r);
            let n = loop {
                let n = r.gen_range(1..50u64);
                if gcd(n, (g.order() % n as u128) as u64) == 1 {
                    break n;
                }
            };
            let x = x_set(g, &z, m, &u, &gk, n).unwrap();
            assert!(x.disjoint && x.closed_under_z, "{name}");
            let (ua, gna) = (quot.project(&u).unwrap(), quot.project(&g.power(&gk, n as i64).unwrap()).unwrap());
            let hs = indicator_set(&h, m, &ua, &gna).unwrap();
            assert_eq!(x.set.len() as u64, x.z_order * hs.len() as u64, "{name} m={m} n={n}");
            let mut image: Vec<ElementKey> = x.set.members.iter().map(|a| quot.project(a).unwrap()).collect();
            image.sort();
            image.dedup();
            assert_eq!(image, hs.members, "{name}");
            tuples += 1;
        }
    }
    assert!(tuples >= 60);
}

#[test]
fn central_product_counts_match_enumeration_in_the_product() {
    let mut r = rng(55);
    let cases: Vec<(GroupHandle, ElementKey, u64)> = vec![
        (cyclic(9), ElementKey::new([3]), 3),
        (cyclic(9), ElementKey::new([3]), 9),
        (f(3, 1), fpj_element(spec(3, 1), &[3, 0, 0], 0).unwrap(), 3),
        (f(3, 1), fpj_element(spec(3, 1), &[3, 0, 1], 0).unwrap(), 9),
        (wreath(&cyclic(3), 3), ElementKey::new([1, 1, 1, 0]), 3),
    ];
    for (g, z, m) in cases {
        let k = build_central_product_cyclic(&g, m, &z).unwrap();
        let cp = k.downcast::<fszlab_core::kinds::CentralProduct>().unwrap();
        for _ in 0..12 {
            let gk = random_element(&g, &mut r);
            let u = random_element(&g.centralizer(&gk).unwrap(), &mut r);
            let j = r.gen_range(0..m);
            let n = loop {
                let n = r.gen_range(1..40u64);
                if gcd(n, ((k.order()) % n as u128) as u64) == 1 {
                    break n;
                }
            };
            let via_base = central_product_counts_via_base(&g, &z, m, &u, j, &gk, n).unwrap();
            let uxj = cp.element(&u, j as i64).unwrap();
            let gn = cp.element(&g.power(&gk, n as i64).unwrap(), 0).unwrap();
            let direct = indicator_set(&k, m, &uxj, &gn).unwrap().len() as u64;
            assert_eq!(via_base.total, direct, "{} m={m} j={j} n={n}", k.descriptor());
        }
    }
}

#[test]
fn product_fsz_implies_quotient_fsz() {
    // o(z) | m: if G * <x> is FSZ_m then G/<z> is FSZ_m.
    let cases: Vec<(GroupHandle, ElementKey, u64)> = vec![
        (f(3, 1), fpj_element(spec(3, 1), &[3, 0, 1], 0).unwrap(), 3),
        (wreath(&cyclic(3), 3), ElementKey::new([1, 1, 1, 0]), 3),
        (f(2, 2), fpj_element(spec(2, 2), &[4, 0, 0, 1], 0).unwrap(), 2),
    ];
    for (g, z, m) in cases {
        assert_eq!(m % g.element_order(&z).unwrap(), 0);
        let k = build_central_product_cyclic(&g, m, &z).unwrap();
        let h = build_quotient_by_central(&g, &z).unwrap();
        let kv = fsz_m_test(&k, m, &Auto).unwrap();
        if kv.holds {
            assert!(fsz_m_test(&h, m, &Auto).unwrap().holds, "{}", h.descriptor());
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let g = build_s(spec(5, 1)).unwrap();
    let a = fsz_test(&g, &FszOptions::default()).unwrap();
    let b = fsz_test(&g, &FszOptions::default()).unwrap();
    assert_eq!(a, b);
    assert!(!a.holds);
    assert_eq!(a.failing_m, vec![5]);
}
