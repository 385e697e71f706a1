mod common;

use common::*;
use fszlab_core::constructions::*;
use fszlab_core::fsz::{fsz_m_test, fsz_plus_test, fsz_test, Auto, FszOptions};
use fszlab_core::group::gcd;
use fszlab_core::modular::MixedModulusVector;
use fszlab_core::wreath_analyzer::*;
use fszlab_core::{ElementKey, GroupHandle};
use rand::Rng;

/// Counts tuples in `D^p` by a direct scan of every tuple.
fn tuple_scan(d: &GroupHandle, p: u64, t: u32, target: &ElementKey, u0: &ElementKey) -> u128 {
    let elems = d.enumerate().unwrap();
    let pt = p.pow(t) as i64;
    let mut count = 0;
    let total = elems.len().pow(p as u32);
    for code in 0..total {
        let mut c = code;
        let xs: Vec<&ElementKey> = (0..p)
            .map(|_| {
                let x = &elems[c % elems.len()];
                c /= elems.len();
                x
            })
            .collect();
        if !xs.iter().all(|x| &d.power(x, pt).unwrap() == target) {
            continue;
        }
        let mut w = u0.clone();
        for x in xs[1..].iter().chain(std::iter::once(&xs[0])) {
            w = d.multiply(&w, x).unwrap();
        }
        if &d.power(&w, pt / p as i64).unwrap() == target {
            count += 1;
        }
    }
    count
}

#[test]
fn counts_equal_tuple_scans() {
    let mut r = rng(5);
    let cases = [(wreath(&cyclic(2), 2), 2u64, 1u32), (wreath(&cyclic(2), 2), 2, 2), (s3(), 3, 1), (cyclic(9), 3, 1)];
    for (d, p, t) in cases {
        for _ in 0..12 {
            let dd = random_element(&d, &mut r);
            let u0 = random_element(&d, &mut r);
            let n = [1u64, 5, 7][r.gen_range(0..3)];
            if n % p == 0 {
                continue;
            }
            let inst = WreathConditionInstance::new(&d, p, t, &dd, &u0, n).unwrap();
            let target = d.power(&dd, n as i64).unwrap();
            assert_eq!(wreath_condition_count(&inst).unwrap(), tuple_scan(&d, p, t, &target, &u0));
        }
    }
}

#[test]
fn cyclic_nine_criterion_and_full_test() {
    let z9 = cyclic(9);
    for t in [1, 2] {
        let r = wreath_condition_test(&z9, 3, t, &FszOptions::default()).unwrap();
        assert_eq!(r.outcome, CriterionOutcome::Holds);
    }
    let w = wreath(&z9, 3);
    assert_eq!(w.order(), 2187);
    assert!(fsz_test(&w, &FszOptions::default()).unwrap().holds);
}

#[test]
fn criterion_agrees_with_full_test_on_order_128() {
    let d = wreath(&cyclic(2), 2);
    let w = wreath(&d, 2);
    assert_eq!(w.order(), 128);
    for t in [1, 2, 3] {
        let r = wreath_condition_test(&d, 2, t, &FszOptions::default()).unwrap();
        let direct = fsz_m_test(&w, 2u64.pow(t), &Auto).unwrap();
        assert!(r.certifies_wreath_fsz());
        assert!(direct.holds);
    }
}

#[test]
fn criterion_at_the_exponent_matches_the_smaller_property() {
    // exp(D) = p^j: the criterion at t = j agrees with D being FSZ_{p^{j-1}}
    let cases = [
        (cyclic(9), 3u64),
        (wreath(&cyclic(2), 2), 2),
        (wreath(&cyclic(3), 3), 3),
        (build_abelian(&[4, 2]).unwrap(), 2),
        (f(3, 1), 3),
        (f(2, 2), 2),
    ];
    for (d, p) in cases {
        let exp = d.exponent().unwrap();
        let mut j = 0;
        while p.pow(j) < exp {
            j += 1;
        }
        assert_eq!(p.pow(j), exp);
        let r = wreath_condition_test(&d, p, j, &FszOptions::default()).unwrap();
        let smaller = fsz_m_test(&d, p.pow(j - 1), &Auto).unwrap();
        assert_eq!(r.certifies_wreath_fsz(), smaller.holds, "{}", d.descriptor());
        let w = wreath(&d, p);
        if w.order() <= 20000 {
            assert!(fsz_m_test(&w, p.pow(j), &Auto).unwrap().holds);
        }
    }
}

#[test]
fn abelian_counts_are_independent_of_n() {
    let cases = [(build_abelian(&[9]).unwrap(), 3u64), (build_abelian(&[4, 2]).unwrap(), 2), (build_abelian(&[8]).unwrap(), 2), (build_abelian(&[3, 9]).unwrap(), 3)];
    for (a, p) in cases {
        let exp = a.exponent().unwrap();
        let elems = a.enumerate().unwrap();
        let mut t = 1;
        while p.pow(t) <= exp * p {
            for d in &elems {
                for u0 in &elems {
                    let base = wreath_condition_count(&WreathConditionInstance::new(&a, p, t, d, u0, 1).unwrap()).unwrap();
                    for n in (2..2 * exp).filter(|&n| gcd(n, p) == 1) {
                        let inst = WreathConditionInstance::new(&a, p, t, d, u0, n).unwrap();
                        assert_eq!(wreath_condition_count(&inst).unwrap(), base);
                    }
                }
            }
            let cert = abelian_bijection_certificate(&a, p, t).unwrap();
            assert!(cert.holds);
            assert!(!cert.roots.is_empty());
            t += 1;
        }
    }
}

#[test]
fn abelian_wreaths_are_fsz_plus() {
    for (a, p) in [(build_abelian(&[9]).unwrap(), 3u64), (build_abelian(&[4, 2]).unwrap(), 2)] {
        let w = wreath(&a, p);
        assert!(fsz_plus_test(&w, &FszOptions::default()).unwrap().holds);
    }
}

#[test]
fn structured_certificates_match_brute_criterion() {
    let opts = CheckOptions::default();
    let fp1 = fp1_wreath_fszp_check(3, &opts).unwrap();
    assert!(fp1.holds);
    let brute = wreath_condition_test(&f(3, 1), 3, 1, &FszOptions::default()).unwrap();
    assert_eq!(fp1.holds, brute.certifies_wreath_fsz());

    for p in [2, 3] {
        let sp3 = sp3_check(p, &opts).unwrap();
        let d = wreath(&cyclic(p), p);
        let brute = wreath_condition_test(&d, p, 1, &FszOptions::default()).unwrap();
        assert_eq!(sp3.holds, brute.certifies_wreath_fsz());
        assert!(sp3.holds);
    }
}

#[test]
fn fp1_certificate_has_both_branches() {
    let c = fp1_wreath_fszp_check(5, &CheckOptions::default()).unwrap();
    assert!(c.holds);
    let methods: Vec<&str> = c.branches.iter().map(|b| b.method.as_str()).collect();
    assert_eq!(methods, vec!["abelian-bijection", "linear-image"]);
    let lin = &c.branches[1];
    assert_eq!(lin.tuples, 208);
    assert_eq!(lin.witness_checks, 4 * 208);
    // r_0 = (d1, 0, 0, 0, -d1), r_i = (d1, 0, 0, 0, 0) with d1 = 1
    let w = lin.witness.as_ref().unwrap();
    assert_eq!(w[0], vec![1, 0, 0, 0, 4]);
    assert_eq!(w[1], vec![1, 0, 0, 0, 0]);
}

#[test]
fn paper_witnesses_solve_their_systems() {
    let s = spec(5, 1);
    let moduli = s.base_moduli();
    let b = build_b_matrix(s);
    let x = build_x_matrix(s, 0).unwrap();
    let mut bp = vec![fszlab_core::modular::ActionMatrix::identity(&moduli)];
    for _ in 1..5 {
        let next = bp.last().unwrap().compose(&b).unwrap();
        bp.push(next);
    }
    let d1 = 2;
    let d = MixedModulusVector::new(&[5 * d1, 0, 0, 0, -d1], &moduli).unwrap();
    let mut r = vec![MixedModulusVector::new(&[d1, 0, 0, 0, -d1], &moduli).unwrap()];
    for _ in 1..5 {
        r.push(MixedModulusVector::new(&[d1, 0, 0, 0, 0], &moduli).unwrap());
    }
    for tuple in [vec![1, 1, 1, 1, 1], vec![1, 2, 3, 4, 1], vec![4, 4, 2, 3, 1]] {
        let sys = power_sum_system(&x, &bp, &tuple, &d);
        assert!(sys.is_solution(&unshift(&bp, &tuple, &r).unwrap()).unwrap());
        assert!(linear_image_membership(&sys).unwrap().is_member());
    }

    // row and column sums t: m_{ij} = t delta_{ij}
    let p = 5usize;
    let qm = vec![5u64; p];
    let mut perm = fszlab_core::modular::ActionMatrix::zeros(p, p, &qm);
    for i in 0..p {
        perm.set((i + 1) % p, i, 1);
    }
    let j = fszlab_core::modular::ActionMatrix::from_signed(p, p, &vec![1; p * p], &qm).unwrap();
    let mut pp = vec![fszlab_core::modular::ActionMatrix::identity(&qm)];
    for _ in 1..p {
        let next = pp.last().unwrap().compose(&perm).unwrap();
        pp.push(next);
    }
    let t = 3;
    let d = MixedModulusVector::new(&vec![t; p], &qm).unwrap();
    let r: Vec<MixedModulusVector> = (0..p)
        .map(|i| {
            let mut v = vec![0; p];
            v[i] = t;
            MixedModulusVector::new(&v, &qm).unwrap()
        })
        .collect();
    let tuple = vec![2, 1, 4, 3, 3];
    let sys = power_sum_system(&j, &pp, &tuple, &d);
    assert!(sys.is_solution(&unshift(&pp, &tuple, &r).unwrap()).unwrap());

    let zero = MixedModulusVector::zeros(&qm);
    let sys = power_sum_system(&j, &pp, &tuple, &zero);
    match linear_image_membership(&sys).unwrap() {
        Membership::Member { preimage } => assert!(preimage.iter().all(|v| v.is_zero())),
        Membership::NonMember => panic!("zero target"),
    }
}

#[test]
fn sp3_certificates() {
    for p in [2, 3, 5, 7] {
        let c = sp3_check(p, &CheckOptions::default()).unwrap();
        assert!(c.holds, "p = {p}");
        assert!(c.tower.as_ref().unwrap().holds);
    }
    let c = sp3_check(2, &CheckOptions::default()).unwrap();
    assert_eq!(c.direct, Some(true));
    assert_eq!(sp3_group(2).unwrap().order(), 128);
}

#[test]
fn tower_claims() {
    let opts = CheckOptions::default();
    let r = sylow_tower_claim(2, 3, &opts).unwrap();
    assert!(r.holds);
    assert!(r.direct.as_ref().unwrap().holds);
    let r = sylow_tower_claim(3, 2, &opts).unwrap();
    assert!(r.holds && r.direct.as_ref().unwrap().holds);
    let r = sylow_tower_claim(5, 2, &opts).unwrap();
    assert!(r.holds);
    assert_eq!(r.m, 5);
    let r = sylow_tower_claim(7, 1, &opts).unwrap();
    assert!(r.holds && r.m == 1);
    let r = sylow_tower_claim(3, 4, &opts).unwrap();
    assert!(r.holds && r.direct.is_none());
    assert_eq!(r.steps.last().unwrap().exponent, 81);
}

#[test]
fn centralizer_orders_follow_the_three_cases() {
    let groups = [
        wreath(&cyclic(3), 3),
        wreath(&wreath(&cyclic(2), 2), 2),
        wreath(&s3(), 2),
        wreath(&cyclic(9), 3),
        wreath(&build_abelian(&[4, 2]).unwrap(), 2),
        wreath(&cyclic(5), 5),
        wreath(&s3(), 3),
    ];
    let mut seen = std::collections::BTreeSet::new();
    for w in &groups {
        assert!(w.order() <= 20000);
        let ix = w.index().unwrap();
        let classes = w.conjugacy_data().unwrap();
        for &rep in &classes.reps {
            let g = ix.key(rep);
            let (case, order) = predicted_centralizer_order(w, &g).unwrap();
            seen.insert(format!("{case:?}"));
            assert_eq!(order, w.centralizer_brute(&g).unwrap().order(), "{} {g}", w.descriptor());
            assert_eq!(order, w.centralizer(&g).unwrap().order());
        }
    }
    assert_eq!(seen.len(), 3);
}

#[test]
fn shifted_centralizers_are_central_products() {
    let d = s3();
    let w = wreath(&d, 3);
    for x in d.enumerate().unwrap() {
        for i in [1, 2] {
            let c = verify_shifted_centralizer(&w, &x, i).unwrap();
            assert!(c.holds);
            assert_eq!(c.order, w.centralizer_brute(&c.element).unwrap().order());
        }
    }
}

#[test]
fn rotations_of_centralizing_products_agree() {
    let mut r = rng(17);
    for (name, g) in corpus() {
        for _ in 0..10 {
            let c = random_element(&g, &mut r);
            let cent = g.centralizer(&c).unwrap();
            let k = r.gen_range(1..6);
            let mut parts: Vec<ElementKey> = (0..k).map(|_| random_element(&cent, &mut r)).collect();
            let head = g.product(parts.iter()).unwrap();
            parts.push(g.multiply(&g.inverse(&head).unwrap(), &c).unwrap());
            for i in 0..parts.len() {
                let rotated: Vec<&ElementKey> = parts[i..].iter().chain(&parts[..i]).collect();
                assert_eq!(g.product(rotated).unwrap(), c, "{name}");
            }
        }
    }
}

#[test]
fn failed_preconditions_are_inconclusive() {
    // a base that is not FSZ_5 fails the precondition
    let q = build_s(spec(5, 1)).unwrap();
    assert!(!fsz_m_test(&q, 5, &Auto).unwrap().holds);
    let r = wreath_condition_test(&q, 5, 1, &FszOptions::default()).unwrap();
    assert_eq!(r.outcome, CriterionOutcome::Inconclusive);
    assert!(r.reason.unwrap().contains("FSZ_5"));
}
