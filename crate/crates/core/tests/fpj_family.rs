mod common;

use common::*;
use fszlab_core::constructions::*;
use fszlab_core::kinds::SemidirectGroup;
use fszlab_core::modular::ActionMatrix;
use fszlab_core::{ElementKey, GroupHandle};
use rand::Rng;

/// All coordinate vectors below the given radices, in lexicographic order.
fn for_each_key(radix: &[u32], mut f: impl FnMut(&ElementKey)) {
    let mut c = vec![0u32; radix.len()];
    loop {
        f(&ElementKey::from_slice(&c));
        let mut i = radix.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            c[i] += 1;
            if c[i] < radix[i] {
                break;
            }
            c[i] = 0;
        }
    }
}

#[test]
fn closed_form_power_matches_generic_power_exhaustively() {
    for (p, j) in [(3u64, 1u64), (5, 1), (3, 2)] {
        let s = spec(p, j);
        let g = f(p, j);
        let mut radix: Vec<u32> = s.base_moduli().iter().map(|&m| m as u32).collect();
        radix.push(p.pow(j as u32) as u32);
        let e = p.pow(j as u32) as i64;
        let mut count = 0u64;
        for_each_key(&radix, |a| {
            assert_eq!(fast_power_f(s, a).unwrap(), g.power(a, e).unwrap(), "F({p},{j}) at {a}");
            count += 1;
        });
        assert_eq!(count as u128, g.order());
    }
}

#[test]
fn action_matrix_has_order_pj() {
    for (p, j) in [(3u64, 1u64), (5, 1), (3, 2), (7, 1)] {
        let b = build_b_matrix(spec(p, j));
        assert_eq!(b.multiplicative_order().unwrap(), p.pow(j as u32));
        // no smaller power is the identity
        let mut m = b.clone();
        for _ in 1..p.pow(j as u32) {
            assert!(!m.is_identity());
            m = m.compose(&b).unwrap();
        }
        assert!(m.is_identity());
    }
}

#[test]
fn summed_powers_act_as_described() {
    let mut r = rng(17);
    for (p, j) in [(3u64, 1u64), (5, 1), (3, 2), (7, 1)] {
        let s = spec(p, j);
        let n = s.rank();
        let moduli = s.base_moduli();
        let pj = p.pow(j as u32) as i64;
        for l in 0..=j as u32 {
            let x = build_x_matrix(s, l).unwrap();
            let scaled = x.scale(p.pow(l) as i64);
            for _ in 0..50 {
                let v: Vec<i64> = moduli.iter().map(|&m| r.gen_range(0..m as i64)).collect();
                let vec = fszlab_core::modular::MixedModulusVector::new(&v, &moduli).unwrap();
                let got = scaled.apply(&vec).unwrap();
                let mut expect = vec![0i64; n];
                if l == 0 {
                    expect[0] = pj * v[0];
                    expect[n - 1] = -v[0];
                } else {
                    // p^l X(p^l) sends the vector to a_1^{p^j n_1}
                    expect[0] = pj * v[0];
                }
                let want = fszlab_core::modular::MixedModulusVector::new(&expect, &moduli).unwrap();
                assert_eq!(got, want, "F({p},{j}) l={l}");
            }
        }
        assert!(build_x_matrix(s, j as u32).unwrap().is_identity());
    }
}

/// `P x| <b>` written directly on `P = Q / <a1^p a_p>`, coordinates
/// `a1..a_{p-1}` with `a_p = a1^{-p}`.
fn direct_s(p: u64) -> GroupHandle {
    let n = (p - 1) as usize;
    let mut moduli = vec![p; n];
    moduli[0] = p * p;
    let mut m = ActionMatrix::identity(&moduli);
    m.set(1, 0, -1);
    for k in 2..n {
        m.set(k, k - 1, 1);
    }
    // a_{p-1} -> a_{p-1} a_p = a_{p-1} a1^{-p}
    m.set(0, n - 1, -(p as i64));
    GroupHandle::new(SemidirectGroup::new(m, p).unwrap())
}

fn to_direct(p: u64, a: &ElementKey) -> ElementKey {
    let c = a.coords();
    let n = p as usize;
    let p2 = (p * p) as i64;
    let first = (c[0] as i64 - p as i64 * c[n - 1] as i64).rem_euclid(p2) as u32;
    let mut out = vec![first];
    out.extend_from_slice(&c[1..n - 1]);
    out.push(c[n]);
    ElementKey::from_slice(&out)
}

#[test]
fn quotient_matches_the_direct_presentation() {
    for p in [3u64, 5] {
        let q = build_s(spec(p, 1)).unwrap();
        let d = direct_s(p);
        assert_eq!(q.order(), d.order());
        let elems = q.enumerate().unwrap();
        let mut images: Vec<ElementKey> = elems.iter().map(|a| to_direct(p, a)).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len() as u128, d.order(), "bijective for p={p}");
        let mut r = rng(p);
        let pairs = if p == 3 { elems.len() * elems.len() } else { 200_000 };
        for k in 0..pairs {
            let (a, b) = if p == 3 {
                (&elems[k / elems.len()], &elems[k % elems.len()])
            } else {
                (&elems[r.gen_range(0..elems.len())], &elems[r.gen_range(0..elems.len())])
            };
            let ab = q.multiply(a, b).unwrap();
            assert_eq!(
                to_direct(p, &ab),
                d.multiply(&to_direct(p, a), &to_direct(p, b)).unwrap(),
                "p={p}"
            );
        }
    }
}

#[test]
fn family_orders_and_exponents() {
    for (p, j) in [(3u64, 1u64), (5, 1), (3, 2), (7, 1), (2, 1), (2, 2)] {
        let g = f(p, j);
        assert_eq!(g.order(), (p as u128).pow(spec(p, j).order_exponent()));
        assert_eq!(g.exponent().unwrap(), p.pow(j as u32 + 1));
    }
    assert!(f(2, 1).extrapolated());
    assert!(!f(3, 1).extrapolated());
    assert_eq!(f(2, 1).exponent_brute().unwrap(), 4);
    assert_eq!(f(3, 1).exponent_brute().unwrap(), 9);
}
