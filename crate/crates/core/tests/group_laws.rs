mod common;

use common::*;
use fszlab_core::constructions::*;
use fszlab_core::GroupHandle;
use proptest::prelude::*;

fn law_groups() -> Vec<(&'static str, GroupHandle)> {
    let mut v = corpus();
    let s = spec(5, 1);
    let z = fpj_element(s, &[5, 0, 0, 0, 1], 0).unwrap();
    v.push(("F(3,2)", f(3, 2)));
    v.push(("F(5,1)", f(5, 1)));
    v.push(("S(5,1)", build_s(s).unwrap()));
    v.push(("cp(F(5,1),5,z=a1^5*a5)", build_central_product_cyclic(&f(5, 1), 5, &z).unwrap()));
    v.push(("wr(F(3,1),3)", wreath(&f(3, 1), 3)));
    v.push(("wr(wr(Z(3),3),3)", build_sylow_tower(3, 3).unwrap()));
    v
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10_000, ..ProptestConfig::default() })]

    #[test]
    fn associativity_and_inverses(seed in any::<u64>()) {
        let mut r = rng(seed);
        for (name, g) in law_groups() {
            let (a, b, c) = (random_element(&g, &mut r), random_element(&g, &mut r), random_element(&g, &mut r));
            let left = g.multiply(&g.multiply(&a, &b).unwrap(), &c).unwrap();
            let right = g.multiply(&a, &g.multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(&left, &right, "{}", name);
            let ai = g.inverse(&a).unwrap();
            prop_assert!(g.is_identity(&g.multiply(&a, &ai).unwrap()), "{}", name);
            prop_assert!(g.is_identity(&g.multiply(&ai, &a).unwrap()), "{}", name);
            prop_assert!(g.validate(&left).is_ok(), "{}", name);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

    #[test]
    fn power_is_repeated_product(seed in any::<u64>(), k in -12i64..40) {
        let mut r = rng(seed);
        for (name, g) in law_groups() {
            let a = random_element(&g, &mut r);
            let step = if k < 0 { g.inverse(&a).unwrap() } else { a.clone() };
            let mut folded = g.identity();
            for _ in 0..k.unsigned_abs() {
                folded = g.multiply(&folded, &step).unwrap();
            }
            prop_assert_eq!(g.power(&a, k).unwrap(), folded, "{}", name);
        }
    }
}

#[test]
fn identity_is_neutral_and_least() {
    for (name, g) in corpus() {
        let e = g.identity();
        let all = g.enumerate().unwrap();
        assert_eq!(all[0], e, "{name}");
        assert_eq!(all.len() as u128, g.order(), "{name}");
        assert!(all.windows(2).all(|w| w[0] < w[1]), "{name}");
        for a in all.iter().step_by(7) {
            assert_eq!(&g.multiply(&e, a).unwrap(), a, "{name}");
        }
    }
}

#[test]
fn foreign_keys_are_rejected() {
    let g = f(3, 1);
    assert!(g.validate(&fszlab_core::ElementKey::new([0, 0, 0])).is_err());
    assert!(g.validate(&fszlab_core::ElementKey::new([9, 0, 0, 0])).is_err());
    let q = build_s(spec(3, 1)).unwrap();
    // keys of a quotient must be least coset members
    assert!(q.validate(&fszlab_core::ElementKey::new([8, 0, 2, 0])).is_err());
}
