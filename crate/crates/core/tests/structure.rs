mod common;

use common::*;
use fszlab_core::constructions::*;
use fszlab_core::kinds::wreath::{classify, WreathClassShape};
use fszlab_core::kinds::WreathGroup;
use fszlab_core::{ElementKey, GroupHandle};

fn members(h: &GroupHandle) -> Vec<ElementKey> {
    h.enumerate().unwrap()
}

fn check_centralizers(name: &str, g: &GroupHandle, elements: &[ElementKey]) {
    for x in elements {
        let fast = g.centralizer(x).unwrap();
        let brute = g.centralizer_brute(x).unwrap();
        assert_eq!(members(&fast), members(&brute), "{name}: C({x})");
        for s in fast.generators() {
            assert!(g.commute(&s, x).unwrap(), "{name}: generator {s} of C({x})");
        }
    }
}

#[test]
fn centers_match_brute_force() {
    for (name, g) in corpus() {
        assert_eq!(g.center().unwrap(), g.center_brute().unwrap(), "{name}");
    }
    for (p, j) in [(5, 1), (2, 3)] {
        let g = f(p, j);
        assert_eq!(g.center().unwrap(), g.center_brute().unwrap(), "F({p},{j})");
    }
}

#[test]
fn fpj_center_is_generated_by_a1p_and_last() {
    for (p, j) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let s = spec(p, j);
        let g = f(p, j);
        let n = s.rank();
        let mut a1p = vec![0i64; n];
        a1p[0] = p as i64;
        let mut last = vec![0i64; n];
        last[n - 1] = 1;
        let gens = [fpj_element(s, &a1p, 0).unwrap(), fpj_element(s, &last, 0).unwrap()];
        let mut z = vec![g.identity()];
        let mut head = 0;
        while head < z.len() {
            let x = z[head].clone();
            head += 1;
            for s in &gens {
                let y = g.multiply(&x, s).unwrap();
                if !z.contains(&y) {
                    z.push(y);
                }
            }
        }
        z.sort();
        assert_eq!(g.center().unwrap(), z, "F({p},{j})");
        assert_eq!(z.len() as u64, p.pow(j as u32) * p);
    }
}

#[test]
fn centralizers_match_brute_force_exhaustively() {
    for (name, g) in corpus() {
        if g.order() > 3000 {
            continue;
        }
        check_centralizers(name, &g, &members(&g));
    }
}

#[test]
fn centralizers_match_brute_force_sampled() {
    let mut r = rng(7);
    let mut large = vec![
        ("wr(Z(9),3)", wreath(&cyclic(9), 3)),
        ("cp(F(3,1),3,z=a1^3)", f31_cp()),
        ("x(F(3,1),S3)", build_direct_product(&f(3, 1), &s3()).unwrap()),
        ("F(5,1)", f(5, 1)),
        ("wr(Z(5),5)", wreath(&cyclic(5), 5)),
        ("wr(F(2,1),2)", wreath(&f(2, 1), 2)),
    ];
    large.push(("wr(wr(Z(2),2),2)", build_sylow_tower(2, 3).unwrap()));
    for (name, g) in large {
        let mut sample: Vec<ElementKey> = (0..40).map(|_| random_element(&g, &mut r)).collect();
        sample.extend(g.center().unwrap().into_iter().take(3));
        check_centralizers(name, &g, &sample);
    }
}

#[test]
fn fp1_centralizers_follow_the_three_cases() {
    for p in [3u64, 5] {
        let s = spec(p, 1);
        let g = f(p, 1);
        let center = g.center().unwrap();
        let mut r = rng(p);
        for _ in 0..60 {
            let x = random_element(&g, &mut r);
            let c = g.centralizer(&x).unwrap();
            let top = x.coords()[s.rank()];
            if center.contains(&x) {
                assert_eq!(c.order(), g.order());
            } else if top == 0 {
                assert_eq!(c.order(), p.pow(p as u32 + 1) as u128);
                assert!(c.is_abelian().unwrap());
            } else {
                assert_eq!(c.order(), (p * p * p) as u128);
                assert!(c.is_abelian().unwrap());
            }
        }
    }
}

#[test]
fn class_data_partitions_the_group() {
    let mut r = rng(11);
    for (name, g) in corpus() {
        let cd = g.conjugacy_data().unwrap();
        let ix = g.index().unwrap();
        assert_eq!(cd.sizes.iter().sum::<u64>() as u128, g.order(), "{name}");
        for &s in &cd.sizes {
            assert_eq!(g.order() % s as u128, 0, "{name}");
        }
        assert!(cd.reps.windows(2).all(|w| w[0] < w[1]));
        for _ in 0..30 {
            let x = random_element(&g, &mut r);
            let c = random_element(&g, &mut r);
            let y = g.conjugate(&x, &c).unwrap();
            let (xi, yi) = (ix.index_of_key(&x).unwrap(), ix.index_of_key(&y).unwrap());
            assert_eq!(cd.class_of[xi as usize], cd.class_of[yi as usize], "{name}");
            assert!(cd.rep_of(xi) <= xi);
        }
        // class count equals the number of commuting pairs over |G|
        let n = ix.len() as u32;
        if n <= 1500 {
            let pairs: u64 = (0..n)
                .map(|a| (0..n).filter(|&b| ix.mul(a, b) == ix.mul(b, a)).count() as u64)
                .sum();
            assert_eq!(pairs, cd.class_count() as u64 * n as u64, "{name}");
        }
    }
}

#[test]
fn exponents_match_brute_force() {
    for (name, g) in corpus() {
        assert_eq!(g.exponent().unwrap(), g.exponent_brute().unwrap(), "{name}");
    }
    let g = f(5, 1);
    assert_eq!(g.exponent().unwrap(), 25);
    assert_eq!(g.exponent_brute().unwrap(), 25);
}

#[test]
fn wreath_exponent_is_p_times_base_exponent() {
    for (d, p) in [(cyclic(9), 3u64), (f(3, 1), 3), (build_abelian(&[4, 2]).unwrap(), 2), (cyclic(5), 5)] {
        let w = wreath(&d, p);
        assert_eq!(w.exponent().unwrap(), p * d.exponent().unwrap());
        if w.order() <= 20000 {
            assert_eq!(w.exponent_brute().unwrap(), p * d.exponent_brute().unwrap());
        }
    }
}

#[test]
fn wreath_class_shapes_give_valid_conjugators() {
    let mut r = rng(3);
    let mut seen = [false; 3];
    for (d, p) in [(s3(), 2u64), (cyclic(3), 3), (f(2, 1), 2), (wreath(&cyclic(2), 2), 2)] {
        let g = wreath(&d, p);
        let w = g.downcast::<WreathGroup>().unwrap();
        for _ in 0..80 {
            let x = random_element(&g, &mut r);
            match classify(w, &g, &x).unwrap() {
                WreathClassShape::Shifted { x: head, conjugator } => {
                    seen[0] = true;
                    let y = g.conjugate(&x, &conjugator).unwrap();
                    assert_eq!(w.component(&y, 0), head);
                    for l in 1..p as usize {
                        assert!(d.is_identity(&w.component(&y, l)));
                    }
                    assert_eq!(w.shift(&y), w.shift(&x));
                }
                WreathClassShape::Diagonal { d: head, conjugator } => {
                    seen[1] = true;
                    let y = g.conjugate(&x, &conjugator).unwrap();
                    for l in 0..p as usize {
                        assert_eq!(w.component(&y, l), head);
                    }
                }
                WreathClassShape::Mixed => {
                    seen[2] = true;
                    let ix = d.index().unwrap();
                    let cd = d.conjugacy_data().unwrap();
                    let classes: Vec<u32> = (0..p as usize)
                        .map(|l| cd.class_of[ix.index_of_key(&w.component(&x, l)).unwrap() as usize])
                        .collect();
                    assert!(classes.iter().any(|&c| c != classes[0]));
                }
            }
        }
    }
    assert_eq!(seen, [true; 3]);
}

#[test]
fn shifted_class_invariant_matches_brute_conjugacy() {
    // (d_0, ..., d_{p-1}, i) is conjugate to (x, 1, ..., 1, i) for x = d_0 d_i d_2i ...
    let d = s3();
    let g = wreath(&d, 3);
    let w = g.downcast::<WreathGroup>().unwrap();
    let ix = g.index().unwrap();
    let cd = g.conjugacy_data().unwrap();
    let mut r = rng(5);
    for _ in 0..100 {
        let x = random_element(&g, &mut r);
        let i = w.shift(&x) as usize;
        if i == 0 {
            continue;
        }
        let comps: Vec<ElementKey> = (0..3).map(|l| w.component(&x, l)).collect();
        let mut prod = d.identity();
        for k in 0..3 {
            prod = d.multiply(&prod, &comps[(k * i) % 3]).unwrap();
        }
        let mut e = vec![d.identity(); 3];
        e[0] = prod;
        let normal = w.assemble(&e, i as u64);
        assert_eq!(
            cd.class_of[ix.index_of_key(&x).unwrap() as usize],
            cd.class_of[ix.index_of_key(&normal).unwrap() as usize]
        );
    }
}

#[test]
fn central_product_generator_has_order_m_times_order_of_z() {
    let k = f31_cp();
    let x = k.element_by_name("x").unwrap();
    assert_eq!(k.element_order(&x).unwrap(), 9);
    let s = spec(5, 1);
    let z = fpj_element(s, &[5, 0, 0, 0, 1], 0).unwrap();
    let k = build_central_product_cyclic(&f(5, 1), 5, &z).unwrap();
    assert_eq!(k.element_order(&k.element_by_name("x").unwrap()).unwrap(), 25);
    assert_eq!(k.order(), 390625);
}
