#![allow(dead_code)]

use fszlab_core::constructions::*;
use fszlab_core::{ElementKey, GroupHandle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A product of random generators and inverses; reaches every element of a
/// finite group with positive probability.
pub fn random_element(g: &GroupHandle, rng: &mut impl Rng) -> ElementKey {
    let gens = g.generators();
    let mut x = g.identity();
    if gens.is_empty() {
        return x;
    }
    for _ in 0..rng.gen_range(0..40) {
        let s = &gens[rng.gen_range(0..gens.len())];
        let s = if rng.gen_bool(0.5) { s.clone() } else { g.inverse(s).unwrap() };
        x = g.multiply(&x, &s).unwrap();
    }
    x
}

pub fn spec(p: u64, j: u64) -> FpjSpec {
    FpjSpec::new(p, j).unwrap()
}

pub fn f(p: u64, j: u64) -> GroupHandle {
    build_f(spec(p, j)).unwrap()
}

pub fn cyclic(n: u64) -> GroupHandle {
    build_cyclic(n).unwrap()
}

pub fn wreath(d: &GroupHandle, p: u64) -> GroupHandle {
    build_wreath(d, p).unwrap()
}

pub fn perm(text: &str) -> GroupHandle {
    import_permutation_group(text).unwrap()
}

pub fn s3() -> GroupHandle {
    perm("deg 3\n(1,2,3)\n(1,2)\n")
}

/// `F(3,1) * Z_9` with `x^3 = a1^3`.
pub fn f31_cp() -> GroupHandle {
    let z = fpj_element(spec(3, 1), &[3, 0, 0], 0).unwrap();
    build_central_product_cyclic(&f(3, 1), 3, &z).unwrap()
}

/// Named groups of order at most 20000, one or more per construction kind.
pub fn corpus() -> Vec<(&'static str, GroupHandle)> {
    let s31 = build_s(spec(3, 1)).unwrap();
    vec![
        ("Ab(4,6)", build_abelian(&[4, 6]).unwrap()),
        ("F(2,1)", f(2, 1)),
        ("F(3,1)", f(3, 1)),
        ("F(2,2)", f(2, 2)),
        ("S(3,1)", s31),
        ("wr(Z(3),3)", wreath(&cyclic(3), 3)),
        ("wr(wr(Z(2),2),2)", wreath(&wreath(&cyclic(2), 2), 2)),
        ("wr(S3,2)", wreath(&s3(), 2)),
        ("wr(Z(9),3)", wreath(&cyclic(9), 3)),
        ("cp(F(3,1),3,z=a1^3)", f31_cp()),
        ("x(F(3,1),S3)", build_direct_product(&f(3, 1), &s3()).unwrap()),
        ("perm S4", perm("deg 4\n(1,2,3,4)\n(1,2)\n")),
    ]
}
