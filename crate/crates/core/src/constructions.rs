//! Builders for the group families: abelian groups, `F(p,j)` and its
//! quotient `S(p,j)`, regular wreath products, cyclic central products,
//! central quotients, direct products and imported permutation groups.

use serde::{Deserialize, Serialize};

use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{is_prime, GroupHandle};
use crate::kinds::{
    AbelianGroup, CentralProduct, CentralQuotient, DirectProduct, PermutationGroup,
    SemidirectGroup, WreathGroup,
};
use crate::modular::ActionMatrix;

/// Largest `p^j` accepted for `F(p,j)`; the action matrix is `p^j x p^j`.
pub const MAX_FPJ_RANK: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpjSpec {
    pub p: u32,
    pub j: u32,
}

impl FpjSpec {
    pub fn new(p: u64, j: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(FszError::domain(format!("{p} is not a prime")));
        }
        if j == 0 {
            return Err(FszError::domain("j must be positive"));
        }
        if p.checked_pow(j as u32).map_or(true, |r| r > MAX_FPJ_RANK) {
            return Err(FszError::domain(format!("p^j = {p}^{j} exceeds {MAX_FPJ_RANK}")));
        }
        Ok(FpjSpec {
            p: p as u32,
            j: j as u32,
        })
    }

    /// `p^j`, the number of base generators.
    pub fn rank(&self) -> usize {
        (self.p as usize).pow(self.j)
    }

    /// `(p^{j+1}, p, ..., p)`.
    pub fn base_moduli(&self) -> Vec<u64> {
        let mut m = vec![self.p as u64; self.rank()];
        m[0] = (self.p as u64).pow(self.j + 1);
        m
    }

    /// `log_p |F(p,j)| = p^j + 2j`.
    pub fn order_exponent(&self) -> u32 {
        self.rank() as u32 + 2 * self.j
    }
}

pub fn build_abelian(moduli: &[u64]) -> Result<GroupHandle> {
    Ok(GroupHandle::new(AbelianGroup::new(moduli)?))
}

pub fn build_cyclic(n: u64) -> Result<GroupHandle> {
    build_abelian(&[n])
}

/// The lower-triangular action matrix: ones on the diagonal, `-1` at (2,1)
/// and ones below the diagonal further down; row 1 modulo `p^{j+1}`, the
/// other rows modulo `p`.
pub fn build_b_matrix(spec: FpjSpec) -> ActionMatrix {
    let n = spec.rank();
    let moduli = spec.base_moduli();
    let mut m = ActionMatrix::identity(&moduli);
    m.set(1, 0, -1);
    for k in 2..n {
        m.set(k, k - 1, 1);
    }
    m
}

/// `sum_{t=1}^{p^{j-l}} B^{t p^l}`.
pub fn build_x_matrix(spec: FpjSpec, l: u32) -> Result<ActionMatrix> {
    if l > spec.j {
        return Err(FszError::domain(format!("l = {l} is outside [0, {}]", spec.j)));
    }
    let b = build_b_matrix(spec);
    let step = b.pow((spec.p as u64).pow(l))?;
    let terms = (spec.p as u64).pow(spec.j - l);
    let mut power = step.clone();
    let mut sum = power.clone();
    for _ in 1..terms {
        power = power.compose(&step)?;
        sum = sum.add(&power)?;
    }
    Ok(sum)
}

pub fn build_f(spec: FpjSpec) -> Result<GroupHandle> {
    let b = build_b_matrix(spec);
    let top = (spec.p as u64).pow(spec.j);
    Ok(GroupHandle::new(SemidirectGroup::new(b, top)?.with_family(spec)))
}

/// Key of `a_1^{n_1} ... a_{p^j}^{n_{p^j}} b^t` in `F(p,j)`.
pub fn fpj_element(spec: FpjSpec, n: &[i64], t: i64) -> Result<ElementKey> {
    if n.len() != spec.rank() {
        return Err(FszError::Dimension(format!(
            "{} exponents for {} generators",
            n.len(),
            spec.rank()
        )));
    }
    let moduli = spec.base_moduli();
    let mut key = ElementKey::new(
        n.iter()
            .zip(&moduli)
            .map(|(&c, &m)| c.rem_euclid(m as i64) as u32),
    );
    key.push(t.rem_euclid((spec.p as i64).pow(spec.j)) as u32);
    Ok(key)
}

/// The central element `a_1^{p^j} a_{p^j}` whose quotient gives `S(p,j)`.
pub fn s_kernel_generator(spec: FpjSpec) -> ElementKey {
    let mut n = vec![0i64; spec.rank()];
    n[0] = (spec.p as i64).pow(spec.j);
    *n.last_mut().unwrap() += 1;
    fpj_element(spec, &n, 0).expect("exponent count matches")
}

/// `F(p,j) / <a_1^{p^j} a_{p^j}>`, defined for odd `p` only.
pub fn build_s(spec: FpjSpec) -> Result<GroupHandle> {
    if spec.p == 2 {
        return Err(FszError::domain("S(p,j) is only defined for odd primes p"));
    }
    let f = build_f(spec)?;
    build_quotient_by_central(&f, &s_kernel_generator(spec))
}

/// Closed form of `a^{p^j}` in `F(p,j)`: `a_1^{n_1 p^j}` when `p | t`, and
/// `a_1^{n_1 p^j} a_{p^j}^{-n_1}` otherwise.
pub fn fast_power_f(spec: FpjSpec, a: &ElementKey) -> Result<ElementKey> {
    let n = spec.rank();
    if a.len() != n + 1 {
        return Err(FszError::structural(format!(
            "key {a} does not belong to F({},{})",
            spec.p, spec.j
        )));
    }
    let n1 = a.coords()[0] as i64;
    let t = a.coords()[n] as i64;
    let pj = (spec.p as i64).pow(spec.j);
    let mut exps = vec![0i64; n];
    exps[0] = n1 * pj;
    if t % spec.p as i64 != 0 {
        exps[n - 1] -= n1;
    }
    fpj_element(spec, &exps, 0)
}

pub fn build_wreath(base: &GroupHandle, p: u64) -> Result<GroupHandle> {
    Ok(GroupHandle::new(WreathGroup::new(base.clone(), p)?))
}

/// `base * <x>` with `x^m = z`.
pub fn build_central_product_cyclic(
    base: &GroupHandle,
    m: u64,
    z: &ElementKey,
) -> Result<GroupHandle> {
    Ok(GroupHandle::new(CentralProduct::new(base.clone(), m, z.clone())?))
}

pub fn build_quotient_by_central(g: &GroupHandle, z: &ElementKey) -> Result<GroupHandle> {
    Ok(GroupHandle::new(CentralQuotient::new(g.clone(), z.clone())?))
}

pub fn build_direct_product(left: &GroupHandle, right: &GroupHandle) -> Result<GroupHandle> {
    Ok(GroupHandle::new(DirectProduct::new(left.clone(), right.clone())?))
}

pub fn import_permutation_group(text: &str) -> Result<GroupHandle> {
    Ok(GroupHandle::new(PermutationGroup::from_text(text)?))
}

/// The iterated wreath product `Z_p wr Z_p wr ... wr Z_p` with `levels` factors.
pub fn build_sylow_tower(p: u64, levels: u32) -> Result<GroupHandle> {
    if levels == 0 {
        return Err(FszError::domain("a tower needs at least one level"));
    }
    let mut t = build_cyclic(p)?;
    for _ in 1..levels {
        t = build_wreath(&t, p)?;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::MixedModulusVector;

    fn spec(p: u64, j: u64) -> FpjSpec {
        FpjSpec::new(p, j).unwrap()
    }

    #[test]
    fn b_matrix_shape() {
        let b = build_b_matrix(spec(5, 1));
        assert_eq!(b.row(0), &[1, 0, 0, 0, 0]);
        assert_eq!(b.row(1), &[4, 1, 0, 0, 0]);
        assert_eq!(b.row_moduli(), &[25, 5, 5, 5, 5]);
        assert_eq!(build_b_matrix(spec(3, 1)).rows(), 3);
        let e2 = MixedModulusVector::unit(&spec(5, 1).base_moduli(), 1);
        let image = b.apply(&e2).unwrap();
        assert_eq!(image.entries(), &[0, 1, 1, 0, 0]);
    }

    #[test]
    fn b_matrix_orders() {
        for (p, j) in [(3, 1), (5, 1), (3, 2), (7, 1)] {
            let s = spec(p, j);
            assert_eq!(
                build_b_matrix(s).multiplicative_order().unwrap(),
                p.pow(j as u32)
            );
        }
    }

    #[test]
    fn x_matrix_identities() {
        for (p, j) in [(3, 1), (5, 1), (3, 2), (7, 1)] {
            let s = spec(p, j);
            assert!(build_x_matrix(s, j as u32).unwrap().is_identity());
            let x1 = build_x_matrix(s, 0).unwrap();
            let n = s.rank();
            let pj = (p as i64).pow(j as u32);
            for row in 0..n {
                for col in 0..n {
                    let expected = match (row, col) {
                        (0, 0) => pj,
                        (r, 0) if r == n - 1 => -1,
                        _ => 0,
                    };
                    let m = s.base_moduli()[row] as i64;
                    assert_eq!(x1.get(row, col) as i64, expected.rem_euclid(m), "({row},{col})");
                }
            }
        }
        assert!(build_x_matrix(spec(3, 1), 2).is_err());
    }

    #[test]
    fn f51_order_exponent_and_center() {
        let f = build_f(spec(5, 1)).unwrap();
        assert_eq!(f.order(), 78125);
        assert_eq!(f.exponent().unwrap(), 25);
        assert_eq!(f.center().unwrap().len(), 25);
    }

    #[test]
    fn conjugation_by_b_realizes_the_action() {
        let s = spec(5, 1);
        let f = build_f(s).unwrap();
        let a1 = f.element_by_name("a1").unwrap();
        let b = f.element_by_name("b").unwrap();
        let expected = fpj_element(s, &[1, -1, 0, 0, 0], 0).unwrap();
        assert_eq!(f.conjugate(&a1, &b).unwrap(), expected);
    }

    #[test]
    fn power_examples() {
        let s = spec(5, 1);
        let f = build_f(s).unwrap();
        let a = fpj_element(s, &[1, 0, 0, 0, 0], 1).unwrap();
        assert_eq!(f.power(&a, 5).unwrap(), fpj_element(s, &[5, 0, 0, 0, -1], 0).unwrap());
        let a = fpj_element(s, &[2, 0, 0, 0, 0], 1).unwrap();
        assert_eq!(f.power(&a, 5).unwrap(), fpj_element(s, &[10, 0, 0, 0, -2], 0).unwrap());
        let a = fpj_element(s, &[0, 1, 1, 0, 0], 0).unwrap();
        assert!(f.is_identity(&f.power(&a, 5).unwrap()));
        let a1 = f.element_by_name("a1").unwrap();
        assert_eq!(f.element_order(&a1).unwrap(), 25);
        assert_eq!(f.element_order(&f.element_by_name("b").unwrap()).unwrap(), 5);
    }

    #[test]
    fn s_requires_odd_prime() {
        assert!(matches!(build_s(spec(2, 1)), Err(FszError::Domain(_))));
        let s = build_s(spec(5, 1)).unwrap();
        assert_eq!(s.order(), 15625);
    }

    #[test]
    fn central_product_generator_order() {
        let f = build_f(spec(3, 1)).unwrap();
        let z = fpj_element(spec(3, 1), &[3, 0, 1], 0).unwrap();
        let k = build_central_product_cyclic(&f, 3, &z).unwrap();
        assert_eq!(k.order(), 3 * 243);
        let x = k.element_by_name("x").unwrap();
        assert_eq!(k.element_order(&x).unwrap(), 3 * f.element_order(&z).unwrap());
        let a2 = f.element_by_name("a2").unwrap();
        assert!(matches!(
            build_central_product_cyclic(&f, 3, &a2),
            Err(FszError::Domain(_))
        ));
    }
}
