use std::any::Any;

use smallvec::SmallVec;

use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{check_budget, Buf, GroupHandle, GroupImpl, GroupKind};
use crate::kinds::subgroup::TableSubgroup;

/// Central product `G * <x>` with the relation `x^m = z` for central `z`.
///
/// Keys are `(g, k)` with `0 <= k < m`, multiplied as
/// `(g,k)(h,l) = (g h z^{floor((k+l)/m)}, (k+l) mod m)`.
pub struct CentralProduct {
    base: GroupHandle,
    m: u32,
    z: ElementKey,
    z_inv: ElementKey,
    blen: usize,
}

impl CentralProduct {
    pub fn new(base: GroupHandle, m: u64, z: ElementKey) -> Result<Self> {
        if m == 0 || m > u32::MAX as u64 {
            return Err(FszError::domain(format!("central product exponent {m} is out of range")));
        }
        if base.order().checked_mul(m as u128).is_none() {
            return Err(FszError::domain("central product order does not fit in 128 bits"));
        }
        if !base.is_central(&z)? {
            return Err(FszError::domain(format!(
                "{z} is not central in {}",
                base.descriptor()
            )));
        }
        let z_inv = base.inverse(&z)?;
        let blen = base.key_len();
        Ok(CentralProduct {
            base,
            m: m as u32,
            z,
            z_inv,
            blen,
        })
    }

    pub fn base(&self) -> &GroupHandle {
        &self.base
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn z(&self) -> &ElementKey {
        &self.z
    }

    /// Key of `g x^k` with `k` reduced via `x^m = z`.
    pub fn element(&self, g: &ElementKey, k: i64) -> Result<ElementKey> {
        self.base.validate(g)?;
        let m = self.m as i64;
        let q = k.div_euclid(m);
        let r = k.rem_euclid(m);
        let zq = self.base.power(&self.z, q)?;
        let mut key = self.base.multiply(g, &zq)?;
        key.push(r as u32);
        Ok(key)
    }

    /// The cyclic generator `x = (1, 1)`.
    pub fn x(&self) -> ElementKey {
        self.element(&self.base.identity(), 1).expect("identity is valid")
    }

    pub fn split(&self, a: &ElementKey) -> (ElementKey, u32) {
        (
            ElementKey::from_slice(&a.coords()[..self.blen]),
            a.coords()[self.blen],
        )
    }
}

impl GroupImpl for CentralProduct {
    fn kind(&self) -> GroupKind {
        GroupKind::CentralProduct
    }

    fn descriptor(&self) -> String {
        format!("cp({},{},z={})", self.base.descriptor(), self.m, self.z)
    }

    fn key_len(&self) -> usize {
        self.blen + 1
    }

    fn identity(&self) -> ElementKey {
        let mut k = self.base.identity();
        k.push(0);
        k
    }

    fn generators(&self) -> Vec<ElementKey> {
        let mut gens: Vec<ElementKey> = self
            .base
            .generators()
            .into_iter()
            .map(|mut g| {
                g.push(0);
                g
            })
            .collect();
        gens.push(self.x());
        gens
    }

    fn generator_names(&self) -> Vec<String> {
        let mut names = self.base.generator_names();
        names.push("x".into());
        names
    }

    fn element_by_name(&self, name: &str) -> Option<ElementKey> {
        if name == "x" {
            return Some(self.x());
        }
        let mut g = self.base.element_by_name(name)?;
        g.push(0);
        Some(g)
    }

    fn validate(&self, a: &[u32]) -> Result<()> {
        self.base.imp().validate(&a[..self.blen])?;
        if a[self.blen] >= self.m {
            return Err(FszError::structural(format!(
                "cyclic residue {} is not below {}",
                a[self.blen], self.m
            )));
        }
        Ok(())
    }

    fn multiply_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        let w = self.blen;
        let s = a[w] + b[w];
        let base = self.base.imp();
        if s >= self.m {
            let mut tmp: Buf = SmallVec::from_elem(0, w);
            base.multiply_into(&a[..w], &b[..w], &mut tmp);
            base.multiply_into(&tmp, self.z.coords(), &mut out[..w]);
            out[w] = s - self.m;
        } else {
            base.multiply_into(&a[..w], &b[..w], &mut out[..w]);
            out[w] = s;
        }
    }

    fn inverse_into(&self, a: &[u32], out: &mut [u32]) {
        // (g,0)^-1 = (g^-1, 0); otherwise (g^-1 z^-1, m - k).
        let w = self.blen;
        let base = self.base.imp();
        if a[w] == 0 {
            base.inverse_into(&a[..w], &mut out[..w]);
            out[w] = 0;
        } else {
            let mut tmp: Buf = SmallVec::from_elem(0, w);
            base.inverse_into(&a[..w], &mut tmp);
            base.multiply_into(&tmp, self.z_inv.coords(), &mut out[..w]);
            out[w] = self.m - a[w];
        }
    }

    fn order(&self) -> u128 {
        self.base.order() * self.m as u128
    }

    fn radix(&self) -> Option<Vec<u32>> {
        let mut r = self.base.imp().radix()?;
        r.push(self.m);
        Some(r)
    }

    fn enumerate_sorted(&self) -> Option<Result<Vec<ElementKey>>> {
        Some((|| {
            check_budget(&self.descriptor(), self.order())?;
            let residues: Vec<ElementKey> = (0..self.m).map(|k| ElementKey::new([k])).collect();
            Ok(super::cartesian_keys(&self.base.enumerate()?, &residues))
        })())
    }

    fn center_hint(&self) -> Option<Result<Vec<ElementKey>>> {
        Some(self.base.center().map(|c| {
            let residues: Vec<ElementKey> = (0..self.m).map(|k| ElementKey::new([k])).collect();
            super::cartesian_keys(&c, &residues)
        }))
    }

    fn centralizer_hint(&self, this: &GroupHandle, g: &ElementKey) -> Option<Result<GroupHandle>> {
        Some((|| {
            // x is central, so C((h,k)) = C_base(h) * <x>.
            let (h, _) = self.split(g);
            let ch = self.base.centralizer(&h)?;
            check_budget("centralizer", ch.order() * self.m as u128)?;
            let residues: Vec<ElementKey> = (0..self.m).map(|k| ElementKey::new([k])).collect();
            let members = super::cartesian_keys(&ch.enumerate()?, &residues);
            let mut gens: Vec<ElementKey> = ch
                .generators()
                .into_iter()
                .map(|mut c| {
                    c.push(0);
                    c
                })
                .collect();
            gens.push(self.x());
            TableSubgroup::from_sorted_members(
                this.clone(),
                members,
                Some(gens),
                format!("C({g}) in {}", self.descriptor()),
            )
        })())
    }

    fn components(&self) -> Vec<GroupHandle> {
        vec![self.base.clone()]
    }

    fn embed(&self, component: usize, element: &ElementKey) -> Option<ElementKey> {
        if component != 0 || !self.base.contains(element) {
            return None;
        }
        let mut k = element.clone();
        k.push(0);
        Some(k)
    }

    fn extrapolated(&self) -> bool {
        self.base.extrapolated()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
