use std::any::Any;

use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{check_budget, lcm, GroupHandle, GroupImpl, GroupKind};
use crate::kinds::subgroup::TableSubgroup;

/// `H x K` with keys `(h, k)` concatenated.
pub struct DirectProduct {
    left: GroupHandle,
    right: GroupHandle,
    llen: usize,
}

impl DirectProduct {
    pub fn new(left: GroupHandle, right: GroupHandle) -> Result<Self> {
        if left.order().checked_mul(right.order()).is_none() {
            return Err(FszError::domain(format!(
                "the order of x({},{}) does not fit in 128 bits",
                left.descriptor(),
                right.descriptor()
            )));
        }
        let llen = left.key_len();
        Ok(DirectProduct { left, right, llen })
    }

    pub fn left(&self) -> &GroupHandle {
        &self.left
    }

    pub fn right(&self) -> &GroupHandle {
        &self.right
    }

    pub fn pair(&self, h: &ElementKey, k: &ElementKey) -> ElementKey {
        let mut out = h.clone();
        out.extend_from_slice(k.coords());
        out
    }

    pub fn split(&self, a: &ElementKey) -> (ElementKey, ElementKey) {
        (
            ElementKey::from_slice(&a.coords()[..self.llen]),
            ElementKey::from_slice(&a.coords()[self.llen..]),
        )
    }
}

impl GroupImpl for DirectProduct {
    fn kind(&self) -> GroupKind {
        GroupKind::DirectProduct
    }

    fn descriptor(&self) -> String {
        format!("x({},{})", self.left.descriptor(), self.right.descriptor())
    }

    fn key_len(&self) -> usize {
        self.llen + self.right.key_len()
    }

    fn identity(&self) -> ElementKey {
        self.pair(&self.left.identity(), &self.right.identity())
    }

    fn generators(&self) -> Vec<ElementKey> {
        let (lid, rid) = (self.left.identity(), self.right.identity());
        let mut gens: Vec<ElementKey> = self
            .left
            .generators()
            .iter()
            .map(|g| self.pair(g, &rid))
            .collect();
        gens.extend(self.right.generators().iter().map(|g| self.pair(&lid, g)));
        gens
    }

    fn generator_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .left
            .generator_names()
            .into_iter()
            .map(|n| format!("@0({n})"))
            .collect();
        names.extend(
            self.right
                .generator_names()
                .into_iter()
                .map(|n| format!("@1({n})")),
        );
        names
    }

    fn element_by_name(&self, _name: &str) -> Option<ElementKey> {
        None
    }

    fn validate(&self, a: &[u32]) -> Result<()> {
        self.left.imp().validate(&a[..self.llen])?;
        self.right.imp().validate(&a[self.llen..])
    }

    fn multiply_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        let w = self.llen;
        let (ol, or) = out.split_at_mut(w);
        self.left.imp().multiply_into(&a[..w], &b[..w], ol);
        self.right.imp().multiply_into(&a[w..], &b[w..], or);
    }

    fn inverse_into(&self, a: &[u32], out: &mut [u32]) {
        let w = self.llen;
        let (ol, or) = out.split_at_mut(w);
        self.left.imp().inverse_into(&a[..w], ol);
        self.right.imp().inverse_into(&a[w..], or);
    }

    fn order(&self) -> u128 {
        self.left.order() * self.right.order()
    }

    fn exponent_hint(&self) -> Option<u64> {
        Some(lcm(self.left.exponent().ok()?, self.right.exponent().ok()?))
    }

    fn radix(&self) -> Option<Vec<u32>> {
        let mut r = self.left.imp().radix()?;
        r.extend(self.right.imp().radix()?);
        Some(r)
    }

    fn enumerate_sorted(&self) -> Option<Result<Vec<ElementKey>>> {
        Some((|| {
            check_budget(&self.descriptor(), self.order())?;
            Ok(super::cartesian_keys(
                &self.left.enumerate()?,
                &self.right.enumerate()?,
            ))
        })())
    }

    fn center_hint(&self) -> Option<Result<Vec<ElementKey>>> {
        Some((|| Ok(super::cartesian_keys(&self.left.center()?, &self.right.center()?)))())
    }

    fn centralizer_hint(&self, this: &GroupHandle, g: &ElementKey) -> Option<Result<GroupHandle>> {
        Some((|| {
            let (h, k) = self.split(g);
            let (ch, ck) = (self.left.centralizer(&h)?, self.right.centralizer(&k)?);
            check_budget("centralizer", ch.order() * ck.order())?;
            let members = super::cartesian_keys(&ch.enumerate()?, &ck.enumerate()?);
            let (lid, rid) = (self.left.identity(), self.right.identity());
            let mut gens: Vec<ElementKey> =
                ch.generators().iter().map(|c| self.pair(c, &rid)).collect();
            gens.extend(ck.generators().iter().map(|c| self.pair(&lid, c)));
            TableSubgroup::from_sorted_members(
                this.clone(),
                members,
                Some(gens),
                format!("C({g}) in {}", self.descriptor()),
            )
        })())
    }

    fn components(&self) -> Vec<GroupHandle> {
        vec![self.left.clone(), self.right.clone()]
    }

    fn embed(&self, component: usize, element: &ElementKey) -> Option<ElementKey> {
        match component {
            0 if self.left.contains(element) => Some(self.pair(element, &self.right.identity())),
            1 if self.right.contains(element) => Some(self.pair(&self.left.identity(), element)),
            _ => None,
        }
    }

    fn extrapolated(&self) -> bool {
        self.left.extrapolated() || self.right.extrapolated()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
