use std::any::Any;

use smallvec::SmallVec;

use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{Buf, GroupHandle, GroupImpl, GroupKind};

/// `G / <z>` for a central `z`; each coset is keyed by its least member.
pub struct CentralQuotient {
    parent: GroupHandle,
    z: ElementKey,
    /// `z^1, ..., z^{o(z)-1}`.
    z_powers: Vec<ElementKey>,
}

impl CentralQuotient {
    pub fn new(parent: GroupHandle, z: ElementKey) -> Result<Self> {
        parent.validate(&z)?;
        if parent.is_identity(&z) {
            return Err(FszError::domain("quotient by the trivial subgroup is not supported"));
        }
        if !parent.is_central(&z)? {
            return Err(FszError::domain(format!(
                "{z} is not central in {}",
                parent.descriptor()
            )));
        }
        let mut z_powers = Vec::new();
        let mut y = z.clone();
        while !parent.is_identity(&y) {
            z_powers.push(y.clone());
            y = parent.multiply(&y, &z)?;
        }
        Ok(CentralQuotient {
            parent,
            z,
            z_powers,
        })
    }

    pub fn parent(&self) -> &GroupHandle {
        &self.parent
    }

    pub fn z(&self) -> &ElementKey {
        &self.z
    }

    /// Order of the identified subgroup `<z>`.
    pub fn kernel_order(&self) -> u64 {
        self.z_powers.len() as u64 + 1
    }

    /// The projection `a -> a<z>`.
    pub fn project(&self, a: &ElementKey) -> Result<ElementKey> {
        self.parent.validate(a)?;
        let mut out = a.clone();
        self.canonicalize(out.coords_mut());
        Ok(out)
    }

    /// All members of the coset keyed by `a`.
    pub fn coset(&self, a: &ElementKey) -> Vec<ElementKey> {
        let mut out = vec![a.clone()];
        out.extend(self.z_powers.iter().map(|y| self.parent.mul_raw(a.coords(), y.coords())));
        out.sort();
        out
    }

    fn canonicalize(&self, a: &mut [u32]) {
        let mut best: Buf = SmallVec::from_slice(a);
        let mut tmp: Buf = SmallVec::from_elem(0, a.len());
        let imp = self.parent.imp();
        for y in &self.z_powers {
            imp.multiply_into(a, y.coords(), &mut tmp);
            if tmp < best {
                best.copy_from_slice(&tmp);
            }
        }
        a.copy_from_slice(&best);
    }
}

impl GroupImpl for CentralQuotient {
    fn kind(&self) -> GroupKind {
        GroupKind::CentralQuotient
    }

    fn descriptor(&self) -> String {
        format!("quot({},z={})", self.parent.descriptor(), self.z)
    }

    fn key_len(&self) -> usize {
        self.parent.key_len()
    }

    fn identity(&self) -> ElementKey {
        self.parent.identity()
    }

    fn generators(&self) -> Vec<ElementKey> {
        let mut gens: Vec<ElementKey> = self
            .parent
            .generators()
            .into_iter()
            .map(|mut g| {
                self.canonicalize(g.coords_mut());
                g
            })
            .collect();
        gens.dedup();
        gens
    }

    fn generator_names(&self) -> Vec<String> {
        self.parent.generator_names()
    }

    fn element_by_name(&self, name: &str) -> Option<ElementKey> {
        let mut g = self.parent.element_by_name(name)?;
        self.canonicalize(g.coords_mut());
        Some(g)
    }

    fn validate(&self, a: &[u32]) -> Result<()> {
        self.parent.imp().validate(a)?;
        let mut c: Buf = SmallVec::from_slice(a);
        self.canonicalize(&mut c);
        if c.as_slice() != a {
            return Err(FszError::structural(format!(
                "{} is not the least member of its coset",
                ElementKey::from_slice(a)
            )));
        }
        Ok(())
    }

    fn multiply_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        self.parent.imp().multiply_into(a, b, out);
        self.canonicalize(out);
    }

    fn inverse_into(&self, a: &[u32], out: &mut [u32]) {
        self.parent.imp().inverse_into(a, out);
        self.canonicalize(out);
    }

    fn order(&self) -> u128 {
        self.parent.order() / self.kernel_order() as u128
    }

    fn enumerate_sorted(&self) -> Option<Result<Vec<ElementKey>>> {
        Some((|| {
            let ix = self.parent.index()?;
            let mut c: Buf = SmallVec::new();
            Ok((0..ix.len() as u32)
                .filter(|&i| {
                    c.clear();
                    c.extend_from_slice(ix.element(i));
                    self.canonicalize(&mut c);
                    c.as_slice() == ix.element(i)
                })
                .map(|i| ix.key(i))
                .collect())
        })())
    }

    fn components(&self) -> Vec<GroupHandle> {
        self.parent.components()
    }

    fn embed(&self, component: usize, element: &ElementKey) -> Option<ElementKey> {
        let mut e = self.parent.embed(component, element)?;
        self.canonicalize(e.coords_mut());
        Some(e)
    }

    fn extrapolated(&self) -> bool {
        self.parent.extrapolated()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
