use std::any::Any;

use rustc_hash::FxHashSet;

use crate::constructions::FpjSpec;
use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{GroupHandle, GroupImpl, GroupKind};
use crate::kinds::subgroup::TableSubgroup;
use crate::modular::ActionMatrix;

/// `A x| <b>` for an abelian `A = Z_{m_1} x ... x Z_{m_k}` and an automorphism
/// `B` of `A` of order dividing `top`.
///
/// The key `(v, s)` stands for `v b^s`, multiplied as
/// `(v, s)(w, t) = (v + B^{-s} w, s + t)`, so that `b^-1 v b = B v`.
#[derive(Debug, Clone)]
pub struct SemidirectGroup {
    base_moduli: Vec<u32>,
    matrix: ActionMatrix,
    top: u32,
    /// `actions[s] = B^{-s}`.
    actions: Vec<ActionMatrix>,
    family: Option<FpjSpec>,
}

impl SemidirectGroup {
    pub fn new(matrix: ActionMatrix, top: u64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(FszError::Dimension("action matrix must be square".into()));
        }
        if top == 0 || top > u32::MAX as u64 {
            return Err(FszError::domain(format!("top cyclic order {top} is out of range")));
        }
        let moduli = matrix.row_moduli().to_vec();
        if moduli.iter().any(|&m| m > u32::MAX as u64) {
            return Err(FszError::domain("base modulus too large"));
        }
        if !matrix.is_well_defined_on(&moduli) {
            return Err(FszError::domain("matrix is not an endomorphism of the base"));
        }
        if !matrix.pow(top)?.is_identity() {
            return Err(FszError::domain(format!(
                "matrix does not have order dividing {top}"
            )));
        }
        let inverse = matrix.pow(top - 1)?;
        let mut actions = Vec::with_capacity(top as usize);
        let mut acc = ActionMatrix::identity(&moduli);
        for _ in 0..top {
            actions.push(acc.clone());
            acc = acc.compose(&inverse)?;
        }
        Ok(SemidirectGroup {
            base_moduli: moduli.iter().map(|&m| m as u32).collect(),
            matrix,
            top: top as u32,
            actions,
            family: None,
        })
    }

    pub(crate) fn with_family(mut self, spec: FpjSpec) -> Self {
        self.family = Some(spec);
        self
    }

    pub fn family(&self) -> Option<FpjSpec> {
        self.family
    }

    pub fn matrix(&self) -> &ActionMatrix {
        &self.matrix
    }

    pub fn base_moduli(&self) -> &[u32] {
        &self.base_moduli
    }

    pub fn top(&self) -> u32 {
        self.top
    }

    /// Key of `v b^s` for (possibly negative) base coordinates `v`.
    pub fn element(&self, v: &[i64], s: i64) -> Result<ElementKey> {
        if v.len() != self.base_moduli.len() {
            return Err(FszError::Dimension(format!(
                "{} base coordinates, expected {}",
                v.len(),
                self.base_moduli.len()
            )));
        }
        let mut key = ElementKey::new(
            v.iter()
                .zip(&self.base_moduli)
                .map(|(&c, &m)| c.rem_euclid(m as i64) as u32),
        );
        key.push(s.rem_euclid(self.top as i64) as u32);
        Ok(key)
    }

    fn base_len(&self) -> usize {
        self.base_moduli.len()
    }

    fn fpj_center(&self, spec: FpjSpec) -> Vec<ElementKey> {
        let k = self.base_len();
        let first = self.base_moduli[0];
        let mut out = Vec::new();
        for i in (0..first).step_by(spec.p as usize) {
            for last in 0..spec.p {
                let mut c = vec![0u32; k + 1];
                c[0] = i;
                c[k - 1] = last;
                out.push(ElementKey::from_slice(&c));
            }
        }
        out.sort();
        out
    }
}

impl GroupImpl for SemidirectGroup {
    fn kind(&self) -> GroupKind {
        GroupKind::SemidirectByMatrix
    }

    fn descriptor(&self) -> String {
        match self.family {
            Some(spec) => format!("F({},{})", spec.p, spec.j),
            None => {
                let parts: Vec<String> = self.base_moduli.iter().map(|m| m.to_string()).collect();
                format!("Ab({}) x| Z({})", parts.join(","), self.top)
            }
        }
    }

    fn key_len(&self) -> usize {
        self.base_len() + 1
    }

    fn generators(&self) -> Vec<ElementKey> {
        let k = self.base_len();
        let mut gens: Vec<ElementKey> = (0..k)
            .map(|i| {
                let mut c = vec![0u32; k + 1];
                c[i] = 1 % self.base_moduli[i];
                ElementKey::from_slice(&c)
            })
            .collect();
        let mut b = vec![0u32; k + 1];
        b[k] = 1 % self.top;
        gens.push(ElementKey::from_slice(&b));
        gens
    }

    fn generator_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.base_len()).map(|i| format!("a{i}")).collect();
        names.push("b".into());
        names
    }

    fn validate(&self, a: &[u32]) -> Result<()> {
        let k = self.base_len();
        for (i, (&c, &m)) in a[..k].iter().zip(&self.base_moduli).enumerate() {
            if c >= m {
                return Err(FszError::structural(format!(
                    "coordinate {i} is {c}, modulus is {m}"
                )));
            }
        }
        if a[k] >= self.top {
            return Err(FszError::structural(format!(
                "top exponent {} is not below {}",
                a[k], self.top
            )));
        }
        Ok(())
    }

    fn multiply_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        let k = self.base_len();
        let s = a[k];
        self.actions[s as usize].apply_raw(&b[..k], &mut out[..k]);
        for i in 0..k {
            let m = self.base_moduli[i];
            let x = out[i] + a[i];
            out[i] = if x >= m { x - m } else { x };
        }
        let t = s + b[k];
        out[k] = if t >= self.top { t - self.top } else { t };
    }

    fn inverse_into(&self, a: &[u32], out: &mut [u32]) {
        // (v, s)^-1 = (-B^s v, -s)
        let k = self.base_len();
        let s = a[k];
        let back = ((self.top - s) % self.top) as usize;
        self.actions[back].apply_raw(&a[..k], &mut out[..k]);
        for i in 0..k {
            out[i] = if out[i] == 0 { 0 } else { self.base_moduli[i] - out[i] };
        }
        out[k] = (self.top - s) % self.top;
    }

    fn order(&self) -> u128 {
        self.base_moduli.iter().map(|&m| m as u128).product::<u128>() * self.top as u128
    }

    fn exponent_hint(&self) -> Option<u64> {
        self.family.map(|spec| (spec.p as u64).pow(spec.j + 1))
    }

    fn radix(&self) -> Option<Vec<u32>> {
        let mut r = self.base_moduli.clone();
        r.push(self.top);
        Some(r)
    }

    fn center_hint(&self) -> Option<Result<Vec<ElementKey>>> {
        self.family.map(|spec| Ok(self.fpj_center(spec)))
    }

    fn centralizer_hint(&self, this: &GroupHandle, g: &ElementKey) -> Option<Result<GroupHandle>> {
        let spec = self.family?;
        if spec.j != 1 || spec.p == 2 {
            return None;
        }
        Some(fp1_centralizer(self, spec, this, g))
    }

    fn extrapolated(&self) -> bool {
        self.family.is_some_and(|s| s.p == 2)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Centralizers in `F(p,1)`: the whole group for central `g`, the base for
/// non-central base elements, and `<g, Z>` otherwise.
fn fp1_centralizer(
    group: &SemidirectGroup,
    spec: FpjSpec,
    this: &GroupHandle,
    g: &ElementKey,
) -> Result<GroupHandle> {
    let center = group.fpj_center(spec);
    if center.binary_search(g).is_ok() {
        return Ok(this.clone());
    }
    let k = group.base_len();
    let label = format!("C({g}) in {}", group.descriptor());
    if g.coords()[k] == 0 {
        let base = crate::kinds::AbelianGroup::new(
            &group.base_moduli.iter().map(|&m| m as u64).collect::<Vec<_>>(),
        )?;
        let ix_keys: Vec<ElementKey> = {
            let h = GroupHandle::new(base);
            h.enumerate()?
                .into_iter()
                .map(|mut v| {
                    v.push(0);
                    v
                })
                .collect()
        };
        let gens = this.generators()[..k].to_vec();
        return TableSubgroup::from_sorted_members(this.clone(), ix_keys, Some(gens), label);
    }
    let mut gens = vec![g.clone()];
    let mut a1p = vec![0u32; k + 1];
    a1p[0] = spec.p;
    gens.push(ElementKey::from_slice(&a1p));
    let mut ap = vec![0u32; k + 1];
    ap[k - 1] = 1;
    gens.push(ElementKey::from_slice(&ap));
    let members = key_closure(this, &gens);
    TableSubgroup::from_sorted_members(this.clone(), members, Some(gens), label)
}

/// Sorted elements of the subgroup generated by `gens`, by breadth-first products.
pub(crate) fn key_closure(group: &GroupHandle, gens: &[ElementKey]) -> Vec<ElementKey> {
    let mut seen: FxHashSet<ElementKey> = FxHashSet::default();
    let id = group.identity();
    seen.insert(id.clone());
    let mut queue = vec![id];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head].clone();
        head += 1;
        for s in gens {
            let y = group.mul_raw(x.coords(), s.coords());
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    queue.sort();
    queue
}
