//! The uniform finite-group interface.
//!
//! Every construction implements [`GroupImpl`] on raw coordinate slices; a
//! [`GroupHandle`] wraps one implementation together with write-once caches
//! (dense element index, conjugacy classes, exponent, center).

mod classes;
mod index;

use std::any::Any;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::kinds::subgroup::TableSubgroup;

pub use classes::ConjugacyData;
pub use index::IndexedGroup;

pub const DEFAULT_BUDGET: u64 = 1 << 24;

fn budget_cell() -> &'static AtomicU64 {
    static CELL: OnceLock<AtomicU64> = OnceLock::new();
    CELL.get_or_init(|| {
        let from_env = std::env::var("FSZLAB_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok());
        AtomicU64::new(from_env.unwrap_or(DEFAULT_BUDGET))
    })
}

/// Largest number of elements any operation is allowed to enumerate.
pub fn enumeration_budget() -> u64 {
    budget_cell().load(Ordering::Relaxed)
}

pub fn set_enumeration_budget(budget: u64) {
    budget_cell().store(budget, Ordering::Relaxed);
}

pub(crate) fn check_budget(what: &str, size: u128) -> Result<()> {
    let budget = enumeration_budget();
    if size > budget as u128 {
        return Err(FszError::capacity(what, size, budget));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    Abelian,
    SemidirectByMatrix,
    Wreath,
    CentralProduct,
    CentralQuotient,
    DirectProduct,
    Permutation,
    Table,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupKind::Abelian => "abelian",
            GroupKind::SemidirectByMatrix => "semidirect-by-matrix",
            GroupKind::Wreath => "wreath",
            GroupKind::CentralProduct => "central-product",
            GroupKind::CentralQuotient => "central-quotient",
            GroupKind::DirectProduct => "direct-product",
            GroupKind::Permutation => "permutation",
            GroupKind::Table => "table",
        };
        f.write_str(s)
    }
}

/// Arithmetic of one concrete group kind on raw coordinate slices.
///
/// Slices handed to `multiply_into` and `inverse_into` are assumed valid;
/// [`GroupHandle`] validates user-supplied keys before calling them.
pub trait GroupImpl: Send + Sync + 'static {
    fn kind(&self) -> GroupKind;

    fn descriptor(&self) -> String;

    fn key_len(&self) -> usize;

    fn identity(&self) -> ElementKey {
        ElementKey::from_slice(&vec![0; self.key_len()])
    }

    fn generators(&self) -> Vec<ElementKey>;

    fn generator_names(&self) -> Vec<String>;

    fn element_by_name(&self, name: &str) -> Option<ElementKey> {
        let idx = self.generator_names().iter().position(|n| n == name)?;
        self.generators().into_iter().nth(idx)
    }

    fn validate(&self, a: &[u32]) -> Result<()>;

    fn multiply_into(&self, a: &[u32], b: &[u32], out: &mut [u32]);

    fn inverse_into(&self, a: &[u32], out: &mut [u32]);

    fn order(&self) -> u128;

    fn exponent_hint(&self) -> Option<u64> {
        None
    }

    /// Per-coordinate radices when the valid keys are exactly all tuples
    /// below them; the lexicographic rank then doubles as the dense index.
    fn radix(&self) -> Option<Vec<u32>> {
        None
    }

    /// All elements in ascending key order, for kinds without a radix layout.
    fn enumerate_sorted(&self) -> Option<Result<Vec<ElementKey>>> {
        None
    }

    fn is_abelian_hint(&self) -> Option<bool> {
        None
    }

    fn center_hint(&self) -> Option<Result<Vec<ElementKey>>> {
        None
    }

    /// Structured centralizer; `this` is the handle wrapping `self`.
    fn centralizer_hint(&self, _this: &GroupHandle, _g: &ElementKey) -> Option<Result<GroupHandle>> {
        None
    }

    /// Groups addressable as `@k(...)` in element words.
    fn components(&self) -> Vec<GroupHandle> {
        Vec::new()
    }

    fn embed(&self, _component: usize, _element: &ElementKey) -> Option<ElementKey> {
        None
    }

    /// Results on this group lie outside the parameter range the theory covers.
    fn extrapolated(&self) -> bool {
        false
    }

    fn as_any(&self) -> &dyn Any;
}

struct HandleInner {
    imp: Arc<dyn GroupImpl>,
    index: OnceLock<Arc<IndexedGroup>>,
    classes: OnceLock<Arc<ConjugacyData>>,
    exponent: OnceLock<u64>,
    center: OnceLock<Arc<Vec<ElementKey>>>,
}

/// Shared, immutable handle to a finite group.
#[derive(Clone)]
pub struct GroupHandle {
    inner: Arc<HandleInner>,
}

impl fmt::Debug for GroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHandle({})", self.descriptor())
    }
}

pub(crate) type Buf = SmallVec<[u32; 32]>;

impl GroupHandle {
    pub fn new(imp: impl GroupImpl) -> Self {
        Self::from_arc(Arc::new(imp))
    }

    pub fn from_arc(imp: Arc<dyn GroupImpl>) -> Self {
        GroupHandle {
            inner: Arc::new(HandleInner {
                imp,
                index: OnceLock::new(),
                classes: OnceLock::new(),
                exponent: OnceLock::new(),
                center: OnceLock::new(),
            }),
        }
    }

    pub fn imp(&self) -> &dyn GroupImpl {
        self.inner.imp.as_ref()
    }

    pub fn downcast<T: 'static>(&self) -> Option<&T> {
        self.imp().as_any().downcast_ref::<T>()
    }

    pub fn same_group(&self, other: &GroupHandle) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn kind(&self) -> GroupKind {
        self.imp().kind()
    }

    pub fn descriptor(&self) -> String {
        self.imp().descriptor()
    }

    pub fn key_len(&self) -> usize {
        self.imp().key_len()
    }

    pub fn order(&self) -> u128 {
        self.imp().order()
    }

    pub fn extrapolated(&self) -> bool {
        self.imp().extrapolated()
    }

    pub fn identity(&self) -> ElementKey {
        self.imp().identity()
    }

    pub fn generators(&self) -> Vec<ElementKey> {
        self.imp().generators()
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.imp().generator_names()
    }

    pub fn element_by_name(&self, name: &str) -> Option<ElementKey> {
        self.imp().element_by_name(name)
    }

    pub fn components(&self) -> Vec<GroupHandle> {
        self.imp().components()
    }

    pub fn embed(&self, component: usize, element: &ElementKey) -> Option<ElementKey> {
        self.imp().embed(component, element)
    }

    pub fn validate(&self, a: &ElementKey) -> Result<()> {
        if a.len() != self.key_len() {
            return Err(FszError::structural(format!(
                "key {a} has {} coordinates, {} expects {}",
                a.len(),
                self.descriptor(),
                self.key_len()
            )));
        }
        self.imp().validate(a.coords())
    }

    pub fn contains(&self, a: &ElementKey) -> bool {
        self.validate(a).is_ok()
    }

    pub(crate) fn mul_raw(&self, a: &[u32], b: &[u32]) -> ElementKey {
        let mut out: Buf = SmallVec::from_elem(0, self.key_len());
        self.imp().multiply_into(a, b, &mut out);
        ElementKey::from_slice(&out)
    }

    pub(crate) fn inv_raw(&self, a: &[u32]) -> ElementKey {
        let mut out: Buf = SmallVec::from_elem(0, self.key_len());
        self.imp().inverse_into(a, &mut out);
        ElementKey::from_slice(&out)
    }

    pub fn multiply(&self, a: &ElementKey, b: &ElementKey) -> Result<ElementKey> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.mul_raw(a.coords(), b.coords()))
    }

    pub fn inverse(&self, a: &ElementKey) -> Result<ElementKey> {
        self.validate(a)?;
        Ok(self.inv_raw(a.coords()))
    }

    /// Product of a sequence of elements, left to right.
    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a ElementKey>) -> Result<ElementKey> {
        let mut acc = self.identity();
        for x in items {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    /// `a^k` by square-and-multiply; negative `k` goes through the inverse.
    pub fn power(&self, a: &ElementKey, k: i64) -> Result<ElementKey> {
        self.validate(a)?;
        let base = if k < 0 { self.inv_raw(a.coords()) } else { a.clone() };
        Ok(self.power_unchecked(&base, k.unsigned_abs()))
    }

    pub(crate) fn power_unchecked(&self, a: &ElementKey, mut k: u64) -> ElementKey {
        let mut result = self.identity();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul_raw(result.coords(), base.coords());
            }
            k >>= 1;
            if k > 0 {
                base = self.mul_raw(base.coords(), base.coords());
            }
        }
        result
    }

    /// `c^-1 a c`.
    pub fn conjugate(&self, a: &ElementKey, c: &ElementKey) -> Result<ElementKey> {
        let ci = self.inverse(c)?;
        let left = self.multiply(&ci, a)?;
        self.multiply(&left, c)
    }

    pub fn commute(&self, a: &ElementKey, b: &ElementKey) -> Result<bool> {
        Ok(self.multiply(a, b)? == self.multiply(b, a)?)
    }

    pub fn is_identity(&self, a: &ElementKey) -> bool {
        *a == self.identity()
    }

    pub fn element_order(&self, a: &ElementKey) -> Result<u64> {
        self.validate(a)?;
        let id = self.identity();
        let bound = self.order();
        let mut x = a.clone();
        let mut k: u64 = 1;
        while x != id {
            x = self.mul_raw(x.coords(), a.coords());
            k += 1;
            if k as u128 > bound {
                return Err(FszError::structural(format!(
                    "element {a} has no finite order within |G| = {bound}"
                )));
            }
        }
        Ok(k)
    }

    /// Dense index over all elements; built once, then shared.
    pub fn index(&self) -> Result<Arc<IndexedGroup>> {
        if let Some(ix) = self.inner.index.get() {
            return Ok(ix.clone());
        }
        let built = Arc::new(IndexedGroup::build(self.inner.imp.clone())?);
        Ok(self.inner.index.get_or_init(|| built).clone())
    }

    pub fn enumerate(&self) -> Result<Vec<ElementKey>> {
        let ix = self.index()?;
        Ok((0..ix.len() as u32).map(|i| ix.key(i)).collect())
    }

    pub fn exponent(&self) -> Result<u64> {
        if let Some(&e) = self.inner.exponent.get() {
            return Ok(e);
        }
        let e = match self.imp().exponent_hint() {
            Some(e) => e,
            None => self.exponent_brute()?,
        };
        Ok(*self.inner.exponent.get_or_init(|| e))
    }

    /// lcm of all element orders over a full enumeration.
    pub fn exponent_brute(&self) -> Result<u64> {
        let ix = self.index()?;
        Ok(ix
            .element_orders()
            .iter()
            .fold(1u64, |acc, &o| lcm(acc, o as u64)))
    }

    pub fn is_abelian(&self) -> Result<bool> {
        if let Some(a) = self.imp().is_abelian_hint() {
            return Ok(a);
        }
        let gens = self.generators();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                if !self.commute(a, b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn center(&self) -> Result<Vec<ElementKey>> {
        if let Some(c) = self.inner.center.get() {
            return Ok(c.as_ref().clone());
        }
        let c = match self.imp().center_hint() {
            Some(c) => c?,
            None => self.center_brute()?,
        };
        Ok(self.inner.center.get_or_init(|| Arc::new(c)).as_ref().clone())
    }

    pub fn center_brute(&self) -> Result<Vec<ElementKey>> {
        let ix = self.index()?;
        let gens: Vec<u32> = self
            .generators()
            .iter()
            .map(|g| ix.index_of_key(g))
            .collect::<Result<_>>()?;
        Ok((0..ix.len() as u32)
            .filter(|&x| gens.iter().all(|&g| ix.mul(x, g) == ix.mul(g, x)))
            .map(|x| ix.key(x))
            .collect())
    }

    pub fn is_central(&self, z: &ElementKey) -> Result<bool> {
        self.validate(z)?;
        for g in self.generators() {
            if !self.commute(z, &g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn centralizer(&self, g: &ElementKey) -> Result<GroupHandle> {
        self.validate(g)?;
        if self.is_identity(g) {
            return Ok(self.clone());
        }
        match self.imp().centralizer_hint(self, g) {
            Some(c) => c,
            None => self.centralizer_brute(g),
        }
    }

    /// `{a : ag = ga}` by a scan over the dense index.
    pub fn centralizer_brute(&self, g: &ElementKey) -> Result<GroupHandle> {
        self.validate(g)?;
        let ix = self.index()?;
        let gi = ix.index_of_key(g)?;
        let members: Vec<u32> = (0..ix.len() as u32)
            .filter(|&a| ix.mul(a, gi) == ix.mul(gi, a))
            .collect();
        let keys = members.iter().map(|&a| ix.key(a)).collect();
        TableSubgroup::from_sorted_members(
            self.clone(),
            keys,
            None,
            format!("C({g}) in {}", self.descriptor()),
        )
    }

    pub fn conjugacy_data(&self) -> Result<Arc<ConjugacyData>> {
        if let Some(c) = self.inner.classes.get() {
            return Ok(c.clone());
        }
        let ix = self.index()?;
        let gens: Vec<u32> = self
            .generators()
            .iter()
            .map(|g| ix.index_of_key(g))
            .collect::<Result<_>>()?;
        let data = Arc::new(ConjugacyData::build(&ix, &gens));
        Ok(self.inner.classes.get_or_init(|| data).clone())
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Distinct prime divisors in ascending order.
pub fn prime_divisors(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p: u128 = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p as u64);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_divisors(n as u128) == [n]
}

/// `Some(p)` when `n = p^k` with `k >= 1`.
pub fn prime_of_power(n: u128) -> Option<u64> {
    match prime_divisors(n).as_slice() {
        [p] => Some(*p),
        _ => None,
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
