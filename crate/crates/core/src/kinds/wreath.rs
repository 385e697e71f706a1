use std::any::Any;

use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{check_budget, is_prime, prime_of_power, GroupHandle, GroupImpl, GroupKind};
use crate::kinds::subgroup::TableSubgroup;

/// Regular wreath product `D^p x| Z_p`.
///
/// Keys are the `p` component keys followed by the shift `i`; the law is
/// `(x, i)(y, j) = (x_l y_{l+i}, i + j)` with indices mod `p`.
pub struct WreathGroup {
    base: GroupHandle,
    p: u32,
    blen: usize,
    order: u128,
}

impl WreathGroup {
    pub fn new(base: GroupHandle, p: u64) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(FszError::domain(format!("wreath degree {p} is not a prime")));
        }
        let blen = base.key_len();
        let order = base
            .order()
            .checked_pow(p as u32)
            .and_then(|o| o.checked_mul(p as u128))
            .ok_or_else(|| {
                FszError::domain(format!(
                    "the order of wr({},{p}) does not fit in 128 bits",
                    base.descriptor()
                ))
            })?;
        Ok(WreathGroup {
            base,
            p: p as u32,
            blen,
            order,
        })
    }

    pub fn base(&self) -> &GroupHandle {
        &self.base
    }

    pub fn degree(&self) -> u32 {
        self.p
    }

    /// Component `l` of a key.
    pub fn component(&self, a: &ElementKey, l: usize) -> ElementKey {
        ElementKey::from_slice(&a.coords()[l * self.blen..(l + 1) * self.blen])
    }

    pub fn shift(&self, a: &ElementKey) -> u32 {
        a.coords()[self.p as usize * self.blen]
    }

    pub fn assemble(&self, components: &[ElementKey], shift: u64) -> ElementKey {
        let mut k = ElementKey::new([]);
        for c in components {
            k.extend_from_slice(c.coords());
        }
        k.push((shift % self.p as u64) as u32);
        k
    }

    /// `(d, ..., d, shift)`.
    pub fn diagonal(&self, d: &ElementKey, shift: u64) -> ElementKey {
        self.assemble(&vec![d.clone(); self.p as usize], shift)
    }

    fn base_is_p_group(&self) -> bool {
        self.base.order() == 1 || prime_of_power(self.base.order()) == Some(self.p as u64)
    }
}

impl GroupImpl for WreathGroup {
    fn kind(&self) -> GroupKind {
        GroupKind::Wreath
    }

    fn descriptor(&self) -> String {
        format!("wr({},{})", self.base.descriptor(), self.p)
    }

    fn key_len(&self) -> usize {
        self.blen * self.p as usize + 1
    }

    fn identity(&self) -> ElementKey {
        self.diagonal(&self.base.identity(), 0)
    }

    fn generators(&self) -> Vec<ElementKey> {
        let id = self.base.identity();
        let mut gens: Vec<ElementKey> = self
            .base
            .generators()
            .into_iter()
            .map(|g| {
                let mut comps = vec![id.clone(); self.p as usize];
                comps[0] = g;
                self.assemble(&comps, 0)
            })
            .collect();
        gens.push(self.diagonal(&id, 1));
        gens
    }

    fn generator_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .base
            .generator_names()
            .into_iter()
            .map(|n| format!("@0({n})"))
            .collect();
        names.push("s".into());
        names
    }

    fn element_by_name(&self, name: &str) -> Option<ElementKey> {
        (name == "s").then(|| self.diagonal(&self.base.identity(), 1))
    }

    fn validate(&self, a: &[u32]) -> Result<()> {
        for l in 0..self.p as usize {
            self.base
                .imp()
                .validate(&a[l * self.blen..(l + 1) * self.blen])?;
        }
        let i = a[self.p as usize * self.blen];
        if i >= self.p {
            return Err(FszError::structural(format!("shift {i} is not below {}", self.p)));
        }
        Ok(())
    }

    fn multiply_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        let p = self.p as usize;
        let w = self.blen;
        let i = a[p * w] as usize;
        let base = self.base.imp();
        for l in 0..p {
            let m = (l + i) % p;
            base.multiply_into(
                &a[l * w..(l + 1) * w],
                &b[m * w..(m + 1) * w],
                &mut out[l * w..(l + 1) * w],
            );
        }
        out[p * w] = ((i + b[p * w] as usize) % p) as u32;
    }

    fn inverse_into(&self, a: &[u32], out: &mut [u32]) {
        // y_k = x_{k-i}^-1
        let p = self.p as usize;
        let w = self.blen;
        let i = a[p * w] as usize;
        let base = self.base.imp();
        for k in 0..p {
            let src = (k + p - i) % p;
            base.inverse_into(&a[src * w..(src + 1) * w], &mut out[k * w..(k + 1) * w]);
        }
        out[p * w] = ((p - i) % p) as u32;
    }

    fn order(&self) -> u128 {
        self.order
    }

    fn exponent_hint(&self) -> Option<u64> {
        if self.base_is_p_group() {
            self.base.exponent().ok().map(|e| e * self.p as u64)
        } else {
            None
        }
    }

    fn radix(&self) -> Option<Vec<u32>> {
        let br = self.base.imp().radix()?;
        let mut r = Vec::with_capacity(self.key_len());
        for _ in 0..self.p {
            r.extend_from_slice(&br);
        }
        r.push(self.p);
        Some(r)
    }

    fn enumerate_sorted(&self) -> Option<Result<Vec<ElementKey>>> {
        Some((|| {
            check_budget(&self.descriptor(), self.order())?;
            let base = self.base.enumerate()?;
            let mut acc = vec![ElementKey::new([])];
            for _ in 0..self.p {
                acc = super::cartesian_keys(&acc, &base);
            }
            let shifts: Vec<ElementKey> = (0..self.p).map(|i| ElementKey::new([i])).collect();
            Ok(super::cartesian_keys(&acc, &shifts))
        })())
    }

    fn center_hint(&self) -> Option<Result<Vec<ElementKey>>> {
        if self.base.order() == 1 {
            return None;
        }
        Some(
            self.base
                .center()
                .map(|c| c.iter().map(|z| self.diagonal(z, 0)).collect()),
        )
    }

    fn centralizer_hint(&self, this: &GroupHandle, g: &ElementKey) -> Option<Result<GroupHandle>> {
        Some(wreath_centralizer(self, this, g))
    }

    fn components(&self) -> Vec<GroupHandle> {
        vec![self.base.clone(); self.p as usize]
    }

    fn embed(&self, component: usize, element: &ElementKey) -> Option<ElementKey> {
        if component >= self.p as usize || !self.base.contains(element) {
            return None;
        }
        let mut comps = vec![self.base.identity(); self.p as usize];
        comps[component] = element.clone();
        Some(self.assemble(&comps, 0))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Which description of the centralizer applies to an element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WreathClassShape {
    /// Nonzero shift: conjugate to `(x, 1, ..., 1, i)`.
    Shifted { x: ElementKey, conjugator: ElementKey },
    /// Zero shift, all components conjugate in `D`: conjugate to `(d, ..., d, 0)`.
    Diagonal { d: ElementKey, conjugator: ElementKey },
    /// Zero shift, some components not conjugate.
    Mixed,
}

/// Finds `c` with `c^-1 a c = b` in `group`, by a scan.
fn find_conjugator(group: &GroupHandle, a: &ElementKey, b: &ElementKey) -> Result<Option<ElementKey>> {
    if a == b {
        return Ok(Some(group.identity()));
    }
    let ix = group.index()?;
    let (ai, bi) = (ix.index_of_key(a)?, ix.index_of_key(b)?);
    Ok((0..ix.len() as u32)
        .find(|&c| ix.conj(ai, c) == bi)
        .map(|c| ix.key(c)))
}

/// Classifies `g` and returns `h` with `h^-1 g h` in the normal form of its case.
pub fn classify(w: &WreathGroup, this: &GroupHandle, g: &ElementKey) -> Result<WreathClassShape> {
    let p = w.p as usize;
    let i = w.shift(g) as usize;
    let d: Vec<ElementKey> = (0..p).map(|l| w.component(g, l)).collect();
    let base = &w.base;
    if i != 0 {
        // h_0 = 1, h_{l+i} = d_l^-1 h_l e_l with e_0 = x, so x = d_0 d_i d_2i ...
        let mut x = base.identity();
        for k in 0..p {
            x = base.multiply(&x, &d[(k * i) % p])?;
        }
        let mut h = vec![base.identity(); p];
        for k in 0..p - 1 {
            let l = (k * i) % p;
            let mut next = base.multiply(&base.inverse(&d[l])?, &h[l])?;
            if k == 0 {
                next = base.multiply(&next, &x)?;
            }
            h[(l + i) % p] = next;
        }
        let conjugator = w.assemble(&h, 0);
        debug_assert_eq!(this.conjugate(g, &conjugator)?, {
            let mut e = vec![base.identity(); p];
            e[0] = x.clone();
            w.assemble(&e, i as u64)
        });
        return Ok(WreathClassShape::Shifted { x, conjugator });
    }
    let mut conj = Vec::with_capacity(p);
    for dl in &d {
        match find_conjugator(base, dl, &d[0])? {
            Some(c) => conj.push(c),
            None => return Ok(WreathClassShape::Mixed),
        }
    }
    Ok(WreathClassShape::Diagonal {
        d: d[0].clone(),
        conjugator: w.assemble(&conj, 0),
    })
}

fn wreath_centralizer(w: &WreathGroup, this: &GroupHandle, g: &ElementKey) -> Result<GroupHandle> {
    let p = w.p as usize;
    let base = &w.base;
    let label = format!("C({g}) in {}", w.descriptor());
    let conjugate_back = |h: &ElementKey, y: &ElementKey| -> Result<ElementKey> {
        // h y h^-1
        let hi = this.inverse(h)?;
        this.conjugate(y, &hi)
    };
    let (mut members, gens) = match classify(w, this, g)? {
        WreathClassShape::Shifted { x, conjugator } => {
            let cx = base.centralizer(&x)?;
            let mut e = vec![base.identity(); p];
            e[0] = x.clone();
            let g0 = w.assemble(&e, w.shift(g) as u64);
            let mut members = Vec::new();
            for c in cx.enumerate()? {
                let mut y = w.diagonal(&c, 0);
                for _ in 0..p {
                    members.push(conjugate_back(&conjugator, &y)?);
                    y = this.multiply(&y, &g0)?;
                }
            }
            let mut gens: Vec<ElementKey> = cx
                .generators()
                .iter()
                .map(|c| conjugate_back(&conjugator, &w.diagonal(c, 0)))
                .collect::<Result<_>>()?;
            gens.push(g.clone());
            (members, gens)
        }
        WreathClassShape::Diagonal { d, conjugator } => {
            let cd = base.centralizer(&d)?;
            check_budget(&label, cd.order().pow(w.p) * w.p as u128)?;
            let elems = cd.enumerate()?;
            let mut tuples = vec![ElementKey::new([])];
            for _ in 0..p {
                tuples = super::cartesian_keys(&tuples, &elems);
            }
            let mut members = Vec::with_capacity(tuples.len() * p);
            for t in &tuples {
                for s in 0..p as u32 {
                    let mut y = t.clone();
                    y.push(s);
                    members.push(conjugate_back(&conjugator, &y)?);
                }
            }
            let mut gens = Vec::new();
            for c in cd.generators() {
                for l in 0..p {
                    let y = w.embed(l, &c).expect("component in range");
                    gens.push(conjugate_back(&conjugator, &y)?);
                }
            }
            gens.push(conjugate_back(&conjugator, &w.diagonal(&base.identity(), 1))?);
            (members, gens)
        }
        WreathClassShape::Mixed => {
            let factors: Vec<GroupHandle> = (0..p)
                .map(|l| base.centralizer(&w.component(g, l)))
                .collect::<Result<_>>()?;
            let size: u128 = factors.iter().map(|f| f.order()).product();
            check_budget(&label, size)?;
            let mut tuples = vec![ElementKey::new([])];
            for f in &factors {
                tuples = super::cartesian_keys(&tuples, &f.enumerate()?);
            }
            let members = tuples
                .into_iter()
                .map(|mut t| {
                    t.push(0);
                    t
                })
                .collect();
            let mut gens = Vec::new();
            for (l, f) in factors.iter().enumerate() {
                for c in f.generators() {
                    gens.push(w.embed(l, &c).expect("component in range"));
                }
            }
            (members, gens)
        }
    };
    members.sort();
    members.dedup();
    TableSubgroup::from_sorted_members(this.clone(), members, Some(gens), label)
}
