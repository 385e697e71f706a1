//! Indicator sets `G_m(u,g)`, triple sets `G_m(u,g,z)` and the FSZ tests.

mod context;
mod strategy;
mod verdict;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{gcd, GroupHandle};

pub use context::{admissible_exponent, Fibers, MContext, Target};
pub use strategy::{
    Auto, Convolution, CountingStrategy, FiberScan, Naive, RepFailure, RepOutcome, RepTask,
    StrategyRegistry, DEFAULT_STRATEGY,
};
pub use verdict::{
    fsz_m_test, fsz_plus_test, fsz_test, CentralizerVerdict, FszOptions, FszPlusReport,
    FszReport, MPolicy, MVerdict, Witness,
};

/// Members of `{a : a^m = g, z (au)^m = g}`; `z` is the identity for plain
/// indicator sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndicatorSet {
    pub m: u64,
    pub u: ElementKey,
    pub g: ElementKey,
    pub z: ElementKey,
    pub members: Vec<ElementKey>,
}

impl IndicatorSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn check_m(m: u64) -> Result<()> {
    if m == 0 {
        return Err(FszError::domain("m must be positive"));
    }
    Ok(())
}

fn check_central(group: &GroupHandle, z: &ElementKey) -> Result<()> {
    if !group.is_central(z)? {
        return Err(FszError::domain(format!(
            "{z} is not central in {}",
            group.descriptor()
        )));
    }
    Ok(())
}

/// `G_m(u, g)` by a scan of `C_G(g)`.
pub fn indicator_set(
    group: &GroupHandle,
    m: u64,
    u: &ElementKey,
    g: &ElementKey,
) -> Result<IndicatorSet> {
    indicator_set_triple(group, m, u, g, &group.identity())
}

/// `G_m(u, g, z)` for central `z`, by a scan of `C_G(g)`.
pub fn indicator_set_triple(
    group: &GroupHandle,
    m: u64,
    u: &ElementKey,
    g: &ElementKey,
    z: &ElementKey,
) -> Result<IndicatorSet> {
    check_m(m)?;
    group.validate(u)?;
    group.validate(g)?;
    check_central(group, z)?;
    let mut set = IndicatorSet {
        m,
        u: u.clone(),
        g: g.clone(),
        z: z.clone(),
        members: Vec::new(),
    };
    if !group.commute(u, g)? {
        return Ok(set);
    }
    for a in group.centralizer(g)?.enumerate()? {
        if group.power_unchecked(&a, m) != *g {
            continue;
        }
        let au = group.mul_raw(a.coords(), u.coords());
        let rhs = group.power_unchecked(&au, m);
        if group.mul_raw(z.coords(), rhs.coords()) == *g {
            set.members.push(a);
        }
    }
    Ok(set)
}

/// The set `X_m(u, g, n)`: the union over `1 <= i, j <= o(z)` of
/// `G_m(u, z^{ni} g^n, z^j)`.
#[derive(Debug, Clone, Serialize)]
pub struct XSet {
    pub set: IndicatorSet,
    pub n: u64,
    pub z_order: u64,
    /// Every member lies in exactly one `(i, j)` term.
    pub disjoint: bool,
    /// `X <z> = X`.
    pub closed_under_z: bool,
}

fn cyclic_powers(group: &GroupHandle, z: &ElementKey) -> Vec<ElementKey> {
    let mut out = vec![group.identity()];
    let mut y = z.clone();
    while !group.is_identity(&y) {
        out.push(y.clone());
        y = group.mul_raw(y.coords(), z.coords());
    }
    out
}

pub fn x_set(
    group: &GroupHandle,
    z: &ElementKey,
    m: u64,
    u: &ElementKey,
    g: &ElementKey,
    n: u64,
) -> Result<XSet> {
    check_m(m)?;
    group.validate(u)?;
    group.validate(g)?;
    check_central(group, z)?;
    if group.is_identity(z) {
        return Err(FszError::domain("z must not be the identity"));
    }
    let order = group.order();
    if n == 0 || gcd(n, (order % n as u128) as u64) != 1 {
        return Err(FszError::domain(format!("n = {n} is not coprime to |G| = {order}")));
    }
    // z^k for k = 0..o(z); index k corresponds to i or j = k (mod o(z)).
    let zp = cyclic_powers(group, z);
    let zo = zp.len() as u64;
    let gn = group.power_unchecked(g, n);
    let lhs: Vec<ElementKey> = (0..zo)
        .map(|i| {
            let zni = &zp[((n % zo) * i % zo) as usize];
            group.mul_raw(zni.coords(), gn.coords())
        })
        .collect();
    let mut members = Vec::new();
    let mut disjoint = true;
    for a in group.centralizer(g)?.enumerate()? {
        let am = group.power_unchecked(&a, m);
        let i_hits = lhs.iter().filter(|&x| *x == am).count();
        if i_hits == 0 {
            continue;
        }
        let au = group.mul_raw(a.coords(), u.coords());
        let aum = group.power_unchecked(&au, m);
        let j_hits = zp
            .iter()
            .filter(|zj| group.mul_raw(zj.coords(), aum.coords()) == am)
            .count();
        if j_hits == 0 {
            continue;
        }
        disjoint &= i_hits == 1 && j_hits == 1;
        members.push(a);
    }
    let lookup: FxHashSet<&ElementKey> = members.iter().collect();
    let closed_under_z = members
        .iter()
        .all(|a| lookup.contains(&group.mul_raw(a.coords(), z.coords())));
    Ok(XSet {
        set: IndicatorSet {
            m,
            u: u.clone(),
            g: g.clone(),
            z: z.clone(),
            members,
        },
        n,
        z_order: zo,
        disjoint,
        closed_under_z,
    })
}

/// For every `u` at once: `count(u) = #{(a, b) in F_g x F_target : a^-1 b = u}`
/// with `F_x = {a : a^m = x}`.
#[derive(Debug, Clone, Serialize)]
pub struct CountsByShift {
    pub m: u64,
    pub g: ElementKey,
    pub target: ElementKey,
    pub fiber_g: u64,
    pub fiber_target: u64,
    /// Non-zero counts, ascending in `u`.
    pub counts: Vec<(ElementKey, u64)>,
}

impl CountsByShift {
    pub fn count(&self, u: &ElementKey) -> u64 {
        self.counts
            .binary_search_by(|(k, _)| k.cmp(u))
            .map_or(0, |i| self.counts[i].1)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|c| c.1).sum()
    }
}

pub fn fiber_convolution_counts(
    group: &GroupHandle,
    m: u64,
    g: &ElementKey,
    target: &ElementKey,
) -> Result<CountsByShift> {
    check_m(m)?;
    let ix = group.index()?;
    let (gi, ti) = (ix.index_of_key(g)?, ix.index_of_key(target)?);
    let power = ix.power_map(m);
    let fibers = Fibers::build(&power);
    let counts = strategy::shift_counts(&ix, &fibers, gi, ti);
    Ok(CountsByShift {
        m,
        g: g.clone(),
        target: target.clone(),
        fiber_g: fibers.size(gi) as u64,
        fiber_target: fibers.size(ti) as u64,
        counts: counts.into_iter().map(|(u, c)| (ix.key(u), c)).collect(),
    })
}

/// `sum_{i<m} |G_m(u, z^{ni} g^n, z^j)|`, which equals `|K_m(u x^j, g^n)|`
/// in `K = G * <x>` with `x^m = z`.
#[derive(Debug, Clone, Serialize)]
pub struct CentralProductCount {
    pub total: u64,
    /// The `i`-th summand.
    pub terms: Vec<u64>,
}

#[allow(clippy::too_many_arguments)]
pub fn central_product_counts_via_base(
    group: &GroupHandle,
    z: &ElementKey,
    m: u64,
    u: &ElementKey,
    j: u64,
    g: &ElementKey,
    n: u64,
) -> Result<CentralProductCount> {
    check_m(m)?;
    group.validate(u)?;
    group.validate(g)?;
    check_central(group, z)?;
    if group.is_identity(z) {
        return Err(FszError::domain("z must not be the identity"));
    }
    if j >= m {
        return Err(FszError::domain(format!("j = {j} is not below m = {m}")));
    }
    let modulus = group.order() * m as u128;
    if n == 0 || gcd(n, (modulus % n as u128) as u64) != 1 {
        return Err(FszError::domain(format!("n = {n} is not coprime to m |G| = {modulus}")));
    }
    let zp = cyclic_powers(group, z);
    let zo = zp.len() as u64;
    let zj = &zp[(j % zo) as usize];
    let gn = group.power_unchecked(g, n);
    // Target of term i, with the list of i sharing it.
    let mut by_target: FxHashMap<ElementKey, Vec<usize>> = FxHashMap::default();
    for i in 0..m {
        let zni = &zp[((n % zo) * (i % zo) % zo) as usize];
        by_target
            .entry(group.mul_raw(zni.coords(), gn.coords()))
            .or_default()
            .push(i as usize);
    }
    let mut terms = vec![0u64; m as usize];
    // Every term is contained in C(g^n) = C(g).
    for a in group.centralizer(g)?.enumerate()? {
        let am = group.power_unchecked(&a, m);
        let Some(is) = by_target.get(&am) else {
            continue;
        };
        let au = group.mul_raw(a.coords(), u.coords());
        let aum = group.power_unchecked(&au, m);
        if group.mul_raw(zj.coords(), aum.coords()) == am {
            for &i in is {
                terms[i] += 1;
            }
        }
    }
    Ok(CentralProductCount {
        total: terms.iter().sum(),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_cyclic, build_f, fpj_element, FpjSpec};

    #[test]
    fn first_power_set_is_the_element() {
        let g = build_f(FpjSpec::new(3, 1).unwrap()).unwrap();
        for x in g.enumerate().unwrap().iter().step_by(17) {
            let s = indicator_set(&g, 1, &g.identity(), x).unwrap();
            assert_eq!(s.members, vec![x.clone()]);
        }
    }

    #[test]
    fn noncommuting_pair_gives_empty_set() {
        let s = FpjSpec::new(3, 1).unwrap();
        let g = build_f(s).unwrap();
        let a1 = g.element_by_name("a1").unwrap();
        let b = g.element_by_name("b").unwrap();
        assert!(indicator_set(&g, 3, &a1, &b).unwrap().is_empty());
        let z = fpj_element(s, &[3, 0, 0], 0).unwrap();
        assert!(indicator_set_triple(&g, 3, &a1, &b, &z).unwrap().is_empty());
    }

    #[test]
    fn triple_set_rejects_noncentral_z() {
        let g = build_f(FpjSpec::new(3, 1).unwrap()).unwrap();
        let b = g.element_by_name("b").unwrap();
        let id = g.identity();
        assert!(matches!(
            indicator_set_triple(&g, 3, &id, &id, &b),
            Err(FszError::Domain(_))
        ));
    }

    #[test]
    fn x_set_preconditions() {
        let g = build_cyclic(9).unwrap();
        let z = g.power(&g.element_by_name("a1").unwrap(), 3).unwrap();
        let id = g.identity();
        assert!(matches!(x_set(&g, &id, 3, &id, &id, 1), Err(FszError::Domain(_))));
        assert!(matches!(x_set(&g, &z, 3, &id, &id, 3), Err(FszError::Domain(_))));
        let x = x_set(&g, &z, 3, &id, &id, 2).unwrap();
        assert!(x.disjoint && x.closed_under_z);
        assert_eq!(x.z_order, 3);
    }

    #[test]
    fn convolution_identity_count_is_fiber_size() {
        let g = build_f(FpjSpec::new(3, 1).unwrap()).unwrap();
        for x in g.center().unwrap() {
            let c = fiber_convolution_counts(&g, 3, &x, &x).unwrap();
            assert_eq!(c.count(&g.identity()), c.fiber_g);
            assert_eq!(c.total(), c.fiber_g * c.fiber_target);
        }
    }
}
