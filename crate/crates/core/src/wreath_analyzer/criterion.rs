use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::fsz::{fsz_m_test, FszOptions, Fibers};
use crate::group::{check_budget, gcd, is_prime, GroupHandle, IndexedGroup};

/// One instance of the tuple equation
/// `x_l^{p^t} = (u0 x_1 ... x_{p-1} x_0)^{p^{t-1}} = d^n` for all `l`.
#[derive(Clone)]
pub struct WreathConditionInstance {
    pub base: GroupHandle,
    pub p: u64,
    pub t: u32,
    pub d: ElementKey,
    pub u0: ElementKey,
    pub n: u64,
}

impl WreathConditionInstance {
    pub fn new(
        base: &GroupHandle,
        p: u64,
        t: u32,
        d: &ElementKey,
        u0: &ElementKey,
        n: u64,
    ) -> Result<Self> {
        check_degree(p, t)?;
        base.validate(d)?;
        base.validate(u0)?;
        if n == 0 || n % p == 0 {
            return Err(FszError::domain(format!("n = {n} must be positive and prime to {p}")));
        }
        Ok(WreathConditionInstance {
            base: base.clone(),
            p,
            t,
            d: d.clone(),
            u0: u0.clone(),
            n,
        })
    }
}

fn check_degree(p: u64, t: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(FszError::domain(format!("{p} is not a prime")));
    }
    if t == 0 {
        return Err(FszError::domain("t must be positive"));
    }
    Ok(())
}

/// Power maps and fibers for one `(D, p, t)`, shared by every instance.
pub(crate) struct CriterionContext {
    pub ix: Arc<IndexedGroup>,
    p: u64,
    /// `p^{t-1}`-th powers.
    inner: Arc<Vec<u32>>,
    /// Fibers of the `p^t`-th power map.
    fibers: Fibers,
}

/// Per-target tables: `dist[w]` counts `(x_1, ..., x_{p-1})` in `F^{p-1}`
/// with product `w`, and `closing[w]` counts `x_0` in `F` with
/// `(w x_0)^{p^{t-1}}` equal to the target.
pub(crate) struct TargetTables {
    dist: Vec<u128>,
    closing: Vec<u64>,
}

impl CriterionContext {
    pub fn new(base: &GroupHandle, p: u64, t: u32) -> Result<Self> {
        check_degree(p, t)?;
        let ix = base.index()?;
        let outer_exp = p
            .checked_pow(t)
            .ok_or_else(|| FszError::domain(format!("{p}^{t} overflows")))?;
        let outer = ix.power_map(outer_exp);
        let inner = ix.power_map(outer_exp / p);
        Ok(CriterionContext {
            fibers: Fibers::build(&outer),
            ix,
            p,
            inner,
        })
    }

    pub fn fiber_size(&self, target: u32) -> usize {
        self.fibers.size(target)
    }

    pub fn tables(&self, target: u32) -> Result<TargetTables> {
        let ix = &self.ix;
        let n = ix.len();
        let fiber = self.fibers.of(target);
        check_budget(
            &format!(
                "tuple scan with fiber size {} and p = {} over {n} elements",
                fiber.len(),
                self.p
            ),
            fiber.len() as u128,
        )?;
        let mut dist = vec![0u128; n];
        dist[ix.identity() as usize] = 1;
        for _ in 1..self.p {
            let mut next = vec![0u128; n];
            for (w, &c) in dist.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &x in fiber {
                    next[ix.mul(w as u32, x) as usize] += c;
                }
            }
            dist = next;
        }
        let inner = &self.inner;
        let closing = (0..n as u32)
            .into_par_iter()
            .map(|w| {
                fiber
                    .iter()
                    .filter(|&&x| inner[ix.mul(w, x) as usize] == target)
                    .count() as u64
            })
            .collect();
        Ok(TargetTables { dist, closing })
    }

    /// Number of solutions for `u0`, given the tables of the target.
    pub fn count(&self, tables: &TargetTables, u0: u32) -> u128 {
        tables
            .dist
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(w, &c)| c * tables.closing[self.ix.mul(u0, w as u32) as usize] as u128)
            .sum()
    }
}

/// Exact number of tuples `(x_0, ..., x_{p-1})` in `D^p` solving the instance.
///
/// `(u0 x_1 ... x_{p-1} x_0)` depends on `x_1, ..., x_{p-1}` only through
/// their product, so the count is a sum over the product distribution.
pub fn wreath_condition_count(inst: &WreathConditionInstance) -> Result<u128> {
    let ctx = CriterionContext::new(&inst.base, inst.p, inst.t)?;
    let target = ctx.ix.index_of_key(&inst.base.power(&inst.d, inst.n as i64)?)?;
    let u0 = ctx.ix.index_of_key(&inst.u0)?;
    if ctx.fiber_size(target) == 0 {
        return Ok(0);
    }
    let tables = ctx.tables(target)?;
    Ok(ctx.count(&tables, u0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionOutcome {
    /// The counts never depend on `n`: `D wr Z_p` is `FSZ_{p^t}`.
    Holds,
    /// The criterion is only sufficient; nothing is concluded about the wreath product.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreconditionCheck {
    pub m: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionFailure {
    pub d: ElementKey,
    pub u0: ElementKey,
    pub n: u64,
    pub count_at_d: u128,
    pub count_at_dn: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathCriterionReport {
    pub base: String,
    pub p: u64,
    pub t: u32,
    pub m: u64,
    pub method: String,
    pub preconditions: Vec<PreconditionCheck>,
    pub d_classes: u64,
    pub instances: u64,
    pub outcome: CriterionOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<CriterionFailure>,
}

impl WreathCriterionReport {
    pub fn certifies_wreath_fsz(&self) -> bool {
        self.outcome == CriterionOutcome::Holds
    }
}

/// Orbit minima of the conjugation action generated by `gens`.
fn orbit_minima(ix: &IndexedGroup, gens: &[u32]) -> Vec<u32> {
    let n = ix.len();
    let mut seen = vec![false; n];
    let mut reps = Vec::new();
    let mut stack = Vec::new();
    for x in 0..n as u32 {
        if seen[x as usize] {
            continue;
        }
        seen[x as usize] = true;
        reps.push(x);
        stack.push(x);
        while let Some(y) = stack.pop() {
            for &c in gens {
                let z = ix.conj(y, c) as usize;
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z as u32);
                }
            }
        }
    }
    reps
}

/// Checks the sufficient condition for `D wr Z_p` to be `FSZ_{p^t}`.
///
/// `d` runs over class representatives of `D` and `u0` over representatives
/// of `D` under conjugation by `C_D(d)`; simultaneous conjugation preserves
/// every count. Exponents `n` prime to `p` are taken up to the value of `d^n`.
pub fn wreath_condition_test(
    base: &GroupHandle,
    p: u64,
    t: u32,
    options: &FszOptions,
) -> Result<WreathCriterionReport> {
    check_degree(p, t)?;
    let m = p
        .checked_pow(t)
        .ok_or_else(|| FszError::domain(format!("{p}^{t} overflows")))?;
    let mut report = WreathCriterionReport {
        base: base.descriptor(),
        p,
        t,
        m,
        method: "brute".into(),
        preconditions: Vec::new(),
        d_classes: 0,
        instances: 0,
        outcome: CriterionOutcome::Holds,
        reason: None,
        failure: None,
    };
    for pm in [m, m / p] {
        let v = fsz_m_test(base, pm, options.strategy.as_ref())?;
        report.preconditions.push(PreconditionCheck { m: pm, holds: v.holds });
    }
    if let Some(bad) = report.preconditions.iter().find(|c| !c.holds) {
        report.outcome = CriterionOutcome::Inconclusive;
        report.reason = Some(format!("{} is not FSZ_{}", report.base, bad.m));
        return Ok(report);
    }

    let ctx = CriterionContext::new(base, p, t)?;
    let ix = ctx.ix.clone();
    let classes = base.conjugacy_data()?;
    let orders = ix.element_orders();
    for &d in &classes.reps {
        let ord = orders[d as usize] as u64;
        let mut targets: Vec<(u64, u32)> = Vec::new();
        for n in 1..=p * ord {
            if gcd(n, p) != 1 {
                continue;
            }
            let tgt = ix.power(d, n);
            if !targets.iter().any(|&(_, x)| x == tgt) {
                targets.push((n, tgt));
            }
        }
        if targets.iter().all(|&(_, x)| ctx.fiber_size(x) == 0) {
            continue;
        }
        report.d_classes += 1;
        let tables: Vec<TargetTables> = targets
            .iter()
            .map(|&(_, x)| ctx.tables(x))
            .collect::<Result<_>>()?;
        let dkey = ix.key(d);
        let cgens: Vec<u32> = base
            .centralizer(&dkey)?
            .generators()
            .iter()
            .map(|g| ix.index_of_key(g))
            .collect::<Result<_>>()?;
        let ureps = orbit_minima(&ix, &cgens);
        report.instances += ureps.len() as u64;
        let hit = ureps
            .par_iter()
            .map(|&u| {
                let c1 = ctx.count(&tables[0], u);
                targets.iter().zip(&tables).skip(1).find_map(|(&(n, _), tb)| {
                    let cn = ctx.count(tb, u);
                    (cn != c1).then(|| CriterionFailure {
                        d: dkey.clone(),
                        u0: ix.key(u),
                        n,
                        count_at_d: c1,
                        count_at_dn: cn,
                    })
                })
            })
            .find_first(|f| f.is_some())
            .flatten();
        if let Some(f) = hit {
            report.outcome = CriterionOutcome::Inconclusive;
            report.reason = Some(format!(
                "solution counts at d = {} differ between n = 1 and n = {}",
                f.d, f.n
            ));
            report.failure = Some(f);
            return Ok(report);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_cyclic, build_wreath};

    /// Direct scan over all of `D^p`.
    fn brute(inst: &WreathConditionInstance) -> u128 {
        let g = &inst.base;
        let elems = g.enumerate().unwrap();
        let target = g.power(&inst.d, inst.n as i64).unwrap();
        let pt = inst.p.pow(inst.t) as i64;
        let p = inst.p as usize;
        let mut count = 0;
        let total = elems.len().pow(p as u32);
        for mut code in 0..total {
            let mut xs = Vec::with_capacity(p);
            for _ in 0..p {
                xs.push(&elems[code % elems.len()]);
                code /= elems.len();
            }
            if xs.iter().any(|x| g.power(x, pt).unwrap() != target) {
                continue;
            }
            let mut w = inst.u0.clone();
            for x in xs[1..].iter().chain(std::iter::once(&xs[0])) {
                w = g.multiply(&w, x).unwrap();
            }
            if g.power(&w, pt / inst.p as i64).unwrap() == target {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn counts_match_tuple_scan_on_small_wreath() {
        let d = build_wreath(&build_cyclic(2).unwrap(), 2).unwrap();
        let elems = d.enumerate().unwrap();
        for t in [1, 2] {
            for dd in &elems {
                for u0 in elems.iter().step_by(3) {
                    let inst = WreathConditionInstance::new(&d, 2, t, dd, u0, 1).unwrap();
                    assert_eq!(wreath_condition_count(&inst).unwrap(), brute(&inst));
                }
            }
        }
    }

    #[test]
    fn identity_instance_has_a_solution() {
        let d = build_cyclic(9).unwrap();
        let id = d.identity();
        for t in [1, 2, 3] {
            let inst = WreathConditionInstance::new(&d, 3, t, &id, &id, 1).unwrap();
            assert!(wreath_condition_count(&inst).unwrap() >= 1);
        }
    }

    #[test]
    fn instance_validation() {
        let d = build_cyclic(9).unwrap();
        let id = d.identity();
        assert!(WreathConditionInstance::new(&d, 3, 1, &id, &id, 3).is_err());
        assert!(WreathConditionInstance::new(&d, 4, 1, &id, &id, 1).is_err());
        assert!(WreathConditionInstance::new(&d, 3, 0, &id, &id, 1).is_err());
    }
}
