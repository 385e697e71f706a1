use std::sync::Arc;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::context::MContext;
use super::strategy::{Auto, CountingStrategy, RepTask, StrategyRegistry};
use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{divisors, gcd, GroupHandle, GroupKind};

/// Which `m` an FSZ test covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MPolicy {
    /// Divisors of `exp(G)`.
    DivisorsOfExponent,
    /// Every `m` in `1..=exp(G)`.
    AllUpToExponent,
    Explicit(Vec<u64>),
}

impl MPolicy {
    pub fn label(&self) -> &'static str {
        match self {
            MPolicy::DivisorsOfExponent => "divisors-of-exponent",
            MPolicy::AllUpToExponent => "all-up-to-exponent",
            MPolicy::Explicit(_) => "explicit",
        }
    }

    pub fn resolve(&self, exponent: u64) -> Result<Vec<u64>> {
        Ok(match self {
            MPolicy::DivisorsOfExponent => divisors(exponent),
            MPolicy::AllUpToExponent => (1..=exponent).collect(),
            MPolicy::Explicit(ms) => {
                if ms.iter().any(|&m| m == 0) {
                    return Err(FszError::domain("m must be positive"));
                }
                let mut ms = ms.clone();
                ms.sort_unstable();
                ms.dedup();
                ms
            }
        })
    }
}

#[derive(Clone)]
pub struct FszOptions {
    pub policy: MPolicy,
    pub strategy: Arc<dyn CountingStrategy>,
}

impl Default for FszOptions {
    fn default() -> Self {
        FszOptions {
            policy: MPolicy::DivisorsOfExponent,
            strategy: Arc::new(Auto),
        }
    }
}

impl FszOptions {
    pub fn new(policy: MPolicy, strategy: &str) -> Result<Self> {
        Ok(FszOptions {
            policy,
            strategy: StrategyRegistry::standard().get(strategy)?,
        })
    }
}

/// The first failing `(g, u, n)` in canonical order, with both cardinalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub g: ElementKey,
    pub u: ElementKey,
    pub n: u64,
    pub g_n: ElementKey,
    pub count_g: u64,
    pub count_gn: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MVerdict {
    pub m: u64,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub representatives_checked: u64,
    pub skipped_outside_image: u64,
    pub skipped_rational: u64,
    pub u_evaluated: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FszReport {
    pub group: String,
    pub kind: GroupKind,
    pub order: u128,
    pub exponent: u64,
    pub extrapolated: bool,
    pub m_policy: String,
    pub ms: Vec<u64>,
    pub strategy: String,
    pub reductions: Vec<String>,
    pub verdicts: Vec<MVerdict>,
    pub holds: bool,
    pub failing_m: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl FszReport {
    pub fn verdict(&self, m: u64) -> Option<&MVerdict> {
        self.verdicts.iter().find(|v| v.m == m)
    }
}

const REP_BATCH: usize = 64;

/// Decides `FSZ_m` for one `m`.
pub fn fsz_m_test(group: &GroupHandle, m: u64, strategy: &dyn CountingStrategy) -> Result<MVerdict> {
    if m == 0 {
        return Err(FszError::domain("m must be positive"));
    }
    let ctx = MContext::new(group, m)?;
    let rational = strategy.reductions().contains(&"rational-classes");
    let mut verdict = MVerdict {
        m,
        holds: true,
        witness: None,
        representatives_checked: 0,
        skipped_outside_image: 0,
        skipped_rational: 0,
        u_evaluated: 0,
    };
    let mut work = Vec::new();
    for &r in &ctx.classes.reps {
        if ctx.fibers.size(r) == 0 {
            verdict.skipped_outside_image += 1;
            continue;
        }
        let targets = ctx.targets(r);
        if rational && targets.iter().any(|t| ctx.classes.rep_of(t.t) < r) {
            verdict.skipped_rational += 1;
            continue;
        }
        verdict.representatives_checked += 1;
        if !targets.is_empty() {
            work.push((r, targets));
        }
    }
    for batch in work.chunks(REP_BATCH) {
        let outcomes: Vec<Result<_>> = batch
            .par_iter()
            .map(|(r, targets)| {
                strategy.check(&RepTask {
                    ctx: &ctx,
                    rep: *r,
                    targets,
                })
            })
            .collect();
        for ((r, _), outcome) in batch.iter().zip(outcomes) {
            let outcome = outcome?;
            verdict.u_evaluated += outcome.u_evaluated;
            if let Some(f) = outcome.failure {
                verdict.holds = false;
                verdict.witness = Some(Witness {
                    g: ctx.ix.key(*r),
                    u: ctx.ix.key(f.u),
                    n: f.n,
                    g_n: ctx.ix.key(f.target),
                    count_g: f.count_g,
                    count_gn: f.count_gn,
                });
                return Ok(verdict);
            }
        }
    }
    Ok(verdict)
}

/// Runs [`fsz_m_test`] over the configured `m` range.
pub fn fsz_test(group: &GroupHandle, options: &FszOptions) -> Result<FszReport> {
    let exponent = group.exponent()?;
    let ms = options.policy.resolve(exponent)?;
    let mut verdicts = Vec::with_capacity(ms.len());
    for &m in &ms {
        verdicts.push(fsz_m_test(group, m, options.strategy.as_ref())?);
    }
    let failing_m: Vec<u64> = verdicts.iter().filter(|v| !v.holds).map(|v| v.m).collect();
    Ok(FszReport {
        group: group.descriptor(),
        kind: group.kind(),
        order: group.order(),
        exponent,
        extrapolated: group.extrapolated(),
        m_policy: options.policy.label().into(),
        ms,
        strategy: options.strategy.name().into(),
        reductions: options
            .strategy
            .reductions()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        holds: failing_m.is_empty(),
        failing_m,
        verdicts,
        timing_ms: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerVerdict {
    pub g: ElementKey,
    pub order: u128,
    pub abelian: bool,
    /// Conjugacy classes whose centralizer verdict this entry decides.
    pub classes_covered: u64,
    /// Set when `C(g)` coincides with the centralizer of an earlier entry.
    pub same_as: Option<ElementKey>,
    pub holds: bool,
    pub failing_m: Vec<u64>,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FszPlusReport {
    pub group: String,
    pub order: u128,
    pub extrapolated: bool,
    pub m_policy: String,
    pub strategy: String,
    pub class_count: u64,
    pub centralizers: Vec<CentralizerVerdict>,
    pub holds: bool,
    pub failing_g: Option<ElementKey>,
}

/// Tests `C_G(g)` for one `g` per orbit of conjugacy classes under
/// `g -> g^k` (`k` a unit mod `o(g)`) and `g -> g z` (`z` central); both maps
/// leave the centralizer unchanged.
pub fn fsz_plus_test(group: &GroupHandle, options: &FszOptions) -> Result<FszPlusReport> {
    let ix = group.index()?;
    let classes = group.conjugacy_data()?;
    let center: Vec<u32> = group
        .center()?
        .iter()
        .map(|z| ix.index_of_key(z))
        .collect::<Result<_>>()?;
    let k = classes.class_count();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let orders = ix.element_orders();
    for (c, &r) in classes.reps.iter().enumerate() {
        let o = orders[r as usize] as u64;
        let mut partners: Vec<u32> = (2..o).filter(|&e| gcd(e, o) == 1).map(|e| ix.power(r, e)).collect();
        partners.extend(center.iter().map(|&z| ix.mul(r, z)));
        for y in partners {
            let (a, b) = (find(&mut parent, c), find(&mut parent, classes.class_of[y as usize] as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut covered = vec![0u64; k];
    for c in 0..k {
        covered[find(&mut parent, c)] += 1;
    }
    let mut seen: FxHashMap<Vec<u32>, ElementKey> = FxHashMap::default();
    let mut centralizers = Vec::new();
    for c in 0..k {
        if find(&mut parent, c) != c {
            continue;
        }
        let g = ix.key(classes.reps[c]);
        let tag = |e: FszError| match e {
            FszError::Capacity { what, size, budget } => FszError::Capacity {
                what: format!("centralizer of {g}: {what}"),
                size,
                budget,
            },
            other => other,
        };
        let cent = group.centralizer(&g).map_err(tag)?;
        let members: Vec<u32> = cent
            .enumerate()
            .map_err(tag)?
            .iter()
            .map(|a| ix.index_of_key(a))
            .collect::<Result<_>>()?;
        if let Some(first) = seen.get(&members) {
            let prior: &CentralizerVerdict = centralizers
                .iter()
                .find(|v: &&CentralizerVerdict| v.g == *first)
                .expect("recorded");
            let mut entry = prior.clone();
            entry.g = g;
            entry.classes_covered = covered[c];
            entry.same_as = Some(first.clone());
            centralizers.push(entry);
            continue;
        }
        let report = fsz_test(&cent, options).map_err(tag)?;
        seen.insert(members, g.clone());
        centralizers.push(CentralizerVerdict {
            g,
            order: cent.order(),
            abelian: cent.is_abelian()?,
            classes_covered: covered[c],
            same_as: None,
            holds: report.holds,
            witness: report
                .verdicts
                .iter()
                .find(|v| !v.holds)
                .and_then(|v| v.witness.clone()),
            failing_m: report.failing_m,
        });
    }
    let failing_g = centralizers.iter().find(|v| !v.holds).map(|v| v.g.clone());
    Ok(FszPlusReport {
        group: group.descriptor(),
        order: group.order(),
        extrapolated: group.extrapolated(),
        m_policy: options.policy.label().into(),
        strategy: options.strategy.name().into(),
        class_count: k as u64,
        holds: failing_g.is_none(),
        failing_g,
        centralizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_abelian, build_cyclic, build_wreath};
    use crate::fsz::Naive;
    use crate::kinds::PermutationGroup;

    #[test]
    fn policies_resolve() {
        assert_eq!(MPolicy::DivisorsOfExponent.resolve(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(MPolicy::AllUpToExponent.resolve(3).unwrap(), vec![1, 2, 3]);
        assert_eq!(MPolicy::Explicit(vec![5, 1, 5]).resolve(25).unwrap(), vec![1, 5]);
        assert!(MPolicy::Explicit(vec![0]).resolve(2).is_err());
    }

    #[test]
    fn small_groups_are_fsz_for_small_m() {
        let s4 = GroupHandle::new(PermutationGroup::from_text("deg 4\n(1,2,3,4)\n(1,2)\n").unwrap());
        for m in [1, 2, 3, 4, 6] {
            assert!(fsz_m_test(&s4, m, &Auto).unwrap().holds);
            assert!(fsz_m_test(&s4, m, &Naive).unwrap().holds);
        }
    }

    #[test]
    fn abelian_and_small_wreath_are_fsz_plus() {
        let a = build_abelian(&[4, 2]).unwrap();
        let r = fsz_plus_test(&a, &FszOptions::default()).unwrap();
        assert!(r.holds);
        let w = build_wreath(&build_cyclic(3).unwrap(), 3).unwrap();
        let r = fsz_plus_test(&w, &FszOptions::default()).unwrap();
        assert!(r.holds);
        assert_eq!(r.centralizers[0].order, 81);
    }
}
