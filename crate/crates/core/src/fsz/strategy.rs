//! Pluggable counting strategies for the per-representative FSZ_m check.
//!
//! A strategy receives one class representative `r` of the power image and
//! the targets `r^n`, and reports the least `u` (then least `n`) at which
//! `|G_m(u, r)|` and `|G_m(u, r^n)|` differ.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::context::{Fibers, MContext, Target};
use crate::error::{FszError, Result};
use crate::group::IndexedGroup;

pub const DEFAULT_STRATEGY: &str = "auto";

/// Work units per parallel batch; batches run in order so the first
/// failure is found without scanning past it by more than one batch.
const BATCH: usize = 256;

pub struct RepTask<'a> {
    pub ctx: &'a MContext,
    pub rep: u32,
    pub targets: &'a [Target],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepFailure {
    pub u: u32,
    pub n: u64,
    pub target: u32,
    pub count_g: u64,
    pub count_gn: u64,
}

#[derive(Debug, Clone, Default)]
pub struct RepOutcome {
    pub failure: Option<RepFailure>,
    /// Number of `u` values examined explicitly.
    pub u_evaluated: u64,
}

pub trait CountingStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    /// Search-space reductions applied on top of class representatives.
    fn reductions(&self) -> &'static [&'static str];
    fn check(&self, task: &RepTask<'_>) -> Result<RepOutcome>;
}

/// Named strategies. Lookup is by exact name.
#[derive(Clone)]
pub struct StrategyRegistry {
    entries: BTreeMap<&'static str, Arc<dyn CountingStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(Convolution));
        r.register(Arc::new(FiberScan));
        r.register(Arc::new(Naive));
        r.register(Arc::new(Auto));
        r
    }

    /// Adds or replaces the strategy under its name.
    pub fn register(&mut self, s: Arc<dyn CountingStrategy>) {
        self.entries.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn CountingStrategy>> {
        self.entries.get(name).cloned().ok_or_else(|| {
            FszError::domain(format!(
                "unknown strategy `{name}` (known: {})",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

/// Sorted `(u, count)` pairs with non-zero count, where
/// `count(u) = #{(a, b) in F_g x F_h : a^-1 b = u}`.
pub(crate) fn shift_counts(ix: &IndexedGroup, fibers: &Fibers, g: u32, h: u32) -> Vec<(u32, u64)> {
    let (fg, fh) = (fibers.of(g), fibers.of(h));
    let pairs = fg.len() as u64 * fh.len() as u64;
    if pairs == 0 {
        return Vec::new();
    }
    let n = ix.len();
    if pairs > n as u64 {
        let dense = fg
            .par_iter()
            .fold(
                || vec![0u32; n],
                |mut acc, &a| {
                    let ai = ix.inv(a);
                    for &b in fh {
                        acc[ix.mul(ai, b) as usize] += 1;
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u32; n],
                |mut x, y| {
                    for (p, q) in x.iter_mut().zip(y) {
                        *p += q;
                    }
                    x
                },
            );
        dense
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(u, c)| (u as u32, c as u64))
            .collect()
    } else {
        let mut prods: Vec<u32> = fg
            .par_iter()
            .flat_map_iter(|&a| {
                let ai = ix.inv(a);
                fh.iter().map(move |&b| ix.mul(ai, b))
            })
            .collect();
        prods.par_sort_unstable();
        let mut out: Vec<(u32, u64)> = Vec::new();
        for u in prods {
            match out.last_mut() {
                Some((v, c)) if *v == u => *c += 1,
                _ => out.push((u, 1)),
            }
        }
        out
    }
}

/// First `u` where two sparse count lists differ, with both counts.
fn first_difference(x: &[(u32, u64)], y: &[(u32, u64)]) -> Option<(u32, u64, u64)> {
    let (mut i, mut j) = (0, 0);
    loop {
        match (x.get(i), y.get(j)) {
            (None, None) => return None,
            (Some(&(u, c)), None) => return Some((u, c, 0)),
            (None, Some(&(u, c))) => return Some((u, 0, c)),
            (Some(&(u, c)), Some(&(v, d))) => {
                if u < v {
                    return Some((u, c, 0));
                }
                if v < u {
                    return Some((v, 0, d));
                }
                if c != d {
                    return Some((u, c, d));
                }
                i += 1;
                j += 1;
            }
        }
    }
}

/// Whole count vectors over all `u` at once, one per target.
pub struct Convolution;

impl CountingStrategy for Convolution {
    fn name(&self) -> &'static str {
        "convolution"
    }

    fn reductions(&self) -> &'static [&'static str] {
        &["class-representatives", "power-image", "rational-classes"]
    }

    fn check(&self, task: &RepTask<'_>) -> Result<RepOutcome> {
        let ctx = task.ctx;
        let base = shift_counts(&ctx.ix, &ctx.fibers, task.rep, task.rep);
        let mut best: Option<RepFailure> = None;
        for t in task.targets {
            let other = shift_counts(&ctx.ix, &ctx.fibers, t.t, t.t);
            if let Some((u, cg, cn)) = first_difference(&base, &other) {
                if best.map_or(true, |b| u < b.u) {
                    best = Some(RepFailure {
                        u,
                        n: t.n,
                        target: t.t,
                        count_g: cg,
                        count_gn: cn,
                    });
                }
            }
        }
        Ok(RepOutcome {
            failure: best,
            u_evaluated: ctx.order(),
        })
    }
}

/// Per-`u` fiber scans over orbit representatives of `u`.
pub struct FiberScan;

impl FiberScan {
    fn count(ctx: &MContext, t: u32, u: u32) -> u64 {
        let p = &ctx.power;
        ctx.fibers
            .of(t)
            .iter()
            .filter(|&&a| p[ctx.ix.mul(a, u) as usize] == t)
            .count() as u64
    }
}

impl CountingStrategy for FiberScan {
    fn name(&self) -> &'static str {
        "fiber-scan"
    }

    fn reductions(&self) -> &'static [&'static str] {
        &[
            "class-representatives",
            "power-image",
            "rational-classes",
            "u-up-to-centralizer-conjugacy",
            "u-up-to-central-m-torsion",
        ]
    }

    fn check(&self, task: &RepTask<'_>) -> Result<RepOutcome> {
        let ctx = task.ctx;
        let owned;
        let ureps: &[u32] = if ctx.central[task.rep as usize] {
            ctx.central_ureps()
        } else {
            let c = ctx.group.centralizer(&ctx.ix.key(task.rep))?;
            owned = ctx.ureps_in(&c)?;
            &owned
        };
        let mut evaluated = 0u64;
        for batch in ureps.chunks(BATCH) {
            evaluated += batch.len() as u64;
            let hit = batch
                .par_iter()
                .map(|&u| {
                    let cg = Self::count(ctx, task.rep, u);
                    task.targets.iter().find_map(|t| {
                        let cn = Self::count(ctx, t.t, u);
                        (cn != cg).then_some(RepFailure {
                            u,
                            n: t.n,
                            target: t.t,
                            count_g: cg,
                            count_gn: cn,
                        })
                    })
                })
                .find_first(|f| f.is_some())
                .flatten();
            if hit.is_some() {
                return Ok(RepOutcome {
                    failure: hit,
                    u_evaluated: evaluated,
                });
            }
        }
        Ok(RepOutcome {
            failure: None,
            u_evaluated: evaluated,
        })
    }
}

/// The reference oracle: every `u` in `C(g)`, every `a` in `C(g)`, powers by
/// repeated multiplication. No `u` reduction.
pub struct Naive;

impl CountingStrategy for Naive {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn reductions(&self) -> &'static [&'static str] {
        &["class-representatives", "power-image"]
    }

    fn check(&self, task: &RepTask<'_>) -> Result<RepOutcome> {
        let ctx = task.ctx;
        let ix = &ctx.ix;
        let r = task.rep;
        let m = ctx.m;
        let cent: Vec<u32> = (0..ix.len() as u32).filter(|&a| ix.commute(a, r)).collect();
        let count = |t: u32, u: u32| -> u64 {
            cent.iter()
                .filter(|&&a| ix.power(a, m) == t && ix.power(ix.mul(a, u), m) == t)
                .count() as u64
        };
        let mut evaluated = 0u64;
        for batch in cent.chunks(BATCH) {
            evaluated += batch.len() as u64;
            let hit = batch
                .par_iter()
                .map(|&u| {
                    let cg = count(r, u);
                    task.targets.iter().find_map(|t| {
                        let cn = count(t.t, u);
                        (cn != cg).then_some(RepFailure {
                            u,
                            n: t.n,
                            target: t.t,
                            count_g: cg,
                            count_gn: cn,
                        })
                    })
                })
                .find_first(|f| f.is_some())
                .flatten();
            if hit.is_some() {
                return Ok(RepOutcome {
                    failure: hit,
                    u_evaluated: evaluated,
                });
            }
        }
        Ok(RepOutcome {
            failure: None,
            u_evaluated: evaluated,
        })
    }
}

/// Picks convolution or fiber scanning per representative from a cost estimate.
pub struct Auto;

impl Auto {
    fn prefers_scan(task: &RepTask<'_>) -> bool {
        let ctx = task.ctx;
        let f = ctx.fibers.size(task.rep) as u64;
        if ctx.central[task.rep as usize] {
            // convolution ~ f^2 per target, scanning ~ f * #reps per target
            f > ctx.central_ureps().len() as u64
        } else {
            f * f > 16 * ctx.order()
        }
    }
}

impl CountingStrategy for Auto {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn reductions(&self) -> &'static [&'static str] {
        FiberScan.reductions()
    }

    fn check(&self, task: &RepTask<'_>) -> Result<RepOutcome> {
        if Self::prefers_scan(task) {
            FiberScan.check(task)
        } else {
            Convolution.check(task)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let r = StrategyRegistry::standard();
        assert_eq!(r.names(), vec!["auto", "convolution", "fiber-scan", "naive"]);
        assert!(r.get("auto").is_ok());
        assert!(matches!(r.get("quantum"), Err(FszError::Domain(_))));
    }

    #[test]
    fn first_difference_merges() {
        let x = [(1, 2), (4, 1)];
        let y = [(1, 2), (3, 1), (4, 1)];
        assert_eq!(first_difference(&x, &y), Some((3, 0, 1)));
        assert_eq!(first_difference(&x, &x), None);
        assert_eq!(first_difference(&[], &[(0, 1)]), Some((0, 0, 1)));
    }
}
