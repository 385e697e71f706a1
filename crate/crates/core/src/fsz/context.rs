use std::sync::{Arc, OnceLock};

use crate::error::Result;
use crate::group::{gcd, ConjugacyData, GroupHandle, IndexedGroup};

/// Elements grouped by their `m`-th power, CSR style. Each fiber is ascending.
pub struct Fibers {
    offsets: Vec<u32>,
    members: Vec<u32>,
}

impl Fibers {
    pub fn build(power: &[u32]) -> Self {
        let n = power.len();
        let mut offsets = vec![0u32; n + 1];
        for &t in power {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut members = vec![0u32; n];
        for (a, &t) in power.iter().enumerate() {
            members[fill[t as usize] as usize] = a as u32;
            fill[t as usize] += 1;
        }
        Fibers { offsets, members }
    }

    pub fn of(&self, t: u32) -> &[u32] {
        &self.members[self.offsets[t as usize] as usize..self.offsets[t as usize + 1] as usize]
    }

    pub fn size(&self, t: u32) -> usize {
        (self.offsets[t as usize + 1] - self.offsets[t as usize]) as usize
    }
}

/// Everything shared by the per-representative checks for one `(G, m)`.
pub struct MContext {
    pub group: GroupHandle,
    pub ix: Arc<IndexedGroup>,
    pub classes: Arc<ConjugacyData>,
    pub m: u64,
    pub power: Arc<Vec<u32>>,
    pub fibers: Fibers,
    pub central: Vec<bool>,
    /// Central `c` with `c^m = 1`; `a -> a c` leaves every `(au)^m` unchanged.
    pub omega: Vec<u32>,
    central_ureps: OnceLock<Vec<u32>>,
}

impl MContext {
    pub fn new(group: &GroupHandle, m: u64) -> Result<Self> {
        let ix = group.index()?;
        let classes = group.conjugacy_data()?;
        let power = ix.power_map(m);
        let fibers = Fibers::build(&power);
        let mut central = vec![false; ix.len()];
        for z in group.center()? {
            central[ix.index_of_key(&z)? as usize] = true;
        }
        let omega = (0..ix.len() as u32)
            .filter(|&c| central[c as usize] && power[c as usize] == 0)
            .collect();
        Ok(MContext {
            group: group.clone(),
            ix,
            classes,
            m,
            power,
            fibers,
            central,
            omega,
            central_ureps: OnceLock::new(),
        })
    }

    pub fn order(&self) -> u64 {
        self.ix.len() as u64
    }

    /// Representatives of `u` up to conjugation in `G` and translation by
    /// `omega`; valid for central targets.
    pub fn central_ureps(&self) -> &[u32] {
        self.central_ureps.get_or_init(|| {
            let classes = &self.classes;
            let k = classes.class_count();
            let mut uf = UnionFind::new(k);
            for (c, &r) in classes.reps.iter().enumerate() {
                for &w in &self.omega {
                    let other = classes.class_of[self.ix.mul(r, w) as usize];
                    uf.union(c, other as usize);
                }
            }
            // Reps are class minima, so the first class seen per root is its minimum.
            let mut seen = vec![false; k];
            let mut out = Vec::new();
            for c in 0..k {
                let root = uf.find(c);
                if !std::mem::replace(&mut seen[root], true) {
                    out.push(classes.reps[c]);
                }
            }
            out
        })
    }

    /// `u` representatives for a non-central target, inside `C(r)` given as
    /// ascending parent indices.
    pub fn ureps_in(&self, centralizer: &GroupHandle) -> Result<Vec<u32>> {
        let cix = centralizer.index()?;
        let cclasses = centralizer.conjugacy_data()?;
        let to_parent: Vec<u32> = (0..cix.len() as u32)
            .map(|i| self.ix.index_of(cix.element(i)).expect("subgroup element"))
            .collect();
        let mut from_parent = rustc_hash::FxHashMap::default();
        for (i, &p) in to_parent.iter().enumerate() {
            from_parent.insert(p, i as u32);
        }
        let k = cclasses.class_count();
        let mut uf = UnionFind::new(k);
        for (c, &r) in cclasses.reps.iter().enumerate() {
            for &w in &self.omega {
                let moved = self.ix.mul(to_parent[r as usize], w);
                let local = from_parent[&moved];
                uf.union(c, cclasses.class_of[local as usize] as usize);
            }
        }
        let mut best = vec![u32::MAX; k];
        for (c, &r) in cclasses.reps.iter().enumerate() {
            let root = uf.find(c);
            best[root] = best[root].min(to_parent[r as usize]);
        }
        let mut out: Vec<u32> = best.into_iter().filter(|&b| b != u32::MAX).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// The targets `r^n` for units `n` modulo `o(r)`, distinct from `r`,
    /// each with the least admissible `n`.
    pub fn targets(&self, r: u32) -> Vec<Target> {
        let ord = self.ix.element_orders()[r as usize] as u64;
        let mut out: Vec<Target> = Vec::new();
        for n0 in 2..ord {
            if gcd(n0, ord) != 1 {
                continue;
            }
            let t = self.ix.power(r, n0);
            if t == r || out.iter().any(|x| x.t == t) {
                continue;
            }
            out.push(Target {
                n: admissible_exponent(n0, ord, self.order()),
                t,
            });
        }
        out.sort_by_key(|x| x.n);
        out
    }
}

/// Least `n = n0 + k ord` coprime to `order`.
pub fn admissible_exponent(n0: u64, ord: u64, order: u64) -> u64 {
    let mut n = n0;
    while gcd(n, order) != 1 {
        n += ord;
    }
    n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Target {
    pub n: u64,
    pub t: u32,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
