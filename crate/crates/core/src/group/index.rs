use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::{check_budget, Buf, GroupImpl};
use crate::element::ElementKey;
use crate::error::{FszError, Result};

enum Lookup {
    Radix { radix: Vec<u32>, weights: Vec<u64> },
    Hash(FxHashMap<Box<[u32]>, u32>),
}

/// All elements of a group stored flat in ascending key order, with `u32`
/// indices standing in for keys. Index 0 is always the identity.
pub struct IndexedGroup {
    imp: Arc<dyn GroupImpl>,
    stride: usize,
    coords: Vec<u32>,
    lookup: Lookup,
    inverses: Vec<u32>,
    power_maps: Mutex<FxHashMap<u64, Arc<Vec<u32>>>>,
    orders: OnceLock<Vec<u32>>,
}

impl IndexedGroup {
    pub(crate) fn build(imp: Arc<dyn GroupImpl>) -> Result<Self> {
        check_budget(&imp.descriptor(), imp.order())?;
        let stride = imp.key_len();
        let (coords, lookup) = match imp.radix() {
            Some(radix) => {
                let mut weights = vec![1u64; radix.len()];
                for i in (0..radix.len().saturating_sub(1)).rev() {
                    weights[i] = weights[i + 1] * radix[i + 1] as u64;
                }
                let n: u64 = radix.iter().map(|&r| r as u64).product();
                if n as u128 != imp.order() {
                    return Err(FszError::structural(format!(
                        "radix layout of {} covers {n} keys, order is {}",
                        imp.descriptor(),
                        imp.order()
                    )));
                }
                let mut coords = vec![0u32; n as usize * stride];
                coords
                    .par_chunks_mut(stride.max(1))
                    .enumerate()
                    .for_each(|(rank, out)| {
                        let mut r = rank as u64;
                        for k in (0..stride).rev() {
                            out[k] = (r % radix[k] as u64) as u32;
                            r /= radix[k] as u64;
                        }
                    });
                (coords, Lookup::Radix { radix, weights })
            }
            None => {
                let keys = imp.enumerate_sorted().ok_or_else(|| {
                    FszError::structural(format!("{} cannot be enumerated", imp.descriptor()))
                })??;
                debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));
                let mut coords = Vec::with_capacity(keys.len() * stride);
                let mut map = FxHashMap::default();
                map.reserve(keys.len());
                for (i, k) in keys.iter().enumerate() {
                    coords.extend_from_slice(k.coords());
                    map.insert(k.coords().to_vec().into_boxed_slice(), i as u32);
                }
                (coords, Lookup::Hash(map))
            }
        };
        let mut ix = IndexedGroup {
            imp,
            stride,
            coords,
            lookup,
            inverses: Vec::new(),
            power_maps: Mutex::new(FxHashMap::default()),
            orders: OnceLock::new(),
        };
        if ix.len() == 0 || ix.element(0) != ix.imp.identity().coords() {
            return Err(FszError::structural(format!(
                "identity of {} is not the least key",
                ix.imp.descriptor()
            )));
        }
        let inverses: Vec<u32> = (0..ix.len() as u32)
            .into_par_iter()
            .map(|i| {
                let mut out: Buf = SmallVec::from_elem(0, ix.stride);
                ix.imp.inverse_into(ix.element(i), &mut out);
                ix.index_of(&out).expect("inverse stays in the group")
            })
            .collect();
        ix.inverses = inverses;
        Ok(ix)
    }

    pub fn len(&self) -> usize {
        if self.stride == 0 {
            1
        } else {
            self.coords.len() / self.stride
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn key_len(&self) -> usize {
        self.stride
    }

    pub fn element(&self, i: u32) -> &[u32] {
        let s = i as usize * self.stride;
        &self.coords[s..s + self.stride]
    }

    pub fn key(&self, i: u32) -> ElementKey {
        ElementKey::from_slice(self.element(i))
    }

    pub fn index_of(&self, coords: &[u32]) -> Option<u32> {
        match &self.lookup {
            Lookup::Radix { radix, weights } => {
                if coords.len() != radix.len() {
                    return None;
                }
                let mut rank = 0u64;
                for ((&c, &r), &w) in coords.iter().zip(radix).zip(weights) {
                    if c >= r {
                        return None;
                    }
                    rank += c as u64 * w;
                }
                Some(rank as u32)
            }
            Lookup::Hash(map) => map.get(coords).copied(),
        }
    }

    pub fn index_of_key(&self, key: &ElementKey) -> Result<u32> {
        self.index_of(key.coords()).ok_or_else(|| {
            FszError::structural(format!("{key} is not an element of {}", self.imp.descriptor()))
        })
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let mut out: Buf = SmallVec::from_elem(0, self.stride);
        self.imp.multiply_into(self.element(a), self.element(b), &mut out);
        self.index_of(&out).expect("product stays in the group")
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    /// `c^-1 x c`.
    pub fn conj(&self, x: u32, c: u32) -> u32 {
        self.mul(self.mul(self.inv(c), x), c)
    }

    pub fn commute(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn power(&self, a: u32, mut k: u64) -> u32 {
        let mut result = 0;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(result, base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(base, base);
            }
        }
        result
    }

    /// `x -> x^m` for every element; cached per `m`.
    pub fn power_map(&self, m: u64) -> Arc<Vec<u32>> {
        if let Some(p) = self.power_maps.lock().unwrap().get(&m) {
            return p.clone();
        }
        let map: Vec<u32> = match m {
            0 => vec![0; self.len()],
            1 => (0..self.len() as u32).collect(),
            _ => (0..self.len() as u32)
                .into_par_iter()
                .map(|a| self.power(a, m))
                .collect(),
        };
        let map = Arc::new(map);
        self.power_maps
            .lock()
            .unwrap()
            .entry(m)
            .or_insert(map)
            .clone()
    }

    /// Order of every element, each cyclic subgroup walked once.
    pub fn element_orders(&self) -> &[u32] {
        self.orders.get_or_init(|| {
            let n = self.len();
            let mut orders = vec![0u32; n];
            let mut cycle = Vec::new();
            for start in 0..n as u32 {
                if orders[start as usize] != 0 {
                    continue;
                }
                cycle.clear();
                cycle.push(0u32);
                let mut x = start;
                while x != 0 {
                    cycle.push(x);
                    x = self.mul(x, start);
                }
                let o = cycle.len() as u64;
                for (k, &y) in cycle.iter().enumerate() {
                    if orders[y as usize] == 0 {
                        orders[y as usize] = (o / super::gcd(k as u64, o)) as u32;
                    }
                }
            }
            orders
        })
    }

    /// Indices of the subgroup generated by `gens`, ascending.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut queue = vec![0u32];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push(y);
                }
            }
        }
        queue.sort_unstable();
        queue
    }
}
