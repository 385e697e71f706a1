//! Integer vectors and matrices with a separate modulus per coordinate.
//!
//! `MixedModulusVector` models elements of a finite abelian group
//! `Z_{m_1} x ... x Z_{m_k}` and `ActionMatrix` models endomorphisms (and
//! homomorphisms between two such groups) written as integer matrices whose
//! row `i` is reduced modulo `row_moduli[i]`.
//!
//! The solver handles systems whose moduli are all powers of a single prime,
//! which covers every module in the constructions of this crate.

use std::fmt;

use crate::error::{FszError, Result};

fn reduce(x: i128, m: u64) -> u64 {
    let m = m as i128;
    (((x % m) + m) % m) as u64
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MixedModulusVector {
    entries: Vec<u64>,
    moduli: Vec<u64>,
}

impl MixedModulusVector {
    /// Builds a vector, reducing each (possibly negative) entry into `[0, moduli[i])`.
    pub fn new(entries: &[i64], moduli: &[u64]) -> Result<Self> {
        if entries.len() != moduli.len() {
            return Err(FszError::Dimension(format!(
                "{} entries for {} moduli",
                entries.len(),
                moduli.len()
            )));
        }
        if let Some(i) = moduli.iter().position(|&m| m == 0) {
            return Err(FszError::domain(format!("modulus {i} is zero")));
        }
        Ok(MixedModulusVector {
            entries: entries
                .iter()
                .zip(moduli)
                .map(|(&e, &m)| reduce(e as i128, m))
                .collect(),
            moduli: moduli.to_vec(),
        })
    }

    pub fn zeros(moduli: &[u64]) -> Self {
        MixedModulusVector {
            entries: vec![0; moduli.len()],
            moduli: moduli.to_vec(),
        }
    }

    pub fn unit(moduli: &[u64], i: usize) -> Self {
        let mut v = Self::zeros(moduli);
        v.entries[i] = 1 % moduli[i];
        v
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.moduli != other.moduli {
            return Err(FszError::Dimension(format!(
                "moduli {:?} vs {:?}",
                self.moduli, other.moduli
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(MixedModulusVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .zip(&self.moduli)
                .map(|((&a, &b), &m)| (a + b) % m)
                .collect(),
            moduli: self.moduli.clone(),
        })
    }

    pub fn neg(&self) -> Self {
        MixedModulusVector {
            entries: self
                .entries
                .iter()
                .zip(&self.moduli)
                .map(|(&a, &m)| (m - a) % m)
                .collect(),
            moduli: self.moduli.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        MixedModulusVector {
            entries: self
                .entries
                .iter()
                .zip(&self.moduli)
                .map(|(&a, &m)| reduce(a as i128 * k as i128, m))
                .collect(),
            moduli: self.moduli.clone(),
        }
    }

    /// Concatenates blocks into one vector (moduli concatenate too).
    pub fn concat(blocks: &[MixedModulusVector]) -> Self {
        MixedModulusVector {
            entries: blocks.iter().flat_map(|b| b.entries.iter().copied()).collect(),
            moduli: blocks.iter().flat_map(|b| b.moduli.iter().copied()).collect(),
        }
    }

    /// Splits into consecutive blocks of `width` coordinates.
    pub fn split(&self, width: usize) -> Vec<MixedModulusVector> {
        self.entries
            .chunks(width)
            .zip(self.moduli.chunks(width))
            .map(|(e, m)| MixedModulusVector {
                entries: e.to_vec(),
                moduli: m.to_vec(),
            })
            .collect()
    }
}

impl fmt::Debug for MixedModulusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (e, m)) in self.entries.iter().zip(&self.moduli).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e} mod {m}")?;
        }
        write!(f, ")")
    }
}

/// Integer matrix acting from the left on mixed-modulus vectors.
///
/// Row `i` of every product is reduced modulo `row_moduli[i]`; the stored
/// entries are kept reduced the same way.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ActionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
    row_moduli: Vec<u64>,
}

impl ActionMatrix {
    pub fn from_signed(
        rows: usize,
        cols: usize,
        entries: &[i64],
        row_moduli: &[u64],
    ) -> Result<Self> {
        if entries.len() != rows * cols || row_moduli.len() != rows {
            return Err(FszError::Dimension(format!(
                "{rows}x{cols} matrix given {} entries and {} row moduli",
                entries.len(),
                row_moduli.len()
            )));
        }
        if row_moduli.contains(&0) {
            return Err(FszError::domain("row modulus is zero"));
        }
        let entries = entries
            .iter()
            .enumerate()
            .map(|(k, &e)| reduce(e as i128, row_moduli[k / cols]))
            .collect();
        Ok(ActionMatrix {
            rows,
            cols,
            entries,
            row_moduli: row_moduli.to_vec(),
        })
    }

    pub fn zeros(rows: usize, cols: usize, row_moduli: &[u64]) -> Self {
        ActionMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
            row_moduli: row_moduli.to_vec(),
        }
    }

    pub fn identity(moduli: &[u64]) -> Self {
        let n = moduli.len();
        let mut m = Self::zeros(n, n, moduli);
        for i in 0..n {
            m.entries[i * n + i] = 1 % moduli[i];
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_moduli(&self) -> &[u64] {
        &self.row_moduli
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.entries[i * self.cols + j] = reduce(value as i128, self.row_moduli[i]);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(&self.row_moduli)
    }

    /// Standard matrix-vector product, row `i` reduced modulo `row_moduli[i]`.
    pub fn apply(&self, v: &MixedModulusVector) -> Result<MixedModulusVector> {
        if v.len() != self.cols {
            return Err(FszError::Dimension(format!(
                "{}x{} matrix applied to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let entries = (0..self.rows)
            .map(|i| {
                let acc: u128 = self
                    .row(i)
                    .iter()
                    .zip(v.entries())
                    .map(|(&a, &b)| a as u128 * b as u128)
                    .sum();
                (acc % self.row_moduli[i] as u128) as u64
            })
            .collect();
        Ok(MixedModulusVector {
            entries,
            moduli: self.row_moduli.clone(),
        })
    }

    /// Raw product on a coordinate slice; used by the group kinds on their hot path.
    pub(crate) fn apply_raw(&self, v: &[u32], out: &mut [u32]) {
        for (i, o) in out.iter_mut().enumerate().take(self.rows) {
            let row = self.row(i);
            let mut acc: u64 = 0;
            for (&a, &b) in row.iter().zip(v) {
                acc += a * b as u64;
            }
            *o = (acc % self.row_moduli[i]) as u32;
        }
    }

    /// Composition `self * other` (apply `other` first); rows reduced by `self`'s moduli.
    pub fn compose(&self, other: &ActionMatrix) -> Result<ActionMatrix> {
        if self.cols != other.rows {
            return Err(FszError::Dimension(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ActionMatrix::zeros(self.rows, other.cols, &self.row_moduli);
        for i in 0..self.rows {
            let m = self.row_moduli[i] as u128;
            for k in 0..other.cols {
                let acc: u128 = (0..self.cols)
                    .map(|j| self.get(i, j) as u128 * other.get(j, k) as u128)
                    .sum();
                out.entries[i * other.cols + k] = (acc % m) as u64;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ActionMatrix) -> Result<ActionMatrix> {
        if self.rows != other.rows || self.cols != other.cols || self.row_moduli != other.row_moduli
        {
            return Err(FszError::Dimension("matrix shapes differ".into()));
        }
        let mut out = self.clone();
        for (k, e) in out.entries.iter_mut().enumerate() {
            *e = (*e + other.entries[k]) % self.row_moduli[k / self.cols];
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> ActionMatrix {
        let mut out = self.clone();
        for (idx, e) in out.entries.iter_mut().enumerate() {
            *e = reduce(*e as i128 * k as i128, self.row_moduli[idx / self.cols]);
        }
        out
    }

    pub fn pow(&self, mut k: u64) -> Result<ActionMatrix> {
        if !self.is_square() {
            return Err(FszError::Dimension("power of a non-square matrix".into()));
        }
        let mut result = ActionMatrix::identity(&self.row_moduli);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base)?;
            }
            base = base.compose(&base)?;
            k >>= 1;
        }
        Ok(result)
    }

    /// Whether the matrix induces a well-defined map from a module with
    /// `domain_moduli` into the module with this matrix's row moduli.
    pub fn is_well_defined_on(&self, domain_moduli: &[u64]) -> bool {
        domain_moduli.len() == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    (self.get(i, j) as u128 * domain_moduli[j] as u128)
                        % self.row_moduli[i] as u128
                        == 0
                })
            })
    }

    /// A square matrix is invertible on its module iff `M x = e_i` is solvable for every `i`.
    pub fn is_invertible(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(FszError::Dimension("invertibility of a non-square matrix".into()));
        }
        for i in 0..self.rows {
            let target = MixedModulusVector::unit(&self.row_moduli, i);
            if solve(self, &self.row_moduli, &target)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Least `k >= 1` with `M^k` acting as the identity.
    pub fn multiplicative_order(&self) -> Result<u64> {
        const LIMIT: u64 = 1 << 20;
        if !self.is_invertible()? {
            return Err(FszError::domain("matrix is not invertible on its module"));
        }
        let mut power = self.clone();
        for k in 1..=LIMIT {
            if power.is_identity() {
                return Ok(k);
            }
            power = power.compose(self)?;
        }
        Err(FszError::domain(format!("matrix order exceeds {LIMIT}")))
    }
}

impl fmt::Debug for ActionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ActionMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?} mod {}", self.row(i), self.row_moduli[i])?;
        }
        Ok(())
    }
}

fn prime_power(m: u64) -> Option<(u64, u32)> {
    if m == 1 {
        return Some((1, 0));
    }
    let mut p = 2;
    while p * p <= m && m % p != 0 {
        p += 1;
    }
    if m % p != 0 {
        p = m;
    }
    let mut e = 0;
    let mut r = m;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

fn valuation(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    let mut x = x;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{a} is not a unit mod {m}");
    reduce(t, m)
}

/// Solves `matrix * x = target` for `x` in the module with `domain_moduli`.
///
/// All moduli must be powers of one prime `p`. The system is scaled into
/// `Z/p^K` (`p^K` the largest modulus) and eliminated with full pivoting on
/// the entry of least `p`-adic valuation, which keeps the echelon form
/// divisible enough that solvability reduces to one divisibility check per
/// pivot row.
pub fn solve(
    matrix: &ActionMatrix,
    domain_moduli: &[u64],
    target: &MixedModulusVector,
) -> Result<Option<MixedModulusVector>> {
    if domain_moduli.len() != matrix.cols || target.len() != matrix.rows {
        return Err(FszError::Dimension(format!(
            "{}x{} system with {} unknowns and target of length {}",
            matrix.rows,
            matrix.cols,
            domain_moduli.len(),
            target.len()
        )));
    }
    if target.moduli() != matrix.row_moduli() {
        return Err(FszError::Dimension("target moduli differ from row moduli".into()));
    }
    let mut prime = 1;
    let mut top = 0u32;
    for &m in matrix.row_moduli.iter().chain(domain_moduli) {
        let (p, e) = prime_power(m)
            .ok_or_else(|| FszError::domain(format!("modulus {m} is not a prime power")))?;
        if p != 1 {
            if prime != 1 && prime != p {
                return Err(FszError::domain(format!(
                    "moduli mix the primes {prime} and {p}"
                )));
            }
            prime = p;
            top = top.max(e);
        }
    }
    if !matrix.is_well_defined_on(domain_moduli) {
        return Err(FszError::domain("matrix is not well defined on the domain module"));
    }
    if prime == 1 {
        return Ok(Some(MixedModulusVector::zeros(domain_moduli)));
    }
    let big = prime.pow(top);
    let (rows, cols) = (matrix.rows, matrix.cols);
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % big as u128) as u64;

    let mut a = vec![0u64; rows * cols];
    let mut b = vec![0u64; rows];
    for i in 0..rows {
        let scale = big / matrix.row_moduli[i];
        for j in 0..cols {
            a[i * cols + j] = mulmod(matrix.get(i, j), scale);
        }
        b[i] = mulmod(target.entries()[i], scale);
    }
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut pivots: Vec<(u32, u64)> = Vec::new();

    for k in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = valuation(a[i * cols + j], prime, top);
                if v < top && best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        if pi != k {
            for j in 0..cols {
                a.swap(pi * cols + j, k * cols + j);
            }
            b.swap(pi, k);
        }
        if pj != k {
            for i in 0..rows {
                a.swap(i * cols + pj, i * cols + k);
            }
            perm.swap(pj, k);
        }
        let pv = prime.pow(v);
        let unit = a[k * cols + k] / pv;
        let unit_inv = inv_mod(unit % big, big);
        for i in k + 1..rows {
            let entry = a[i * cols + k];
            if entry == 0 {
                continue;
            }
            let factor = mulmod(entry / pv, unit_inv);
            for j in k..cols {
                let sub = mulmod(factor, a[k * cols + j]);
                a[i * cols + j] = (a[i * cols + j] + big - sub) % big;
            }
            b[i] = (b[i] + big - mulmod(factor, b[k])) % big;
        }
        pivots.push((v, unit_inv));
    }

    let rank = pivots.len();
    if b[rank..].iter().any(|&x| x != 0) {
        return Ok(None);
    }
    let mut x = vec![0u64; cols];
    for k in (0..rank).rev() {
        let (v, unit_inv) = pivots[k];
        let mut num = b[k];
        for j in k + 1..cols {
            num = (num + big - mulmod(a[k * cols + j], x[j])) % big;
        }
        let pv = prime.pow(v);
        if num % pv != 0 {
            return Ok(None);
        }
        x[k] = mulmod(num / pv, unit_inv) % (big / pv);
    }
    let mut solution = vec![0i64; cols];
    for (k, &col) in perm.iter().enumerate() {
        solution[col] = x[k] as i64;
    }
    let solution = MixedModulusVector::new(&solution, domain_moduli)?;
    debug_assert_eq!(&matrix.apply(&solution)?, target);
    Ok(Some(solution))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_solvable(m: &ActionMatrix, dom: &[u64], t: &MixedModulusVector) -> bool {
        let total: u64 = dom.iter().product();
        (0..total).any(|mut code| {
            let coords: Vec<i64> = dom
                .iter()
                .map(|&d| {
                    let c = code % d;
                    code /= d;
                    c as i64
                })
                .collect();
            let v = MixedModulusVector::new(&coords, dom).unwrap();
            &m.apply(&v).unwrap() == t
        })
    }

    #[test]
    fn identity_application_is_noop() {
        let moduli = [25, 5, 5];
        let v = MixedModulusVector::new(&[7, 3, 4], &moduli).unwrap();
        assert_eq!(ActionMatrix::identity(&moduli).apply(&v).unwrap(), v);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = ActionMatrix::identity(&[5, 5]);
        let v = MixedModulusVector::zeros(&[5, 5, 5]);
        assert!(matches!(m.apply(&v), Err(FszError::Dimension(_))));
    }

    #[test]
    fn non_invertible_matrix_has_no_order() {
        let m = ActionMatrix::from_signed(2, 2, &[1, 0, 0, 0], &[5, 5]).unwrap();
        assert!(!m.is_invertible().unwrap());
        assert!(matches!(m.multiplicative_order(), Err(FszError::Domain(_))));
        assert_eq!(ActionMatrix::identity(&[5, 5]).multiplicative_order().unwrap(), 1);
    }

    #[test]
    fn mixed_prime_moduli_are_refused() {
        let m = ActionMatrix::identity(&[4, 3]);
        let t = MixedModulusVector::zeros(&[4, 3]);
        assert!(matches!(solve(&m, &[4, 3], &t), Err(FszError::Domain(_))));
    }

    #[test]
    fn solver_handles_valuation_pivots() {
        // 5x = 10 mod 25 has solutions; 5x = 3 mod 25 has none.
        let m = ActionMatrix::from_signed(1, 1, &[5], &[25]).unwrap();
        let t = MixedModulusVector::new(&[10], &[25]).unwrap();
        let x = solve(&m, &[25], &t).unwrap().unwrap();
        assert_eq!(m.apply(&x).unwrap(), t);
        let t = MixedModulusVector::new(&[3], &[25]).unwrap();
        assert!(solve(&m, &[25], &t).unwrap().is_none());
    }

    proptest! {
        #[test]
        fn application_is_additive(entries in proptest::collection::vec(-30i64..30, 9),
                                   v in proptest::collection::vec(0i64..25, 3),
                                   w in proptest::collection::vec(0i64..25, 3)) {
            // First row over Z_25 must send the Z_5 coordinates to multiples of 5.
            let mut e = entries.clone();
            e[1] *= 5;
            e[2] *= 5;
            let moduli = [25, 5, 5];
            let m = ActionMatrix::from_signed(3, 3, &e, &moduli).unwrap();
            prop_assume!(m.is_well_defined_on(&moduli));
            let v = MixedModulusVector::new(&v, &moduli).unwrap();
            let w = MixedModulusVector::new(&w, &moduli).unwrap();
            let lhs = m.apply(&v.add(&w).unwrap()).unwrap();
            let rhs = m.apply(&v).unwrap().add(&m.apply(&w).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn solver_agrees_with_exhaustive_search(entries in proptest::collection::vec(0i64..9, 6),
                                                target in proptest::collection::vec(0i64..9, 3)) {
            // Rows mod 9, 3, 3; unknowns mod 9, 3.
            let mut e = entries.clone();
            e[1] *= 3;
            let rows = [9, 3, 3];
            let dom = [9, 3];
            let m = ActionMatrix::from_signed(3, 2, &e, &rows).unwrap();
            prop_assume!(m.is_well_defined_on(&dom));
            let t = MixedModulusVector::new(&target, &rows).unwrap();
            let found = solve(&m, &dom, &t).unwrap();
            prop_assert_eq!(found.is_some(), brute_solvable(&m, &dom, &t));
            if let Some(x) = found {
                prop_assert_eq!(m.apply(&x).unwrap(), t);
            }
        }
    }
}
