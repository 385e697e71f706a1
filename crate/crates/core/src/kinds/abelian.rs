use std::any::Any;

use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{lcm, GroupHandle, GroupImpl, GroupKind};

/// `Z_{m_1} x ... x Z_{m_k}` with coordinatewise addition.
#[derive(Debug, Clone)]
pub struct AbelianGroup {
    moduli: Vec<u32>,
}

impl AbelianGroup {
    pub fn new(moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(FszError::domain("an abelian group needs at least one modulus"));
        }
        if moduli.contains(&0) {
            return Err(FszError::domain("modulus 0 does not give a finite group"));
        }
        let moduli = moduli
            .iter()
            .map(|&m| {
                u32::try_from(m).map_err(|_| FszError::domain(format!("modulus {m} is too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AbelianGroup { moduli })
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    /// Key of the element with the given (possibly negative) coordinates.
    pub fn element(&self, coords: &[i64]) -> Result<ElementKey> {
        if coords.len() != self.moduli.len() {
            return Err(FszError::Dimension(format!(
                "{} coordinates for {} moduli",
                coords.len(),
                self.moduli.len()
            )));
        }
        Ok(ElementKey::new(
            coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &m)| c.rem_euclid(m as i64) as u32),
        ))
    }
}

impl GroupImpl for AbelianGroup {
    fn kind(&self) -> GroupKind {
        GroupKind::Abelian
    }

    fn descriptor(&self) -> String {
        let parts: Vec<String> = self.moduli.iter().map(|m| m.to_string()).collect();
        format!("Ab({})", parts.join(","))
    }

    fn key_len(&self) -> usize {
        self.moduli.len()
    }

    fn generators(&self) -> Vec<ElementKey> {
        (0..self.moduli.len())
            .map(|i| {
                ElementKey::new(
                    self.moduli
                        .iter()
                        .enumerate()
                        .map(|(k, &m)| if k == i { 1 % m } else { 0 }),
                )
            })
            .collect()
    }

    fn generator_names(&self) -> Vec<String> {
        (1..=self.moduli.len()).map(|i| format!("a{i}")).collect()
    }

    fn validate(&self, a: &[u32]) -> Result<()> {
        for (i, (&c, &m)) in a.iter().zip(&self.moduli).enumerate() {
            if c >= m {
                return Err(FszError::structural(format!(
                    "coordinate {i} is {c}, modulus is {m}"
                )));
            }
        }
        Ok(())
    }

    fn multiply_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        for (((o, &x), &y), &m) in out.iter_mut().zip(a).zip(b).zip(&self.moduli) {
            let s = x as u64 + y as u64;
            *o = if s >= m as u64 { (s - m as u64) as u32 } else { s as u32 };
        }
    }

    fn inverse_into(&self, a: &[u32], out: &mut [u32]) {
        for ((o, &x), &m) in out.iter_mut().zip(a).zip(&self.moduli) {
            *o = if x == 0 { 0 } else { m - x };
        }
    }

    fn order(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    fn exponent_hint(&self) -> Option<u64> {
        Some(self.moduli.iter().fold(1, |acc, &m| lcm(acc, m as u64)))
    }

    fn radix(&self) -> Option<Vec<u32>> {
        Some(self.moduli.clone())
    }

    fn is_abelian_hint(&self) -> Option<bool> {
        Some(true)
    }

    fn center_hint(&self) -> Option<Result<Vec<ElementKey>>> {
        None
    }

    fn centralizer_hint(&self, this: &GroupHandle, _g: &ElementKey) -> Option<Result<GroupHandle>> {
        Some(Ok(this.clone()))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
