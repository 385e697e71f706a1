use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Canonical normal form of a group element.
///
/// A key is a fixed-length sequence of coordinates whose meaning depends on
/// the construction that produced it. The serialized form is the big-endian
/// byte string of the coordinates, so comparing keys coordinatewise is the
/// same as comparing their bytes lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementKey(SmallVec<[u32; 16]>);

impl ElementKey {
    pub fn new(coords: impl IntoIterator<Item = u32>) -> Self {
        ElementKey(coords.into_iter().collect())
    }

    pub fn from_slice(coords: &[u32]) -> Self {
        ElementKey(SmallVec::from_slice(coords))
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, c: u32) {
        self.0.push(c);
    }

    pub fn extend_from_slice(&mut self, c: &[u32]) {
        self.0.extend_from_slice(c);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|c| c.to_be_bytes()).collect()
    }

    pub fn from_bytes(bytes: &[u8]) -> Option<Self> {
        if bytes.len() % 4 != 0 {
            return None;
        }
        Some(ElementKey(
            bytes
                .chunks_exact(4)
                .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]))
                .collect(),
        ))
    }
}

impl fmt::Debug for ElementKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ElementKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn byte_order_matches_key_order(a in proptest::collection::vec(any::<u32>(), 4),
                                        b in proptest::collection::vec(any::<u32>(), 4)) {
            let ka = ElementKey::new(a);
            let kb = ElementKey::new(b);
            prop_assert_eq!(ka.cmp(&kb), ka.to_bytes().cmp(&kb.to_bytes()));
            prop_assert_eq!(ElementKey::from_bytes(&ka.to_bytes()).unwrap(), ka);
        }
    }
}
