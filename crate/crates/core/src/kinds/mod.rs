//! Concrete group kinds, one per construction.

pub mod abelian;
pub mod central_product;
pub mod direct_product;
pub mod permutation;
pub mod quotient;
pub mod semidirect;
pub mod subgroup;
pub mod wreath;

pub use abelian::AbelianGroup;
pub use central_product::CentralProduct;
pub use direct_product::DirectProduct;
pub use permutation::PermutationGroup;
pub use quotient::CentralQuotient;
pub use semidirect::SemidirectGroup;
pub use subgroup::TableSubgroup;
pub use wreath::WreathGroup;

use crate::element::ElementKey;

/// Sorted cartesian product of key lists, left factor major.
pub(crate) fn cartesian_keys(left: &[ElementKey], right: &[ElementKey]) -> Vec<ElementKey> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for a in left {
        for b in right {
            let mut k = a.clone();
            k.extend_from_slice(b.coords());
            out.push(k);
        }
    }
    out
}
