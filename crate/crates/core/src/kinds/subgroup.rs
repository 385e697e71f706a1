use std::any::Any;
use std::sync::Arc;

use rustc_hash::FxHashSet;

use crate::element::ElementKey;
use crate::error::{FszError, Result};
use crate::group::{check_budget, GroupHandle, GroupImpl, GroupKind};
use crate::kinds::semidirect::key_closure;

/// A subgroup given by its explicit member list, with keys and arithmetic
/// inherited from the parent group.
pub struct TableSubgroup {
    parent: GroupHandle,
    members: Arc<Vec<ElementKey>>,
    set: FxHashSet<ElementKey>,
    gens: Vec<ElementKey>,
    label: String,
}

impl TableSubgroup {
    /// Wraps a sorted, duplicate-free member list. Without explicit
    /// generators a generating set is chosen greedily in key order.
    pub fn from_sorted_members(
        parent: GroupHandle,
        members: Vec<ElementKey>,
        gens: Option<Vec<ElementKey>>,
        label: String,
    ) -> Result<GroupHandle> {
        check_budget(&label, members.len() as u128)?;
        if members.first() != Some(&parent.identity()) {
            return Err(FszError::structural(format!("{label} does not contain the identity")));
        }
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let set: FxHashSet<ElementKey> = members.iter().cloned().collect();
        let gens = match gens {
            Some(g) => g,
            None => greedy_generators(&parent, &members, &set),
        };
        Ok(GroupHandle::new(TableSubgroup {
            parent,
            members: Arc::new(members),
            set,
            gens,
            label,
        }))
    }

    /// The subgroup of `parent` generated by `gens`.
    pub fn generated(parent: &GroupHandle, gens: Vec<ElementKey>, label: String) -> Result<GroupHandle> {
        for g in &gens {
            parent.validate(g)?;
        }
        let members = key_closure(parent, &gens);
        Self::from_sorted_members(parent.clone(), members, Some(gens), label)
    }

    pub fn parent(&self) -> &GroupHandle {
        &self.parent
    }

    pub fn members(&self) -> &[ElementKey] {
        &self.members
    }
}

fn greedy_generators(
    parent: &GroupHandle,
    members: &[ElementKey],
    set: &FxHashSet<ElementKey>,
) -> Vec<ElementKey> {
    let mut gens = Vec::new();
    let mut covered: FxHashSet<ElementKey> = FxHashSet::default();
    covered.insert(parent.identity());
    for x in members {
        if covered.len() == set.len() {
            break;
        }
        if covered.contains(x) {
            continue;
        }
        gens.push(x.clone());
        covered = key_closure(parent, &gens).into_iter().collect();
    }
    gens
}

impl GroupImpl for TableSubgroup {
    fn kind(&self) -> GroupKind {
        GroupKind::Table
    }

    fn descriptor(&self) -> String {
        self.label.clone()
    }

    fn key_len(&self) -> usize {
        self.parent.key_len()
    }

    fn identity(&self) -> ElementKey {
        self.parent.identity()
    }

    fn generators(&self) -> Vec<ElementKey> {
        self.gens.clone()
    }

    fn generator_names(&self) -> Vec<String> {
        (1..=self.gens.len()).map(|i| format!("g{i}")).collect()
    }

    fn element_by_name(&self, name: &str) -> Option<ElementKey> {
        if let Some(i) = name.strip_prefix('g').and_then(|s| s.parse::<usize>().ok()) {
            if i >= 1 && i <= self.gens.len() {
                return Some(self.gens[i - 1].clone());
            }
        }
        let e = self.parent.element_by_name(name)?;
        self.set.contains(&e).then_some(e)
    }

    fn validate(&self, a: &[u32]) -> Result<()> {
        if self.set.contains(&ElementKey::from_slice(a)) {
            Ok(())
        } else {
            Err(FszError::structural(format!(
                "{} is not in {}",
                ElementKey::from_slice(a),
                self.label
            )))
        }
    }

    fn multiply_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        self.parent.imp().multiply_into(a, b, out)
    }

    fn inverse_into(&self, a: &[u32], out: &mut [u32]) {
        self.parent.imp().inverse_into(a, out)
    }

    fn order(&self) -> u128 {
        self.members.len() as u128
    }

    fn enumerate_sorted(&self) -> Option<Result<Vec<ElementKey>>> {
        Some(Ok(self.members.as_ref().clone()))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
