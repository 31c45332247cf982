use std::collections::HashSet;
use std::sync::Arc;

use crate::bits::Bitset;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::subgroup::SubgroupSet;

/// A set of subgroups closed under conjugation and under taking subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupFamily {
    group: Arc<Group>,
    label: String,
    members: Vec<SubgroupSet>,
    index: HashSet<Bitset>,
}

impl SubgroupFamily {
    /// Builds and checks a family. `universe` must contain every subgroup
    /// of every member (the full subgroup list of the group always does).
    pub fn new(
        group: &Arc<Group>,
        label: impl Into<String>,
        members: impl IntoIterator<Item = SubgroupSet>,
        universe: &[SubgroupSet],
    ) -> Result<Self> {
        let label = label.into();
        let fam = SubgroupFamily::unchecked(group, label.clone(), members);
        if let Some(w) = fam.closure_violation(universe) {
            return Err(Error::NotClosed(label, w));
        }
        Ok(fam)
    }

    /// Builds without the closure checks.
    pub fn unchecked(group: &Arc<Group>, label: impl Into<String>, members: impl IntoIterator<Item = SubgroupSet>) -> Self {
        let mut members: Vec<SubgroupSet> = members.into_iter().collect();
        members.sort();
        members.dedup();
        let index = members.iter().map(|h| h.members().clone()).collect();
        SubgroupFamily { group: group.clone(), label: label.into(), members, index }
    }

    /// First member whose conjugate or subgroup falls outside the family.
    pub fn closure_violation(&self, universe: &[SubgroupSet]) -> Option<String> {
        let g = &self.group;
        for h in &self.members {
            for &x in g.generators() {
                let c = h.conjugate_bits(x);
                if !self.index.contains(&c) {
                    return Some(format!("conjugate of {} by {x} missing", h.tag()));
                }
            }
        }
        for h in &self.members {
            for s in universe {
                if s.order() < h.order() && h.order() % s.order() == 0 && s.is_subgroup_of(h) && !self.contains(s) {
                    return Some(format!("subgroup {} of {} missing", s.tag(), h.tag()));
                }
            }
        }
        None
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn members(&self) -> &[SubgroupSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, h: &SubgroupSet) -> bool {
        self.index.contains(h.members())
    }

    pub fn contains_bits(&self, b: &Bitset) -> bool {
        self.index.contains(b)
    }

    /// Position of `h` in the sorted member list.
    pub fn position(&self, h: &SubgroupSet) -> Option<usize> {
        self.members.binary_search(h).ok()
    }

    pub fn position_bits(&self, b: &Bitset) -> Option<usize> {
        if !self.index.contains(b) {
            return None;
        }
        let h = SubgroupSet::from_closed(self.group.clone(), b.clone());
        self.position(&h)
    }

    pub fn is_subfamily_of(&self, other: &SubgroupFamily) -> bool {
        self.members.iter().all(|h| other.contains(h))
    }
}

/// All subgroups `H` with `H ∩ Z0 = 1`.
pub fn family_trivial_intersection(all: &[SubgroupSet], z0: &SubgroupSet) -> Result<SubgroupFamily> {
    let g = z0.parent();
    let members = all.iter().filter(|h| h.meets_trivially(z0)).cloned();
    SubgroupFamily::new(g, "trivial intersection", members, all)
}
