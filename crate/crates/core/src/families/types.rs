//! Classification of the members of a family relative to a normal subgroup
//! `Q = C_p x C_p` and its centralizer, and the subfamilies built from it.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::diagram::SubfamilyDiagram;
use super::family::SubgroupFamily;
use super::poset::PosetDiagram;
use crate::error::Result;
use crate::subgroup::{canonical_conjugate, is_elementary_abelian, SubgroupSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TypeTag {
    A,
    B,
    C,
    E,
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TypeInfo {
    /// `A`, `B` or `E`.
    pub base: TypeTag,
    /// Type A and contained in some type B or E member.
    pub type_c: bool,
    /// For members outside `C_G(Q)`: whether `K = H ∩ C_G(Q)` is cyclic.
    pub k_cyclic: Option<bool>,
}

impl TypeInfo {
    pub fn tags(&self) -> Vec<TypeTag> {
        let mut t = vec![self.base];
        if self.type_c {
            t.push(TypeTag::C);
        }
        t
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub info: BTreeMap<SubgroupSet, TypeInfo>,
    /// Members outside `C_G(Q)` where "H cyclic" and "K cyclic" disagree,
    /// i.e. where the two readings of the B/E split would differ.
    pub readings_diverge: Vec<SubgroupSet>,
    /// Type C members that are not cyclic (expected empty).
    pub noncyclic_type_c: Vec<SubgroupSet>,
}

impl Classification {
    pub fn of(&self, h: &SubgroupSet) -> Option<&TypeInfo> {
        self.info.get(h)
    }

    pub fn with_base(&self, t: TypeTag) -> impl Iterator<Item = &SubgroupSet> {
        self.info.iter().filter(move |(_, i)| i.base == t).map(|(h, _)| h)
    }

    pub fn counts(&self) -> BTreeMap<TypeTag, usize> {
        let mut m = BTreeMap::new();
        for i in self.info.values() {
            for t in i.tags() {
                *m.entry(t).or_insert(0) += 1;
            }
        }
        m
    }
}

/// A if `H <= C_G(Q)`; otherwise B if `H` is cyclic and E if not. C is
/// added to type-A members lying in some B or E member.
pub fn classify_types(family: &SubgroupFamily, cgq: &SubgroupSet) -> Classification {
    let mut info = BTreeMap::new();
    let mut readings_diverge = Vec::new();
    for h in family.members() {
        let t = if h.is_subgroup_of(cgq) {
            TypeInfo { base: TypeTag::A, type_c: false, k_cyclic: None }
        } else {
            let h_cyclic = h.is_cyclic();
            let k_cyclic = h.intersection(cgq).is_cyclic();
            if h_cyclic != k_cyclic {
                readings_diverge.push(h.clone());
            }
            let base = if h_cyclic { TypeTag::B } else { TypeTag::E };
            TypeInfo { base, type_c: false, k_cyclic: Some(k_cyclic) }
        };
        info.insert(h.clone(), t);
    }
    let outside: Vec<&SubgroupSet> = info.iter().filter(|(_, i)| i.base != TypeTag::A).map(|(h, _)| h).collect();
    let c_flags: Vec<(SubgroupSet, bool)> = info
        .par_iter()
        .filter(|(_, i)| i.base == TypeTag::A)
        .map(|(h, _)| (h.clone(), outside.iter().any(|x| h.order() < x.order() && h.is_subgroup_of(x))))
        .collect();
    let mut noncyclic_type_c = Vec::new();
    for (h, c) in c_flags {
        if c {
            if !h.is_cyclic() {
                noncyclic_type_c.push(h.clone());
            }
            info.get_mut(&h).expect("present").type_c = true;
        }
    }
    Classification { info, readings_diverge, noncyclic_type_c }
}

/// The rank-two elementary abelian subgroups of the type-E members, up to
/// conjugacy.
#[derive(Debug, Clone)]
pub struct ElementaryList {
    /// Canonical (least-bitset) conjugacy representatives `E_1, ..., E_m`.
    pub reps: Vec<SubgroupSet>,
    /// For each type-E member, its rank-two elementary abelian subgroup and
    /// the index `i` of the class it belongs to.
    pub of_member: BTreeMap<SubgroupSet, (SubgroupSet, usize)>,
    /// Type-E members without exactly one such subgroup (expected empty),
    /// with the number found.
    pub not_unique: Vec<(SubgroupSet, usize)>,
}

pub fn type_e_max_elementary(family: &SubgroupFamily, tags: &Classification) -> ElementaryList {
    let p2 = |h: &SubgroupSet| {
        let o = h.order();
        let p = (2..=o).find(|d| o.is_multiple_of(*d)).unwrap_or(1);
        o > 1 && o == p * p && is_elementary_abelian(h)
    };
    let rank_two: Vec<&SubgroupSet> = family.members().iter().filter(|h| p2(h)).collect();
    let type_e: Vec<&SubgroupSet> = tags.with_base(TypeTag::E).collect();
    let found: Vec<(SubgroupSet, Vec<SubgroupSet>)> = type_e
        .par_iter()
        .map(|h| {
            let es: Vec<SubgroupSet> = rank_two.iter().filter(|e| e.is_subgroup_of(h)).map(|e| (*e).clone()).collect();
            ((*h).clone(), es)
        })
        .collect();
    let mut not_unique = Vec::new();
    let mut canon: BTreeMap<SubgroupSet, SubgroupSet> = BTreeMap::new();
    let mut pairs = Vec::new();
    for (h, es) in found {
        if es.len() != 1 {
            not_unique.push((h.clone(), es.len()));
        }
        if let Some(e) = es.into_iter().next() {
            let rep = canon.entry(e.clone()).or_insert_with(|| canonical_conjugate(&e).0).clone();
            pairs.push((h, e, rep));
        }
    }
    let mut reps: Vec<SubgroupSet> = pairs.iter().map(|(_, _, r)| r.clone()).collect();
    reps.sort();
    reps.dedup();
    let of_member = pairs
        .into_iter()
        .map(|(h, e, r)| {
            let i = reps.binary_search(&r).expect("representative listed");
            (h, (e, i))
        })
        .collect();
    ElementaryList { reps, of_member, not_unique }
}

/// Discrete poset `{a, e_1, ..., e_m}` with `H_a` the type-A members and
/// `H_{e_i}` the type-E members containing a conjugate of `E_i`, closed
/// under subgroups within the family.
pub fn build_jackson_subfamilies(
    family: &SubgroupFamily,
    tags: &Classification,
    elist: &ElementaryList,
) -> Result<SubfamilyDiagram> {
    let g = family.group();
    let universe = family.members();
    let mut nodes = vec!["a".to_string()];
    let mut fams = vec![SubgroupFamily::new(g, "H_a", tags.with_base(TypeTag::A).cloned(), universe)?];
    for i in 0..elist.reps.len() {
        let tops: Vec<&SubgroupSet> =
            elist.of_member.iter().filter(|(_, (_, j))| *j == i).map(|(h, _)| h).collect();
        let members: Vec<SubgroupSet> =
            universe.par_iter().filter(|s| tops.iter().any(|t| s.is_subgroup_of(t))).cloned().collect();
        let label = format!("H_e{}", i + 1);
        fams.push(SubgroupFamily::new(g, label, members, universe)?);
        nodes.push(format!("e{}", i + 1));
    }
    SubfamilyDiagram::new(PosetDiagram::discrete(nodes), fams)
}
