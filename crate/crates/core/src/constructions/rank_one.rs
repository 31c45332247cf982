//! The star-shaped diagram for groups whose prime-power isotropy has rank
//! one: a node for the trivial group and one for each conjugacy class of
//! subgroups of prime order.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde_json::json;

use crate::character_table::{acts_freely, CharacterTable};
use crate::class_function::{perm_character, reduced_perm_character, ClassFunction};
use crate::error::{Error, Result};
use crate::families::{
    check_assignment_compatibility, check_compatible_family, check_diagram_of_reps, check_factorization,
    strongly_connected, CompatibleFamily, PosetDiagram, QuadrupleBundle, SubfamilyDiagram, SubgroupFamily,
};
use crate::group::{prime_power_of, Group};
use crate::subgroup::{all_subgroups, canonical_conjugate, normalizer, omega1, SubgroupSet};
use crate::verdict::Verdict;

/// What each `rho_d` induces from `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    /// The reduced regular character of `d` (the construction).
    ReducedRegular,
    /// The full regular character of `d` (a negative control).
    FullRegular,
}

#[derive(Debug, Clone)]
pub struct RankOneData {
    pub g: Arc<Group>,
    pub family: SubgroupFamily,
    /// Prime-power subgroups left out because their rank exceeds one.
    pub excluded: Vec<SubgroupSet>,
    /// Canonical representatives of the classes of prime-order subgroups.
    pub classes: Vec<SubgroupSet>,
    pub m: Vec<usize>,
    pub n: usize,
    pub n_d: Vec<usize>,
    pub kind: RepKind,
    pub quadruple: QuadrupleBundle,
}

/// `Omega_1(H)` for nontrivial rank-one `H` of prime-power order.
fn rank_one_omega(h: &SubgroupSet) -> Option<SubgroupSet> {
    if h.is_trivial() || prime_power_of(h.order()).is_none() {
        return None;
    }
    omega1(h).ok()
}

impl RankOneData {
    /// Builds the diagram with `n` the least common multiple of the `m_d`
    /// unless given; a given `n` must be a multiple of every `m_d`.
    pub fn build(g: &Arc<Group>, n: Option<usize>, kind: RepKind) -> Result<RankOneData> {
        let all = all_subgroups(g, None)?;
        let mut members = vec![SubgroupSet::trivial(g)];
        let mut excluded = Vec::new();
        let mut omega: BTreeMap<SubgroupSet, SubgroupSet> = BTreeMap::new();
        for h in all.iter().filter(|h| !h.is_trivial() && prime_power_of(h.order()).is_some()) {
            match rank_one_omega(h) {
                Some(o) => {
                    omega.insert(h.clone(), o);
                    members.push(h.clone());
                }
                None => excluded.push(h.clone()),
            }
        }
        let family = SubgroupFamily::new(g, "H", members, &all)?;
        let mut classes: Vec<SubgroupSet> = all
            .iter()
            .filter(|h| h.order() > 1 && crate::group::is_prime(h.order()))
            .map(|h| canonical_conjugate(h).0)
            .collect();
        classes.sort();
        classes.dedup();

        let normalizers: Vec<SubgroupSet> = classes.iter().map(|d| normalizer(g, d)).collect();
        let m: Vec<usize> = classes
            .iter()
            .zip(&normalizers)
            .map(|(d, nd)| {
                let p = d.order();
                match kind {
                    RepKind::ReducedRegular => nd.order() * (p - 1) / p,
                    RepKind::FullRegular => nd.order(),
                }
            })
            .collect();
        let lcm = m.iter().fold(1usize, |acc, &x| acc.lcm(&x));
        let n = match n {
            Some(n) if n == 0 || m.iter().any(|&x| n % x != 0) => {
                return Err(Error::Invalid(format!("n = {n} is not a positive multiple of every m_d (lcm {lcm})")))
            }
            Some(n) => n,
            None => lcm,
        };
        let n_d: Vec<usize> = m.iter().map(|&x| n / x).collect();

        let mut leaves = Vec::new();
        let mut fams = vec![SubgroupFamily::new(g, "H_1", [SubgroupSet::trivial(g)], &all)?];
        let mut groups = vec![SubgroupSet::trivial(g)];
        let trivial_group = SubgroupSet::trivial(g).as_group().0;
        let mut reps = vec![ClassFunction::constant(&trivial_group, n as i64)];
        let mut witnesses = vec![BTreeMap::from([(SubgroupSet::trivial(g), 0usize)])];
        for (i, d) in classes.iter().enumerate() {
            let node_members: Vec<SubgroupSet> = std::iter::once(SubgroupSet::trivial(g))
                .chain(
                    omega
                        .iter()
                        .filter(|(_, o)| canonical_conjugate(o).0 == *d)
                        .map(|(h, _)| h.clone()),
                )
                .collect();
            let mut w = BTreeMap::new();
            for h in &node_members {
                let x = match omega.get(h) {
                    Some(o) => (0..g.order()).find(|&x| o.conjugate_bits(x) == *d.members()).expect("conjugate"),
                    None => 0,
                };
                w.insert(h.clone(), x);
            }
            leaves.push(format!("d{}", i + 1));
            fams.push(SubgroupFamily::new(g, format!("H_d{}", i + 1), node_members, &all)?);
            groups.push(normalizers[i].clone());
            reps.push(rho_d(d, &normalizers[i], n_d[i], kind)?);
            witnesses.push(w);
        }
        let poset = PosetDiagram::star("1".to_string(), leaves);
        let diagram = SubfamilyDiagram::new(poset, fams)?;
        let quadruple = QuadrupleBundle::new(diagram, groups, reps, witnesses)?;
        Ok(RankOneData { g: g.clone(), family, excluded, classes, m, n, n_d, kind, quadruple })
    }
}

/// `n_d Ind_d^{N_G(d)} W`.
pub fn rho_d(d: &SubgroupSet, nd: &SubgroupSet, n_d: usize, kind: RepKind) -> Result<ClassFunction> {
    let inner = d.within(nd).ok_or_else(|| Error::Invalid("d is not inside N_G(d)".into()))?;
    let (d_std, emb) = inner.as_group();
    let trivial = SubgroupSet::trivial(&d_std);
    let w = match kind {
        RepKind::ReducedRegular => reduced_perm_character(&trivial),
        RepKind::FullRegular => perm_character(&trivial),
    };
    Ok(w.induce(emb)?.scale(n_d as i64))
}

/// `V_H = rho_d ∘ alpha_H^d`, one per member, taken from the first node
/// containing `H`.
pub fn induced_family(data: &RankOneData) -> Result<CompatibleFamily> {
    let q = &data.quadruple;
    let values = data
        .family
        .members()
        .par_iter()
        .map(|h| {
            let d = q.subfamilies.nodes_containing(h).into_iter().next().ok_or_else(|| {
                Error::Invalid(format!("{} lies in no subfamily", h.tag()))
            })?;
            q.pullback(d, h)
        })
        .collect::<Result<Vec<_>>>()?;
    CompatibleFamily::new(data.family.clone(), values)
}

/// `V_H` agrees across all nodes containing `H`, and is a fixed point free
/// character for nontrivial `H`.
pub fn check_free_family(data: &RankOneData) -> Verdict {
    let q = &data.quadruple;
    let members = data.family.members();
    let results: Vec<Option<String>> = members
        .par_iter()
        .map(|h| {
            let nodes = q.subfamilies.nodes_containing(h);
            let pulled: Vec<ClassFunction> = match nodes.iter().map(|&d| q.pullback(d, h)).collect::<Result<_>>() {
                Ok(v) => v,
                Err(e) => return Some(format!("{}: {e}", h.tag())),
            };
            let Some(first) = pulled.first() else {
                return Some(format!("{} lies in no subfamily", h.tag()));
            };
            if let Some(k) = pulled.iter().position(|v| v != first) {
                return Some(format!("{}: V_H differs between nodes {} and {}", h.tag(), nodes[0], nodes[k]));
            }
            if h.is_trivial() {
                return None;
            }
            let table = match CharacterTable::compute(&h.as_group().0) {
                Ok(t) => t,
                Err(e) => return Some(format!("{}: {e}", h.tag())),
            };
            if let Err(e) = table.is_character(first) {
                return Some(format!("{}: {e}", h.tag()));
            }
            (!acts_freely(first)).then(|| format!("{}: V_H has fixed vectors", h.tag()))
        })
        .collect();
    Verdict::from_witness("free_family", members.len(), results.into_iter().flatten().next())
}

/// `m_d = |N_G(d)| (p-1) / p` and `n_d m_d = n = deg rho_d` for every `d`.
pub fn check_multipliers(data: &RankOneData) -> Verdict {
    let q = &data.quadruple;
    let mut problem = None;
    for (i, d) in data.classes.iter().enumerate() {
        let p = d.order();
        let nd = q.groups[i + 1].order();
        if data.m[i] * p != nd * (p - 1) {
            problem.get_or_insert(format!("m_d{} = {} but |N_G(d)|(p-1)/p = {}", i + 1, data.m[i], nd * (p - 1) / p));
        }
        if data.n_d[i] * data.m[i] != data.n {
            problem.get_or_insert(format!("n_d{} m_d{} != n", i + 1, i + 1));
        }
        if q.reps[i + 1].degree().to_i64() != Some(data.n as i64) {
            problem.get_or_insert(format!("deg rho_d{} != n", i + 1));
        }
    }
    if q.reps[0].degree().to_i64() != Some(data.n as i64) {
        problem.get_or_insert("deg rho_1 != n".to_string());
    }
    Verdict::from_witness("multipliers", data.classes.len() + 1, problem).with_data(json!({
        "n": data.n,
        "classes": data.classes.iter().zip(&data.m).zip(&data.n_d).enumerate().map(|(i, ((d, m), nd))| json!({
            "node": format!("d{}", i + 1),
            "subgroup": d.tag(),
            "order": d.order(),
            "normalizer_order": q.groups[i + 1].order(),
            "m_d": m,
            "n_d": nd,
        })).collect::<Vec<_>>(),
    }))
}

/// Covering, strong connectedness, the diagram-of-representations
/// condition, assignment compatibility and freeness of every `V_H`, plus
/// the multiplier bookkeeping and the compatibility of the resulting family.
pub fn verify_rank_one(data: &RankOneData) -> Vec<Verdict> {
    let q = &data.quadruple;
    let mut out = vec![
        q.subfamilies.covers(&data.family),
        strongly_connected(&q.subfamilies, &data.family),
        check_diagram_of_reps(q),
        check_assignment_compatibility(q),
        check_free_family(data),
        check_multipliers(data),
    ];
    match induced_family(data) {
        Ok(v) => {
            out.push(check_compatible_family(&v));
            out.push(check_factorization(&v, q));
        }
        Err(e) => out.push(Verdict::fail("compatible_family", 0, e.to_string())),
    }
    out
}

/// Whether every prime-power subgroup is rank one, so that the family is
/// the full isotropy family of the construction.
pub fn hypothesis_report(data: &RankOneData) -> Verdict {
    let v = Verdict::from_witness(
        "prime_power_subgroups_rank_one",
        data.family.len() + data.excluded.len(),
        data.excluded.first().map(|h| format!("{} has rank at least two", h.tag())),
    );
    v.with_data(json!({ "excluded": data.excluded.len(), "family_size": data.family.len() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, elementary_abelian, heisenberg};
    use crate::subgroup::center;

    #[test]
    fn cyclic_nine_multipliers() {
        let g = cyclic(9).unwrap();
        let d = RankOneData::build(&g, None, RepKind::ReducedRegular).unwrap();
        assert_eq!(d.m, vec![6]);
        assert_eq!((d.n, d.n_d.clone()), (6, vec![1]));
        assert!(verify_rank_one(&d).iter().all(|v| v.passed()));
    }

    #[test]
    fn heisenberg_central_class() {
        let g = heisenberg(3).unwrap();
        let d = RankOneData::build(&g, None, RepKind::ReducedRegular).unwrap();
        let z = center(&g);
        let i = d.classes.iter().position(|c| *c == z).unwrap();
        assert_eq!(d.m[i], 18);
        // four noncentral classes of order-3 subgroups, each with normalizer of order 9
        assert_eq!(d.classes.len(), 5);
        assert_eq!(d.quadruple.poset().len(), 6);
        for v in verify_rank_one(&d) {
            assert!(v.passed(), "{v:?}");
        }
    }

    #[test]
    fn full_regular_breaks_freeness_only() {
        let g = elementary_abelian(3, 2).unwrap();
        let d = RankOneData::build(&g, None, RepKind::FullRegular).unwrap();
        let vs = verify_rank_one(&d);
        for v in &vs[..4] {
            assert!(v.passed(), "{v:?}");
        }
        assert!(vs[4].failed() && vs[4].witness.is_some());
    }

    #[test]
    fn supplied_n_must_be_a_multiple() {
        let g = cyclic(9).unwrap();
        assert!(RankOneData::build(&g, Some(4), RepKind::ReducedRegular).is_err());
        let d = RankOneData::build(&g, Some(12), RepKind::ReducedRegular).unwrap();
        assert_eq!(d.n_d, vec![2]);
    }
}
