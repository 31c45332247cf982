//! Jackson's class function on a rank-three p-group with cyclic center, the
//! subgroup types it induces, and the quadruple through which the
//! restrictions of `chi` factor.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use super::shapes::{classify_shape, Shape};
use crate::character_table::{acts_freely, CharacterTable};
use crate::class_function::{reduced_perm_character, ClassFunction};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::families::{
    almost_strongly_connected, build_jackson_subfamilies, check_assignment_compatibility, check_compatible_family,
    check_diagram_of_reps, check_factorization, classify_types, family_trivial_intersection, type_e_max_elementary,
    Classification, CompatibleFamily, ElementaryList, QuadrupleBundle, SubgroupFamily, TypeTag,
};
use crate::group::{prime_power_of, Group};
use crate::subgroup::{
    all_subgroups, are_conjugate, canonical_conjugate, center, centralizer, closure, is_elementary_abelian, normalizer,
    rank, SubgroupSet,
};
use crate::verdict::Verdict;

/// Hypotheses under which the construction applies.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Hypotheses {
    pub p: Option<usize>,
    pub p_odd: bool,
    pub rank: Option<u32>,
    pub center_cyclic: bool,
}

impl Hypotheses {
    pub fn of(g: &Arc<Group>) -> Hypotheses {
        let p = prime_power_of(g.order()).map(|(p, _)| p);
        let whole = SubgroupSet::whole(g);
        let rank = p.and_then(|_| rank(&whole).ok());
        Hypotheses { p, p_odd: p.is_some_and(|p| p % 2 == 1), rank, center_cyclic: center(g).is_cyclic() }
    }

    /// First failed hypothesis, if any.
    pub fn failure(&self) -> Option<String> {
        match (self.p, self.rank) {
            (None, _) => Some("group is not a p-group".into()),
            (Some(2), _) => Some("p = 2; an odd prime is required".into()),
            (_, r) if r != Some(3) => Some(format!("rank is {}, not 3", r.unwrap_or(0))),
            _ if !self.center_cyclic => Some("center is not cyclic".into()),
            _ => None,
        }
    }
}

/// A normal `Q = C_p x C_p` (least in `(order, bitset)` order among all
/// candidates), the least nonidentity `c` in `Z(G) ∩ Q`, and the least `a`
/// in `Q` outside `<c>`.
pub fn find_normal_q(g: &Arc<Group>, all: &[SubgroupSet]) -> Result<(SubgroupSet, usize, usize)> {
    let (p, _) = prime_power_of(g.order()).ok_or_else(|| Error::HypothesisViolation("not a p-group".into()))?;
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let q = all
        .iter()
        .find(|h| h.order() == p * p && is_elementary_abelian(h) && h.is_normal())
        .cloned()
        .ok_or(Error::NoSuchQ)?;
    let z = center(g);
    let c = q.intersection(&z).elements().nth(1).ok_or(Error::NoSuchQ)?;
    let cs = closure(g, [c]);
    let a = q.elements().find(|&x| !cs.contains(x)).ok_or(Error::NoSuchQ)?;
    Ok((q, c, a))
}

/// Value of `chi` at `x`, case by case. The fourth case uses `<c>` for the
/// center of `Q`; with the center of `Q` as an abstract group (all of `Q`)
/// the case would be empty.
pub fn jackson_value(g: &Group, q: &SubgroupSet, c_sub: &SubgroupSet, cgq: &SubgroupSet, z: &SubgroupSet, x: usize) -> i64 {
    let n = g.order() as i64;
    let p = c_sub.order() as i64;
    if x == 0 {
        p * (p - 1) * n
    } else if z.contains(x) {
        0
    } else if q.contains(x) && !c_sub.contains(x) {
        -p * n
    } else if cgq.contains(x) {
        0
    } else if g.element_order(x) as i64 == p {
        -n
    } else {
        0
    }
}

pub fn jackson_chi(g: &Arc<Group>, q: &SubgroupSet, c: usize, cgq: &SubgroupSet) -> Result<ClassFunction> {
    if let Some(f) = Hypotheses::of(g).failure() {
        return Err(Error::HypothesisViolation(f));
    }
    let z = center(g);
    let cs = closure(g, [c]);
    Ok(ClassFunction::from_integers(g, |x| jackson_value(g, q, &cs, cgq, &z, x)))
}

/// Everything the verification of the construction needs.
#[derive(Clone, Debug)]
pub struct JacksonData {
    pub g: Arc<Group>,
    pub p: usize,
    pub all: Vec<SubgroupSet>,
    pub center: SubgroupSet,
    pub q: SubgroupSet,
    pub c: usize,
    pub a: usize,
    pub cgq: SubgroupSet,
    pub chi: ClassFunction,
    pub family: SubgroupFamily,
    pub tags: Classification,
    pub elist: ElementaryList,
    /// `C_i = E_i ∩ C_G(Q)`.
    pub c_list: Vec<SubgroupSet>,
    pub normalizers: Vec<SubgroupSet>,
    pub n_a: usize,
    pub n_e: Vec<usize>,
    pub quadruple: QuadrupleBundle,
    pub v_chi: CompatibleFamily,
}

impl JacksonData {
    pub fn build(g: &Arc<Group>) -> Result<JacksonData> {
        let hyp = Hypotheses::of(g);
        if hyp.p == Some(2) {
            return Err(Error::EvenPrime);
        }
        if let Some(f) = hyp.failure() {
            return Err(Error::HypothesisViolation(f));
        }
        let p = hyp.p.expect("p-group");
        let all = all_subgroups(g, None)?;
        let (q, c, a) = find_normal_q(g, &all)?;
        let cgq = centralizer(g, &q);
        let chi = jackson_chi(g, &q, c, &cgq)?;
        let z = center(g);
        let family = family_trivial_intersection(&all, &z)?;
        let tags = classify_types(&family, &cgq);
        let elist = type_e_max_elementary(&family, &tags);
        let diagram = build_jackson_subfamilies(&family, &tags, &elist)?;
        let normalizers: Vec<SubgroupSet> = elist.reps.iter().map(|e| normalizer(g, e)).collect();
        let c_list: Vec<SubgroupSet> = elist.reps.iter().map(|e| e.intersection(&cgq)).collect();
        let n_a = p.pow(3);
        let n_e: Vec<usize> = normalizers.iter().map(|n| p * g.order() / n.order()).collect();

        let a_sub = closure(g, [a]);
        let mut groups = vec![cgq.clone()];
        let mut reps = vec![rho_a(&cgq, &a_sub, n_a)?];
        for (i, e) in elist.reps.iter().enumerate() {
            groups.push(normalizers[i].clone());
            reps.push(rho_e(&normalizers[i], e, &c_list[i], p, n_e[i])?);
        }
        let witnesses = assignment_witnesses(&diagram, &elist, &q, &a_sub);
        let quadruple = QuadrupleBundle::new(diagram, groups, reps, witnesses)?;
        let v_chi = CompatibleFamily::from_class_function(family.clone(), &chi)?;
        Ok(JacksonData {
            g: g.clone(),
            p,
            all,
            center: z,
            q,
            c,
            a,
            cgq,
            chi,
            family,
            tags,
            elist,
            c_list,
            normalizers,
            n_a,
            n_e,
            quadruple,
            v_chi,
        })
    }

    /// Copy with `chi` replaced (and `V_chi` recomputed), for perturbation runs.
    pub fn with_chi(&self, chi: ClassFunction) -> Result<JacksonData> {
        let mut out = self.clone();
        out.v_chi = CompatibleFamily::from_class_function(self.family.clone(), &chi)?;
        out.chi = chi;
        Ok(out)
    }

    pub fn c_subgroup(&self) -> SubgroupSet {
        closure(&self.g, [self.c])
    }

    pub fn a_subgroup(&self) -> SubgroupSet {
        closure(&self.g, [self.a])
    }
}

/// Reduced regular character of `<a>` induced to `C_G(Q)`, times `n_a`.
pub fn rho_a(cgq: &SubgroupSet, a_sub: &SubgroupSet, n_a: usize) -> Result<ClassFunction> {
    let inner = a_sub.within(cgq).ok_or_else(|| Error::Invalid("<a> is not inside C_G(Q)".into()))?;
    let (a_std, emb) = inner.as_group();
    let chi_a = reduced_perm_character(&SubgroupSet::trivial(&a_std));
    Ok(chi_a.induce(emb)?.scale(n_a as i64))
}

/// `W_i = I_{E_i/C_i} + (p-1) I_{E_i/1}` as a class function on `E_i`.
pub fn w_character(e: &SubgroupSet, c_i: &SubgroupSet, p: usize) -> Result<ClassFunction> {
    let inner = c_i.within(e).ok_or_else(|| Error::Invalid("C_i is not inside E_i".into()))?;
    let (e_std, _) = e.as_group();
    let reg = reduced_perm_character(&SubgroupSet::trivial(&e_std));
    reduced_perm_character(&inner).add(&reg.scale(p as i64 - 1))
}

/// `n_e Ind_{E_i}^{N_G(E_i)} W_i`.
pub fn rho_e(n: &SubgroupSet, e: &SubgroupSet, c_i: &SubgroupSet, p: usize, n_e: usize) -> Result<ClassFunction> {
    let e_in = e.within(n).ok_or_else(|| Error::Invalid("E_i is not inside its normalizer".into()))?;
    let c_in = c_i.within(n).ok_or_else(|| Error::Invalid("C_i is not inside N_G(E_i)".into()))?;
    let w = w_character(&e_in, &c_in, p)?;
    let (_, emb) = e_in.as_group();
    Ok(w.induce(emb)?.scale(n_e as i64))
}

/// Conjugating elements defining `alpha_H^d`: on the type-A node, the least
/// `g` with `Q ∩ gHg^-1 = <a>` when `H` meets `Q`, else the identity; on
/// node `e_i`, the least `g` putting `gHg^-1` inside a type-E member whose
/// rank-two elementary abelian subgroup is `E_i` itself. Merely landing in
/// `N_G(E_i)` is not enough: `N_G(E_i) \ E_i` can hold elements of order `p`
/// outside `C_G(Q)`, where `chi` and `rho_e` differ.
fn assignment_witnesses(
    diagram: &crate::families::SubfamilyDiagram,
    elist: &ElementaryList,
    q: &SubgroupSet,
    a_sub: &SubgroupSet,
) -> Vec<BTreeMap<SubgroupSet, usize>> {
    let g = q.parent();
    (0..diagram.families().len())
        .map(|d| {
            let targets: Vec<&SubgroupSet> = if d == 0 {
                Vec::new()
            } else {
                let e = &elist.reps[d - 1];
                elist.of_member.iter().filter(|(_, (et, _))| et == e).map(|(t, _)| t).collect()
            };
            diagram
                .family(d)
                .members()
                .par_iter()
                .map(|h| {
                    let w = if d == 0 {
                        if h.meets_trivially(q) {
                            0
                        } else {
                            (0..g.order())
                                .find(|&x| h.conjugate(x).intersection(q).members() == a_sub.members())
                                .unwrap_or(0)
                        }
                    } else {
                        (0..g.order())
                            .find(|&x| {
                                let b = h.conjugate_bits(x);
                                targets.iter().any(|t| b.is_subset(t.members()))
                            })
                            .unwrap_or(0)
                    };
                    (h.clone(), w)
                })
                .collect()
        })
        .collect()
}

/// The structural facts the construction rests on: `Q` normal and
/// elementary of rank two, `Z(G) ∩ Q = <c>` of order `p`,
/// `|G : C_G(Q)| = p`, and the multiplier identities.
pub fn verify_setup(d: &JacksonData) -> Verdict {
    let p = d.p;
    let g = &d.g;
    let mut problems = Vec::new();
    if !(d.q.is_normal() && d.q.order() == p * p && is_elementary_abelian(&d.q)) {
        problems.push("Q is not a normal C_p x C_p".to_string());
    }
    let zq = d.q.intersection(&d.center);
    if zq.order() != p || !zq.contains(d.c) {
        problems.push(format!("Z(G) ∩ Q has order {}", zq.order()));
    }
    if d.center.contains(d.a) {
        problems.push("a is central".into());
    }
    if d.cgq.index() != p {
        problems.push(format!("|G : C_G(Q)| = {}", d.cgq.index()));
    }
    let target = p * (p - 1) * g.order();
    if d.n_a * (p - 1) * g.order() / (p * p) != target {
        problems.push("n_a (p-1) |G| / p^2 != p (p-1) |G|".into());
    }
    for (i, n) in d.normalizers.iter().enumerate() {
        if d.n_e[i] * (p - 1) * n.order() != target {
            problems.push(format!("n_e{} (p-1) |N_G(E_{})| != p (p-1) |G|", i + 1, i + 1));
        }
    }
    let v = Verdict::from_witness("setup", 5 + d.normalizers.len(), problems.into_iter().next());
    v.with_data(json!({
        "p": p,
        "order": g.order(),
        "Q": d.q.tag(),
        "c": d.c,
        "a": d.a,
        "centralizer_of_Q": d.cgq.tag(),
        "centralizer_index": d.cgq.index(),
        "n_a": d.n_a,
        "n_e": d.n_e,
        "normalizer_orders": d.normalizers.iter().map(|n| n.order()).collect::<Vec<_>>(),
        "family_size": d.family.len(),
        "chi_degree": d.chi.degree().to_i64(),
    }))
    .with_note("Z(Q) in the case formula is read as <c> = Z(G) ∩ Q; read literally (Q is abelian) the case would be empty")
}

/// `chi` restricted to every member is a character (multiplicities from
/// each member's own character table), and for every rank-two elementary
/// abelian member the restriction is fixed point free.
pub fn verify_restrictions(d: &JacksonData) -> (Verdict, Verdict) {
    let members = d.family.members();
    let results: Vec<Result<Vec<u64>>> = members
        .par_iter()
        .map(|h| {
            let table = CharacterTable::compute(&h.as_group().0)?;
            Ok(table.is_character(&d.chi.restrict(h)?)?.0)
        })
        .collect();
    let first_bad = members.iter().zip(&results).find_map(|(h, r)| match r {
        Ok(_) => None,
        Err(e) => Some(format!("H={}: {e}", h.tag())),
    });
    let classes = class_representatives(members);
    let data: Vec<serde_json::Value> = classes
        .iter()
        .map(|(rep, count)| {
            let i = members.binary_search(rep).expect("member");
            json!({
                "subgroup": rep.tag(),
                "order": rep.order(),
                "conjugates": count,
                "multiplicities": results[i].as_ref().ok(),
            })
        })
        .collect();
    let v1 = Verdict::from_witness("restrictions_are_characters", members.len(), first_bad)
        .with_data(json!({ "classes": data }))
        .with_note("multiplicities listed for one representative per conjugacy class, least bitset first");

    let rank_two: Vec<&SubgroupSet> =
        members.iter().filter(|h| h.order() == d.p * d.p && is_elementary_abelian(h)).collect();
    // (ii) asks that E fix no nonzero vector: <chi|_E, 1_E> = 0. Cyclic
    // subgroups of E may still fix vectors; those are counted for the record.
    let results: Vec<std::result::Result<bool, String>> = rank_two
        .par_iter()
        .map(|e| {
            let res = d.chi.restrict(e).map_err(|err| format!("E={}: {err}", e.tag()))?;
            let table = CharacterTable::compute(&e.as_group().0).map_err(|err| format!("E={}: {err}", e.tag()))?;
            let mult = table.is_character(&res).map_err(|err| format!("E={}: {err}", e.tag()))?;
            if mult.trivial() != 0 {
                return Err(format!("E={}: <chi|_E, 1_E> = {}", e.tag(), mult.trivial()));
            }
            Ok(acts_freely(&res))
        })
        .collect();
    let witness = results.iter().find_map(|r| r.as_ref().err().cloned());
    let elementwise_free = results.iter().filter(|r| matches!(r, Ok(true))).count();
    let v2 = Verdict::from_witness("rank_two_fixed_point_free", rank_two.len(), witness)
        .with_data(json!({ "rank_two_members": rank_two.len(), "acting_freely_elementwise": elementwise_free }))
        .with_note("fixed point free is read as V_E^E = 0, i.e. <chi|_E, 1_E> = 0; a free action of every element is not claimed");
    (v1, v2)
}

/// Least-bitset representatives of the conjugacy classes among `members`,
/// with class sizes, in sorted order.
pub fn class_representatives(members: &[SubgroupSet]) -> Vec<(SubgroupSet, usize)> {
    let reps: Vec<SubgroupSet> = members.par_iter().map(|h| canonical_conjugate(h).0).collect();
    let mut counts: BTreeMap<SubgroupSet, usize> = BTreeMap::new();
    for r in reps {
        *counts.entry(r).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

/// Members meeting `Q` lie in `C_G(Q)` and have a conjugate meeting `Q` in
/// exactly `<a>`, found among the powers of the least `b` outside `C_G(Q)`.
pub fn verify_meets_q(d: &JacksonData) -> Verdict {
    let g = &d.g;
    let a_sub = d.a_subgroup();
    let b = (0..g.order()).find(|&x| !d.cgq.contains(x));
    let b_powers: Vec<usize> = match b {
        Some(b) => (0..d.p as u64).map(|i| g.pow(b, i)).collect(),
        None => vec![0],
    };
    let meeting: Vec<&SubgroupSet> = d.family.members().iter().filter(|h| !h.meets_trivially(&d.q)).collect();
    let found: Vec<Option<String>> = meeting
        .par_iter()
        .map(|h| {
            if !h.is_subgroup_of(&d.cgq) {
                return Some(format!("H={} meets Q but is not in C_G(Q)", h.tag()));
            }
            let ok = b_powers.iter().any(|&x| h.conjugate(x).intersection(&d.q).members() == a_sub.members());
            (!ok).then(|| format!("H={}: no power of b moves H ∩ Q onto <a>", h.tag()))
        })
        .collect();
    Verdict::from_witness("meets_q_lies_in_centralizer", meeting.len(), found.into_iter().flatten().next())
        .with_data(json!({ "b": b, "members_meeting_Q": meeting.len() }))
}

/// Members outside `C_G(Q)` meet `Q` trivially, meet `C_G(Q)` in a cyclic
/// `K` of index `p`, and are cyclic, `K x C_p`, or `K ⋊ C_p` with the
/// action `k -> k^(1+p^(n-1))` (matched against model groups).
pub fn verify_outside_centralizer(d: &JacksonData) -> Verdict {
    let p = d.p;
    let outside: Vec<&SubgroupSet> = d.family.members().iter().filter(|h| !h.is_subgroup_of(&d.cgq)).collect();
    let results: Vec<std::result::Result<Shape, String>> = outside
        .par_iter()
        .map(|h| {
            if !h.meets_trivially(&d.q) {
                return Err(format!("H={} meets Q", h.tag()));
            }
            let k = h.intersection(&d.cgq);
            if !k.is_cyclic() {
                return Err(format!("H={}: K = H ∩ C_G(Q) is not cyclic", h.tag()));
            }
            if h.order() != k.order() * p {
                return Err(format!("H={}: |H : K| = {}", h.tag(), h.order() / k.order()));
            }
            let n = prime_power_of(k.order()).map_or(0, |(_, n)| n);
            match classify_shape(&h.as_group().0, p, n) {
                Ok(Shape::Other) => Err(format!("H={}: none of the three shapes", h.tag())),
                Ok(s) => Ok(s),
                Err(e) => Err(format!("H={}: {e}", h.tag())),
            }
        })
        .collect();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for s in results.iter().flatten() {
        *counts.entry(format!("{s:?}").to_lowercase()).or_insert(0) += 1;
    }
    let witness = results.iter().find_map(|r| r.as_ref().err().cloned());
    Verdict::from_witness("outside_centralizer_shapes", outside.len(), witness).with_data(json!({ "shapes": counts }))
}

/// The diagram of subfamilies is almost strongly connected, with the
/// supporting facts checked exhaustively.
pub fn verify_connectivity(d: &JacksonData) -> Verdict {
    let diag = &d.quadruple.subfamilies;
    let asc = almost_strongly_connected(diag, &d.family);
    let fams = diag.families();
    let m = d.elist.reps.len();
    let mut problems: Vec<String> = Vec::new();
    let uncovered: Vec<&SubgroupSet> =
        d.family.members().iter().filter(|h| fams.iter().all(|f| !f.contains(h))).collect();
    if let Some(h) = uncovered.iter().find(|h| !h.is_cyclic()) {
        problems.push(format!("H={} lies in no subfamily and is not cyclic", h.tag()));
    }
    if let Some(h) = uncovered.iter().find(|h| d.tags.of(h).map(|t| t.base) != Some(TypeTag::B)) {
        problems.push(format!("H={} lies in no subfamily and is not of type B", h.tag()));
    }
    for i in 0..=m {
        for j in (i + 1)..=m {
            if let Some(h) = fams[i].members().iter().find(|h| fams[j].contains(h) && !h.is_cyclic()) {
                problems.push(format!("H={} is in {} and {} but not cyclic", h.tag(), fams[i].label(), fams[j].label()));
            }
        }
    }
    for (h, n) in &d.elist.not_unique {
        problems.push(format!("type E member {} has {n} rank-two elementary abelian subgroups", h.tag()));
    }
    for i in 0..m {
        for j in (i + 1)..m {
            if are_conjugate(&d.elist.reps[i], &d.elist.reps[j]) {
                problems.push(format!("E_{} and E_{} are conjugate", i + 1, j + 1));
            }
        }
    }
    for i in 0..m {
        let n = &d.normalizers[i];
        let g = &d.g;
        if let Some(h) = fams[i + 1]
            .members()
            .par_iter()
            .find_first(|h| !(0..g.order()).any(|x| h.conjugate_bits(x).is_subset(n.members())))
        {
            problems.push(format!("H={} in {} is not conjugate into N_G(E_{})", h.tag(), fams[i + 1].label(), i + 1));
        }
    }
    if let Some(h) = d.tags.noncyclic_type_c.first() {
        problems.push(format!("type C member {} is not cyclic", h.tag()));
    }
    let counts: BTreeMap<String, usize> = d.tags.counts().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    let mut v = if asc.failed() {
        Verdict::fail("almost_strongly_connected", asc.checked, asc.witness.clone().unwrap_or_default())
    } else {
        Verdict::from_witness("almost_strongly_connected", asc.checked, problems.into_iter().next())
    };
    v = v.with_data(json!({
        "nodes": diag.poset().nodes(),
        "subfamily_sizes": fams.iter().map(|f| f.len()).collect::<Vec<_>>(),
        "E_representatives": d.elist.reps.iter().map(|e| e.tag()).collect::<Vec<_>>(),
        "type_counts": counts,
        "uncovered_members": uncovered.len(),
        "readings_diverge": d.tags.readings_diverge.len(),
    }));
    v.notes.extend(asc.notes);
    v.with_note(format!(
        "type B/E split on cyclicity of H; the reading via cyclicity of K = H ∩ C_G(Q) differs on {} members",
        d.tags.readings_diverge.len()
    ))
    .with_note(format!("{} members lie in no subfamily (all cyclic, type B); covering is not expected here", uncovered.len()))
}

/// `V_chi` factors through the quadruple, plus the two character identities
/// used to prove it, checked exactly.
pub fn verify_factorization(d: &JacksonData) -> Vec<Verdict> {
    let q = &d.quadruple;
    let fact = check_factorization(&d.v_chi, q);
    let compat = check_compatible_family(&d.v_chi);
    let assign = check_assignment_compatibility(q);
    let reps = check_diagram_of_reps(q);
    vec![fact, compat, assign, reps, verify_identities(d)]
}

fn int_value(v: &Cyclotomic) -> Option<i64> {
    v.to_i64()
}

/// On each `N_G(E_i)`: `Res chi = n_e Ind W_i` on every type-E member built
/// on `E_i`, with the induced
/// values `|N:E| chi_W(g)` on order-`p` elements of `E_i` and 0 on elements
/// of larger order, and `chi_W` equal to 0 on `C_i \ 1` and `-p` off
/// `C_G(Q)`. On `C_G(Q)`: `n_a Ind chi_a` is `p(p-1)|G|` at 1, `-p|G|` on
/// the rest of `<a>`, and 0 elsewhere.
pub fn verify_identities(d: &JacksonData) -> Verdict {
    let g = &d.g;
    let p = d.p as i64;
    let order = g.order() as i64;
    let mut checked = 0;
    let mut whole_normalizer = Vec::new();
    let mut problem: Option<String> = None;
    let mut note = |s: String| {
        if problem.is_none() {
            problem = Some(s);
        }
    };
    for (i, e) in d.elist.reps.iter().enumerate() {
        let n = &d.normalizers[i];
        let res = d.chi.restrict(n);
        // recomputed, so that the identities stand apart from the bundle
        let rho = match rho_e(n, e, &d.c_list[i], d.p, d.n_e[i]) {
            Ok(r) => r,
            Err(err) => {
                note(format!("rho_e{}: {err}", i + 1));
                continue;
            }
        };
        let rho = &rho;
        let res = match res {
            Ok(r) => r,
            Err(err) => {
                note(format!("restriction to N_G(E_{}): {err}", i + 1));
                continue;
            }
        };
        // The equality is needed, and holds, on the type-E members built on
        // E_i; elsewhere in N_G(E_i) it may fail, which is recorded.
        let tops: Vec<&SubgroupSet> =
            d.elist.of_member.iter().filter(|(_, (et, _))| et == e).map(|(t, _)| t).collect();
        let mut off_members = Vec::new();
        for x in n.elements() {
            let lx = n.local_index(x).expect("member");
            if res.value(lx) == rho.value(lx) {
                continue;
            }
            if tops.iter().any(|t| t.contains(x)) || e.contains(x) {
                note(format!("Res chi and rho_e{} differ at {x}, inside a member built on E_{}", i + 1, i + 1));
            } else {
                off_members.push(x);
            }
        }
        whole_normalizer.push(json!({
            "node": format!("e{}", i + 1),
            "normalizer_order": n.order(),
            "elements_where_restriction_differs": off_members.len(),
            "first": off_members.first(),
        }));
        let index = (n.order() / e.order()) as i64;
        let w = match w_character(e, &d.c_list[i], d.p) {
            Ok(w) => w,
            Err(err) => {
                note(format!("W_{}: {err}", i + 1));
                continue;
            }
        };
        let ne = d.n_e[i] as i64;
        for x in n.elements() {
            checked += 1;
            let lx = n.local_index(x).expect("member");
            let ind = int_value(rho.value(lx)).map(|v| v / ne);
            if ind.map(|v| v * ne) != int_value(rho.value(lx)) {
                note(format!("rho_e{} is not divisible by n_e at {x}", i + 1));
                continue;
            }
            let o = g.element_order(x) as i64;
            if o > p && ind != Some(0) {
                note(format!("Ind W_{} is {ind:?} at {x} of order {o}", i + 1));
            }
            if let Some(le) = e.local_index(x) {
                let wv = int_value(w.value(le));
                if x != 0 {
                    let expect = if d.cgq.contains(x) { 0 } else { -p };
                    if wv != Some(expect) {
                        note(format!("chi_W{} is {wv:?} at {x}, expected {expect}", i + 1));
                    }
                }
                if o == p && ind != wv.map(|w| index * w) {
                    note(format!("Ind W_{} at {x} is {ind:?}, expected |N:E| chi_W = {:?}", i + 1, wv.map(|w| index * w)));
                }
            }
        }
    }
    let a_sub = d.a_subgroup();
    let rho_a = match rho_a(&d.cgq, &a_sub, d.n_a) {
        Ok(r) => r,
        Err(err) => return Verdict::fail("proof_identities", checked, format!("rho_a: {err}")),
    };
    for x in d.cgq.elements() {
        checked += 1;
        let lx = d.cgq.local_index(x).expect("member");
        let v = int_value(rho_a.value(lx));
        let expect = if x == 0 {
            p * (p - 1) * order
        } else if a_sub.contains(x) {
            -p * order
        } else {
            0
        };
        if v != Some(expect) {
            note(format!("n_a Ind chi_a at {x} is {v:?}, expected {expect}"));
        }
    }
    let differs = whole_normalizer.iter().any(|v| v["elements_where_restriction_differs"] != 0);
    let v = Verdict::from_witness("proof_identities", checked, problem)
        .with_data(json!({ "whole_normalizer": whole_normalizer }));
    if differs {
        v.with_note(
            "Res chi and n_e Ind W_i differ on some elements of N_G(E_i) outside every member built on E_i \
             (order-p elements of N_G(E_i) \\ E_i off C_G(Q)); the factorization only uses the members",
        )
    } else {
        v
    }
}

/// Nonidentity elements of `Q \ <c>` that the case formula would not cover
/// under the literal reading of the center of `Q`.
pub fn literal_reading_gap(d: &JacksonData) -> usize {
    let cs = d.c_subgroup();
    d.q.elements().filter(|&x| !cs.contains(x)).count()
}

/// Element-wise recomputation of `chi` agrees with the class-wise store.
pub fn chi_is_class_constant(d: &JacksonData) -> bool {
    let cs = d.c_subgroup();
    (0..d.g.order()).all(|x| {
        Cyclotomic::from_int(d.g.exponent(), jackson_value(&d.g, &d.q, &cs, &d.cgq, &d.center, x)) == *d.chi.value(x)
    })
}

/// Copy of the data with `rho_d` multiplied by `factor`.
pub fn scale_rep(d: &JacksonData, node: usize, factor: i64) -> JacksonData {
    let mut out = d.clone();
    out.quadruple.reps[node] = out.quadruple.reps[node].scale(factor);
    out
}

/// `chi` with the value on class `k` replaced by `value`.
pub fn corrupt_chi(d: &JacksonData, k: usize, value: i64) -> ClassFunction {
    d.chi.with_value(k, Cyclotomic::from_int(d.g.exponent(), value))
}

/// Whether a rational class function value is zero (helper for reports).
pub fn is_zero_value(v: &Cyclotomic) -> bool {
    v.to_rational().is_some_and(|r| r.is_zero())
}

#[cfg(test)]
mod tests {
    use std::sync::OnceLock;

    use super::*;
    use crate::catalog::{cyclic, elementary_abelian, extraspecial5, heisenberg};

    fn data() -> &'static JacksonData {
        static D: OnceLock<JacksonData> = OnceLock::new();
        D.get_or_init(|| JacksonData::build(&extraspecial5(3).unwrap()).unwrap())
    }

    #[test]
    fn hypotheses_are_enforced() {
        assert!(matches!(JacksonData::build(&cyclic(9).unwrap()), Err(Error::HypothesisViolation(_))));
        assert!(matches!(JacksonData::build(&heisenberg(3).unwrap()), Err(Error::HypothesisViolation(_))));
        let e = elementary_abelian(3, 3).unwrap();
        assert!(Hypotheses::of(&e).failure().unwrap().contains("center"));
        assert!(matches!(JacksonData::build(&elementary_abelian(2, 3).unwrap()), Err(Error::EvenPrime)));
    }

    #[test]
    fn normal_q_in_small_groups() {
        let g = cyclic(9).unwrap();
        let all = all_subgroups(&g, None).unwrap();
        assert!(matches!(find_normal_q(&g, &all), Err(Error::NoSuchQ)));
        let e = elementary_abelian(3, 3).unwrap();
        let all = all_subgroups(&e, None).unwrap();
        let (q, _, _) = find_normal_q(&e, &all).unwrap();
        let least = all.iter().find(|h| h.order() == 9).unwrap();
        assert_eq!(&q, least);
    }

    #[test]
    fn chi_values_on_extraspecial() {
        let d = data();
        assert_eq!(d.chi.degree().to_i64(), Some(1458));
        assert!(d.q.contains(d.c) && d.center.contains(d.c));
        assert_eq!(d.chi.value(d.a).to_i64(), Some(-729));
        assert_eq!(d.chi.value(d.c).to_i64(), Some(0));
        assert_eq!(d.cgq.index(), 3);
        assert_eq!(d.n_a, 27);
        assert!(chi_is_class_constant(d));
        assert!(verify_setup(d).passed());
        for (n, ne) in d.normalizers.iter().zip(&d.n_e) {
            assert_eq!(ne * n.order(), 3 * 243);
        }
    }

    #[test]
    fn members_have_rank_at_most_two() {
        let d = data();
        assert!(d.family.members().iter().all(|h| rank(h).unwrap() <= 2));
    }

    #[test]
    fn restrictions_and_freeness() {
        let (i, ii) = verify_restrictions(data());
        assert!(i.passed(), "{i:?}");
        assert!(ii.passed(), "{ii:?}");
    }

    #[test]
    fn structural_checks() {
        let d = data();
        for v in [verify_meets_q(d), verify_outside_centralizer(d), verify_connectivity(d)] {
            assert!(v.passed(), "{v:?}");
        }
    }

    #[test]
    fn factorization_and_identities() {
        for v in verify_factorization(data()) {
            assert!(v.passed(), "{v:?}");
        }
    }

    #[test]
    fn perturbations_fail_where_expected() {
        let d = data();
        let k = d.g.classes().class_of(d.a);
        let bad = d.with_chi(corrupt_chi(d, k, -728)).unwrap();
        let (i, _) = verify_restrictions(&bad);
        assert!(i.failed() && i.witness.is_some());
        let scaled = scale_rep(d, 0, 2);
        let v = verify_factorization(&scaled);
        assert!(v[0].failed() && v[0].witness.is_some());
        assert!(v[1..].iter().all(|v| v.passed()));
    }
}
