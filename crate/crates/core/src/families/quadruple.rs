//! Diagrams of finite groups with representations and assignments, and the
//! checks that a compatible family factors through them.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::diagram::SubfamilyDiagram;
use super::family::SubgroupFamily;
use super::poset::PosetDiagram;
use crate::class_function::ClassFunction;
use crate::embedding::{EmbeddingKind, GroupEmbedding};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::subgroup::SubgroupSet;
use crate::verdict::Verdict;

/// One class function `V_H` per member of a family.
#[derive(Clone, Debug)]
pub struct CompatibleFamily {
    family: SubgroupFamily,
    values: Vec<ClassFunction>,
}

impl CompatibleFamily {
    /// `values[i]` lives on the standalone group of `family.members()[i]`.
    pub fn new(family: SubgroupFamily, values: Vec<ClassFunction>) -> Result<Self> {
        if values.len() != family.len() {
            return Err(Error::Invalid("one class function per member".into()));
        }
        for (h, v) in family.members().iter().zip(&values) {
            if !v.group().same_as(&h.as_group().0) {
                return Err(Error::GroupMismatch);
            }
        }
        Ok(CompatibleFamily { family, values })
    }

    /// Restrictions of a class function on the whole group.
    pub fn from_class_function(family: SubgroupFamily, f: &ClassFunction) -> Result<Self> {
        let values = family.members().par_iter().map(|h| f.restrict(h)).collect::<Result<Vec<_>>>()?;
        Ok(CompatibleFamily { family, values })
    }

    pub fn family(&self) -> &SubgroupFamily {
        &self.family
    }

    pub fn values(&self) -> &[ClassFunction] {
        &self.values
    }

    pub fn get(&self, h: &SubgroupSet) -> Option<&ClassFunction> {
        self.family.position(h).map(|i| &self.values[i])
    }

    /// Copy with `V_H` replaced.
    pub fn with_value(&self, h: &SubgroupSet, v: ClassFunction) -> Result<Self> {
        let i = self.family.position(h).ok_or_else(|| Error::Invalid(format!("{} not in family", h.tag())))?;
        let mut out = self.clone();
        out.values[i] = v;
        Ok(out)
    }
}

/// Compares `v_k` transported along `h -> x h x^-1` (as a map `H -> K`)
/// with `v_h` on class representatives of `H`; returns the first local
/// class representative where they differ.
fn transported_mismatch(h: &SubgroupSet, v_h: &ClassFunction, k: &SubgroupSet, v_k: &ClassFunction, x: usize) -> Option<usize> {
    let g = h.parent();
    let (hg, emb) = h.as_group();
    let classes = hg.classes();
    let found = classes.representatives().find(|&t| {
        let y = g.conj(x, emb.apply(t));
        match k.local_index(y) {
            Some(ly) => v_k.value(ly) != v_h.value_on_class(classes.class_of(t)),
            None => true,
        }
    });
    found
}

/// Every conjugation map `c_g: H -> K` with `gHg^-1 <= K` inside the family
/// carries `V_K` to `V_H`.
///
/// Each such map is an isomorphism `H -> gHg^-1` followed by an inclusion,
/// so both kinds are checked separately: all `g` in `G` against every
/// member, then every inclusion between members.
pub fn check_compatible_family(v: &CompatibleFamily) -> Verdict {
    let fam = &v.family;
    let members = fam.members();
    let g = fam.group();
    let conj: Vec<Option<String>> = members
        .par_iter()
        .enumerate()
        .map(|(i, h)| {
            for x in 0..g.order() {
                let c = h.conjugate_bits(x);
                let Some(j) = fam.position_bits(&c) else {
                    return Some(format!("g={x}, H={}: conjugate not in family", h.tag()));
                };
                if let Some(t) = transported_mismatch(h, &v.values[i], &members[j], &v.values[j], x) {
                    return Some(format!("g={x}, H={}, K={}, at local element {t}", h.tag(), members[j].tag()));
                }
            }
            None
        })
        .collect();
    let incl: Vec<Option<String>> = members
        .par_iter()
        .enumerate()
        .map(|(j, k)| {
            for (i, h) in members.iter().enumerate() {
                if h.order() < k.order() && k.order() % h.order() == 0 && h.is_subgroup_of(k) {
                    if let Some(t) = transported_mismatch(h, &v.values[i], k, &v.values[j], 0) {
                        return Some(format!("g=0, H={}, K={}, at local element {t}", h.tag(), k.tag()));
                    }
                }
            }
            None
        })
        .collect();
    let witness = conj.into_iter().chain(incl).flatten().next();
    Verdict::from_witness("compatible_family", members.len(), witness)
}

/// The quadruple `(Gamma_*, rho_*, H_*, A_*)` over a poset of dimension at
/// most one. `groups[d]` is `Gamma_d` as a subgroup of `G`; `reps[d]` is a
/// class function on its standalone group; `witnesses[d][H] = g` defines
/// `alpha_H^d: h -> g h g^-1` into `Gamma_d`. Edge maps are inclusions
/// `Gamma_x <= Gamma_y` unless given explicitly.
#[derive(Clone, Debug)]
pub struct QuadrupleBundle {
    pub subfamilies: SubfamilyDiagram,
    pub groups: Vec<SubgroupSet>,
    pub edge_maps: Vec<GroupEmbedding>,
    pub reps: Vec<ClassFunction>,
    pub witnesses: Vec<BTreeMap<SubgroupSet, usize>>,
}

impl QuadrupleBundle {
    pub fn new(
        subfamilies: SubfamilyDiagram,
        groups: Vec<SubgroupSet>,
        reps: Vec<ClassFunction>,
        witnesses: Vec<BTreeMap<SubgroupSet, usize>>,
    ) -> Result<Self> {
        let n = subfamilies.poset().len();
        if groups.len() != n || reps.len() != n || witnesses.len() != n {
            return Err(Error::Invalid("bundle data must have one entry per node".into()));
        }
        for (d, (gamma, rho)) in groups.iter().zip(&reps).enumerate() {
            if !rho.group().same_as(&gamma.as_group().0) {
                return Err(Error::Invalid(format!("rho_{d} does not live on Gamma_{d}")));
            }
        }
        let mut edge_maps = Vec::new();
        for &(x, y) in subfamilies.poset().relations() {
            if !groups[x].is_subgroup_of(&groups[y]) {
                return Err(Error::Invalid(format!("Gamma_{x} is not contained in Gamma_{y}")));
            }
            let (gx, _) = groups[x].as_group();
            let (gy, _) = groups[y].as_group();
            let map = groups[x].elements().map(|e| groups[y].local_index(e).expect("contained")).collect();
            edge_maps.push(GroupEmbedding::new(gx, gy, map, EmbeddingKind::Inclusion)?);
        }
        let bundle = QuadrupleBundle { subfamilies, groups, edge_maps, reps, witnesses };
        for d in 0..n {
            for h in bundle.subfamilies.family(d).members() {
                bundle.alpha(d, h)?;
            }
        }
        Ok(bundle)
    }

    pub fn poset(&self) -> &PosetDiagram {
        self.subfamilies.poset()
    }

    pub fn gamma(&self, d: usize) -> Arc<Group> {
        self.groups[d].as_group().0
    }

    pub fn witness(&self, d: usize, h: &SubgroupSet) -> Option<usize> {
        self.witnesses[d].get(h).copied()
    }

    /// `alpha_H^d` as an embedding of standalone groups.
    pub fn alpha(&self, d: usize, h: &SubgroupSet) -> Result<GroupEmbedding> {
        let x = self
            .witness(d, h)
            .ok_or_else(|| Error::Invalid(format!("no assignment for {} at node {d}", h.tag())))?;
        let g = h.parent();
        let gamma = &self.groups[d];
        let map = h
            .elements()
            .map(|e| {
                gamma.local_index(g.conj(x, e)).ok_or_else(|| {
                    Error::NotHomomorphism(format!("{} conjugated by {x} leaves Gamma_{d}", h.tag()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GroupEmbedding::new(h.as_group().0, self.gamma(d), map, EmbeddingKind::ConjugationThenInclusion { witness: x })
    }

    /// `rho_d` pulled back along `alpha_H^d`.
    pub fn pullback(&self, d: usize, h: &SubgroupSet) -> Result<ClassFunction> {
        self.reps[d].restrict_along(&self.alpha(d, h)?)
    }
}

/// `rho_x` and `rho_y ∘ mu_{x,y}` have equal characters on every edge.
pub fn check_diagram_of_reps(b: &QuadrupleBundle) -> Verdict {
    let rels = b.poset().relations();
    for (&(x, y), mu) in rels.iter().zip(&b.edge_maps) {
        let pulled = match b.reps[y].restrict_along(mu) {
            Ok(f) => f,
            Err(e) => return Verdict::fail("diagram_of_reps", rels.len(), format!("edge {x}<{y}: {e}")),
        };
        if pulled.degree() != b.reps[x].degree() {
            return Verdict::fail(
                "diagram_of_reps",
                rels.len(),
                format!("edge {x}<{y}: degree {} vs {}", b.reps[x].degree(), pulled.degree()),
            );
        }
        if let Some(k) = (0..pulled.values().len()).find(|&k| pulled.value_on_class(k) != b.reps[x].value_on_class(k)) {
            let rep = pulled.group().classes().representative(k);
            return Verdict::fail("diagram_of_reps", rels.len(), format!("edge {x}<{y}: characters differ at local element {rep}"));
        }
    }
    Verdict::pass("diagram_of_reps", rels.len())
}

/// Least `gamma` in `Gamma` with `gamma a gamma^-1 = x a x^-1` for every
/// `a` in `gens`.
fn find_gamma(g: &Group, gamma: &SubgroupSet, gens: &[usize], x: usize) -> Option<usize> {
    let targets: Vec<usize> = gens.iter().map(|&a| g.conj(x, a)).collect();
    if gamma.contains(x) {
        return Some(x);
    }
    gamma.elements().find(|&c| gens.iter().zip(&targets).all(|(&a, &t)| g.conj(c, a) == t))
}

/// Per node: for every `c_g: H -> K` inside `H_d` there is `gamma` in
/// `Gamma_d` with `alpha_K ∘ c_g = c_gamma ∘ alpha_H`. Per edge `x < y`:
/// `alpha_H^y = c_gamma ∘ mu_{x,y} ∘ alpha_H^x` for some `gamma` in `Gamma_y`.
pub fn check_assignment_compatibility(b: &QuadrupleBundle) -> Verdict {
    let name = "assignment_compatibility";
    let mut checked = 0;
    for d in 0..b.poset().len() {
        let fam = b.subfamilies.family(d);
        let gamma = &b.groups[d];
        let g = gamma.parent();
        let members = fam.members();
        checked += members.len();
        let found: Vec<Option<String>> = members
            .par_iter()
            .map(|h| {
                let wh = b.witness(d, h)?;
                let gens: Vec<usize> = h.generators().iter().map(|&e| g.conj(wh, e)).collect();
                let whi = g.inv(wh);
                // conjugations h -> g h g^-1
                for x in 0..g.order() {
                    let kb = h.conjugate_bits(x);
                    let Some(j) = fam.position_bits(&kb) else {
                        return Some(format!("node {d}: conjugate of {} by {x} not in H_d", h.tag()));
                    };
                    let wk = b.witness(d, &members[j])?;
                    let y = g.mul(g.mul(wk, x), whi);
                    if find_gamma(g, gamma, &gens, y).is_none() {
                        return Some(format!("node {d}: no gamma for c_{x}: {} -> {}", h.tag(), members[j].tag()));
                    }
                }
                // inclusions h <= k
                for k in members.iter().filter(|k| k.order() > h.order() && h.is_subgroup_of(k)) {
                    let wk = b.witness(d, k)?;
                    let y = g.mul(wk, whi);
                    if find_gamma(g, gamma, &gens, y).is_none() {
                        return Some(format!("node {d}: no gamma for inclusion {} <= {}", h.tag(), k.tag()));
                    }
                }
                None
            })
            .collect();
        if let Some(w) = found.into_iter().flatten().next() {
            return Verdict::fail(name, checked, w);
        }
        if let Some(h) = members.iter().find(|h| b.witness(d, h).is_none()) {
            return Verdict::fail(name, checked, format!("node {d}: {} has no assignment", h.tag()));
        }
    }
    for &(x, y) in b.poset().relations() {
        let gamma = &b.groups[y];
        let g = gamma.parent();
        for h in b.subfamilies.family(x).members() {
            checked += 1;
            let (Some(wx), Some(wy)) = (b.witness(x, h), b.witness(y, h)) else {
                return Verdict::fail(name, checked, format!("edge {x}<{y}: {} lacks an assignment", h.tag()));
            };
            // mu is an inclusion, so mu ∘ alpha^x is conjugation by wx
            let gens: Vec<usize> = h.generators().iter().map(|&e| g.conj(wx, e)).collect();
            let z = g.mul(wy, g.inv(wx));
            if find_gamma(g, gamma, &gens, z).is_none() {
                return Verdict::fail(name, checked, format!("edge {x}<{y}: alpha^{y}_H differs from mu ∘ alpha^{x}_H for {}", h.tag()));
            }
        }
    }
    Verdict::pass(name, checked)
}

/// `V_H = rho_d ∘ alpha_H^d` for every node `d` and `H` in `H_d`.
pub fn check_factorization(v: &CompatibleFamily, b: &QuadrupleBundle) -> Verdict {
    let name = "factorization";
    let mut checked = 0;
    for d in 0..b.poset().len() {
        let members = b.subfamilies.family(d).members();
        checked += members.len();
        let found: Vec<Option<String>> = members
            .par_iter()
            .map(|h| {
                let node = &b.poset().nodes()[d];
                let Some(vh) = v.get(h) else {
                    return Some(format!("node {node}: {} not in the family of V", h.tag()));
                };
                let pulled = match b.pullback(d, h) {
                    Ok(f) => f,
                    Err(e) => return Some(format!("node {node}, H={}: {e}", h.tag())),
                };
                if pulled.degree() != vh.degree() {
                    return Some(format!("node {node}, H={}: degree {} vs {}", h.tag(), pulled.degree(), vh.degree()));
                }
                let k = (0..pulled.values().len()).find(|&k| pulled.value_on_class(k) != vh.value_on_class(k))?;
                let rep = pulled.group().classes().representative(k);
                Some(format!(
                    "node {node}, H={}: at local element {rep}, rho gives {} but V gives {}",
                    h.tag(),
                    pulled.value_on_class(k),
                    vh.value_on_class(k)
                ))
            })
            .collect();
        if let Some(w) = found.into_iter().flatten().next() {
            return Verdict::fail(name, checked, w);
        }
    }
    Verdict::pass(name, checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::heisenberg;
    use crate::character_table::CharacterTable;
    use crate::subgroup::all_subgroups;

    fn one_node(g: &Arc<Group>, rho: &ClassFunction) -> (CompatibleFamily, QuadrupleBundle) {
        let all = all_subgroups(g, None).unwrap();
        let fam = SubgroupFamily::new(g, "all", all.clone(), &all).unwrap();
        let v = CompatibleFamily::from_class_function(fam.clone(), rho).unwrap();
        let diag = SubfamilyDiagram::new(PosetDiagram::discrete(vec!["x".into()]), vec![fam.clone()]).unwrap();
        let whole = SubgroupSet::whole(g);
        let rho_local = rho.restrict(&whole).unwrap();
        let w: BTreeMap<SubgroupSet, usize> = fam.members().iter().map(|h| (h.clone(), 0)).collect();
        let b = QuadrupleBundle::new(diag, vec![whole], vec![rho_local], vec![w]).unwrap();
        (v, b)
    }

    #[test]
    fn single_node_factorization() {
        let g = heisenberg(3).unwrap();
        let t = CharacterTable::compute(&g).unwrap();
        let chi = t.irreducibles().last().unwrap().clone();
        let (v, b) = one_node(&g, &chi);
        assert!(check_compatible_family(&v).passed());
        assert!(check_diagram_of_reps(&b).passed());
        assert!(check_assignment_compatibility(&b).passed());
        assert!(check_factorization(&v, &b).passed());
        let mut scaled = b.clone();
        scaled.reps[0] = scaled.reps[0].scale(2);
        let f = check_factorization(&v, &scaled);
        assert!(f.failed());
        assert!(f.witness.unwrap().contains("degree"));
    }

    #[test]
    fn replaced_member_breaks_compatibility() {
        let g = heisenberg(3).unwrap();
        let (v, _) = one_node(&g, &ClassFunction::regular(&g));
        let h = v.family().members().iter().find(|h| h.order() == 3 && !h.is_normal()).unwrap().clone();
        let (hg, _) = h.as_group();
        let other = ClassFunction::from_integers(&hg, |x| if x == 0 { 27 } else { 0 });
        assert!(check_compatible_family(&v.with_value(&h, other).unwrap()).passed());
        let t = CharacterTable::compute(&hg).unwrap();
        let bad = v.with_value(&h, t.irreducibles()[1].scale(27)).unwrap();
        let verdict = check_compatible_family(&bad);
        assert!(verdict.failed(), "{verdict:?}");
    }
}
