use rayon::prelude::*;

use super::family::SubgroupFamily;
use super::poset::PosetDiagram;
use crate::error::{Error, Result};
use crate::group::prime_power_of;
use crate::subgroup::SubgroupSet;
use crate::verdict::Verdict;

/// A subfamily `H_d` for every node `d` of a poset, increasing along the
/// relations.
#[derive(Debug, Clone)]
pub struct SubfamilyDiagram {
    poset: PosetDiagram,
    families: Vec<SubgroupFamily>,
}

impl SubfamilyDiagram {
    pub fn new(poset: PosetDiagram, families: Vec<SubgroupFamily>) -> Result<Self> {
        if poset.len() != families.len() {
            return Err(Error::Invalid("one subfamily per node is required".into()));
        }
        for &(x, y) in poset.relations() {
            if !families[x].is_subfamily_of(&families[y]) {
                return Err(Error::NotClosed(
                    families[x].label().to_string(),
                    format!("not contained in {}", families[y].label()),
                ));
            }
        }
        Ok(SubfamilyDiagram { poset, families })
    }

    pub fn poset(&self) -> &PosetDiagram {
        &self.poset
    }

    pub fn families(&self) -> &[SubgroupFamily] {
        &self.families
    }

    pub fn family(&self, d: usize) -> &SubgroupFamily {
        &self.families[d]
    }

    /// Nodes `d` with `H` in `H_d`.
    pub fn nodes_containing(&self, h: &SubgroupSet) -> Vec<usize> {
        (0..self.families.len()).filter(|&d| self.families[d].contains(h)).collect()
    }

    /// The full subposet `D_H = {d : H in H_d}`.
    pub fn poset_dh(&self, h: &SubgroupSet) -> PosetDiagram {
        self.poset.induced(&self.nodes_containing(h))
    }

    /// `union_d H_d = H`.
    pub fn covers(&self, universe: &SubgroupFamily) -> Verdict {
        let missing = universe.members().iter().find(|h| self.families.iter().all(|f| !f.contains(h)));
        let extra = self.families.iter().flat_map(|f| f.members()).find(|h| !universe.contains(h));
        let witness = missing
            .map(|h| format!("{} lies in no subfamily", h.tag()))
            .or_else(|| extra.map(|h| format!("{} is not in the family", h.tag())));
        Verdict::from_witness("covering", universe.len(), witness)
    }
}

/// Cyclic of prime-power order; the trivial group counts (order `p^0`).
pub fn is_cyclic_prime_power(h: &SubgroupSet) -> bool {
    h.is_trivial() || (prime_power_of(h.order()).is_some() && h.is_cyclic())
}

fn connectivity(diagram: &SubfamilyDiagram, universe: &SubgroupFamily, almost: bool) -> Verdict {
    let name = if almost { "almost_strongly_connected" } else { "strongly_connected" };
    let failures: Vec<Option<String>> = universe
        .members()
        .par_iter()
        .map(|h| {
            let dh = diagram.poset_dh(h);
            if dh.simply_connected() {
                return None;
            }
            if almost && is_cyclic_prime_power(h) {
                return (!dh.is_points())
                    .then(|| format!("{}: cyclic, but D_H = {} has edges", h.tag(), dh.describe()));
            }
            Some(format!("{}: D_H = {} is not simply connected", h.tag(), dh.describe()))
        })
        .collect();
    let exempt = if almost { universe.members().iter().filter(|h| is_cyclic_prime_power(h)).count() } else { 0 };
    Verdict::from_witness(name, universe.len(), failures.into_iter().flatten().next())
        .with_note(format!("{exempt} cyclic prime-power members exempt"))
}

/// Every `D_H`, `H` in the family, has a simply connected realization.
pub fn strongly_connected(diagram: &SubfamilyDiagram, universe: &SubgroupFamily) -> Verdict {
    connectivity(diagram, universe, false)
}

/// As [`strongly_connected`], except that for cyclic prime-power `H` the
/// subposet `D_H` need only be empty or a disjoint union of points.
pub fn almost_strongly_connected(diagram: &SubfamilyDiagram, universe: &SubgroupFamily) -> Verdict {
    connectivity(diagram, universe, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::heisenberg;
    use crate::subgroup::all_subgroups;

    #[test]
    fn two_incomparable_nodes_disconnect_a_noncyclic_member() {
        let g = heisenberg(3).unwrap();
        let all = all_subgroups(&g, None).unwrap();
        let e = all.iter().find(|h| h.order() == 9).unwrap().clone();
        let subs: Vec<SubgroupSet> = all.iter().filter(|s| s.is_subgroup_of(&e)).cloned().collect();
        let fam = SubgroupFamily::new(&g, "sub", subs.clone(), &all);
        // a single order-9 subgroup is normal (index 3), so this is a family
        let fam = fam.unwrap();
        let poset = PosetDiagram::discrete(vec!["x".into(), "y".into()]);
        let d = SubfamilyDiagram::new(poset, vec![fam.clone(), fam.clone()]).unwrap();
        let v = strongly_connected(&d, &fam);
        assert!(v.failed());
        let v = almost_strongly_connected(&d, &fam);
        assert!(v.failed());
        assert!(v.witness.unwrap().starts_with(&e.tag()));
    }
}
