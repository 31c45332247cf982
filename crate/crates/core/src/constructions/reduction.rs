//! When the center has rank at least two, two independent central elements
//! of order `p` cut the isotropy of the joint action down to rank one.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::error::Result;
use crate::group::{prime_power_of, Group};
use crate::subgroup::{all_subgroups, center, closure, rank};
use crate::verdict::Verdict;

/// Least central `c` of order `p`, then the least central `c'` of order `p`
/// outside `<c>`; `None` when the center is cyclic.
pub fn independent_central_pair(g: &Arc<Group>) -> Option<(usize, usize)> {
    let (p, _) = prime_power_of(g.order())?;
    let z = center(g);
    let c = z.elements().find(|&x| g.element_order(x) == p)?;
    let cs = closure(g, [c]);
    let c2 = z.elements().find(|&x| g.element_order(x) == p && !cs.contains(x))?;
    Some((c, c2))
}

/// Every subgroup meeting `<c, c'>` trivially has rank at most one.
pub fn noncyclic_center_reduction(g: &Arc<Group>) -> Result<Verdict> {
    const NAME: &str = "noncyclic_center_reduction";
    if prime_power_of(g.order()).is_none() {
        return Ok(Verdict::inapplicable(NAME, "group is not a p-group"));
    }
    let Some((c, c2)) = independent_central_pair(g) else {
        return Ok(Verdict::inapplicable(NAME, "center is cyclic"));
    };
    let pair = closure(g, [c, c2]);
    let all = all_subgroups(g, None)?;
    let avoiding: Vec<_> = all.iter().filter(|h| h.meets_trivially(&pair)).collect();
    let ranks: Vec<Result<u32>> = avoiding.par_iter().map(|h| rank(h)).collect();
    let mut witness = None;
    for (h, r) in avoiding.iter().zip(&ranks) {
        match r {
            Ok(r) if *r <= 1 => {}
            Ok(r) => {
                witness = Some(format!("{} meets <c, c'> trivially but has rank {r}", h.tag()));
                break;
            }
            Err(e) => {
                witness = Some(format!("{}: {e}", h.tag()));
                break;
            }
        }
    }
    let g_rank = rank(&crate::subgroup::SubgroupSet::whole(g))?;
    let mut v = Verdict::from_witness(NAME, avoiding.len(), witness)
        .with_data(json!({ "c": c, "c_prime": c2, "rank": g_rank, "avoiding_subgroups": avoiding.len() }));
    if g_rank != 3 {
        v = v.with_note(format!("group rank is {g_rank}; the reduction is stated for rank three"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, direct_product, elementary_abelian, extraspecial5, heisenberg};
    use crate::verdict::Status;

    #[test]
    fn elementary_and_product_pass() {
        assert!(noncyclic_center_reduction(&elementary_abelian(3, 3).unwrap()).unwrap().passed());
        let g = direct_product(&[cyclic(3).unwrap(), heisenberg(3).unwrap()]).unwrap();
        let v = noncyclic_center_reduction(&g).unwrap();
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn cyclic_center_is_inapplicable() {
        let v = noncyclic_center_reduction(&extraspecial5(3).unwrap()).unwrap();
        assert_eq!(v.status, Status::Inapplicable);
    }
}
