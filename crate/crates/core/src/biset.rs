//! Fixed cosets `(G/H)^L`, the right action of the Weyl group on them, and
//! the composition map
//! `(G/H)^K x_{W_G(K)} (G/K)^L -> (G/H)^L, (xH, yK) -> yxH`
//! for cyclic `H` of prime-power order with index-`p` subgroup `K`.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::prime_power_of;
use crate::subgroup::{all_subgroups, normalizer, SubgroupSet};
use crate::verdict::Verdict;

/// Largest group order swept exhaustively.
pub const SWEEP_CAP: usize = 256;

/// Left cosets `gH` labelled by their least element.
#[derive(Debug, Clone)]
pub struct Cosets {
    h: SubgroupSet,
    label: Vec<usize>,
}

impl Cosets {
    pub fn new(h: &SubgroupSet) -> Cosets {
        let g = h.parent();
        let mut label = vec![usize::MAX; g.order()];
        for x in 0..g.order() {
            if label[x] != usize::MAX {
                continue;
            }
            for y in h.elements() {
                label[g.mul(x, y)] = x;
            }
        }
        Cosets { h: h.clone(), label }
    }

    /// Least element of `xH`.
    pub fn of(&self, x: usize) -> usize {
        self.label[x]
    }

    pub fn subgroup(&self) -> &SubgroupSet {
        &self.h
    }

    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.label.iter().enumerate().filter(|(x, l)| *x == **l).map(|(x, _)| x)
    }
}

/// `(G/H)^L = {gH : g^-1 L g <= H}` with the Weyl group `N_G(H)/H`.
#[derive(Debug, Clone)]
pub struct FixedCosetSet {
    pub h: SubgroupSet,
    pub l: SubgroupSet,
    /// Least representatives, ascending.
    pub cosets: Vec<usize>,
    pub normalizer: SubgroupSet,
    labels: Cosets,
}

impl FixedCosetSet {
    pub fn weyl_order(&self) -> usize {
        self.normalizer.order() / self.h.order()
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.cosets.binary_search(&self.labels.of(x)).is_ok()
    }

    /// `gH . nH = gnH`, on least representatives.
    pub fn act(&self, coset: usize, n: usize) -> usize {
        self.labels.of(self.h.parent().mul(coset, n))
    }

    /// Least representatives of the cosets of `H` in `N_G(H)`.
    pub fn weyl_representatives(&self) -> Vec<usize> {
        self.normalizer.elements().filter(|&n| self.labels.of(n) == n).collect()
    }
}

pub fn fixed_cosets(h: &SubgroupSet, l: &SubgroupSet) -> FixedCosetSet {
    let g = h.parent();
    let labels = Cosets::new(h);
    let cosets = labels
        .representatives()
        .filter(|&x| {
            let xi = g.inv(x);
            l.elements().all(|y| h.contains(g.conj(xi, y)))
        })
        .collect();
    FixedCosetSet { h: h.clone(), l: l.clone(), cosets, normalizer: normalizer(g, h), labels }
}

/// The action is well defined on `(G/H)^L`, and no nonidentity element of
/// `W_G(H)` fixes a coset. Returns the verdict and the number of orbits.
pub fn check_weyl_freeness(f: &FixedCosetSet) -> (Verdict, usize) {
    let g = f.h.parent();
    let weyl = f.weyl_representatives();
    let mut problem = None;
    'outer: for &c in &f.cosets {
        for &n in &weyl {
            let image = f.act(c, n);
            if !f.contains(image) {
                problem = Some(format!("{c}H . {n}H leaves the fixed set"));
                break 'outer;
            }
            // independent of the representative of nH
            if let Some(h) = f.h.elements().find(|&h| f.act(c, g.mul(n, h)) != image) {
                problem = Some(format!("{c}H . {n}H depends on the representative ({h})"));
                break 'outer;
            }
            if n != 0 && image == c {
                problem = Some(format!("{n}H fixes {c}H"));
                break 'outer;
            }
        }
    }
    let orbits = if f.weyl_order() == 0 { 0 } else { f.len() / f.weyl_order() };
    if problem.is_none() && orbits * f.weyl_order() != f.len() {
        problem = Some(format!("{} cosets do not split into orbits of size {}", f.len(), f.weyl_order()));
    }
    let v = Verdict::from_witness("weyl_action_free", f.len() * weyl.len(), problem)
        .with_data(json!({ "cosets": f.len(), "weyl_order": f.weyl_order(), "orbits": orbits }));
    (v, orbits)
}

/// Counts from one verified triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct MuCounts {
    pub m: usize,
    pub s: usize,
    pub t: usize,
    pub left_classes: usize,
    pub right: usize,
}

/// `H` cyclic of order `p^n` with `n >= 1`, `K` its subgroup of index `p`,
/// `L <= K`.
pub fn validate_triple(h: &SubgroupSet, k: &SubgroupSet, l: &SubgroupSet) -> Result<()> {
    if h.is_trivial() || !h.is_cyclic() || prime_power_of(h.order()).is_none() {
        return Err(Error::BadShape(format!("H = {} is not a nontrivial cyclic p-group", h.tag())));
    }
    let (p, _) = prime_power_of(h.order()).expect("checked");
    if !k.is_subgroup_of(h) || k.order() * p != h.order() {
        return Err(Error::BadShape(format!("K = {} is not the index-{p} subgroup of H", k.tag())));
    }
    if !l.is_subgroup_of(k) {
        return Err(Error::BadShape(format!("L = {} is not contained in K", l.tag())));
    }
    Ok(())
}

/// Builds the balanced product by explicit orbits, checks that `mu` is
/// constant on them and bijective onto `(G/H)^L`, the counting identity
/// `s t = m`, the identities `(G/H)^L = N_G(L)/H` (likewise for the two
/// factors), the chain `L <= H <= N_G(H) <= N_G(L)`, and freeness of both
/// Weyl actions.
pub fn check_mu_bijection(h: &SubgroupSet, k: &SubgroupSet, l: &SubgroupSet) -> Result<(Verdict, MuCounts)> {
    validate_triple(h, k, l)?;
    let g = h.parent();
    let hk = fixed_cosets(h, k);
    let kl = fixed_cosets(k, l);
    let hl = fixed_cosets(h, l);
    let mut problems: Vec<String> = Vec::new();

    let (w1, s) = check_weyl_freeness(&hk);
    let (w2, t) = check_weyl_freeness(&kl);
    let (w3, m) = check_weyl_freeness(&hl);
    for w in [&w1, &w2, &w3] {
        if let Some(x) = &w.witness {
            problems.push(x.clone());
        }
    }

    let nl = normalizer(g, l);
    let nk = &kl.normalizer;
    let nh = &hl.normalizer;
    if !(l.is_subgroup_of(h) && h.is_subgroup_of(nh) && nh.is_subgroup_of(&nl)) {
        problems.push("L <= H <= N_G(H) <= N_G(L) fails".into());
    }
    for (f, n, name) in [(&hl, &nl, "(G/H)^L = N_G(L)/H"), (&hk, nk, "(G/H)^K = N_G(K)/H"), (&kl, &nl, "(G/K)^L = N_G(L)/K")] {
        let from_n: BTreeSet<usize> = n.elements().map(|x| f.labels.of(x)).collect();
        if from_n.len() != f.len() || !from_n.iter().all(|&c| f.contains(c)) {
            problems.push(format!("{name} fails"));
        }
    }
    if m * nh.order() != nl.order() || s * nh.order() != nk.order() || t * nk.order() != nl.order() {
        problems.push(format!("orbit counts m={m}, s={s}, t={t} disagree with the normalizer indices"));
    }
    if s * t != m {
        problems.push(format!("s t = {} but m = {m}", s * t));
    }

    // pairs (x, y) indexed as i * |kl| + j; n in N_G(K) sends (xH, yK) to (n^-1 xH, ynK)
    let nx = hk.len();
    let ny = kl.len();
    let mut x_index = vec![usize::MAX; g.order()];
    for (i, &c) in hk.cosets.iter().enumerate() {
        x_index[c] = i;
    }
    let mut y_index = vec![usize::MAX; g.order()];
    for (j, &c) in kl.cosets.iter().enumerate() {
        y_index[c] = j;
    }
    let mut uf: UnionFind<usize> = UnionFind::new(nx * ny);
    // orbits of N_G(K) are generated by its generators
    let gens = kl.normalizer.generators();
    for (i, &x) in hk.cosets.iter().enumerate() {
        for (j, &y) in kl.cosets.iter().enumerate() {
            for &n in &gens {
                let x2 = hk.labels.of(g.mul(g.inv(n), x));
                let y2 = kl.labels.of(g.mul(y, n));
                match (x_index[x2], y_index[y2]) {
                    (i2, j2) if i2 != usize::MAX && j2 != usize::MAX => {
                        uf.union(i * ny + j, i2 * ny + j2);
                    }
                    _ => problems.push(format!("W_G(K) moves ({x}H, {y}K) out of the product")),
                }
            }
        }
    }
    let mut image_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &x) in hk.cosets.iter().enumerate() {
        for (j, &y) in kl.cosets.iter().enumerate() {
            let root = uf.find(i * ny + j);
            let image = hl.labels.of(g.mul(y, x));
            if !hl.contains(image) {
                problems.push(format!("mu({x}H, {y}K) = {image}H is not L-fixed"));
            }
            match image_of.get(&root) {
                Some(&prev) if prev != image => {
                    problems.push(format!("mu is not constant on the class of ({x}H, {y}K)"));
                }
                Some(_) => {}
                None => {
                    image_of.insert(root, image);
                }
            }
        }
    }
    let classes = image_of.len();
    let images: BTreeSet<usize> = image_of.values().copied().collect();
    if images.len() != classes {
        problems.push("mu is not injective on classes".into());
    }
    if images.len() != hl.len() {
        problems.push(format!("mu hits {} of {} cosets", images.len(), hl.len()));
    }
    let counts = MuCounts { m, s, t, left_classes: classes, right: hl.len() };
    let v = Verdict::from_witness("mu_bijection", nx * ny + hl.len(), problems.into_iter().next())
        .with_data(serde_json::to_value(counts).expect("plain struct"));
    Ok((v, counts))
}

/// Every valid triple of a group: nontrivial cyclic prime-power `H`, its
/// index-`p` subgroup `K`, and each subgroup `L <= K`, in sorted order.
pub fn valid_triples(all: &[SubgroupSet]) -> Vec<(SubgroupSet, SubgroupSet, SubgroupSet)> {
    let mut out = Vec::new();
    for h in all.iter().filter(|h| !h.is_trivial() && h.is_cyclic() && prime_power_of(h.order()).is_some()) {
        let (p, _) = prime_power_of(h.order()).expect("prime power");
        let Some(k) = all.iter().find(|k| k.order() * p == h.order() && k.is_subgroup_of(h)) else {
            continue;
        };
        for l in all.iter().filter(|l| l.is_subgroup_of(k)) {
            out.push((h.clone(), k.clone(), l.clone()));
        }
    }
    out
}

/// Runs [`check_mu_bijection`] on every valid triple.
pub fn sweep_mu(g: &std::sync::Arc<crate::group::Group>) -> Result<Verdict> {
    if g.order() > SWEEP_CAP {
        return Ok(Verdict::inapplicable(
            "mu_sweep",
            format!("order {} exceeds the sweep cap of {SWEEP_CAP}; use a single triple", g.order()),
        ));
    }
    let all = all_subgroups(g, None)?;
    let triples = valid_triples(&all);
    let results: Vec<Result<(Verdict, MuCounts)>> =
        triples.par_iter().map(|(h, k, l)| check_mu_bijection(h, k, l)).collect();
    let mut witness = None;
    let mut passed = 0;
    for ((h, k, l), r) in triples.iter().zip(&results) {
        match r {
            Ok((v, _)) if v.passed() => passed += 1,
            Ok((v, _)) => {
                witness.get_or_insert(format!("H={} K={} L={}: {}", h.tag(), k.tag(), l.tag(), v.witness.clone().unwrap_or_default()));
            }
            Err(e) => {
                witness.get_or_insert(format!("H={} K={} L={}: {e}", h.tag(), k.tag(), l.tag()));
            }
        }
    }
    Ok(Verdict::from_witness("mu_sweep", triples.len(), witness).with_data(json!({
        "triples": triples.len(),
        "passed": passed,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, elementary_abelian, heisenberg};
    use crate::subgroup::{center, closure};

    #[test]
    fn fixed_sets_in_heisenberg() {
        let g = heisenberg(3).unwrap();
        let all = all_subgroups(&g, None).unwrap();
        let z = center(&g);
        let h = all.iter().find(|h| h.order() == 3 && **h != z).unwrap();
        let one = SubgroupSet::trivial(&g);
        let f = fixed_cosets(h, &one);
        assert_eq!(f.len(), 9);
        assert_eq!(f.weyl_order(), 3);
        let (v, orbits) = check_weyl_freeness(&f);
        assert!(v.passed());
        assert_eq!(orbits, 3);
        // L not inside any conjugate of H
        let other = all.iter().find(|x| x.order() == 3 && !crate::subgroup::are_conjugate(x, h)).unwrap();
        assert!(fixed_cosets(h, other).is_empty());
    }

    #[test]
    fn whole_group_has_one_coset() {
        let g = cyclic(9).unwrap();
        let whole = SubgroupSet::whole(&g);
        let (v, orbits) = check_weyl_freeness(&fixed_cosets(&whole, &SubgroupSet::trivial(&g)));
        assert!(v.passed());
        assert_eq!(orbits, 1);
    }

    #[test]
    fn cyclic_nine_triples() {
        let g = cyclic(9).unwrap();
        let h = SubgroupSet::whole(&g);
        let k = closure(&g, [3]);
        let (v, c) = check_mu_bijection(&h, &k, &SubgroupSet::trivial(&g)).unwrap();
        assert!(v.passed());
        assert_eq!((c.s, c.t, c.m), (1, 1, 1));
        let (v, c) = check_mu_bijection(&h, &k, &k).unwrap();
        assert!(v.passed());
        assert_eq!(c.right, 1);
        assert!(matches!(check_mu_bijection(&h, &SubgroupSet::trivial(&g), &SubgroupSet::trivial(&g)), Err(Error::BadShape(_))));
    }

    #[test]
    fn sweeps_pass() {
        for g in [cyclic(9).unwrap(), heisenberg(3).unwrap(), elementary_abelian(3, 2).unwrap()] {
            let v = sweep_mu(&g).unwrap();
            assert!(v.passed(), "{v:?}");
        }
        let g = heisenberg(3).unwrap();
        let all = all_subgroups(&g, None).unwrap();
        let one = SubgroupSet::trivial(&g);
        for h in all.iter().filter(|h| h.order() == 3) {
            let (v, c) = check_mu_bijection(h, &one, &one).unwrap();
            assert!(v.passed());
            assert_eq!(c.m, 27 / normalizer(&g, h).order());
        }
    }
}
