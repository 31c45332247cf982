//! Subgroups as bitsets over a parent group, and the structural queries on
//! them: closure, centralizers, normalizers, enumeration, rank.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::bits::Bitset;
use crate::embedding::{EmbeddingKind, GroupEmbedding};
use crate::error::{Error, Result};
use crate::group::{is_prime, prime_power_of, Group};

/// A subgroup relabelled as its own group, with the inclusion.
type Standalone = (Arc<Group>, GroupEmbedding);

/// A subgroup of `parent`, closed under products and inverses.
///
/// Equality, hashing and ordering only look at the parent's identity and the
/// member bitset; ordering is by `(order, bitset)`.
#[derive(Clone)]
pub struct SubgroupSet {
    parent: Arc<Group>,
    members: Bitset,
    order: usize,
    standalone: Arc<OnceLock<Arc<Standalone>>>,
}

impl SubgroupSet {
    /// Validates closure; use [`closure`] to generate a subgroup instead.
    pub fn new(parent: Arc<Group>, members: Bitset) -> Result<Self> {
        if members.universe() != parent.order() || !members.contains(0) {
            return Err(Error::Invalid("subset does not contain the identity".into()));
        }
        let list: Vec<usize> = members.iter().collect();
        for &a in &list {
            for &b in &list {
                if !members.contains(parent.mul(a, b)) {
                    return Err(Error::Invalid(format!("subset not closed: {a}*{b}")));
                }
            }
        }
        Ok(SubgroupSet::from_closed(parent, members))
    }

    pub(crate) fn from_closed(parent: Arc<Group>, members: Bitset) -> Self {
        let order = members.count();
        assert_eq!(parent.order() % order, 0, "Lagrange violated: {order} does not divide {}", parent.order());
        SubgroupSet { parent, members, order, standalone: Arc::new(OnceLock::new()) }
    }

    pub fn trivial(parent: &Arc<Group>) -> Self {
        SubgroupSet::from_closed(parent.clone(), Bitset::from_indices(parent.order(), [0]))
    }

    pub fn whole(parent: &Arc<Group>) -> Self {
        SubgroupSet::from_closed(parent.clone(), parent.all_elements())
    }

    pub fn parent(&self) -> &Arc<Group> {
        &self.parent
    }

    pub fn members(&self) -> &Bitset {
        &self.members
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    /// Index of `x` in the standalone group of [`SubgroupSet::as_group`].
    pub fn local_index(&self, x: usize) -> Option<usize> {
        self.contains(x).then(|| self.members.rank(x))
    }

    /// `self` as a subgroup of the standalone group of `outer`, if contained.
    pub fn within(&self, outer: &SubgroupSet) -> Option<SubgroupSet> {
        if !self.is_subgroup_of(outer) {
            return None;
        }
        let (og, _) = outer.as_group();
        let bits = Bitset::from_indices(og.order(), self.elements().map(|x| outer.members.rank(x)));
        Some(SubgroupSet::from_closed(og, bits))
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_subgroup_of(&self, other: &SubgroupSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &SubgroupSet) -> SubgroupSet {
        SubgroupSet::from_closed(self.parent.clone(), self.members.intersection(&other.members))
    }

    pub fn meets_trivially(&self, other: &SubgroupSet) -> bool {
        self.members.intersection(&other.members).count() == 1
    }

    /// `g H g^-1`.
    pub fn conjugate(&self, g: usize) -> SubgroupSet {
        let m = Bitset::from_indices(self.parent.order(), self.members.iter().map(|h| self.parent.conj(g, h)));
        SubgroupSet::from_closed(self.parent.clone(), m)
    }

    pub fn conjugate_bits(&self, g: usize) -> Bitset {
        Bitset::from_indices(self.parent.order(), self.members.iter().map(|h| self.parent.conj(g, h)))
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        let gens = self.generators();
        g.generators().iter().all(|&x| gens.iter().all(|&h| self.contains(g.conj(x, h))))
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements().any(|x| self.parent.element_order(x) == self.order)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|&a| gens.iter().all(|&b| self.parent.commute(a, b)))
    }

    pub fn exponent(&self) -> usize {
        self.elements().map(|x| self.parent.element_order(x)).max().unwrap_or(1)
    }

    /// Lowest-index greedy generating set.
    pub fn generators(&self) -> Vec<usize> {
        let mut reached = Bitset::new(self.parent.order());
        reached.insert(0);
        let mut gens = Vec::new();
        for x in self.members.iter() {
            if reached.contains(x) {
                continue;
            }
            gens.push(x);
            reached = closure_bits(&self.parent, reached.iter().chain([x]));
        }
        gens
    }

    /// The subgroup relabelled as a standalone group (members in ascending
    /// order, identity at 0) with its inclusion into the parent.
    ///
    /// Standalone groups are interned per `(parent, members)`, so equal
    /// subgroups built independently share one group and their class
    /// functions compare equal.
    pub fn as_group(&self) -> (Arc<Group>, &GroupEmbedding) {
        let entry = self.standalone.get_or_init(|| {
            type Interned = HashMap<(u64, Bitset), Arc<Standalone>>;
            static INTERN: OnceLock<Mutex<Interned>> = OnceLock::new();
            let key = (self.parent.id(), self.members.clone());
            let map = INTERN.get_or_init(Default::default);
            if let Some(e) = map.lock().unwrap().get(&key) {
                return e.clone();
            }
            let built = Arc::new(self.build_standalone());
            map.lock().unwrap().entry(key).or_insert(built).clone()
        });
        (entry.0.clone(), &entry.1)
    }

    fn build_standalone(&self) -> (Arc<Group>, GroupEmbedding) {
        let list: Vec<usize> = self.members.iter().collect();
        let mut local = vec![usize::MAX; self.parent.order()];
        for (i, &x) in list.iter().enumerate() {
            local[x] = i;
        }
        let n = list.len();
        let label = format!("{}<{}#{}>", self.parent.label(), n, self.members.to_hex());
        let sub = Group::from_fn(label, n, |a, b| local[self.parent.mul(list[a], list[b])])
            .expect("a closed subset of a group is a group");
        let emb = GroupEmbedding::new(sub.clone(), self.parent.clone(), list, EmbeddingKind::Inclusion)
            .expect("inclusion is a homomorphism");
        (sub, emb)
    }

    /// Short identifier used in witnesses: `order#hex`.
    pub fn tag(&self) -> String {
        format!("{}#{}", self.order, self.members.to_hex())
    }
}

impl PartialEq for SubgroupSet {
    fn eq(&self, other: &Self) -> bool {
        self.parent.same_as(&other.parent) && self.members == other.members
    }
}

impl Eq for SubgroupSet {}

impl Hash for SubgroupSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.parent.id().hash(state);
        self.members.hash(state);
    }
}

impl Ord for SubgroupSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parent
            .id()
            .cmp(&other.parent.id())
            .then(self.order.cmp(&other.order))
            .then_with(|| self.members.cmp(&other.members))
    }
}

impl PartialOrd for SubgroupSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubgroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupSet({}, {:?})", self.order, self.members)
    }
}

fn closure_bits(g: &Group, gens: impl IntoIterator<Item = usize>) -> Bitset {
    let gens: Vec<usize> = gens.into_iter().filter(|&x| x != 0).collect();
    let mut set = Bitset::new(g.order());
    set.insert(0);
    let mut queue = vec![0usize];
    while let Some(x) = queue.pop() {
        for &s in &gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                queue.push(y);
            }
        }
    }
    set
}

/// Smallest subgroup containing `gens`.
pub fn closure(g: &Arc<Group>, gens: impl IntoIterator<Item = usize>) -> SubgroupSet {
    SubgroupSet::from_closed(g.clone(), closure_bits(g, gens))
}

pub fn centralizer(g: &Arc<Group>, s: &SubgroupSet) -> SubgroupSet {
    let gens = s.generators();
    let m = Bitset::from_indices(g.order(), (0..g.order()).filter(|&x| gens.iter().all(|&y| g.commute(x, y))));
    SubgroupSet::from_closed(g.clone(), m)
}

pub fn normalizer(g: &Arc<Group>, s: &SubgroupSet) -> SubgroupSet {
    let gens = s.generators();
    let m = Bitset::from_indices(
        g.order(),
        (0..g.order()).filter(|&x| gens.iter().all(|&y| s.contains(g.conj(x, y)))),
    );
    SubgroupSet::from_closed(g.clone(), m)
}

pub fn center(g: &Arc<Group>) -> SubgroupSet {
    centralizer(g, &SubgroupSet::whole(g))
}

/// Least-bitset conjugate of `h` and the least element index conjugating
/// `h` onto it.
pub fn canonical_conjugate(h: &SubgroupSet) -> (SubgroupSet, usize) {
    let g = h.parent();
    let mut best: Option<(Bitset, usize)> = None;
    for x in 0..g.order() {
        let c = h.conjugate_bits(x);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, x));
        }
    }
    let (bits, w) = best.expect("group is nonempty");
    (SubgroupSet::from_closed(g.clone(), bits), w)
}

/// Distinct conjugates of `h`, sorted.
pub fn conjugacy_class_of(h: &SubgroupSet) -> Vec<SubgroupSet> {
    let g = h.parent();
    let set: HashSet<Bitset> = (0..g.order()).map(|x| h.conjugate_bits(x)).collect();
    let mut out: Vec<SubgroupSet> = set.into_iter().map(|b| SubgroupSet::from_closed(g.clone(), b)).collect();
    out.sort();
    out
}

pub fn are_conjugate(a: &SubgroupSet, b: &SubgroupSet) -> bool {
    a.order() == b.order() && (0..a.parent().order()).any(|x| a.conjugate_bits(x) == *b.members())
}

pub fn is_solvable(g: &Arc<Group>) -> bool {
    let mut d = SubgroupSet::whole(g);
    loop {
        if d.is_trivial() {
            return true;
        }
        let elems: Vec<usize> = d.elements().collect();
        let gens = d.generators();
        // commutators of generators with all elements generate a subgroup
        // whose normal closure in D is D'; close under D-conjugation.
        let comms: Vec<usize> = elems
            .iter()
            .flat_map(|&x| gens.iter().map(move |&y| (x, y)))
            .map(|(x, y)| g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y)))
            .collect();
        let mut next = closure_bits(g, comms);
        loop {
            let conj: Vec<usize> =
                next.iter().flat_map(|n| gens.iter().map(move |&y| (n, y))).map(|(n, y)| g.conj(y, n)).collect();
            let grown = closure_bits(g, next.iter().chain(conj));
            if grown == next {
                break;
            }
            next = grown;
        }
        if next == *d.members() {
            return false;
        }
        d = SubgroupSet::from_closed(g.clone(), next);
    }
}

/// Every subgroup of `g` (of order at most `max_order` when given), sorted by
/// `(order, bitset)`.
///
/// Enumeration extends each subgroup `H` by elements `x` of `N(H)` whose
/// order modulo `H` is prime; for solvable groups every subgroup arises
/// this way, and non-solvable groups are rejected.
pub fn all_subgroups(g: &Arc<Group>, max_order: Option<usize>) -> Result<Vec<SubgroupSet>> {
    if g.order() > crate::group::ORDER_CAP {
        return Err(Error::OrderCap { order: g.order(), cap: crate::group::ORDER_CAP });
    }
    if !is_solvable(g) {
        return Err(Error::NotSolvable);
    }
    let limit = max_order.unwrap_or(usize::MAX);
    let mut seen: HashSet<Bitset> = HashSet::new();
    let mut pending: BTreeMap<usize, Vec<Bitset>> = BTreeMap::new();
    let triv = Bitset::from_indices(g.order(), [0]);
    seen.insert(triv.clone());
    pending.insert(1, vec![triv]);
    let mut out = Vec::new();

    while let Some((_, layer)) = pending.pop_first() {
        let children: Vec<Vec<Bitset>> = layer
            .par_iter()
            .map(|h| {
                let sub = SubgroupSet::from_closed(g.clone(), h.clone());
                prime_extensions(g, &sub, limit)
            })
            .collect();
        for bits in layer {
            out.push(SubgroupSet::from_closed(g.clone(), bits));
        }
        for c in children.into_iter().flatten() {
            if seen.insert(c.clone()) {
                pending.entry(c.count()).or_default().push(c);
            }
        }
    }
    out.sort();
    Ok(out)
}

fn prime_extensions(g: &Arc<Group>, h: &SubgroupSet, limit: usize) -> Vec<Bitset> {
    let norm = normalizer(g, h);
    let mut covered = h.members().clone();
    let mut out = Vec::new();
    for x in norm.elements() {
        if covered.contains(x) {
            continue;
        }
        // order of x modulo H
        let mut k = 1;
        let mut y = x;
        while !h.contains(y) {
            y = g.mul(y, x);
            k += 1;
        }
        if !is_prime(k) || h.order() * k > limit {
            continue;
        }
        let mut bits = h.members().clone();
        let mut power = x;
        for _ in 1..k {
            for m in h.elements() {
                bits.insert(g.mul(m, power));
            }
            power = g.mul(power, x);
        }
        covered = covered.union(&bits);
        out.push(bits);
    }
    out
}

/// Elementary abelian p-subgroups of a p-subgroup `h`, including the trivial
/// subgroup, sorted.
pub fn elementary_abelian_subgroups(h: &SubgroupSet) -> Result<Vec<SubgroupSet>> {
    let g = h.parent();
    if h.is_trivial() {
        return Ok(vec![h.clone()]);
    }
    let (p, _) = prime_power_of(h.order()).ok_or(Error::MixedOrder(h.order()))?;
    let order_p: Vec<usize> = h.elements().filter(|&x| g.element_order(x) == p).collect();
    let mut seen: HashSet<Bitset> = HashSet::new();
    let triv = Bitset::from_indices(g.order(), [0]);
    seen.insert(triv.clone());
    let mut frontier = vec![(triv, Vec::<usize>::new())];
    let mut out = vec![SubgroupSet::trivial(g)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (bits, gens) in &frontier {
            for &x in &order_p {
                if bits.contains(x) || !gens.iter().all(|&y| g.commute(x, y)) {
                    continue;
                }
                let mut grown = bits.clone();
                let mut power = x;
                for _ in 1..p {
                    for m in bits.iter() {
                        grown.insert(g.mul(m, power));
                    }
                    power = g.mul(power, x);
                }
                if seen.insert(grown.clone()) {
                    let mut ngens = gens.clone();
                    ngens.push(x);
                    out.push(SubgroupSet::from_closed(g.clone(), grown.clone()));
                    next.push((grown, ngens));
                }
            }
        }
        frontier = next;
    }
    out.sort();
    Ok(out)
}

/// `log_p` of the order of an elementary abelian p-group.
pub fn elementary_rank(e: &SubgroupSet) -> u32 {
    prime_power_of(e.order()).map_or(0, |(_, k)| k)
}

pub fn is_elementary_abelian(h: &SubgroupSet) -> bool {
    if h.is_trivial() {
        return true;
    }
    match prime_power_of(h.order()) {
        Some((p, _)) => h.is_abelian() && h.elements().skip(1).all(|x| h.parent().element_order(x) == p),
        None => false,
    }
}

/// Largest rank of an elementary abelian subgroup of the p-group `h`.
pub fn rank(h: &SubgroupSet) -> Result<u32> {
    Ok(elementary_abelian_subgroups(h)?.iter().map(elementary_rank).max().unwrap_or(0))
}

/// The unique subgroup of prime order of a rank-one p-group.
pub fn omega1(h: &SubgroupSet) -> Result<SubgroupSet> {
    let g = h.parent();
    let (p, _) = prime_power_of(h.order()).ok_or(if h.is_trivial() { Error::NotRankOne } else { Error::MixedOrder(h.order()) })?;
    let mut found: Option<SubgroupSet> = None;
    for x in h.elements().filter(|&x| g.element_order(x) == p) {
        match &found {
            None => found = Some(closure(g, [x])),
            Some(c) if c.contains(x) => {}
            Some(_) => return Err(Error::NotRankOne),
        }
    }
    found.ok_or(Error::NotRankOne)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, elementary_abelian, extraspecial5, heisenberg};

    /// Independent oracle: subgroups generated by subsets of size <= 3.
    /// Every subgroup of the small test groups is 3-generated.
    fn brute_force_subgroups(g: &Arc<Group>) -> HashSet<Bitset> {
        let n = g.order();
        let mut out = HashSet::new();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    out.insert(closure_bits(g, [a, b, c]));
                }
            }
        }
        out
    }

    #[test]
    fn closure_examples() {
        let h = heisenberg(3).unwrap();
        assert!(closure(&h, []).is_trivial());
        // x = (1,0,0) has index 1, y = (0,1,0) index 3
        assert_eq!(closure(&h, [1, 3]).order(), 27);
        let c9 = cyclic(9).unwrap();
        assert_eq!(closure(&c9, [1]).order(), 9);
    }

    #[test]
    fn subgroup_counts_match_brute_force() {
        for (g, expected) in [
            (cyclic(9).unwrap(), 3),
            (elementary_abelian(3, 3).unwrap(), 28),
            (heisenberg(3).unwrap(), 19),
        ] {
            let subs = all_subgroups(&g, None).unwrap();
            let oracle = brute_force_subgroups(&g);
            assert_eq!(subs.len(), expected, "{}", g.label());
            assert_eq!(oracle.len(), expected, "{}", g.label());
            for s in &subs {
                assert!(oracle.contains(s.members()));
                assert_eq!(closure(&g, s.elements()).members(), s.members());
            }
            assert!(subs.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn max_order_filter() {
        let g = heisenberg(3).unwrap();
        let subs = all_subgroups(&g, Some(3)).unwrap();
        assert_eq!(subs.len(), 14);
    }

    #[test]
    fn non_solvable_rejected() {
        let a5 = crate::catalog::parse_group_text("perm A5 degree 5\n(1,2,3,4,5)\n(1,2,3)\n").unwrap();
        assert_eq!(a5.order(), 60);
        assert!(!is_solvable(&a5));
        assert_eq!(all_subgroups(&a5, None).unwrap_err(), Error::NotSolvable);
        let s3 = crate::catalog::parse_group_text("perm S3 degree 3\n(1,2,3)\n(1,2)\n").unwrap();
        assert_eq!(all_subgroups(&s3, None).unwrap().len(), 6);
    }

    #[test]
    fn centers_and_centralizers() {
        let e = elementary_abelian(3, 3).unwrap();
        assert_eq!(center(&e).order(), 27);
        let x = extraspecial5(3).unwrap();
        let z = center(&x);
        assert_eq!(z.order(), 3);
        // Q = <Z, a> with a = (1,0,0,0,0) noncentral
        let q = closure(&x, z.elements().chain([1]));
        assert_eq!(q.order(), 9);
        assert!(q.is_normal());
        let cq = centralizer(&x, &q);
        assert_eq!(x.order() / cq.order(), 3);
        assert!(cq.is_subgroup_of(&normalizer(&x, &q)));
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&SubgroupSet::whole(&elementary_abelian(3, 3).unwrap())).unwrap(), 3);
        assert_eq!(rank(&SubgroupSet::whole(&heisenberg(3).unwrap())).unwrap(), 2);
        assert_eq!(rank(&SubgroupSet::whole(&extraspecial5(3).unwrap())).unwrap(), 3);
        assert_eq!(rank(&SubgroupSet::whole(&cyclic(9).unwrap())).unwrap(), 1);
        let c6 = cyclic(6).unwrap();
        assert_eq!(rank(&SubgroupSet::whole(&c6)).unwrap_err(), Error::MixedOrder(6));
    }

    #[test]
    fn omega1_examples() {
        let c9 = cyclic(9).unwrap();
        let o = omega1(&SubgroupSet::whole(&c9)).unwrap();
        assert_eq!(o.elements().collect::<Vec<_>>(), vec![0, 3, 6]);
        let c3 = cyclic(3).unwrap();
        assert_eq!(omega1(&SubgroupSet::whole(&c3)).unwrap().order(), 3);
        let e = elementary_abelian(3, 2).unwrap();
        assert_eq!(omega1(&SubgroupSet::whole(&e)).unwrap_err(), Error::NotRankOne);
    }

    #[test]
    fn standalone_groups() {
        let h = heisenberg(3).unwrap();
        let (t, _) = SubgroupSet::trivial(&h).as_group();
        assert_eq!(t.order(), 1);
        let zc = center(&h);
        let (z, emb) = zc.as_group();
        assert_eq!(z.order(), 3);
        assert!(z.is_abelian());
        assert_eq!(emb.apply(0), 0);
        for s in all_subgroups(&h, None).unwrap().iter().filter(|s| s.order() == 9) {
            let (sg, _) = s.as_group();
            assert!(sg.is_abelian());
            assert!(center(&h).is_subgroup_of(s));
            assert!(is_elementary_abelian(s));
        }
        // the cached standalone group is shared between clones
        let c = center(&h);
        let c2 = c.clone();
        assert!(c.as_group().0.same_as(&c2.as_group().0));
    }

    #[test]
    fn rank_is_conjugation_invariant() {
        use rand::{Rng, SeedableRng};
        let g = extraspecial5(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let subs = all_subgroups(&g, Some(27)).unwrap();
        for s in subs.iter().step_by(97) {
            let r = rank(s).unwrap();
            for _ in 0..100 {
                let x = rng.gen_range(0..g.order());
                assert_eq!(rank(&s.conjugate(x)).unwrap(), r);
            }
        }
    }
}
