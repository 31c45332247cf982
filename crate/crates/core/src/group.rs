//! Finite groups as explicit Cayley tables.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::Bitset;
use crate::conjugacy::ConjugacyPartition;
use crate::error::{Error, Result};

/// Largest group order accepted anywhere in the crate.
pub const ORDER_CAP: usize = 4096;

/// Orders up to this bound get an exhaustive O(n^3) associativity check.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 512;

const RANDOM_ASSOC_TRIPLES: usize = 100_000;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A finite group stored as a full multiplication table. Element 0 is the
/// identity.
pub struct Group {
    id: u64,
    label: String,
    order: usize,
    mult: Vec<u16>,
    inv: Vec<u16>,
    elt_order: Vec<u32>,
    generators: Vec<usize>,
    classes: OnceLock<Arc<ConjugacyPartition>>,
}

impl Group {
    /// Builds and validates a group from a row-major table `mult[i * n + j] = i*j`.
    ///
    /// The identity may sit anywhere in the input; it is relabelled to 0 by
    /// swapping it with element 0.
    pub fn from_table(label: impl Into<String>, order: usize, mut mult: Vec<usize>) -> Result<Arc<Group>> {
        let label = label.into();
        if order == 0 {
            return Err(Error::InvalidTable("empty group".into()));
        }
        if order > ORDER_CAP {
            return Err(Error::OrderCap { order, cap: ORDER_CAP });
        }
        if mult.len() != order * order {
            return Err(Error::InvalidTable(format!(
                "expected {} entries, found {}",
                order * order,
                mult.len()
            )));
        }
        check_latin(order, &mult)?;
        let e = (0..order)
            .find(|&e| (0..order).all(|x| mult[e * order + x] == x && mult[x * order + e] == x))
            .ok_or_else(|| Error::InvalidTable("no two-sided identity".into()))?;
        if e != 0 {
            mult = swap_labels(order, &mult, 0, e);
        }

        let mut inv = vec![0u16; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| mult[x * order + y] == 0)
                .expect("latin square has a solution in every row");
            if mult[y * order + x] != 0 {
                return Err(Error::InvalidTable(format!("element {x} has no two-sided inverse")));
            }
            inv[x] = y as u16;
        }

        let generators = greedy_generators(order, &mult);
        check_associative(order, &mult, &generators)?;

        let mut elt_order = vec![0u32; order];
        for x in 0..order {
            let mut k = 1u32;
            let mut y = x;
            while y != 0 {
                y = mult[y * order + x];
                k += 1;
            }
            elt_order[x] = k;
        }

        Ok(Arc::new(Group {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            label,
            order,
            mult: mult.into_iter().map(|v| v as u16).collect(),
            inv,
            elt_order,
            generators,
            classes: OnceLock::new(),
        }))
    }

    /// Builds a group of the given order from a product function on indices.
    pub fn from_fn(
        label: impl Into<String>,
        order: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Arc<Group>> {
        if order > ORDER_CAP {
            return Err(Error::OrderCap { order, cap: ORDER_CAP });
        }
        let mut mult = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                mult.push(f(a, b));
            }
        }
        Group::from_table(label, order, mult)
    }

    /// Process-unique identifier; two groups are "the same" iff ids agree.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, x: usize, k: u64) -> usize {
        let k = k % self.elt_order[x] as u64;
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    #[inline]
    pub fn element_order(&self, x: usize) -> usize {
        self.elt_order[x] as usize
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.elt_order
    }

    /// Lowest-index generating set, chosen greedily.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn exponent(&self) -> usize {
        self.elt_order.iter().fold(1usize, |acc, &o| acc.lcm(&(o as usize)))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// If the order is a power of a single prime, returns `(p, k)` with order `p^k`.
    /// The trivial group returns `None`.
    pub fn prime_power(&self) -> Option<(usize, u32)> {
        prime_power_of(self.order)
    }

    pub fn all_elements(&self) -> Bitset {
        Bitset::full(self.order)
    }

    pub fn classes(&self) -> &Arc<ConjugacyPartition> {
        self.classes.get_or_init(|| Arc::new(ConjugacyPartition::compute(self)))
    }

    pub fn same_as(&self, other: &Group) -> bool {
        self.id == other.id
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group").field("label", &self.label).field("order", &self.order).finish()
    }
}

pub fn prime_power_of(n: usize) -> Option<(usize, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn check_latin(n: usize, mult: &[usize]) -> Result<()> {
    let mut seen = vec![0usize; n];
    let mut stamp = 0usize;
    for r in 0..n {
        stamp += 1;
        for c in 0..n {
            let v = mult[r * n + c];
            if v >= n {
                return Err(Error::InvalidTable(format!("entry {v} at ({r},{c}) out of range")));
            }
            if seen[v] == stamp {
                return Err(Error::InvalidTable(format!("row {r} repeats {v}")));
            }
            seen[v] = stamp;
        }
    }
    for c in 0..n {
        stamp += 1;
        for r in 0..n {
            let v = mult[r * n + c];
            if seen[v] == stamp {
                return Err(Error::InvalidTable(format!("column {c} repeats {v}")));
            }
            seen[v] = stamp;
        }
    }
    Ok(())
}

fn swap_labels(n: usize, mult: &[usize], a: usize, b: usize) -> Vec<usize> {
    let relabel = |x: usize| if x == a { b } else if x == b { a } else { x };
    let mut out = vec![0; n * n];
    for r in 0..n {
        for c in 0..n {
            out[relabel(r) * n + relabel(c)] = relabel(mult[r * n + c]);
        }
    }
    out
}

/// Every element is reached from the identity by right multiplication with
/// the returned elements.
fn greedy_generators(n: usize, mult: &[usize]) -> Vec<usize> {
    let mut reached = Bitset::new(n);
    reached.insert(0);
    let mut gens = Vec::new();
    for x in 1..n {
        if reached.contains(x) {
            continue;
        }
        gens.push(x);
        let mut queue: Vec<usize> = reached.iter().collect();
        while let Some(y) = queue.pop() {
            for &g in &gens {
                let z = mult[y * n + g];
                if reached.insert(z) {
                    queue.push(z);
                }
            }
        }
    }
    gens
}

fn check_associative(n: usize, mult: &[usize], gens: &[usize]) -> Result<()> {
    let m = |a: usize, b: usize| mult[a * n + b];
    let fail = |x, y, z| Err(Error::InvalidTable(format!("associativity fails at ({x},{y},{z})")));
    if n <= EXHAUSTIVE_ASSOC_LIMIT {
        for x in 0..n {
            for y in 0..n {
                let xy = m(x, y);
                for z in 0..n {
                    if m(xy, z) != m(x, m(y, z)) {
                        return fail(x, y, z);
                    }
                }
            }
        }
        return Ok(());
    }
    // Light's test: the set of z with (xy)z = x(yz) for all x, y is closed
    // under products, so checking it on a right-generating set suffices.
    for &g in gens {
        for x in 0..n {
            for y in 0..n {
                if m(m(x, y), g) != m(x, m(y, g)) {
                    return fail(x, y, g);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a55c);
    for _ in 0..RANDOM_ASSOC_TRIPLES {
        let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        if m(m(x, y), z) != m(x, m(y, z)) {
            return fail(x, y, z);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(n: usize) -> Vec<usize> {
        (0..n * n).map(|k| (k / n + k % n) % n).collect()
    }

    #[test]
    fn identity_is_relabelled_to_zero() {
        // Z/3 with identity stored at index 2
        let t = vec![1, 2, 0, 2, 0, 1, 0, 1, 2];
        let g = Group::from_table("shifted", 3, t).unwrap();
        for x in 0..3 {
            assert_eq!(g.mul(0, x), x);
            assert_eq!(g.mul(x, g.inv(x)), 0);
        }
    }

    #[test]
    fn rejects_non_latin() {
        let mut t = cyclic_table(4);
        t[1] = 0;
        assert!(matches!(Group::from_table("bad", 4, t), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn rejects_non_associative_loop() {
        // smallest non-associative loop with identity, order 5
        let t = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(matches!(Group::from_table("loop", 5, t), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(
            Group::from_fn("big", ORDER_CAP + 1, |a, b| (a + b) % (ORDER_CAP + 1)),
            Err(Error::OrderCap { .. })
        ));
    }

    #[test]
    fn large_cyclic_uses_generator_check() {
        let n = 600;
        let g = Group::from_table("c600", n, cyclic_table(n)).unwrap();
        assert_eq!(g.generators(), &[1]);
        assert_eq!(g.exponent(), 600);
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power_of(243), Some((3, 5)));
        assert_eq!(prime_power_of(12), None);
        assert_eq!(prime_power_of(1), None);
        assert!(is_prime(37) && !is_prime(39));
    }
}
