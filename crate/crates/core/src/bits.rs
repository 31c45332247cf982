//! Fixed-width bitsets over group element indices.

use std::cmp::Ordering;
use std::fmt;

/// A set of element indices `0..len`, stored as 64-bit words.
///
/// Ordering: at the lowest index where two sets differ, the set containing
/// that index is the smaller one. Equivalently, ascending member lists are
/// compared lexicographically with an implicit `+inf` terminator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitset {
    len: usize,
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Bitset::new(len);
        for i in indices {
            b.insert(i);
        }
        b
    }

    pub fn full(len: usize) -> Self {
        Bitset::from_indices(len, 0..len)
    }

    /// Size of the universe, not the number of members.
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    /// Returns true if `i` was newly inserted.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let w = &mut self.words[i >> 6];
        let bit = 1u64 << (i & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of members below `i`.
    pub fn rank(&self, i: usize) -> usize {
        let (w, b) = (i / 64, i % 64);
        let below: usize = self.words[..w].iter().map(|x| x.count_ones() as usize).sum();
        below + if b == 0 { 0 } else { (self.words[w] & ((1u64 << b) - 1)).count_ones() as usize }
    }

    pub fn is_subset(&self, other: &Bitset) -> bool {
        self.len == other.len && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Bitset) -> Bitset {
        assert_eq!(self.len, other.len);
        Bitset {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &Bitset) -> Bitset {
        assert_eq!(self.len, other.len);
        Bitset {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// Hex rendering of the integer `sum 2^i` over members, most significant
    /// digit first, without leading zeros (`"0"` for the empty set).
    pub fn to_hex(&self) -> String {
        let mut s = String::new();
        for w in self.words.iter().rev() {
            if s.is_empty() {
                if *w != 0 {
                    s = format!("{w:x}");
                }
            } else {
                s.push_str(&format!("{w:016x}"));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    pub fn from_hex(len: usize, hex: &str) -> Option<Bitset> {
        let hex = hex.trim().trim_start_matches("0x");
        if hex.is_empty() {
            return None;
        }
        let mut b = Bitset::new(len);
        for (pos, ch) in hex.chars().rev().enumerate() {
            let nibble = ch.to_digit(16)? as usize;
            for bit in 0..4 {
                if nibble >> bit & 1 == 1 {
                    let i = pos * 4 + bit;
                    if i >= len {
                        return None;
                    }
                    b.insert(i);
                }
            }
        }
        Some(b)
    }
}

impl Ord for Bitset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                if a != b {
                    // lowest differing bit decides: the set holding it is smaller
                    let low = (a ^ b).trailing_zeros();
                    return if (a >> low) & 1 == 1 { Ordering::Less } else { Ordering::Greater };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Bitset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Bitset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn order_is_lexicographic_on_member_lists() {
        let a = Bitset::from_indices(10, [0, 1, 5]);
        let b = Bitset::from_indices(10, [0, 2]);
        let c = Bitset::from_indices(10, [0, 1]);
        assert!(a < b);
        assert!(a < c);
    }

    #[test]
    fn hex_of_small_sets() {
        assert_eq!(Bitset::from_indices(9, [0, 3]).to_hex(), "9");
        assert_eq!(Bitset::new(9).to_hex(), "0");
        assert_eq!(Bitset::from_indices(70, [64]).to_hex(), "10000000000000000");
        assert_eq!(Bitset::from_indices(70, [0, 64]).to_hex(), "10000000000000001");
    }

    proptest! {
        #[test]
        fn hex_round_trip(members in proptest::collection::btree_set(0usize..300, 0..40)) {
            let b = Bitset::from_indices(300, members.iter().copied());
            prop_assert_eq!(Bitset::from_hex(300, &b.to_hex()), Some(b.clone()));
            prop_assert_eq!(b.iter().collect::<Vec<_>>(), members.into_iter().collect::<Vec<_>>());
        }

        #[test]
        fn order_matches_sorted_vectors(
            x in proptest::collection::btree_set(0usize..130, 0..20),
            y in proptest::collection::btree_set(0usize..130, 0..20),
        ) {
            let bx = Bitset::from_indices(130, x.iter().copied());
            let by = Bitset::from_indices(130, y.iter().copied());
            let vx: Vec<_> = x.into_iter().collect();
            let vy: Vec<_> = y.into_iter().collect();
            // "missing" sorts after "present": compare with an infinity sentinel
            let pad = |v: &Vec<usize>| { let mut v = v.clone(); v.push(usize::MAX); v };
            prop_assert_eq!(bx.cmp(&by), pad(&vx).cmp(&pad(&vy)));
        }
    }
}
