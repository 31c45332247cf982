//! Small dense linear algebra over a prime field `F_l`, `l < 2^31`.

use crate::group::is_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub l: u64,
}

impl Fp {
    pub fn new(l: u64) -> Self {
        debug_assert!(is_prime(l as usize));
        Fp { l }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.l {
            s - self.l
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.l - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.l
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.l;
        a %= self.l;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.l), "inverse of zero");
        self.pow(a, self.l - 2)
    }

    /// Reduction of a signed integer.
    pub fn from_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.l as i64) as u64
    }

    /// Least generator of the multiplicative group.
    pub fn primitive_root(self) -> u64 {
        let n = self.l - 1;
        let mut factors = Vec::new();
        let mut m = n;
        let mut q = 2;
        while q * q <= m {
            if m.is_multiple_of(q) {
                factors.push(q);
                while m.is_multiple_of(q) {
                    m /= q;
                }
            }
            q += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..self.l)
            .find(|&g| factors.iter().all(|&f| self.pow(g, n / f) != 1))
            .unwrap_or(1)
    }

    /// Row-reduces `rows` in place to reduced echelon form and returns the
    /// pivot columns. Zero rows are dropped.
    pub fn rref(self, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
            rows.swap(r, pr);
            let s = self.inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, s);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let f = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot_row) {
                        if y != 0 {
                            *x = self.sub(*x, self.mul(f, y));
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        pivots
    }

    /// Basis of `{x : m x = 0}` for a square or rectangular matrix given by rows.
    pub fn nullspace(self, m: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let ncols = m.first().map_or(0, |r| r.len());
        let mut rows = m.to_vec();
        let pivots = self.rref(&mut rows);
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; ncols];
                v[f] = 1;
                for (row, &pc) in rows.iter().zip(&pivots) {
                    v[pc] = self.sub(0, row[f]);
                }
                v
            })
            .collect()
    }
}

/// Least prime `l` with `l = 1 (mod e)` and `l > bound`.
pub fn dixon_prime(e: u64, bound: u64) -> u64 {
    (bound + 1..)
        .find(|&l| l % e == 1 % e && is_prime(l as usize))
        .expect("primes in arithmetic progression are unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_roots() {
        assert_eq!(dixon_prime(9, 31), 37);
        assert_eq!(dixon_prime(3, 10), 13);
        assert_eq!(dixon_prime(1, 1), 2);
        let f = Fp::new(37);
        let g = f.primitive_root();
        assert_eq!(g, 2);
        let mut seen = std::collections::HashSet::new();
        for k in 0..36 {
            seen.insert(f.pow(g, k));
        }
        assert_eq!(seen.len(), 36);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = Fp::new(13);
        let m = vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0]];
        let ns = f.nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let s = row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert_eq!(s, 0);
            }
        }
    }
}
