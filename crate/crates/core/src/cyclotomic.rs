//! Exact arithmetic in cyclotomic fields `Q(zeta_m)`.
//!
//! An element is a rational coefficient vector in the power basis
//! `1, z, ..., z^(phi(m)-1)` of `Q[z]/Phi_m(z)`. This representation is
//! canonical for a fixed conductor, so equality is coefficient equality.
//! Values of different conductors are compared and combined in the field of
//! the least common multiple.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Power-basis reduction data for one conductor.
struct Field {
    m: usize,
    phi: usize,
    /// `reduce[k]` = coordinates of `z^k`, for `0 <= k < m`.
    reduce: Vec<Vec<i64>>,
}

fn cyclotomic_polynomial(m: usize, memo: &mut HashMap<usize, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    // x^m - 1, low degree first
    let mut num = vec![0i64; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        let den = cyclotomic_polynomial(d, memo);
        num = exact_div(&num, &den);
    }
    memo.insert(m, num.clone());
    num
}

/// Division of integer polynomials by a monic divisor with zero remainder.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut q = vec![0i64; num.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] = rem[i + j].checked_sub(c.checked_mul(d).expect("overflow")).expect("overflow");
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "nonzero remainder");
    q
}

fn field(m: usize) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&m) {
        return f.clone();
    }
    let mut memo = HashMap::new();
    let poly = cyclotomic_polynomial(m, &mut memo);
    let phi = poly.len() - 1;
    let mut reduce = Vec::with_capacity(m);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..m {
        reduce.push(cur.clone());
        // multiply by z and substitute z^phi = -(poly - z^phi)
        let top = cur[phi - 1];
        for j in (1..phi).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for (j, c) in cur.iter_mut().enumerate() {
                *c = c.checked_sub(top.checked_mul(poly[j]).expect("overflow")).expect("overflow");
            }
        }
    }
    let f = Arc::new(Field { m, phi, reduce });
    cache.lock().unwrap().insert(m, f.clone());
    f
}

/// Euler's totient, via the degree of the cyclotomic polynomial.
pub fn totient(m: usize) -> usize {
    field(m).phi
}

#[derive(Clone)]
pub struct Cyclotomic {
    conductor: usize,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(conductor: usize) -> Self {
        let phi = totient(conductor);
        Cyclotomic { conductor, coeffs: vec![BigRational::zero(); phi] }
    }

    pub fn from_rational(conductor: usize, r: BigRational) -> Self {
        let mut z = Cyclotomic::zero(conductor);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(conductor: usize, n: i64) -> Self {
        Cyclotomic::from_rational(conductor, BigRational::from_integer(n.into()))
    }

    /// `z^k` for a primitive `m`-th root of unity `z`.
    pub fn root_of_unity(m: usize, k: i64) -> Self {
        let f = field(m);
        let k = k.rem_euclid(m as i64) as usize;
        Cyclotomic { conductor: m, coeffs: f.reduce[k].iter().map(|&c| int(c)).collect() }
    }

    /// `sum_k counts[k] z^k` over a primitive `m`-th root of unity.
    pub fn from_power_counts(m: usize, counts: &[i64]) -> Self {
        let f = field(m);
        let mut acc = vec![0i64; f.phi];
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, &r) in acc.iter_mut().zip(&f.reduce[k % m]) {
                    *a += c * r;
                }
            }
        }
        Cyclotomic { conductor: m, coeffs: acc.into_iter().map(int).collect() }
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    /// Some(n) iff the value is a rational integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn is_rational_integer(&self) -> bool {
        self.to_integer().is_some()
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|n| n.to_i64())
    }

    /// The same number in `Q(zeta_target)`; `target` must be a multiple of the
    /// current conductor.
    pub fn promote(&self, target: usize) -> Cyclotomic {
        assert!(target.is_multiple_of(self.conductor), "conductor {} does not divide {target}", self.conductor);
        if target == self.conductor {
            return self.clone();
        }
        let f = field(target);
        let step = target / self.conductor;
        let mut out = vec![BigRational::zero(); f.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &f.reduce[(j * step) % target]);
            }
        }
        Cyclotomic { conductor: target, coeffs: out }
    }

    fn aligned(&self, other: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let m = self.conductor.lcm(&other.conductor);
        (self.promote(m), other.promote(m))
    }

    /// Galois automorphism `z -> z^k` (k coprime to the conductor).
    pub fn galois(&self, k: i64) -> Cyclotomic {
        let f = field(self.conductor);
        let m = self.conductor as i64;
        let mut out = vec![BigRational::zero(); f.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = (j as i64 * k).rem_euclid(m) as usize;
                axpy(&mut out, c, &f.reduce[e]);
            }
        }
        Cyclotomic { conductor: self.conductor, coeffs: out }
    }

    /// Complex conjugation `z -> z^-1`.
    pub fn conj(&self) -> Cyclotomic {
        if self.to_rational().is_some() {
            return self.clone();
        }
        self.galois(-1)
    }

    pub fn scale(&self, r: &BigRational) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Cyclotomic {
        self.scale(&BigRational::from_integer(n.into()))
    }

    /// Total order used for canonical sorting: conductor-aligned coefficients,
    /// compared lexicographically.
    pub fn lex_cmp(&self, other: &Cyclotomic) -> Ordering {
        let (a, b) = self.aligned(other);
        a.coeffs.cmp(&b.coeffs)
    }

    /// Coefficients as `p/q` strings, power basis order.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn axpy(out: &mut [BigRational], c: &BigRational, row: &[i64]) {
    for (o, &r) in out.iter_mut().zip(row) {
        match r {
            0 => {}
            1 => *o += c,
            -1 => *o -= c,
            _ => *o += c * int(r),
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.aligned(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.conductor == rhs.conductor {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.aligned(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if let Some(r) = rhs.to_rational() {
            return self.scale(&r);
        }
        if let Some(r) = self.to_rational() {
            return rhs.scale(&r);
        }
        let (a, b) = self.aligned(rhs);
        let f = field(a.conductor);
        let mut conv = vec![BigRational::zero(); 2 * f.phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let mut out = vec![BigRational::zero(); f.phi];
        for (k, c) in conv.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &f.reduce[k % f.m]);
            }
        }
        Cyclotomic { conductor: a.conductor, coeffs: out }
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match j {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => write!(f, "z{}^{j}", self.conductor)?,
                _ => write!(f, "{a}*z{}^{j}", self.conductor)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[{}]({})", self.conductor, self)
    }
}
