//! Irreducible character tables by the Burnside-Dixon method, and character
//! recognition.
//!
//! The class sums span the center of the group algebra; each irreducible
//! `chi` gives a common eigenvector `omega_chi(K_j) = |K_j| chi(g_j) / chi(1)`
//! of the class multiplication matrices. These are split modulo a prime
//! `l = 1 (mod exp G)`, `l > 2 sqrt|G|`, where the degree and the
//! eigenvalue multiplicities of every `rho(g)` are small enough to be read
//! off uniquely, which gives the exact values.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::class_function::ClassFunction;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{Group, ORDER_CAP};
use crate::modp::{dixon_prime, Fp};

#[derive(Clone)]
pub struct CharacterTable {
    group: Arc<Group>,
    irreducibles: Vec<ClassFunction>,
}

/// Multiplicities `<f, chi_i>` of a class function that is a character.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Multiplicities(pub Vec<u64>);

impl Multiplicities {
    /// Multiplicity of the trivial character (always row 0 of a table).
    pub fn trivial(&self) -> u64 {
        self.0[0]
    }
}

impl CharacterTable {
    pub fn compute(group: &Arc<Group>) -> Result<CharacterTable> {
        if group.order() > ORDER_CAP {
            return Err(Error::OrderCap { order: group.order(), cap: ORDER_CAP });
        }
        let rows = dixon(group)?;
        let table = CharacterTable { group: group.clone(), irreducibles: rows };
        table.verify()?;
        Ok(table)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.irreducibles.iter().map(|c| c.degree().to_i64().unwrap_or(0) as u64).collect()
    }

    /// Exact row orthogonality, column orthogonality and `sum d^2 = |G|`.
    pub fn verify(&self) -> Result<()> {
        let g = &self.group;
        let classes = g.classes();
        let r = classes.len();
        if self.irreducibles.len() != r {
            return Err(Error::LiftFailure(format!("{} rows for {r} classes", self.irreducibles.len())));
        }
        let sq: i64 = self.degrees().iter().map(|&d| (d * d) as i64).sum();
        if sq != g.order() as i64 {
            return Err(Error::LiftFailure(format!("sum of squared degrees is {sq}")));
        }
        for (i, a) in self.irreducibles.iter().enumerate() {
            for (j, b) in self.irreducibles.iter().enumerate().skip(i) {
                let ip = a.inner_product(b)?;
                if ip.to_i64() != Some((i == j) as i64) {
                    return Err(Error::LiftFailure(format!("<chi_{i}, chi_{j}> = {ip}")));
                }
            }
        }
        // column orthogonality: sum_chi chi(g_k) conj(chi(g_l)) = delta |C(g_k)|
        let e = g.exponent();
        for k in 0..r {
            for l in k..r {
                let mut s = Cyclotomic::zero(e);
                for chi in &self.irreducibles {
                    s += &(chi.value_on_class(k) * &chi.value_on_class(l).conj());
                }
                let expect = if k == l { (g.order() / classes.size(k)) as i64 } else { 0 };
                if s != Cyclotomic::from_int(e, expect) {
                    return Err(Error::LiftFailure(format!("columns {k}, {l} give {s}")));
                }
            }
        }
        Ok(())
    }

    /// `<f, chi_i>` for every row, if each is a nonnegative rational integer.
    pub fn is_character(&self, f: &ClassFunction) -> Result<Multiplicities> {
        if !f.group().same_as(&self.group) {
            return Err(Error::GroupMismatch);
        }
        let mut out = Vec::with_capacity(self.len());
        for (i, chi) in self.irreducibles.iter().enumerate() {
            let ip = f.inner_product(chi)?;
            match ip.to_integer() {
                Some(n) if !n.is_negative() => out.push(u64::try_from(n).map_err(|_| Error::Invalid("overflow".into()))?),
                _ => return Err(Error::NotCharacter { index: i, value: ip.to_string() }),
            }
        }
        Ok(Multiplicities(out))
    }

    /// Text form: one class-function block per row, separated by blank lines.
    pub fn to_text(&self) -> String {
        let classes = self.group.classes();
        let mut s = format!(
            "group {} order {} classes {}\nsizes {}\n",
            self.group.label(),
            self.group.order(),
            classes.len(),
            (0..classes.len()).map(|k| classes.size(k).to_string()).collect::<Vec<_>>().join(" ")
        );
        for (i, chi) in self.irreducibles.iter().enumerate() {
            s.push_str(&format!("\nchi {i} degree {}\n", chi.degree()));
            s.push_str(&chi.to_text());
        }
        s
    }
}

/// True iff every nonidentity element has a zero-dimensional fixed space,
/// i.e. `(1/|<h>|) sum_k f(h^k) = 0` for all `h != 1`. Fails with
/// `NotCharacter` unless `f` is a character.
pub fn fixed_point_free(f: &ClassFunction, table: &CharacterTable) -> Result<bool> {
    table.is_character(f)?;
    Ok(acts_freely(f))
}

/// The per-element fixed-dimension test without the character check.
pub fn acts_freely(f: &ClassFunction) -> bool {
    first_fixed_element(f).is_none()
}

/// Least nonidentity element with a nonzero fixed-space dimension.
pub fn first_fixed_element(f: &ClassFunction) -> Option<usize> {
    let g = f.group();
    let classes = g.classes();
    for h in classes.representatives().skip(1) {
        let o = g.element_order(h);
        let mut s = f.value(0).clone();
        let mut x = h;
        for _ in 1..o {
            s += f.value(x);
            x = g.mul(x, h);
        }
        if !s.is_zero() {
            return Some(h);
        }
    }
    None
}

fn dixon(g: &Arc<Group>) -> Result<Vec<ClassFunction>> {
    let classes = g.classes();
    let r = classes.len();
    let n = g.order() as u64;
    let e = g.exponent() as u64;
    let bound = 2 * (n as f64).sqrt().ceil() as u64;
    let fp = Fp::new(dixon_prime(e, bound));
    let l = fp.l;

    // c[i][j][k] = #{x in K_i : x^-1 z_k in K_j}, z_k the representative of K_k
    let mut c = vec![vec![vec![0u64; r]; r]; r];
    for (i, ci) in c.iter_mut().enumerate() {
        for &x in classes.class(i) {
            let xi = g.inv(x);
            for (k, z) in classes.representatives().enumerate() {
                let j = classes.class_of(g.mul(xi, z));
                ci[j][k] += 1;
            }
        }
    }

    // Split F_l^r into common eigenspaces of the matrices A_i with
    // (A_i w)_j = sum_k c_ijk w_k.
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r).map(|t| unit(r, t)).collect()];
    for (i, ci) in c.iter().enumerate().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let a: Vec<Vec<u64>> = ci.iter().map(|row| row.iter().map(|&v| v % l).collect()).collect();
        let mut next = Vec::new();
        for s in spaces {
            if s.len() == 1 {
                next.push(s);
                continue;
            }
            let parts = split(fp, &a, s).map_err(|m| Error::LiftFailure(format!("class matrix {i}: {m}")))?;
            next.extend(parts);
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::LiftFailure("class sums do not separate the characters".into()));
    }

    let inv_class: Vec<usize> = (0..r).map(|k| classes.inverse_class(g, k)).collect();
    let z = fp.pow(fp.primitive_root(), (l - 1) / e);
    let mut rows = Vec::with_capacity(r);
    for s in spaces {
        let v = &s[0];
        if v[0] == 0 {
            return Err(Error::LiftFailure("eigenvector vanishes at the identity".into()));
        }
        let s0 = fp.inv(v[0]);
        let w: Vec<u64> = v.iter().map(|&x| fp.mul(x, s0)).collect();
        // |G| / chi(1)^2 = sum_j w_j w_j' / |K_j|
        let mut t = 0u64;
        for j in 0..r {
            let term = fp.mul(fp.mul(w[j], w[inv_class[j]]), fp.inv(classes.size(j) as u64 % l));
            t = fp.add(t, term);
        }
        let d2 = fp.mul(n % l, fp.inv(t));
        let d = (1..=n)
            .take_while(|d| d * d <= n)
            .find(|&d| (d * d) % l == d2)
            .ok_or_else(|| Error::LiftFailure("no admissible degree".into()))?;
        let theta: Vec<u64> =
            (0..r).map(|k| fp.mul(fp.mul(w[k], d % l), fp.inv(classes.size(k) as u64 % l))).collect();
        let e_inv = fp.inv(e % l);
        let values = (0..r)
            .map(|k| {
                let x = classes.representative(k);
                // m_s = (1/e) sum_t theta(x^t) z^(-s t)
                let mut powers = Vec::with_capacity(e as usize);
                let mut y = 0usize;
                for _ in 0..e {
                    powers.push(theta[classes.class_of(y)]);
                    y = g.mul(y, x);
                }
                let mut counts = vec![0i64; e as usize];
                let mut total = 0u64;
                for (sidx, cnt) in counts.iter_mut().enumerate() {
                    let zs = fp.pow(fp.inv(z), sidx as u64);
                    let mut acc = 0u64;
                    let mut zz = 1u64;
                    for &p in &powers {
                        acc = fp.add(acc, fp.mul(p, zz));
                        zz = fp.mul(zz, zs);
                    }
                    let m = fp.mul(acc, e_inv);
                    if m > d {
                        return Err(Error::LiftFailure(format!("multiplicity {m} exceeds degree {d}")));
                    }
                    total += m;
                    *cnt = m as i64;
                }
                if total != d {
                    return Err(Error::LiftFailure(format!("multiplicities sum to {total}, not {d}")));
                }
                Ok(Cyclotomic::from_power_counts(e as usize, &counts))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(ClassFunction::new(g.clone(), values));
    }
    rows.sort_by(row_cmp);
    Ok(rows)
}

/// Trivial character first, then by degree, then lexicographically by values.
fn row_cmp(a: &ClassFunction, b: &ClassFunction) -> Ordering {
    let is_trivial = |f: &ClassFunction| f.values().iter().all(|v| v.to_i64() == Some(1));
    is_trivial(b).cmp(&is_trivial(a)).then_with(|| degree_then_values(a, b))
}

fn degree_then_values(a: &ClassFunction, b: &ClassFunction) -> Ordering {
    let da = a.degree().to_integer().unwrap_or_else(BigInt::zero);
    let db = b.degree().to_integer().unwrap_or_else(BigInt::zero);
    da.cmp(&db).then_with(|| {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| x.lex_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    })
}

fn unit(r: usize, t: usize) -> Vec<u64> {
    let mut v = vec![0; r];
    v[t] = 1;
    v
}

/// Splits the invariant subspace spanned by the reduced-echelon rows `basis`
/// into eigenspaces of `a`.
fn split(fp: Fp, a: &[Vec<u64>], mut basis: Vec<Vec<u64>>) -> std::result::Result<Vec<Vec<Vec<u64>>>, String> {
    let pivots = fp.rref(&mut basis);
    let d = basis.len();
    let r = a.len();
    // a b_s = sum_t tm[s][t] b_t; coordinates are read at the pivot columns
    let image: Vec<Vec<u64>> = basis
        .iter()
        .map(|b| {
            (0..r)
                .map(|j| a[j].iter().zip(b).fold(0u64, |acc, (&x, &y)| fp.add(acc, fp.mul(x, y))))
                .collect()
        })
        .collect();
    let tm: Vec<Vec<u64>> = image.iter().map(|v| pivots.iter().map(|&p| v[p]).collect()).collect();
    // eigenvectors x of tm^T: sum_s x_s tm[s][t] = lambda x_t
    let mut parts = Vec::new();
    let mut found = 0;
    for lambda in 0..fp.l {
        let m: Vec<Vec<u64>> = (0..d)
            .map(|t| {
                (0..d)
                    .map(|s| {
                        let v = tm[s][t];
                        if s == t {
                            fp.sub(v, lambda)
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        let ns = fp.nullspace(&m);
        if ns.is_empty() {
            continue;
        }
        found += ns.len();
        let mut vecs: Vec<Vec<u64>> = ns
            .iter()
            .map(|x| {
                (0..r)
                    .map(|j| (0..d).fold(0u64, |acc, s| fp.add(acc, fp.mul(x[s], basis[s][j]))))
                    .collect()
            })
            .collect();
        fp.rref(&mut vecs);
        parts.push(vecs);
        if found == d {
            break;
        }
    }
    if found != d {
        return Err(format!("operator not diagonalizable ({found} of {d})"));
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, elementary_abelian, from_permutations, heisenberg};

    fn degree_multiset(g: &Arc<Group>) -> Vec<u64> {
        CharacterTable::compute(g).unwrap().degrees()
    }

    #[test]
    fn cyclic_three() {
        let g = cyclic(3).unwrap();
        let t = CharacterTable::compute(&g).unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 1]);
        let roots: Vec<Cyclotomic> = (0..3).map(|k| Cyclotomic::root_of_unity(3, k)).collect();
        for chi in t.irreducibles() {
            assert!(chi.values().iter().all(|v| roots.contains(v)));
        }
    }

    #[test]
    fn small_degree_multisets() {
        assert_eq!(degree_multiset(&heisenberg(3).unwrap()), [vec![1; 9], vec![3; 2]].concat());
        assert_eq!(degree_multiset(&elementary_abelian(3, 2).unwrap()), vec![1; 9]);
        let s3 = from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(degree_multiset(&s3), vec![1, 1, 2]);
    }

    #[test]
    fn extraspecial_order_243() {
        let g = crate::catalog::extraspecial5(3).unwrap();
        assert_eq!(degree_multiset(&g), [vec![1; 81], vec![9; 2]].concat());
    }

    #[test]
    fn non_p_groups() {
        let a4 = from_permutations("A4", 4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).unwrap();
        assert_eq!(degree_multiset(&a4), vec![1, 1, 1, 3]);
        let s4 = from_permutations("S4", 4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]]).unwrap();
        assert_eq!(degree_multiset(&s4), vec![1, 1, 2, 3, 3]);
        let a5 = from_permutations("A5", 5, &[vec![1, 2, 0, 3, 4], vec![1, 2, 3, 4, 0]]).unwrap();
        let t = CharacterTable::compute(&a5).unwrap();
        assert_eq!(t.degrees(), vec![1, 3, 3, 4, 5]);
    }

    #[test]
    fn character_recognition() {
        let g = cyclic(3).unwrap();
        let t = CharacterTable::compute(&g).unwrap();
        let two = ClassFunction::constant(&g, 2);
        assert_eq!(t.is_character(&two).unwrap().0, vec![2, 0, 0]);
        let bad = ClassFunction::from_integers(&g, |x| if x == 0 { 1 } else { 2 });
        match t.is_character(&bad) {
            Err(Error::NotCharacter { index: 0, value }) => assert_eq!(value, "5/3"),
            other => panic!("{other:?}"),
        }
        let other = ClassFunction::trivial(&cyclic(3).unwrap());
        assert_eq!(t.is_character(&other), Err(Error::GroupMismatch));
    }

    #[test]
    fn freeness() {
        let g = cyclic(3).unwrap();
        let t = CharacterTable::compute(&g).unwrap();
        let red = ClassFunction::regular(&g).sub(&ClassFunction::trivial(&g)).unwrap();
        assert!(fixed_point_free(&red, &t).unwrap());
        assert!(!fixed_point_free(&ClassFunction::trivial(&g), &t).unwrap());
        assert!(!acts_freely(&ClassFunction::regular(&g)));
    }
}
