//! Class functions with exact cyclotomic values, stored one value per
//! conjugacy class.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cyclotomic::Cyclotomic;
use crate::embedding::GroupEmbedding;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::subgroup::SubgroupSet;

#[derive(Clone)]
pub struct ClassFunction {
    group: Arc<Group>,
    values: Vec<Cyclotomic>,
}

fn rat(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl ClassFunction {
    /// `values[k]` is the value on class `k` of `group.classes()`.
    pub fn new(group: Arc<Group>, values: Vec<Cyclotomic>) -> Self {
        assert_eq!(values.len(), group.classes().len(), "one value per conjugacy class");
        ClassFunction { group, values }
    }

    /// Evaluates `f` on each class representative.
    pub fn from_fn(group: &Arc<Group>, f: impl Fn(usize) -> Cyclotomic) -> Self {
        let values = group.classes().representatives().map(f).collect();
        ClassFunction { group: group.clone(), values }
    }

    pub fn from_integers(group: &Arc<Group>, f: impl Fn(usize) -> i64) -> Self {
        let e = group.exponent();
        ClassFunction::from_fn(group, |x| Cyclotomic::from_int(e, f(x)))
    }

    /// The constant function `c`.
    pub fn constant(group: &Arc<Group>, c: i64) -> Self {
        ClassFunction::from_integers(group, |_| c)
    }

    pub fn trivial(group: &Arc<Group>) -> Self {
        ClassFunction::constant(group, 1)
    }

    pub fn zero(group: &Arc<Group>) -> Self {
        ClassFunction::constant(group, 0)
    }

    /// `|G|` at the identity, 0 elsewhere.
    pub fn regular(group: &Arc<Group>) -> Self {
        let n = group.order() as i64;
        ClassFunction::from_integers(group, |x| if x == 0 { n } else { 0 })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value_on_class(&self, k: usize) -> &Cyclotomic {
        &self.values[k]
    }

    pub fn value(&self, x: usize) -> &Cyclotomic {
        &self.values[self.group.classes().class_of(x)]
    }

    pub fn degree(&self) -> &Cyclotomic {
        &self.values[0]
    }

    pub fn same_group(&self, other: &ClassFunction) -> bool {
        self.group.same_as(&other.group)
    }

    fn zip_with(&self, other: &ClassFunction, f: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic) -> Result<Self> {
        if !self.same_group(other) {
            return Err(Error::GroupMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        Ok(ClassFunction { group: self.group.clone(), values })
    }

    pub fn add(&self, other: &ClassFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn product(&self, other: &ClassFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, n: i64) -> Self {
        ClassFunction { group: self.group.clone(), values: self.values.iter().map(|v| v.scale_int(n)).collect() }
    }

    pub fn conj(&self) -> Self {
        ClassFunction { group: self.group.clone(), values: self.values.iter().map(|v| v.conj()).collect() }
    }

    /// Copy with the value on class `k` replaced.
    pub fn with_value(&self, k: usize, v: Cyclotomic) -> Self {
        let mut out = self.clone();
        out.values[k] = v;
        out
    }

    /// `(1/|G|) sum_g f(g) conj(g_val(g))`.
    pub fn inner_product(&self, other: &ClassFunction) -> Result<Cyclotomic> {
        if !self.same_group(other) {
            return Err(Error::GroupMismatch);
        }
        let classes = self.group.classes();
        let mut acc: Option<Cyclotomic> = None;
        for (k, (a, b)) in self.values.iter().zip(&other.values).enumerate() {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let term = (a * &b.conj()).scale_int(classes.size(k) as i64);
            match &mut acc {
                Some(s) => *s += &term,
                None => acc = Some(term),
            }
        }
        let n = self.group.order();
        Ok(match acc {
            Some(s) => s.scale(&rat(1, n)),
            None => Cyclotomic::zero(self.values[0].conductor()),
        })
    }

    /// Pullback along an embedding `H -> G` where `self` lives on `G`.
    pub fn restrict_along(&self, emb: &GroupEmbedding) -> Result<Self> {
        if !emb.target().same_as(&self.group) {
            return Err(Error::GroupMismatch);
        }
        let src = emb.source();
        Ok(ClassFunction::from_fn(src, |x| self.value(emb.apply(x)).clone()))
    }

    /// Restriction to a subgroup, as a class function on its standalone group.
    pub fn restrict(&self, h: &SubgroupSet) -> Result<Self> {
        let (_, emb) = h.as_group();
        self.restrict_along(emb)
    }

    /// Transport along a conjugation: returns `x -> self(g^-1 x g)` on
    /// `group`, i.e. the class function of `c_g` pushed forward. On the whole
    /// group this is the identity; it is used for subgroup-local functions.
    pub fn pullback_fn(&self, group: &Arc<Group>, map: impl Fn(usize) -> usize) -> Self {
        ClassFunction::from_fn(group, |x| self.value(map(x)).clone())
    }

    /// Induction along `emb: H -> G` where `self` lives on `H`:
    /// `(Ind f)(g) = |C_G(g)|/|H| * sum_{h in H, h ~_G g} f(h)`.
    pub fn induce(&self, emb: &GroupEmbedding) -> Result<Self> {
        if !emb.source().same_as(&self.group) {
            return Err(Error::GroupMismatch);
        }
        let g = emb.target();
        let gc = g.classes();
        let hc = self.group.classes();
        let conductor = self.values[0].conductor().max(1);
        let mut sums: Vec<Option<Cyclotomic>> = vec![None; gc.len()];
        for k in 0..hc.len() {
            let v = &self.values[k];
            if v.is_zero() {
                continue;
            }
            // every element of an H-class lands in a single G-class
            let target = gc.class_of(emb.apply(hc.representative(k)));
            let term = v.scale_int(hc.size(k) as i64);
            match &mut sums[target] {
                Some(s) => *s += &term,
                None => sums[target] = Some(term),
            }
        }
        let hn = self.group.order();
        let values = sums
            .into_iter()
            .enumerate()
            .map(|(k, s)| match s {
                Some(s) => s.scale(&rat(g.order(), gc.size(k) * hn)),
                None => Cyclotomic::zero(conductor),
            })
            .collect();
        Ok(ClassFunction { group: g.clone(), values })
    }

    /// `f` as a rational-integer vector, if every value is one.
    pub fn integer_values(&self) -> Option<Vec<BigInt>> {
        self.values.iter().map(|v| v.to_integer()).collect()
    }

    /// Text block: `conductor m`, then `rep c0 c1 ...` per class.
    pub fn to_text(&self) -> String {
        let classes = self.group.classes();
        let m = self.values.iter().map(|v| v.conductor()).max().unwrap_or(1);
        let mut s = format!("conductor {m}\n");
        for (k, v) in self.values.iter().enumerate() {
            let v = v.promote(m);
            s.push_str(&format!("{} {}\n", classes.representative(k), v.coeff_strings().join(" ")));
        }
        s
    }
}

/// Number of cosets `xH` fixed by each class representative of `G`, counted
/// directly on the coset space.
pub fn perm_character(h: &SubgroupSet) -> ClassFunction {
    let g = h.parent();
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        reps.push(x);
        for y in h.elements() {
            seen[g.mul(x, y)] = true;
        }
    }
    ClassFunction::from_integers(g, |t| {
        reps.iter().filter(|&&x| h.contains(g.mul(g.inv(x), g.mul(t, x)))).count() as i64
    })
}

/// The reduced permutation character `C[G/H] - C`.
pub fn reduced_perm_character(h: &SubgroupSet) -> ClassFunction {
    perm_character(h).sub(&ClassFunction::trivial(h.parent())).expect("same group")
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other) && self.values == other.values
    }
}

impl fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.values.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, heisenberg};
    use crate::subgroup::{all_subgroups, center};

    #[test]
    fn trivial_and_regular_products() {
        let g = heisenberg(3).unwrap();
        let one = ClassFunction::trivial(&g);
        assert_eq!(one.inner_product(&one).unwrap(), Cyclotomic::from_int(3, 1));
        let reg = ClassFunction::regular(&g);
        assert_eq!(reg.inner_product(&one).unwrap(), Cyclotomic::from_int(3, 1));
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let a = ClassFunction::trivial(&cyclic(3).unwrap());
        let b = ClassFunction::trivial(&cyclic(3).unwrap());
        assert_eq!(a.inner_product(&b), Err(Error::GroupMismatch));
    }

    #[test]
    fn induction_from_trivial_is_regular_and_perm() {
        let g = heisenberg(3).unwrap();
        let triv = SubgroupSet::trivial(&g);
        let (t, emb) = triv.as_group();
        let ind = ClassFunction::trivial(&t).induce(emb).unwrap();
        assert_eq!(ind, ClassFunction::regular(&g));
        for h in all_subgroups(&g, None).unwrap() {
            let (hg, emb) = h.as_group();
            let ind = ClassFunction::trivial(&hg).induce(emb).unwrap();
            assert_eq!(ind, perm_character(&h), "{h:?}");
            assert_eq!(ind.degree().to_i64(), Some(h.index() as i64));
        }
    }

    #[test]
    fn restriction_to_trivial_is_constant() {
        let g = heisenberg(3).unwrap();
        let f = ClassFunction::from_integers(&g, |x| g.element_order(x) as i64);
        let r = f.restrict(&SubgroupSet::trivial(&g)).unwrap();
        assert_eq!(r.values().len(), 1);
        assert_eq!(r.degree().to_i64(), Some(1));
        let z = f.restrict(&center(&g)).unwrap();
        assert_eq!(z, ClassFunction::from_integers(z.group(), |x| if x == 0 { 1 } else { 3 }));
    }

    #[test]
    fn reduced_perm_of_whole_group_vanishes() {
        let g = cyclic(9).unwrap();
        assert_eq!(reduced_perm_character(&SubgroupSet::whole(&g)), ClassFunction::zero(&g));
        let c3 = cyclic(3).unwrap();
        let red = reduced_perm_character(&SubgroupSet::trivial(&c3));
        assert_eq!(red.degree().to_i64(), Some(2));
    }
}
