//! Randomized identities between restriction, induction and the table.

use std::sync::OnceLock;

use pgv::catalog::{cyclic, direct_product, heisenberg};
use pgv::subgroup::all_subgroups;
use pgv::{CharacterTable, ClassFunction, SubgroupSet};
use proptest::prelude::*;

struct Fixture {
    table: CharacterTable,
    subgroups: Vec<SubgroupSet>,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let g = direct_product(&[cyclic(3).unwrap(), heisenberg(3).unwrap()]).unwrap();
        let table = CharacterTable::compute(&g).unwrap();
        let subgroups = all_subgroups(&g, None).unwrap();
        Fixture { table, subgroups }
    })
}

fn combination(chars: &[ClassFunction], coeffs: &[u8]) -> ClassFunction {
    let mut f = ClassFunction::zero(chars[0].group());
    for (c, &k) in chars.iter().zip(coeffs) {
        f = f.add(&c.scale(k as i64)).unwrap();
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frobenius_reciprocity(hi in 0usize..1000, coeffs in prop::collection::vec(0u8..3, 1..6), gi in 0usize..1000) {
        let fx = fixture();
        let h = &fx.subgroups[hi % fx.subgroups.len()];
        let (hg, emb) = h.as_group();
        let ht = CharacterTable::compute(&hg).unwrap();
        let psi = combination(ht.irreducibles(), &coeffs);
        let chi = &fx.table.irreducibles()[gi % fx.table.len()];
        let lhs = psi.induce(emb).unwrap().inner_product(chi).unwrap();
        let rhs = psi.inner_product(&chi.restrict(h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn induced_and_restricted_characters_are_characters(hi in 0usize..1000, ci in 0usize..1000) {
        let fx = fixture();
        let h = &fx.subgroups[hi % fx.subgroups.len()];
        let (hg, emb) = h.as_group();
        let ht = CharacterTable::compute(&hg).unwrap();
        let chi = &fx.table.irreducibles()[ci % fx.table.len()];
        let res = chi.restrict(h).unwrap();
        let m = ht.is_character(&res).unwrap();
        prop_assert_eq!(m.0.iter().sum::<u64>() > 0, true);
        let psi = &ht.irreducibles()[ci % ht.len()];
        let ind = psi.induce(emb).unwrap();
        let m = fx.table.is_character(&ind).unwrap();
        let degree: u64 = m.0.iter().zip(fx.table.degrees()).map(|(a, d)| a * d).sum();
        prop_assert_eq!(Some(degree as i64), ind.degree().to_i64());
    }

    #[test]
    fn inner_product_is_hermitian(a in prop::collection::vec(0u8..4, 1..12), b in prop::collection::vec(0u8..4, 1..12)) {
        let chars = fixture().table.irreducibles();
        let f = combination(chars, &a);
        let g = combination(chars, &b);
        prop_assert_eq!(f.inner_product(&g).unwrap(), g.inner_product(&f).unwrap().conj());
        let expect: i64 = a.iter().zip(&b).map(|(x, y)| *x as i64 * *y as i64).sum();
        prop_assert_eq!(f.inner_product(&g).unwrap().to_i64(), Some(expect));
    }
}

#[test]
fn transitivity_of_induction() {
    let fx = fixture();
    // a chain K < H < G inside the 81-element group
    let h = fx.subgroups.iter().find(|h| h.order() == 27 && !h.is_abelian()).unwrap();
    let k = fx.subgroups.iter().find(|k| k.order() == 3 && k.is_subgroup_of(h)).unwrap();
    let (kg, k_in_g) = k.as_group();
    let k_in_h = k.within(h).unwrap();
    let (khg, k_emb_h) = k_in_h.as_group();
    let (_, h_emb) = h.as_group();
    for (direct, local) in [
        (ClassFunction::trivial(&kg), ClassFunction::trivial(&khg)),
        (ClassFunction::regular(&kg), ClassFunction::regular(&khg)),
    ] {
        let staged = local.induce(k_emb_h).unwrap().induce(h_emb).unwrap();
        assert_eq!(direct.induce(k_in_g).unwrap(), staged);
    }
}
