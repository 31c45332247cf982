//! Model groups `C_{p^n} x C_p`, `C_{p^n} ⋊ C_p` and a brute-force
//! isomorphism test for small groups.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog::{cyclic, direct_product};
use crate::error::Result;
use crate::group::Group;

/// `C_{p^n} ⋊ C_p` with the generator of `C_p` acting by `k -> k^(1+p^(n-1))`.
/// Elements are `k + p^n s` for `(k, s)`.
pub fn twisted_metacyclic(p: usize, n: u32) -> Result<Arc<Group>> {
    let m = p.pow(n);
    let r = 1 + p.pow(n - 1);
    // r^s mod m
    let rs: Vec<usize> = (0..p).scan(1usize, |acc, _| {
        let v = *acc;
        *acc = *acc * r % m;
        Some(v)
    }).collect();
    Group::from_fn(format!("C{m}:C{p}"), m * p, |a, b| {
        let (k1, s1) = (a % m, a / m);
        let (k2, s2) = (b % m, b / m);
        (k1 + rs[s1] * k2) % m + m * ((s1 + s2) % p)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Cyclic,
    DirectProduct,
    Twisted,
    Other,
}

/// Which of the three shapes `H` has, given `|K| = p^n` for the cyclic
/// index-`p` subgroup `K`.
pub fn classify_shape(h: &Arc<Group>, p: usize, n: u32) -> Result<Shape> {
    if h.order() != p.pow(n + 1) {
        return Ok(Shape::Other);
    }
    if h.element_orders().iter().any(|&o| o as usize == h.order()) {
        return Ok(Shape::Cyclic);
    }
    let dp = direct_product(&[cyclic(p.pow(n))?, cyclic(p)?])?;
    if isomorphic(h, &dp) {
        return Ok(Shape::DirectProduct);
    }
    if n >= 2 && isomorphic(h, &*twisted_metacyclic(p, n)?) {
        return Ok(Shape::Twisted);
    }
    Ok(Shape::Other)
}

/// Brute-force isomorphism test: maps the greedy generators of `a` to every
/// tuple of `b`-elements with the same orders and checks whether the
/// induced map is a well-defined bijective homomorphism.
pub fn isomorphic(a: &Group, b: &Group) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let mut sa: Vec<u32> = a.element_orders().to_vec();
    let mut sb: Vec<u32> = b.element_orders().to_vec();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    let gens = greedy_generators(a);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| (0..b.order()).filter(|&y| b.element_order(y) == a.element_order(x)).collect())
        .collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if extends(a, b, &gens, &images) {
            return true;
        }
        // odometer
        let mut t = 0;
        loop {
            if t == choice.len() {
                return false;
            }
            choice[t] += 1;
            if choice[t] < candidates[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
    }
}

fn greedy_generators(a: &Group) -> Vec<usize> {
    let mut reached = vec![false; a.order()];
    reached[0] = true;
    let mut count = 1;
    let mut gens = Vec::new();
    // prefer elements of large order
    let mut order: Vec<usize> = (0..a.order()).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(a.element_order(x)));
    for x in order {
        if count == a.order() {
            break;
        }
        if reached[x] {
            continue;
        }
        gens.push(x);
        let mut queue: VecDeque<usize> = (0..a.order()).filter(|&y| reached[y]).collect();
        while let Some(y) = queue.pop_front() {
            for &s in &gens {
                let z = a.mul(y, s);
                if !reached[z] {
                    reached[z] = true;
                    count += 1;
                    queue.push_back(z);
                }
            }
        }
    }
    gens
}

/// Builds the map by breadth-first search over words in `gens` and checks
/// consistency, bijectivity and the homomorphism property.
fn extends(a: &Group, b: &Group, gens: &[usize], images: &[usize]) -> bool {
    let mut map = vec![usize::MAX; a.order()];
    let mut hit = vec![false; b.order()];
    map[0] = 0;
    hit[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = a.mul(x, s);
            let fy = b.mul(map[x], t);
            if map[y] == usize::MAX {
                if hit[fy] {
                    return false;
                }
                map[y] = fy;
                hit[fy] = true;
                queue.push_back(y);
            } else if map[y] != fy {
                return false;
            }
        }
    }
    if map.contains(&usize::MAX) {
        return false;
    }
    (0..a.order()).all(|x| (0..a.order()).all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{elementary_abelian, heisenberg};

    #[test]
    fn metacyclic_model() {
        let m = twisted_metacyclic(3, 2).unwrap();
        assert_eq!(m.order(), 27);
        assert!(!m.is_abelian());
        assert_eq!(m.exponent(), 9);
        assert!(!isomorphic(&m, &heisenberg(3).unwrap()));
        assert!(isomorphic(&m, &m));
    }

    #[test]
    fn shapes() {
        let e = elementary_abelian(3, 2).unwrap();
        assert_eq!(classify_shape(&e, 3, 1).unwrap(), Shape::DirectProduct);
        assert_eq!(classify_shape(&cyclic(9).unwrap(), 3, 1).unwrap(), Shape::Cyclic);
        assert_eq!(classify_shape(&twisted_metacyclic(3, 2).unwrap(), 3, 2).unwrap(), Shape::Twisted);
        assert_eq!(classify_shape(&heisenberg(3).unwrap(), 3, 2).unwrap(), Shape::Other);
        let c9c3 = direct_product(&[cyclic(9).unwrap(), cyclic(3).unwrap()]).unwrap();
        assert!(isomorphic(&c9c3, &direct_product(&[cyclic(3).unwrap(), cyclic(9).unwrap()]).unwrap()));
        assert!(!isomorphic(&c9c3, &twisted_metacyclic(3, 2).unwrap()));
    }
}
