//! Built-in group constructors, the `name:params` descriptor grammar, and the
//! text file formats for tables and permutation generators.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{is_prime, Group, ORDER_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    ElementaryAbelian { p: usize, rank: u32 },
    /// Extraspecial of order p^3 and exponent p (for odd p).
    Heisenberg(usize),
    /// Extraspecial of order p^5 and exponent p (for odd p).
    Extraspecial5(usize),
    DirectProduct(Vec<GroupSpec>),
    /// `(Z/p)^k` extended by the cyclic group generated by an invertible
    /// `k x k` matrix over the prime field, acting on column vectors.
    Semidirect { p: usize, matrix: Vec<Vec<usize>> },
    File(PathBuf),
}

/// One line of the `catalog` listing.
pub struct CatalogEntry {
    pub name: &'static str,
    pub example: &'static str,
    pub description: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { name: "cyclic", example: "cyclic:9", description: "cyclic group of order n" },
    CatalogEntry { name: "elemab", example: "elemab:3,3", description: "elementary abelian (Z/p)^k" },
    CatalogEntry {
        name: "heisenberg",
        example: "heisenberg:3",
        description: "extraspecial p^(1+2), exponent p (upper unitriangular 3x3 over F_p)",
    },
    CatalogEntry {
        name: "extraspecial5",
        example: "extraspecial5:3",
        description: "extraspecial p^(1+4), exponent p (central product of two Heisenberg groups)",
    },
    CatalogEntry {
        name: "product",
        example: "product:cyclic:3,heisenberg:3",
        description: "direct product of the listed factors",
    },
    CatalogEntry {
        name: "semidirect",
        example: "semidirect:3:1,1,0,1",
        description: "(Z/p)^k x| <M> for an invertible row-major matrix M over F_p",
    },
    CatalogEntry {
        name: "file",
        example: "file:path/to/group.txt",
        description: "`group <label> order <n>` table or `perm <label> degree <d>` generators",
    },
];

impl GroupSpec {
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let bad = || Error::BadDescriptor(s.to_string());
        let s = s.trim();
        let (name, params) = s.split_once(':').ok_or_else(bad)?;
        let nums = |params: &str| -> Result<Vec<usize>> {
            params.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect()
        };
        match name {
            "cyclic" => match nums(params)?.as_slice() {
                [n] if *n >= 1 => Ok(GroupSpec::Cyclic(*n)),
                _ => Err(bad()),
            },
            "elemab" => match nums(params)?.as_slice() {
                [p, k] if is_prime(*p) => Ok(GroupSpec::ElementaryAbelian { p: *p, rank: *k as u32 }),
                _ => Err(bad()),
            },
            "heisenberg" => match nums(params)?.as_slice() {
                [p] if is_prime(*p) => Ok(GroupSpec::Heisenberg(*p)),
                _ => Err(bad()),
            },
            "extraspecial5" => match nums(params)?.as_slice() {
                [p] if is_prime(*p) => Ok(GroupSpec::Extraspecial5(*p)),
                _ => Err(bad()),
            },
            "semidirect" => {
                let (p, entries) = params.split_once(':').ok_or_else(bad)?;
                let p: usize = p.trim().parse().map_err(|_| bad())?;
                let entries = nums(entries)?;
                let k = (entries.len() as f64).sqrt().round() as usize;
                if !is_prime(p) || k == 0 || k * k != entries.len() {
                    return Err(bad());
                }
                let matrix = entries.chunks(k).map(|r| r.iter().map(|v| v % p).collect()).collect();
                Ok(GroupSpec::Semidirect { p, matrix })
            }
            "product" => {
                let mut factors: Vec<String> = Vec::new();
                for tok in params.split(',') {
                    let tok = tok.trim();
                    if tok.contains(':') {
                        factors.push(tok.to_string());
                    } else {
                        let last = factors.last_mut().ok_or_else(bad)?;
                        last.push(',');
                        last.push_str(tok);
                    }
                }
                if factors.is_empty() {
                    return Err(bad());
                }
                let parsed = factors.iter().map(|f| GroupSpec::parse(f)).collect::<Result<Vec<_>>>()?;
                Ok(GroupSpec::DirectProduct(parsed))
            }
            "file" if !params.is_empty() => Ok(GroupSpec::File(PathBuf::from(params))),
            _ => Err(bad()),
        }
    }

    /// The prime of a catalog p-group descriptor, when evident from the
    /// descriptor itself.
    pub fn declared_prime(&self) -> Option<usize> {
        match self {
            GroupSpec::ElementaryAbelian { p, .. }
            | GroupSpec::Heisenberg(p)
            | GroupSpec::Extraspecial5(p)
            | GroupSpec::Semidirect { p, .. } => Some(*p),
            _ => None,
        }
    }

    pub fn build(&self) -> Result<Arc<Group>> {
        match self {
            GroupSpec::Cyclic(n) => cyclic(*n),
            GroupSpec::ElementaryAbelian { p, rank } => elementary_abelian(*p, *rank),
            GroupSpec::Heisenberg(p) => heisenberg(*p),
            GroupSpec::Extraspecial5(p) => extraspecial5(*p),
            GroupSpec::DirectProduct(fs) => {
                let groups = fs.iter().map(|f| f.build()).collect::<Result<Vec<_>>>()?;
                direct_product(&groups)
            }
            GroupSpec::Semidirect { p, matrix } => semidirect(*p, matrix),
            GroupSpec::File(path) => from_file(path),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::ElementaryAbelian { p, rank } => write!(f, "elemab:{p},{rank}"),
            GroupSpec::Heisenberg(p) => write!(f, "heisenberg:{p}"),
            GroupSpec::Extraspecial5(p) => write!(f, "extraspecial5:{p}"),
            GroupSpec::DirectProduct(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "product:{}", parts.join(","))
            }
            GroupSpec::Semidirect { p, matrix } => {
                let entries: Vec<String> = matrix.iter().flatten().map(|v| v.to_string()).collect();
                write!(f, "semidirect:{p}:{}", entries.join(","))
            }
            GroupSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

fn checked_order(order: Option<usize>) -> Result<usize> {
    match order {
        Some(n) if n <= ORDER_CAP => Ok(n),
        Some(n) => Err(Error::OrderCap { order: n, cap: ORDER_CAP }),
        None => Err(Error::OrderCap { order: usize::MAX, cap: ORDER_CAP }),
    }
}

pub fn cyclic(n: usize) -> Result<Arc<Group>> {
    checked_order(Some(n))?;
    Group::from_fn(format!("cyclic({n})"), n, |a, b| (a + b) % n)
}

/// Element index = base-p digits of the coordinate vector, lowest digit first.
pub fn elementary_abelian(p: usize, rank: u32) -> Result<Arc<Group>> {
    let n = checked_order(p.checked_pow(rank))?;
    Group::from_fn(format!("elemab({p},{rank})"), n, |a, b| add_digits(a, b, p, rank as usize))
}

fn add_digits(a: usize, b: usize, p: usize, k: usize) -> usize {
    let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
    for _ in 0..k {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn digits(mut x: usize, p: usize, k: usize) -> Vec<usize> {
    let mut d = Vec::with_capacity(k);
    for _ in 0..k {
        d.push(x % p);
        x /= p;
    }
    d
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &v| acc * p + v)
}

/// Pairs `(x_1, y_1, ..., x_k, y_k, z)` with
/// `z'' = z + z' + sum_i x_i y'_i`; the centre is the `z` coordinate.
fn symplectic_extraspecial(label: String, p: usize, k: usize) -> Result<Arc<Group>> {
    let dim = 2 * k + 1;
    let n = checked_order(p.checked_pow(dim as u32))?;
    Group::from_fn(label, n, |a, b| {
        let u = digits(a, p, dim);
        let v = digits(b, p, dim);
        let mut w: Vec<usize> = (0..dim).map(|i| (u[i] + v[i]) % p).collect();
        let twist: usize = (0..k).map(|i| u[2 * i] * v[2 * i + 1]).sum();
        w[dim - 1] = (w[dim - 1] + twist) % p;
        undigits(&w, p)
    })
}

pub fn heisenberg(p: usize) -> Result<Arc<Group>> {
    symplectic_extraspecial(format!("heisenberg({p})"), p, 1)
}

pub fn extraspecial5(p: usize) -> Result<Arc<Group>> {
    symplectic_extraspecial(format!("extraspecial5({p})"), p, 2)
}

/// Element `(x_1, ..., x_r)` has index `x_1 + n_1 (x_2 + n_2 (...))`.
pub fn direct_product(factors: &[Arc<Group>]) -> Result<Arc<Group>> {
    let orders: Vec<usize> = factors.iter().map(|g| g.order()).collect();
    let n = checked_order(orders.iter().try_fold(1usize, |acc, &o| acc.checked_mul(o)))?;
    let labels: Vec<&str> = factors.iter().map(|g| g.label()).collect();
    Group::from_fn(format!("product({})", labels.join(", ")), n, |a, b| {
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for (g, &o) in factors.iter().zip(&orders) {
            out += g.mul(a % o, b % o) * place;
            a /= o;
            b /= o;
            place *= o;
        }
        out
    })
}

fn mat_mul(a: &[Vec<usize>], b: &[Vec<usize>], p: usize) -> Vec<Vec<usize>> {
    let k = a.len();
    (0..k)
        .map(|i| (0..k).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum::<usize>() % p).collect())
        .collect()
}

pub fn semidirect(p: usize, matrix: &[Vec<usize>]) -> Result<Arc<Group>> {
    let k = matrix.len();
    let bad = |msg: &str| Error::BadDescriptor(format!("semidirect: {msg}"));
    if k == 0 || matrix.iter().any(|r| r.len() != k) {
        return Err(bad("matrix must be square"));
    }
    let identity: Vec<Vec<usize>> = (0..k).map(|i| (0..k).map(|j| usize::from(i == j)).collect()).collect();
    let mut powers = vec![identity.clone()];
    let mut cur = matrix.to_vec();
    while cur != identity {
        if powers.len() > ORDER_CAP {
            return Err(bad("matrix is not invertible mod p"));
        }
        powers.push(cur.clone());
        cur = mat_mul(&cur, matrix, p);
    }
    let m = powers.len();
    let base = checked_order(p.checked_pow(k as u32))?;
    let n = checked_order(base.checked_mul(m))?;
    let apply = |s: usize, v: &[usize]| -> Vec<usize> {
        (0..k).map(|i| (0..k).map(|j| powers[s][i][j] * v[j]).sum::<usize>() % p).collect()
    };
    let entries: Vec<String> = matrix.iter().flatten().map(|v| v.to_string()).collect();
    Group::from_fn(format!("semidirect({p};{})", entries.join(",")), n, |a, b| {
        let (va, sa) = (digits(a % base, p, k), a / base);
        let (vb, sb) = (digits(b % base, p, k), b / base);
        let twisted = apply(sa, &vb);
        let v: Vec<usize> = (0..k).map(|i| (va[i] + twisted[i]) % p).collect();
        undigits(&v, p) + base * ((sa + sb) % m)
    })
}

/// Permutations of `0..degree`; the product `a * b` applies `a` first.
pub fn from_permutations(label: &str, degree: usize, generators: &[Vec<usize>]) -> Result<Arc<Group>> {
    let identity: Vec<usize> = (0..degree).collect();
    for g in generators {
        let mut seen = vec![false; degree];
        if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
            return Err(Error::BadDescriptor(format!("{label}: generator is not a permutation")));
        }
    }
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().map(|&x| b[x]).collect() };
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
    let mut head = 0;
    while head < elements.len() {
        for g in generators {
            let next = compose(&elements[head], g);
            if !index.contains_key(&next) {
                if elements.len() >= ORDER_CAP {
                    return Err(Error::OrderCap { order: ORDER_CAP + 1, cap: ORDER_CAP });
                }
                index.insert(next.clone(), elements.len());
                elements.push(next);
            }
        }
        head += 1;
    }
    elements[1..].sort();
    let index: HashMap<&[usize], usize> = elements.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let n = elements.len();
    Group::from_fn(label.to_string(), n, |a, b| index[compose(&elements[a], &elements[b]).as_slice()])
}

pub fn from_file(path: &Path) -> Result<Arc<Group>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_group_text(&text)
}

/// Parses either a `group <label> order <n>` table or a
/// `perm <label> degree <d>` generator list (cycle notation on `1..=d`).
pub fn parse_group_text(text: &str) -> Result<Arc<Group>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    match words.as_slice() {
        ["group", label, "order", n] => {
            let n: usize = n.parse().map_err(|_| perr(hline, "bad order"))?;
            if n > ORDER_CAP {
                return Err(Error::OrderCap { order: n, cap: ORDER_CAP });
            }
            let mut mult = Vec::with_capacity(n * n);
            let mut rows = 0;
            for (ln, line) in lines {
                let row = line
                    .split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| perr(ln, "bad table entry")))
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != n {
                    return Err(perr(ln, &format!("expected {n} entries, found {}", row.len())));
                }
                mult.extend(row);
                rows += 1;
            }
            if rows != n {
                return Err(perr(hline, &format!("expected {n} rows, found {rows}")));
            }
            Group::from_table(*label, n, mult)
        }
        ["perm", label, "degree", d] => {
            let d: usize = d.parse().map_err(|_| perr(hline, "bad degree"))?;
            let gens = lines.map(|(ln, l)| parse_cycles(l, d).map_err(|m| perr(ln, &m))).collect::<Result<Vec<_>>>()?;
            from_permutations(label, d, &gens)
        }
        _ => Err(perr(hline, "expected `group <label> order <n>` or `perm <label> degree <d>`")),
    }
}

/// `(1,2,3)(4,5)` or `(1 2 3)` on points `1..=degree`; `()` is the identity.
pub fn parse_cycles(line: &str, degree: usize) -> std::result::Result<Vec<usize>, String> {
    let mut perm: Vec<usize> = (0..degree).collect();
    let mut rest = line.trim();
    while !rest.is_empty() {
        let inner_end = rest.find(')').ok_or("unclosed cycle")?;
        if !rest.starts_with('(') {
            return Err(format!("unexpected text `{rest}`"));
        }
        let cycle = rest[1..inner_end]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<usize>() {
                Ok(v) if (1..=degree).contains(&v) => Ok(v - 1),
                _ => Err(format!("bad point `{t}`")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        for (i, &x) in cycle.iter().enumerate() {
            perm[x] = cycle[(i + 1) % cycle.len()];
        }
        rest = rest[inner_end + 1..].trim_start();
    }
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn commutes_everywhere(g: &Group) -> bool {
        (0..g.order()).all(|a| (0..g.order()).all(|b| g.commute(a, b)))
    }

    #[test]
    fn cyclic_nine_orders() {
        let g = cyclic(9).unwrap();
        assert_eq!(g.order(), 9);
        let gens = g.element_orders().iter().filter(|&&o| o == 9).count();
        assert_eq!(gens, 6);
        assert_eq!(g.element_orders().iter().filter(|&&o| o == 3).count(), 2);
    }

    #[test]
    fn heisenberg_three_brute_force() {
        let g = heisenberg(3).unwrap();
        assert_eq!(g.order(), 27);
        assert!((1..27).all(|x| g.element_order(x) == 3));
        assert!(!commutes_everywhere(&g));
    }

    #[test]
    fn extraspecial5_center_brute_force() {
        let g = extraspecial5(3).unwrap();
        assert_eq!(g.order(), 243);
        let center = (0..243).filter(|&z| (0..243).all(|x| g.commute(z, x))).count();
        assert_eq!(center, 3);
        assert_eq!(g.exponent(), 3);
    }

    #[test]
    fn descriptor_grammar() {
        assert_eq!(GroupSpec::parse("cyclic:27").unwrap(), GroupSpec::Cyclic(27));
        assert_eq!(
            GroupSpec::parse("product:elemab:3,2,cyclic:3").unwrap(),
            GroupSpec::DirectProduct(vec![
                GroupSpec::ElementaryAbelian { p: 3, rank: 2 },
                GroupSpec::Cyclic(3)
            ])
        );
        let s = GroupSpec::parse("product:cyclic:3,heisenberg:3").unwrap();
        assert_eq!(s.to_string(), "product:cyclic:3,heisenberg:3");
        assert_eq!(s.build().unwrap().order(), 81);
        assert!(GroupSpec::parse("elemab:4,2").is_err());
        assert!(GroupSpec::parse("bogus:3").is_err());
        assert!(GroupSpec::parse("cyclic").is_err());
    }

    #[test]
    fn semidirect_builds_heisenberg_sized_group() {
        // (Z/3)^2 x| <[[1,1],[0,1]]> has order 27 and is nonabelian
        let g = GroupSpec::parse("semidirect:3:1,1,0,1").unwrap().build().unwrap();
        assert_eq!(g.order(), 27);
        assert!(!g.is_abelian());
        assert!(semidirect(3, &[vec![0, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn order_cap_on_descriptors() {
        assert!(matches!(elementary_abelian(2, 13), Err(Error::OrderCap { .. })));
        assert!(matches!(
            GroupSpec::parse("product:cyclic:100,cyclic:100").unwrap().build(),
            Err(Error::OrderCap { .. })
        ));
    }

    #[test]
    fn permutation_file_s3() {
        let g = parse_group_text("perm S3 degree 3\n(1,2,3)\n(1 2)\n").unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn table_file_round_trip() {
        let c = cyclic(4).unwrap();
        let mut text = String::from("group C4 order 4\n");
        for a in 0..4 {
            let row: Vec<String> = (0..4).map(|b| c.mul(a, b).to_string()).collect();
            text.push_str(&row.join(" "));
            text.push('\n');
        }
        let g = parse_group_text(&text).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        assert!(parse_group_text("group C4 order 4\n0 1 2 3\n").is_err());
    }
}
