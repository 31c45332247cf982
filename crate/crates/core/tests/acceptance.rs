//! One line per acceptance criterion, then a nonzero exit if any failed.
//! Runs without the libtest harness so the lines always show.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use pgv::biset::{sweep_mu, valid_triples};
use pgv::catalog::{elementary_abelian, extraspecial5};
use pgv::constructions::jackson::{self, corrupt_chi, scale_rep, JacksonData};
use pgv::constructions::rank_one::{verify_rank_one, RankOneData, RepKind};
use pgv::report::{all_report, jackson_report, RunOptions};
use pgv::subgroup::{all_subgroups, center, normalizer};
use pgv::{CharacterTable, Cyclotomic, Group, GroupSpec};

/// Wall-clock budgets, with the release-mode test profile.
const TABLES_BUDGET: Duration = Duration::from_secs(60);
const CHI_BUDGET: Duration = Duration::from_secs(600);
const SWEEP_BUDGET: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn build(desc: &str) -> Arc<Group> {
    GroupSpec::parse(desc).and_then(|s| s.build()).unwrap_or_else(|e| panic!("{desc}: {e}"))
}

fn int(n: usize) -> Cyclotomic {
    Cyclotomic::from_int(1, n as i64)
}

/// Row and column orthogonality recomputed from the table entries.
fn orthogonality(table: &CharacterTable) -> Result<(), String> {
    let g = table.group();
    let classes = g.classes();
    let chars = table.irreducibles();
    let k = classes.len();
    ensure(chars.len() == k, || format!("{} characters for {k} classes", chars.len()))?;
    for (i, a) in chars.iter().enumerate() {
        for (j, b) in chars.iter().enumerate() {
            let mut sum = Cyclotomic::zero(1);
            for c in 0..k {
                let term = &(a.value_on_class(c) * &b.value_on_class(c).conj()) * &int(classes.size(c));
                sum += &term;
            }
            let expect = if i == j { int(g.order()) } else { Cyclotomic::zero(1) };
            ensure(sum == expect, || format!("rows {i},{j} of {} give {sum}", g.label()))?;
        }
    }
    for c in 0..k {
        for d in 0..k {
            let mut sum = Cyclotomic::zero(1);
            for x in chars {
                sum += &(x.value_on_class(c) * &x.value_on_class(d).conj());
            }
            let expect = if c == d { int(g.order() / classes.size(c)) } else { Cyclotomic::zero(1) };
            ensure(sum == expect, || format!("columns {c},{d} of {} give {sum}", g.label()))?;
        }
    }
    let squares: u64 = table.degrees().iter().map(|d| d * d).sum();
    ensure(squares == g.order() as u64, || format!("sum of squared degrees {squares} for {}", g.label()))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let groups = ["cyclic:3", "cyclic:9", "cyclic:27", "elemab:3,2", "elemab:3,3", "heisenberg:3", "extraspecial5:3"];
    for desc in groups {
        let table = CharacterTable::compute(&build(desc)).map_err(|e| format!("{desc}: {e}"))?;
        orthogonality(&table)?;
    }
    let t = start.elapsed();
    ensure(t < TABLES_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{} tables exact, {:.1}s", groups.len(), t.as_secs_f64()))
}

/// Closure by repeated multiplication, independent of the library's.
fn naive_closure(g: &Group, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([0]);
    let mut frontier = vec![0];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Subgroups as closures of every subset of at most `d` elements; enough
/// for groups generated by `d` elements in each subgroup.
fn oracle_subgroup_count(g: &Group, d: usize) -> usize {
    let n = g.order();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(gens) = stack.pop() {
        seen.insert(naive_closure(g, &gens).into_iter().collect());
        if gens.len() < d {
            let from = gens.last().map_or(1, |&l| l + 1);
            for x in from..n {
                let mut next = gens.clone();
                next.push(x);
                stack.push(next);
            }
        }
    }
    seen.len()
}

fn oracle_class_count(g: &Group) -> usize {
    let mut seen = vec![false; g.order()];
    let mut count = 0;
    for x in 0..g.order() {
        if !seen[x] {
            count += 1;
            for y in 0..g.order() {
                seen[g.conj(y, x)] = true;
            }
        }
    }
    count
}

fn criterion_2() -> Outcome {
    // every subgroup here needs at most this many generators
    let cases = [("cyclic:9", 1, 3), ("elemab:3,3", 3, 28), ("heisenberg:3", 2, 19)];
    for (desc, d, expect) in cases {
        let g = build(desc);
        let lib = all_subgroups(&g, None).map_err(|e| e.to_string())?.len();
        let oracle = oracle_subgroup_count(&g, d);
        ensure(lib == expect && oracle == expect, || format!("{desc}: library {lib}, oracle {oracle}, expected {expect}"))?;
    }
    for (desc, expect) in [("heisenberg:3", 11), ("extraspecial5:3", 83)] {
        let g = build(desc);
        let lib = g.classes().len();
        let oracle = oracle_class_count(&g);
        ensure(lib == expect && oracle == expect, || format!("{desc}: library {lib} classes, oracle {oracle}, expected {expect}"))?;
    }
    Ok("subgroups 3/28/19, classes 11/83".into())
}

fn extraspecial_data() -> JacksonData {
    JacksonData::build(&extraspecial5(3).unwrap()).expect("construction applies")
}

fn criterion_3(d: &JacksonData, built_in: Duration) -> Outcome {
    let start = Instant::now();
    ensure(d.chi.degree().to_i64() == Some(1458), || format!("chi(1) = {}", d.chi.degree()))?;
    let c_sub = d.c_subgroup();
    for x in d.q.elements().filter(|&x| !c_sub.contains(x)) {
        ensure(d.chi.value(x).to_i64() == Some(-729), || format!("chi({x}) = {} on Q minus <c>", d.chi.value(x)))?;
    }
    let (i, ii) = jackson::verify_restrictions(d);
    ensure(i.passed(), || format!("restrictions: {:?}", i.witness))?;
    ensure(ii.passed(), || format!("rank two: {:?}", ii.witness))?;
    let t = built_in + start.elapsed();
    ensure(t < CHI_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{} members are characters, {} rank-two members with <chi|_E, 1> = 0, {:.1}s", i.checked, ii.checked, t.as_secs_f64()))
}

fn criterion_4(d: &JacksonData) -> Outcome {
    let vs = jackson::verify_factorization(d);
    for v in &vs {
        ensure(v.passed(), || format!("{}: {:?}", v.check, v.witness))?;
    }
    Ok(format!("{} on {} members, identities checked on {}", vs[0].check, vs[0].checked, vs[4].checked))
}

fn criterion_5(d: &JacksonData) -> Outcome {
    let v = jackson::verify_connectivity(d);
    ensure(v.passed(), || format!("{:?}", v.witness))?;
    Ok(format!("{} with {} instances checked", v.check, v.checked))
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    for (desc, expect_m) in [("cyclic:9", Some(6)), ("heisenberg:3", Some(18)), ("elemab:3,2", None)] {
        let g = build(desc);
        let d = RankOneData::build(&g, None, RepKind::ReducedRegular).map_err(|e| format!("{desc}: {e}"))?;
        let vs = verify_rank_one(&d);
        for v in &vs[..5] {
            ensure(v.passed(), || format!("{desc} {}: {:?}", v.check, v.witness))?;
        }
        let (p, _) = g.prime_power().expect("p-group");
        for (cls, m) in d.classes.iter().zip(&d.m) {
            let want = normalizer(&g, cls).order() * (p - 1) / p;
            ensure(*m == want, || format!("{desc}: m_d = {m} for {}, expected {want}", cls.tag()))?;
        }
        if let Some(want) = expect_m {
            let z = center(&g);
            let i = d.classes.iter().position(|c| c.is_subgroup_of(&z)).expect("central class");
            ensure(d.m[i] == want, || format!("{desc}: central m_d = {}", d.m[i]))?;
        }
        parts.push(format!("{desc} m={:?}", d.m));
    }
    Ok(parts.join(", "))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let groups = [
        "cyclic:3",
        "cyclic:9",
        "cyclic:27",
        "cyclic:81",
        "elemab:3,2",
        "elemab:3,3",
        "elemab:3,4",
        "heisenberg:3",
        "product:cyclic:3,cyclic:9",
        "product:cyclic:9,cyclic:9",
        "product:cyclic:3,cyclic:27",
        "product:cyclic:3,heisenberg:3",
        "semidirect:3:1,1,0,1",
        "cyclic:25",
        "elemab:5,2",
        "cyclic:8",
        "elemab:2,3",
        "product:cyclic:2,cyclic:4",
    ];
    let mut triples = 0;
    for desc in groups {
        let g = build(desc);
        ensure(g.order() <= 81, || format!("{desc} has order {}", g.order()))?;
        let expected = valid_triples(&all_subgroups(&g, None).map_err(|e| e.to_string())?).len();
        let v = sweep_mu(&g).map_err(|e| format!("{desc}: {e}"))?;
        ensure(v.passed() && v.checked == expected, || format!("{desc}: {:?} after {} of {expected}", v.witness, v.checked))?;
        triples += expected;
    }
    let t = start.elapsed();
    ensure(t < SWEEP_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{triples} triples over {} groups, {:.1}s", groups.len(), t.as_secs_f64()))
}

fn criterion_8(d: &JacksonData) -> Outcome {
    // corrupt one value of chi: only the restriction check fails
    let k = d.g.classes().class_of(d.a);
    let bad = d.with_chi(corrupt_chi(d, k, -728)).map_err(|e| e.to_string())?;
    let (i, _) = jackson::verify_restrictions(&bad);
    ensure(i.failed() && i.witness.is_some(), || "corrupted chi still restricts to characters".into())?;

    // full regular in rho_d: only freeness (and the multiplier formula) fails
    let g = elementary_abelian(3, 2).unwrap();
    let full = RankOneData::build(&g, None, RepKind::FullRegular).map_err(|e| e.to_string())?;
    let vs = verify_rank_one(&full);
    ensure(vs[..4].iter().all(|v| v.passed()), || "full regular broke an unrelated check".into())?;
    ensure(vs[4].failed() && vs[4].witness.is_some(), || "full regular still acts freely".into())?;

    // scale one rho_d: only factorization fails
    let scaled = scale_rep(d, 0, 2);
    let vs = jackson::verify_factorization(&scaled);
    ensure(vs[0].failed() && vs[0].witness.is_some(), || "scaled rho_d still factors".into())?;
    ensure(vs[1..].iter().all(|v| v.passed()), || "scaling broke an unrelated check".into())?;
    Ok("three perturbations each flip exactly their check, with witnesses".into())
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("pool").install(f)
}

fn criterion_9() -> Outcome {
    let opts = RunOptions::default();
    let mut checked = 0;
    for desc in ["heisenberg:3", "elemab:3,3", "extraspecial5:3"] {
        let g = build(desc);
        let run = |threads| {
            in_pool(threads, || {
                let chi = jackson_report(desc, &g, &opts).map(|r| r.to_json());
                let all = all_report(desc, &g, &opts).map(|r| r.to_json());
                (chi.map_err(|e| e.to_string()), all.map_err(|e| e.to_string()))
            })
        };
        let first = run(1);
        for threads in [1, 4, 3] {
            ensure(run(threads) == first, || format!("{desc}: report differs with {threads} threads"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} repeated runs byte-identical across 1, 3 and 4 threads"))
}

fn main() {
    let start = Instant::now();
    let d = extraspecial_data();
    let built_in = start.elapsed();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "character tables exact", criterion_1()),
        (2, "structure oracles", criterion_2()),
        (3, "chi restrictions and rank-two freeness", criterion_3(&d, built_in)),
        (4, "factorization and identities", criterion_4(&d)),
        (5, "almost strongly connected", criterion_5(&d)),
        (6, "rank-one star construction", criterion_6()),
        (7, "biset sweep", criterion_7()),
        (8, "negative controls", criterion_8(&d)),
        (9, "determinism", criterion_9()),
    ];
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {n} PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
