//! Verification reports: a hypothesis block, one section per check, and a
//! summary, serialized as JSON or plain text.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::biset::{check_mu_bijection, sweep_mu};
use crate::character_table::CharacterTable;
use crate::constructions::jackson::{self, Hypotheses, JacksonData};
use crate::constructions::rank_one::{self, RankOneData, RepKind};
use crate::constructions::reduction::noncyclic_center_reduction;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::subgroup::SubgroupSet;
use crate::verdict::{Status, Verdict};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupInfo {
    pub descriptor: String,
    pub label: String,
    pub order: usize,
    pub p: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    /// The statement the section checks.
    pub anchor: String,
    pub verdict: Verdict,
    /// Milliseconds; only recorded on request, since it breaks byte-identical output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub group: GroupInfo,
    pub hypotheses: Vec<Hypothesis>,
    pub sections: Vec<Section>,
    pub summary: Status,
}

/// Options shared by the pipelines.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub timings: bool,
    /// `n` for the rank-one diagram; least common multiple when unset.
    pub rank_one_n: Option<usize>,
    /// Hex bitsets `(H, K, L)` for a single biset triple.
    pub triple: Option<(String, String, String)>,
}

impl VerificationReport {
    pub fn new(command: &str, descriptor: &str, g: &Arc<Group>) -> Self {
        VerificationReport {
            schema: SCHEMA,
            tool: "pgv".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            group: GroupInfo {
                descriptor: descriptor.into(),
                label: g.label().into(),
                order: g.order(),
                p: g.prime_power().map(|(p, _)| p),
            },
            hypotheses: Vec::new(),
            sections: Vec::new(),
            summary: Status::Inapplicable,
        }
    }

    /// Conjunction of the applicable sections.
    pub fn finish(mut self) -> Self {
        let verdicts: Vec<Verdict> = self.sections.iter().map(|s| s.verdict.clone()).collect();
        self.summary = Verdict::all("summary", &verdicts).status;
        self
    }

    pub fn failed(&self) -> bool {
        self.summary == Status::Fail
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("bad report: {e}")))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {}\ngroup {} ({}) order {}\n",
            self.tool, self.version, self.command, self.group.descriptor, self.group.label, self.group.order
        );
        for h in &self.hypotheses {
            out.push_str(&format!("hypothesis {:<24} {:<12} {}\n", h.name, status_word(h.status), h.detail));
        }
        for s in &self.sections {
            let v = &s.verdict;
            out.push_str(&format!("{:<12} {:<34} checked {}", status_word(v.status), s.name, v.checked));
            if let Some(ms) = s.wall_ms {
                out.push_str(&format!(" ({ms} ms)"));
            }
            out.push('\n');
            if let Some(w) = &v.witness {
                out.push_str(&format!("    witness: {w}\n"));
            }
            for n in &v.notes {
                out.push_str(&format!("    note: {n}\n"));
            }
        }
        out.push_str(&format!("summary {}\n", status_word(self.summary)));
        out
    }

    fn push(&mut self, name: &str, anchor: &str, timings: bool, f: impl FnOnce() -> Verdict) {
        self.try_push(name, anchor, timings, || Ok(f())).expect("infallible");
    }

    /// Like `push`, but an error aborts the report instead of becoming a section.
    fn try_push(&mut self, name: &str, anchor: &str, timings: bool, f: impl FnOnce() -> Result<Verdict>) -> Result<()> {
        let start = Instant::now();
        let verdict = f()?;
        let wall_ms = timings.then(|| start.elapsed().as_millis() as u64);
        self.sections.push(Section { name: name.into(), anchor: anchor.into(), verdict, wall_ms });
        Ok(())
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Inapplicable => "INAPPLICABLE",
    }
}

fn hyp(name: &str, ok: bool, detail: String) -> Hypothesis {
    Hypothesis { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, detail }
}

/// Odd prime, rank three, cyclic center.
pub fn hypothesis_block(g: &Arc<Group>) -> Vec<Hypothesis> {
    let h = Hypotheses::of(g);
    vec![
        hyp(
            "p_group_odd_prime",
            h.p_odd,
            match h.p {
                Some(p) => format!("p = {p}"),
                None => "not a p-group".into(),
            },
        ),
        hyp("rank_three", h.rank == Some(3), format!("rank = {}", h.rank.map_or("n/a".into(), |r| r.to_string()))),
        hyp("center_cyclic", h.center_cyclic, format!("|Z(G)| = {}", crate::subgroup::center(g).order())),
    ]
}

const JACKSON_SECTIONS: &[(&str, &str)] = &[
    ("setup", "Q normal of type C_p x C_p, Z(G) ∩ Q = <c>, |G : C_G(Q)| = p, and the multiplier identities"),
    ("restrictions_are_characters", "the restriction of chi to every member of the family is a character"),
    ("rank_two_fixed_point_free", "for every rank-two elementary abelian E in the family, <chi|_E, 1_E> = 0"),
    ("meets_q_lies_in_centralizer", "members meeting Q lie in C_G(Q) and have a conjugate meeting Q in <a>"),
    ("outside_centralizer_shapes", "members outside C_G(Q) are cyclic, K x C_p, or K ⋊ C_p with k -> k^(1+p^(n-1))"),
    ("almost_strongly_connected", "the diagram of subfamilies over {a, e_1, ..., e_m} is almost strongly connected"),
    ("factors_through_diagram", "V_chi restricted to each H_d equals rho_d composed with the assignments"),
    ("compatible_family", "V_chi is compatible along every conjugation map"),
    ("assignment_compatibility", "each assignment family commutes with conjugation up to inner automorphisms of Gamma_d"),
    ("diagram_of_reps", "rho_x and rho_y composed with mu_{x,y} agree on every edge"),
    ("proof_identities", "the induced-character values behind the factorization"),
];

/// The chi pipeline; inapplicable sections when a hypothesis fails.
pub fn jackson_report(descriptor: &str, g: &Arc<Group>, opts: &RunOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("check-chi", descriptor, g);
    r.hypotheses = hypothesis_block(g);
    let reason = Hypotheses::of(g).failure();
    let built = match &reason {
        None => Some(JacksonData::build(g)?),
        Some(_) => None,
    };
    match (&built, reason) {
        (Some(d), _) => add_jackson_sections(&mut r, d, opts.timings),
        (None, Some(why)) => {
            for (name, anchor) in JACKSON_SECTIONS {
                r.push(name, anchor, false, || Verdict::inapplicable(*name, why.clone()));
            }
        }
        (None, None) => unreachable!("data is built when no hypothesis fails"),
    }
    r.push(
        "noncyclic_center_reduction",
        "with a noncyclic center, subgroups meeting <c, c'> trivially have rank at most one",
        opts.timings,
        || noncyclic_center_reduction(g).unwrap_or_else(|e| Verdict::fail("noncyclic_center_reduction", 0, e.to_string())),
    );
    Ok(r.finish())
}

pub fn add_jackson_sections(r: &mut VerificationReport, d: &JacksonData, timings: bool) {
    let anchor = |name: &str| JACKSON_SECTIONS.iter().find(|(n, _)| *n == name).map(|(_, a)| *a).unwrap_or("");
    r.push("setup", anchor("setup"), timings, || jackson::verify_setup(d));
    let start = Instant::now();
    let (i, ii) = jackson::verify_restrictions(d);
    let ms = timings.then(|| start.elapsed().as_millis() as u64);
    for v in [i, ii] {
        let name = v.check.clone();
        r.sections.push(Section { anchor: anchor(&name).into(), name, verdict: v, wall_ms: ms });
    }
    r.push("meets_q_lies_in_centralizer", anchor("meets_q_lies_in_centralizer"), timings, || jackson::verify_meets_q(d));
    r.push("outside_centralizer_shapes", anchor("outside_centralizer_shapes"), timings, || jackson::verify_outside_centralizer(d));
    r.push("almost_strongly_connected", anchor("almost_strongly_connected"), timings, || jackson::verify_connectivity(d));
    let start = Instant::now();
    let parts = jackson::verify_factorization(d);
    let ms = timings.then(|| start.elapsed().as_millis() as u64);
    let names = ["factors_through_diagram", "compatible_family", "assignment_compatibility", "diagram_of_reps", "proof_identities"];
    for (name, mut v) in names.iter().zip(parts) {
        v.check = name.to_string();
        r.sections.push(Section { name: name.to_string(), anchor: anchor(name).into(), verdict: v, wall_ms: ms });
    }
}

const RANK_ONE_SECTIONS: &[(&str, &str)] = &[
    ("covering", "the subfamilies H_d cover the family of rank-one prime-power subgroups"),
    ("strongly_connected", "every D_H has a simply connected realization (the star is a tree)"),
    ("diagram_of_reps", "rho_1 and rho_d restricted along mu_{1,d} agree on every edge"),
    ("assignment_compatibility", "each assignment family commutes with conjugation up to inner automorphisms of Gamma_d"),
    ("free_family", "V_H = rho_d ∘ alpha_H^d is independent of d and fixed point free for nontrivial H"),
    ("multipliers", "m_d = |N_G(d)|(p-1)/p and n_d m_d = n = deg rho_d"),
    ("compatible_family", "the family V_H is compatible along every conjugation map"),
    ("factors_through_diagram", "V restricted to each H_d equals rho_d composed with the assignments"),
];

pub fn rank_one_report(descriptor: &str, g: &Arc<Group>, opts: &RunOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("check-rank1", descriptor, g);
    let data = RankOneData::build(g, opts.rank_one_n, RepKind::ReducedRegular)?;
    let h = rank_one::hypothesis_report(&data);
    r.hypotheses.push(Hypothesis {
        name: "prime_power_subgroups_rank_one".into(),
        status: h.status,
        detail: h.witness.clone().unwrap_or_else(|| format!("{} members", data.family.len())),
    });
    add_rank_one_sections(&mut r, &data, opts.timings);
    Ok(r.finish())
}

pub fn add_rank_one_sections(r: &mut VerificationReport, data: &RankOneData, timings: bool) {
    let start = Instant::now();
    let verdicts = rank_one::verify_rank_one(data);
    let ms = timings.then(|| start.elapsed().as_millis() as u64);
    for (v, (name, anchor)) in verdicts.into_iter().zip(RANK_ONE_SECTIONS) {
        r.sections.push(Section { name: name.to_string(), anchor: anchor.to_string(), verdict: v, wall_ms: ms });
    }
}

pub fn biset_report(descriptor: &str, g: &Arc<Group>, opts: &RunOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("check-biset", descriptor, g);
    add_biset_sections(&mut r, g, opts)?;
    Ok(r.finish())
}

pub fn add_biset_sections(r: &mut VerificationReport, g: &Arc<Group>, opts: &RunOptions) -> Result<()> {
    match &opts.triple {
        Some((h, k, l)) => {
            let parse = |s: &str| -> Result<SubgroupSet> {
                let bits = crate::bits::Bitset::from_hex(g.order(), s)
                    .ok_or_else(|| Error::BadDescriptor(format!("bad subgroup bitset `{s}`")))?;
                SubgroupSet::new(g.clone(), bits)
            };
            let (h, k, l) = (parse(h)?, parse(k)?, parse(l)?);
            r.try_push("mu_bijection", "the composition map onto (G/H)^L is a bijection, with s t = m", opts.timings, || {
                check_mu_bijection(&h, &k, &l).map(|(v, _)| v)
            })?;
        }
        None => {
            r.try_push("mu_sweep", "the composition map is a bijection for every valid (H, K, L)", opts.timings, || {
                sweep_mu(g)
            })?;
        }
    }
    Ok(())
}

/// Every pipeline in turn, under one summary.
pub fn all_report(descriptor: &str, g: &Arc<Group>, opts: &RunOptions) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("check-all", descriptor, g);
    let j = jackson_report(descriptor, g, opts)?;
    r.hypotheses = j.hypotheses;
    r.sections.extend(j.sections.into_iter().map(|mut s| {
        s.name = format!("chi/{}", s.name);
        s
    }));
    let k = rank_one_report(descriptor, g, opts)?;
    r.hypotheses.extend(k.hypotheses);
    r.sections.extend(k.sections.into_iter().map(|mut s| {
        s.name = format!("rank1/{}", s.name);
        s
    }));
    let b = biset_report(descriptor, g, opts)?;
    r.sections.extend(b.sections.into_iter().map(|mut s| {
        s.name = format!("biset/{}", s.name);
        s
    }));
    Ok(r.finish())
}

/// The character table as a report-like JSON value.
pub fn table_json(descriptor: &str, table: &CharacterTable) -> serde_json::Value {
    let g = table.group();
    let classes = g.classes();
    json!({
        "schema": SCHEMA,
        "group": { "descriptor": descriptor, "label": g.label(), "order": g.order() },
        "classes": (0..classes.len()).map(|k| json!({
            "representative": classes.representative(k),
            "size": classes.size(k),
            "element_order": g.element_order(classes.representative(k)),
        })).collect::<Vec<_>>(),
        "degrees": table.degrees(),
        "characters": table.irreducibles().iter().map(|chi| {
            chi.values().iter().map(|v| json!({
                "conductor": v.conductor(),
                "coeffs": v.coeff_strings(),
            })).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, heisenberg};

    #[test]
    fn inapplicable_chi_on_cyclic() {
        let g = cyclic(9).unwrap();
        let r = jackson_report("cyclic:9", &g, &RunOptions::default()).unwrap();
        assert_eq!(r.summary, Status::Inapplicable);
        assert!(!r.failed());
        assert!(r.hypotheses.iter().any(|h| h.name == "rank_three" && h.status == Status::Fail));
    }

    #[test]
    fn report_round_trip_and_text() {
        let g = heisenberg(3).unwrap();
        let r = rank_one_report("heisenberg:3", &g, &RunOptions::default()).unwrap();
        assert_eq!(r.summary, Status::Pass);
        let back = VerificationReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let text = r.to_text();
        for s in &r.sections {
            assert!(text.contains(&s.name));
        }
        assert_eq!(r.to_json(), rank_one_report("heisenberg:3", &g, &RunOptions::default()).unwrap().to_json());
    }
}
