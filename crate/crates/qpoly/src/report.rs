//! The consistency report: every check, one line each, a cross-check
//! agreement line and a final machine-readable VERDICT. Output is
//! deterministic (timings are opt-in) so golden tests can compare bytes.

use crate::consistency::{algebraic_consistency_check, find_consistent_rcharge, ConsistencyVerdict};
use crate::covers::homology;
use crate::grading::{find_grading, hall_condition};
use crate::poly::QuiverPolyhedron;
use crate::rat::{format_rat, rat_int, Rat};
use crate::rewrite::{cancellation_check, CancelVerdict, DEFAULT_PATH_CEILING};
use crate::zigzag::{condition_z, ConditionZ};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub radius: i64,
    /// R-degree bound for the algebraic-consistency witness search;
    /// defaults to four face degrees.
    pub bound: Option<Rat>,
    pub timings: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            radius: 2,
            bound: None,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportVerdict {
    /// All applicable checks agree on consistency.
    Consistent,
    /// An inconsistency was detected (all checks agree on it).
    Inconsistent,
    /// The equivalence suite does not apply (weighted or not genus 1).
    NotApplicable,
    /// Theorem-mandated equivalent checks disagree: a bug, never a result.
    InternalDisagreement,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub lines: Vec<String>,
    pub verdict: ReportVerdict,
}

impl Report {
    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

pub fn report(
    qp: &QuiverPolyhedron,
    name: &str,
    expected: Option<&BTreeMap<String, String>>,
    opts: &ReportOptions,
) -> Report {
    let started = Instant::now();
    let mut lines = Vec::new();
    lines.push(format!("polyhedron: {name}"));

    let violations = qp.validate();
    if violations.is_empty() {
        lines.push("validate: ok".into());
    } else {
        for v in &violations {
            lines.push(format!("validate: violation: {v}"));
        }
        lines.push("VERDICT: invalid".into());
        return Report {
            lines,
            verdict: ReportVerdict::NotApplicable,
        };
    }

    let chi = qp.euler_characteristic();
    lines.push(format!("chi: {}", format_rat(&chi)));
    if let Some(want) = expected.and_then(|e| e.get("chi")) {
        let got = format_rat(&chi);
        if *want != got {
            lines.push(format!(
                "note: recorded expectation chi = {want} differs from the formula value {got}; \
                 the formula is authoritative"
            ));
        }
    }
    let topo = qp.surface_topology();
    lines.push(format!(
        "topology: genus {}, orbifold orders {:?}",
        topo.genus, topo.orbifold_orders
    ));
    // A positive Euler characteristic rules out the CY-3 property.
    lines.push(if chi > Rat::zero() {
        "cy3: impossible (chi > 0)".into()
    } else {
        "cy3: possible (chi <= 0)".into()
    });

    let grading = find_grading(qp);
    match &grading {
        Some(g) => {
            let charges: Vec<String> = qp
                .arrows
                .iter()
                .enumerate()
                .map(|(i, a)| format!("{}={}", a.name, format_rat(&g.charge[i])))
                .collect();
            lines.push(format!("grading: found, {}", charges.join(" ")));
        }
        None => lines.push("grading: none".into()),
    }
    match hall_condition(qp) {
        Ok(h) if h.holds => lines.push("hall: regularizable".into()),
        Ok(h) => lines.push(format!("hall: deficient (witness faces {:?})", h.witness)),
        Err(e) => lines.push(format!("hall: not-applicable ({e})")),
    }

    let mut verdicts: Vec<(String, bool)> = Vec::new();
    let torus = qp.is_unweighted() && topo.genus == 1;
    if !torus {
        let why = if qp.is_unweighted() {
            format!("genus {}", topo.genus)
        } else {
            "weighted".into()
        };
        lines.push(format!("condition-Z: not-applicable ({why})"));
        lines.push(format!("rcharge-lp: not-applicable ({why})"));
        lines.push(format!("cancellation: not-applicable ({why})"));
        lines.push(format!("algebraic-consistency: not-applicable ({why})"));
        lines.push("agreement: not-applicable".into());
        lines.push("VERDICT: ok (equivalence suite not applicable)".into());
        if opts.timings {
            lines.push(format!("timing: total {}ms", started.elapsed().as_millis()));
        }
        return Report {
            lines,
            verdict: ReportVerdict::NotApplicable,
        };
    }

    let h = homology(qp).expect("genus-1 homology");
    match condition_z(qp, &h).expect("condition Z on a torus") {
        ConditionZ::Passes => {
            lines.push("condition-Z: passes".into());
            verdicts.push(("condition-Z".into(), true));
        }
        ConditionZ::Fails(c) => {
            lines.push(format!(
                "condition-Z: fails (rays from arrow {} meet again: i={}, j={}, offset=({},{}))",
                qp.arrows[c.arrow].name, c.i, c.j, c.offset[0], c.offset[1]
            ));
            verdicts.push(("condition-Z".into(), false));
        }
    }

    match find_consistent_rcharge(qp) {
        Some(_) => {
            lines.push("rcharge-lp: feasible".into());
            verdicts.push(("rcharge-lp".into(), true));
        }
        None => {
            lines.push("rcharge-lp: infeasible".into());
            verdicts.push(("rcharge-lp".into(), false));
        }
    }

    match &grading {
        Some(g) => {
            let bound = &g.face_degree * rat_int(3);
            match cancellation_check(qp, g, &bound, DEFAULT_PATH_CEILING) {
                Ok(CancelVerdict::HoldsUpToBound) => {
                    lines.push(format!(
                        "cancellation: holds up to degree {}",
                        format_rat(&bound)
                    ));
                    verdicts.push(("cancellation".into(), true));
                }
                Ok(CancelVerdict::Counterexample { p, q, arrow, side }) => {
                    lines.push(format!(
                        "cancellation: counterexample ({} vs {} under {} on the {side:?})",
                        p.display(qp),
                        q.display(qp),
                        qp.arrows[arrow].name
                    ));
                    verdicts.push(("cancellation".into(), false));
                }
                Err(e) => lines.push(format!("cancellation: aborted ({e})")),
            }
            let bound = opts
                .bound
                .clone()
                .unwrap_or_else(|| &g.face_degree * rat_int(4));
            match algebraic_consistency_check(qp, g, opts.radius, &bound) {
                Ok(ConsistencyVerdict::ConsistentEvidence) => lines.push(format!(
                    "algebraic-consistency: consistent-evidence (radius {}, bound {})",
                    opts.radius,
                    format_rat(&bound)
                )),
                Ok(ConsistencyVerdict::Fails { reason }) => {
                    lines.push(format!("algebraic-consistency: fails ({reason})"))
                }
                Err(e) => lines.push(format!("algebraic-consistency: aborted ({e})")),
            }
        }
        None => {
            lines.push("cancellation: not-applicable (no grading)".into());
            lines.push("algebraic-consistency: not-applicable (no grading)".into());
        }
    }

    let verdict = if verdicts.is_empty() {
        lines.push("agreement: not-applicable".into());
        lines.push("VERDICT: ok (no applicable checks)".into());
        ReportVerdict::NotApplicable
    } else if verdicts.iter().all(|(_, v)| *v) {
        lines.push(format!("agreement: {} agree", names(&verdicts)));
        lines.push("VERDICT: consistent".into());
        ReportVerdict::Consistent
    } else if verdicts.iter().all(|(_, v)| !*v) {
        lines.push(format!("agreement: {} agree", names(&verdicts)));
        lines.push("VERDICT: inconsistent (all checks concur)".into());
        ReportVerdict::Inconsistent
    } else {
        lines.push(format!(
            "agreement: INTERNAL-DISAGREEMENT ({})",
            verdicts
                .iter()
                .map(|(n, v)| format!("{n}={}", if *v { "consistent" } else { "inconsistent" }))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        lines.push("VERDICT: internal-disagreement (this is a bug in the tool, not a result)".into());
        ReportVerdict::InternalDisagreement
    };
    if opts.timings {
        lines.push(format!("timing: total {}ms", started.elapsed().as_millis()));
    }
    Report { lines, verdict }
}

fn names(verdicts: &[(String, bool)]) -> String {
    verdicts
        .iter()
        .map(|(n, _)| n.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfix;

    #[test]
    fn hex1_report_is_consistent_and_deterministic() {
        let qp = testfix::hex1();
        let opts = ReportOptions::default();
        let r1 = report(&qp, "hex1", None, &opts);
        let r2 = report(&qp, "hex1", None, &opts);
        assert_eq!(r1.text(), r2.text());
        assert_eq!(r1.verdict, ReportVerdict::Consistent);
        assert!(r1.text().contains("VERDICT: consistent"));
        assert!(r1.text().contains("condition-Z: passes"));
    }

    #[test]
    fn weighted_report_not_applicable_with_discrepancy_note() {
        let qp = testfix::antiprism(true);
        let expected: BTreeMap<String, String> =
            [("chi".to_string(), "-31/6".to_string())].into();
        let r = report(&qp, "antiprism-weighted", Some(&expected), &ReportOptions::default());
        assert_eq!(r.verdict, ReportVerdict::NotApplicable);
        let t = r.text();
        assert!(t.contains("chi: -16/3"), "{t}");
        assert!(t.contains("recorded expectation chi = -31/6"), "{t}");
    }

    #[test]
    fn bad_torus_report_all_checks_concur() {
        let qp = testfix::bad_torus();
        let r = report(&qp, "badTorus", None, &ReportOptions::default());
        let t = r.text();
        assert_eq!(r.verdict, ReportVerdict::Inconsistent, "{t}");
        assert!(t.contains("condition-Z: fails"), "{t}");
        assert!(t.contains("rcharge-lp: infeasible"), "{t}");
        assert!(t.contains("cancellation: counterexample"), "{t}");
        assert!(t.contains("VERDICT: inconsistent (all checks concur)"), "{t}");
    }

    #[test]
    fn unweighted_antiprism_cy3_impossible() {
        let qp = testfix::antiprism(false);
        let r = report(&qp, "antiprism", None, &ReportOptions::default());
        assert!(r.text().contains("cy3: impossible (chi > 0)"));
        assert_eq!(r.verdict, ReportVerdict::NotApplicable);
    }
}
