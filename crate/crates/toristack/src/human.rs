//! Plain-text rendering of a report for terminal use.

use std::fmt::Write;

use crate::input::{InputDocument, JsonInt, JsonRat};
use crate::report::{GroupDesc, Report};

fn ints(row: &[JsonInt]) -> String {
    let parts: Vec<String> = row.iter().map(|v| v.0.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn rats(row: &[JsonRat]) -> String {
    let parts: Vec<String> = row.iter().map(|v| v.0.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn pattern(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn group(g: &GroupDesc) -> &str {
    &g.name
}

/// The group a presentation embeds, with its free part written in the
/// flavor's continuous incarnation: `Z/2 + Z/2 + Z` becomes
/// `Z/2 x Z/2 x C*` on the algebraic side.
fn diag_group(g: &GroupDesc, free_symbol: &str) -> String {
    let mut parts: Vec<String> = g.torsion.iter().map(|t| format!("Z/{}", t.0)).collect();
    match g.free_rank {
        0 => {}
        1 => parts.push(free_symbol.to_string()),
        l => parts.push(format!("({free_symbol})^{l}")),
    }
    if parts.is_empty() {
        "trivial".to_string()
    } else {
        parts.join(" x ")
    }
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;

    match &report.input {
        InputDocument::Polytope(p) => {
            let _ = writeln!(
                w,
                "input: polytope, dim {}, {} facets, labels {:?}",
                p.dim,
                p.facets.len(),
                p.facets.iter().map(|f| f.label).collect::<Vec<_>>()
            );
        }
        InputDocument::StackyFan(f) => {
            let _ = writeln!(
                w,
                "input: stacky fan, dim {}, {} rays, {} maximal cones, labels {:?}",
                f.dim,
                f.rays.len(),
                f.max_cones.len(),
                f.labels
            );
        }
    }

    if let Some(v) = &report.validation {
        let _ = writeln!(w, "validation: {}", flag(v.valid));
        for c in &v.checks {
            if !c.passed || report.command == "validate" {
                let _ = writeln!(w, "  {} {}: {}", flag(c.passed), c.check, c.detail);
            }
        }
    }

    if let Some(fan) = &report.fan {
        let _ = writeln!(
            w,
            "fan: {} rays, {} maximal cones, completeness {}",
            fan.rays.len(),
            fan.max_cones.len(),
            fan.completeness
        );
        for (i, ray) in fan.rays.iter().enumerate() {
            let _ = writeln!(w, "  ray {}: {}  label {}", i + 1, ints(ray), fan.labels[i]);
        }
        for cone in &fan.max_cones {
            let _ = writeln!(w, "  cone {}", pattern(cone));
        }
        let _ = writeln!(w, "  beta rows:");
        for row in &fan.beta {
            let _ = writeln!(w, "    {}", ints(row));
        }
    }

    if let Some(g) = &report.groups {
        let _ = writeln!(
            w,
            "algebraic group H: {} embedded in (C*)^{}, injective {}",
            diag_group(&g.algebraic.group, "C*"),
            g.algebraic.exponents.len(),
            flag(g.algebraic.injective)
        );
        let _ = writeln!(
            w,
            "compact group ker(beta-bar): {} embedded in (R/Z)^{}, injective {}",
            diag_group(&g.compact.group, "S^1"),
            g.compact.exponents.len(),
            flag(g.compact.injective)
        );
        let _ = write!(
            w,
            "{}",
            embedding_line(&g.algebraic.exponents, g.algebraic.group.free_rank)
        );
        let _ = writeln!(w, "presentations share their data: {}", flag(g.same_data));
        let _ = writeln!(w, "finite extension Gamma: {}", g.finite_extension.name);
        let _ = writeln!(
            w,
            "splitting: free rank {}, torsion {:?}, exhausts H: {}",
            g.splitting.free_rank,
            g.splitting
                .torsion
                .iter()
                .map(|t| t.0.to_string())
                .collect::<Vec<_>>(),
            flag(g.splitting.exhausts)
        );
    }

    if let Some(charts) = &report.charts {
        let _ = writeln!(w, "charts ({}):", charts.rows.len());
        for row in &charts.rows {
            let _ = writeln!(
                w,
                "  cone {}: chart group {} of order {}; label part {}, unlabelled part {}, orders multiply: {}",
                pattern(&row.cone),
                group(&row.chart_group),
                row.order.0,
                group(&row.label_part),
                group(&row.unlabelled_part),
                flag(row.multiplicative)
            );
        }
    }

    if let Some(iso) = &report.isotropy {
        let _ = writeln!(
            w,
            "isotropy table (all matched: {}):",
            flag(iso.all_matched)
        );
        for row in &iso.rows {
            let _ = writeln!(
                w,
                "  {}{}: symplectic {} | complex {} {}",
                pattern(&row.pattern),
                if row.admissible {
                    ""
                } else {
                    " (excluded stratum)"
                },
                group(&row.symplectic),
                group(&row.complex),
                flag(row.matched)
            );
        }
    }

    if let Some(m) = &report.moment {
        let _ = writeln!(w, "moment coefficients (iota^* rows):");
        for row in &m.iota_star {
            let _ = writeln!(w, "  {}", rats(row));
        }
        let _ = writeln!(w, "level value xi: {}", rats(&m.xi));
        match &m.irregular_pattern {
            None => {
                let _ = writeln!(w, "regular value: {}", flag(m.regular));
            }
            Some(p) => {
                let _ = writeln!(
                    w,
                    "regular value: {} (offending pattern {})",
                    flag(m.regular),
                    pattern(p)
                );
            }
        }
        match &m.violating_pattern {
            None => {
                let _ = writeln!(
                    w,
                    "level set inside the admissible locus: {}",
                    flag(m.level_in_admissible_locus)
                );
            }
            Some(p) => {
                let _ = writeln!(
                    w,
                    "level set inside the admissible locus: {} (violating pattern {})",
                    flag(m.level_in_admissible_locus),
                    pattern(p)
                );
            }
        }
        if let Some(note) = &m.note {
            let _ = writeln!(w, "note: {note}");
        }
    }

    if let Some(c) = &report.certificate {
        let _ = writeln!(
            w,
            "splitting: free rank {}, torsion {:?}",
            c.splitting.free_rank,
            c.splitting
                .torsion
                .iter()
                .map(|t| t.0.to_string())
                .collect::<Vec<_>>()
        );
        let _ = writeln!(w, "mu independent of labels: {}", flag(c.mu_independent));
        let _ = writeln!(
            w,
            "(M1') scaling directions leave the level set: {} ({} patterns)",
            flag(c.m1_prime_passed),
            c.m1_rows.len()
        );
        for row in c.m1_rows.iter().filter(|r| !r.ok) {
            let _ = writeln!(w, "  FAIL at {}", pattern(&row.pattern));
        }
        let _ = writeln!(
            w,
            "(M2) every admissible stratum meets the level set: {} ({} patterns)",
            flag(c.m2_passed),
            c.m2_rows.len()
        );
        for row in c.m2_rows.iter().filter(|r| !r.ok) {
            let _ = writeln!(w, "  FAIL at {}", pattern(&row.feasibility.pattern));
        }
        let _ = writeln!(
            w,
            "level set avoids the irrelevant locus: {} ({} minimal excluded patterns)",
            flag(c.level_inclusion_passed),
            c.level_rows.len()
        );
        let _ = writeln!(w, "isotropy match:");
        for row in &c.isotropy {
            let _ = writeln!(
                w,
                "  {}: {} | {} {}",
                pattern(&row.pattern),
                group(&row.symplectic),
                group(&row.complex),
                flag(row.matched)
            );
        }
        let _ = writeln!(w, "verdict: {}", if c.verdict { "PASS" } else { "FAIL" });
    }

    let _ = writeln!(w, "result: {}", if report.passed { "PASS" } else { "FAIL" });
    out
}

/// For a one-generator free group the embedding reads like the familiar
/// `t -> (t^2, t^2, t)`; otherwise the exponent matrix is printed as rows.
fn embedding_line(exponents: &[Vec<JsonInt>], free_rank: usize) -> String {
    let mut out = String::new();
    if free_rank == 1 && exponents.first().is_some_and(|r| r.len() == 1) {
        let coords: Vec<String> = exponents
            .iter()
            .map(|row| {
                let e = &row[0].0;
                if e == &toristack_core::int(1) {
                    "t".to_string()
                } else {
                    format!("t^{e}")
                }
            })
            .collect();
        let _ = writeln!(out, "embedding: t -> ({})", coords.join(", "));
    } else {
        let _ = writeln!(
            out,
            "embedding exponents (rows = coordinates, columns = generators):"
        );
        for row in exponents {
            let _ = writeln!(out, "  {}", ints(row));
        }
    }
    out
}
