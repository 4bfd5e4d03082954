use std::path::Path;

use anyhow::{Context, Result};
use dr2_core::checks::{self, VerifyContext};
use dr2_core::chow::{slot, TautBasis};
use dr2_core::cone::{self, CheckStatus, StrataTable};
use dr2_core::ct::{self, CtClass};
use dr2_core::m21::{self, Marking, NamedDivisor};
use dr2_core::solver::redundancy_report;
use dr2_core::{solve_parametric, theorem1_class, Basis, ParamSystem, SurfaceSet};
use serde_json::{json, Map, Value};

use crate::report::{DArg, Markdown, Report};

pub struct Outcome {
    pub report: Report,
    pub markdown: String,
    pub ok: bool,
}

fn load_surfaces(dir: Option<&Path>) -> Result<(SurfaceSet, String)> {
    match dir {
        None => Ok((SurfaceSet::builtin(), "builtin".into())),
        Some(p) => {
            let set = SurfaceSet::load_dir(p)
                .with_context(|| format!("loading surface fixtures from {}", p.display()))?;
            Ok((set, p.display().to_string()))
        }
    }
}

fn d1_note(d: &DArg, report: &mut Report) {
    if *d == DArg::Int(1) {
        report.notes.push(
            "d = 1: every coefficient carries the factor d^2 - 1, so the class is zero".into(),
        );
    }
}

const GROUPS: [(&str, &[usize]); 6] = [
    ("psi1 psi2", &[slot::PSI1PSI2]),
    ("psi1^2 + psi2^2", &[slot::PSI_SQ_SUM]),
    ("psi_i d11", &[slot::PSI1D11, slot::PSI2D11]),
    ("psi_i d12", &[slot::PSI1D12, slot::PSI2D12]),
    ("psi_i d0", &[slot::PSI1D0, slot::PSI2D0]),
    (
        "boundary products",
        &[
            slot::D2SQ,
            slot::D12D2,
            slot::D0D2,
            slot::D0D11,
            slot::D0D12,
            slot::D0SQ,
        ],
    ),
];

pub fn class(d: &DArg, fixtures: Option<&Path>) -> Result<Outcome> {
    let (set, source) = load_surfaces(fixtures)?;
    let mut report = Report::new(
        "class",
        json!({ "d": d.label(), "fixtures": source }),
        set.checksums.clone(),
    );
    let expected = theorem1_class();
    let sys = ParamSystem::from_surfaces(&set.surfaces)?;
    let cert = solve_parametric(&sys);
    let mut md = Markdown::new(&report);
    let ok = match &cert {
        Ok(cert) => {
            let diff = &cert.solution - &expected;
            report.outputs = json!({
                "class": d.class(&expected),
                "solver_class": d.class(&cert.solution),
                "difference_zero": diff.is_zero(),
            });
            diff.is_zero()
        }
        Err(e) => {
            report.outputs = json!({
                "class": d.class(&expected),
                "solver_error": e.to_string(),
            });
            false
        }
    };
    d1_note(d, &mut report);

    md.heading("DR class");
    let mut rows = Vec::new();
    for (group, slots) in GROUPS {
        for &k in slots {
            rows.push(vec![
                group.to_string(),
                format!("`{}`", TautBasis::NAMES[k]),
                format!("`{}`", d.poly_text(expected.get(k))),
            ]);
        }
    }
    md.table(&["group", "slot", "coefficient"], &rows);
    md.line(format!("solver agrees: {ok}"));
    md.blank();
    let markdown = md.finish(&report);
    Ok(Outcome {
        report,
        markdown,
        ok,
    })
}

pub fn solve(fixtures: Option<&Path>) -> Result<Outcome> {
    let (set, source) = load_surfaces(fixtures)?;
    let mut report = Report::new(
        "solve",
        json!({ "fixtures": source }),
        set.checksums.clone(),
    );
    let sys = ParamSystem::from_surfaces(&set.surfaces)?;
    let mut md = Markdown::new(&report);
    let redundant = redundancy_report(&sys);
    let sym = DArg::Symbolic;
    let ok = match solve_parametric(&sys) {
        Ok(cert) => {
            report.outputs = json!({
                "rank": cert.rank,
                "consistent": cert.consistent,
                "samples": cert.samples,
                "solution": sym.class(&cert.solution),
                "residuals": cert.residuals,
                "redundant_rows": redundant,
            });
            md.heading("Solution");
            md.class_table(&sym, &cert.solution);
            md.line(format!(
                "rank {}, consistent, samples {:?}",
                cert.rank,
                cert.samples
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
            ));
            md.blank();
            true
        }
        Err(e) => {
            report.outputs = json!({
                "rank": sys.rank(),
                "consistent": false,
                "error": e.to_string(),
                "redundant_rows": redundant,
            });
            md.heading("Failure");
            md.line(e.to_string());
            md.blank();
            false
        }
    };
    md.heading("Redundant rows");
    for r in &redundant {
        let combo: Vec<String> = r
            .combination
            .iter()
            .map(|(l, c)| format!("{c}*{l}"))
            .collect();
        md.line(format!(
            "- `{}` = {} (rhs consistent: {})",
            r.label,
            combo.join(" + "),
            r.rhs_consistent
        ));
    }
    md.blank();
    let markdown = md.finish(&report);
    Ok(Outcome {
        report,
        markdown,
        ok,
    })
}

pub fn equations(fixtures: Option<&Path>) -> Result<Outcome> {
    let (set, source) = load_surfaces(fixtures)?;
    let mut report = Report::new(
        "equations",
        json!({ "fixtures": source }),
        set.checksums.clone(),
    );
    let sys = ParamSystem::from_surfaces(&set.surfaces)?;
    let mut rows = Vec::new();
    let mut md = Markdown::new(&report);
    md.heading("Rows");
    for row in &sys.rows {
        let surface = set.surfaces.iter().find(|s| s.label() == row.label);
        let mut coeffs = Map::new();
        for (name, c) in TautBasis::NAMES.iter().zip(&row.coefficients) {
            if !c.is_zero() {
                coeffs.insert(name.to_string(), Value::String(c.to_string()));
            }
        }
        rows.push(json!({
            "label": row.label,
            "family": surface.map(|s| s.family),
            "name": surface.map(|s| s.name.clone()),
            "coefficients": coeffs,
            "rhs": row.rhs,
            "display": row.to_string(),
            "rationale": surface.map(|s| s.rationale.clone()),
        }));
        md.line(format!("- `{}`: {}", row.label, row));
        if let Some(s) = surface {
            md.line(format!(
                "  - family {} ({}): {}",
                s.family, s.name, s.rationale
            ));
        }
    }
    md.blank();
    report.outputs = json!({ "count": rows.len(), "rows": rows });
    let markdown = md.finish(&report);
    Ok(Outcome {
        report,
        markdown,
        ok: true,
    })
}

/// One line per row, for `equations --list`.
pub fn equations_listing(fixtures: Option<&Path>) -> Result<String> {
    let (set, _) = load_surfaces(fixtures)?;
    let sys = ParamSystem::from_surfaces(&set.surfaces)?;
    Ok(sys
        .rows
        .iter()
        .map(|r| format!("{:<22} {r}\n", r.label))
        .collect())
}

pub fn pushforward(d: &DArg) -> Result<Outcome> {
    let mut report = Report::new(
        "pushforward",
        json!({ "d": d.label() }),
        SurfaceSet::builtin().checksums,
    );
    let dr = theorem1_class();
    let pi1 = m21::pushforward_pi(&dr, Marking::First);
    let pi2 = m21::pushforward_pi(&dr, Marking::Second);
    let expected = m21::expected_pushforward_class();
    let chi = m21::chi_pullback_pipeline();
    let psi3 = m21::psi_cubed_intersection(&dr);
    let ok = pi1 == expected
        && pi2 == expected
        && chi.result == expected
        && psi3 == m21::psi_cubed_closed_form();
    report.outputs = json!({
        "pi1": d.class(&pi1),
        "pi2": d.class(&pi2),
        "expected": d.class(&expected),
        "matches": pi1 == expected && pi2 == expected,
        "chi_pipeline": {
            "genus": d.poly(&chi.genus),
            "lambda": d.poly(&chi.lambda),
            "delta0": d.poly(&chi.delta0),
            "elliptic_tail": d.poly(&chi.elliptic_tail),
            "attaching_node": d.poly(&chi.attaching_node),
            "weierstrass_excess": d.class(&chi.weierstrass_excess),
            "result": d.class(&chi.result),
            "matches": chi.result == expected,
            "assumptions": chi.assumptions,
        },
        "psi_cubed": d.poly(&psi3),
    });
    if *d == DArg::Int(2) {
        let w5 = NamedDivisor::Weierstrass.class().scale(&dr2_core::q(5, 1));
        report.notes.push(format!(
            "d = 2: push-forward equals 5 W: {}",
            expected.evaluate(&dr2_core::q(2, 1)) == w5
        ));
    }
    d1_note(d, &mut report);
    let mut md = Markdown::new(&report);
    md.heading("Push-forward along either forgetful map");
    md.class_table(d, &pi1);
    md.line(format!(
        "both maps agree with the closed form: {}",
        pi1 == expected && pi2 == expected
    ));
    md.line(format!(
        "pull-back pipeline agrees: {}",
        chi.result == expected
    ));
    md.line(format!("intersection with psi^3: `{}`", d.poly_text(&psi3)));
    md.blank();
    let markdown = md.finish(&report);
    Ok(Outcome {
        report,
        markdown,
        ok,
    })
}

pub fn cone_m21(d: &DArg) -> Result<Outcome> {
    let mut report = Report::new(
        "cone-m21",
        json!({ "d": d.label() }),
        SurfaceSet::builtin().checksums,
    );
    let expected = m21::expected_pushforward_class();
    let mut md = Markdown::new(&report);
    md.heading("Push-forward class");
    md.class_table(d, &expected);
    match d.value() {
        None => {
            let (alpha, beta) = m21::weierstrass_psi_decomposition(&expected)
                .context("push-forward is not in the span of W and psi")?;
            report.outputs = json!({
                "class": d.class(&expected),
                "weierstrass_psi": { "W": d.poly(&alpha), "psi": d.poly(&beta) },
            });
            md.line(format!("= ({alpha}) W + ({beta}) psi"));
        }
        Some(v) => {
            let class = expected.evaluate(&v);
            let r = m21::rulla_classify(&class)?;
            report.outputs = json!({
                "class": d.class(&expected),
                "effective_coordinates": {
                    "W": r.effective_coordinates[0],
                    "d0": r.effective_coordinates[1],
                    "d1": r.effective_coordinates[2],
                },
                "position": r.position,
                "weierstrass_psi": r.weierstrass_psi,
                "moving_d_psi": r.moving_d_psi,
                "in_d_psi_cone": r.in_d_psi_cone,
            });
            md.line(format!("position: {:?}", r.position));
            md.line(format!(
                "in the cone spanned by D and psi: {}",
                r.in_d_psi_cone
            ));
        }
    }
    md.blank();
    d1_note(d, &mut report);
    let markdown = md.finish(&report);
    Ok(Outcome {
        report,
        markdown,
        ok: true,
    })
}

pub fn ct(d: &DArg) -> Result<Outcome> {
    let mut report = Report::new(
        "ct",
        json!({ "d": d.label() }),
        SurfaceSet::builtin().checksums,
    );
    let hac = ct::verify_hac()?;
    let rows = ct::derive_decorated_rows()?;
    report.outputs = json!({
        "dr_restricted": d.class(&hac.dr_restricted),
        "hain": d.class(&hac.hain),
        "difference": d.class(&hac.difference),
        "decorated_decomposition": {
            "coefficients": {
                "d22": d.poly(&hac.decorated_decomposition[0]),
                "d11|": d.poly(&hac.decorated_decomposition[1]),
                "d11|12": d.poly(&hac.decorated_decomposition[2]),
            },
            "d22": DArg::Symbolic.class(&rows.delta22),
            "d11|": DArg::Symbolic.class(&rows.delta11_bar),
            "d11|12": DArg::Symbolic.class(&rows.delta11_12),
            "unhoused": rows.unhoused,
        },
        "identity_holds": hac.holds(),
    });
    d1_note(d, &mut report);
    let mut md = Markdown::new(&report);
    let pairs: [(&str, &CtClass); 3] = [
        ("Restricted DR class", &hac.dr_restricted),
        ("Hain class", &hac.hain),
        ("Difference", &hac.difference),
    ];
    for (title, c) in pairs {
        md.heading(title);
        md.class_table(d, c);
    }
    md.line(format!(
        "difference = d22 + ({}) d11| + ({}) d11|12: {}",
        d.poly_text(&hac.decorated_decomposition[1]),
        d.poly_text(&hac.decorated_decomposition[2]),
        hac.holds()
    ));
    md.blank();
    let markdown = md.finish(&report);
    Ok(Outcome {
        report,
        markdown,
        ok: hac.holds(),
    })
}

pub fn cone(d: &DArg, strata: Option<&Path>) -> Result<Outcome> {
    let table = match strata {
        None => None,
        Some(p) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(StrataTable::from_json(&text)?)
        }
    };
    let inputs = json!({
        "d": d.label(),
        "strata_table": strata.map(|p| p.display().to_string()),
    });
    let mut report = Report::new("cone", inputs, SurfaceSet::builtin().checksums);
    let dec = cone::cone_decomposition();
    let inf = cone::dr_infinity();
    let psi_sq = cone::dr_psi_square_coefficient();
    let nonext = cone::nonextremality_check(table.as_ref())?;
    let ci_obstructed = match d.value() {
        Some(v) => Value::Bool(psi_sq.eval(&v).is_negative()),
        None => Value::Null,
    };
    report.outputs = json!({
        "dr_infinity": DArg::Symbolic.class(&inf),
        "decomposition": {
            "dr2": d.poly(&dec.dr2),
            "dr_inf": d.poly(&dec.dr_inf),
            "holds": dec.holds(),
        },
        "psi_square_coefficient": d.poly(&psi_sq),
        "ci_obstructed": ci_obstructed,
        "nonextremality": nonext,
    });
    d1_note(d, &mut report);
    let mut md = Markdown::new(&report);
    md.heading("DR(inf)");
    md.class_table(&DArg::Symbolic, &inf);
    md.line(format!(
        "DR(d) = ({}) DR(2) + ({}) DR(inf): {}",
        d.poly_text(&dec.dr2),
        d.poly_text(&dec.dr_inf),
        dec.holds()
    ));
    md.line(format!(
        "psi1^2 + psi2^2 coefficient: `{}`",
        d.poly_text(&psi_sq)
    ));
    md.line(format!(
        "non-extremality: {:?}, {}",
        nonext.status, nonext.note
    ));
    md.blank();
    let ok = dec.holds() && nonext.status != CheckStatus::Failed;
    let markdown = md.finish(&report);
    Ok(Outcome {
        report,
        markdown,
        ok,
    })
}

pub fn verify(only: &[String], strata: Option<&Path>, fixtures: Option<&Path>) -> Result<Outcome> {
    let (set, source) = load_surfaces(fixtures)?;
    let strata_table = match strata {
        None => None,
        Some(p) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(StrataTable::from_json(&text)?)
        }
    };
    let inputs = json!({
        "only": only,
        "strata_table": strata.map(|p| p.display().to_string()),
        "fixtures": source,
    });
    let mut report = Report::new("verify", inputs, set.checksums.clone());
    let ctx = VerifyContext {
        surfaces: set,
        strata: strata_table,
    };
    let outcomes = checks::verify(&ctx, only)?;
    let count = |s: CheckStatus| outcomes.iter().filter(|o| o.status == s).count();
    let failed = count(CheckStatus::Failed);
    report.outputs = json!({
        "checks": outcomes,
        "passed": count(CheckStatus::Verified),
        "failed": failed,
        "skipped": count(CheckStatus::Skipped),
    });
    let mut md = Markdown::new(&report);
    md.heading("Checks");
    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| {
            vec![
                format!("`{}`", o.name),
                format!("{:?}", o.status).to_lowercase(),
                if o.failures.is_empty() {
                    o.detail.clone()
                } else {
                    o.failures.join("; ")
                },
            ]
        })
        .collect();
    md.table(&["check", "status", "detail"], &rows);
    let markdown = md.finish(&report);
    Ok(Outcome {
        report,
        markdown,
        ok: failed == 0,
    })
}
