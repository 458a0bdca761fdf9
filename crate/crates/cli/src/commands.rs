use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use qlc_core::closure::{
    generic_forcing_algebra, lc_class_vanishing, qseq_verdict_charp, test_element_search, tight_membership_table,
    ForcingData, QseqConfig,
};
use qlc_core::content::{content_scan, limit_closure, ContentMode};
use qlc_core::lab::{self, LabParams, EXAMPLES};
use qlc_core::parse::{parse_field_name, parse_poly, parse_poly_list, parse_ring};
use qlc_core::quasilength::{
    quasilength_bounds, quasilength_exact_with, FiltrationCertificate, ModuleContext, SearchOptions, Verdict,
};
use qlc_core::quotient::{length_in, vector_module, QuotientPresentation};
use qlc_core::{Error, Ideal, MonomialOrder, PolyRing, Polynomial, Result};

use crate::{
    ColonArgs, Command, ContentCommand, ForceCommand, GbArgs, LabCommand, MemberArgs, ModeArg, OrderArg, Outcome,
    PairArgs, QlArgs, QlCommand, VmodArgs,
};

pub fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Gb(a) => gb(a),
        Command::Member(a) => member(a),
        Command::Compare(a) => compare(a),
        Command::Colon(a) => colon(a),
        Command::Intersect(a) => intersect(a),
        Command::Length(a) => {
            let ctx = QuotientPresentation::parse(&a.ring)?;
            let ideal = ideal_in(&ctx, &a.ideal)?;
            let n = length_in(&ctx, &ideal)?;
            Ok(Outcome::new(json!({ "length": n }), n.to_string()))
        }
        Command::Vmod(a) => vmod(a),
        Command::Ql(c) => match c {
            QlCommand::Exact(a) => ql_exact(a),
            QlCommand::Bounds(a) => ql_bounds(a),
            QlCommand::Validate(a) => ql_validate(&a.cert),
        },
        Command::Content(c) => content(c),
        Command::Force(c) => force(c),
        Command::Lab(c) => lab_command(c),
    }
}

/// Serde's name for a unit enum variant.
fn label<T: Serialize>(x: &T) -> String {
    match serde_json::to_value(x) {
        Ok(Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(e) => e.to_string(),
    }
}

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn gens_text(ps: &[Polynomial]) -> String {
    format!("({})", strings(ps).join("; "))
}

/// Preimage in the ambient ring of the ideal generated by `text`.
fn ideal_in(ctx: &QuotientPresentation, text: &str) -> Result<Ideal> {
    ctx.ideal(&parse_poly_list(text, ctx.ring())?)
}

fn polynomial_ring(text: &str) -> Result<Arc<PolyRing>> {
    let spec = parse_ring(text)?;
    if !spec.relations.is_empty() {
        return Err(Error::InvalidArgument("modules are given over a polynomial ring; put relations into K".into()));
    }
    Ok(spec.ring)
}

fn gb(a: &GbArgs) -> Result<Outcome> {
    let ctx = QuotientPresentation::parse(&a.ring)?;
    let ideal = ideal_in(&ctx, &a.ideal)?;
    let (order, basis) = match a.order {
        OrderArg::Grevlex => (MonomialOrder::GrevLex, ideal.groebner_in(MonomialOrder::GrevLex)?),
        OrderArg::Lex => (MonomialOrder::Lex, ideal.groebner_in(MonomialOrder::Lex)?),
    };
    let polys = strings(basis.polys());
    let text = polys.join("\n");
    Ok(Outcome::new(json!({ "order": order.name(), "basis": polys }), text))
}

fn member(a: &MemberArgs) -> Result<Outcome> {
    let ctx = QuotientPresentation::parse(&a.ring)?;
    let ideal = ideal_in(&ctx, &a.ideal)?;
    let f = parse_poly(&a.poly, ctx.ring())?;
    let m = ideal.member(&f)?;
    Ok(Outcome::new(json!({ "member": m.member, "normal_form": m.normal_form.to_string() }), m.member.to_string()))
}

fn compare(a: &PairArgs) -> Result<Outcome> {
    let ctx = QuotientPresentation::parse(&a.ring)?;
    let i = ideal_in(&ctx, &a.ideal)?;
    let j = ideal_in(&ctx, &a.other)?;
    let rel = label(&i.compare(&j)?);
    Ok(Outcome::new(json!({ "relation": rel }), rel))
}

fn colon(a: &ColonArgs) -> Result<Outcome> {
    let ctx = QuotientPresentation::parse(&a.ring)?;
    let i = ideal_in(&ctx, &a.ideal)?;
    if a.saturate {
        let f = parse_poly(&a.by, ctx.ring())?;
        let (sat, steps) = i.saturate(&f)?;
        let gens = sat.canonical()?;
        let result = json!({ "ideal": strings(gens.gens()), "steps": steps });
        return Ok(Outcome::new(result, format!("{}\nstabilized after {steps} steps", gens_text(gens.gens()))));
    }
    let j = Ideal::parse(ctx.ring(), &a.by)?;
    let c = i.colon(&j)?.canonical()?;
    Ok(Outcome::new(json!({ "ideal": strings(c.gens()) }), gens_text(c.gens())))
}

fn intersect(a: &PairArgs) -> Result<Outcome> {
    let ctx = QuotientPresentation::parse(&a.ring)?;
    let i = ideal_in(&ctx, &a.ideal)?;
    let j = ideal_in(&ctx, &a.other)?;
    let meet = i.intersect(&j)?.canonical()?;
    Ok(Outcome::new(json!({ "ideal": strings(meet.gens()) }), gens_text(meet.gens())))
}

fn vmod(a: &VmodArgs) -> Result<Outcome> {
    let ring = polynomial_ring(&a.ring)?;
    let j = Ideal::parse(&ring, &a.j)?;
    let k = Ideal::parse(&ring, &a.k)?;
    let m = vector_module(&j, &k, a.degree_bound)?;
    let text = format!("dim {}\nbasis: {}", m.dim(), m.labels().join(", "));
    Ok(Outcome::new(m.to_json(), text))
}

fn module_context(a: &QlArgs) -> Result<(ModuleContext, Ideal)> {
    let ring = polynomial_ring(&a.ring)?;
    let mut parts = Vec::with_capacity(a.summand.len());
    for s in &a.summand {
        let (j, k) = s
            .split_once('|')
            .ok_or_else(|| Error::InvalidArgument(format!("summand `{s}` is not of the form `J | K`")))?;
        parts.push((Ideal::parse(&ring, j)?, Ideal::parse(&ring, k)?));
    }
    let ctx = ModuleContext::direct_sum(&ring, parts)?;
    let ideal = Ideal::parse(&ring, &a.ideal)?;
    Ok((ctx, ideal))
}

fn search_options(a: &QlArgs) -> SearchOptions {
    SearchOptions { max_dim: a.max_dim, max_states: a.max_states, ..SearchOptions::default() }
}

fn ql_exact(a: &QlArgs) -> Result<Outcome> {
    let (ctx, ideal) = module_context(a)?;
    let r = quasilength_exact_with(&ctx, &ideal, &search_options(a))?;
    let mut text = format!("{}", r.value);
    if !r.exact {
        text.push_str(" (upper bound: restricted candidate pool)");
    }
    text.push_str(&format!("\nfiltration: {}", r.certificate.describe_generators().join(", ")));
    let result = json!({
        "value": r.value,
        "exact": r.exact,
        "states": r.states,
        "certificate": r.certificate.to_json(),
    });
    Ok(Outcome::new(result, text))
}

fn ql_bounds(a: &QlArgs) -> Result<Outcome> {
    let (ctx, ideal) = module_context(a)?;
    let b = quasilength_bounds(&ctx, &ideal, &search_options(a))?;
    let mut text = format!("{} <= quasilength <= {}", b.lower, b.upper);
    if let Some(e) = b.exact {
        text.push_str(&format!("\nexact: {e}"));
    }
    if let Some(n) = &b.note {
        text.push_str(&format!("\nnote: {n}"));
    }
    let result = json!({
        "lower": b.lower,
        "upper": b.upper,
        "exact": b.exact,
        "lower_method": b.lower_method,
        "note": b.note,
        "upper_certificate": b.upper_certificate.to_json(),
    });
    Ok(Outcome::new(result, text))
}

fn ql_validate(path: &std::path::Path) -> Result<Outcome> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&raw)
        .map_err(|e| Error::InvalidArgument(format!("{} is not JSON: {e}", path.display())))?;
    // Accept a bare certificate or a full `ql exact` report.
    let cert_value =
        value.pointer("/result/certificate").or_else(|| value.pointer("/result/upper_certificate")).unwrap_or(&value);
    let mut cert = FiltrationCertificate::from_json(cert_value)?;
    let verdict = cert.validate()?.clone();
    let text = match &verdict {
        Verdict::Valid => format!("valid ({} factors)", cert.factors()),
        Verdict::Invalid { step, witness } => format!("invalid at step {step}: {witness}"),
        Verdict::Unchecked => "unchecked".to_string(),
    };
    let mut out = Outcome::new(json!({ "factors": cert.factors(), "verdict": verdict }), text);
    out.passed = verdict.is_valid();
    Ok(out)
}

fn content(c: &ContentCommand) -> Result<Outcome> {
    match c {
        ContentCommand::Scan(a) => {
            let ctx = QuotientPresentation::parse(&a.ring)?;
            let xs = parse_poly_list(&a.params, ctx.ring())?;
            let mode = match a.mode {
                ModeArg::Plain => ContentMode::Plain,
                ModeArg::LimitClosure => ContentMode::LimitClosure,
            };
            let table = content_scan(&ctx, &xs, 1..=a.t_max, mode, a.window)?;
            let mut text = format!("d = {}\n t  lower  upper  lower/t^d  upper/t^d", table.d);
            for r in &table.rows {
                text.push_str(&format!(
                    "\n{:>2}  {:>5}  {:>5}  {:>9}  {:>9}",
                    r.t, r.lower, r.upper, r.lower_ratio, r.upper_ratio
                ));
                if r.stabilized == Some(false) {
                    text.push_str("  (closure not stabilized)");
                }
            }
            let result = serde_json::to_value(&table).expect("table serializes");
            Ok(Outcome::new(result, text))
        }
        ContentCommand::LimitClosure(a) => {
            let ctx = QuotientPresentation::parse(&a.ring)?;
            let xs = parse_poly_list(&a.params, ctx.ring())?;
            let lc = limit_closure(&ctx, &xs, a.t, a.window)?;
            let gens = lc.ideal.canonical()?;
            let mut text = gens_text(gens.gens());
            if !lc.stabilized_within_window {
                text.push_str("\nwarning: chain did not stabilize within the window");
            }
            let result = json!({
                "ideal": strings(gens.gens()),
                "k": lc.k,
                "stabilized_within_window": lc.stabilized_within_window,
            });
            Ok(Outcome::new(result, text))
        }
    }
}

fn forcing_data(ring: &str, ideal: &str, target: &str) -> Result<ForcingData> {
    let ctx = QuotientPresentation::parse(ring)?;
    let gens = parse_poly_list(ideal, ctx.ring())?;
    let u = parse_poly(target, ctx.ring())?;
    ForcingData::new(ctx, gens, u)
}

fn names(text: &Option<String>) -> Option<Vec<String>> {
    text.as_ref().map(|t| t.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
}

fn exponents(text: &str) -> Result<Vec<u32>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::InvalidArgument(format!("`{s}` is not a Frobenius exponent"))))
        .collect()
}

fn force(c: &ForceCommand) -> Result<Outcome> {
    match c {
        ForceCommand::Build(a) => {
            let fd = forcing_data(&a.ring, &a.ideal, &a.target)?;
            let requested = names(&a.names);
            let alg = generic_forcing_algebra(&fd, requested.as_deref())?;
            let mut text = alg.presentation.to_string();
            for w in &alg.warnings {
                text.push_str(&format!("\nwarning: {w}"));
            }
            let result = json!({
                "presentation": alg.presentation.to_string(),
                "forcing_variables": alg.forcing_variables,
                "warnings": alg.warnings,
            });
            Ok(Outcome::new(result, text))
        }
        ForceCommand::TightTable(a) => {
            let ctx = QuotientPresentation::parse(&a.ring)?;
            let ideal = Ideal::parse(ctx.ring(), &a.ideal)?;
            let u = parse_poly(&a.target, ctx.ring())?;
            let c = parse_poly(&a.multiplier, ctx.ring())?;
            let table = tight_membership_table(&ctx, &ideal, &u, &c, a.e_max)?;
            let mut text = format!("multiplier {}", table.multiplier);
            for r in &table.rows {
                text.push_str(&format!("\ne={} q={}: {}", r.e, r.q, r.member));
            }
            Ok(Outcome::new(serde_json::to_value(&table).expect("table serializes"), text))
        }
        ForceCommand::TestElement(a) => {
            let ctx = QuotientPresentation::parse(&a.ring)?;
            let ideal = Ideal::parse(ctx.ring(), &a.ideal)?;
            let u = parse_poly(&a.target, ctx.ring())?;
            let es = exponents(&a.e_list)?;
            let found = test_element_search(&ctx, &ideal, &u, a.degree_bound, &es)?;
            let text = match &found {
                Some(c) => format!("multiplier {c}"),
                None => format!("no monomial multiplier of degree <= {}", a.degree_bound),
            };
            Ok(Outcome::new(json!({ "multiplier": found.map(|c| c.to_string()), "e_list": es }), text))
        }
        ForceCommand::LcClass(a) => {
            let ctx = QuotientPresentation::parse(&a.ring)?;
            let xs = parse_poly_list(&a.params, ctx.ring())?;
            let rows = lc_class_vanishing(&ctx, &xs, a.k_max)?;
            let text = rows.iter().map(|r| format!("k={}: {}", r.k, r.vanished)).collect::<Vec<_>>().join("\n");
            Ok(Outcome::new(json!({ "rows": rows }), text))
        }
        ForceCommand::Qseq(a) => {
            let fd = forcing_data(&a.ring, &a.ideal, &a.target)?;
            let params = match &a.params {
                Some(p) => parse_poly_list(p, fd.base.ring())?,
                None => fd.generators.clone(),
            };
            let config = QseqConfig {
                degree_bound: a.degree_bound,
                e_list: exponents(&a.e_list)?,
                t_max: a.t_max,
                search_degree: a.search_degree,
                max_checks: a.max_checks,
                names: names(&a.names),
            };
            let report = qseq_verdict_charp(&fd, &params, &config)?;
            let mut text = format!("verdict: {}\n{}", report.verdict, report.summary);
            for n in &report.notes {
                text.push_str(&format!("\nnote: {n}"));
            }
            Ok(Outcome::new(serde_json::to_value(&report).expect("report serializes"), text))
        }
    }
}

fn lab_command(c: &LabCommand) -> Result<Outcome> {
    match c {
        LabCommand::List => {
            let text = EXAMPLES
                .iter()
                .map(|e| format!("{:<20}{}{}", e.name, e.summary, if e.long { " (long)" } else { "" }))
                .collect::<Vec<_>>()
                .join("\n");
            let list: Vec<Value> =
                EXAMPLES.iter().map(|e| json!({ "name": e.name, "summary": e.summary, "long": e.long })).collect();
            Ok(Outcome::new(Value::from(list), text))
        }
        LabCommand::Run(a) => {
            let params = LabParams {
                t: a.t,
                s: a.s,
                k_max: a.k_max,
                field: a.field.as_deref().map(parse_field_name).transpose()?,
                sign: a.sign.as_deref().map(str::parse).transpose()?,
                degree_bound: a.degree_bound,
            };
            let report = lab::run_example(&a.name, &params)?;
            let mut out = Outcome::new(serde_json::to_value(&report).expect("report serializes"), report.to_string());
            out.passed = report.passed();
            Ok(out)
        }
        LabCommand::RunAll(a) => {
            let mut reports = Vec::new();
            let mut complete = true;
            for e in EXAMPLES.iter().filter(|e| a.long || !e.long) {
                match lab::run_example(e.name, &LabParams::default()) {
                    Ok(r) => reports.push(r),
                    Err(Error::BudgetExhausted) => {
                        complete = false;
                        break;
                    }
                    Err(err) => return Err(err),
                }
            }
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
            let mut text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
            text.push_str(&format!("\n{}/{} examples passed", reports.len() - failed.len(), reports.len()));
            let mut out = Outcome::new(serde_json::to_value(&reports).expect("reports serialize"), text);
            out.passed = failed.is_empty();
            out.complete = complete;
            Ok(out)
        }
    }
}
