//! JSON and text renderings of results.
//!
//! Coefficients are lists of terms `{constant, float, monomial}`: `constant`
//! is the exact value in the same syntax the parsers accept, `float` a
//! decimal view (null while free parameters remain), and `monomial` maps
//! perturbation parameters to exponents. `serde_json` maps are ordered, so
//! equal inputs give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use melnikov_core::bigfloat::bits_for_digits;
use melnikov_core::cyclicity::{linear_form, CyclicityCertificate};
use melnikov_core::interval::Interval;
use melnikov_core::melnikov::{CenterClassification, MelnikovExpansion, OriginType, WeightRule};
use melnikov_core::mixed::GammaRad;
use melnikov_core::normal_form::{coefficient_table, NormalForm};
use melnikov_core::poly::{fmt_q, Var};
use serde_json::{json, Map, Value};

use crate::numeric::LadderFit;
use crate::reproduce::{CaseReport, Outcome};

pub fn float_string(g: &GammaRad, digits: u32) -> Option<String> {
    g.eval(&BTreeMap::new(), bits_for_digits(digits) + 16).map(|r| r.to_sci(digits))
}

/// Split `g` into terms linear in `deltas`; anything else stays one term.
pub fn terms(g: &GammaRad, deltas: &[Var], digits: u32) -> Value {
    let mut out = Vec::new();
    let mut push = |c: GammaRad, mono: Map<String, Value>| {
        out.push(json!({
            "constant": c.to_string(),
            "float": float_string(&c, digits),
            "monomial": mono,
        }));
    };
    for (k, r) in g.terms() {
        match linear_form(r, deltas) {
            Ok(f) if !deltas.is_empty() => {
                for (d, c) in &f.coeffs {
                    let mut m = Map::new();
                    m.insert(d.to_string(), json!(1));
                    push(GammaRad::from_key(k.clone(), c.clone()), m);
                }
            }
            _ => push(GammaRad::from_key(k.clone(), r.clone()), Map::new()),
        }
    }
    Value::Array(out)
}

fn weights_name(w: WeightRule) -> &'static str {
    match w {
        WeightRule::WithJacobian => "with-jacobian",
        WeightRule::WithoutJacobian => "without-jacobian",
    }
}

pub fn expansion_json(exp: &MelnikovExpansion, deltas: &[Var], digits: u32) -> Value {
    let coeffs: Vec<Value> = exp
        .coefficients
        .iter()
        .enumerate()
        .map(|(l, b)| {
            json!({
                "l": l,
                "exponent": fmt_q(&exp.exponent(l as u32)),
                "value": b.to_string(),
                "terms": terms(b, deltas, digits),
            })
        })
        .collect();
    json!({
        "p": exp.p,
        "order": exp.order,
        "weights": weights_name(exp.weights),
        "deltas": deltas.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "coefficients": coeffs,
        "assumptions": exp.assumptions,
    })
}

pub fn expansion_text(exp: &MelnikovExpansion) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "M(h) = sum_l b_l h^((p+1+2l)/(2p)), p = {}", exp.p);
    for (l, b) in exp.coefficients.iter().enumerate() {
        let _ = writeln!(s, "b{l} [h^({})] = {b}", fmt_q(&exp.exponent(l as u32)));
    }
    for a in &exp.assumptions {
        let _ = writeln!(s, "assuming {a}");
    }
    s
}

fn interval(iv: &Interval) -> Value {
    json!({"lo": fmt_q(&iv.lo), "hi": fmt_q(&iv.hi)})
}

/// The chain variable whose enclosure is the isolated root.
fn root_var(c: &CyclicityCertificate) -> String {
    let r = c.root.as_ref();
    c.witness
        .iter()
        .find(|(_, iv)| r.is_some_and(|r| r.lo == iv.lo && r.hi == iv.hi))
        .map(|(v, _)| v.to_string())
        .unwrap_or_else(|| "t".into())
}

pub fn certificate_json(c: &CyclicityCertificate) -> Value {
    let rv = root_var(c);
    json!({
        "established": c.established,
        "cycles": c.cycles,
        "k": c.k,
        "n": c.n,
        "failure": c.failure,
        "branch": c.branch.iter().map(|(v, f)| json!({"var": v.to_string(), "value": f.to_string()})).collect::<Vec<_>>(),
        "jacobian": c.jacobian.to_string(),
        "factors": c.factors.iter().enumerate().map(|(j, f)| json!({"j": j, "L": f.l.to_string(), "Delta": f.delta.to_string()})).collect::<Vec<_>>(),
        "witness": c.witness.iter().map(|(v, iv)| json!({"var": v.to_string(), "enclosure": interval(iv)})).collect::<Vec<_>>(),
        "root": c.root.as_ref().map(|r| json!({
            "lo": fmt_q(&r.lo),
            "hi": fmt_q(&r.hi),
            "multiplicity": r.multiplicity,
            "var": rv,
            "factor": r.factor.to_poly(&rv).to_string(),
        })),
        "sigma_jacobian": c.sigma_jacobian.as_ref().map(|p| p.to_string()),
        "checks": c.checks.iter().map(|k| json!({
            "what": k.what,
            "expr": k.expr,
            "enclosure": k.enclosure.as_ref().map(interval),
            "ok": k.ok,
        })).collect::<Vec<_>>(),
        "assumptions": c.assumptions,
    })
}

pub fn certificate_text(c: &CyclicityCertificate) -> String {
    let mut s = String::new();
    for (v, f) in &c.branch {
        let _ = writeln!(s, "solve {v} = {f}");
    }
    for (j, f) in c.factors.iter().enumerate() {
        let _ = writeln!(s, "L{j} = {}\nDelta{j} = {}", f.l, f.delta);
    }
    if let Some(r) = &c.root {
        let v = root_var(c);
        let _ = writeln!(s, "{v} in {r}, root of {}", r.factor.to_poly(&v));
    }
    for (v, iv) in &c.witness {
        let _ = writeln!(s, "witness {v} in {iv}");
    }
    for k in &c.checks {
        let e = k.enclosure.as_ref().map(|i| i.to_string()).unwrap_or_else(|| "exact".into());
        let _ = writeln!(s, "[{}] {} = {} in {e}", if k.ok { "ok" } else { "FAIL" }, k.what, k.expr);
    }
    match (&c.failure, c.established) {
        (_, true) => {
            let _ = writeln!(s, "established: {} limit cycles (k = {}, n = {})", c.cycles, c.k, c.n);
        }
        (Some(f), false) => {
            let _ = writeln!(s, "not established: {f}");
        }
        (None, false) => s.push_str("not established\n"),
    }
    s
}

fn origin_name(k: &OriginType) -> String {
    match k {
        OriginType::ElementaryCenter => "elementary center".into(),
        OriginType::NilpotentCenter { order } => format!("nilpotent center of order {order}"),
        OriginType::Cusp { order } => format!("cusp of order {order}"),
        OriginType::Saddle { order: 0 } => "saddle".into(),
        OriginType::Saddle { order } => format!("nilpotent saddle of order {order}"),
        OriginType::NonIsolated => "non-isolated singular point".into(),
    }
}

pub fn classification_json(c: &CenterClassification, symmetric: Option<&str>) -> Value {
    json!({
        "type": origin_name(&c.kind),
        "center": matches!(c.kind, OriginType::ElementaryCenter | OriginType::NilpotentCenter { .. }),
        "k": c.k,
        "h_k": c.h_k.as_ref().map(|h| h.to_string()),
        "p": c.p,
        "symmetric_type": symmetric,
        "notes": c.notes,
    })
}

pub fn classification_text(c: &CenterClassification, symmetric: Option<&str>) -> String {
    let mut s = format!("origin: {}\n", origin_name(&c.kind));
    if let (Some(k), Some(h)) = (c.k, &c.h_k) {
        let _ = writeln!(s, "H(x, phi(x)) = ({h}) x^{k} + ...");
    }
    if let Some(p) = c.p {
        let _ = writeln!(s, "p = {p}");
    }
    if let Some(t) = symmetric {
        let _ = writeln!(s, "symmetric family: {t}");
    }
    for n in &c.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

fn table(h: &melnikov_core::bipoly::BiPoly, degrees: &[u32]) -> Value {
    Value::Object(coefficient_table(h, degrees).into_iter().map(|(k, v)| (k, json!(v.to_string()))).collect())
}

pub fn normal_form_json(nf: &NormalForm) -> Value {
    let ch = &nf.change;
    json!({
        "hamiltonian": nf.hamiltonian.to_string(),
        "hamiltonian_coefficients": table(&nf.hamiltonian, &[2, 3, 4]),
        "divergence": nf.divergence.to_string(),
        "divergence_coefficients": table(&nf.divergence, &[0, 1, 2]),
        "change": {
            "a": ch.a.to_string(), "b": ch.b.to_string(), "c": ch.c.to_string(), "d": ch.d.to_string(),
            "x0": ch.x0.to_string(), "y0": ch.y0.to_string(), "k": ch.k.to_string(),
        },
        "A": nf.a.as_ref().map(|a| a.to_string()),
        "B": nf.b.as_ref().map(|b| b.to_string()),
    })
}

pub fn normal_form_text(nf: &NormalForm) -> String {
    let ch = &nf.change;
    let mut s = format!(
        "x0 = {}, y0 = {}\nu = ({})*(x - x0) + ({})*(y - y0)\nv = ({})*(x - x0) + ({})*(y - y0)\ntau = ({})*t\n",
        ch.x0, ch.y0, ch.a, ch.b, ch.c, ch.d, ch.k
    );
    let _ = writeln!(s, "H = {}", nf.hamiltonian);
    let _ = writeln!(s, "div = {}", nf.divergence);
    for (k, v) in coefficient_table(&nf.divergence, &[0, 1, 2]) {
        let _ = writeln!(s, "  {k} = {v}");
    }
    s
}

fn outcome_json(o: &Outcome) -> Value {
    match o {
        Outcome::Match(a) => json!({"status": "match", "agreement": format!("{a:?}")}),
        Outcome::Erratum { agreement, notes } => {
            json!({"status": "erratum", "agreement": format!("{agreement:?}"), "notes": notes})
        }
        Outcome::Mismatch(d) => json!({"status": "mismatch", "diff": d}),
        Outcome::Unchecked => json!({"status": "unchecked"}),
    }
}

pub fn case_json(r: &CaseReport) -> Value {
    json!({
        "case": r.case,
        "passed": r.passed(),
        "lines": r.lines.iter().map(|l| json!({"key": l.key, "outcome": outcome_json(&l.outcome)})).collect::<Vec<_>>(),
    })
}

pub fn case_text(r: &CaseReport) -> String {
    let mut s = String::new();
    for l in &r.lines {
        let line = match &l.outcome {
            Outcome::Match(a) => format!("match     {} ({a:?})", l.key),
            Outcome::Erratum { notes, .. } => format!("erratum   {} ({})", l.key, notes.join("; ")),
            Outcome::Mismatch(d) => format!("MISMATCH  {}: {d}", l.key),
            Outcome::Unchecked => format!("unchecked {}", l.key),
        };
        s.push_str(&line);
        s.push('\n');
    }
    let _ = writeln!(s, "{}: {}", r.case, if r.passed() { "reproduced" } else { "NOT reproduced" });
    s
}

pub fn samples_csv(fit: &LadderFit) -> String {
    let mut s = String::from("h,M_num,err_est\n");
    for o in &fit.orbits {
        let _ = writeln!(s, "{:e},{:e},{:e}", o.h, o.melnikov, o.err_est);
    }
    s
}
