//! One line per acceptance criterion; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use melnikov_core::bigfloat::Real;
use melnikov_core::bipoly::BiPoly;
use melnikov_core::melnikov::*;
use melnikov_core::normal_form::*;
use melnikov_core::poly::*;
use melnikov_core::radical::RadExpr;
use melnikov_core::series::TruncSeries;
use melnikov_kit::numeric::{ladder_fit, FPoly, NumericSystem, TraceOptions};
use melnikov_kit::reproduce::{reproduce, CaseReport, Outcome};
use melnikov_kit::SystemFile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240607;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn case_summary(r: &CaseReport) -> (bool, String) {
    let n = r.lines.len();
    let errata: Vec<&str> =
        r.lines.iter().filter(|l| matches!(l.outcome, Outcome::Erratum { .. })).map(|l| l.key.as_str()).collect();
    let bad: Vec<String> = r
        .lines
        .iter()
        .filter(|l| !l.outcome.ok())
        .map(|l| match &l.outcome {
            Outcome::Mismatch(d) => format!("{}: {}", l.key, d.chars().take(120).collect::<String>()),
            _ => format!("{}: unchecked", l.key),
        })
        .collect();
    let mut s = format!("{}: {}/{} keys agree", r.case, n - bad.len(), n);
    if !errata.is_empty() {
        s += &format!(" ({} via recorded errata: {})", errata.len(), errata.join(", "));
    }
    if !bad.is_empty() {
        s += &format!("; failing {}", bad.join("; "));
    }
    (bad.is_empty(), s)
}

fn cycles(r: &CaseReport) -> String {
    match r.line("cycles").map(|l| &l.outcome) {
        Some(o) if o.ok() => "cycle count certified as printed".into(),
        Some(_) => "cycle count differs".into(),
        None => "no cycle claim".into(),
    }
}

fn run_case(case: &str, budget: Duration) -> (bool, String) {
    match reproduce(case, SEED) {
        Ok(r) => {
            let (ok, s) = case_summary(&r);
            let fast = r.elapsed < budget;
            (ok && fast, format!("{s}; {}; {:.2?} (budget {budget:?})", cycles(&r), r.elapsed))
        }
        Err(e) => (false, format!("{case}: {e}")),
    }
}

fn c1() -> Verdict {
    let (ok, s) = run_case("appendix-p2", Duration::from_secs(60));
    verdict(ok, s)
}

fn c2() -> Verdict {
    let (ok, s) = run_case("thm7", Duration::from_secs(600));
    verdict(ok, s)
}

fn c3() -> Verdict {
    let (ok, s) = run_case("thm8", Duration::from_secs(600));
    verdict(ok, s)
}

fn c4() -> Verdict {
    let (ok, s) = run_case("bhf2", Duration::from_secs(600));
    verdict(ok, s)
}

fn c5() -> Verdict {
    let mut all = true;
    let mut parts = Vec::new();
    for case in ["thm9", "thm9p", "thm10"] {
        let (ok, s) = run_case(case, Duration::from_secs(600));
        all &= ok;
        parts.push(s);
    }
    verdict(all, parts.join(" | "))
}

fn rq(n: i64, d: i64) -> RadExpr {
    RadExpr::from_q(qr(n, d))
}

fn random_bipoly(rng: &mut ChaCha8Rng, degrees: std::ops::RangeInclusive<u32>) -> BiPoly {
    let mut out = BiPoly::zero();
    for n in degrees {
        for j in 0..=n {
            out.add_term(n - j, j, rq(rng.gen_range(-4..=4), 3));
        }
    }
    out
}

fn c6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let opts = ExpansionOptions::default();
    let mut done = 0;
    let mut tries = 0;
    while done < 20 && tries < 200 {
        tries += 1;
        let w = q(rng.gen_range(1..=3));
        let mut h = BiPoly::zero();
        h.add_term(2, 0, RadExpr::from_q(&w / q(2)));
        h.add_term(0, 2, RadExpr::from_q(&w / q(2)));
        let h = h.add(&random_bipoly(&mut rng, 3..=4));
        let div = random_bipoly(&mut rng, 0..=2);
        let (a, b) = (rng.gen_range(-3i64..=3), rng.gen_range(1i64..=3));
        let k = [-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
        // Conformal or reflected linear part keeps the elementary normal form.
        let (c, d) = if rng.gen_bool(0.5) { (b, -a) } else { (-b, a) };
        let w2 = &w * qr(a * d - b * c, k * (a * a + b * b));
        if w2 <= q(0) {
            continue;
        }
        let run = || -> melnikov_core::Result<bool> {
            let sys = SystemSpec::new(h.clone(), div.clone(), w.clone(), CenterKind::Elementary)?;
            let exp = melnikov_expansion(&sys, 3, &opts)?;
            let ch =
                AffineChange::new(rq(a, 1), rq(b, 1), rq(c, 1), rq(d, 1), RadExpr::zero(), RadExpr::zero(), rq(k, 1))?;
            let h2 = transport_hamiltonian(&h, &ch, &RadExpr::zero())?;
            let sys2 = SystemSpec::new(h2, transport_divergence(&div, &ch)?, w2.clone(), CenterKind::Elementary)?;
            let direct = melnikov_expansion(&sys2, 3, &opts)?;
            let law = transport_melnikov(&exp, &ch)?;
            Ok((0..4).all(|l| direct.coefficients[l].sub(&law.coefficients[l]).is_zero()))
        };
        match run() {
            Ok(true) => done += 1,
            Ok(false) => return verdict(false, format!("instance {done}: b_0..b_3 differ")),
            Err(e) => return verdict(false, format!("instance {done}: {e}")),
        }
    }
    verdict(done == 20, format!("{done}/20 random instances, b_0..b_3 exactly equal"))
}

fn numeric_coeffs(exp: &MelnikovExpansion) -> Vec<f64> {
    exp.coefficients.iter().map(|b| b.eval(&BTreeMap::new(), 128).unwrap().to_f64()).collect()
}

fn oracle(file: &str, vals: &BTreeMap<Var, Q>) -> Result<(f64, f64), String> {
    let f = SystemFile::parse(file).and_then(|f| f.with_values(vals)).map_err(|e| e.to_string())?;
    let spec = f.spec().map_err(|e| e.to_string())?;
    let exp = melnikov_expansion(&spec, 1, &ExpansionOptions::default()).map_err(|e| e.to_string())?;
    let b = numeric_coeffs(&exp);
    let none = BTreeMap::new();
    let h = FPoly::from_bipoly(&spec.hamiltonian, &none).map_err(|e| e.to_string())?;
    let d = FPoly::from_bipoly(&spec.divergence, &none).map_err(|e| e.to_string())?;
    let sys = NumericSystem::from_divergence(h, &d, exp.p);
    // i = 0…5.
    let lf = ladder_fit(&sys, None, 6, 4, &TraceOptions::default()).map_err(|e| e.to_string())?;
    let rel = |i: usize| (lf.fit.coeffs[i] - b[i]).abs() / b[i].abs();
    Ok((rel(0), rel(1)))
}

fn random_delta(rng: &mut ChaCha8Rng) -> BTreeMap<Var, Q> {
    ["c00", "c10", "c01", "c20", "c11", "c02"]
        .iter()
        .map(|d| {
            let mut n = 0;
            while n == 0 {
                n = rng.gen_range(-8..=8);
            }
            (var(d), qr(n, 4))
        })
        .collect()
}

fn c7() -> Verdict {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut v7 = random_delta(&mut rng);
    v7.insert(var("r"), qr(1, 3));
    let mut v8 = random_delta(&mut rng);
    v8.insert(var("A"), q(0));
    v8.insert(var("B"), q(1));
    let mut all = true;
    let mut parts = Vec::new();
    for (name, file, vals) in [
        ("six-cycle family, r = 1/3", include_str!("../systems/six_cycles.sys"), &v7),
        ("nilpotent form, A = 0, B = 1", include_str!("../systems/nilpotent_form.sys"), &v8),
    ] {
        match oracle(file, vals) {
            Ok((e0, e1)) => {
                let ok = e0 <= 1e-3 && e1 <= 1e-3;
                all &= ok;
                parts.push(format!("{name}: rel err b0 {e0:.1e}, b1 {e1:.1e}"));
            }
            Err(e) => {
                all = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    let el = t.elapsed();
    verdict(all && el < Duration::from_secs(300), format!("{} (tol 1e-3); {el:.2?}", parts.join("; ")))
}

const BITS: u32 = 256;

/// Tanh-sinh nodes on `[0, 1]` as `(ln v, ln(1 - v), ln(1 + v), weight)`.
fn tanh_sinh_nodes(level: u32, tmax: i64) -> Vec<(Real, Real, Real, Real)> {
    let half_pi = Real::pi(BITS).mul_q(&qr(1, 2));
    let one = Real::from_int(1, BITS);
    let n = tmax << level;
    let mut out = Vec::new();
    for k in -n..=n {
        let t = Real::from_q(&Q::new(k.into(), (1i64 << level).into()), BITS);
        let (et, emt) = (t.exp(), t.neg().exp());
        let u = half_pi.mul(&et.sub(&emt).mul_q(&qr(1, 2)));
        let cosh = et.add(&emt).mul_q(&qr(1, 2));
        // a = exp(-2|u|), so 1/cosh²(u) = 4a/(1+a)² without cancellation.
        let a = u.abs().mul_q(&q(-2)).exp();
        if a.is_zero() {
            continue;
        }
        let opa = one.add(&a);
        let w = half_pi
            .mul(&cosh)
            .mul(&a)
            .mul_q(&q(4))
            .div(&opa)
            .div(&opa)
            .mul_q(&Q::new(1.into(), (2i64 << level).into()));
        let (small, big) = (a.div(&opa), one.div(&opa));
        let (v, omv) = if k >= 0 { (big, small) } else { (small, big) };
        if v.is_zero() || omv.is_zero() {
            continue;
        }
        out.push((v.ln(), omv.ln(), one.add(&v).ln(), w));
    }
    out
}

fn beta_check() -> Result<f64, String> {
    let nodes = tanh_sinh_nodes(4, 5);
    let mut worst: f64 = 0.0;
    for p in 1..=4u32 {
        for i in 0..=6u32 {
            for j in 0..=6u32 {
                // ∫₀¹ v^(2i/p) (1 - v²)^(j + 1/2) dv
                let alpha = Q::new((2 * i).into(), p.into());
                let beta = Q::new((2 * j + 1).into(), 2.into());
                let mut sum = Real::zero(BITS);
                for (lv, l1m, l1p, w) in &nodes {
                    sum = sum.add(&lv.mul_q(&alpha).add(&l1m.add(l1p).mul_q(&beta)).exp().mul(w));
                }
                let exact = beta_coeff(i, j, p).eval(BITS);
                let x = exact.to_f64();
                if !(x > 0.0 && x < 1.0) {
                    return Err(format!("beta({i},{j},{p}) = {x} outside (0, 1)"));
                }
                worst = worst.max(exact.sub(&sum).abs().div(&exact).to_f64());
            }
        }
    }
    Ok(worst)
}

fn sq(cs: &[i64], order: usize) -> TruncSeries<Q> {
    TruncSeries::new(cs.iter().map(|&c| q(c)).collect(), order, Q::from_integer(0.into()))
}

fn series_identities(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let id = sq(&[0, 1], 12);
    for n in 0..24 {
        let mut cs = vec![0, [-3i64, -1, 1, 2, 5][rng.gen_range(0..5)]];
        cs.extend((0..11).map(|_| rng.gen_range(-6..=6)));
        let s = sq(&cs, 12);
        let g = s.reverse().map_err(|e| e.to_string())?;
        if s.compose(&g).map_err(|e| e.to_string())? != id || g.compose(&s).map_err(|e| e.to_string())? != id {
            return Err(format!("reversion instance {n}"));
        }
        let mut cs = vec![1];
        cs.extend((0..11).map(|_| rng.gen_range(-6..=6)));
        let s = sq(&cs, 12);
        let r = s.reciprocal_sqrt().map_err(|e| e.to_string())?;
        if r.mul(&r).mul(&s) != sq(&[1], 12) {
            return Err(format!("reciprocal sqrt instance {n}"));
        }
    }
    Ok(())
}

fn elementary_sys(div: BiPoly) -> melnikov_core::Result<SystemSpec> {
    let (x, y) = (Poly::var("x"), Poly::var("y"));
    let h =
        &(&(&x.pow(2).scale(&qr(1, 2)) + &y.pow(2).scale(&qr(1, 2))) + &x.pow(3).scale(&qr(1, 3))) - &(&x * &y.pow(2));
    let h = &h + &y.pow(4).scale(&qr(1, 4));
    SystemSpec::new(BiPoly::from_poly(&h, "x", "y"), div, q(1), CenterKind::Elementary)
}

fn linearity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mons = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
    let o = ExpansionOptions::default();
    let e =
        |d: &BiPoly| elementary_sys(d.clone()).and_then(|s| melnikov_expansion(&s, 2, &o)).map_err(|e| e.to_string());
    for n in 0..100 {
        let (mut da, mut db, mut ds) = (BiPoly::zero(), BiPoly::zero(), BiPoly::zero());
        let s = rng.gen_range(-3i64..=3);
        for &(i, j) in &mons {
            let (a, b) = (rng.gen_range(-4i64..=4), rng.gen_range(-4i64..=4));
            da.add_term(i, j, RadExpr::int(a));
            db.add_term(i, j, RadExpr::int(b));
            ds.add_term(i, j, RadExpr::int(s * a + b));
        }
        let (ea, eb, es) = (e(&da)?, e(&db)?, e(&ds)?);
        for l in 0..3 {
            if !es.coefficients[l].sub(&ea.coefficients[l].scale(&q(s)).add(&eb.coefficients[l])).is_zero() {
                return Err(format!("instance {n}: b{l} is not linear"));
            }
        }
    }
    Ok(())
}

fn c8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut parts = Vec::new();
    let mut all = true;
    let mut note = |ok: bool, s: String| {
        all &= ok;
        parts.push(s);
    };
    match linearity(&mut rng) {
        Ok(()) => note(true, "linearity: 100/100 exact".into()),
        Err(e) => note(false, format!("linearity: {e}")),
    }
    match elementary_sys(BiPoly::zero()).and_then(|s| melnikov_expansion(&s, 3, &ExpansionOptions::default())) {
        Ok(exp) => note(exp.coefficients.iter().all(|b| b.is_zero()), "zero perturbation: b_0..b_3 = 0".into()),
        Err(e) => note(false, format!("zero perturbation: {e}")),
    }
    match beta_check() {
        Ok(w) => note(w <= 1e-25, format!("beta_ij in (0,1), worst rel diff vs quadrature {w:.1e} (tol 1e-25)")),
        Err(e) => note(false, e),
    }
    match series_identities(&mut rng) {
        Ok(()) => note(true, "reversion and reciprocal-sqrt identities exact at order 12".into()),
        Err(e) => note(false, e),
    }
    verdict(all, parts.join("; "))
}

type Criterion = fn() -> Verdict;

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("1 appendix p = 2 coefficients", c1),
        ("2 six-cycle family", c2),
        ("3 nilpotent form, four cycles", c3),
        ("4 phi and H* tables", c4),
        ("5 symmetric nilpotent families", c5),
        ("6 transport law", c6),
        ("7 numeric oracle", c7),
        ("8 property suites", c8),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let v = f();
        if !v.pass {
            failed += 1;
        }
        println!("criterion {name}: {} [{:.2?}] {}", if v.pass { "PASS" } else { "FAIL" }, t.elapsed(), v.detail);
    }
    println!("acceptance: {}/8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
