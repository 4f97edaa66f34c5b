//! Recompute the printed tables of the worked examples and compare them with
//! the transcriptions in `golden/`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use melnikov_core::bipoly::BiPoly;
use melnikov_core::cyclicity::{
    certify_cycles, eval_poly_rad, sequential_eliminate, CertifyPlan, Elimination, LinearCoeffSystem, LinearForm,
};
use melnikov_core::melnikov::*;
use melnikov_core::mixed::GammaRad;
use melnikov_core::normal_form::*;
use melnikov_core::parse::parse_rad;
use melnikov_core::poly::{q, qr, var, Poly, Var, Q};
use melnikov_core::radical::RadExpr;
use melnikov_core::ratfunc::RatFunc;

use crate::error::{KitError, Result};
use crate::golden::{compare, Agreement, Golden};

pub const CASES: [&str; 7] = ["appendix-p2", "thm7", "thm8", "thm9", "thm9p", "thm10", "bhf2"];

pub fn golden_text(case: &str) -> Option<&'static str> {
    Some(match case {
        "appendix-p2" => include_str!("../golden/appendix-p2.golden"),
        "thm7" => include_str!("../golden/thm7.golden"),
        "thm8" => include_str!("../golden/thm8.golden"),
        "thm9" => include_str!("../golden/thm9.golden"),
        "thm9p" => include_str!("../golden/thm9p.golden"),
        "thm10" => include_str!("../golden/thm10.golden"),
        "bhf2" => include_str!("../golden/bhf2.golden"),
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Match(Agreement),
    /// The printed form disagrees; the recorded correction agrees.
    Erratum {
        agreement: Agreement,
        notes: Vec<String>,
    },
    Mismatch(String),
    /// A reference value with no computed counterpart.
    Unchecked,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        matches!(self, Outcome::Match(_) | Outcome::Erratum { .. })
    }
}

#[derive(Clone, Debug)]
pub struct CheckLine {
    pub key: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: String,
    pub lines: Vec<CheckLine>,
    pub elapsed: Duration,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.outcome.ok())
    }

    pub fn line(&self, key: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.key == key)
    }
}

struct Checker<'a> {
    g: &'a Golden,
    seed: u64,
    lines: Vec<CheckLine>,
    seen: BTreeSet<String>,
}

impl<'a> Checker<'a> {
    fn new(g: &'a Golden, seed: u64) -> Self {
        Checker { g, seed, lines: Vec::new(), seen: BTreeSet::new() }
    }

    fn push(&mut self, key: &str, outcome: Outcome) {
        self.seen.insert(key.to_string());
        self.lines.push(CheckLine { key: key.to_string(), outcome });
    }

    fn check(&mut self, key: &str, computed: &GammaRad) -> Result<()> {
        let (printed, _) = self.g.value(key, false)?;
        let a = compare(computed, &printed, self.seed);
        if a.ok() {
            self.push(key, Outcome::Match(a));
            return Ok(());
        }
        let (fixed, notes) = self.g.value(key, true)?;
        let outcome = if notes.is_empty() {
            let Agreement::Differs(d) = a else { unreachable!() };
            Outcome::Mismatch(format!("{d}; computed {computed}"))
        } else {
            match compare(computed, &fixed, self.seed) {
                b if b.ok() => Outcome::Erratum { agreement: b, notes },
                Agreement::Differs(d) => Outcome::Mismatch(format!("{d} even with errata; computed {computed}")),
                _ => unreachable!(),
            }
        };
        self.push(key, outcome);
        Ok(())
    }

    fn check_rad(&mut self, key: &str, computed: &RadExpr) -> Result<()> {
        self.check(key, &GammaRad::from_rad(computed.clone()))
    }

    fn check_int(&mut self, key: &str, computed: usize) -> Result<()> {
        let want = self.g.integer(key)?;
        let o = if want == computed as i64 {
            Outcome::Match(Agreement::Exact)
        } else {
            Outcome::Mismatch(format!("expected {want}, computed {computed}"))
        };
        self.push(key, o);
        Ok(())
    }

    fn fail(&mut self, key: &str, why: impl Into<String>) {
        self.push(key, Outcome::Mismatch(why.into()));
    }

    fn finish(mut self) -> Vec<CheckLine> {
        for k in &self.g.keys {
            if !self.seen.contains(k) {
                self.lines.push(CheckLine { key: k.clone(), outcome: Outcome::Unchecked });
            }
        }
        self.lines
    }
}

fn vars(names: &[&str]) -> Vec<Var> {
    names.iter().map(|d| var(d)).collect()
}

fn vals(pairs: &[(&str, Q)]) -> BTreeMap<Var, Q> {
    pairs.iter().map(|(k, v)| (var(k), v.clone())).collect()
}

/// State after solving `b_0 = … = b_{k-1} = 0` in the given order.
struct Stage {
    elim: Elimination,
    residual: LinearCoeffSystem,
}

impl Stage {
    fn new(lin: &LinearCoeffSystem, order: &[&str]) -> Result<Stage> {
        let ord: Vec<Option<Var>> = order.iter().map(|d| Some(var(d))).collect();
        let elim = sequential_eliminate(lin, &ord)?;
        let k = elim.k();
        let mut rows = vec![LinearForm::zero(); k];
        rows.extend(elim.residuals.iter().cloned());
        let residual = LinearCoeffSystem { deltas: lin.deltas.clone(), keys: lin.keys.clone(), rows };
        Ok(Stage { elim, residual })
    }

    fn b(&self, l: usize) -> Result<GammaRad> {
        Ok(self.residual.coefficient(l)?)
    }

    fn solved(&self, v: &str) -> Result<RadExpr> {
        self.elim
            .solved()
            .into_iter()
            .find(|(w, _)| &**w == v)
            .map(|(_, f)| f.to_rad())
            .ok_or_else(|| KitError::Usage(format!("{v} was not eliminated")))
    }
}

/// `a / b` for values sharing their transcendental factor.
fn ratio(a: &GammaRad, b: &GammaRad) -> Result<RadExpr> {
    let r = a.div(b)?;
    if r.is_zero() {
        return Ok(RadExpr::zero());
    }
    match r.single_term() {
        Some((k, v)) if k.is_one() => Ok(v.clone()),
        _ => Err(KitError::Numeric(format!("ratio {r} is not algebraic"))),
    }
}

fn as_ratfunc(r: &RadExpr) -> Result<RatFunc> {
    r.as_ratfunc().ok_or_else(|| KitError::Numeric(format!("{r} is not a rational function")))
}

/// Rational function with radical values substituted for some variables.
fn eval_ratfunc_rad(f: &RatFunc, at: &BTreeMap<Var, RadExpr>) -> Result<RadExpr> {
    let n = eval_poly_rad(f.numer(), at)?;
    let d = eval_poly_rad(&f.denom(), at)?;
    Ok(n.div(&d)?)
}

fn deltas6() -> Vec<Var> {
    vars(&["c00", "c10", "c01", "c02", "c11", "c20"])
}

fn symmetric_divergence() -> BiPoly {
    quadratic_divergence(&[("c00", 0, 0), ("c20", 2, 0), ("c11", 1, 1), ("c02", 0, 2)])
}

fn thm7(c: &mut Checker) -> Result<()> {
    let s = SymmetricSystem::generic().normalize_elementary();
    let mut s = s.eval_partial(&vals(&[("h11", q(0)), ("h22", q(0)), ("h31", q(1))]));
    s.h40 = Poly::var("r");
    let nf = elementary_normal_form(&s, &BiPoly::zero())?;
    let h =
        nf.hamiltonian.to_poly("u", "v").ok_or_else(|| KitError::Numeric("normal form is not polynomial".into()))?;
    c.check_rad("H", &RadExpr::from_poly(h))?;
    let sys = SystemSpec::new(nf.hamiltonian, full_quadratic_divergence(), q(1), CenterKind::Elementary)?;
    let exp = melnikov_expansion(&sys, 6, &ExpansionOptions::default())?;
    let lin = LinearCoeffSystem::from_expansion(&exp, &deltas6())?;
    c.check("b0", &lin.coefficient(0)?)?;
    let s1 = Stage::new(&lin, &["c00"])?;
    for l in 1..=6 {
        c.check(&format!("b{l}"), &s1.b(l)?)?;
    }
    let s3 = Stage::new(&lin, &["c00", "c02", "c11"])?;
    c.check_rad("c02", &s3.solved("c02")?)?;
    c.check_rad("c11", &s3.solved("c11")?)?;
    for l in 3..=6 {
        c.check(&format!("bt{l}"), &s3.b(l)?)?;
    }
    let s4 = Stage::new(&lin, &["c00", "c02", "c11", "c10"])?;
    c.check_rad("c10", &s4.solved("c10")?)?;
    c.check("bt4_c10", &s4.b(4)?)?;
    let order = ["c00", "c02", "c11", "c10", "c20"];
    let s5 = Stage::new(&lin, &order)?;
    c.check_rad("c20", &s5.solved("c20")?)?;
    c.check("bt5_c20", &s5.b(5)?)?;
    c.check("bt6_c20", &s5.b(6)?)?;
    let plan = CertifyPlan {
        order: order.iter().map(|d| Some(var(d))).collect(),
        chain: vec![var("r")],
        ..Default::default()
    };
    let cert = certify_cycles(&lin, &plan)?;
    check_cycles(c, &cert)
}

fn check_cycles(c: &mut Checker, cert: &melnikov_core::cyclicity::CyclicityCertificate) -> Result<()> {
    if cert.established {
        c.check_int("cycles", cert.cycles)
    } else {
        c.fail("cycles", format!("certificate not established: {}", cert.failure.clone().unwrap_or_default()));
        Ok(())
    }
}

fn thm8(c: &mut Checker) -> Result<()> {
    let h = nilpotent_center_form("A", "B");
    let pos = &Poly::var("B") - &Poly::var("A").pow(2).scale(&q(2));
    let sys = SystemSpec::new(h, full_quadratic_divergence(), q(1), CenterKind::Nilpotent)?.with_positive(vec![pos]);
    let exp = melnikov_expansion(&sys, 4, &ExpansionOptions::default())?;
    let lin = LinearCoeffSystem::from_expansion(&exp, &deltas6())?;
    c.check("b0", &lin.coefficient(0)?)?;
    let s1 = Stage::new(&lin, &["c00"])?;
    for l in 1..=4 {
        c.check(&format!("b{l}"), &s1.b(l)?)?;
    }
    let s2 = Stage::new(&lin, &["c00", "c20"])?;
    c.check_rad("c20", &s2.solved("c20")?)?;
    for l in 2..=4 {
        c.check(&format!("bt{l}"), &s2.b(l)?)?;
    }
    let s3 = Stage::new(&lin, &["c00", "c20", "c02"])?;
    c.check_rad("c02", &s3.solved("c02")?)?;
    c.check("bt3_c02", &s3.b(3)?)?;
    c.check("bt4_c02", &s3.b(4)?)?;
    c.check("bt4_A0", &s3.b(4)?.eval_partial(&vals(&[("A", q(0))]))?)?;
    let lin1 = lin.eval_partial(&vals(&[("B", q(1))]))?;
    let plan = CertifyPlan {
        order: ["c00", "c20", "c02"].iter().map(|d| Some(var(d))).collect(),
        chain: vec![var("A")],
        root_hint: Some(q(0)),
        ..Default::default()
    };
    check_cycles(c, &certify_cycles(&lin1, &plan)?)
}

fn symmetric_elementary(h11: i64, order: u32) -> Result<LinearCoeffSystem> {
    let s = SymmetricSystem::generic().normalize_elementary().eval_partial(&vals(&[("h11", q(h11))]));
    let nf = elementary_normal_form(&s, &symmetric_divergence())?;
    let sys = SystemSpec::new(nf.hamiltonian, nf.divergence, q(1), CenterKind::Elementary)?;
    let exp = melnikov_expansion(&sys, order, &ExpansionOptions::default())?;
    Ok(LinearCoeffSystem::from_expansion(&exp, &vars(&["c00", "c02", "c11", "c20"]))?)
}

fn thm9(c: &mut Checker) -> Result<()> {
    let lin = symmetric_elementary(0, 5)?;
    c.check("b0", &lin.coefficient(0)?)?;
    let s1 = Stage::new(&lin, &["c00"])?;
    for l in 1..=3 {
        c.check(&format!("b{l}"), &s1.b(l)?)?;
    }
    let s2 = Stage::new(&lin, &["c00", "c20"])?;
    c.check_rad("c20", &s2.solved("c20")?)?;
    c.check("bt2", &s2.b(2)?)?;
    let order = ["c00", "c20", "c02"];
    let s3 = Stage::new(&lin, &order)?;
    c.check_rad("c02", &s3.solved("c02")?)?;
    for l in 3..=5 {
        c.check(&format!("bt{l}_c02"), &s3.b(l)?)?;
    }
    // Δ_i relative to the printed common factor L.
    let l = c.g.resolved("L")?;
    let d: Vec<RatFunc> =
        (3..=5).map(|i| s3.b(i).and_then(|b| ratio(&b, &l)).and_then(|r| as_ratfunc(&r))).collect::<Result<_>>()?;
    let d0 = d[0].numer();
    if d0.degree_in("h40") == 1 {
        let cs = d0.coeffs_in("h40");
        let h40 = RatFunc::from_poly(-&cs[0]).div(&RatFunc::from_poly(cs[1].clone()))?;
        c.check_rad("h40", &RadExpr::from_ratfunc(h40.clone()))?;
        let d1 = d[1].substitute("h40", &h40)?;
        let d2 = d[2].substitute("h40", &h40)?;
        c.check_rad("Delta1_h40", &RadExpr::from_ratfunc(d1.clone()))?;
        for i in 1..=2 {
            let f = parse_rad(&c.g.expand(&format!("f{i}"), true)?.0, None)
                .map_err(|e| KitError::Numeric(e.to_string()))?;
            let at: BTreeMap<Var, RadExpr> = [(var("h22"), f)].into_iter().collect();
            c.check_rad(&format!("Delta1_f{i}"), &eval_ratfunc_rad(&d1, &at)?)?;
            c.check_rad(&format!("Delta2_f{i}"), &eval_ratfunc_rad(&d2, &at)?)?;
        }
    } else {
        c.fail("h40", "Delta0 is not linear in h40");
    }
    let lin1 = lin.eval_partial(&vals(&[("h31", qr(1, 10))]))?;
    let plan = CertifyPlan {
        order: order.iter().map(|d| Some(var(d))).collect(),
        chain: vec![var("h40"), var("h22")],
        ..Default::default()
    };
    check_cycles(c, &certify_cycles(&lin1, &plan)?)
}

fn thm9p(c: &mut Checker) -> Result<()> {
    let lin = symmetric_elementary(1, 2)?;
    c.check("b0", &lin.coefficient(0)?)?;
    let s2 = Stage::new(&lin, &["c00", "c20"])?;
    c.check_rad("c20", &s2.solved("c20")?)?;
    let s3 = Stage::new(&lin, &["c00", "c20", "c11"])?;
    c.check_rad("c11", &s3.solved("c11")?)
}

fn thm10(c: &mut Checker) -> Result<()> {
    let mut s = SymmetricSystem::generic().normalize_nilpotent();
    s.h31 = (&Poly::var("h11") * &Poly::var("h20")).scale(&q(-2));
    let nf = nilpotent_normal_form(&s, &symmetric_divergence())?;
    let pos = (&Poly::var("h20").pow(2) + &Poly::var("h40")).scale(&q(-1));
    let sys = SystemSpec::new(nf.hamiltonian, nf.divergence, q(1), CenterKind::Nilpotent)?.with_positive(vec![pos]);
    let exp = melnikov_expansion(&sys, 3, &ExpansionOptions::default())?;
    let lin = LinearCoeffSystem::from_expansion(&exp, &vars(&["c00", "c02", "c11", "c20"]))?;
    c.check("b0", &lin.coefficient(0)?)?;
    let s1 = Stage::new(&lin, &["c00"])?;
    for l in 1..=3 {
        c.check(&format!("b{l}"), &s1.b(l)?)?;
    }
    let s2 = Stage::new(&lin, &["c00", "c20"])?;
    c.check_rad("c20", &s2.solved("c20")?)?;
    c.check("bt2", &s2.b(2)?)?;
    c.check("bt3", &s2.b(3)?)?;
    let w = vals(&[("h11", q(1)), ("h20", q(0)), ("h40", q(-1))]);
    let plan = CertifyPlan { order: ["c00", "c20"].iter().map(|d| Some(var(d))).collect(), ..Default::default() };
    check_cycles(c, &certify_cycles(&lin.eval_partial(&w)?, &plan)?)
}

fn appendix(c: &mut Checker) -> Result<()> {
    let mut h = BiPoly::zero();
    h.add_term(0, 2, RadExpr::from_q(qr(1, 2)));
    for (i, j) in [(2, 1), (1, 2), (0, 3), (4, 0), (3, 1), (2, 2), (1, 3), (0, 4)] {
        h.add_term(i, j, RadExpr::var(&format!("h{i}{j}")));
    }
    let d = &Poly::var("h40").scale(&q(4)) - &Poly::var("h21").pow(2).scale(&q(2));
    let sys = SystemSpec::new(h, full_quadratic_divergence(), q(1), CenterKind::Nilpotent)?.with_positive(vec![d]);
    let opts = ExpansionOptions { weights: WeightRule::WithoutJacobian, ..Default::default() };
    let exp = melnikov_expansion(&sys, 1, &opts)?;
    let lin = LinearCoeffSystem::from_expansion(&exp, &deltas6())?;
    c.check("b0", &lin.coefficient(0)?)?;
    c.check("b1", &Stage::new(&lin, &["c00"])?.b(1)?)
}

fn bhf2(c: &mut Checker) -> Result<()> {
    let s = SymmetricSystem::generic().normalize_nilpotent();
    let h = nilpotent_normal_form(&s, &BiPoly::zero())?.hamiltonian;
    let phi = solve_phi(&h, &q(1), 8)?;
    let h0 = hstar_decompose(&h, &phi, 8)?.swap_remove(0);
    for j in 2..=6 {
        c.check_rad(&format!("e{j}"), phi.coeff(j))?;
    }
    for j in 3..=6 {
        c.check_rad(&format!("h{j}"), h0.coeff(j))?;
    }
    Ok(())
}

/// Run one case against its reference file.
pub fn reproduce(case: &str, seed: u64) -> Result<CaseReport> {
    let text = golden_text(case)
        .ok_or_else(|| KitError::Usage(format!("unknown case `{case}`; known: {}", CASES.join(", "))))?;
    reproduce_with(case, &Golden::parse(text)?, seed)
}

pub fn reproduce_with(case: &str, golden: &Golden, seed: u64) -> Result<CaseReport> {
    let t = Instant::now();
    let mut c = Checker::new(golden, seed);
    match case {
        "appendix-p2" => appendix(&mut c)?,
        "thm7" => thm7(&mut c)?,
        "thm8" => thm8(&mut c)?,
        "thm9" => thm9(&mut c)?,
        "thm9p" => thm9p(&mut c)?,
        "thm10" => thm10(&mut c)?,
        "bhf2" => bhf2(&mut c)?,
        _ => return Err(KitError::Usage(format!("unknown case `{case}`; known: {}", CASES.join(", ")))),
    }
    Ok(CaseReport { case: case.to_string(), lines: c.finish(), elapsed: t.elapsed() })
}
