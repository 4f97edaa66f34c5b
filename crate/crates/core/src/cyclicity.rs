//! Small-amplitude cyclicity from Melnikov coefficients that are linear in
//! the perturbation parameters: sequential elimination, the `L·Δ` split of
//! the remaining coefficients, and interval-certified witness points.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{bail, Error, Result};
use crate::gcd::gcd;
use crate::interval::{eval_rad, Interval, IntervalBox};
use crate::melnikov::MelnikovExpansion;
use crate::mixed::{GammaRad, TransKey};
use crate::poly::{Poly, Var, Q};
use crate::radical::RadExpr;
use crate::ratfunc::RatFunc;
use crate::univariate::{isolate_real_roots, RootInterval, UniPoly};

/// Homogeneous linear form `Σ c_d δ_d` with coefficients free of the δ's.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct LinearForm {
    pub coeffs: BTreeMap<Var, RadExpr>,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm::default()
    }

    pub fn single(v: &Var, c: RadExpr) -> Self {
        let mut f = LinearForm::zero();
        f.add_term(v, c);
        f
    }

    pub fn coeff(&self, v: &str) -> RadExpr {
        self.coeffs.get(v).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, v: &Var, c: RadExpr) {
        let s = self.coeff(v).add(&c);
        if s.is_zero() {
            self.coeffs.remove(v);
        } else {
            self.coeffs.insert(v.clone(), s);
        }
    }

    pub fn add(&self, o: &LinearForm) -> LinearForm {
        let mut f = self.clone();
        for (v, c) in &o.coeffs {
            f.add_term(v, c.clone());
        }
        f
    }

    pub fn scale(&self, c: &RadExpr) -> LinearForm {
        let mut f = LinearForm::zero();
        for (v, a) in &self.coeffs {
            f.add_term(v, a.mul(c));
        }
        f
    }

    /// Replace `v` by a linear form.
    pub fn substitute(&self, v: &str, e: &LinearForm) -> LinearForm {
        let c = self.coeff(v);
        if c.is_zero() {
            return self.clone();
        }
        let mut f = self.clone();
        f.coeffs.remove(v);
        f.add(&e.scale(&c))
    }

    pub fn map(&self, g: impl Fn(&RadExpr) -> Result<RadExpr>) -> Result<LinearForm> {
        let mut f = LinearForm::zero();
        for (v, a) in &self.coeffs {
            f.add_term(v, g(a)?);
        }
        Ok(f)
    }

    pub fn eval_partial(&self, vals: &BTreeMap<Var, Q>) -> Result<LinearForm> {
        self.map(|c| c.eval_partial(vals))
    }

    /// Value at a δ point, as a radical expression in the remaining parameters.
    pub fn at(&self, delta: &BTreeMap<Var, Q>) -> RadExpr {
        let mut acc = RadExpr::zero();
        for (v, c) in &self.coeffs {
            let x = delta.get(v).cloned().unwrap_or_else(Q::one);
            acc = acc.add(&c.scale(&x));
        }
        acc
    }

    pub fn to_rad(&self) -> RadExpr {
        let mut acc = RadExpr::zero();
        for (v, c) in &self.coeffs {
            acc = acc.add(&c.mul(&RadExpr::var(v)));
        }
        acc
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (n, (v, c)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*{v}")?;
        }
        Ok(())
    }
}

/// `b_l = key_l × form_l`.
#[derive(Clone, Debug)]
pub struct LinearCoeffSystem {
    pub deltas: Vec<Var>,
    pub keys: Vec<TransKey>,
    pub rows: Vec<LinearForm>,
}

fn zero_deltas(deltas: &[Var]) -> BTreeMap<Var, Q> {
    deltas.iter().map(|d| (d.clone(), Q::zero())).collect()
}

/// Split a radical expression linear in `deltas`.
pub fn linear_form(r: &RadExpr, deltas: &[Var]) -> Result<LinearForm> {
    let zero = zero_deltas(deltas);
    if !r.eval_partial(&zero)?.is_zero() {
        bail!(Domain, "coefficient has a part independent of the perturbation parameters");
    }
    let mut f = LinearForm::zero();
    for d in deltas {
        let mut vals = zero.clone();
        vals.insert(d.clone(), Q::one());
        let c = r.eval_partial(&vals)?;
        if !c.is_zero() {
            f.add_term(d, c);
        }
    }
    if f.to_rad() != *r {
        bail!(Domain, "coefficient is not linear in the perturbation parameters");
    }
    Ok(f)
}

impl LinearCoeffSystem {
    pub fn from_coefficients(bs: &[GammaRad], deltas: &[Var]) -> Result<Self> {
        let mut keys = Vec::new();
        let mut rows = Vec::new();
        for (l, b) in bs.iter().enumerate() {
            if b.is_zero() {
                keys.push(TransKey::default());
                rows.push(LinearForm::zero());
                continue;
            }
            let (k, r) = b
                .single_term()
                .ok_or_else(|| Error::Unsupported(alloc::format!("b_{l} mixes several transcendental constants")))?;
            keys.push(k.clone());
            rows.push(linear_form(r, deltas)?);
        }
        Ok(LinearCoeffSystem { deltas: deltas.to_vec(), keys, rows })
    }

    pub fn from_expansion(exp: &MelnikovExpansion, deltas: &[Var]) -> Result<Self> {
        LinearCoeffSystem::from_coefficients(&exp.coefficients, deltas)
    }

    pub fn eval_partial(&self, vals: &BTreeMap<Var, Q>) -> Result<Self> {
        let rows = self.rows.iter().map(|r| r.eval_partial(vals)).collect::<Result<Vec<_>>>()?;
        Ok(LinearCoeffSystem { deltas: self.deltas.clone(), keys: self.keys.clone(), rows })
    }

    pub fn coefficient(&self, l: usize) -> Result<GammaRad> {
        let g = GammaRad::from_parts(&crate::gamma::GammaConst::one(), self.rows[l].to_rad())?;
        Ok(key_times(&self.keys[l], &g))
    }
}

fn key_times(k: &TransKey, g: &GammaRad) -> GammaRad {
    let mut c = crate::gamma::GammaConst::pi_pow(k.pi.clone());
    c.gammas = k.gammas.clone();
    GammaRad::from_const(&c).mul(g)
}

#[derive(Clone, Debug)]
pub struct Elimination {
    /// `(δ, expression in the remaining δ's)`, in solving order.
    pub branch: Vec<(Var, LinearForm)>,
    /// Coefficient of the solved variable in each eliminated row.
    pub pivots: Vec<RadExpr>,
    /// `b̃_k, b̃_{k+1}, ...` after substitution.
    pub residuals: Vec<LinearForm>,
    pub assumptions: Vec<String>,
}

impl Elimination {
    pub fn k(&self) -> usize {
        self.branch.len()
    }

    /// `det ∂(b_0..b_{k-1})/∂(δ_1..δ_k)`: the pivots of the triangular solve.
    pub fn jacobian(&self) -> RadExpr {
        self.pivots.iter().fold(RadExpr::one(), |a, p| a.mul(p))
    }

    /// Expressions of the solved δ's in the free ones, fully back-substituted.
    pub fn solved(&self) -> Vec<(Var, LinearForm)> {
        let mut out: Vec<(Var, LinearForm)> = Vec::new();
        for (v, e) in self.branch.iter().rev() {
            let mut e = e.clone();
            for (w, f) in &out {
                e = e.substitute(w, f);
            }
            out.push((v.clone(), e));
        }
        out.reverse();
        out
    }
}

/// Solve `b_0 = … = b_{k-1} = 0` one variable at a time, `b_i` for
/// `order[i]`. `None` entries pick the first δ with a nonzero pivot.
pub fn sequential_eliminate(sys: &LinearCoeffSystem, order: &[Option<Var>]) -> Result<Elimination> {
    let k = order.len();
    if k > sys.rows.len() {
        bail!(EliminationOrder, "{k} eliminations requested but only {} coefficients", sys.rows.len());
    }
    let mut rows = sys.rows.clone();
    let mut branch = Vec::new();
    let mut pivots = Vec::new();
    let mut assumptions = Vec::new();
    for i in 0..k {
        let row = rows[i].clone();
        let v = match &order[i] {
            Some(v) => v.clone(),
            None => match sys.deltas.iter().find(|d| !row.coeff(d).is_zero() && !branch.iter().any(|(w, _)| &w == d)) {
                Some(d) => d.clone(),
                None => bail!(EliminationOrder, "b_{i} vanishes after the earlier eliminations"),
            },
        };
        let piv = row.coeff(&v);
        if piv.is_zero() {
            bail!(EliminationOrder, "elimination order invalid: {v} does not occur in b_{i} after substitution");
        }
        if piv.constant_value().is_none() {
            assumptions.push(alloc::format!("{piv} != 0"));
        }
        let inv = piv.inv()?.neg();
        let mut sol = row.clone();
        sol.coeffs.remove(&v);
        let sol = sol.scale(&inv);
        for r in rows.iter_mut().skip(i + 1) {
            *r = r.substitute(&v, &sol);
        }
        branch.push((v, sol));
        pivots.push(piv);
    }
    Ok(Elimination { branch, pivots, residuals: rows[k..].to_vec(), assumptions })
}

/// `b̃_{k+j} = L_j · Δ_j`.
#[derive(Clone, Debug)]
pub struct LDelta {
    pub l: LinearForm,
    /// Content-primitive polynomial in the σ parameters.
    pub delta: Poly,
}

fn numerators(f: &LinearForm) -> Vec<Poly> {
    let mut out = Vec::new();
    for c in f.coeffs.values() {
        for (_, r) in c.terms() {
            out.push(r.numer().clone());
        }
    }
    out
}

/// Split every residual into `L_j Δ_j`, with the factors shared by all
/// residuals kept in the `L_j`.
pub fn factor_l_delta(residuals: &[LinearForm]) -> Result<Vec<LDelta>> {
    let mut gs = Vec::new();
    for (j, f) in residuals.iter().enumerate() {
        let ns = numerators(f);
        if ns.is_empty() {
            bail!(Unfactored, "residual {j} vanishes identically");
        }
        gs.push(ns.iter().skip(1).fold(ns[0].clone(), |a, b| gcd(&a, b)));
    }
    let common = if gs.len() == 1 { Poly::one() } else { gs.iter().skip(1).fold(gs[0].clone(), |a, b| gcd(&a, b)) };
    let mut out = Vec::new();
    for (f, g) in residuals.iter().zip(&gs) {
        let d = g.div_exact(&common).ok_or_else(|| Error::Unfactored("common factor does not divide".into()))?;
        let (_, d) = d.primitive();
        let d = d.normalized().1;
        let inv = RadExpr::from_ratfunc(RatFunc::inv_poly(&d)?);
        let l = f.scale(&inv);
        out.push(LDelta { l, delta: d });
    }
    Ok(out)
}

/// How to reach a witness point for the Δ-chain.
#[derive(Clone, Debug, Default)]
pub struct CertifyPlan {
    /// Variables solved from `b_0 … b_{k-1}`.
    pub order: Vec<Option<Var>>,
    /// `a_1 … a_n`: `Δ_{i}` is solved for `chain[i]`, the last one by root isolation.
    pub chain: Vec<Var>,
    /// Values of the free δ's at the witness (default 1).
    pub delta_witness: BTreeMap<Var, Q>,
    /// Preferred root of the last chain equation.
    pub root_hint: Option<Q>,
    /// Assertion checks need this final interval width.
    pub max_refinements: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub what: String,
    pub expr: String,
    pub enclosure: Option<Interval>,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct CyclicityCertificate {
    pub k: usize,
    pub n: usize,
    pub branch: Vec<(Var, LinearForm)>,
    pub jacobian: RadExpr,
    pub factors: Vec<LDelta>,
    /// `(a_i, enclosure)` at the witness.
    pub witness: Vec<(Var, Interval)>,
    pub root: Option<RootInterval>,
    pub sigma_jacobian: Option<Poly>,
    pub checks: Vec<Check>,
    pub assumptions: Vec<String>,
    pub established: bool,
    pub cycles: usize,
    pub failure: Option<String>,
}

/// Witness search state: linear solutions `a_i = R_i(a_{i+1..})`, and the
/// univariate equation for the last parameter.
struct Chain {
    linear: Vec<(Var, RatFunc)>,
    last: Option<(Var, UniPoly)>,
}

fn subst_all(p: &Poly, subs: &[(Var, RatFunc)]) -> Result<RatFunc> {
    let mut r = RatFunc::from_poly(p.clone());
    for (v, e) in subs {
        r = r.substitute(v, e)?;
    }
    Ok(r)
}

fn build_chain(deltas: &[Poly], chain: &[Var]) -> Result<Chain> {
    let n = chain.len();
    let mut linear = Vec::new();
    let mut last = None;
    for i in 0..n {
        let d = subst_all(&deltas[i], &linear)?;
        let num = d.numer().clone();
        let v = &chain[i];
        if i + 1 < n {
            if num.degree_in(v) != 1 {
                bail!(Unsupported, "Δ_{i} must be linear in {v} for the triangular witness");
            }
            let cs = num.coeffs_in(v);
            let sol = RatFunc::from_poly(-&cs[0]).div(&RatFunc::from_poly(cs[1].clone()))?;
            linear.push((v.clone(), sol));
        } else {
            last = Some((v.clone(), UniPoly::from_poly(&num, v)?));
        }
    }
    Ok(Chain { linear, last })
}

fn chain_box(ch: &Chain, root: &RootInterval) -> Result<IntervalBox> {
    let mut bx = IntervalBox::new();
    if let Some((v, _)) = &ch.last {
        bx.insert(v.clone(), Interval::new(root.lo.clone(), root.hi.clone()));
    }
    for (v, e) in ch.linear.iter().rev() {
        let iv = crate::interval::eval_ratfunc(e, &bx)?;
        bx.insert(v.clone(), iv);
    }
    Ok(bx)
}

fn det_poly(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = &m[0][c] * &det_poly(&minor);
        acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

const BITS: u32 = 64;

/// Certificate for `k + n` cycles: plain elimination when `chain` is empty, otherwise a Δ-chain of length `n`.
pub fn certify_cycles(sys: &LinearCoeffSystem, plan: &CertifyPlan) -> Result<CyclicityCertificate> {
    let elim = sequential_eliminate(sys, &plan.order)?;
    let n = plan.chain.len();
    let k = elim.k();
    if elim.residuals.len() < n + 1 {
        bail!(InsufficientOrder, "need b_{} but the expansion stops at b_{}", k + n, sys.rows.len() - 1);
    }
    let factors = factor_l_delta(&elim.residuals[..=n])?;
    let deltas: Vec<Poly> = factors.iter().map(|f| f.delta.clone()).collect();
    let mut cert = CyclicityCertificate {
        k,
        n,
        branch: elim.solved(),
        jacobian: elim.jacobian(),
        factors: factors.clone(),
        witness: Vec::new(),
        root: None,
        sigma_jacobian: None,
        checks: Vec::new(),
        assumptions: elim.assumptions.clone(),
        established: false,
        cycles: 0,
        failure: None,
    };

    // Quantities that must not vanish at the witness.
    let mut nonzero: Vec<(String, RadExpr)> = Vec::new();
    for (i, p) in elim.pivots.iter().enumerate() {
        nonzero.push((alloc::format!("pivot of b_{i}"), p.clone()));
    }
    for (j, f) in factors.iter().enumerate() {
        nonzero.push((alloc::format!("L_{j}"), f.l.at(&plan.delta_witness)));
    }
    nonzero.push((alloc::format!("Delta_{n}"), RadExpr::from_poly(deltas[n].clone())));
    if n > 0 {
        let m: Vec<Vec<Poly>> =
            deltas[..n].iter().map(|d| plan.chain.iter().map(|a| d.derivative(a)).collect()).collect();
        let jac = det_poly(&m);
        cert.sigma_jacobian = Some(jac.clone());
        nonzero.push(("sigma Jacobian".into(), RadExpr::from_poly(jac)));
    }

    let candidates: Vec<Option<(Chain, RootInterval)>> = if n == 0 {
        alloc::vec![None]
    } else {
        let ch = build_chain(&deltas, &plan.chain)?;
        let (_, u) = ch.last.as_ref().unwrap();
        if u.degree().unwrap_or(0) == 0 {
            cert.failure = Some(alloc::format!("Delta_{} has no root in {}", n - 1, plan.chain[n - 1]));
            return Ok(cert);
        }
        let mut roots = isolate_real_roots(u)?;
        if let Some(h) = &plan.root_hint {
            roots.sort_by_key(|r| {
                let m = r.midpoint() - h;
                if m < Q::zero() {
                    -m
                } else {
                    m
                }
            });
        }
        let mut out = Vec::new();
        for r in roots {
            let ch = build_chain(&deltas, &plan.chain)?;
            out.push(Some((ch, r)));
        }
        if out.is_empty() {
            cert.failure = Some(alloc::format!("Delta_{} has no real root", n - 1));
            return Ok(cert);
        }
        out
    };

    let cap = if plan.max_refinements == 0 { 64 } else { plan.max_refinements };
    let mut last_fail = String::new();
    for cand in candidates {
        let (mut root, ch) = match cand {
            Some((ch, r)) => (Some(r), Some(ch)),
            None => (None, None),
        };
        let mut decided = None;
        for _ in 0..=cap {
            let bx = match (&ch, &root) {
                (Some(c), Some(r)) => chain_box(c, r).unwrap_or_default(),
                _ => IntervalBox::new(),
            };
            let mut checks = Vec::new();
            let mut all = true;
            let mut zero_found = None;
            for (what, e) in &nonzero {
                let enc = if bx.is_empty() && n > 0 { None } else { eval_rad(e, &bx, BITS).ok() };
                let ok = enc.as_ref().is_some_and(|i| !i.contains_zero());
                if !ok {
                    all = false;
                    if enc.as_ref().is_some_and(|i| i.lo.is_zero() && i.hi.is_zero()) {
                        zero_found = Some(what.clone());
                    }
                }
                checks.push(Check { what: what.clone(), expr: alloc::format!("{e}"), enclosure: enc, ok });
            }
            if all {
                decided = Some((checks, bx));
                break;
            }
            if let Some(w) = zero_found {
                last_fail = alloc::format!("{w} vanishes at the witness");
                break;
            }
            match root.as_mut() {
                Some(r) if !r.is_exact() => {
                    r.bisect();
                    r.bisect();
                }
                _ => {
                    last_fail = alloc::format!(
                        "undecided: {}",
                        checks.iter().filter(|c| !c.ok).map(|c| c.what.as_str()).collect::<Vec<_>>().join(", ")
                    );
                    break;
                }
            }
            last_fail = alloc::format!(
                "undecided after {cap} refinements: {}",
                checks.iter().filter(|c| !c.ok).map(|c| c.what.as_str()).collect::<Vec<_>>().join(", ")
            );
        }
        if let Some((checks, bx)) = decided {
            cert.checks = checks;
            cert.witness = bx.into_iter().collect();
            if let Some((v, _)) = ch.as_ref().and_then(|c| c.last.as_ref()) {
                cert.assumptions.push(alloc::format!("{v} is the root of Delta_{} in the witness interval", n - 1));
            }
            cert.root = root;
            cert.established = true;
            cert.cycles = k + n;
            cert.failure = None;
            return Ok(cert);
        }
    }
    cert.failure = Some(last_fail);
    Ok(cert)
}

/// Evaluate a polynomial with radical values for some of its variables.
pub fn eval_poly_rad(p: &Poly, vals: &BTreeMap<Var, RadExpr>) -> Result<RadExpr> {
    let mut acc = RadExpr::zero();
    let mut cache: BTreeMap<(Var, u32), RadExpr> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut t = RadExpr::from_q(c.clone());
        for (v, e) in m.pairs() {
            let f = match vals.get(v) {
                Some(x) => match cache.get(&(v.clone(), e)) {
                    Some(y) => y.clone(),
                    None => {
                        let y = x.pow(e as i32)?;
                        cache.insert((v.clone(), e), y.clone());
                        y
                    }
                },
                None => RadExpr::from_poly(Poly::var_pow(v, e)),
            };
            t = t.mul(&f);
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::var;

    fn rv(s: &str) -> RadExpr {
        RadExpr::var(s)
    }

    fn sys(rows: Vec<RadExpr>, ds: &[&str]) -> LinearCoeffSystem {
        let deltas: Vec<Var> = ds.iter().map(|d| var(d)).collect();
        let bs: Vec<GammaRad> = rows.into_iter().map(GammaRad::from_rad).collect();
        LinearCoeffSystem::from_coefficients(&bs, &deltas).unwrap()
    }

    #[test]
    fn trivial_elimination() {
        let s = sys(alloc::vec![rv("c00")], &["c00"]);
        let e = sequential_eliminate(&s, &[Some(var("c00"))]).unwrap();
        assert!(e.branch[0].1.is_zero());
        assert!(e.residuals.is_empty());
    }

    #[test]
    fn zero_pivot_is_an_error() {
        let s = sys(alloc::vec![rv("a"), rv("b")], &["a", "b"]);
        assert!(matches!(sequential_eliminate(&s, &[Some(var("b"))]), Err(Error::EliminationOrder(_))));
    }

    #[test]
    fn l_delta_split() {
        // residual = c01 (s^2 + 1)
        let s2 = RadExpr::from_poly(&Poly::var("s").pow(2) + &Poly::one());
        let f = linear_form(&rv("c01").mul(&s2), &[var("c01")]).unwrap();
        let ld = factor_l_delta(&[f]).unwrap();
        assert_eq!(ld[0].delta, &Poly::var("s").pow(2) + &Poly::one());
        assert_eq!(ld[0].l.coeff("c01"), RadExpr::one());
    }

    #[test]
    fn delta_chain_toy() {
        // b0 = d1, b1 = a d2, b2 = (a^2 + 1) d2: one elimination plus a Δ-chain of length 1.
        let a = RadExpr::var("a");
        let rows = alloc::vec![rv("d1"), a.mul(&rv("d2")), a.mul(&a).add(&RadExpr::one()).mul(&rv("d2"))];
        let s = sys(rows, &["d1", "d2"]);
        let plan =
            CertifyPlan { order: alloc::vec![Some(var("d1"))], chain: alloc::vec![var("a")], ..Default::default() };
        let c = certify_cycles(&s, &plan).unwrap();
        assert!(c.established, "{:?}", c.failure);
        assert_eq!(c.cycles, 2);
    }
}
