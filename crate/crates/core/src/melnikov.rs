//! First-order Melnikov expansion `M(h) = Σ b_l h^{(p+1)/(2p) + l/p}` near a
//! center at the origin of a Hamiltonian in normal form.
//!
//! Pipeline: solve `H_y(x, φ) = 0`, expand `H` and the divergence around
//! `y = φ(x)`, invert `H̃(x,v) v² = w²` for both branches by Lagrange
//! inversion, take the odd part in `w`, straighten the level curves with
//! `u = ψ(x)`, and integrate term by term against Beta weights.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bipoly::BiPoly;
use crate::error::{bail, Error, Result};
use crate::gamma::GammaConst;
use crate::mixed::GammaRad;
use crate::poly::{q, Poly, Var, Q};
use crate::radical::RadExpr;
use crate::series::TruncSeries;

pub type XSeries = TruncSeries<RadExpr>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterKind {
    Elementary,
    Nilpotent,
    Auto,
}

#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub hamiltonian: BiPoly,
    pub divergence: BiPoly,
    pub omega: Q,
    pub kind: CenterKind,
    /// Perturbation parameters, in the order used for reporting.
    pub deltas: Vec<Var>,
    /// Polynomials in the parameters asserted to be positive.
    pub positive: Vec<Poly>,
}

impl SystemSpec {
    /// Checks the normal-form shape `ω/2 (x² + y²) + ...` or `ω/2 y² + ...`.
    pub fn new(hamiltonian: BiPoly, divergence: BiPoly, omega: Q, kind: CenterKind) -> Result<Self> {
        let s = SystemSpec { hamiltonian, divergence, omega, kind, deltas: Vec::new(), positive: Vec::new() };
        s.check_shape()?;
        Ok(s)
    }

    /// From `p`, `q` with divergence `p_x + q_y`.
    pub fn from_pq(hamiltonian: BiPoly, p: &BiPoly, qf: &BiPoly, omega: Q, kind: CenterKind) -> Result<Self> {
        SystemSpec::new(hamiltonian, p.dx().add(&qf.dy()), omega, kind)
    }

    pub fn with_deltas(mut self, deltas: Vec<Var>) -> Self {
        self.deltas = deltas;
        self
    }

    pub fn with_positive(mut self, ps: Vec<Poly>) -> Self {
        self.positive = ps;
        self
    }

    fn check_shape(&self) -> Result<()> {
        let h = &self.hamiltonian;
        for (i, j) in [(0, 0), (1, 0), (0, 1)] {
            if !h.coeff(i, j).is_zero() {
                bail!(NotNormalForm, "H has a term x^{i} y^{j} of degree < 2");
            }
        }
        let half = RadExpr::from_q(&self.omega / q(2));
        let (a, b, c) = (h.coeff(2, 0), h.coeff(1, 1), h.coeff(0, 2));
        if !b.is_zero() {
            bail!(NotNormalForm, "H has an xy term");
        }
        if c != half {
            bail!(NotNormalForm, "y^2 coefficient {c} differs from omega/2 = {half}");
        }
        if self.omega.is_zero() {
            bail!(NotNormalForm, "omega must be nonzero");
        }
        match self.kind {
            CenterKind::Elementary if a != half => {
                bail!(NotNormalForm, "x^2 coefficient {a} differs from omega/2 for an elementary center")
            }
            CenterKind::Nilpotent if !a.is_zero() => bail!(NotNormalForm, "x^2 term present for a nilpotent center"),
            CenterKind::Auto if !(a.is_zero() || a == half) => {
                bail!(NotNormalForm, "x^2 coefficient must be 0 or omega/2")
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OriginType {
    ElementaryCenter,
    NilpotentCenter {
        order: u32,
    },
    Cusp {
        order: u32,
    },
    Saddle {
        order: u32,
    },
    /// `H(x, φ(x))` vanishes to the searched order: a curve of singularities.
    NonIsolated,
}

#[derive(Clone, Debug)]
pub struct CenterClassification {
    pub kind: OriginType,
    /// Order of the first nonzero coefficient of `H(x, φ(x))`.
    pub k: Option<u32>,
    pub h_k: Option<RadExpr>,
    /// `k/2` for centers.
    pub p: Option<u32>,
    pub notes: Vec<String>,
}

/// Sign of `r`, if the value or the positivity assertions decide it.
pub fn decide_sign(r: &RadExpr, positive: &[Poly]) -> Option<i32> {
    if r.is_zero() {
        return Some(0);
    }
    let f = r.as_ratfunc()?;
    if let Some(c) = f.constant_value() {
        return Some(if c.is_positive() { 1 } else { -1 });
    }
    if !f.is_poly() {
        return None;
    }
    let n = f.numer();
    for p in positive {
        let d = n.div_exact(p)?;
        if let Some(c) = d.constant_value() {
            return Some(if c.is_positive() { 1 } else { -1 });
        }
    }
    None
}

fn series_zero(order: usize) -> XSeries {
    TruncSeries::new(Vec::new(), order, RadExpr::zero())
}

fn x_series_of(coeffs: Vec<RadExpr>, order: usize) -> XSeries {
    TruncSeries::new(coeffs, order, RadExpr::zero())
}

/// Coefficients `D_k(x)` of `D(x, v + φ(x)) = Σ_k D_k(x) v^k`.
pub fn expand_at_branch(b: &BiPoly, phi: &XSeries, order: usize) -> Vec<XSeries> {
    let dy = b.degree_y() as usize;
    let phi = phi.truncate(order);
    let mut pw = alloc::vec![TruncSeries::constant(RadExpr::one(), order)];
    for k in 1..=dy {
        let n = pw[k - 1].mul(&phi);
        pw.push(n);
    }
    let mut out = alloc::vec![series_zero(order); dy + 1];
    for (&(i, j), c) in b.terms() {
        let (i, j) = (i as usize, j as usize);
        if i >= order {
            continue;
        }
        let mut binom = BigInt::one();
        for k in 0..=j {
            // C(j, k) c x^i φ^{j-k}
            let t = pw[j - k].shift_up(i).truncate(order).scale_by(&c.scale(&Q::from_integer(binom.clone())));
            out[k] = out[k].add(&t);
            binom = binom * BigInt::from(j - k) / BigInt::from(k + 1);
        }
    }
    out
}

/// `φ(x)` with `H_y(x, φ) = 0`, by `φ <- φ - H_y(x, φ)/ω`.
pub fn solve_phi(h: &BiPoly, omega: &Q, order: usize) -> Result<XSeries> {
    if !h.coeff(1, 1).is_zero() || !h.coeff(0, 1).is_zero() {
        bail!(NotNormalForm, "H_y must vanish to second order at the origin");
    }
    let hy = h.dy();
    let inv = RadExpr::from_q(omega.recip());
    let mut phi = series_zero(order);
    for _ in 0..=order + 1 {
        let r = expand_at_branch(&hy, &phi, order).swap_remove(0);
        if r.is_zero() {
            return Ok(phi);
        }
        phi = phi.sub(&r.scale_by(&inv));
    }
    bail!(NotNormalForm, "iteration for the branch H_y = 0 did not converge")
}

/// `H*_0, H*_1, ...` with `H(x, v + φ) = H*_0 + Σ_{j≥1} H*_j v^{j+1}`.
/// Entry 1 of the returned vector is `H*_1` (the `v²` coefficient).
pub fn hstar_decompose(h: &BiPoly, phi: &XSeries, order: usize) -> Result<Vec<XSeries>> {
    let mut cs = expand_at_branch(h, phi, order);
    if cs.len() < 3 {
        bail!(NotNormalForm, "H must be at least quadratic in y");
    }
    if !cs[1].is_zero() {
        bail!(NotNormalForm, "H_y(x, φ) does not vanish: φ is not the branch");
    }
    cs.remove(1);
    Ok(cs)
}

/// `q_{j+1} = [v^j] D(x, v + φ) / (j + 1)`; entry `k` is `q_k`, entry 0 unused.
pub fn q_series(div: &BiPoly, phi: &XSeries, order: usize) -> Vec<XSeries> {
    let ds = expand_at_branch(div, phi, order);
    let mut out = alloc::vec![series_zero(order)];
    for (j, d) in ds.into_iter().enumerate() {
        out.push(d.scale(&Q::new(BigInt::one(), BigInt::from(j + 1))));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightRule {
    /// `(1/(2p)) B((2i+1)/(2p), j + 3/2)`: the integral after `v = u^p/√h`,
    /// including its Jacobian.
    WithJacobian,
    /// `(1/2) B(i/p + 1/2, j + 3/2)`: the same integral with the Jacobian
    /// factor dropped. Agrees with `WithJacobian` for `p = 1`.
    WithoutJacobian,
}

/// `β_ij = (1/2) B(i/p + 1/2, j + 3/2)`.
pub fn beta_coeff(i: u32, j: u32, p: u32) -> GammaConst {
    weight(i, j, p, WeightRule::WithoutJacobian)
}

pub fn weight(i: u32, j: u32, p: u32, rule: WeightRule) -> GammaConst {
    let b = Q::new(BigInt::from(2 * j + 3), BigInt::from(2));
    match rule {
        WeightRule::WithoutJacobian => {
            let a = Q::new(BigInt::from(i), BigInt::from(p)) + Q::new(BigInt::one(), BigInt::from(2));
            GammaConst::beta(&a, &b).unwrap().scale(&Q::new(BigInt::one(), BigInt::from(2)))
        }
        WeightRule::WithJacobian => {
            let a = Q::new(BigInt::from(2 * i + 1), BigInt::from(2 * p));
            GammaConst::beta(&a, &b).unwrap().scale(&Q::new(BigInt::one(), BigInt::from(2 * p)))
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionOptions {
    pub weights: WeightRule,
    /// Extra x-orders carried beyond the minimum.
    pub margin: usize,
    /// Compute the second inversion branch independently and check parities.
    pub verify: bool,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions { weights: WeightRule::WithJacobian, margin: 0, verify: true }
    }
}

#[derive(Clone, Debug)]
pub struct MelnikovExpansion {
    pub p: u32,
    pub order: u32,
    pub coefficients: Vec<GammaRad>,
    /// `r_ij`, indexed `[j][i]`.
    pub r: Vec<Vec<RadExpr>>,
    pub weights: WeightRule,
    pub assumptions: Vec<String>,
}

impl MelnikovExpansion {
    /// Exponent of `h` in the `l`-th term.
    pub fn exponent(&self, l: u32) -> Q {
        Q::new(BigInt::from(self.p + 1 + 2 * l), BigInt::from(2 * self.p))
    }
}

struct Orders {
    l: usize,
    p: usize,
    margin: usize,
}

impl Orders {
    fn jmax(&self) -> usize {
        self.l / self.p
    }
    fn nw(&self) -> usize {
        2 * self.jmax() + 2
    }
    /// Number of x-terms kept in the coefficient of `w^n`.
    fn cap(&self, n: usize) -> usize {
        (2 * self.l + self.p + 1 + self.margin).saturating_sub(self.p * n)
    }
    fn nx(&self) -> usize {
        self.cap(1) + 2 * self.p
    }
}

/// `Σ_{i+j=m} a_i b_j` for `m < vlen`, x-truncated to `xcap`.
fn bimul(a: &[XSeries], b: &[XSeries], vlen: usize, xcap: usize) -> Vec<XSeries> {
    let mut out = alloc::vec![series_zero(xcap); vlen];
    for (i, ai) in a.iter().enumerate().take(vlen) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(vlen - i) {
            if !bj.is_zero() {
                out[i + j] = out[i + j].add(&ai.mul_trunc(bj, xcap));
            }
        }
    }
    out
}

/// `[k][n] = [w^n] v^k` for the branch `v = ±w/√H*_1 + ...` of `H̃(x,v) v² = w²`.
/// Only `k ≤ kmax` is produced.
fn branch_powers(phi_l: &[XSeries], ord: &Orders, kmax: usize, sign: i64) -> Vec<Vec<XSeries>> {
    let nw = ord.nw();
    let vlen = nw - 1;
    let base: Vec<XSeries> = phi_l.iter().map(|s| if sign < 0 { s.neg() } else { s.clone() }).collect();
    let mut out = alloc::vec![alloc::vec![series_zero(0); nw]; kmax + 1];
    let mut pw: Vec<XSeries> = base.iter().map(|s| s.truncate(ord.cap(1))).collect();
    for n in 1..nw {
        let cap = ord.cap(n);
        if n > 1 {
            pw = bimul(&pw, &base, vlen, cap);
        }
        for (k, row) in out.iter_mut().enumerate().skip(1) {
            if k > n {
                break;
            }
            // Lagrange: [w^n] v^k = (k/n) [v^{n-k}] φ_L^n
            let c = pw[n - k].truncate(cap).scale(&Q::new(BigInt::from(k), BigInt::from(n)));
            row[n] = c;
        }
    }
    out
}

/// Lagrange kernel `φ_L(v) = H̃(x, v)^{-1/2}` with `H̃ = Σ_{j≥1} H*_j v^{j-1}`.
fn lagrange_kernel(hstar: &[XSeries], ord: &Orders) -> Result<Vec<XSeries>> {
    let vlen = ord.nw() - 1;
    let xo = ord.cap(1);
    let coeffs: Vec<XSeries> =
        (1..=vlen).map(|j| hstar.get(j).map_or_else(|| series_zero(xo), |s| s.truncate(xo))).collect();
    let ht = TruncSeries::new(coeffs, vlen, series_zero(xo));
    let k = ht.reciprocal_sqrt()?;
    Ok(k.coeffs().to_vec())
}

/// Coefficients `a_n(x)` (entry `n`) of `v₁(w) = Σ a_n w^n`.
pub fn a_series(hstar: &[XSeries], l: u32, p: u32) -> Result<Vec<XSeries>> {
    let ord = Orders { l: l as usize, p: p as usize, margin: 0 };
    let kernel = lagrange_kernel(hstar, &ord)?;
    Ok(branch_powers(&kernel, &ord, 1, 1).swap_remove(1))
}

/// `ψ(x) = x (H*_0 / x^{2p})^{1/(2p)}`, so that `H*_0 = ψ^{2p}`.
pub fn psi_series(h0: &XSeries, p: u32, order: usize) -> Result<XSeries> {
    let s = h0.shift_down(2 * p as usize)?.truncate(order);
    Ok(s.pow_rational(1, 2 * p as i64)?.shift_up(1))
}

pub fn psi_reversion(psi: &XSeries) -> Result<XSeries> {
    psi.reverse()
}

/// `r_ij = [u^{2i}] (q̃_j(u) + q̃_j(-u))` with `q̃_j = (q̄_j/ψ') ∘ ψ^{-1}`.
pub fn r_coeffs(qbar: &[XSeries], psi: &XSeries, l: u32, p: u32) -> Result<Vec<Vec<RadExpr>>> {
    let dpsi = psi.derivative();
    let inv = psi.reverse()?;
    let mut out = Vec::new();
    for (j, qb) in qbar.iter().enumerate() {
        let top = l as i64 - (p as i64) * j as i64;
        if top < 0 {
            break;
        }
        let n = 2 * top as usize + 1;
        if qb.order() < n || dpsi.order() < n || inv.order() < n {
            bail!(InsufficientOrder, "q̄_{j} needs {n} terms");
        }
        let f = qb.truncate(n).div(&dpsi.truncate(n))?;
        let g = inv.truncate(n);
        let plus = f.compose(&g)?;
        let minus = f.compose(&g.reflect())?;
        let s = plus.add(&minus);
        let mut row = Vec::new();
        for i in 0..=top as usize {
            if !s.coeff(2 * i + 1).is_zero() && 2 * i + 1 < n {
                bail!(Domain, "symmetrized series has an odd coefficient");
            }
            row.push(s.coeff(2 * i).clone());
        }
        out.push(row);
    }
    Ok(out)
}

fn classify_hstar0(h0: &XSeries, positive: &[Poly], y2: &RadExpr) -> Result<CenterClassification> {
    let mut notes = Vec::new();
    let Some(k) = h0.valuation() else {
        return Ok(CenterClassification { kind: OriginType::NonIsolated, k: None, h_k: None, p: None, notes });
    };
    if k < 2 {
        bail!(NotNormalForm, "H(x, φ(x)) starts below degree 2");
    }
    let hk = h0.coeff(k).clone();
    let kk = k as u32;
    if kk % 2 == 1 {
        return Ok(CenterClassification {
            kind: OriginType::Cusp { order: (kk - 1) / 2 },
            k: Some(kk),
            h_k: Some(hk),
            p: None,
            notes,
        });
    }
    let sign = match (decide_sign(&hk, positive), decide_sign(y2, positive)) {
        (Some(a), Some(b)) => a * b,
        _ => {
            notes.push(alloc::format!("assumed {} > 0", hk));
            1
        }
    };
    let kind = if sign > 0 {
        if kk == 2 {
            OriginType::ElementaryCenter
        } else {
            OriginType::NilpotentCenter { order: kk / 2 - 1 }
        }
    } else {
        OriginType::Saddle { order: kk / 2 - 1 }
    };
    Ok(CenterClassification { kind, k: Some(kk), h_k: Some(hk), p: Some(kk / 2), notes })
}

/// Classify the origin of `H` after substituting the given parameter values.
pub fn classify_origin(
    h: &BiPoly,
    values: &BTreeMap<Var, Q>,
    positive: &[Poly],
    max_order: usize,
) -> Result<CenterClassification> {
    let h = h.eval_partial(values)?;
    for (i, j) in [(0, 0), (1, 0), (0, 1)] {
        if !h.coeff(i, j).is_zero() {
            bail!(NotNormalForm, "the origin is not a singular point of H");
        }
    }
    let (a, b, c) = (h.coeff(2, 0), h.coeff(1, 1), h.coeff(0, 2));
    if !b.is_zero() {
        bail!(NotNormalForm, "H has an xy term");
    }
    if c.is_zero() {
        bail!(NotNormalForm, "H has no y^2 term");
    }
    let omega =
        c.constant_value().ok_or_else(|| Error::Undecidable(alloc::format!("y^2 coefficient {c} is not numeric")))?
            * q(2);
    if !a.is_zero() {
        let s = decide_sign(&a.mul(&c), positive)
            .ok_or_else(|| Error::Undecidable(alloc::format!("sign of det A = 4({a})({c})")))?;
        if s < 0 {
            return Ok(CenterClassification {
                kind: OriginType::Saddle { order: 0 },
                k: Some(2),
                h_k: Some(a),
                p: None,
                notes: Vec::new(),
            });
        }
        if a != c {
            bail!(NotNormalForm, "x^2 and y^2 coefficients differ");
        }
        return Ok(CenterClassification {
            kind: OriginType::ElementaryCenter,
            k: Some(2),
            h_k: Some(a),
            p: Some(1),
            notes: Vec::new(),
        });
    }
    let phi = solve_phi(&h, &omega, max_order + 1)?;
    let hs = hstar_decompose(&h, &phi, max_order + 1)?;
    classify_hstar0(&hs[0], positive, &c)
}

/// Run the full pipeline to order `l`.
pub fn melnikov_expansion(sys: &SystemSpec, l: u32, opts: &ExpansionOptions) -> Result<MelnikovExpansion> {
    let omega = sys.omega.clone();
    let h = &sys.hamiltonian;
    let mut assumptions = Vec::new();
    if omega.is_negative() {
        bail!(NotNormalForm, "omega must be positive");
    }
    let elementary = !h.coeff(2, 0).is_zero();
    let p: u32 = if elementary {
        1
    } else {
        // Find k on a generous number of terms.
        let scan = 2 * h.degree() as usize + 8;
        let phi = solve_phi(h, &omega, scan)?;
        let hs = hstar_decompose(h, &phi, scan)?;
        let cls = classify_hstar0(&hs[0], &sys.positive, &h.coeff(0, 2))?;
        match cls.kind {
            OriginType::ElementaryCenter | OriginType::NilpotentCenter { .. } => {}
            OriginType::Cusp { .. } | OriginType::Saddle { .. } => {
                bail!(NoPeriodAnnulus, "{:?}", cls.kind)
            }
            OriginType::NonIsolated => bail!(NonIsolated, "H(x, φ(x)) vanishes identically"),
        }
        assumptions.extend(cls.notes);
        cls.p.unwrap()
    };
    let ord = Orders { l: l as usize, p: p as usize, margin: opts.margin };
    let nx = ord.nx();
    let phi = solve_phi(h, &omega, nx)?;
    let hs = hstar_decompose(h, &phi, nx)?;
    let qs = q_series(&sys.divergence, &phi, ord.cap(1));
    let kmax = qs.len() - 1;

    let kernel = lagrange_kernel(&hs, &ord)?;
    let v1 = branch_powers(&kernel, &ord, kmax, 1);
    let v2 = if opts.verify {
        branch_powers(&kernel, &ord, kmax, -1)
    } else {
        v1.iter()
            .enumerate()
            .map(|(k, row)| {
                row.iter().enumerate().map(|(n, s)| if (n + k) % 2 == 1 { s.neg() } else { s.clone() }).collect()
            })
            .collect()
    };
    let nw = ord.nw();
    let mut qbar = Vec::new();
    for n in 1..nw {
        let cap = ord.cap(n);
        let mut acc = series_zero(cap);
        for k in 1..=kmax {
            if k > n {
                break;
            }
            let d = v1[k][n].sub(&v2[k][n]);
            acc = acc.add(&qs[k].truncate(cap).mul_trunc(&d, cap));
        }
        if n % 2 == 0 {
            if !acc.is_zero() {
                bail!(Domain, "even part of Q(v1) - Q(v2) does not vanish at w^{n}");
            }
        } else {
            qbar.push(acc);
        }
    }
    let psi = psi_series(&hs[0], p, ord.cap(1) + 1)?;
    let r = r_coeffs(&qbar, &psi, l, p)?;

    let hk = hs[0].coeff(2 * p as usize).clone();
    if decide_sign(&hk, &sys.positive).is_none() {
        let note = alloc::format!("h_{} = {} > 0", 2 * p, hk);
        if !assumptions.iter().any(|a: &String| a.contains(&alloc::format!("{hk}"))) {
            assumptions.push(note);
        }
    }
    let mut coefficients = alloc::vec![GammaRad::zero(); l as usize + 1];
    for (j, row) in r.iter().enumerate() {
        for (i, rij) in row.iter().enumerate() {
            let idx = i + p as usize * j;
            if idx > l as usize || rij.is_zero() {
                continue;
            }
            let w = weight(i as u32, j as u32, p, opts.weights);
            coefficients[idx] = coefficients[idx].add(&GammaRad::from_parts(&w, rij.clone())?);
        }
    }
    Ok(MelnikovExpansion { p, order: l, coefficients, r, weights: opts.weights, assumptions })
}

/// Helper for tests and callers: an x-series from rational coefficients.
pub fn x_series_q(cs: &[Q], order: usize) -> XSeries {
    x_series_of(cs.iter().map(|c| RadExpr::from_q(c.clone())).collect(), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qr;

    fn bp(s: &str) -> BiPoly {
        // tiny helper: sum of "c i j" triples separated by ';'
        let mut b = BiPoly::zero();
        for t in s.split(';') {
            let v: Vec<&str> = t.split_whitespace().collect();
            let c: Vec<i64> = v[0].split('/').map(|x| x.parse().unwrap()).collect();
            let c = if c.len() == 2 { qr(c[0], c[1]) } else { q(c[0]) };
            b.add_term(v[1].parse().unwrap(), v[2].parse().unwrap(), RadExpr::from_q(c));
        }
        b
    }

    #[test]
    fn harmonic_oscillator_b0() {
        let h = bp("1/2 2 0; 1/2 0 2");
        let sys = SystemSpec::new(h, bp("2 0 0"), q(1), CenterKind::Elementary).unwrap();
        let e = melnikov_expansion(&sys, 2, &ExpansionOptions::default()).unwrap();
        let four_pi = GammaRad::from_const(&GammaConst::pi_pow(q(1)).scale(&q(4)));
        assert_eq!(e.coefficients[0], four_pi);
        assert!(e.coefficients[1].is_zero() && e.coefficients[2].is_zero());
    }

    #[test]
    fn branch_solves_hy() {
        let h = bp("1/2 0 2; 1 2 1; 1 4 0; 3 1 3");
        let phi = solve_phi(&h, &q(1), 8).unwrap();
        let r = expand_at_branch(&h.dy(), &phi, 8);
        assert!(r[0].is_zero());
        assert_eq!(phi.coeff(2), &RadExpr::int(-1));
    }

    #[test]
    fn lagrange_branch_satisfies_level_equation() {
        let h = bp("1/2 0 2; 1 3 1; 1/8 0 4; -1 4 0");
        let phi = solve_phi(&h, &q(1), 12).unwrap();
        let hs = hstar_decompose(&h, &phi, 12).unwrap();
        let a = a_series(&hs, 2, 2).unwrap();
        // leading coefficient: 1/√(H*_1(0)) = √2
        assert_eq!(a[1].coeff(0), &RadExpr::int(2).root(2).unwrap());
    }
}
