//! The symmetric quartic family `H = Σ_{i+j=2,4} h_ij x^i y^j` with
//! `h04 = -h02/2`, `h13 = -h11` (singular points at `(0, ±1)`), its normal
//! forms at `(0, 1)`, and transport of perturbations and Melnikov
//! coefficients under affine changes with a time rescale.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::bipoly::BiPoly;
use crate::error::{bail, Error, Result};
use crate::melnikov::{decide_sign, MelnikovExpansion};
use crate::poly::{q, qr, Poly, Var, Q};
use crate::radical::RadExpr;
use crate::ratfunc::RatFunc;

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricSystem {
    pub h20: Poly,
    pub h11: Poly,
    pub h02: Poly,
    pub h40: Poly,
    pub h31: Poly,
    pub h22: Poly,
}

impl SymmetricSystem {
    /// All six coefficients as free parameters `h20, h11, ...`.
    pub fn generic() -> Self {
        SymmetricSystem {
            h20: Poly::var("h20"),
            h11: Poly::var("h11"),
            h02: Poly::var("h02"),
            h40: Poly::var("h40"),
            h31: Poly::var("h31"),
            h22: Poly::var("h22"),
        }
    }

    pub fn h04(&self) -> Poly {
        self.h02.scale(&qr(-1, 2))
    }

    pub fn h13(&self) -> Poly {
        -&self.h11
    }

    pub fn hamiltonian(&self) -> BiPoly {
        let mut h = BiPoly::zero();
        let cs = [
            (2, 0, &self.h20),
            (1, 1, &self.h11),
            (0, 2, &self.h02),
            (4, 0, &self.h40),
            (3, 1, &self.h31),
            (2, 2, &self.h22),
        ];
        for (i, j, c) in cs {
            h.add_term(i, j, RadExpr::from_poly(c.clone()));
        }
        h.add_term(1, 3, RadExpr::from_poly(self.h13()));
        h.add_term(0, 4, RadExpr::from_poly(self.h04()));
        h
    }

    /// `H(x, y + 1) - H(0, 1)`.
    pub fn translated(&self) -> BiPoly {
        let h = self.hamiltonian();
        let ys = BiPoly::y().add(&BiPoly::constant(RadExpr::one()));
        let t = h.compose(&BiPoly::x(), &ys);
        t.sub(&BiPoly::constant(t.coeff(0, 0)))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        SymmetricSystem {
            h20: f(&self.h20),
            h11: f(&self.h11),
            h02: f(&self.h02),
            h40: f(&self.h40),
            h31: f(&self.h31),
            h22: f(&self.h22),
        }
    }

    pub fn eval_partial(&self, vals: &BTreeMap<Var, Q>) -> Self {
        self.map(|p| p.eval_partial(vals))
    }

    /// `h20 + h22 = 1/2`, `h02 = -h11² - 1/4` (so `det A = 1`, `ω = 1`).
    pub fn normalize_elementary(&self) -> Self {
        let mut s = self.clone();
        s.h20 = &Poly::constant(qr(1, 2)) - &self.h22;
        s.h02 = &(-self.h11.pow(2)) - &Poly::constant(qr(1, 4));
        s
    }

    /// `h02 = 1/2`, `h22 = -h11² - h20` (so `det A = 0`).
    pub fn normalize_nilpotent(&self) -> Self {
        let mut s = self.clone();
        s.h02 = Poly::constant(qr(1, 2));
        s.h22 = &(-self.h11.pow(2)) - &self.h20;
        s
    }
}

/// `det A = -4h11² - 8h02(h20 + h22)` at the translated singular point.
pub fn symmetric_det_a(sys: &SymmetricSystem) -> RadExpr {
    let d = &(sys.h11.pow(2).scale(&q(-4))) - &(&sys.h02 * &(&sys.h20 + &sys.h22)).scale(&q(8));
    RadExpr::from_poly(d)
}

/// `u = a(x - x0) + b(y - y0)`, `v = c(x - x0) + d(y - y0)`, `τ = k t`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineChange {
    pub a: RadExpr,
    pub b: RadExpr,
    pub c: RadExpr,
    pub d: RadExpr,
    pub x0: RadExpr,
    pub y0: RadExpr,
    pub k: RadExpr,
}

impl AffineChange {
    pub fn identity() -> Self {
        AffineChange {
            a: RadExpr::one(),
            b: RadExpr::zero(),
            c: RadExpr::zero(),
            d: RadExpr::one(),
            x0: RadExpr::zero(),
            y0: RadExpr::zero(),
            k: RadExpr::one(),
        }
    }

    pub fn new(a: RadExpr, b: RadExpr, c: RadExpr, d: RadExpr, x0: RadExpr, y0: RadExpr, k: RadExpr) -> Result<Self> {
        let ch = AffineChange { a, b, c, d, x0, y0, k };
        if ch.det().is_zero() {
            bail!(Domain, "affine change is singular (D = 0)");
        }
        if ch.k.is_zero() {
            bail!(Domain, "time rescale k must be nonzero");
        }
        Ok(ch)
    }

    /// `D = ad - bc`.
    pub fn det(&self) -> RadExpr {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// `u = -(y - 1)`, `v = x - 2 h11 (y - 1)`.
    pub fn elementary_preset(h11: &Poly) -> Self {
        let h = RadExpr::from_poly(h11.clone());
        AffineChange {
            a: RadExpr::zero(),
            b: RadExpr::int(-1),
            c: RadExpr::one(),
            d: h.scale(&q(-2)),
            x0: RadExpr::zero(),
            y0: RadExpr::one(),
            k: RadExpr::one(),
        }
    }

    /// `u = -x/2`, `v = h11 x + (y - 1)`.
    pub fn nilpotent_preset(h11: &Poly) -> Self {
        AffineChange {
            a: RadExpr::from_q(qr(-1, 2)),
            b: RadExpr::zero(),
            c: RadExpr::from_poly(h11.clone()),
            d: RadExpr::one(),
            x0: RadExpr::zero(),
            y0: RadExpr::one(),
            k: RadExpr::one(),
        }
    }

    /// Presets by registry name; `h11` fills the family parameter.
    pub fn preset(name: &str, h11: &Poly) -> Result<Self> {
        match name {
            "elementary-(0,1)" => Ok(AffineChange::elementary_preset(h11)),
            "nilpotent-(0,1)" => Ok(AffineChange::nilpotent_preset(h11)),
            _ => bail!(Unsupported, "unknown preset change {name}"),
        }
    }

    pub const PRESETS: [&'static str; 2] = ["elementary-(0,1)", "nilpotent-(0,1)"];

    /// `(x(u,v), y(u,v))`.
    pub fn inverse_map(&self) -> Result<(BiPoly, BiPoly)> {
        let dd = self.det();
        let xs = BiPoly::constant(self.x0.clone())
            .add(&BiPoly::x().mul_rad(&self.d.div(&dd)?))
            .add(&BiPoly::y().mul_rad(&self.b.neg().div(&dd)?));
        let ys = BiPoly::constant(self.y0.clone())
            .add(&BiPoly::x().mul_rad(&self.c.neg().div(&dd)?))
            .add(&BiPoly::y().mul_rad(&self.a.div(&dd)?));
        Ok((xs, ys))
    }

    /// The change back from `(u, v, τ)` to `(x, y, t)`.
    pub fn inverse(&self) -> Result<Self> {
        let dd = self.det();
        let u0 = self.a.mul(&self.x0).add(&self.b.mul(&self.y0)).neg();
        let v0 = self.c.mul(&self.x0).add(&self.d.mul(&self.y0)).neg();
        AffineChange::new(
            self.d.div(&dd)?,
            self.b.neg().div(&dd)?,
            self.c.neg().div(&dd)?,
            self.a.div(&dd)?,
            u0,
            v0,
            self.k.inv()?,
        )
    }
}

/// `H̃(u, v) = (D/k)(H(x, y) - h0)`.
pub fn transport_hamiltonian(h: &BiPoly, ch: &AffineChange, h0: &RadExpr) -> Result<BiPoly> {
    let (xs, ys) = ch.inverse_map()?;
    let scale = ch.det().div(&ch.k)?;
    Ok(h.compose(&xs, &ys).sub(&BiPoly::constant(h0.clone())).mul_rad(&scale))
}

/// `p̃_u + q̃_v = (1/k)(p_x + q_y)(x(u,v), y(u,v))`.
pub fn transport_divergence(div: &BiPoly, ch: &AffineChange) -> Result<BiPoly> {
    let (xs, ys) = ch.inverse_map()?;
    Ok(div.compose(&xs, &ys).mul_rad(&ch.k.inv()?))
}

/// `b̃_j = sgn(k) (k/D)^{(1+2j-p)/(2p)} b_j`: coefficients of the
/// transformed system from those of the original one.
pub fn transport_melnikov(exp: &MelnikovExpansion, ch: &AffineChange) -> Result<MelnikovExpansion> {
    let sk = decide_sign(&ch.k, &[]).ok_or_else(|| Error::Undecidable(alloc::format!("sign of k = {}", ch.k)))?;
    let ratio = ch.k.div(&ch.det())?;
    let p = exp.p as i64;
    let mut out = exp.clone();
    for (j, b) in exp.coefficients.iter().enumerate() {
        let e = Q::new(BigInt::from(1 + 2 * j as i64 - p), BigInt::from(2 * p));
        let f = if e.is_integer() {
            ratio.pow(e.to_integer().to_i32().unwrap())?
        } else {
            if decide_sign(&ratio, &[]) != Some(1) {
                bail!(Undecidable, "k/D = {ratio} must be positive for a fractional power");
            }
            ratio.pow_q(&e)?
        };
        let f = if sk < 0 { f.neg() } else { f };
        out.coefficients[j] = b.mul_rad(&f);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    pub hamiltonian: BiPoly,
    pub divergence: BiPoly,
    pub change: AffineChange,
    /// `A = 2h20 - h11²`, `B = 2h11⁴ - 8h11²h20 - 8h40` for the nilpotent form.
    pub a: Option<RadExpr>,
    pub b: Option<RadExpr>,
}

fn h_at_01(sys: &SymmetricSystem) -> RadExpr {
    RadExpr::from_poly(&sys.h02 + &sys.h04())
}

/// Normal form `H1 = (u² + v²)/2 + ...` at `(0, 1)`; the elementary
/// normalization must already be applied.
pub fn elementary_normal_form(sys: &SymmetricSystem, div: &BiPoly) -> Result<NormalForm> {
    let det = symmetric_det_a(sys);
    match decide_sign(&det, &[]) {
        Some(1) => {}
        Some(_) => bail!(Domain, "det(A) = {det} is not positive: no elementary center"),
        None => bail!(Undecidable, "sign of det(A) = {det}"),
    }
    if &sys.h20 + &sys.h22 != Poly::constant(qr(1, 2)) || sys.h02 != &(-sys.h11.pow(2)) - &Poly::constant(qr(1, 4)) {
        bail!(NotNormalForm, "apply the elementary normalization h20 + h22 = 1/2, h02 = -h11^2 - 1/4 first");
    }
    let ch = AffineChange::elementary_preset(&sys.h11);
    let h = transport_hamiltonian(&sys.hamiltonian(), &ch, &h_at_01(sys))?;
    let d = transport_divergence(div, &ch)?;
    Ok(NormalForm { hamiltonian: h, divergence: d, change: ch, a: None, b: None })
}

/// Normal form `H̄2 = y²/2 + ...` at `(0, 1)`; the nilpotent normalization
/// must already be applied.
pub fn nilpotent_normal_form(sys: &SymmetricSystem, div: &BiPoly) -> Result<NormalForm> {
    if sys.h02.is_zero() {
        bail!(NonIsolated, "h02 = 0: the line x = 0 consists of singular points");
    }
    if !symmetric_det_a(sys).is_zero() {
        bail!(NotNormalForm, "det(A) must vanish for a nilpotent singular point");
    }
    if sys.h02 != Poly::constant(qr(1, 2)) {
        bail!(NotNormalForm, "apply the nilpotent normalization h02 = 1/2 first");
    }
    let ch = AffineChange::nilpotent_preset(&sys.h11);
    let h = transport_hamiltonian(&sys.hamiltonian(), &ch, &h_at_01(sys))?;
    let d = transport_divergence(div, &ch)?;
    let a = &sys.h20.scale(&q(2)) - &sys.h11.pow(2);
    let b = &(&sys.h11.pow(4).scale(&q(2)) - &(&sys.h11.pow(2) * &sys.h20).scale(&q(8))) - &sys.h40.scale(&q(8));
    Ok(NormalForm {
        hamiltonian: h,
        divergence: d,
        change: ch,
        a: Some(RadExpr::from_poly(a)),
        b: Some(RadExpr::from_poly(b)),
    })
}

/// `H2 = y²/2 + 2A x²y + y³/2 + B x⁴ + A x²y² + y⁴/8` in the parameters `A`, `B`.
pub fn nilpotent_center_form(a: &str, b: &str) -> BiPoly {
    let (ar, br) = (RadExpr::var(a), RadExpr::var(b));
    let mut h = BiPoly::zero();
    h.add_term(0, 2, RadExpr::from_q(qr(1, 2)));
    h.add_term(2, 1, ar.scale(&q(2)));
    h.add_term(0, 3, RadExpr::from_q(qr(1, 2)));
    h.add_term(4, 0, br);
    h.add_term(2, 2, ar);
    h.add_term(0, 4, RadExpr::from_q(qr(1, 8)));
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetricNilpotent {
    Cusp1,
    NilpotentSaddle1,
    NilpotentCenter1,
    NonIsolated,
}

impl SymmetricNilpotent {
    pub fn name(&self) -> &'static str {
        match self {
            SymmetricNilpotent::Cusp1 => "cusp-1",
            SymmetricNilpotent::NilpotentSaddle1 => "nilpotent-saddle-1",
            SymmetricNilpotent::NilpotentCenter1 => "nilpotent-center-1",
            SymmetricNilpotent::NonIsolated => "non-isolated",
        }
    }
}

/// Conditions (A)–(D) on a nilpotent-normalized system.
pub fn classify_symmetric_nilpotent(sys: &SymmetricSystem) -> Result<SymmetricNilpotent> {
    if sys.h02 != Poly::constant(qr(1, 2)) || !symmetric_det_a(sys).is_zero() {
        bail!(NotNormalForm, "apply the nilpotent normalization first");
    }
    let e1 = &sys.h31 + &(&sys.h11 * &sys.h20).scale(&q(2));
    let e2 = &sys.h20.pow(2) + &sys.h40;
    let undecided = |what: &str, p: &Poly| -> Error {
        Error::Undecidable(alloc::format!("{what} = {p}; candidates: cusp-1, nilpotent-saddle-1, nilpotent-center-1"))
    };
    match e1.constant_value() {
        Some(c) if !c.is_zero() => return Ok(SymmetricNilpotent::Cusp1),
        Some(_) => {}
        None => return Err(undecided("h31 + 2 h11 h20", &e1)),
    }
    match e2.constant_value() {
        Some(c) if c.is_zero() => Ok(SymmetricNilpotent::NonIsolated),
        Some(c) if c > Q::zero() => Ok(SymmetricNilpotent::NilpotentSaddle1),
        Some(_) => Ok(SymmetricNilpotent::NilpotentCenter1),
        None => Err(undecided("h20^2 + h40", &e2)),
    }
}

/// Divergence `Σ_{i+j≤2} c_ij x^i y^j` with coefficient names `c00`, `c10`, ...
pub fn quadratic_divergence(names: &[(&str, u32, u32)]) -> BiPoly {
    let mut b = BiPoly::zero();
    for (n, i, j) in names {
        b.add_term(*i, *j, RadExpr::var(n));
    }
    b
}

pub fn full_quadratic_divergence() -> BiPoly {
    quadratic_divergence(&[("c00", 0, 0), ("c10", 1, 0), ("c01", 0, 1), ("c20", 2, 0), ("c11", 1, 1), ("c02", 0, 2)])
}

/// Linear map of the six divergence coefficients under a change, as a
/// matrix over the parameter field (rows: output `c̃_ij`).
pub fn divergence_matrix(ch: &AffineChange) -> Result<Vec<Vec<RadExpr>>> {
    let names = ["c00", "c10", "c01", "c20", "c11", "c02"];
    let idx = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
    let t = transport_divergence(&full_quadratic_divergence(), ch)?;
    let mut m = Vec::new();
    for &(i, j) in &idx {
        let c = t.coeff(i, j);
        let mut row = Vec::new();
        for n in names {
            // c is linear in the c's: differentiate by substitution.
            let one = c.substitute(n, &RatFunc::one())?;
            let zero = c.substitute(n, &RatFunc::zero())?;
            row.push(one.sub(&zero));
        }
        m.push(row);
    }
    Ok(m)
}

/// Determinant over the radical field by cofactor expansion (small sizes).
pub fn det_rad(m: &[Vec<RadExpr>]) -> RadExpr {
    let n = m.len();
    if n == 0 {
        return RadExpr::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = RadExpr::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<RadExpr>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let t = m[0][c].mul(&det_rad(&minor));
        acc = if c % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

/// Name table for printing `h̄_ij` / `h̃_ij` style coefficient lists.
pub fn coefficient_table(h: &BiPoly, degrees: &[u32]) -> Vec<(String, RadExpr)> {
    let mut out = Vec::new();
    for &d in degrees {
        for i in (0..=d).rev() {
            let j = d - i;
            out.push((alloc::format!("{i}{j}"), h.coeff(i, j)));
        }
    }
    out
}

pub fn is_one_rad(r: &RadExpr) -> bool {
    r.constant_value().is_some_and(|c| c.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::var(s)
    }

    #[test]
    fn det_a_examples() {
        let mut s = SymmetricSystem::generic();
        s.h11 = Poly::zero();
        s.h02 = Poly::constant(qr(-1, 4));
        s.h20 = &Poly::constant(qr(1, 2)) - &p("h22");
        assert!(symmetric_det_a(&s).is_one());
        s.h02 = Poly::zero();
        assert!(symmetric_det_a(&s).is_zero());
    }

    #[test]
    fn elementary_table_entries() {
        let s = SymmetricSystem::generic().normalize_elementary();
        let nf = elementary_normal_form(&s, &BiPoly::zero()).unwrap();
        let h = &nf.hamiltonian;
        assert_eq!(h.coeff(0, 3), RadExpr::var("h31"));
        assert_eq!(h.coeff(2, 0), RadExpr::from_q(qr(1, 2)));
        assert_eq!(h.coeff(0, 2), RadExpr::from_q(qr(1, 2)));
        assert!(h.coeff(1, 1).is_zero());
    }

    fn c(v: i64) -> Poly {
        Poly::int(v)
    }

    fn rp(x: Poly) -> RadExpr {
        RadExpr::from_poly(x)
    }

    #[test]
    fn elementary_full_table() {
        let s = SymmetricSystem::generic().normalize_elementary();
        let h = elementary_normal_form(&s, &BiPoly::zero()).unwrap().hamiltonian;
        let (a, b, t, r) = (p("h11"), p("h22"), p("h31"), p("h40"));
        let a2 = a.pow(2);
        let want = [
            ((1, 2), &(-&b.scale(&q(2))) - &(&a * &t).scale(&q(6))),
            ((2, 1), &(&a.scale(&q(-3)) + &(&a * &b).scale(&q(8))) + &(&a2 * &t).scale(&q(12))),
            (
                (3, 0),
                &Poly::constant(qr(-1, 2))
                    - &(&(&(&b.scale(&q(2)) + &(&a * &t).scale(&q(2))) - &c(1)) * &a2).scale(&q(4)),
            ),
            ((0, 4), r.clone()),
            ((1, 3), &(-&t) - &(&a * &r).scale(&q(8))),
            ((2, 2), &(&b + &(&a * &t).scale(&q(6))) + &(&a2 * &r).scale(&q(24))),
            ((3, 1), &(&(&a - &(&a * &b).scale(&q(4))) - &(&a2 * &t).scale(&q(12))) - &(&a.pow(3) * &r).scale(&q(32))),
        ];
        for ((i, j), w) in want {
            assert_eq!(h.coeff(i, j), rp(w), "h_{i}{j}");
        }
        // u^4: the closed form carries +1/8 from h04 = -h02/2.
        let h40 = &(&(&(&Poly::constant(qr(1, 8)) - &a2.scale(&qr(3, 2))) + &(&a2 * &b).scale(&q(4)))
            + &(&a.pow(3) * &t).scale(&q(8)))
            + &(&a.pow(4) * &r).scale(&q(16));
        assert_eq!(h.coeff(4, 0), rp(h40));
    }

    #[test]
    fn nilpotent_full_table() {
        let s = SymmetricSystem::generic().normalize_nilpotent();
        let nf = nilpotent_normal_form(&s, &BiPoly::zero()).unwrap();
        let h = nf.hamiltonian;
        let (a, h20, h31, h40) = (p("h11"), p("h20"), p("h31"), p("h40"));
        let a2 = a.pow(2);
        let e3 = &(&a * &h20).scale(&q(8)) + &h31.scale(&q(4));
        let want = [
            ((3, 0), e3.clone()),
            ((3, 1), e3),
            ((2, 1), &a2.scale(&q(-2)) + &h20.scale(&q(4))),
            ((1, 2), Poly::zero()),
            ((1, 3), Poly::zero()),
            ((0, 3), Poly::constant(qr(1, 2))),
            ((0, 2), Poly::constant(qr(1, 2))),
            ((4, 0), &(&a2 * &(&a2 + &h20.scale(&q(4)))).scale(&q(2)) + &(&(&a * &h31) - &h40).scale(&q(8))),
            ((2, 2), &(-&a2) + &h20.scale(&q(2))),
            ((0, 4), Poly::constant(qr(1, 8))),
        ];
        for ((i, j), w) in want {
            assert_eq!(h.coeff(i, j), rp(w), "h_{i}{j}");
        }
        // Under h31 = -2 h11 h20 the quartic coefficients reduce to A and B.
        let sub = RatFunc::from_poly((&a * &h20).scale(&q(-2)));
        let hc = h.substitute("h31", &sub).unwrap();
        assert_eq!(hc.coeff(4, 0), nf.b.clone().unwrap().substitute("h31", &sub).unwrap());
        assert_eq!(hc.coeff(2, 2), nf.a.clone().unwrap());
        assert_eq!(hc.coeff(2, 1), nf.a.unwrap().scale(&q(2)));
    }

    #[test]
    fn elementary_divergence_table() {
        let ch = AffineChange::elementary_preset(&p("h11"));
        let d = transport_divergence(&full_quadratic_divergence(), &ch).unwrap();
        let (a, c00, c10, c01, c20, c11, c02) = (p("h11"), p("c00"), p("c10"), p("c01"), p("c20"), p("c11"), p("c02"));
        let want = [
            ((0, 0), &(&c00 + &c01) + &c02),
            ((1, 0), &(&(&(&a * &c10).scale(&q(-2)) - &c01) - &c02.scale(&q(2))) - &(&a * &c11).scale(&q(2))),
            ((0, 1), &c10 + &c11),
            ((2, 0), &(&c02 + &(&a * &c11).scale(&q(2))) + &(&a.pow(2) * &c20).scale(&q(4))),
            ((1, 1), &(-&c11) - &(&a * &c20).scale(&q(4))),
            ((0, 2), c20.clone()),
        ];
        for ((i, j), w) in want {
            assert_eq!(d.coeff(i, j), rp(w), "c_{i}{j}");
        }
    }

    #[test]
    fn six_by_six_determinant() {
        let m = divergence_matrix(&AffineChange::elementary_preset(&p("h11"))).unwrap();
        assert!(!det_rad(&m).is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let ch = AffineChange::new(
            RadExpr::int(2),
            RadExpr::int(1),
            RadExpr::var("s"),
            RadExpr::int(3),
            RadExpr::int(1),
            RadExpr::from_q(qr(-1, 3)),
            RadExpr::int(5),
        )
        .unwrap();
        let div = full_quadratic_divergence();
        let there = transport_divergence(&div, &ch).unwrap();
        let back = transport_divergence(&there, &ch.inverse().unwrap()).unwrap();
        assert_eq!(back, div);
    }

    #[test]
    fn symmetric_type_examples() {
        let mut s = SymmetricSystem::generic().normalize_nilpotent();
        s.h11 = Poly::zero();
        s.h20 = Poly::zero();
        s.h31 = Poly::one();
        let f = |s: &SymmetricSystem| classify_symmetric_nilpotent(&s.clone().normalize_nilpotent()).unwrap();
        assert_eq!(f(&s), SymmetricNilpotent::Cusp1);
        s.h31 = Poly::zero();
        s.h40 = Poly::int(-1);
        assert_eq!(f(&s), SymmetricNilpotent::NilpotentCenter1);
        s.h20 = Poly::one();
        assert_eq!(f(&s), SymmetricNilpotent::NonIsolated);
    }
}
