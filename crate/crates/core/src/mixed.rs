//! Melnikov coefficients: finite sums of `π^b Π Γ(q)^n × RadExpr`.
//!
//! Rational mantissas and prime powers are pushed into the radical part so
//! that the transcendental key is canonical and equality is term-wise.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::bigfloat::Real;
use crate::error::{Error, Result};
use crate::gamma::{gamma_key_string, GammaConst};
use crate::poly::{q, Var, Q};
use crate::radical::RadExpr;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct TransKey {
    pub pi: Q,
    pub gammas: BTreeMap<Q, i64>,
}

impl TransKey {
    pub fn is_one(&self) -> bool {
        self.pi.is_zero() && self.gammas.is_empty()
    }

    fn mul(&self, o: &TransKey) -> TransKey {
        let mut k = self.clone();
        k.pi += &o.pi;
        for (x, e) in &o.gammas {
            *k.gammas.entry(x.clone()).or_insert(0) += e;
        }
        k.gammas.retain(|_, e| *e != 0);
        k
    }

    fn as_const(&self) -> GammaConst {
        let mut g = GammaConst::pi_pow(self.pi.clone());
        g.gammas = self.gammas.clone();
        g
    }

    pub fn eval(&self, bits: u32) -> Real {
        self.as_const().eval(bits)
    }
}

impl fmt::Display for TransKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&gamma_key_string(&self.pi, &self.gammas))
    }
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct GammaRad {
    terms: BTreeMap<TransKey, RadExpr>,
}

/// Evaluate a radical expression with every parameter bound.
pub fn eval_rad(r: &RadExpr, vals: &BTreeMap<Var, Q>, bits: u32) -> Option<Real> {
    let g = bits + 32;
    let mut acc = Real::zero(g);
    for (c, fs) in r.eval_parts(vals)? {
        let mut t = Real::from_q(&c, g);
        for (b, e) in fs {
            if b <= Q::zero() {
                return None;
            }
            t = t.mul(&Real::from_q(&b, g).pow_q(&e));
        }
        acc = acc.add(&t);
    }
    Some(acc.to_bits(bits))
}

impl GammaRad {
    pub fn zero() -> Self {
        GammaRad::default()
    }

    pub fn from_rad(r: RadExpr) -> Self {
        GammaRad::from_parts(&GammaConst::one(), r).unwrap()
    }

    pub fn from_const(g: &GammaConst) -> Self {
        GammaRad::from_parts(g, RadExpr::one()).unwrap()
    }

    pub fn from_parts(g: &GammaConst, r: RadExpr) -> Result<Self> {
        if g.is_zero() || r.is_zero() {
            return Ok(GammaRad::zero());
        }
        let mut rad = r.scale(&g.mantissa);
        for (p, e) in &g.primes {
            rad = rad.mul(&RadExpr::rational_pow(&Q::from_integer(p.clone()), e)?);
        }
        let key = TransKey { pi: g.pi.clone(), gammas: g.gammas.clone() };
        let mut terms = BTreeMap::new();
        terms.insert(key, rad);
        Ok(GammaRad { terms })
    }

    pub fn from_key(key: TransKey, r: RadExpr) -> Self {
        let mut g = GammaRad::zero();
        g.add_term(key, r);
        g
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TransKey, &RadExpr)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn single_term(&self) -> Option<(&TransKey, &RadExpr)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, k: TransKey, r: RadExpr) {
        if r.is_zero() {
            return;
        }
        let s = match self.terms.remove(&k) {
            Some(old) => old.add(&r),
            None => r,
        };
        if !s.is_zero() {
            self.terms.insert(k, s);
        }
    }

    pub fn add(&self, o: &GammaRad) -> GammaRad {
        let mut out = self.clone();
        for (k, r) in &o.terms {
            out.add_term(k.clone(), r.clone());
        }
        out
    }

    pub fn neg(&self) -> GammaRad {
        GammaRad { terms: self.terms.iter().map(|(k, r)| (k.clone(), r.neg())).collect() }
    }

    pub fn sub(&self, o: &GammaRad) -> GammaRad {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Q) -> GammaRad {
        let mut out = GammaRad::zero();
        for (k, r) in &self.terms {
            out.add_term(k.clone(), r.scale(c));
        }
        out
    }

    pub fn mul_rad(&self, c: &RadExpr) -> GammaRad {
        let mut out = GammaRad::zero();
        for (k, r) in &self.terms {
            out.add_term(k.clone(), r.mul(c));
        }
        out
    }

    pub fn mul(&self, o: &GammaRad) -> GammaRad {
        let mut out = GammaRad::zero();
        for (k, r) in &self.terms {
            for (l, s) in &o.terms {
                out.add_term(k.mul(l), r.mul(s));
            }
        }
        out
    }

    pub fn inv(&self) -> Result<GammaRad> {
        let (k, r) = self.single_term().ok_or_else(|| Error::Unsupported("inverse of a multi-term constant".into()))?;
        let ik = TransKey { pi: -&k.pi, gammas: k.gammas.iter().map(|(x, e)| (x.clone(), -e)).collect() };
        let mut terms = BTreeMap::new();
        terms.insert(ik, r.inv()?);
        Ok(GammaRad { terms })
    }

    pub fn div(&self, o: &GammaRad) -> Result<GammaRad> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow_q(&self, t: &Q) -> Result<GammaRad> {
        if self.is_zero() {
            return Ok(GammaRad::zero());
        }
        if t.is_integer() {
            let e = num_traits::ToPrimitive::to_i32(&t.to_integer()).unwrap();
            let base = if e < 0 { self.inv()? } else { self.clone() };
            let mut acc = GammaRad::from_rad(RadExpr::one());
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        let (k, r) =
            self.single_term().ok_or_else(|| Error::Unsupported("fractional power of a multi-term constant".into()))?;
        let mut gammas = BTreeMap::new();
        for (x, e) in &k.gammas {
            let s = t * q(*e);
            if !s.is_integer() {
                return Err(Error::Unsupported("fractional power of a Gamma value".into()));
            }
            gammas.insert(x.clone(), num_traits::ToPrimitive::to_i64(&s.to_integer()).unwrap());
        }
        let mut terms = BTreeMap::new();
        terms.insert(TransKey { pi: &k.pi * t, gammas }, r.pow_q(t)?);
        Ok(GammaRad { terms })
    }

    pub fn eval_partial(&self, vals: &BTreeMap<Var, Q>) -> Result<GammaRad> {
        let mut out = GammaRad::zero();
        for (k, r) in &self.terms {
            out.add_term(k.clone(), r.eval_partial(vals)?);
        }
        Ok(out)
    }

    pub fn eval(&self, vals: &BTreeMap<Var, Q>, bits: u32) -> Option<Real> {
        let g = bits + 32;
        // Radicals first: a point with a negative base is rejected before
        // any transcendental is evaluated.
        let rads = self.terms.values().map(|r| eval_rad(r, vals, g)).collect::<Option<Vec<_>>>()?;
        let mut acc = Real::zero(g);
        for (k, r) in self.terms.keys().zip(rads) {
            acc = acc.add(&k.eval(g).mul(&r));
        }
        Some(acc.to_bits(bits))
    }

    /// Every radical base appearing in the coefficient.
    pub fn radical_bases(&self) -> Vec<crate::poly::Poly> {
        let mut out = Vec::new();
        for r in self.terms.values() {
            for b in r.radical_bases() {
                if !out.contains(&b) {
                    out.push(b);
                }
            }
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.single_term().is_some_and(|(k, r)| k.is_one() && r.is_one())
    }

    pub fn to_string_ascii(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for GammaRad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, r)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            match (k.is_one(), r.is_one()) {
                (true, _) => write!(f, "({r})")?,
                (false, true) => write!(f, "{k}")?,
                (false, false) => write!(f, "{k}*({r})")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qr;

    #[test]
    fn canonical_keys() {
        // Γ(3/4) = π √2 / Γ(1/4): both routes give the same canonical value.
        let a = GammaRad::from_const(&GammaConst::gamma(qr(3, 4)).unwrap());
        let two = RadExpr::int(2).root(2).unwrap();
        let b = GammaRad::from_const(&GammaConst::pi_pow(q(1)).div(&GammaConst::gamma(qr(1, 4)).unwrap()).unwrap())
            .mul_rad(&two);
        assert_eq!(a, b);
        let v = a.eval(&BTreeMap::new(), 150).unwrap();
        assert!(v.to_sci(20).starts_with("1.2254167024651776451"));
        assert!(a.mul(&a.inv().unwrap()).is_one());
    }
}
