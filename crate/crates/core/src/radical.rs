//! Radical extensions of the parameter field.
//!
//! A `RadExpr` is a finite sum of radical monomials with rational-function
//! coefficients. Every radical has the fixed index [`RADICAL_INDEX`], so a
//! monomial is a product `Π base^(e/N)` with `0 < e < N`. Bases are either
//! rational primes or primitive integral polynomials (the positive content
//! is split off into prime radicals, the sign is kept as given). Crossing
//! `e = N` moves a full power of the base into the coefficient, which is
//! what makes `sqrt(P)^2 - P` normalize to zero.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{bail, Error, Result};
use crate::poly::{fmt_q, Poly, Var, Q};
use crate::ratfunc::RatFunc;

/// lcm(1, ..., 16): every root taken by the pipeline has index dividing it.
pub const RADICAL_INDEX: u32 = 720720;

/// A term `c Π b_i^e_i` with rational bases and exponents.
pub type EvalPart = (Q, Vec<(Q, Q)>);

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RadMono(SmallVec<[(Arc<Poly>, u32); 2]>);

impl RadMono {
    pub fn one() -> Self {
        RadMono::default()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Poly, u32)> {
        self.0.iter().map(|(b, e)| (&**b, *e))
    }

    fn single(base: Arc<Poly>, e: u32) -> Self {
        let mut m = RadMono::one();
        if e > 0 {
            m.0.push((base, e));
        }
        m
    }

    /// Product; the returned polynomial collects full powers of bases.
    fn mul(&self, o: &RadMono) -> (RadMono, Poly) {
        let mut out: SmallVec<[(Arc<Poly>, u32); 2]> = SmallVec::new();
        let mut carry = Poly::one();
        let (a, b) = (&self.0, &o.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                core::cmp::Ordering::Greater
            } else if j == b.len() {
                core::cmp::Ordering::Less
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                core::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    let mut e = a[i].1 + b[j].1;
                    if e >= RADICAL_INDEX {
                        e -= RADICAL_INDEX;
                        carry = &carry * &a[i].0;
                    }
                    if e > 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        (RadMono(out), carry)
    }
}

fn fmt_exp(e: u32) -> String {
    let g = e.gcd(&RADICAL_INDEX);
    alloc::format!("{}/{}", e / g, RADICAL_INDEX / g)
}

impl fmt::Display for RadMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (b, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if b.is_constant() {
                write!(f, "{b}^({})", fmt_exp(*e))?;
            } else {
                write!(f, "({b})^({})", fmt_exp(*e))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Default, PartialEq)]
pub struct RadExpr {
    terms: BTreeMap<RadMono, RatFunc>,
}

/// Trial-division factorization; a large leftover cofactor is kept whole.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= n && p <= limit {
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        if k > 0 {
            out.push((p.clone(), k));
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn floor_q(t: &Q) -> BigInt {
    t.floor().to_integer()
}

/// Split `t` as `f + e/N` with integral `f` and `0 <= e < N`.
fn split_exponent(t: &Q) -> Result<(i32, u32)> {
    let f = floor_q(t);
    let frac = t - Q::from_integer(f.clone());
    let scaled = frac * Q::from_integer(BigInt::from(RADICAL_INDEX));
    if !scaled.is_integer() {
        bail!(Unsupported, "radical index of exponent {} exceeds {RADICAL_INDEX}", fmt_q(t));
    }
    let f = f.to_i32().ok_or_else(|| Error::Unsupported("exponent too large".into()))?;
    Ok((f, scaled.to_integer().to_u32().unwrap()))
}

impl RadExpr {
    pub fn zero() -> Self {
        RadExpr::default()
    }

    pub fn one() -> Self {
        RadExpr::from_ratfunc(RatFunc::one())
    }

    pub fn from_q(c: Q) -> Self {
        RadExpr::from_ratfunc(RatFunc::from_q(c))
    }

    pub fn int(n: i64) -> Self {
        RadExpr::from_q(crate::poly::q(n))
    }

    pub fn from_poly(p: Poly) -> Self {
        RadExpr::from_ratfunc(RatFunc::from_poly(p))
    }

    pub fn var(name: &str) -> Self {
        RadExpr::from_poly(Poly::var(name))
    }

    pub fn from_ratfunc(r: RatFunc) -> Self {
        RadExpr::term(RadMono::one(), r)
    }

    pub fn term(m: RadMono, r: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(m, r);
        }
        RadExpr { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RadMono, &RatFunc)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn single_term(&self) -> Option<(&RadMono, &RatFunc)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// The value if no radicals are involved.
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => {
                let (m, r) = self.terms.iter().next().unwrap();
                m.is_one().then(|| r.clone())
            }
            _ => None,
        }
    }

    pub fn constant_value(&self) -> Option<Q> {
        self.as_ratfunc()?.constant_value()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    fn add_term(&mut self, m: RadMono, r: RatFunc) {
        if r.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(r);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&r);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &RadExpr) -> RadExpr {
        let mut out = self.clone();
        for (m, r) in &o.terms {
            out.add_term(m.clone(), r.clone());
        }
        out
    }

    pub fn sub(&self, o: &RadExpr) -> RadExpr {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RadExpr {
        RadExpr { terms: self.terms.iter().map(|(m, r)| (m.clone(), r.neg())).collect() }
    }

    pub fn scale(&self, c: &Q) -> RadExpr {
        if c.is_zero() {
            return RadExpr::zero();
        }
        RadExpr { terms: self.terms.iter().map(|(m, r)| (m.clone(), r.scale(c))).collect() }
    }

    pub fn mul_ratfunc(&self, c: &RatFunc) -> RadExpr {
        if c.is_zero() {
            return RadExpr::zero();
        }
        RadExpr { terms: self.terms.iter().map(|(m, r)| (m.clone(), r.mul(c))).collect() }
    }

    pub fn mul(&self, o: &RadExpr) -> RadExpr {
        if self.is_zero() || o.is_zero() {
            return RadExpr::zero();
        }
        if let Some(r) = o.as_ratfunc() {
            return self.mul_ratfunc(&r);
        }
        if let Some(r) = self.as_ratfunc() {
            return o.mul_ratfunc(&r);
        }
        let mut out = RadExpr::zero();
        for (m, a) in &self.terms {
            for (n, b) in &o.terms {
                let (mn, carry) = m.mul(n);
                let mut c = a.mul(b);
                if !carry.is_one() {
                    c = c.mul_poly(&carry);
                }
                out.add_term(mn, c);
            }
        }
        out
    }

    pub fn pow(&self, e: i32) -> Result<RadExpr> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RadExpr::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// `base^t` for a rational prime or primitive polynomial base.
    fn base_pow(base: &Arc<Poly>, t: &Q) -> Result<RadExpr> {
        let (f, e) = split_exponent(t)?;
        let coeff = RatFunc::from_poly((**base).clone()).pow(f)?;
        Ok(RadExpr::term(RadMono::single(base.clone(), e), coeff))
    }

    /// `c^t` for a positive rational `c`.
    pub fn rational_pow(c: &Q, t: &Q) -> Result<RadExpr> {
        if !c.is_positive() {
            bail!(Domain, "rational power of a non-positive number {}", fmt_q(c));
        }
        if t.is_integer() {
            let k = t.to_integer().to_i32().ok_or_else(|| Error::Unsupported("exponent".into()))?;
            return Ok(RadExpr::from_q(crate::poly::pow_q(c, k)));
        }
        let mut out = RadExpr::one();
        for (sign, n) in [(1i64, c.numer()), (-1, c.denom())] {
            for (p, k) in factor_integer(n) {
                let base = Arc::new(Poly::constant(Q::from_integer(p)));
                let exp = t * Q::from_integer(BigInt::from(sign * k as i64));
                out = out.mul(&RadExpr::base_pow(&base, &exp)?);
            }
        }
        Ok(out)
    }

    /// `r^t` for a rational function, with polynomial bases taken as given.
    pub fn ratfunc_pow(r: &RatFunc, t: &Q) -> Result<RadExpr> {
        if r.is_zero() {
            if t.is_positive() {
                return Ok(RadExpr::zero());
            }
            bail!(Domain, "non-positive power of zero");
        }
        if t.is_integer() {
            return Ok(RadExpr::from_ratfunc(r.pow(t.to_integer().to_i32().unwrap())?));
        }
        let mut out = RadExpr::one();
        let mut content = Q::one();
        let mut push_poly = |p: &Poly, sign: i64, out: &mut RadExpr| -> Result<()> {
            let (c, prim) = p.primitive();
            content *= crate::poly::pow_q(&c, sign as i32);
            if let Some(k) = prim.constant_value() {
                if k.is_negative() {
                    let two = BigInt::from(2u32);
                    let tt = t * Q::from_integer(BigInt::from(sign));
                    // (-1)^t is real only for odd denominators.
                    if tt.denom().is_multiple_of(&two) {
                        return Err(Error::NegativeRoot);
                    }
                    if tt.numer().is_odd() {
                        *out = out.neg();
                    }
                }
                return Ok(());
            }
            let base = Arc::new(prim);
            *out = out.mul(&RadExpr::base_pow(&base, &(t * Q::from_integer(BigInt::from(sign))))?);
            Ok(())
        };
        push_poly(r.numer(), 1, &mut out)?;
        for (d, e) in r.denom_factors() {
            for _ in 0..e {
                push_poly(d, -1, &mut out)?;
            }
        }
        Ok(out.mul(&RadExpr::rational_pow(&content, t)?))
    }

    /// Multiplicative inverse; defined for single-term elements.
    pub fn inv(&self) -> Result<RadExpr> {
        let (m, r) = self
            .single_term()
            .ok_or_else(|| Error::Unsupported(alloc::format!("inverse of multi-term radical expression {self}")))?;
        let mut out = RadExpr::from_ratfunc(r.inv()?);
        for (b, e) in m.0.iter() {
            let coeff = RatFunc::inv_poly(b)?;
            out = out.mul(&RadExpr::term(RadMono::single(b.clone(), RADICAL_INDEX - e), coeff));
        }
        Ok(out)
    }

    pub fn div(&self, o: &RadExpr) -> Result<RadExpr> {
        if let Some(r) = o.as_ratfunc() {
            return Ok(self.mul_ratfunc(&r.inv()?));
        }
        Ok(self.mul(&o.inv()?))
    }

    /// `self^t`, defined for single-term elements.
    pub fn pow_q(&self, t: &Q) -> Result<RadExpr> {
        if t.is_integer() {
            return self.pow(t.to_integer().to_i32().ok_or_else(|| Error::Unsupported("exponent".into()))?);
        }
        if self.is_zero() {
            return RadExpr::ratfunc_pow(&RatFunc::zero(), t);
        }
        let (m, r) = self.single_term().ok_or_else(|| {
            Error::Unsupported(alloc::format!("fractional power of multi-term radical expression {self}"))
        })?;
        let mut out = RadExpr::ratfunc_pow(r, t)?;
        for (b, e) in m.0.iter() {
            let exp = t * Q::new(BigInt::from(*e), BigInt::from(RADICAL_INDEX));
            out = out.mul(&RadExpr::base_pow(b, &exp)?);
        }
        Ok(out)
    }

    pub fn root(&self, n: u32) -> Result<RadExpr> {
        self.pow_q(&Q::new(BigInt::one(), BigInt::from(n)))
    }

    /// Substitute a rational function for a parameter.
    pub fn substitute(&self, v: &str, value: &RatFunc) -> Result<RadExpr> {
        self.rebuild(|r| r.substitute(v, value))
    }

    pub fn eval_partial(&self, vals: &BTreeMap<Var, Q>) -> Result<RadExpr> {
        self.rebuild(|r| r.eval_partial(vals))
    }

    fn rebuild(&self, f: impl Fn(&RatFunc) -> Result<RatFunc>) -> Result<RadExpr> {
        let mut out = RadExpr::zero();
        for (m, r) in &self.terms {
            let mut t = RadExpr::from_ratfunc(f(r)?);
            for (b, e) in m.0.iter() {
                let nb = f(&RatFunc::from_poly((**b).clone()))?;
                let exp = Q::new(BigInt::from(*e), BigInt::from(RADICAL_INDEX));
                t = t.mul(&RadExpr::ratfunc_pow(&nb, &exp)?);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    pub fn contains_var(&self, v: &str) -> bool {
        self.terms.iter().any(|(m, r)| r.contains_var(v) || m.0.iter().any(|(b, _)| b.contains_var(v)))
    }

    /// `(coefficient, [(base, exponent)])` per term with all parameters bound.
    pub fn eval_parts(&self, vals: &BTreeMap<Var, Q>) -> Option<Vec<EvalPart>> {
        let mut out = Vec::new();
        for (m, r) in &self.terms {
            let c = r.eval(vals)?;
            let mut fs = Vec::new();
            for (b, e) in m.0.iter() {
                fs.push((b.eval(vals)?, Q::new(BigInt::from(*e), BigInt::from(RADICAL_INDEX))));
            }
            out.push((c, fs));
        }
        Some(out)
    }

    /// Every radical base, so callers can check positivity.
    pub fn radical_bases(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        for m in self.terms.keys() {
            for (b, _) in m.0.iter() {
                if !out.contains(b) {
                    out.push((**b).clone());
                }
            }
        }
        out
    }
}

impl From<RatFunc> for RadExpr {
    fn from(r: RatFunc) -> Self {
        RadExpr::from_ratfunc(r)
    }
}

impl From<Poly> for RadExpr {
    fn from(p: Poly) -> Self {
        RadExpr::from_poly(p)
    }
}

impl fmt::Display for RadExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, r)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{r}")?;
            } else if r.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({r})*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RadExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qr};

    #[test]
    fn square_roots_normalize() {
        let two = RadExpr::int(2);
        let s = two.root(2).unwrap();
        assert_eq!(s.mul(&s), two);
        let p = RadExpr::from_poly(&Poly::var("a") + &Poly::int(1));
        let r = p.root(2).unwrap();
        assert!(r.mul(&r).sub(&p).is_zero());
        let r4 = RadExpr::from_poly(Poly::var("a").scale(&q(4))).root(4).unwrap();
        assert_eq!(r4.pow(4).unwrap(), RadExpr::from_poly(Poly::var("a").scale(&q(4))));
        // 8^(1/2) = 2 * 2^(1/2)
        assert_eq!(RadExpr::int(8).root(2).unwrap(), s.scale(&q(2)));
    }

    #[test]
    fn inverse_and_powers() {
        let r = RadExpr::from_q(qr(3, 4)).pow_q(&qr(-3, 4)).unwrap();
        let back = r.pow_q(&qr(-4, 3)).unwrap();
        assert_eq!(back, RadExpr::from_q(qr(3, 4)));
        let x = RadExpr::from_poly(Poly::var("b")).root(3).unwrap();
        assert!(x.mul(&x.inv().unwrap()).is_one());
        assert_eq!(RadExpr::int(-8).root(3).unwrap(), RadExpr::int(-2));
        assert_eq!(RadExpr::int(-4).root(2), Err(Error::NegativeRoot));
    }

    #[test]
    fn substitution_renormalizes() {
        let r = RadExpr::from_poly(Poly::var("a")).root(2).unwrap();
        let s = r.substitute("a", &RatFunc::from_q(q(9))).unwrap();
        assert_eq!(s, RadExpr::int(3));
    }
}
