//! Rational functions with a factored denominator.
//!
//! The denominator is kept as a product of normalized (integral, primitive,
//! positive leading coefficient) polynomials. Only factors that actually
//! divide the numerator are cancelled, which is all the pipeline needs and
//! avoids a full gcd on every operation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{pow_q, Poly, Var, Q};

#[derive(Clone, Default)]
pub struct RatFunc {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc::default()
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn from_q(c: Q) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn from_poly(num: Poly) -> Self {
        RatFunc { num, den: BTreeMap::new() }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom_factors(&self) -> impl Iterator<Item = (&Poly, u32)> {
        self.den.iter().map(|(p, e)| (p, *e))
    }

    pub fn denom(&self) -> Poly {
        let mut d = Poly::one();
        for (p, e) in &self.den {
            d = &d * &p.pow(*e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_poly() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// `1 / p` for a nonzero polynomial.
    pub fn inv_poly(p: &Poly) -> Result<RatFunc> {
        if p.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        if let Some(c) = p.constant_value() {
            return Ok(RatFunc::from_q(c.recip()));
        }
        let (c, n) = p.normalized();
        let mut den = BTreeMap::new();
        den.insert(n, 1);
        Ok(RatFunc { num: Poly::constant(c.recip()), den })
    }

    fn cancel(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let keys: Vec<Poly> = self.den.keys().cloned().collect();
        for f in keys {
            let e = self.den.get_mut(&f).unwrap();
            while *e > 0 {
                match self.num.div_exact(&f) {
                    Some(qt) => {
                        self.num = qt;
                        *e -= 1;
                    }
                    None => break,
                }
            }
            if *e == 0 {
                self.den.remove(&f);
            }
        }
        self
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc { num: &self.num + &o.num, den: self.den.clone() }.cancel();
        }
        let mut den = self.den.clone();
        for (p, e) in &o.den {
            let x = den.entry(p.clone()).or_insert(0);
            *x = (*x).max(*e);
        }
        let lift = |r: &RatFunc| {
            let mut n = r.num.clone();
            for (p, e) in &den {
                let have = r.den.get(p).copied().unwrap_or(0);
                if *e > have {
                    n = &n * &p.pow(e - have);
                }
            }
            n
        };
        let num = &lift(self) + &lift(o);
        RatFunc { num, den }.cancel()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let num = &self.num * &o.num;
        if self.den.is_empty() && o.den.is_empty() {
            return RatFunc::from_poly(num);
        }
        let mut den = self.den.clone();
        for (p, e) in &o.den {
            *den.entry(p.clone()).or_insert(0) += e;
        }
        RatFunc { num, den }.cancel()
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        self.mul(&RatFunc::from_poly(p.clone()))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        let mut out = RatFunc::inv_poly(&self.num)?;
        for (p, e) in &self.den {
            out.num = &out.num * &p.pow(*e);
        }
        Ok(out.cancel())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn eval(&self, vals: &BTreeMap<Var, Q>) -> Option<Q> {
        let n = self.num.eval(vals)?;
        let mut d = Q::one();
        for (p, e) in &self.den {
            d *= pow_q(&p.eval(vals)?, *e as i32);
        }
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }

    /// Substitute exact values for some variables.
    pub fn eval_partial(&self, vals: &BTreeMap<Var, Q>) -> Result<RatFunc> {
        let mut out = RatFunc::from_poly(self.num.eval_partial(vals));
        for (p, e) in &self.den {
            let d = RatFunc::from_poly(p.eval_partial(vals)).pow(*e as i32)?;
            out = out.div(&d)?;
        }
        Ok(out)
    }

    /// Substitute a rational function for a variable.
    pub fn substitute(&self, v: &str, value: &RatFunc) -> Result<RatFunc> {
        let sub = |p: &Poly| -> RatFunc {
            let cs = p.coeffs_in(v);
            let mut acc = RatFunc::zero();
            for c in cs.iter().rev() {
                acc = acc.mul(value).add(&RatFunc::from_poly(c.clone()));
            }
            acc
        };
        let mut out = sub(&self.num);
        for (p, e) in &self.den {
            let d = if p.contains_var(v) { sub(p) } else { RatFunc::from_poly(p.clone()) };
            out = out.div(&d.pow(*e as i32)?)?;
        }
        Ok(out)
    }

    pub fn contains_var(&self, v: &str) -> bool {
        self.num.contains_var(v) || self.den.keys().any(|p| p.contains_var(v))
    }

    pub fn derivative(&self, v: &str) -> RatFunc {
        // (N / Π f^e)' = N'/Π - N Σ e f'/(f Π)
        let mut out = RatFunc { num: self.num.derivative(v), den: self.den.clone() };
        for (f, e) in &self.den {
            let fd = f.derivative(v);
            if fd.is_zero() {
                continue;
            }
            let mut den = self.den.clone();
            *den.get_mut(f).unwrap() += 1;
            let t = RatFunc { num: (&self.num * &fd).scale(&crate::poly::q(-(*e as i64))), den };
            out = out.add(&t);
        }
        out.cancel()
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        &self.num * &o.denom() == &o.num * &self.denom()
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        for (p, e) in &self.den {
            if *e == 1 {
                write!(f, "/({p})")?;
            } else {
                write!(f, "/({p})^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    #[test]
    fn field_ops() {
        let a = Poly::var("a");
        let p = &a + &Poly::int(1);
        let r = RatFunc::inv_poly(&p).unwrap();
        assert!(r.mul_poly(&p).is_one());
        let s = r.add(&r.neg());
        assert!(s.is_zero());
        let t = r.add(&RatFunc::one());
        assert_eq!(t, RatFunc::from_poly(&a + &Poly::int(2)).div(&RatFunc::from_poly(p.clone())).unwrap());
        assert_eq!(t.mul_poly(&p).as_poly(), Some(&(&a + &Poly::int(2))));
        let d = RatFunc::inv_poly(&p).unwrap().derivative("a");
        assert_eq!(d, RatFunc::inv_poly(&p.pow(2)).unwrap().scale(&q(-1)));
    }
}
