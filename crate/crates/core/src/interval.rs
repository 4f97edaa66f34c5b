//! Closed intervals with rational endpoints, used to decide signs of
//! polynomial expressions at algebraic points.

use alloc::collections::BTreeMap;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{bail, Result};
use crate::poly::{fmt_q, q, Poly, Var, Q};
use crate::radical::RadExpr;
use crate::ratfunc::RatFunc;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

pub type IntervalBox = BTreeMap<Var, Interval>;

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / q(2)
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Q::zero())
    }

    /// `Some(±1)` when the interval excludes zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Q) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let ps = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = ps.iter().min().unwrap().clone();
        let hi = ps.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn inv(&self) -> Result<Interval> {
        if self.contains_zero() {
            bail!(Undecidable, "interval {self} contains zero");
        }
        Ok(Interval { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn div(&self, o: &Interval) -> Result<Interval> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(q(1));
        }
        let (a, b) = (crate::poly::pow_q(&self.lo, e as i32), crate::poly::pow_q(&self.hi, e as i32));
        if e % 2 == 1 {
            return Interval { lo: a, hi: b };
        }
        if self.contains_zero() {
            Interval { lo: Q::zero(), hi: a.max(b) }
        } else {
            Interval { lo: a.clone().min(b.clone()), hi: a.max(b) }
        }
    }

    /// Enclosure of `x^t` for a positive interval and rational `t`, with
    /// endpoints accurate to about `2^-bits`.
    pub fn pow_q(&self, t: &Q, bits: u32) -> Result<Interval> {
        if t.is_integer() {
            let e = t.to_integer().to_i32().unwrap();
            let base = if e < 0 { self.inv()? } else { self.clone() };
            return Ok(base.pow(e.unsigned_abs()));
        }
        if !self.lo.is_positive() {
            bail!(Undecidable, "fractional power of {self}, which is not positive");
        }
        let (m, n) = (t.numer().to_i32().unwrap(), t.denom().to_u32().unwrap());
        let lo_m = crate::poly::pow_q(&self.lo, m);
        let hi_m = crate::poly::pow_q(&self.hi, m);
        let (a, b) = if m >= 0 { (lo_m, hi_m) } else { (hi_m, lo_m) };
        Ok(Interval { lo: nth_root_floor(&a, n, bits), hi: nth_root_ceil(&b, n, bits) })
    }
}

fn scaled_root(x: &Q, n: u32, bits: u32) -> (BigInt, BigInt) {
    // floor((x · 2^(n·bits))^(1/n)) with x rounded down to an integer first.
    let s = BigInt::from(1) << (n as usize * bits as usize);
    let v = (x * Q::from_integer(s)).floor().to_integer();
    (v.nth_root(n), BigInt::from(1) << bits as usize)
}

fn nth_root_floor(x: &Q, n: u32, bits: u32) -> Q {
    let (r, d) = scaled_root(x, n, bits);
    Q::new(r, d)
}

fn nth_root_ceil(x: &Q, n: u32, bits: u32) -> Q {
    let (r, d) = scaled_root(x, n, bits);
    Q::new(r + 1, d)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_q(&self.lo), fmt_q(&self.hi))
    }
}

fn var_interval<'a>(bx: &'a IntervalBox, v: &Var) -> Result<&'a Interval> {
    match bx.get(v) {
        Some(i) => Ok(i),
        None => bail!(Domain, "no interval for parameter {v}"),
    }
}

pub fn eval_poly(p: &Poly, bx: &IntervalBox) -> Result<Interval> {
    let mut acc = Interval::point(Q::zero());
    for (m, c) in p.terms() {
        let mut t = Interval::point(c.clone());
        for (v, e) in m.pairs() {
            t = t.mul(&var_interval(bx, v)?.pow(e));
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

pub fn eval_ratfunc(r: &RatFunc, bx: &IntervalBox) -> Result<Interval> {
    let mut v = eval_poly(r.numer(), bx)?;
    for (f, e) in r.denom_factors() {
        v = v.div(&eval_poly(f, bx)?.pow(e))?;
    }
    Ok(v)
}

pub fn eval_rad(r: &RadExpr, bx: &IntervalBox, bits: u32) -> Result<Interval> {
    let mut acc = Interval::point(Q::zero());
    for (m, c) in r.terms() {
        let mut t = eval_ratfunc(c, bx)?;
        for (base, e) in m.factors() {
            let b = eval_poly(base, bx)?;
            let t_e = Q::new(BigInt::from(e), BigInt::from(crate::radical::RADICAL_INDEX));
            t = t.mul(&b.pow_q(&t_e, bits)?);
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qr;

    #[test]
    fn arithmetic_and_roots() {
        let a = Interval::new(q(-1), q(2));
        assert_eq!(a.pow(2), Interval::new(q(0), q(4)));
        assert_eq!(a.mul(&a), Interval::new(q(-2), q(4)));
        let s = Interval::point(q(2)).pow_q(&qr(1, 2), 30).unwrap();
        assert!(s.lo < s.hi && s.width() < qr(1, 1 << 28));
        assert!(s.mul(&s).contains(&q(2)));
        let mut bx = IntervalBox::new();
        bx.insert(crate::poly::var("r"), Interval::new(q(1), q(2)));
        let p = &Poly::var("r").pow(2) - &Poly::int(3);
        assert_eq!(eval_poly(&p, &bx).unwrap(), Interval::new(q(-2), q(1)));
    }
}
