//! Truncated power series over a coefficient ring.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{q, Q};
use crate::radical::RadExpr;

/// The coefficient operations the series code needs. `zero_like` and
/// `one_like` let nested series inherit their truncation order.
pub trait Coeff: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Q) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self>;
    fn pow_q(&self, t: &Q) -> Result<Self>;
}

impl Coeff for RadExpr {
    fn zero_like(&self) -> Self {
        RadExpr::zero()
    }
    fn one_like(&self) -> Self {
        RadExpr::one()
    }
    fn add(&self, o: &Self) -> Self {
        RadExpr::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RadExpr::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RadExpr::mul(self, o)
    }
    fn neg(&self) -> Self {
        RadExpr::neg(self)
    }
    fn scale(&self, c: &Q) -> Self {
        RadExpr::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        RadExpr::is_zero(self)
    }
    fn inv(&self) -> Result<Self> {
        RadExpr::inv(self)
    }
    fn pow_q(&self, t: &Q) -> Result<Self> {
        RadExpr::pow_q(self, t)
    }
}

impl Coeff for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Q) -> Self {
        self * c
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(self.recip())
    }
    fn pow_q(&self, t: &Q) -> Result<Self> {
        let d = num_traits::ToPrimitive::to_u32(t.denom()).unwrap();
        let base = if d == 1 {
            self.clone()
        } else {
            // Only exact roots stay rational.
            use num_traits::Signed;
            if self.is_negative() {
                return Err(Error::NegativeRoot);
            }
            let (n, m) = (self.numer().nth_root(d), self.denom().nth_root(d));
            let r = Q::new(n, m);
            if crate::poly::pow_q(&r, d as i32) != *self {
                return Err(Error::Unsupported("irrational root of a rational".into()));
            }
            r
        };
        let k: i32 = num_traits::ToPrimitive::to_i32(t.numer()).unwrap();
        let self_ = &base;
        if k < 0 && Zero::is_zero(self_) {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(crate::poly::pow_q(self_, k))
    }
}

/// `Σ_{k<order} c_k t^k + O(t^order)`.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<K> {
    coeffs: Vec<K>,
    zero: K,
}

impl<K: Coeff> TruncSeries<K> {
    /// Series with the given leading coefficients, padded with `zero` up to `order`.
    pub fn new(mut coeffs: Vec<K>, order: usize, zero: K) -> Self {
        coeffs.truncate(order);
        while coeffs.len() < order {
            coeffs.push(zero.clone());
        }
        TruncSeries { coeffs, zero }
    }

    pub fn constant(c: K, order: usize) -> Self {
        let z = c.zero_like();
        TruncSeries::new(alloc::vec![c], order, z)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &K {
        self.coeffs.get(k).unwrap_or(&self.zero)
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn zero_elem(&self) -> &K {
        &self.zero
    }

    pub fn set(&mut self, k: usize, c: K) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncSeries::new(self.coeffs.clone(), order.min(self.order()), self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(K::is_zero)
    }

    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn zip(&self, o: &Self, f: impl Fn(&K, &K) -> K) -> Self {
        let n = self.order().min(o.order());
        let cs = (0..n).map(|k| f(&self.coeffs[k], &o.coeffs[k])).collect();
        TruncSeries { coeffs: cs, zero: self.zero.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, K::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, K::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(K::neg)
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.map(|k| k.scale(c))
    }

    pub fn scale_by(&self, c: &K) -> Self {
        self.map(|k| c.mul(k))
    }

    pub fn map(&self, f: impl Fn(&K) -> K) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(f).collect(), zero: self.zero.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_trunc(o, self.order().min(o.order()))
    }

    pub fn mul_trunc(&self, o: &Self, order: usize) -> Self {
        let n = order.min(self.order()).min(o.order());
        let mut cs = alloc::vec![self.zero.clone(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    cs[i + j] = cs[i + j].add(&a.mul(b));
                }
            }
        }
        TruncSeries { coeffs: cs, zero: self.zero.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = TruncSeries::constant(self.zero.one_like(), self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        let a0 = self.coeff(0);
        if a0.is_zero() {
            return Err(Error::NotInvertible("constant term is zero".into()));
        }
        let b0 = a0.inv()?;
        let n = self.order();
        let mut b = alloc::vec![b0.clone()];
        for k in 1..n {
            let mut s = self.zero.clone();
            for i in 1..=k {
                s = s.add(&self.coeffs[i].mul(&b[k - i]));
            }
            b.push(b0.mul(&s).neg());
        }
        Ok(TruncSeries { coeffs: b, zero: self.zero.clone() })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// `self^(num/den)` with the principal root of the constant term:
    /// `n a0 f_n = Σ_{k=1..n} (α k - (n - k)) a_k f_{n-k}`.
    pub fn pow_rational(&self, num: i64, den: i64) -> Result<Self> {
        let a0 = self.coeff(0);
        if a0.is_zero() {
            return Err(Error::NotInvertible("fractional power of a series with zero constant term".into()));
        }
        let alpha = Q::new(BigInt::from(num), BigInt::from(den));
        let f0 = a0.pow_q(&alpha)?;
        let inv_a0 = a0.inv()?;
        let n = self.order();
        let mut f = alloc::vec![f0];
        for m in 1..n {
            let mut s = self.zero.clone();
            for k in 1..=m {
                let a = &self.coeffs[k];
                if a.is_zero() {
                    continue;
                }
                let w = &alpha * q(k as i64) - q((m - k) as i64);
                s = s.add(&a.mul(&f[m - k]).scale(&w));
            }
            f.push(inv_a0.mul(&s).scale(&Q::new(BigInt::one(), BigInt::from(m as i64))));
        }
        Ok(TruncSeries { coeffs: f, zero: self.zero.clone() })
    }

    pub fn reciprocal_sqrt(&self) -> Result<Self> {
        if self.coeff(0).is_zero() {
            return Err(Error::NotInvertible("series not invertible under sqrt".into()));
        }
        self.pow_rational(-1, 2)
    }

    /// `self(inner)`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(Error::Domain("inner series of a composition must vanish at 0".into()));
        }
        let n = self.order().min(inner.order().max(1));
        let inner = inner.truncate(n);
        let mut acc = TruncSeries::constant(self.zero.clone(), n);
        for c in self.coeffs.iter().take(n).rev() {
            acc = acc.mul(&inner);
            let c0 = acc.coeffs[0].add(c);
            acc.coeffs[0] = c0;
        }
        Ok(acc)
    }

    /// Compositional inverse by `g <- g - (s(g) - t)/s1`.
    pub fn reverse(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() || self.order() < 2 {
            return Err(Error::ReversionUndefined("constant term must vanish".into()));
        }
        let s1 = self.coeff(1);
        if s1.is_zero() {
            return Err(Error::ReversionUndefined("linear coefficient is zero".into()));
        }
        let inv1 = s1.inv()?;
        let n = self.order();
        let one = self.zero.one_like();
        let mut t = TruncSeries::new(alloc::vec![self.zero.clone(), one], n, self.zero.clone());
        let mut g = t.scale_by(&inv1);
        for _ in 0..n {
            let r = self.compose(&g)?.sub(&t);
            if r.is_zero() {
                return Ok(g);
            }
            g = g.sub(&r.scale_by(&inv1));
        }
        t = self.compose(&g)?.sub(&t);
        if !t.is_zero() {
            return Err(Error::ReversionUndefined("fixed point iteration did not converge".into()));
        }
        Ok(g)
    }

    pub fn derivative(&self) -> Self {
        let n = self.order().saturating_sub(1);
        let cs = (0..n).map(|k| self.coeffs[k + 1].scale(&q(k as i64 + 1))).collect();
        TruncSeries { coeffs: cs, zero: self.zero.clone() }
    }

    /// Divide by `t^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return Err(Error::Domain("series not divisible by the requested power".into()));
        }
        Ok(TruncSeries { coeffs: self.coeffs.iter().skip(k).cloned().collect(), zero: self.zero.clone() })
    }

    /// Multiply by `t^k`, keeping `order + k` terms.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut cs = alloc::vec![self.zero.clone(); k];
        cs.extend(self.coeffs.iter().cloned());
        TruncSeries { coeffs: cs, zero: self.zero.clone() }
    }

    /// `s(-t)`.
    pub fn reflect(&self) -> Self {
        let cs = self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { c.neg() } else { c.clone() }).collect();
        TruncSeries { coeffs: cs, zero: self.zero.clone() }
    }
}

impl<K: Coeff> Coeff for TruncSeries<K> {
    fn zero_like(&self) -> Self {
        TruncSeries::new(Vec::new(), self.order(), self.zero.clone())
    }
    fn one_like(&self) -> Self {
        TruncSeries::constant(self.zero.one_like(), self.order())
    }
    fn add(&self, o: &Self) -> Self {
        TruncSeries::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        TruncSeries::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        TruncSeries::mul(self, o)
    }
    fn neg(&self) -> Self {
        TruncSeries::neg(self)
    }
    fn scale(&self, c: &Q) -> Self {
        TruncSeries::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        TruncSeries::is_zero(self)
    }
    fn inv(&self) -> Result<Self> {
        TruncSeries::inv(self)
    }
    fn pow_q(&self, t: &Q) -> Result<Self> {
        let n: i64 = num_traits::ToPrimitive::to_i64(t.numer()).unwrap();
        let d: i64 = num_traits::ToPrimitive::to_i64(t.denom()).unwrap();
        self.pow_rational(n, d)
    }
}

impl<K: Coeff + fmt::Display> TruncSeries<K> {
    pub fn display(&self, var: &str) -> alloc::string::String {
        let mut s = alloc::string::String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !s.is_empty() {
                s.push_str(" + ");
            }
            s.push_str(&alloc::format!("({c})*{var}^{k}"));
        }
        s.push_str(&alloc::format!(" + O({var}^{})", self.order()));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qr;

    fn s(cs: &[i64], n: usize) -> TruncSeries<Q> {
        TruncSeries::new(cs.iter().map(|&c| q(c)).collect(), n, Q::zero())
    }

    #[test]
    fn inverse_and_powers() {
        let a = s(&[1, 1], 8);
        let inv = a.inv().unwrap();
        assert_eq!(inv.coeffs()[..4], [q(1), q(-1), q(1), q(-1)]);
        // (1+t)^(1/2) squared
        let r = a.pow_rational(1, 2).unwrap();
        assert_eq!(r.mul(&r), a);
        assert_eq!(*r.coeff(2), qr(-1, 8));
        let r4 = TruncSeries::new(alloc::vec![RadExpr::int(4), RadExpr::int(1)], 6, RadExpr::zero());
        let m = r4.reciprocal_sqrt().unwrap();
        assert_eq!(m.coeff(0), &RadExpr::from_q(qr(1, 2)));
        assert_eq!(m.mul(&m).mul(&r4), TruncSeries::constant(RadExpr::one(), 6));
    }

    #[test]
    fn reversion_roundtrip() {
        // t + t^2 has inverse with Catalan-like signs
        let a = s(&[0, 1, 1], 7);
        let g = a.reverse().unwrap();
        assert_eq!(g.coeffs(), &[q(0), q(1), q(-1), q(2), q(-5), q(14), q(-42)]);
        assert_eq!(a.compose(&g).unwrap(), s(&[0, 1], 7));
        assert!(s(&[0, 0, 1], 5).reverse().is_err());
    }
}
