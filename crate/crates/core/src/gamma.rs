//! Exact constants `m · Π p^a · π^b · Π Γ(q)^n` built from Beta weights.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigfloat::Real;
use crate::error::{Error, Result};
use crate::poly::{fmt_q, pow_q, q, qr, Q};
use crate::radical::factor_integer;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GammaConst {
    pub mantissa: Q,
    /// Prime bases with exponents in (0, 1).
    pub primes: BTreeMap<BigInt, Q>,
    pub pi: Q,
    /// `Γ(q)^n` with `q` in (0, 1), never 1/2 and never a reflectable `q > 1/2`.
    pub gammas: BTreeMap<Q, i64>,
}

/// `sin(πq)` as `c · 2^a · 3^b` for the arguments whose reflection is applied.
fn sin_pi(x: &Q) -> Option<(Q, Q, Q)> {
    let cases = [
        (qr(2, 3), qr(1, 2), Q::zero(), qr(1, 2)),
        (qr(3, 4), Q::one(), qr(-1, 2), Q::zero()),
        (qr(5, 6), qr(1, 2), Q::zero(), Q::zero()),
    ];
    cases.into_iter().find(|c| &c.0 == x).map(|c| (c.1, c.2, c.3))
}

impl GammaConst {
    pub fn one() -> Self {
        GammaConst::rational(Q::one())
    }

    pub fn rational(c: Q) -> Self {
        GammaConst { mantissa: c, primes: BTreeMap::new(), pi: Q::zero(), gammas: BTreeMap::new() }
    }

    pub fn pi_pow(e: Q) -> Self {
        let mut g = GammaConst::one();
        g.pi = e;
        g
    }

    pub fn gamma(x: Q) -> Result<Self> {
        if x <= Q::zero() && x.is_integer() {
            return Err(Error::Domain(alloc::format!("Gamma pole at {}", fmt_q(&x))));
        }
        let mut g = GammaConst::one();
        g.gammas.insert(x, 1);
        g.normalize();
        Ok(g)
    }

    /// `c^e` for a positive rational `c`.
    pub fn rational_pow(c: &Q, e: &Q) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::Domain("power of a non-positive rational".into()));
        }
        let mut g = GammaConst::one();
        for (sign, n) in [(1, c.numer()), (-1, c.denom())] {
            for (p, k) in factor_integer(n) {
                *g.primes.entry(p).or_insert_with(Q::zero) += e * q(sign * k as i64);
            }
        }
        g.normalize();
        Ok(g)
    }

    /// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
    pub fn beta(a: &Q, b: &Q) -> Result<Self> {
        let mut g = GammaConst::gamma(a.clone())?.mul(&GammaConst::gamma(b.clone())?);
        g = g.div(&GammaConst::gamma(a + b)?)?;
        Ok(g)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            *self = GammaConst::rational(Q::zero());
            return;
        }
        let old = core::mem::take(&mut self.gammas);
        for (x, e) in old {
            if e == 0 {
                continue;
            }
            let n = x.floor().to_integer().to_i64().unwrap();
            let f = &x - q(n);
            let mut factor = Q::one();
            if f.is_zero() {
                // Γ(n) = (n-1)!
                for k in 1..n {
                    factor *= q(k);
                }
            } else if n >= 0 {
                for k in 0..n {
                    factor *= &f + q(k);
                }
            } else {
                for k in 1..=(-n) {
                    factor /= &f - q(k);
                }
            }
            self.mantissa *= pow_q(&factor, e as i32);
            if f.is_zero() {
                continue;
            }
            if f == qr(1, 2) {
                self.pi += Q::new(BigInt::from(e), BigInt::from(2));
                continue;
            }
            if let Some((c, a2, a3)) = sin_pi(&f) {
                // Γ(f) = π / (sin(πf) Γ(1-f))
                self.pi += q(e);
                self.mantissa *= pow_q(&c, -e as i32);
                self.add_prime(BigInt::from(2), -(a2 * q(e)));
                self.add_prime(BigInt::from(3), -(a3 * q(e)));
                *self.gammas.entry(Q::one() - f).or_insert(0) -= e;
                continue;
            }
            *self.gammas.entry(f).or_insert(0) += e;
        }
        self.gammas.retain(|_, e| *e != 0);
        let primes = core::mem::take(&mut self.primes);
        for (p, e) in primes {
            let fl = e.floor();
            let frac = &e - &fl;
            self.mantissa *= pow_q(&Q::from_integer(p.clone()), fl.to_integer().to_i32().unwrap());
            if !frac.is_zero() {
                self.primes.insert(p, frac);
            }
        }
    }

    fn add_prime(&mut self, p: BigInt, e: Q) {
        if !e.is_zero() {
            *self.primes.entry(p).or_insert_with(Q::zero) += e;
        }
    }

    pub fn mul(&self, o: &GammaConst) -> GammaConst {
        let mut g = self.clone();
        g.mantissa *= &o.mantissa;
        g.pi += &o.pi;
        for (p, e) in &o.primes {
            g.add_prime(p.clone(), e.clone());
        }
        for (x, e) in &o.gammas {
            *g.gammas.entry(x.clone()).or_insert(0) += e;
        }
        g.normalize();
        g
    }

    pub fn scale(&self, c: &Q) -> GammaConst {
        let mut g = self.clone();
        g.mantissa *= c;
        g.normalize();
        g
    }

    pub fn inv(&self) -> Result<GammaConst> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero constant".into()));
        }
        let mut g = GammaConst::rational(self.mantissa.recip());
        g.pi = -&self.pi;
        for (p, e) in &self.primes {
            g.primes.insert(p.clone(), -e);
        }
        for (x, e) in &self.gammas {
            g.gammas.insert(x.clone(), -e);
        }
        g.normalize();
        Ok(g)
    }

    pub fn div(&self, o: &GammaConst) -> Result<GammaConst> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn eval(&self, bits: u32) -> Real {
        let g = bits + 32;
        let mut v = Real::from_q(&self.mantissa, g);
        for (p, e) in &self.primes {
            v = v.mul(&Real::from_q(&Q::from_integer(p.clone()), g).pow_q(e));
        }
        if !self.pi.is_zero() {
            v = v.mul(&Real::pi(g).pow_q(&self.pi));
        }
        for (x, e) in &self.gammas {
            v = v.mul(&Real::gamma(x, g).pow_q(&q(*e)));
        }
        v.to_bits(bits)
    }

    /// Key without mantissa and prime part.
    pub fn transcendental_key(&self) -> (Q, BTreeMap<Q, i64>) {
        (self.pi.clone(), self.gammas.clone())
    }
}

pub(crate) fn fmt_pow(f: &mut fmt::Formatter<'_>, base: &str, e: &Q) -> fmt::Result {
    if e.is_one() {
        write!(f, "{base}")
    } else {
        write!(f, "{base}^({})", fmt_q(e))
    }
}

impl fmt::Display for GammaConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q(&self.mantissa))?;
        for (p, e) in &self.primes {
            f.write_str("*")?;
            fmt_pow(f, &alloc::format!("{p}"), e)?;
        }
        if !self.pi.is_zero() {
            f.write_str("*")?;
            fmt_pow(f, "pi", &self.pi)?;
        }
        for (x, e) in &self.gammas {
            f.write_str("*")?;
            fmt_pow(f, &alloc::format!("Gamma({})", fmt_q(x)), &q(*e))?;
        }
        Ok(())
    }
}

pub fn gamma_key_string(pi: &Q, gammas: &BTreeMap<Q, i64>) -> String {
    struct K<'a>(&'a Q, &'a BTreeMap<Q, i64>);
    impl fmt::Display for K<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let mut first = true;
            if !self.0.is_zero() {
                fmt_pow(f, "pi", self.0)?;
                first = false;
            }
            for (x, e) in self.1 {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                fmt_pow(f, &alloc::format!("Gamma({})", fmt_q(x)), &q(*e))?;
            }
            if first {
                f.write_str("1")?;
            }
            Ok(())
        }
    }
    alloc::format!("{}", K(pi, gammas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::bits_for_digits;

    #[test]
    fn classic_values() {
        // B(1/2, 3/2) = π/2
        assert_eq!(GammaConst::beta(&qr(1, 2), &qr(3, 2)).unwrap(), GammaConst::pi_pow(q(1)).scale(&qr(1, 2)));
        // Γ(3/4) folds onto Γ(1/4)
        let g = GammaConst::gamma(qr(3, 4)).unwrap();
        assert_eq!(g.gammas.keys().next(), Some(&qr(1, 4)));
        let b = bits_for_digits(40);
        assert!(g.eval(b).to_sci(30).starts_with("1.22541670246517764512909830336"));
        assert_eq!(GammaConst::gamma(q(4)).unwrap(), GammaConst::rational(q(6)));
        // Γ(-1/2) = -2 √π
        assert_eq!(GammaConst::gamma(qr(-1, 2)).unwrap(), GammaConst::pi_pow(qr(1, 2)).scale(&q(-2)));
        let r = GammaConst::rational_pow(&q(8), &qr(1, 2)).unwrap();
        assert_eq!(r.mantissa, q(2));
        assert_eq!(r.primes.get(&BigInt::from(2)), Some(&qr(1, 2)));
    }
}
