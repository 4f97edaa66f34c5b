//! Sparse multivariate polynomials over Q in graded-lex order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

pub type Q = BigRational;
pub type Var = Arc<str>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn var(name: &str) -> Var {
    Arc::from(name)
}

/// Power product; exponents are positive and variables strictly ascending.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: &Var, e: u32) -> Self {
        let mut m = Monomial::one();
        if e > 0 {
            m.0.push((v.clone(), e));
        }
        m
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(it: I) -> Self {
        let mut m = Monomial::one();
        for (v, e) in it {
            m = m.mul(&Monomial::var(&v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exp(&self, v: &str) -> u32 {
        self.0.iter().find(|(w, _)| &**w == v).map_or(0, |(_, e)| *e)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Var, u32)> {
        self.0.iter().map(|(v, e)| (v, *e))
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        Monomial(out)
    }

    /// `self / o` if `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out: SmallVec<[(Var, u32); 4]> = SmallVec::new();
        let mut j = 0;
        for (v, e) in self.0.iter() {
            if j < o.0.len() && o.0[j].0 < *v {
                return None;
            }
            if j < o.0.len() && o.0[j].0 == *v {
                let f = o.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Drops `v`, returning its exponent.
    pub fn split_var(&self, v: &str) -> (u32, Monomial) {
        let mut rest = self.clone();
        let mut e = 0;
        rest.0.retain(|(w, f)| {
            if &**w == v {
                e = *f;
                false
            } else {
                true
            }
        });
        (e, rest)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        match self.degree().cmp(&o.degree()) {
            Ordering::Equal => {}
            c => return c,
        }
        let (a, b) = (&self.0, &o.0);
        let mut i = 0;
        while i < a.len() && i < b.len() {
            match a[i].0.cmp(&b[i].0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a[i].1.cmp(&b[i].1) {
                    Ordering::Equal => i += 1,
                    c => return c,
                },
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(q(n))
    }

    pub fn var(name: &str) -> Self {
        Poly::term(Monomial::var(&var(name), 1), Q::one())
    }

    pub fn var_pow(v: &Var, e: u32) -> Self {
        Poly::term(Monomial::var(v, e), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_default()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &str) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.pairs().map(|(v, _)| v.clone())).collect()
    }

    pub fn contains_var(&self, v: &str) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            if e > 0 {
                let vv = m.pairs().find(|(w, _)| &***w == v).unwrap().0.clone();
                out.add_term(rest.mul(&Monomial::var(&vv, e - 1)), c * q(e as i64));
            }
        }
        out
    }

    /// Coefficients with respect to `v`: `self = Σ out[k] v^k`.
    pub fn coeffs_in(&self, v: &str) -> Vec<Poly> {
        let mut out = alloc::vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: &Var, cs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in cs.iter().enumerate() {
            let m = Monomial::var(v, k as u32);
            for (n, a) in &c.terms {
                out.add_term(n.mul(&m), a.clone());
            }
        }
        out
    }

    pub fn substitute(&self, v: &str, value: &Poly) -> Poly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        let mut acc = Poly::zero();
        for c in cs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    pub fn eval_partial(&self, vals: &BTreeMap<Var, Q>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut k = c.clone();
            let mut rest = Monomial::one();
            for (v, e) in m.pairs() {
                match vals.get(v) {
                    Some(x) => k *= pow_q(x, e as i32),
                    None => rest = rest.mul(&Monomial::var(v, e)),
                }
            }
            out.add_term(rest, k);
        }
        out
    }

    /// Full evaluation; `None` if some variable has no value.
    pub fn eval(&self, vals: &BTreeMap<Var, Q>) -> Option<Q> {
        self.eval_partial(vals).constant_value()
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut r = self.clone();
        let mut quo = Poly::zero();
        while let Some((rm, rc)) = r.leading() {
            let m = rm.div(dm)?;
            let c = rc / dc;
            r = &r - &d.mul_monomial(&m, &c);
            quo.add_term(m, c);
        }
        Some(quo)
    }

    /// Positive rational `c` with `self / c` integral with coprime coefficients.
    pub fn content(&self) -> Q {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Q::one();
        }
        Q::new(num, den)
    }

    /// `self / content`, sign untouched.
    pub fn primitive(&self) -> (Q, Poly) {
        let c = self.content();
        (c.clone(), self.scale(&c.recip()))
    }

    /// Integral primitive associate with positive leading coefficient.
    pub fn normalized(&self) -> (Q, Poly) {
        let (mut c, mut p) = self.primitive();
        if p.leading().is_some_and(|(_, k)| k.is_negative()) {
            p = -p;
            c = -c;
        }
        (c, p)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Q) -> Q) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Rename a variable.
    pub fn rename(&self, from: &str, to: &Var) -> Poly {
        self.substitute(from, &Poly::var_pow(to, 1))
    }

    pub fn to_string_sorted(&self) -> String {
        alloc::format!("{self}")
    }
}

pub fn pow_q(x: &Q, e: i32) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

impl From<Q> for Poly {
    fn from(c: Q) -> Self {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Self {
        Poly::int(c)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &o.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly {
                (&self).$f(&o)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: &Poly) -> Poly {
                (&self).$f(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        alloc::format!("{}", c.numer())
    } else {
        alloc::format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_q(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_q(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var("x")
    }
    fn y() -> Poly {
        Poly::var("y")
    }

    #[test]
    fn grlex_order() {
        let xv = var("x");
        let yv = var("y");
        let x2 = Monomial::var(&xv, 2);
        let xy = Monomial::var(&xv, 1).mul(&Monomial::var(&yv, 1));
        let y2 = Monomial::var(&yv, 2);
        let y3 = Monomial::var(&yv, 3);
        assert!(x2 > xy && xy > y2 && y3 > x2);
    }

    #[test]
    fn ring_identities() {
        let a = &(&x() + &y()) * &x();
        let b = &x() - &Poly::int(2);
        let lhs = &(&a + &b) * &b;
        let rhs = &(&a * &b) + &(&b * &b);
        assert_eq!(lhs, rhs);
        assert_eq!((&a - &a), Poly::zero());
        assert_eq!(b.pow(3), &(&b * &b) * &b);
    }

    #[test]
    fn division_and_content() {
        let a = &(&x() + &y()) * &(&x() - &y());
        assert_eq!(a.div_exact(&(&x() - &y())), Some(&x() + &y()));
        assert_eq!(a.div_exact(&(&x() + &Poly::int(1))), None);
        let p = (&x() * &Poly::constant(qr(3, 2))) + Poly::constant(qr(9, 4));
        assert_eq!(p.content(), qr(3, 4));
    }

    #[test]
    fn substitution_and_display() {
        let p = &x().pow(2) + &y();
        let s = p.substitute("x", &(&y() + &Poly::int(1)));
        assert_eq!(s, &(&y().pow(2) + &y().scale(&q(3))) + &Poly::int(1));
        assert_eq!(alloc::format!("{}", &x().scale(&qr(-1, 2)) + &Poly::int(3)), "-1/2*x + 3");
        assert_eq!(p.derivative("x"), x().scale(&q(2)));
    }
}
