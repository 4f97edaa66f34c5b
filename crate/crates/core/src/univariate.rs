//! Dense univariate polynomials over `Q`: square-free factorization, Sturm
//! sequences and real-root isolation.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{bail, Result};
use crate::poly::{fmt_q, q, Poly, Q};

/// Coefficients from degree 0 upwards, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UniPoly(Vec<Q>);

impl UniPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&x| q(x)).collect())
    }

    /// A polynomial in `v` only; other variables are an error.
    pub fn from_poly(p: &Poly, v: &str) -> Result<Self> {
        let mut c = Vec::new();
        for (m, a) in p.terms() {
            let (e, rest) = m.split_var(v);
            if rest.degree() > 0 {
                bail!(Domain, "polynomial {p} is not univariate in {v}");
            }
            let e = e as usize;
            if c.len() <= e {
                c.resize(e + 1, Q::zero());
            }
            c[e] += a;
        }
        Ok(UniPoly::new(c))
    }

    pub fn to_poly(&self, v: &str) -> Poly {
        let mut p = Poly::zero();
        for (i, c) in self.0.iter().enumerate() {
            p = &p + &Poly::var_pow(&crate::poly::var(v), i as u32).scale(c);
        }
        p
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Q) -> i32 {
        sign(&self.eval(x))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn scale(&self, c: &Q) -> UniPoly {
        UniPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> UniPoly {
        self.scale(&q(-1))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::default();
        }
        let mut c = alloc::vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let lc = d.leading();
        if r.len() <= dd {
            return (UniPoly::default(), self.clone());
        }
        let mut quo = alloc::vec![Q::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let t = &r[k + dd] / &lc;
            if !t.is_zero() {
                for (i, c) in d.0.iter().enumerate() {
                    r[k + i] -= &t * c;
                }
            }
            quo[k] = t;
        }
        r.truncate(dd);
        (UniPoly::new(quo), UniPoly::new(r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's algorithm: `self = c Π f_i^i` with square-free, pairwise coprime `f_i`.
    pub fn square_free(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = c.add(&b.derivative().neg());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.add(&b.derivative().neg());
            i += 1;
        }
        out
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.0.len().max(o.0.len());
        let z = Q::zero();
        UniPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn sturm(&self) -> Vec<UniPoly> {
        let mut s = alloc::vec![self.clone(), self.derivative()];
        while !s.last().unwrap().is_zero() {
            let n = s.len();
            let r = s[n - 2].rem(&s[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            s.push(r);
        }
        s.retain(|p| !p.is_zero());
        s
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> Q {
        let lc = self.leading().abs();
        let m = self.0.iter().rev().skip(1).map(|c| c.abs() / &lc).max().unwrap_or_else(Q::zero);
        m + Q::one()
    }
}

fn sign(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_changes(seq: &[UniPoly], x: &Q) -> usize {
    let mut last = 0;
    let mut n = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Number of distinct roots in `(a, b]` of the square-free polynomial behind `seq`.
pub fn count_roots(seq: &[UniPoly], a: &Q, b: &Q) -> usize {
    sign_changes(seq, a) - sign_changes(seq, b)
}

/// A root in the closed interval `[lo, hi]`; `lo == hi` marks an exact root.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootInterval {
    pub lo: Q,
    pub hi: Q,
    pub multiplicity: u32,
    /// The square-free factor this root belongs to.
    pub factor: UniPoly,
}

impl RootInterval {
    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / q(2)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Halve the interval, keeping the root. The root is never at `hi`
    /// unless the interval is exact, so the sign at `hi` decides.
    pub fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let m = self.midpoint();
        let sm = self.factor.sign_at(&m);
        if sm == 0 {
            self.lo = m.clone();
            self.hi = m;
        } else if sm == self.factor.sign_at(&self.hi) {
            self.hi = m;
        } else {
            self.lo = m;
        }
    }

    pub fn refine_to(&mut self, width: &Q) {
        while !self.is_exact() && &self.width() > width {
            self.bisect();
        }
    }

    pub fn overlaps(&self, o: &RootInterval) -> bool {
        !(self.hi < o.lo || o.hi < self.lo)
    }
}

impl fmt::Display for RootInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_q(&self.lo), fmt_q(&self.hi))
    }
}

fn isolate_squarefree(f: &UniPoly, mult: u32, out: &mut Vec<RootInterval>) {
    let seq = f.sturm();
    let b = f.root_bound();
    // Half-open brackets (lo, hi].
    let mut stack = alloc::vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match count_roots(&seq, &lo, &hi) {
            0 => {}
            1 if f.sign_at(&hi) == 0 => {
                out.push(RootInterval { lo: hi.clone(), hi, multiplicity: mult, factor: f.clone() })
            }
            1 => out.push(RootInterval { lo, hi, multiplicity: mult, factor: f.clone() }),
            _ => {
                let m = (&lo + &hi) / q(2);
                stack.push((lo, m.clone()));
                stack.push((m, hi));
            }
        }
    }
}

/// Isolating intervals for every distinct real root, sorted and disjoint.
pub fn isolate_real_roots(p: &UniPoly) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        bail!(Domain, "cannot isolate the roots of the zero polynomial");
    }
    let mut out = Vec::new();
    for (f, m) in p.square_free() {
        isolate_squarefree(&f, m, &mut out);
    }
    // Roots of different factors are distinct; refine until disjoint.
    loop {
        out.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
        let mut clash = None;
        for i in 1..out.len() {
            if out[i - 1].overlaps(&out[i]) {
                clash = Some(i);
                break;
            }
        }
        match clash {
            None => break,
            Some(i) => {
                if out[i - 1].is_exact() && out[i].is_exact() {
                    unreachable!("coprime factors share the root {}", out[i].lo);
                }
                out[i - 1].bisect();
                out[i].bisect();
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qr;

    #[test]
    fn sqrt2() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let rs = isolate_real_roots(&p).unwrap();
        assert_eq!(rs.len(), 2);
        for mut r in rs {
            r.refine_to(&qr(1, 1 << 20));
            let m = r.midpoint();
            assert!((&m * &m - q(2)).abs() < qr(1, 1000));
        }
    }

    #[test]
    fn multiplicity_and_exact_roots() {
        // (r - 1)^2 (r + 2)
        let p = UniPoly::from_ints(&[2, -3, 0, 1]);
        let rs = isolate_real_roots(&p).unwrap();
        assert_eq!(rs.len(), 2);
        let one = rs.iter().find(|r| r.lo <= q(1) && q(1) <= r.hi).unwrap();
        assert_eq!(one.multiplicity, 2);
        // x (x - 1) (x + 1) has exact dyadic roots.
        let rs = isolate_real_roots(&UniPoly::from_ints(&[0, -1, 0, 1])).unwrap();
        assert_eq!(rs.len(), 3);
    }

    #[test]
    fn yun() {
        let p = UniPoly::from_ints(&[-1, 1]).mul(&UniPoly::from_ints(&[-1, 1])).mul(&UniPoly::from_ints(&[1, 0, 1]));
        let sf = p.square_free();
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[1].1, 2);
    }
}
