//! Polynomials in the phase variables `(x, y)` over the radical field.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use crate::error::Result;
use crate::poly::{Monomial, Poly, Q};
use crate::radical::RadExpr;
use crate::ratfunc::RatFunc;

#[derive(Clone, PartialEq, Default, Debug)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), RadExpr>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: RadExpr) -> Self {
        BiPoly::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: RadExpr) -> Self {
        let mut b = BiPoly::zero();
        b.add_term(i, j, c);
        b
    }

    pub fn x() -> Self {
        BiPoly::monomial(1, 0, RadExpr::one())
    }

    pub fn y() -> Self {
        BiPoly::monomial(0, 1, RadExpr::one())
    }

    /// Split a polynomial in `x`, `y` and parameters.
    pub fn from_poly(p: &Poly, x: &str, y: &str) -> Self {
        let mut acc: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
        for (m, c) in p.terms() {
            let (i, rest) = m.split_var(x);
            let (j, rest) = rest.split_var(y);
            acc.entry((i, j)).or_default().add_term(rest, c.clone());
        }
        let mut b = BiPoly::zero();
        for ((i, j), c) in acc {
            b.add_term(i, j, RadExpr::from_poly(c));
        }
        b
    }

    /// Inverse of `from_poly`, when all coefficients are polynomial.
    pub fn to_poly(&self, x: &str, y: &str) -> Option<Poly> {
        let (xv, yv) = (crate::poly::var(x), crate::poly::var(y));
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            let r = c.as_ratfunc()?;
            let p = r.as_poly()?;
            let m = Monomial::var(&xv, i).mul(&Monomial::var(&yv, j));
            out = &out + &p.mul_monomial(&m, &num_traits::One::one());
        }
        Some(out)
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: RadExpr) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&(i, j)) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert((i, j), s);
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> RadExpr {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &RadExpr)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0)
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Q) -> BiPoly {
        self.map(|r| r.scale(c))
    }

    pub fn mul_rad(&self, c: &RadExpr) -> BiPoly {
        self.map(|r| r.mul(c))
    }

    pub fn map(&self, f: impl Fn(&RadExpr) -> RadExpr) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, f(c));
        }
        out
    }

    pub fn try_map(&self, f: impl Fn(&RadExpr) -> Result<RadExpr>) -> Result<BiPoly> {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, f(c)?);
        }
        Ok(out)
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &o.terms {
                out.add_term(i + k, j + l, a.mul(b));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::constant(RadExpr::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn dx(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                out.add_term(i - 1, j, c.scale(&crate::poly::q(i as i64)));
            }
        }
        out
    }

    pub fn dy(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                out.add_term(i, j - 1, c.scale(&crate::poly::q(j as i64)));
            }
        }
        out
    }

    /// `self(X, Y)`.
    pub fn compose(&self, xs: &BiPoly, ys: &BiPoly) -> BiPoly {
        let mut xp = alloc::vec![BiPoly::constant(RadExpr::one())];
        let mut yp = alloc::vec![BiPoly::constant(RadExpr::one())];
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            while xp.len() <= i as usize {
                let n = xp.last().unwrap().mul(xs);
                xp.push(n);
            }
            while yp.len() <= j as usize {
                let n = yp.last().unwrap().mul(ys);
                yp.push(n);
            }
            out = out.add(&xp[i as usize].mul(&yp[j as usize]).mul_rad(c));
        }
        out
    }

    /// Substitute a rational function for a parameter in every coefficient.
    pub fn substitute(&self, v: &str, value: &RatFunc) -> Result<BiPoly> {
        self.try_map(|c| c.substitute(v, value))
    }

    pub fn eval_partial(&self, vals: &BTreeMap<crate::poly::Var, Q>) -> Result<BiPoly> {
        self.try_map(|c| c.eval_partial(vals))
    }

    pub fn display(&self, x: &str, y: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (&(i, j), c) in self.terms.iter() {
            if !s.is_empty() {
                s.push_str(" + ");
            }
            s.push_str(&alloc::format!("({c})"));
            if i > 0 {
                s.push_str(&alloc::format!("*{x}^{i}"));
            }
            if j > 0 {
                s.push_str(&alloc::format!("*{y}^{j}"));
            }
        }
        s
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display("x", "y"))
    }
}
