//! ASCII expressions: `2*Gamma(5/4)*sqrt(2*pi)/(B - 2*A^2)^(1/4)*c00`.
//!
//! Grammar: `+ - * /`, `^` with an integer or parenthesised rational
//! exponent, `sqrt(e)`, `Gamma(q)` for rational `q`, the constant `pi`,
//! integer and decimal literals, and identifiers as parameters.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::gamma::GammaConst;
use crate::mixed::GammaRad;
use crate::poly::{q, Poly, Q};
use crate::radical::RadExpr;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.offset + 1, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && b.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            let text = &s[start..i];
            out.push((
                start,
                Tok::Num(decimal(text).ok_or_else(|| err(start, alloc::format!("bad number `{text}`")))?),
            ));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(i, alloc::format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn decimal(t: &str) -> Option<Q> {
    let (int, frac) = match t.split_once('.') {
        Some((a, b)) => (a, b),
        None => (t, ""),
    };
    if frac.contains('.') {
        return None;
    }
    let digits: String = [int, frac].concat();
    let n: BigInt = digits.parse().ok()?;
    Some(Q::new(n, BigInt::from(10u32).pow(frac.len() as u32)))
}

fn err(offset: usize, message: String) -> ParseError {
    ParseError { offset, message }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    symbols: Option<&'a BTreeSet<String>>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.offset(), alloc::format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<GammaRad, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<GammaRad, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.offset();
                self.pos += 1;
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(err(at, "division by zero".into()));
                }
                acc = acc.div(&d).map_err(|e| err(at, e.to_string()))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<GammaRad, ParseError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<GammaRad, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        let at = self.offset();
        self.pos += 1;
        let neg = self.eat('-');
        let mut e = self.rational_atom()?;
        if neg {
            e = -e;
        }
        base.pow_q(&e).map_err(|x| err(at, x.to_string()))
    }

    /// A literal integer or a parenthesised constant rational.
    fn rational_atom(&mut self) -> Result<Q, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(n)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                as_rational(&v).ok_or_else(|| err(at, "exponent must be a rational constant".into()))
            }
            _ => Err(err(at, "expected an exponent".into())),
        }
    }

    fn atom(&mut self) -> Result<GammaRad, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(GammaRad::from_rad(RadExpr::from_q(n)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "pi" => Ok(GammaRad::from_const(&GammaConst::pi_pow(q(1)))),
                    "sqrt" => {
                        self.expect('(')?;
                        let v = self.expr()?;
                        self.expect(')')?;
                        v.pow_q(&Q::new(BigInt::one(), BigInt::from(2))).map_err(|e| err(at, e.to_string()))
                    }
                    "Gamma" => {
                        self.expect('(')?;
                        let v = self.expr()?;
                        self.expect(')')?;
                        let x = as_rational(&v).ok_or_else(|| err(at, "Gamma takes a rational constant".into()))?;
                        let g = GammaConst::gamma(x).map_err(|e| err(at, e.to_string()))?;
                        Ok(GammaRad::from_const(&g))
                    }
                    _ => {
                        if self.peek() == Some(&Tok::Op('(')) {
                            return Err(err(at, alloc::format!("unknown function `{name}`")));
                        }
                        if let Some(s) = self.symbols {
                            if !s.contains(&name) {
                                return Err(err(at, alloc::format!("undeclared symbol `{name}`")));
                            }
                        }
                        Ok(GammaRad::from_rad(RadExpr::var(&name)))
                    }
                }
            }
            Some(Tok::Op(c)) => Err(err(at, alloc::format!("unexpected `{c}`"))),
            None => Err(err(at, "unexpected end of expression".into())),
        }
    }
}

fn as_rational(v: &GammaRad) -> Option<Q> {
    if v.is_zero() {
        return Some(Q::zero());
    }
    let (k, r) = v.single_term()?;
    if !k.is_one() {
        return None;
    }
    r.constant_value()
}

/// Parse an expression; with `symbols`, any other identifier is an error.
pub fn parse_expr(s: &str, symbols: Option<&BTreeSet<String>>) -> Result<GammaRad, ParseError> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, end: s.len(), symbols };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(p.offset(), "trailing input".into()));
    }
    Ok(v)
}

/// Parse an expression that must be a polynomial with rational coefficients.
pub fn parse_poly(s: &str, symbols: Option<&BTreeSet<String>>) -> Result<Poly, ParseError> {
    let v = parse_expr(s, symbols)?;
    if v.is_zero() {
        return Ok(Poly::zero());
    }
    let poly = v
        .single_term()
        .filter(|(k, _)| k.is_one())
        .and_then(|(_, r)| r.as_ratfunc())
        .and_then(|r| r.as_poly().cloned());
    poly.ok_or_else(|| err(0, "not a polynomial with rational coefficients".into()))
}

/// Parse an expression free of `pi` and `Gamma`.
pub fn parse_rad(s: &str, symbols: Option<&BTreeSet<String>>) -> Result<RadExpr, ParseError> {
    let v = parse_expr(s, symbols)?;
    if v.is_zero() {
        return Ok(RadExpr::zero());
    }
    match v.single_term() {
        Some((k, r)) if k.is_one() => Ok(r.clone()),
        _ => Err(err(0, "transcendental constants are not allowed here".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qr;

    #[test]
    fn polynomials() {
        let p = parse_poly("1/2*y^2 + 2*A*x^2*y - (x - 1)^2", None).unwrap();
        let want = &(&Poly::var("y").pow(2).scale(&qr(1, 2))
            + &(&Poly::var("A") * &(&Poly::var("x").pow(2) * &Poly::var("y"))).scale(&q(2)))
            - &(&Poly::var("x") - &Poly::int(1)).pow(2);
        assert_eq!(p, want);
        assert_eq!(parse_poly("0.25*x", None).unwrap(), Poly::var("x").scale(&qr(1, 4)));
    }

    #[test]
    fn constants_round_trip() {
        let a = parse_expr("2*Gamma(5/4)*sqrt(2*pi)/(Gamma(7/4)*(B - 2*A^2)^(1/4))*c00", None).unwrap();
        let b = parse_expr(&a.to_string(), None).unwrap();
        assert_eq!(a, b);
        let s = parse_expr("sqrt(3)^2 - 3", None).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn diagnostics() {
        let syms: BTreeSet<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let e = parse_poly("x + 2*z", Some(&syms)).unwrap_err();
        assert_eq!(e.offset, 6);
        assert!(e.message.contains("undeclared"));
        assert!(parse_expr("x +", None).is_err());
        assert!(parse_expr("x $ y", None).is_err());
        assert!(parse_expr("x^y", None).is_err());
    }
}
