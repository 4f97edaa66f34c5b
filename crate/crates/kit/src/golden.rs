//! Reference values in ASCII expression syntax, and exact-then-numeric
//! comparison against computed objects.
//!
//! ```text
//! # comment
//! assume h02 = 1/2          # substituted into every reference value
//! let l3 = -5*pi/64         # definition only, referenced as {l3}
//! b3 = {l3}*(... )          # a checked key
//! erratum l6 = 33*pi/8192 ; why the printed value cannot be right
//! ```
//!
//! A key whose printed form disagrees is re-checked with the errata
//! substituted; it passes as `Erratum` only if the corrected form matches.

use std::collections::{BTreeMap, BTreeSet};

use melnikov_core::bigfloat::Real;
use melnikov_core::mixed::GammaRad;
use melnikov_core::parse::parse_expr;
use melnikov_core::poly::{var, Var, Q};
use melnikov_core::radical::RadExpr;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{KitError, Result};

#[derive(Clone, Debug)]
pub struct Def {
    pub printed: String,
    pub erratum: Option<(String, String)>,
    pub line: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Golden {
    pub defs: BTreeMap<String, Def>,
    /// Checked keys in file order.
    pub keys: Vec<String>,
    pub assume: BTreeMap<Var, Q>,
}

fn is_key(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Golden {
    pub fn parse(text: &str) -> Result<Golden> {
        let mut g = Golden::default();
        for (no, raw) in text.lines().enumerate() {
            let no = no + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, rhs) = line.split_once('=').ok_or_else(|| KitError::input(no, "expected `key = value`"))?;
            let rhs = rhs.trim();
            let words: Vec<&str> = head.split_whitespace().collect();
            match words.as_slice() {
                ["assume", name] if is_key(name) => {
                    let v = parse_expr(rhs, None)
                        .ok()
                        .and_then(|e| as_q(&e))
                        .ok_or_else(|| KitError::input(no, "assume needs a rational value"))?;
                    g.assume.insert(var(name), v);
                }
                ["erratum", name] if is_key(name) => {
                    let (expr, note) =
                        rhs.split_once(';').ok_or_else(|| KitError::input(no, "erratum needs `; reason`"))?;
                    let d = g
                        .defs
                        .get_mut(*name)
                        .ok_or_else(|| KitError::input(no, format!("erratum for unknown key `{name}`")))?;
                    d.erratum = Some((expr.trim().to_string(), note.trim().to_string()));
                }
                [kw, name] if *kw == "let" && is_key(name) => g.insert(name, rhs, no, false)?,
                [name] if is_key(name) => g.insert(name, rhs, no, true)?,
                _ => return Err(KitError::input(no, format!("bad key `{}`", head.trim()))),
            }
        }
        Ok(g)
    }

    fn insert(&mut self, name: &str, rhs: &str, line: usize, checked: bool) -> Result<()> {
        if self.defs.contains_key(name) {
            return Err(KitError::input(line, format!("duplicate key `{name}`")));
        }
        self.defs.insert(name.to_string(), Def { printed: rhs.to_string(), erratum: None, line });
        if checked {
            self.keys.push(name.to_string());
        }
        Ok(())
    }

    pub fn has(&self, key: &str) -> bool {
        self.defs.contains_key(key)
    }

    /// Text of `key` with `{refs}` expanded, and the errata notes used.
    pub fn expand(&self, key: &str, errata: bool) -> Result<(String, Vec<String>)> {
        let mut notes = Vec::new();
        let s = self.expand_inner(key, errata, &mut notes, 0)?;
        Ok((s, notes))
    }

    fn expand_inner(&self, key: &str, errata: bool, notes: &mut Vec<String>, depth: usize) -> Result<String> {
        let d = self.defs.get(key).ok_or_else(|| KitError::Usage(format!("no reference value `{key}`")))?;
        if depth > 32 {
            return Err(KitError::input(d.line, "reference cycle"));
        }
        let text = match (&d.erratum, errata) {
            (Some((e, note)), true) => {
                notes.push(format!("{key}: {note}"));
                e
            }
            _ => &d.printed,
        };
        let mut out = String::new();
        let mut rest = text.as_str();
        while let Some(i) = rest.find('{') {
            out.push_str(&rest[..i]);
            let j = rest[i..].find('}').ok_or_else(|| KitError::input(d.line, "unclosed `{`"))? + i;
            let inner = self.expand_inner(&rest[i + 1..j], errata, notes, depth + 1)?;
            out.push('(');
            out.push_str(&inner);
            out.push(')');
            rest = &rest[j + 1..];
        }
        out.push_str(rest);
        Ok(out)
    }

    pub fn value(&self, key: &str, errata: bool) -> Result<(GammaRad, Vec<String>)> {
        let (s, notes) = self.expand(key, errata)?;
        let line = self.defs[key].line;
        let v = parse_expr(&s, None).map_err(|e| KitError::input(line, format!("`{key}`: {e}")))?;
        Ok((v.eval_partial(&self.assume)?, notes))
    }

    /// Errata-resolved value, for use in further computation.
    pub fn resolved(&self, key: &str) -> Result<GammaRad> {
        Ok(self.value(key, true)?.0)
    }

    pub fn integer(&self, key: &str) -> Result<i64> {
        let d = self.defs.get(key).ok_or_else(|| KitError::Usage(format!("no reference value `{key}`")))?;
        d.printed.trim().parse().map_err(|_| KitError::input(d.line, format!("`{key}` must be an integer")))
    }
}

fn as_q(g: &GammaRad) -> Option<Q> {
    if g.is_zero() {
        return Some(Q::from_integer(0.into()));
    }
    let (k, r) = g.single_term()?;
    if k.is_one() {
        r.constant_value()
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Agreement {
    Exact,
    /// Exact difference did not simplify to zero, but the values agree to
    /// this relative error at a random rational point.
    Numeric(f64),
    Differs(String),
}

impl Agreement {
    pub fn ok(&self) -> bool {
        !matches!(self, Agreement::Differs(_))
    }
}

pub const NUMERIC_BITS: u32 = 320;
pub const NUMERIC_TOL_DIGITS: u32 = 50;

fn rad_vars(r: &RadExpr, out: &mut BTreeSet<Var>) {
    for (_, f) in r.terms() {
        out.extend(f.numer().vars());
        out.extend(f.denom().vars());
    }
    for b in r.radical_bases() {
        out.extend(b.vars());
    }
}

pub fn symbols(g: &GammaRad) -> BTreeSet<Var> {
    let mut s = BTreeSet::new();
    for (_, r) in g.terms() {
        rad_vars(r, &mut s);
    }
    s
}

/// A random point with small rational coordinates at which both sides are
/// real and finite.
fn numeric_point(a: &GammaRad, b: &GammaRad, seed: u64) -> Option<(Real, Real)> {
    let mut vs = symbols(a);
    vs.extend(symbols(b));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let pt: BTreeMap<Var, Q> = vs
            .iter()
            .map(|v| {
                let n: i64 = rng.gen_range(1..=40) * if rng.gen_bool(0.5) { 1 } else { -1 };
                (v.clone(), Q::new(BigInt::from(n), BigInt::from(rng.gen_range(3..=11))))
            })
            .collect();
        if let (Some(x), Some(y)) = (a.eval(&pt, NUMERIC_BITS), b.eval(&pt, NUMERIC_BITS)) {
            return Some((x, y));
        }
    }
    None
}

pub fn compare(computed: &GammaRad, reference: &GammaRad, seed: u64) -> Agreement {
    if computed.sub(reference).is_zero() {
        return Agreement::Exact;
    }
    let Some((x, y)) = numeric_point(computed, reference, seed) else {
        return Agreement::Differs("no real evaluation point found".into());
    };
    let diff = x.sub(&y).abs();
    let scale = if x.abs().cmp_real(&y.abs()).is_ge() { x.abs() } else { y.abs() };
    let tol = Real::from_q(&Q::new(BigInt::from(1), BigInt::from(10).pow(NUMERIC_TOL_DIGITS)), NUMERIC_BITS);
    if diff.is_zero() || (!scale.is_zero() && diff.cmp_real(&scale.mul(&tol)).is_le()) {
        let rel = if scale.is_zero() { 0.0 } else { diff.div(&scale).to_f64() };
        Agreement::Numeric(rel)
    } else {
        let rel = if scale.is_zero() { f64::INFINITY } else { diff.div(&scale).to_f64() };
        Agreement::Differs(format!("relative difference {rel:.3e} at a random point"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn references_and_errata() {
        let g = Golden::parse("let a = 3\nb = {a}*x\nerratum a = 4 ; misprint\nassume y = 2\nc = x*y\ncycles = 6\n")
            .unwrap();
        assert_eq!(g.keys, ["b", "c", "cycles"]);
        assert_eq!(g.expand("b", false).unwrap().0, "(3)*x");
        let (v, notes) = g.value("b", true).unwrap();
        assert_eq!(notes.len(), 1);
        assert_eq!(v, parse_expr("4*x", None).unwrap());
        assert_eq!(g.value("c", false).unwrap().0, parse_expr("2*x", None).unwrap());
        assert_eq!(g.integer("cycles").unwrap(), 6);
        assert!(Golden::parse("b = 1\nb = 2").is_err());
        assert!(Golden::parse("erratum z = 1 ; no").is_err());
    }

    #[test]
    fn comparison() {
        let a = parse_expr("sqrt(2)*x/(1 + x^2)", None).unwrap();
        assert_eq!(compare(&a, &a.clone(), 1), Agreement::Exact);
        let b = parse_expr("sqrt(2)*x/(1 + x^2) + 10^(-60)", None).unwrap();
        assert!(matches!(compare(&a, &b, 1), Agreement::Numeric(_)));
        let c = parse_expr("sqrt(2)*x/(1 + x^2) + 10^(-40)", None).unwrap();
        assert!(!compare(&a, &c, 1).ok());
    }
}
