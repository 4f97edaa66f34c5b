//! Declarative system files.
//!
//! ```text
//! # nilpotent center form
//! param A B
//! H = 1/2*y^2 + 2*A*x^2*y + 1/2*y^3 + B*x^4 + A*x^2*y^2 + 1/8*y^4
//! div = c00 + c10*x + c01*y + c20*x^2 + c11*x*y + c02*y^2
//! positive = B - 2*A^2
//! ```
//!
//! `p =` / `q =` may replace `div =`. Symbols in the perturbation that are
//! not parameters become perturbation parameters unless a `delta` line
//! lists them explicitly. With `symmetric = true` the Hamiltonian is given
//! by its coefficients `h20 h11 h02 h40 h31 h22` (missing ones stay
//! symbolic); `h04` and `h13` are then fixed by the singular points at
//! `(0, ±1)` and may only be given if consistent.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use melnikov_core::bipoly::BiPoly;
use melnikov_core::melnikov::{CenterKind, SystemSpec};
use melnikov_core::normal_form::{elementary_normal_form, nilpotent_normal_form, NormalForm, SymmetricSystem};
use melnikov_core::parse::{parse_poly, ParseError};
use melnikov_core::poly::{fmt_q, var, Poly, Var, Q};

use crate::error::{KitError, Result};

const SYMMETRIC_KEYS: [&str; 8] = ["h20", "h11", "h02", "h40", "h31", "h22", "h04", "h13"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    Elementary,
    Nilpotent,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Hamiltonian(Poly),
    Symmetric { sys: SymmetricSystem, normalize: Option<Normalization> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemFile {
    pub vars: [String; 2],
    pub params: Vec<String>,
    pub deltas: Vec<String>,
    pub body: Body,
    pub divergence: Poly,
    pub omega: Option<Q>,
    pub kind: CenterKind,
    pub positive: Vec<Poly>,
}

struct Line<'a> {
    no: usize,
    key: &'a str,
    value: &'a str,
    /// Byte offset of `value` within the raw line.
    col: usize,
}

fn diag(line: &Line, e: ParseError) -> KitError {
    KitError::input(line.no, format!("`{}`: column {}: {}", line.key, line.col + e.offset + 1, e.message))
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn declared(vars: &[String; 2], params: &[String], extra: &[String]) -> BTreeSet<String> {
    vars.iter().chain(params).chain(extra).cloned().collect()
}

fn poly_symbols(p: &Poly) -> BTreeSet<String> {
    p.vars().into_iter().map(|v| v.to_string()).collect()
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<SystemFile> {
        let mut vars = ["x".to_string(), "y".to_string()];
        let mut params: Vec<String> = Vec::new();
        let mut deltas: Option<Vec<String>> = None;
        let mut lines: Vec<Line> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let no = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let trimmed = body.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some((key, value)) = body.split_once('=') {
                let col = key.len() + 1 + (value.len() - value.trim_start().len());
                lines.push(Line { no, key: key.trim(), value: value.trim(), col });
                continue;
            }
            let mut words = trimmed.split_whitespace();
            let head = words.next().unwrap();
            let rest: Vec<String> = words.map(str::to_string).collect();
            for w in &rest {
                if !is_ident(w) {
                    return Err(KitError::input(no, format!("`{w}` is not a valid symbol name")));
                }
            }
            match head {
                "param" | "params" => params.extend(rest),
                "delta" | "deltas" => deltas.get_or_insert_with(Vec::new).extend(rest),
                "vars" => {
                    if rest.len() != 2 {
                        return Err(KitError::input(no, "`vars` takes exactly two names"));
                    }
                    vars = [rest[0].clone(), rest[1].clone()];
                }
                _ => {
                    return Err(KitError::input(
                        no,
                        format!("expected `key = value` or a declaration, found `{trimmed}`"),
                    ))
                }
            }
        }
        for name in params.iter().chain(deltas.iter().flatten()) {
            if vars.contains(name) || ["pi", "Gamma", "sqrt"].contains(&name.as_str()) {
                return Err(KitError::input(0, format!("`{name}` is reserved")));
            }
        }

        let mut seen = BTreeMap::new();
        for l in &lines {
            if l.key != "positive" {
                if let Some(prev) = seen.insert(l.key, l.no) {
                    return Err(KitError::input(l.no, format!("`{}` already set on line {prev}", l.key)));
                }
            }
        }
        let get = |k: &str| lines.iter().find(|l| l.key == k);

        let symmetric = match get("symmetric") {
            None => false,
            Some(l) => match l.value {
                "true" => true,
                "false" => false,
                _ => return Err(KitError::input(l.no, "`symmetric` must be true or false")),
            },
        };

        let h_syms = declared(&vars, &params, &[]);

        let body = if symmetric {
            if let Some(l) = get("H") {
                return Err(KitError::input(
                    l.no,
                    "a symmetric system is given by its coefficients h20 ... h22, not by H",
                ));
            }
            let coeff_syms: BTreeSet<String> = params.iter().cloned().collect();
            let mut sys = SymmetricSystem::generic();
            let mut implicit = Vec::new();
            for key in &SYMMETRIC_KEYS[..6] {
                match get(key) {
                    Some(l) => {
                        let p = parse_poly(l.value, Some(&coeff_syms)).map_err(|e| diag(l, e))?;
                        *slot(&mut sys, key) = p;
                    }
                    None => implicit.push(key.to_string()),
                }
            }
            for (key, want) in [("h04", sys.h04()), ("h13", sys.h13())] {
                if let Some(l) = get(key) {
                    let mut syms = coeff_syms.clone();
                    syms.extend(implicit.iter().cloned());
                    let p = parse_poly(l.value, Some(&syms)).map_err(|e| diag(l, e))?;
                    if p != want {
                        return Err(KitError::input(
                            l.no,
                            format!("constraint violation: singular points at (0, ±1) force {key} = {want}, got {p}"),
                        ));
                    }
                }
            }
            for k in implicit {
                if !params.contains(&k) {
                    params.push(k);
                }
            }
            let normalize = match get("normalize") {
                None => None,
                Some(l) => Some(match l.value {
                    "elementary" => Normalization::Elementary,
                    "nilpotent" => Normalization::Nilpotent,
                    _ => return Err(KitError::input(l.no, "`normalize` must be elementary or nilpotent")),
                }),
            };
            Body::Symmetric { sys, normalize }
        } else {
            for key in SYMMETRIC_KEYS.iter().chain(["normalize"].iter()) {
                if let Some(l) = get(key) {
                    return Err(KitError::input(l.no, format!("`{key}` needs `symmetric = true`")));
                }
            }
            let l = get("H").ok_or_else(|| KitError::input(0, "missing `H = ...`"))?;
            Body::Hamiltonian(parse_poly(l.value, Some(&h_syms)).map_err(|e| diag(l, e))?)
        };

        // Perturbation: explicit deltas are enforced, otherwise collected.
        let pert_syms: Option<BTreeSet<String>> = deltas.as_ref().map(|d| declared(&vars, &params, d));
        let parse_pert = |l: &Line| parse_poly(l.value, pert_syms.as_ref()).map_err(|e| diag(l, e));
        let (x, y) = (vars[0].as_str(), vars[1].as_str());
        let divergence = match (get("div"), get("p"), get("q")) {
            (Some(l), None, None) => parse_pert(l)?,
            (None, p, q) => {
                let pp = p.map(parse_pert).transpose()?.unwrap_or_else(Poly::zero);
                let qq = q.map(parse_pert).transpose()?.unwrap_or_else(Poly::zero);
                &pp.derivative(x) + &qq.derivative(y)
            }
            (Some(l), _, _) => return Err(KitError::input(l.no, "give either `div` or `p`/`q`, not both")),
        };
        let deltas = match deltas {
            Some(d) => d,
            None => {
                let known = declared(&vars, &params, &[]);
                poly_symbols(&divergence).into_iter().filter(|s| !known.contains(s)).collect()
            }
        };

        let omega = match get("omega") {
            None => None,
            Some(l) => {
                let v = parse_poly(l.value, Some(&BTreeSet::new())).map_err(|e| diag(l, e))?;
                Some(v.constant_value().ok_or_else(|| KitError::input(l.no, "omega must be a rational number"))?)
            }
        };
        let kind = match get("kind") {
            None => CenterKind::Auto,
            Some(l) => match l.value {
                "elementary" => CenterKind::Elementary,
                "nilpotent" => CenterKind::Nilpotent,
                "auto" => CenterKind::Auto,
                _ => return Err(KitError::input(l.no, "`kind` must be elementary, nilpotent or auto")),
            },
        };
        let pos_syms: BTreeSet<String> = params.iter().cloned().collect();
        let mut positive = Vec::new();
        for l in lines.iter().filter(|l| l.key == "positive") {
            positive.push(parse_poly(l.value, Some(&pos_syms)).map_err(|e| diag(l, e))?);
        }
        let known = ["H", "div", "p", "q", "omega", "kind", "symmetric", "normalize", "positive"];
        for l in &lines {
            if !known.contains(&l.key) && !SYMMETRIC_KEYS.contains(&l.key) {
                return Err(KitError::input(l.no, format!("unknown key `{}`", l.key)));
            }
        }

        let file = SystemFile { vars, params, deltas, body, divergence, omega, kind, positive };
        if let Body::Hamiltonian(h) = &file.body {
            file.check_hamiltonian(h, get("H").unwrap().no)?;
        }
        Ok(file)
    }

    fn check_hamiltonian(&self, h: &Poly, line: usize) -> Result<()> {
        let b = BiPoly::from_poly(h, &self.vars[0], &self.vars[1]);
        for (i, j) in [(0, 0), (1, 0), (0, 1)] {
            if !b.coeff(i, j).is_zero() {
                return Err(KitError::input(line, "the origin must be a singular point of H with H(0,0) = 0"));
            }
        }
        if let Some(w) = &self.omega {
            let c = b.coeff(0, 2);
            if c.constant_value().as_ref() != Some(&(w / Q::from_integer(2.into()))) {
                return Err(KitError::input(line, format!("y^2 coefficient {c} does not match omega = {}", fmt_q(w))));
            }
        }
        Ok(())
    }

    /// Substitute parameter values; every name must be declared.
    pub fn with_values(&self, vals: &BTreeMap<Var, Q>) -> Result<SystemFile> {
        for k in vals.keys() {
            let k = k.to_string();
            if !self.params.contains(&k) && !self.deltas.contains(&k) {
                return Err(KitError::Usage(format!("--param {k}: not a declared parameter")));
            }
        }
        let mut out = self.clone();
        out.body = match &self.body {
            Body::Hamiltonian(h) => Body::Hamiltonian(h.eval_partial(vals)),
            Body::Symmetric { sys, normalize } => {
                Body::Symmetric { sys: sys.eval_partial(vals), normalize: *normalize }
            }
        };
        out.divergence = self.divergence.eval_partial(vals);
        out.positive =
            self.positive.iter().map(|p| p.eval_partial(vals)).filter(|p| p.constant_value().is_none()).collect();
        let fixed: BTreeSet<String> = vals.keys().map(|k| k.to_string()).collect();
        out.params.retain(|p| !fixed.contains(p));
        out.deltas.retain(|p| !fixed.contains(p));
        Ok(out)
    }

    pub fn divergence_bipoly(&self) -> BiPoly {
        BiPoly::from_poly(&self.divergence, &self.vars[0], &self.vars[1])
    }

    pub fn delta_vars(&self) -> Vec<Var> {
        self.deltas.iter().map(|d| var(d)).collect()
    }

    /// Normalized symmetric system and its normal form at `(0, 1)`.
    pub fn symmetric_normal_form(&self) -> Result<Option<(SymmetricSystem, NormalForm, Normalization)>> {
        let Body::Symmetric { sys, normalize } = &self.body else {
            return Ok(None);
        };
        let n = normalize
            .ok_or_else(|| KitError::Usage("symmetric system needs `normalize = elementary|nilpotent`".into()))?;
        let div = self.divergence_bipoly();
        let (s, nf) = match n {
            Normalization::Elementary => {
                let s = sys.normalize_elementary();
                let nf = elementary_normal_form(&s, &div)?;
                (s, nf)
            }
            Normalization::Nilpotent => {
                let s = sys.normalize_nilpotent();
                let nf = nilpotent_normal_form(&s, &div)?;
                (s, nf)
            }
        };
        Ok(Some((s, nf, n)))
    }

    /// The system at the origin, ready for `melnikov_expansion`.
    pub fn spec(&self) -> Result<SystemSpec> {
        let (h, div, kind) = match &self.body {
            Body::Hamiltonian(h) => {
                (BiPoly::from_poly(h, &self.vars[0], &self.vars[1]), self.divergence_bipoly(), self.kind)
            }
            Body::Symmetric { .. } => {
                let (_, nf, n) = self.symmetric_normal_form()?.unwrap();
                let k = match n {
                    Normalization::Elementary => CenterKind::Elementary,
                    Normalization::Nilpotent => CenterKind::Nilpotent,
                };
                (nf.hamiltonian, nf.divergence, k)
            }
        };
        let omega = match &self.omega {
            Some(w) => w.clone(),
            None => {
                let c = h.coeff(0, 2);
                c.constant_value().ok_or_else(|| KitError::input(0, format!("y^2 coefficient {c} must be a number")))?
                    * Q::from_integer(2.into())
            }
        };
        let kind = match kind {
            CenterKind::Auto if h.coeff(2, 0).is_zero() => CenterKind::Nilpotent,
            CenterKind::Auto => CenterKind::Elementary,
            k => k,
        };
        Ok(SystemSpec::new(h, div, omega, kind)?.with_deltas(self.delta_vars()).with_positive(self.positive.clone()))
    }

    /// Text that parses back to an identical `SystemFile`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if self.vars != ["x", "y"] {
            let _ = writeln!(s, "vars {} {}", self.vars[0], self.vars[1]);
        }
        if !self.params.is_empty() {
            let _ = writeln!(s, "param {}", self.params.join(" "));
        }
        match &self.body {
            Body::Hamiltonian(h) => {
                let _ = writeln!(s, "H = {h}");
            }
            Body::Symmetric { sys, normalize } => {
                let _ = writeln!(s, "symmetric = true");
                for k in &SYMMETRIC_KEYS[..6] {
                    let _ = writeln!(s, "{k} = {}", get_coeff(sys, k));
                }
                match normalize {
                    Some(Normalization::Elementary) => s.push_str("normalize = elementary\n"),
                    Some(Normalization::Nilpotent) => s.push_str("normalize = nilpotent\n"),
                    None => {}
                }
            }
        }
        if !self.deltas.is_empty() {
            let _ = writeln!(s, "delta {}", self.deltas.join(" "));
        }
        let _ = writeln!(s, "div = {}", self.divergence);
        if let Some(w) = &self.omega {
            let _ = writeln!(s, "omega = {}", fmt_q(w));
        }
        match self.kind {
            CenterKind::Elementary => s.push_str("kind = elementary\n"),
            CenterKind::Nilpotent => s.push_str("kind = nilpotent\n"),
            CenterKind::Auto => {}
        }
        for p in &self.positive {
            let _ = writeln!(s, "positive = {p}");
        }
        s
    }
}

fn slot<'a>(s: &'a mut SymmetricSystem, key: &str) -> &'a mut Poly {
    match key {
        "h20" => &mut s.h20,
        "h11" => &mut s.h11,
        "h02" => &mut s.h02,
        "h40" => &mut s.h40,
        "h31" => &mut s.h31,
        "h22" => &mut s.h22,
        _ => unreachable!(),
    }
}

fn get_coeff<'a>(s: &'a SymmetricSystem, key: &str) -> &'a Poly {
    match key {
        "h20" => &s.h20,
        "h11" => &s.h11,
        "h02" => &s.h02,
        "h40" => &s.h40,
        "h31" => &s.h31,
        "h22" => &s.h22,
        _ => unreachable!(),
    }
}

pub fn read_system_file(path: &std::path::Path) -> Result<SystemFile> {
    let text =
        std::fs::read_to_string(path).map_err(|source| KitError::Io { path: path.display().to_string(), source })?;
    SystemFile::parse(&text)
}
