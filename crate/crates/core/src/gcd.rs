//! Multivariate gcd over Q by recursive primitive pseudo-remainder sequences.

use alloc::vec::Vec;

use crate::poly::{Poly, Var};

type Uni = Vec<Poly>;

fn trim(mut u: Uni) -> Uni {
    while u.last().is_some_and(Poly::is_zero) {
        u.pop();
    }
    u
}

fn gcd_many(cs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in cs {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primpart(u: &[Poly]) -> Uni {
    let c = gcd_many(u);
    u.iter().map(|k| k.div_exact(&c).expect("content divides")).collect()
}

fn prem(a: &[Poly], b: &[Poly]) -> Uni {
    let db = b.len() - 1;
    let lc = b[db].clone();
    let mut r: Uni = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Uni = r.iter().map(|c| c * &lc).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = &next[k + shift] - &(bc * &lr);
        }
        r = trim(next);
    }
    r
}

/// Primitive, integral gcd with positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalized().1;
    }
    if b.is_zero() {
        return a.normalized().1;
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.normalized().1;
    }
    let av = a.vars();
    let bv = b.vars();
    // Variables in only one argument can only appear in the gcd's content.
    let v: Var = match av.intersection(&bv).next() {
        Some(v) => v.clone(),
        None => return Poly::one(),
    };
    let ua = a.coeffs_in(&v);
    let ub = b.coeffs_in(&v);
    let ca = gcd_many(&ua);
    let cb = gcd_many(&ub);
    let c = gcd(&ca, &cb);
    let mut pa = primpart(&ua);
    let mut pb = primpart(&ub);
    if pa.len() < pb.len() {
        core::mem::swap(&mut pa, &mut pb);
    }
    let g = loop {
        if pb.is_empty() {
            break pa;
        }
        if pb.len() == 1 {
            break alloc::vec![Poly::one()];
        }
        let r = prem(&pa, &pb);
        pa = pb;
        pb = if r.is_empty() { r } else { primpart(&r) };
    };
    let g = Poly::from_coeffs_in(&v, &primpart(&g));
    (&g * &c).normalized().1
}

/// Strips the gcd of all inputs: returns `(g, [p / g])`.
pub fn extract_common_factor(ps: &[Poly]) -> (Poly, Vec<Poly>) {
    let g = gcd_many(ps);
    if g.is_zero() {
        return (Poly::one(), ps.to_vec());
    }
    let rest = ps.iter().map(|p| p.div_exact(&g).expect("gcd divides")).collect();
    (g, rest)
}
