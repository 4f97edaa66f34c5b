//! Binary fixed-point reals for evaluating exact constants to many digits.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{q, Q};

/// `m / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    m: BigInt,
    bits: u32,
}

/// Working precision in bits for `digits` significant decimal digits of a
/// quantity of moderate size.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * 3.33) as u32 + 64
}

fn pow2(b: u32) -> BigInt {
    BigInt::one() << b
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real { m: BigInt::zero(), bits }
    }

    pub fn from_q(x: &Q, bits: u32) -> Self {
        let n = x.numer() << bits;
        Real { m: div_round(&n, x.denom()), bits }
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        Real { m: BigInt::from(n) << bits, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    fn with(&self, m: BigInt) -> Real {
        Real { m, bits: self.bits }
    }

    /// Change precision.
    pub fn to_bits(&self, bits: u32) -> Real {
        let m = match bits.cmp(&self.bits) {
            Ordering::Equal => self.m.clone(),
            Ordering::Greater => &self.m << (bits - self.bits),
            Ordering::Less => shr_round(&self.m, self.bits - bits),
        };
        Real { m, bits }
    }

    pub fn add(&self, o: &Real) -> Real {
        self.with(&self.m + &o.m)
    }

    pub fn sub(&self, o: &Real) -> Real {
        self.with(&self.m - &o.m)
    }

    pub fn neg(&self) -> Real {
        self.with(-&self.m)
    }

    pub fn abs(&self) -> Real {
        self.with(self.m.abs())
    }

    pub fn mul(&self, o: &Real) -> Real {
        self.with(shr_round(&(&self.m * &o.m), self.bits))
    }

    pub fn mul_q(&self, c: &Q) -> Real {
        self.with(div_round(&(&self.m * c.numer()), c.denom()))
    }

    pub fn div(&self, o: &Real) -> Real {
        self.with(div_round(&(&self.m << self.bits), &o.m))
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.m.is_negative(), "sqrt of negative");
        self.with((&self.m << self.bits).sqrt())
    }

    pub fn cmp_real(&self, o: &Real) -> Ordering {
        self.m.cmp(&o.m)
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.m.bits().saturating_sub(60) as u32;
        let top = (&self.m >> shift).to_f64().unwrap_or(0.0);
        top * 2f64.powi(shift as i32 - self.bits as i32)
    }

    pub fn pi(bits: u32) -> Real {
        let g = bits + 32;
        let a = atan_inv(5, g).mul_q(&q(16));
        let b = atan_inv(239, g).mul_q(&q(4));
        a.sub(&b).to_bits(bits)
    }

    pub fn exp(&self) -> Real {
        let g = self.bits + 64;
        let x = self.to_bits(g);
        // Halve until |x| < 2^-8, then square back.
        let mut s = 0u32;
        let mut y = x.clone();
        let lim = Real::from_q(&Q::new(BigInt::one(), BigInt::from(256)), g);
        while y.abs().cmp_real(&lim) == Ordering::Greater {
            y = y.with(&y.m >> 1u32);
            s += 1;
        }
        let one = Real::from_int(1, g);
        let mut term = one.clone();
        let mut sum = one;
        let mut k = 1i64;
        loop {
            term = term.mul(&y).mul_q(&Q::new(BigInt::one(), BigInt::from(k)));
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
            k += 1;
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum.to_bits(self.bits)
    }

    pub fn ln(&self) -> Real {
        assert!(self.m.is_positive(), "ln of non-positive");
        let g = self.bits + 64;
        let x = self.to_bits(g);
        // x = 2^k * y with y in [1, 2)
        let k = x.m.bits() as i64 - 1 - g as i64;
        let y = if k >= 0 { x.with(&x.m >> k as u32) } else { x.with(&x.m << (-k) as u32) };
        let one = Real::from_int(1, g);
        let z = y.sub(&one).div(&y.add(&one));
        let ln2 = atanh_inv(3, g).mul_q(&q(2));
        let r = atanh(&z).mul_q(&q(2)).add(&ln2.mul_q(&q(k)));
        r.to_bits(self.bits)
    }

    /// `self^t` for positive `self`.
    pub fn pow_q(&self, t: &Q) -> Real {
        if t.is_zero() {
            return Real::from_int(1, self.bits);
        }
        if t.is_integer() && t.abs() < q(64) {
            let k = t.to_integer().to_i64().unwrap();
            let mut acc = Real::from_int(1, self.bits + 32);
            let b = self.to_bits(self.bits + 32);
            for _ in 0..k.abs() {
                acc = acc.mul(&b);
            }
            if k < 0 {
                acc = Real::from_int(1, acc.bits).div(&acc);
            }
            return acc.to_bits(self.bits);
        }
        let g = self.bits + 32;
        self.to_bits(g).ln().mul_q(t).exp().to_bits(self.bits)
    }

    /// `Γ(x)` for rational `x > 0` via shifted Stirling series.
    pub fn gamma(x: &Q, bits: u32) -> Real {
        assert!(x.is_positive(), "gamma argument must be positive");
        let g = bits + 64;
        // With w ~ bits the k-th Stirling term is about (k / (pi e w))^(2k),
        // so bits/10 terms are far below 2^-g.
        let shift = bits.max(32) as i64;
        let w = x + q(shift);
        let wr = Real::from_q(&w, g);
        let two_pi = Real::pi(g).mul_q(&q(2));
        let mut lg = wr.sub(&Real::from_q(&crate::poly::qr(1, 2), g)).mul(&wr.ln());
        lg = lg.sub(&wr).add(&two_pi.ln().mul_q(&crate::poly::qr(1, 2)));
        let terms = (bits / 10 + 8) as usize;
        let bern = bernoulli_even(terms);
        let w2 = wr.mul(&wr);
        let mut wpow = wr.clone();
        for (k, b) in bern.iter().enumerate().skip(1) {
            let kk = k as i64;
            let c = b / q(2 * kk * (2 * kk - 1));
            let t = Real::from_q(&c, g).div(&wpow);
            if t.is_zero() {
                break;
            }
            lg = lg.add(&t);
            wpow = wpow.mul(&w2);
        }
        let mut prod = Real::from_int(1, g);
        for k in 0..shift {
            prod = prod.mul(&Real::from_q(&(x + q(k)), g));
        }
        lg.exp().div(&prod).to_bits(bits)
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_sci(&self, digits: u32) -> String {
        if self.m.is_zero() {
            return String::from("0");
        }
        let neg = self.m.is_negative();
        let a = self.m.abs();
        // Estimate the decimal exponent, then fix it exactly.
        let log2 = a.bits() as f64 - self.bits as f64;
        let mut e = (log2 * core::f64::consts::LOG10_2).floor() as i64;
        let scaled = |e: i64| -> BigInt {
            let k = digits as i64 - 1 - e;
            let (n, d) = if k >= 0 {
                (&a * num_traits::pow(BigInt::from(10), k as usize), pow2(self.bits))
            } else {
                (a.clone(), pow2(self.bits) * num_traits::pow(BigInt::from(10), (-k) as usize))
            };
            div_round(&n, &d)
        };
        let lo = num_traits::pow(BigInt::from(10), digits as usize - 1);
        let hi = &lo * BigInt::from(10);
        let mut s = scaled(e);
        for _ in 0..4 {
            if s >= hi {
                e += 1;
            } else if s < lo {
                e -= 1;
            } else {
                break;
            }
            s = scaled(e);
        }
        if s >= hi {
            e += 1;
            s = scaled(e);
        }
        let ds = alloc::format!("{s}");
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&ds[..1]);
        if ds.len() > 1 {
            out.push('.');
            out.push_str(&ds[1..]);
        }
        out.push_str(&alloc::format!("e{e}"));
        out
    }
}

fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (d, n) = if d.is_negative() { (-d, -n) } else { (d.clone(), n.clone()) };
    let two = BigInt::from(2);
    (&n * &two + &d).div_floor(&(&d * &two))
}

fn shr_round(m: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (s - 1);
    (m + half) >> s
}

fn atan_inv(n: i64, bits: u32) -> Real {
    // atan(1/n) = Σ (-1)^k / ((2k+1) n^(2k+1))
    let mut pw = Real::from_q(&Q::new(BigInt::one(), BigInt::from(n)), bits);
    let n2 = Q::new(BigInt::one(), BigInt::from(n * n));
    let mut sum = pw.clone();
    let mut k = 1i64;
    loop {
        pw = pw.mul_q(&n2);
        if pw.is_zero() {
            break;
        }
        let t = pw.mul_q(&Q::new(BigInt::one(), BigInt::from(2 * k + 1)));
        sum = if k % 2 == 1 { sum.sub(&t) } else { sum.add(&t) };
        k += 1;
    }
    sum
}

fn atanh_inv(n: i64, bits: u32) -> Real {
    atanh(&Real::from_q(&Q::new(BigInt::one(), BigInt::from(n)), bits))
}

fn atanh(z: &Real) -> Real {
    let z2 = z.mul(z);
    let mut pw = z.clone();
    let mut sum = z.clone();
    let mut k = 1i64;
    loop {
        pw = pw.mul(&z2);
        if pw.is_zero() {
            break;
        }
        sum = sum.add(&pw.mul_q(&Q::new(BigInt::one(), BigInt::from(2 * k + 1))));
        k += 1;
    }
    sum
}

/// `B_0, B_2, ..., B_{2n}` by the Akiyama–Tanigawa recurrence.
pub fn bernoulli_even(n: usize) -> Vec<Q> {
    let m = 2 * n;
    let mut a: Vec<Q> = (0..=m).map(|k| Q::new(BigInt::one(), BigInt::from(k as i64 + 1))).collect();
    let mut out = Vec::new();
    for j in 0..=m {
        if j % 2 == 0 {
            out.push(a[0].clone());
        }
        for k in 0..(m - j) {
            a[k] = q(k as i64 + 1) * (&a[k] - &a[k + 1]);
        }
    }
    // Akiyama–Tanigawa yields B_1 = +1/2; even indices are unaffected.
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qr;

    #[test]
    fn constants() {
        let b = bits_for_digits(40);
        assert!(Real::pi(b).to_sci(30).starts_with("3.14159265358979323846264338328"));
        assert!(Real::from_int(1, b).exp().to_sci(30).starts_with("2.71828182845904523536028747135"));
        assert!(Real::from_int(2, b).ln().to_sci(30).starts_with("6.93147180559945309417232121458e-1"));
        assert!(Real::from_int(2, b).sqrt().to_sci(25).starts_with("1.41421356237309504880168"));
    }

    #[test]
    fn gamma_values() {
        let b = bits_for_digits(40);
        let half = Real::gamma(&qr(1, 2), b);
        let sp = Real::pi(b).sqrt();
        assert_eq!(half.to_sci(35), sp.to_sci(35));
        // Γ(1/4) = 3.62560990822190831193068515586767200299516768288006546743337799956991924353872912
        assert!(Real::gamma(&qr(1, 4), b).to_sci(35).starts_with("3.625609908221908311930685155867672"));
        assert_eq!(Real::gamma(&q(5), b).to_sci(20), "2.4000000000000000000e1");
        let g = Real::gamma(&qr(1, 4), bits_for_digits(90)).to_sci(78);
        assert!(
            g.starts_with("3.62560990822190831193068515586767200299516768288006546743337799956991924353873"),
            "{g}"
        );
    }

    #[test]
    fn bernoulli() {
        let bs = bernoulli_even(4);
        assert_eq!(bs, [q(1), qr(1, 6), qr(-1, 30), qr(1, 42), qr(-1, 30)]);
    }
}
