//! Exact coefficient fields: prime fields, the rationals, and rational
//! function fields `F_p(t)`.
//!
//! Field elements are a plain enum; all arithmetic goes through the
//! owning [`CoeffField`] so that the modulus travels with the field rather
//! than with every element.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported prime; keeps products of two residues inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffField {
    /// `F_p`.
    Prime(u64),
    /// `Q`.
    Rational,
    /// `F_p(t)`.
    RationalFunction(u64),
}

/// A field element. The variant always matches the field it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Mod(u64),
    Rat(BigRational),
    Fn(RatFunc),
}

/// Reduced fraction of univariate polynomials over `F_p`, denominator monic.
/// Coefficient vectors are in ascending degree with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Vec<u64>,
    den: Vec<u64>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Dense univariate polynomials over `F_p`.
mod upoly {
    use super::inv_mod;

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect();
        trim(out)
    }

    pub fn neg(a: &[u64], p: u64) -> Vec<u64> {
        a.iter().map(|&c| (p - c) % p).collect()
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
        trim(a.iter().map(|&x| x * c % p).collect())
    }

    /// Division with remainder; `b` nonzero.
    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut rem = a.to_vec();
        if a.len() < b.len() {
            return (Vec::new(), rem);
        }
        let lead_inv = inv_mod(*b.last().unwrap(), p);
        let mut quot = vec![0u64; a.len() - b.len() + 1];
        for i in (0..quot.len()).rev() {
            let c = rem[i + b.len() - 1] * lead_inv % p;
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p - c * y % p) % p;
            }
        }
        (trim(quot), trim(rem))
    }

    pub fn monic(a: &[u64], p: u64) -> (Vec<u64>, u64) {
        let lead = *a.last().expect("monic of zero polynomial");
        let inv = inv_mod(lead, p);
        (scale(a, inv, p), lead)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y, p);
            x = y;
            y = r;
        }
        if x.is_empty() {
            x
        } else {
            monic(&x, p).0
        }
    }

    pub fn format(a: &[u64], var: &str) -> String {
        let mut parts = Vec::new();
        for (i, &c) in a.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

impl RatFunc {
    fn new(num: Vec<u64>, den: Vec<u64>, p: u64) -> Self {
        let num = upoly::trim(num);
        let den = upoly::trim(den);
        assert!(!den.is_empty(), "zero denominator in rational function");
        if num.is_empty() {
            return RatFunc { num, den: vec![1] };
        }
        let g = upoly::gcd(&num, &den, p);
        let (n, _) = upoly::divrem(&num, &g, p);
        let (d, _) = upoly::divrem(&den, &g, p);
        let (d, lead) = upoly::monic(&d, p);
        let n = upoly::scale(&n, inv_mod(lead, p), p);
        RatFunc { num: n, den: d }
    }

    pub fn numerator(&self) -> &[u64] {
        &self.num
    }

    pub fn denominator(&self) -> &[u64] {
        &self.den
    }
}

impl CoeffField {
    pub fn prime(p: u64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(CoeffField::Prime(p))
    }

    pub fn rational_function(p: u64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(CoeffField::RationalFunction(p))
    }

    fn check_prime(p: u64) -> Result<()> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(())
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            CoeffField::Prime(p) | CoeffField::RationalFunction(p) => p,
            CoeffField::Rational => 0,
        }
    }

    /// Number of elements, when finite.
    pub fn order(&self) -> Option<u64> {
        match *self {
            CoeffField::Prime(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn zero(&self) -> Coeff {
        match self {
            CoeffField::Prime(_) => Coeff::Mod(0),
            CoeffField::Rational => Coeff::Rat(BigRational::zero()),
            CoeffField::RationalFunction(_) => Coeff::Fn(RatFunc { num: vec![], den: vec![1] }),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coeff {
        match *self {
            CoeffField::Prime(p) => Coeff::Mod(Self::reduce_bigint(n, p)),
            CoeffField::Rational => Coeff::Rat(BigRational::from_integer(n.clone())),
            CoeffField::RationalFunction(p) => {
                let c = Self::reduce_bigint(n, p);
                Coeff::Fn(RatFunc { num: upoly::trim(vec![c]), den: vec![1] })
            }
        }
    }

    fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
        n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
    }

    /// The transcendental `t` of `F_p(t)`; `None` for other fields.
    pub fn parameter(&self) -> Option<Coeff> {
        match *self {
            CoeffField::RationalFunction(_) => Some(Coeff::Fn(RatFunc { num: vec![0, 1], den: vec![1] })),
            _ => None,
        }
    }

    /// All elements of a finite field, in the order `0, 1, ..., p-1`.
    pub fn elements(&self) -> Option<Vec<Coeff>> {
        self.order().map(|p| (0..p).map(Coeff::Mod).collect())
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Mod(x) => *x == 0,
            Coeff::Rat(r) => r.is_zero(),
            Coeff::Fn(f) => f.num.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Mod(x) => *x == 1,
            Coeff::Rat(r) => r.is_one(),
            Coeff::Fn(f) => f.num == [1] && f.den == [1],
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffField::Prime(p), Coeff::Mod(x), Coeff::Mod(y)) => Coeff::Mod((x + y) % p),
            (CoeffField::Rational, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (CoeffField::RationalFunction(p), Coeff::Fn(x), Coeff::Fn(y)) => {
                let p = *p;
                if x.den == y.den {
                    return Coeff::Fn(RatFunc::new(upoly::add(&x.num, &y.num, p), x.den.clone(), p));
                }
                let num = upoly::add(&upoly::mul(&x.num, &y.den, p), &upoly::mul(&y.num, &x.den, p), p);
                Coeff::Fn(RatFunc::new(num, upoly::mul(&x.den, &y.den, p), p))
            }
            _ => panic!("coefficient does not belong to field {self}"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (CoeffField::Prime(p), Coeff::Mod(x)) => Coeff::Mod((p - x) % p),
            (CoeffField::Rational, Coeff::Rat(x)) => Coeff::Rat(-x),
            (CoeffField::RationalFunction(p), Coeff::Fn(x)) => {
                Coeff::Fn(RatFunc { num: upoly::neg(&x.num, *p), den: x.den.clone() })
            }
            _ => panic!("coefficient does not belong to field {self}"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffField::Prime(p), Coeff::Mod(x), Coeff::Mod(y)) => Coeff::Mod(x * y % p),
            (CoeffField::Rational, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (CoeffField::RationalFunction(p), Coeff::Fn(x), Coeff::Fn(y)) => {
                let p = *p;
                Coeff::Fn(RatFunc::new(upoly::mul(&x.num, &y.num, p), upoly::mul(&x.den, &y.den, p), p))
            }
            _ => panic!("coefficient does not belong to field {self}"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (CoeffField::Prime(p), Coeff::Mod(x)) => Coeff::Mod(inv_mod(*x, *p)),
            (CoeffField::Rational, Coeff::Rat(x)) => Coeff::Rat(x.recip()),
            (CoeffField::RationalFunction(p), Coeff::Fn(x)) => {
                Coeff::Fn(RatFunc::new(x.den.clone(), x.num.clone(), *p))
            }
            _ => panic!("coefficient does not belong to field {self}"),
        })
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Option<Coeff> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    pub fn pow(&self, a: &Coeff, mut exp: u64) -> Coeff {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Whether the printed form of `a` is a single token that can prefix a
    /// monomial without parentheses (after removing a leading minus).
    fn is_atomic(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Mod(_) | Coeff::Rat(_) => true,
            Coeff::Fn(f) => f.den == [1] && f.num.iter().filter(|&&c| c != 0).count() <= 1,
        }
    }

    /// Sign-split rendering: `(negative, magnitude)`. Only `Q` has signs.
    pub(crate) fn split_sign(&self, a: &Coeff) -> (bool, Coeff) {
        match a {
            Coeff::Rat(r) if r.is_negative() => (true, Coeff::Rat(-r)),
            _ => (false, a.clone()),
        }
    }

    pub fn format(&self, a: &Coeff) -> String {
        match a {
            Coeff::Mod(x) => x.to_string(),
            Coeff::Rat(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Coeff::Fn(f) => {
                let num = upoly::format(&f.num, "t");
                if f.den == [1] {
                    num
                } else {
                    format!("({})/({})", num, upoly::format(&f.den, "t"))
                }
            }
        }
    }

    /// Rendering used as a multiplicative prefix of a monomial.
    pub(crate) fn format_factor(&self, a: &Coeff) -> String {
        let s = self.format(a);
        if self.is_atomic(a) {
            s
        } else {
            format!("({s})")
        }
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffField::Prime(p) => write!(f, "F{p}"),
            CoeffField::Rational => write!(f, "Q"),
            CoeffField::RationalFunction(p) => write!(f, "F{p}(t)"),
        }
    }
}
