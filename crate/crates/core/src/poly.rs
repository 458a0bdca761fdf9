//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are stored in strictly descending order of the ring's monomial
//! order with no zero coefficients, so structural equality is ideal-free
//! equality of polynomials.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Coeff, CoeffField};
use crate::monomial::Monomial;
use crate::ring::PolyRing;

pub type Term = (Monomial, Coeff);

#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        PolyRing::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

/// Arithmetic selector for [`Polynomial::arith`].
#[derive(Clone, Debug)]
pub enum PolyOp<'a> {
    Add(&'a Polynomial),
    Sub(&'a Polynomial),
    Mul(&'a Polynomial),
    Pow(u32),
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Coeff) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_i64(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(n))
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Coeff) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity does not match ring");
        if ring.field().is_zero(&c) {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(m, c)] }
    }

    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), index), ring.field().one())
    }

    /// Variable by name, panicking on unknown names (scripted use only).
    pub fn named_var(ring: &Arc<PolyRing>, name: &str) -> Self {
        let i = ring.var_index(name).unwrap_or_else(|| panic!("no variable `{name}` in {ring}"));
        Self::var(ring, i)
    }

    /// Build from arbitrary (unsorted, possibly repeated) terms.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = Term>) -> Self {
        let field = ring.field();
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity does not match ring");
            match acc.get_mut(&m) {
                Some(existing) => *existing = field.add(existing, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Terms already sorted descending with nonzero coefficients.
    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing>, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &CoeffField {
        self.ring.field()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value, when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(self.field().zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        self.terms.iter().find(|(mm, _)| mm == m).map(|(_, c)| c.clone()).unwrap_or_else(|| self.field().zero())
    }

    /// Whether every term is free of the variable at `index`.
    pub fn avoids_var(&self, index: usize) -> bool {
        self.terms.iter().all(|(m, _)| m.exponents()[index] == 0)
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        assert!(PolyRing::same(&self.ring, &other.ring), "ring mismatch in polynomial arithmetic");
        let field = self.field();
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let fix = |c: &Coeff| if negate_other { field.neg(c) } else { c.clone() };
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), fix(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { field.sub(&a[i].1, &b[j].1) } else { field.add(&a[i].1, &b[j].1) };
                    if !field.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), fix(c))));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        let field = self.field();
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), field.mul(a, c))).collect(),
        }
    }

    /// `c * m * self`; order is preserved because monomial orders are
    /// multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        let field = self.field();
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(mm, a)| (mm.mul(m), field.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert!(PolyRing::same(&self.ring, &other.ring), "ring mismatch in polynomial arithmetic");
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let field = self.field();
        let mut acc: HashMap<Monomial, Coeff> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = field.mul(ca, cb);
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let s = field.add(e.get(), &prod);
                        *e.get_mut() = s;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        let order = self.ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Repeated squaring.
    pub fn pow(&self, mut k: u32) -> Polynomial {
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return Self::monomial(&self.ring, m.pow(k), self.field().pow(c, k as u64));
        }
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Schoolbook power, used as an independent check of [`Polynomial::pow`].
    pub fn pow_naive(&self, k: u32) -> Polynomial {
        (0..k).fold(Self::one(&self.ring), |acc, _| acc.mul(self))
    }

    /// Ring-checked arithmetic.
    pub fn arith(&self, op: PolyOp<'_>) -> Result<Polynomial> {
        let check = |g: &Polynomial| PolyRing::ensure_same(&self.ring, &g.ring);
        Ok(match op {
            PolyOp::Add(g) => {
                check(g)?;
                self.add(g)
            }
            PolyOp::Sub(g) => {
                check(g)?;
                self.sub(g)
            }
            PolyOp::Mul(g) => {
                check(g)?;
                self.mul(g)
            }
            PolyOp::Pow(k) => self.pow(k),
        })
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if self.field().is_one(c) => self.clone(),
            Some(c) => self.scale(&self.field().inv(c).unwrap()),
        }
    }

    /// Substitution homomorphism `x_i -> images[i]`; the result lives in
    /// the images' ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            let missing = self.ring.vars().get(images.len()).cloned().unwrap_or_default();
            return Err(Error::MissingImage(missing));
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => self.ring.clone(),
        };
        for img in images {
            PolyRing::ensure_same(&target, &img.ring)?;
        }
        if target.field() != self.field() {
            return Err(Error::RingMismatch("substitution across coefficient fields".into()));
        }
        // cache powers of each image
        let mut powers: Vec<Vec<Polynomial>> =
            images.iter().map(|g| vec![Polynomial::one(&target), g.clone()]).collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Substitution by variable name; every variable needs an image.
    pub fn apply_endomorphism(&self, images: &HashMap<String, Polynomial>) -> Result<Polynomial> {
        let ordered = self
            .ring
            .vars()
            .iter()
            .map(|v| images.get(v).cloned().ok_or_else(|| Error::MissingImage(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        self.substitute(&ordered)
    }

    /// Re-express in `target`, matching variables by name. Variables of
    /// `self` that occur must exist in `target`.
    pub fn to_ring(&self, target: &Arc<PolyRing>) -> Result<Polynomial> {
        if PolyRing::same(&self.ring, target) {
            return Ok(self.clone());
        }
        if target.field() != self.field() {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, target)));
        }
        let map: Vec<Option<usize>> = self.ring.vars().iter().map(|v| target.var_index(v)).collect();
        let n = target.nvars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; n];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] = e,
                    None => return Err(Error::UnknownVariable { name: self.ring.vars()[i].clone(), position: 0 }),
                }
            }
            terms.push((Monomial::from_exponents(&exps), c.clone()));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Multivariate division; `Some(q)` with `self = q * g` when exact.
    pub fn exact_div(&self, g: &Polynomial) -> Option<Polynomial> {
        assert!(PolyRing::same(&self.ring, &g.ring), "ring mismatch in polynomial division");
        let (lm, lc) = g.leading_term()?;
        let field = self.field();
        let lc_inv = field.inv(lc).unwrap();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading_term() {
            let mq = lm.quotient_of(m)?;
            let cq = field.mul(c, &lc_inv);
            rem = rem.sub(&g.mul_term(&mq, &cq));
            quot.push((mq, cq));
        }
        Some(Polynomial::from_sorted_terms(&self.ring, quot))
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let v = &self.ring.vars()[i];
                if e == 1 {
                    v.clone()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (negative, mag) = field.split_sign(c);
            let body = if m.is_one() {
                field.format_factor(&mag)
            } else if field.is_one(&mag) {
                self.format_monomial(m)
            } else {
                format!("{}*{}", field.format_factor(&mag), self.format_monomial(m))
            };
            match (k, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ring(field: CoeffField, vars: &str) -> Arc<PolyRing> {
        PolyRing::parse_vars(field, vars).unwrap()
    }

    #[test]
    fn frobenius_in_char_two() {
        let r = ring(CoeffField::prime(2).unwrap(), "x,y");
        let f = parse_poly("x+y", &r).unwrap();
        assert_eq!(f.pow(2), parse_poly("x^2+y^2", &r).unwrap());
    }

    #[test]
    fn commutativity_identity_vanishes() {
        let r = ring(CoeffField::Rational, "x,y,u,v");
        let p = |s| parse_poly(s, &r).unwrap();
        let lhs = p("x*v").mul(&p("y*u")).sub(&p("x*u").mul(&p("y*v")));
        assert!(lhs.is_zero());
    }

    #[test]
    fn repeated_squaring_matches_naive_power_mod_seven() {
        let r = ring(CoeffField::prime(7).unwrap(), "x,y");
        let f = parse_poly("x^3+y^3", &r).unwrap();
        let fast = f.pow(5);
        assert_eq!(fast, f.pow_naive(5));
        // binomial coefficients C(5,k) are all nonzero mod 7
        assert_eq!(fast.len(), 6);
        assert_eq!(fast.to_string(), "x^15 + 5*x^12*y^3 + 3*x^9*y^6 + 3*x^6*y^9 + 5*x^3*y^12 + y^15");
    }

    #[test]
    fn frobenius_endomorphism_on_generator() {
        let r = ring(CoeffField::Rational, "x,y,u,v");
        let f = parse_poly("x*u+y*v", &r).unwrap();
        let images: HashMap<String, Polynomial> =
            r.vars().iter().map(|v| (v.clone(), Polynomial::named_var(&r, v).pow(2))).collect();
        assert_eq!(f.apply_endomorphism(&images).unwrap(), parse_poly("x^2*u^2+y^2*v^2", &r).unwrap());
        let id: HashMap<String, Polynomial> =
            r.vars().iter().map(|v| (v.clone(), Polynomial::named_var(&r, v))).collect();
        assert_eq!(f.apply_endomorphism(&id).unwrap(), f);
    }

    #[test]
    fn evaluation_at_origin_of_forcing_relation() {
        let r = ring(CoeffField::Rational, "u,g1,g2,Z1,Z2");
        let f = parse_poly("u - Z1*g1 - Z2*g2", &r).unwrap();
        let mut images: HashMap<String, Polynomial> =
            r.vars().iter().map(|v| (v.clone(), Polynomial::named_var(&r, v))).collect();
        images.insert("Z1".into(), Polynomial::zero(&r));
        images.insert("Z2".into(), Polynomial::zero(&r));
        assert_eq!(f.apply_endomorphism(&images).unwrap(), parse_poly("u", &r).unwrap());
    }

    #[test]
    fn missing_image_is_an_error() {
        let r = ring(CoeffField::Rational, "x,y");
        let f = parse_poly("x*y", &r).unwrap();
        let mut images = HashMap::new();
        images.insert("x".to_string(), Polynomial::named_var(&r, "x"));
        assert_eq!(f.apply_endomorphism(&images), Err(Error::MissingImage("y".into())));
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let r1 = ring(CoeffField::Rational, "x");
        let r2 = ring(CoeffField::Rational, "y");
        let f = Polynomial::named_var(&r1, "x");
        let g = Polynomial::named_var(&r2, "y");
        assert!(matches!(f.arith(PolyOp::Add(&g)), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn exact_division() {
        let r = ring(CoeffField::Rational, "x,y");
        let p = |s| parse_poly(s, &r).unwrap();
        assert_eq!(p("x^2 - y^2").exact_div(&p("x + y")), Some(p("x - y")));
        assert_eq!(p("x^2 + y").exact_div(&p("x")), None);
    }
}
