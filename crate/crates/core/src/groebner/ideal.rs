use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::buchberger::{extend_basis, groebner_basis, normal_form};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::PolyRing;

/// A reduced Gröbner basis together with the ring (and therefore the
/// order) it was computed in.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    polys: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.polys.as_slice(), [p] if p.is_constant() && !p.is_zero())
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().filter_map(|p| p.leading_monomial().cloned()).collect()
    }

    /// Normal form of `f`, returned in `f`'s own ring.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        let g = f.to_ring(&self.ring)?;
        let refs: Vec<&Polynomial> = self.polys.iter().collect();
        normal_form(&g, &refs).to_ring(f.ring())
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Basis of `(self) + (new)` in the same order.
    pub fn extended(&self, new: &[Polynomial]) -> Result<GroebnerBasis> {
        let mapped = new.iter().map(|f| f.to_ring(&self.ring)).collect::<Result<Vec<_>>>()?;
        Ok(GroebnerBasis { ring: self.ring.clone(), polys: extend_basis(&self.ring, &self.polys, &mapped)? })
    }
}

/// Result of a membership test: the normal form is the witness.
#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    pub normal_form: Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealRelation {
    Equal,
    /// `I ⊊ J`
    Subset,
    /// `J ⊊ I`
    Superset,
    Incomparable,
}

/// An ideal given by generators, with reduced Gröbner bases cached per
/// monomial order.
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Polynomial>,
    cache: Mutex<HashMap<MonomialOrder, Arc<GroebnerBasis>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({self})")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join("; "))
    }
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            PolyRing::ensure_same(ring, g.ring())?;
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { ring: ring.clone(), gens, cache: Mutex::new(HashMap::new()) })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Ideal { ring: ring.clone(), gens: Vec::new(), cache: Mutex::new(HashMap::new()) }
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Self {
        Ideal { ring: ring.clone(), gens: vec![Polynomial::one(ring)], cache: Mutex::new(HashMap::new()) }
    }

    /// Parse a `;`-separated generator list.
    pub fn parse(ring: &Arc<PolyRing>, text: &str) -> Result<Self> {
        Ideal::new(ring, crate::parse::parse_poly_list(text, ring)?)
    }

    fn with_cached(ring: &Arc<PolyRing>, gens: Vec<Polynomial>, gb: GroebnerBasis) -> Self {
        let ideal = Ideal::new(ring, gens).expect("generators in ring");
        ideal.cache.lock().unwrap().insert(gb.ring.order().clone(), Arc::new(gb));
        ideal
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Reduced Gröbner basis in the ring's own order.
    pub fn groebner(&self) -> Result<Arc<GroebnerBasis>> {
        self.groebner_in(self.ring.order().clone())
    }

    pub fn groebner_in(&self, order: MonomialOrder) -> Result<Arc<GroebnerBasis>> {
        let mut cache = self.cache.lock().unwrap();
        if let Some(gb) = cache.get(&order) {
            return Ok(gb.clone());
        }
        let ring = if &order == self.ring.order() { self.ring.clone() } else { self.ring.reordered(order.clone()) };
        let gens = self.gens.iter().map(|g| g.to_ring(&ring)).collect::<Result<Vec<_>>>()?;
        let polys = groebner_basis(&ring, &gens)?;
        let gb = Arc::new(GroebnerBasis { ring, polys });
        cache.insert(order, gb.clone());
        Ok(gb)
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        PolyRing::ensure_same(&self.ring, f.ring())?;
        self.groebner()?.normal_form(f)
    }

    pub fn member(&self, f: &Polynomial) -> Result<Membership> {
        let nf = self.normal_form(f)?;
        Ok(Membership { member: nf.is_zero(), normal_form: nf })
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.member(f)?.member)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.is_unit())
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        PolyRing::ensure_same(&self.ring, &other.ring)?;
        let gb = self.groebner()?;
        for g in &other.gens {
            if !gb.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Relation of `self` to `other`, decided by generator-wise membership.
    pub fn compare(&self, other: &Ideal) -> Result<IdealRelation> {
        let le = other.contains_ideal(self)?;
        let ge = self.contains_ideal(other)?;
        Ok(match (le, ge) {
            (true, true) => IdealRelation::Equal,
            (true, false) => IdealRelation::Subset,
            (false, true) => IdealRelation::Superset,
            (false, false) => IdealRelation::Incomparable,
        })
    }

    pub fn same_ideal(&self, other: &Ideal) -> Result<bool> {
        Ok(self.compare(other)? == IdealRelation::Equal)
    }

    /// Ideal generated by `self` and extra polynomials. When a basis is
    /// already cached it is extended incrementally.
    pub fn with_generators(&self, extra: &[Polynomial]) -> Result<Ideal> {
        for g in extra {
            PolyRing::ensure_same(&self.ring, g.ring())?;
        }
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().filter(|g| !g.is_zero()).cloned());
        let cached = self.cache.lock().unwrap().get(self.ring.order()).cloned();
        match cached {
            Some(gb) => Ok(Ideal::with_cached(&self.ring, gens, gb.extended(extra)?)),
            None => Ideal::new(&self.ring, gens),
        }
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        PolyRing::ensure_same(&self.ring, &other.ring)?;
        self.with_generators(&other.gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        PolyRing::ensure_same(&self.ring, &other.ring)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// `I^k`, generated by the products over all multisets of `k`
    /// generators.
    pub fn power(&self, k: u32) -> Result<Ideal> {
        if k == 0 {
            return Err(Error::InvalidArgument("ideal power must be at least 1".into()));
        }
        let n = self.gens.len();
        let mut gens = Vec::new();
        let mut combo = vec![0usize; k as usize];
        if n == 0 {
            return Ok(Ideal::zero(&self.ring));
        }
        loop {
            let p = combo.iter().fold(Polynomial::one(&self.ring), |acc, &i| acc.mul(&self.gens[i]));
            gens.push(p);
            // next non-decreasing sequence
            let mut pos = combo.len();
            while pos > 0 && combo[pos - 1] == n - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            let v = combo[pos - 1] + 1;
            for c in combo[pos - 1..].iter_mut() {
                *c = v;
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// Frobenius bracket power `I^[q] = (g^q)`; `q` must be a power of the
    /// characteristic.
    pub fn bracket_power(&self, q: u64) -> Result<Ideal> {
        let p = self.ring.field().characteristic();
        if p == 0 {
            return Err(Error::CharacteristicZero);
        }
        let mut r = q;
        while r > 1 && r.is_multiple_of(p) {
            r /= p;
        }
        if q == 0 || r != 1 {
            return Err(Error::NotCharacteristicPower(q, p));
        }
        let q32 = u32::try_from(q).map_err(|_| Error::InvalidArgument("exponent too large".into()))?;
        Ideal::new(&self.ring, self.gens.iter().map(|g| g.pow(q32)).collect())
    }

    /// `I ∩ J` by eliminating a tag variable `w` from `wI + (1 - w)J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        PolyRing::ensure_same(&self.ring, &other.ring)?;
        if self.is_zero_ideal() || other.is_zero_ideal() {
            return Ok(Ideal::zero(&self.ring));
        }
        let tag = self.ring.fresh_name("w");
        let mut vars = vec![tag];
        vars.extend(self.ring.vars().iter().cloned());
        let order = MonomialOrder::elimination(1, self.ring.order().clone());
        let big = PolyRing::with_order(self.ring.field().clone(), vars, order)?;
        let w = Polynomial::var(&big, 0);
        let one_minus_w = Polynomial::one(&big).sub(&w);
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(g.to_ring(&big)?.mul(&w));
        }
        for g in &other.gens {
            gens.push(g.to_ring(&big)?.mul(&one_minus_w));
        }
        let gb = groebner_basis(&big, &gens)?;
        let kept =
            gb.into_iter().filter(|p| p.avoids_var(0)).map(|p| p.to_ring(&self.ring)).collect::<Result<Vec<_>>>()?;
        let basis = GroebnerBasis { ring: self.ring.clone(), polys: kept.clone() };
        Ok(Ideal::with_cached(&self.ring, kept, basis))
    }

    /// `I : (f)`.
    pub fn colon_poly(&self, f: &Polynomial) -> Result<Ideal> {
        PolyRing::ensure_same(&self.ring, f.ring())?;
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let principal = Ideal::new(&self.ring, vec![f.clone()])?;
        let meet = self.intersect(&principal)?;
        let mut quotients = Vec::with_capacity(meet.gens.len());
        for g in &meet.gens {
            let q = g
                .exact_div(f)
                .ok_or_else(|| Error::Internal(format!("generator {g} of I ∩ (f) is not divisible by f = {f}")))?;
            quotients.push(q);
        }
        Ideal::new(&self.ring, quotients)
    }

    /// `I : J = ⋂ (I : g)` over the generators `g` of `J`. The colon by the
    /// zero ideal is the unit ideal.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        PolyRing::ensure_same(&self.ring, &other.ring)?;
        let mut acc: Option<Ideal> = None;
        for g in &other.gens {
            let c = self.colon_poly(g)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(&self.ring)))
    }

    /// `I : f^∞`, with the number of colon steps until stabilization.
    pub fn saturate(&self, f: &Polynomial) -> Result<(Ideal, usize)> {
        let mut current = self.clone();
        let mut steps = 0;
        loop {
            let next = current.colon_poly(f)?;
            if current.contains_ideal(&next)? {
                return Ok((current, steps));
            }
            current = next;
            steps += 1;
        }
    }

    /// The reduced Gröbner basis as a canonical generating set.
    pub fn canonical(&self) -> Result<Ideal> {
        let gb = self.groebner()?;
        Ok(Ideal::with_cached(&self.ring, gb.polys.clone(), (*gb).clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffField;
    use crate::parse::parse_poly;

    fn ring(field: CoeffField, vars: &str) -> Arc<PolyRing> {
        PolyRing::parse_vars(field, vars).unwrap()
    }

    fn ideal(r: &Arc<PolyRing>, text: &str) -> Ideal {
        Ideal::parse(r, text).unwrap()
    }

    fn gb_strings(i: &Ideal) -> Vec<String> {
        i.groebner().unwrap().polys().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn redundant_generator_removed() {
        let r = ring(CoeffField::Rational, "x");
        assert_eq!(gb_strings(&ideal(&r, "x; x^2")), vec!["x"]);
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let r = ring(CoeffField::Rational, "x,y,z");
        assert_eq!(gb_strings(&ideal(&r, "x^4; y^4; z^4")), vec!["z^4", "y^4", "x^4"]);
    }

    #[test]
    fn binomial_system_basis_is_closed_under_s_pairs() {
        let r = ring(CoeffField::Rational, "x,y");
        let i = ideal(&r, "x^2 - y; y^2 - x");
        let gb = i.groebner().unwrap();
        let polys = gb.polys();
        let refs: Vec<&Polynomial> = polys.iter().collect();
        // every S-polynomial reduces to zero
        for a in polys {
            for b in polys {
                let (la, lb) = (a.leading_monomial().unwrap(), b.leading_monomial().unwrap());
                let l = la.lcm(lb);
                let one = r.field().one();
                let s =
                    a.mul_term(&la.quotient_of(&l).unwrap(), &one).sub(&b.mul_term(&lb.quotient_of(&l).unwrap(), &one));
                assert!(normal_form(&s, &refs).is_zero());
            }
        }
        // the generators and the basis span the same ideal
        let back = Ideal::new(&r, polys.to_vec()).unwrap();
        assert!(back.same_ideal(&i).unwrap());
        let lms: Vec<String> = polys
            .iter()
            .map(|p| Polynomial::monomial(&r, p.leading_monomial().unwrap().clone(), r.field().one()).to_string())
            .collect();
        // coprime leading terms: the generators are already a basis
        assert_eq!(lms, vec!["y^2", "x^2"]);
    }

    #[test]
    fn membership_examples() {
        let r = ring(CoeffField::Rational, "x,y,u,v");
        let i = ideal(&r, "x*u; y*v; x*v+y*u");
        assert!(i.contains(&parse_poly("(x*v)^2", &r).unwrap()).unwrap());
        let q = ring(CoeffField::Rational, "x");
        let m = ideal(&q, "x").member(&Polynomial::one(&q)).unwrap();
        assert!(!m.member);
        assert_eq!(m.normal_form.to_string(), "1");
    }

    #[test]
    fn compare_examples() {
        let r = ring(CoeffField::Rational, "x,y");
        let i = ideal(&r, "x");
        assert_eq!(i.compare(&i).unwrap(), IdealRelation::Equal);
        assert_eq!(i.compare(&ideal(&r, "y")).unwrap(), IdealRelation::Incomparable);
        assert_eq!(ideal(&r, "x^2").compare(&i).unwrap(), IdealRelation::Subset);
    }

    #[test]
    fn arithmetic_examples() {
        let r = ring(CoeffField::prime(2).unwrap(), "x,y");
        let i = ideal(&r, "x; y");
        let b = i.bracket_power(4).unwrap();
        assert!(b.same_ideal(&ideal(&r, "x^4; y^4")).unwrap());
        assert!(i.power(2).unwrap().same_ideal(&ideal(&r, "x^2; x*y; y^2")).unwrap());
        assert_eq!(i.bracket_power(3).unwrap_err(), Error::NotCharacteristicPower(3, 2));
        let q = ring(CoeffField::Rational, "x");
        assert_eq!(ideal(&q, "x").bracket_power(2).unwrap_err(), Error::CharacteristicZero);
    }

    #[test]
    fn power_of_three_generated_ideal_lands_in_diagonal_powers() {
        let r = ring(CoeffField::Rational, "x,y,u,v");
        let i = ideal(&r, "x*u; y*v; x*v+y*u");
        let t = 2;
        let it = Ideal::new(&r, i.gens().iter().map(|g| g.pow(t)).collect()).unwrap();
        let p = i.power(3 * t).unwrap();
        assert_eq!(p.gens().len(), 28);
        assert!(it.contains_ideal(&p).unwrap());
    }

    #[test]
    fn colon_examples() {
        let r = ring(CoeffField::Rational, "x,y");
        let c = ideal(&r, "x^2*y").colon(&ideal(&r, "y")).unwrap();
        assert!(c.same_ideal(&ideal(&r, "x^2")).unwrap());
        let i = ideal(&r, "x^2; y^3");
        assert!(i.colon(&Ideal::unit(&r)).unwrap().same_ideal(&i).unwrap());
        assert!(i.colon(&Ideal::zero(&r)).unwrap().is_unit().unwrap());
    }

    #[test]
    fn colon_in_nodal_quotient() {
        // in Q[u,v]/(uv) the element x = u + v is a nonzerodivisor
        let r = ring(CoeffField::Rational, "u,v");
        let x = parse_poly("u+v", &r).unwrap();
        let rel = parse_poly("u*v", &r).unwrap();
        let i = Ideal::new(&r, vec![x.pow(2), rel.clone()]).unwrap();
        let c = i.colon_poly(&x).unwrap();
        assert!(c.same_ideal(&Ideal::new(&r, vec![x.clone(), rel.clone()]).unwrap()).unwrap());
        // oracle: scan all monomials of degree <= 3 for membership of m * x in I
        let mono = |a: u32, b: u32| Polynomial::monomial(&r, Monomial::from_exponents(&[a, b]), r.field().one());
        for a in 0..=3 {
            for b in 0..=3 - a {
                let m = mono(a, b);
                assert_eq!(i.contains(&m.mul(&x)).unwrap(), c.contains(&m).unwrap());
            }
        }
    }

    #[test]
    fn intersection_examples() {
        let r = ring(CoeffField::Rational, "x,y");
        assert!(ideal(&r, "x").intersect(&ideal(&r, "y")).unwrap().same_ideal(&ideal(&r, "x*y")).unwrap());
        let i = ideal(&r, "x^2; y");
        let j = ideal(&r, "x; y^2");
        // lcm oracle for monomial ideals
        let mut lcms = Vec::new();
        for a in i.gens() {
            for b in j.gens() {
                let l = a.leading_monomial().unwrap().lcm(b.leading_monomial().unwrap());
                lcms.push(Polynomial::monomial(&r, l, r.field().one()));
            }
        }
        let oracle = Ideal::new(&r, lcms).unwrap();
        let meet = i.intersect(&j).unwrap();
        assert!(meet.same_ideal(&oracle).unwrap());
        assert!(meet.same_ideal(&ideal(&r, "x^2; x*y; y^2")).unwrap());
        assert!(i.intersect(&i).unwrap().same_ideal(&i).unwrap());
    }

    #[test]
    fn incremental_extension_matches_fresh_basis() {
        let r = ring(CoeffField::prime(2).unwrap(), "x,y,u,v");
        let i = ideal(&r, "x^2*u^2; y^2*v^2; x^2*v^2+y^2*u^2");
        i.groebner().unwrap();
        let extra = vec![parse_poly("x*u*y*v*(x*v+y*u)", &r).unwrap()];
        let inc = i.with_generators(&extra).unwrap();
        let mut all = i.gens().to_vec();
        all.extend(extra);
        let fresh = Ideal::new(&r, all).unwrap();
        assert_eq!(gb_strings(&inc), gb_strings(&fresh));
    }

    #[test]
    fn saturation_by_variable() {
        let r = ring(CoeffField::Rational, "x,y");
        let (sat, steps) = ideal(&r, "x^3*y; x^2*y^2").saturate(&parse_poly("x", &r).unwrap()).unwrap();
        assert!(sat.same_ideal(&ideal(&r, "y")).unwrap());
        assert_eq!(steps, 3);
    }
}
