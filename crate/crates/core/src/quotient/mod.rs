//! Quotient rings, lengths of artinian quotients and finite-length modules
//! as explicit vector spaces.
//!
//! An ideal of a quotient ring `R = k[x]/(rels)` is handled by adjoining the
//! relations to its generators before computing a Gröbner basis; every
//! function here that takes a [`QuotientPresentation`] follows that rule.

mod vmodule;

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

pub use vmodule::{vector_module, VectorModule, DEFAULT_DEGREE_BOUND};

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::monomial::Monomial;
use crate::parse::RingSpec;
use crate::poly::Polynomial;
use crate::ring::PolyRing;

/// `ambient / relations`, with the relations never the unit ideal.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    ambient: Arc<PolyRing>,
    relations: Ideal,
}

impl QuotientPresentation {
    pub fn new(ambient: &Arc<PolyRing>, relations: Vec<Polynomial>) -> Result<Self> {
        let relations = Ideal::new(ambient, relations)?;
        if relations.is_unit()? {
            return Err(Error::ZeroRing);
        }
        Ok(QuotientPresentation { ambient: ambient.clone(), relations })
    }

    /// The polynomial ring itself.
    pub fn polynomial(ambient: &Arc<PolyRing>) -> Self {
        QuotientPresentation { ambient: ambient.clone(), relations: Ideal::zero(ambient) }
    }

    pub fn from_spec(spec: RingSpec) -> Result<Self> {
        Self::new(&spec.ring, spec.relations)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_spec(crate::parse::parse_ring(text)?)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ambient
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    /// Preimage in the ambient ring of the ideal generated by `gens`.
    pub fn ideal(&self, gens: &[Polynomial]) -> Result<Ideal> {
        self.relations.with_generators(gens)
    }

    /// Preimage of `I·R`.
    pub fn extend(&self, ideal: &Ideal) -> Result<Ideal> {
        PolyRing::ensure_same(&self.ambient, ideal.ring())?;
        self.ideal(ideal.gens())
    }

    /// Whether `f` vanishes in `R / I·R`.
    pub fn contains(&self, ideal: &Ideal, f: &Polynomial) -> Result<bool> {
        self.extend(ideal)?.contains(f)
    }
}

impl std::fmt::Display for QuotientPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.relations.is_zero_ideal() {
            write!(f, "{}", self.ambient)
        } else {
            write!(f, "{}/{}", self.ambient, self.relations)
        }
    }
}

/// Whether every variable has a pure power among the leading monomials of
/// the reduced Gröbner basis.
pub fn is_zero_dim(ideal: &Ideal) -> Result<bool> {
    let gb = ideal.groebner()?;
    if gb.is_unit() {
        return Ok(true);
    }
    let n = ideal.ring().nvars();
    let mut seen = vec![false; n];
    for m in gb.leading_monomials() {
        if let Some((i, _)) = m.pure_power() {
            seen[i] = true;
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

/// Monomials outside the leading-term ideal, in ascending degree and then
/// descending order. Fails when the quotient is not finite-dimensional.
pub fn standard_monomials(ideal: &Ideal) -> Result<Vec<Monomial>> {
    if !is_zero_dim(ideal)? {
        return Err(Error::NotZeroDimensional);
    }
    let gb = ideal.groebner()?;
    if gb.is_unit() {
        return Ok(Vec::new());
    }
    let lms = gb.leading_monomials();
    let n = ideal.ring().nvars();
    let one = Monomial::one(n);
    let mut seen: HashSet<Monomial> = HashSet::from([one.clone()]);
    let mut queue = VecDeque::from([one]);
    let mut out = Vec::new();
    while let Some(m) = queue.pop_front() {
        crate::budget::check()?;
        for i in 0..n {
            let next = m.mul(&Monomial::var(n, i));
            if !seen.contains(&next) && !lms.iter().any(|l| l.divides(&next)) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
        out.push(m);
    }
    let order = ideal.ring().order();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| order.cmp(b, a)));
    Ok(out)
}

/// `λ(R/I)`: the number of standard monomials.
pub fn length(ideal: &Ideal) -> Result<usize> {
    Ok(standard_monomials(ideal)?.len())
}

/// `λ(R/I·R)` for `R` a quotient presentation.
pub fn length_in(ctx: &QuotientPresentation, ideal: &Ideal) -> Result<usize> {
    length(&ctx.extend(ideal)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffField;

    fn ideal(field: CoeffField, vars: &str, gens: &str) -> Ideal {
        let r = PolyRing::parse_vars(field, vars).unwrap();
        Ideal::parse(&r, gens).unwrap()
    }

    /// Independent oracle: enumerate the box below the pure powers and keep
    /// monomials divisible by no generator (monomial ideals only).
    fn staircase_count(exps: &[&[u32]], nvars: usize, bound: u32) -> usize {
        let gens: Vec<Monomial> = exps.iter().map(|e| Monomial::from_exponents(e)).collect();
        let mut count = 0;
        let mut e = vec![0u32; nvars];
        loop {
            let m = Monomial::from_exponents(&e);
            if !gens.iter().any(|g| g.divides(&m)) {
                count += 1;
            }
            let mut i = 0;
            while i < nvars {
                e[i] += 1;
                if e[i] < bound {
                    break;
                }
                e[i] = 0;
                i += 1;
            }
            if i == nvars {
                return count;
            }
        }
    }

    #[test]
    fn zero_dimensionality() {
        assert!(is_zero_dim(&ideal(CoeffField::Rational, "x,y", "x^2; y^3")).unwrap());
        assert!(!is_zero_dim(&ideal(CoeffField::Rational, "x,y", "x*y")).unwrap());
        assert!(is_zero_dim(&ideal(CoeffField::Rational, "x,y,z", "x; y; x^3+y^3+z^3")).unwrap());
    }

    #[test]
    fn lengths() {
        let i = ideal(CoeffField::prime(3).unwrap(), "x,y", "x^2; x*y; y^3");
        assert_eq!(length(&i).unwrap(), staircase_count(&[&[2, 0], &[1, 1], &[0, 3]], 2, 4));
        assert_eq!(length(&i).unwrap(), 4);
        let names: Vec<String> = standard_monomials(&i)
            .unwrap()
            .into_iter()
            .map(|m| Polynomial::monomial(i.ring(), m, i.ring().field().one()).to_string())
            .collect();
        assert_eq!(names, vec!["1", "x", "y", "y^2"]);
        assert_eq!(length(&ideal(CoeffField::Rational, "x,y", "x^3; y^3")).unwrap(), 9);
        assert_eq!(length(&ideal(CoeffField::Rational, "x,y,z", "x; y; x^3+y^3+z^3")).unwrap(), 3);
        assert_eq!(length(&ideal(CoeffField::Rational, "x", "x*(x-1)")).unwrap(), 2);
        assert_eq!(length(&ideal(CoeffField::Rational, "x,y", "x*y")).unwrap_err(), Error::NotZeroDimensional);
    }

    #[test]
    fn quotient_presentation() {
        let q = QuotientPresentation::parse("Q[x,y,z]/(x^3+y^3+z^3)").unwrap();
        assert_eq!(q.to_string(), "Q[x,y,z]/(x^3 + y^3 + z^3)");
        let r = q.ring().clone();
        let i = Ideal::parse(&r, "x; y").unwrap();
        assert_eq!(length_in(&q, &i).unwrap(), 3);
        assert!(q.contains(&i, &crate::parse::parse_poly("z^3", &r).unwrap()).unwrap());
        assert_eq!(QuotientPresentation::parse("Q[x]/(x; x-1)").unwrap_err(), Error::ZeroRing);
    }
}
