//! Quasilength: filtrations by cyclic modules killed by an ideal, their
//! certificates, exact search and bounds.

mod cert;
mod search;

pub use cert::{validate_filtration, Element, FiltrationCertificate, FiltrationContext, ModuleContext, Verdict};
pub use search::{
    dimension_cap, greedy_filtration, quasilength_bounds, quasilength_exact, quasilength_exact_with, quasilength_lower,
    LowerMethod, QuasilengthBounds, SearchOptions, SearchResult,
};

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::Polynomial;
use crate::quotient::{self, QuotientPresentation, VectorModule};

/// Exponent vectors of `[0, t)^d` in descending total degree, ties broken
/// by descending lexicographic order.
pub fn staircase_exponents(d: usize, t: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut e = vec![0u32; d];
    loop {
        out.push(e.clone());
        let mut i = 0;
        while i < d {
            e[i] += 1;
            if e[i] < t {
                break;
            }
            e[i] = 0;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    out.sort_by(|a, b| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    out
}

/// The `t^d`-step filtration of `R/(x_1^t, …, x_d^t)` by the products
/// `x^e`, `e ∈ [0, t)^d`, each factor killed by `(x_1, …, x_d)`. The `x_i`
/// may be arbitrary ring elements. Returned validated.
pub fn staircase_filtration(ctx: &QuotientPresentation, xs: &[Polynomial], t: u32) -> Result<FiltrationCertificate> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    let ring = ctx.ring();
    let target = Ideal::new(ring, xs.iter().map(|x| x.pow(t)).collect())?;
    let ideal = Ideal::new(ring, xs.to_vec())?;
    let gens = staircase_exponents(xs.len(), t)
        .into_iter()
        .map(|e| xs.iter().zip(&e).fold(Polynomial::one(ring), |acc, (x, &k)| acc.mul(&x.pow(k))))
        .collect();
    FiltrationCertificate::for_quotient(ctx.clone(), target, ideal, gens).validated()
}

/// Ring variables as polynomials, by index.
pub fn variables(ring: &std::sync::Arc<crate::ring::PolyRing>, indices: &[usize]) -> Vec<Polynomial> {
    indices.iter().map(|&i| Polynomial::var(ring, i)).collect()
}

/// `⌈λ(M)/λ(R/I)⌉` for a finite-length module.
pub fn lower_length_ratio(m: &VectorModule, ideal: &Ideal) -> Result<usize> {
    let l = quotient::length(ideal)?;
    if l == 0 {
        return Err(Error::InvalidArgument("R/I is zero".into()));
    }
    Ok(m.dim().div_ceil(l))
}

/// `⌈λ(R/target)/λ(R/I)⌉` inside a quotient ring.
pub fn lower_length_ratio_quotient(ctx: &QuotientPresentation, target: &Ideal, ideal: &Ideal) -> Result<usize> {
    let l = quotient::length_in(ctx, ideal)?;
    if l == 0 {
        return Err(Error::InvalidArgument("R/I is zero".into()));
    }
    Ok(quotient::length_in(ctx, target)?.div_ceil(l))
}

/// Apply the `e`-th Frobenius: generators `g ↦ g^q`, killing ideal and
/// target `↦` their bracket powers, ring relations unchanged. The result is
/// re-validated.
pub fn frobenius_transport(cert: &FiltrationCertificate, e: u32) -> Result<FiltrationCertificate> {
    let FiltrationContext::Quotient { ring, target } = &cert.context else {
        return Err(Error::InvalidArgument("Frobenius transport needs a quotient-ring certificate".into()));
    };
    let p = ring.ring().field().characteristic();
    if p == 0 {
        return Err(Error::CharacteristicZero);
    }
    let q = p
        .checked_pow(e)
        .filter(|&q| q <= u32::MAX as u64)
        .ok_or_else(|| Error::InvalidArgument("Frobenius exponent too large".into()))?;
    let gens = cert
        .generators
        .iter()
        .map(|g| match g {
            Element::Poly(f) => Ok(f.pow(q as u32)),
            Element::Vector(_) => {
                Err(Error::InvalidArgument("quotient certificates take polynomial generators".into()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    FiltrationCertificate::for_quotient(ring.clone(), target.bracket_power(q)?, cert.ideal.bracket_power(q)?, gens)
        .validated()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffField;
    use crate::linalg::Vector;
    use crate::parse::parse_poly;
    use crate::ring::PolyRing;
    use std::sync::Arc;

    fn f2x() -> Arc<PolyRing> {
        PolyRing::parse_vars(CoeffField::prime(2).unwrap(), "x").unwrap()
    }

    fn id(r: &Arc<PolyRing>, s: &str) -> Ideal {
        Ideal::parse(r, s).unwrap()
    }

    fn dvr_sum(r: &Arc<PolyRing>) -> ModuleContext {
        ModuleContext::direct_sum(r, vec![(id(r, "x"), id(r, "x^4")), (id(r, "x"), id(r, "x^2"))]).unwrap()
    }

    fn tuple(ctx: &ModuleContext, r: &Arc<PolyRing>, parts: &[&str]) -> Vector {
        ctx.element(&parts.iter().map(|p| parse_poly(p, r).unwrap()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn dvr_certificate() {
        let r = f2x();
        let ctx = dvr_sum(&r);
        let g1 = tuple(&ctx, &r, &["x^2", "x"]);
        let g2 = tuple(&ctx, &r, &["x", "x"]);
        let mut cert = FiltrationCertificate::for_module(ctx.clone(), id(&r, "x^2"), vec![g1.clone(), g2.clone()]);
        assert_eq!(cert.validate().unwrap(), &Verdict::Valid);
        assert_eq!(cert.factors(), 2);
        let mut reversed = FiltrationCertificate::for_module(ctx, id(&r, "x^2"), vec![g2, g1]);
        assert!(matches!(reversed.validate().unwrap(), Verdict::Invalid { step: 1, .. }));
    }

    #[test]
    fn reversed_failure_matches_linear_algebra() {
        // oracle: x^2·(x, x) = (x^3, 0) is a nonzero vector, so it cannot lie in L_0 = 0
        let r = f2x();
        let ctx = dvr_sum(&r);
        let w = ctx.module().apply(&parse_poly("x^2", &r).unwrap(), &tuple(&ctx, &r, &["x", "x"])).unwrap();
        assert_eq!(ctx.polynomials(&w).unwrap(), vec![parse_poly("x^3", &r).unwrap(), Polynomial::zero(&r)]);
    }

    #[test]
    fn single_generator_cyclic() {
        let r = PolyRing::parse_vars(CoeffField::Rational, "x,y").unwrap();
        let q = QuotientPresentation::polynomial(&r);
        let i = id(&r, "x^2; y");
        let mut cert = FiltrationCertificate::for_quotient(q, i.clone(), i, vec![Polynomial::one(&r)]);
        assert_eq!(cert.validate().unwrap(), &Verdict::Valid);
    }

    #[test]
    fn incomplete_certificate_fails_after_last_step() {
        let r = f2x();
        let q = QuotientPresentation::polynomial(&r);
        let mut cert =
            FiltrationCertificate::for_quotient(q, id(&r, "x^2"), id(&r, "x"), vec![parse_poly("x", &r).unwrap()]);
        assert!(matches!(cert.validate().unwrap(), Verdict::Invalid { step: 2, .. }));
    }

    #[test]
    fn exact_values_for_truncated_dvr() {
        let r = f2x();
        let i = id(&r, "x^2");
        let m = ModuleContext::direct_sum(&r, vec![(id(&r, "x"), id(&r, "x^4"))]).unwrap();
        let n = ModuleContext::direct_sum(&r, vec![(id(&r, "x"), id(&r, "x^2"))]).unwrap();
        assert_eq!(quasilength_exact(&m, &i).unwrap().value, 2);
        assert_eq!(quasilength_exact(&n, &i).unwrap().value, 1);
        let s = quasilength_exact(&dvr_sum(&r), &i).unwrap();
        assert_eq!(s.value, 2);
        assert!(s.exact);
        assert!(s.certificate.validated.is_valid());
    }

    #[test]
    fn exact_over_rationals_is_flagged_as_upper_bound() {
        let r = PolyRing::parse_vars(CoeffField::Rational, "x").unwrap();
        let m = ModuleContext::direct_sum(&r, vec![(id(&r, "x"), id(&r, "x^4"))]).unwrap();
        let res = quasilength_exact(&m, &id(&r, "x^2")).unwrap();
        assert_eq!(res.value, 2);
        assert!(!res.exact);
    }

    #[test]
    fn no_filtration_when_ideal_is_not_nilpotent() {
        let r = PolyRing::parse_vars(CoeffField::prime(3).unwrap(), "x").unwrap();
        let m = ModuleContext::direct_sum(&r, vec![(Ideal::unit(&r), id(&r, "x-1"))]).unwrap();
        assert!(matches!(quasilength_exact(&m, &id(&r, "x")), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn staircase_examples() {
        let r = PolyRing::parse_vars(CoeffField::Rational, "x,y").unwrap();
        let q = QuotientPresentation::polynomial(&r);
        let cert = staircase_filtration(&q, &variables(&r, &[0, 1]), 3).unwrap();
        assert!(cert.validated.is_valid());
        assert_eq!(cert.describe_generators(), ["x^2*y^2", "x^2*y", "x*y^2", "x^2", "x*y", "y^2", "x", "y", "1"]);
        assert_eq!(staircase_filtration(&q, &variables(&r, &[0]), 1).unwrap().describe_generators(), ["1"]);
        let r3 = PolyRing::parse_vars(CoeffField::Rational, "x,y,z").unwrap();
        let c3 = staircase_filtration(&QuotientPresentation::polynomial(&r3), &variables(&r3, &[0, 1, 2]), 2).unwrap();
        assert_eq!(c3.factors(), 8);
        assert!(c3.validated.is_valid());
        // non-variable parameter in a nodal curve
        let f2 = PolyRing::parse_vars(CoeffField::prime(2).unwrap(), "x,y").unwrap();
        let nodal = QuotientPresentation::new(&f2, vec![parse_poly("x*y", &f2).unwrap()]).unwrap();
        let c = staircase_filtration(&nodal, &[parse_poly("x+y", &f2).unwrap()], 2).unwrap();
        assert_eq!(c.describe_generators(), ["x + y", "1"]);
        assert!(c.validated.is_valid());
    }

    #[test]
    fn length_ratio_examples() {
        let r = f2x();
        let m = ModuleContext::direct_sum(&r, vec![(id(&r, "x"), id(&r, "x^4"))]).unwrap();
        assert_eq!(lower_length_ratio(m.module(), &id(&r, "x^2")).unwrap(), 2);
        let r2 = PolyRing::parse_vars(CoeffField::prime(2).unwrap(), "x,y").unwrap();
        let q = QuotientPresentation::polynomial(&r2);
        assert_eq!(lower_length_ratio_quotient(&q, &id(&r2, "x^3; y^3"), &id(&r2, "x; y")).unwrap(), 9);
        let i = id(&r2, "x^2; x*y; y^3");
        let cyclic = VectorModule::cyclic(&i).unwrap();
        assert_eq!(lower_length_ratio(&cyclic, &i).unwrap(), 1);
    }

    #[test]
    fn transport_examples() {
        let r = f2x();
        let q = QuotientPresentation::polynomial(&r);
        let cert = FiltrationCertificate::for_quotient(
            q.clone(),
            id(&r, "x^2"),
            id(&r, "x"),
            vec![parse_poly("x", &r).unwrap(), Polynomial::one(&r)],
        )
        .validated()
        .unwrap();
        assert!(cert.validated.is_valid());
        let t = frobenius_transport(&cert, 1).unwrap();
        assert_eq!(t.describe_generators(), ["x^2", "1"]);
        assert!(t.validated.is_valid());
        let FiltrationContext::Quotient { target, .. } = &t.context else { unreachable!() };
        assert!(target.same_ideal(&id(&r, "x^4")).unwrap());
        assert!(t.ideal.same_ideal(&id(&r, "x^2")).unwrap());

        let r2 = PolyRing::parse_vars(CoeffField::prime(2).unwrap(), "x,y").unwrap();
        let st = staircase_filtration(&QuotientPresentation::polynomial(&r2), &variables(&r2, &[0, 1]), 2).unwrap();
        let t2 = frobenius_transport(&st, 1).unwrap();
        assert_eq!(t2.factors(), 4);
        assert!(t2.validated.is_valid());

        let one = FiltrationCertificate::for_quotient(q, id(&r, "x^3"), id(&r, "x^3"), vec![Polynomial::one(&r)]);
        let t3 = frobenius_transport(&one, 3).unwrap();
        assert_eq!(t3.factors(), 1);
        assert!(t3.validated.is_valid());

        let rq = PolyRing::parse_vars(CoeffField::Rational, "x").unwrap();
        let cq = FiltrationCertificate::for_quotient(
            QuotientPresentation::polynomial(&rq),
            id(&rq, "x"),
            id(&rq, "x"),
            vec![Polynomial::one(&rq)],
        );
        assert_eq!(frobenius_transport(&cq, 1).unwrap_err(), Error::CharacteristicZero);
    }

    #[test]
    fn certificate_json_round_trip() {
        let r = f2x();
        let ctx = dvr_sum(&r);
        let g1 = tuple(&ctx, &r, &["x^2", "x"]);
        let g2 = tuple(&ctx, &r, &["x", "x"]);
        let cert = FiltrationCertificate::for_module(ctx, id(&r, "x^2"), vec![g1, g2]).validated().unwrap();
        let json = cert.to_json();
        assert_eq!(json["generators"][0], serde_json::json!(["x^2", "x"]));
        assert_eq!(json["validated"], serde_json::json!("valid"));
        let back = FiltrationCertificate::from_json(&json).unwrap();
        assert_eq!(back.generators, cert.generators);
        assert_eq!(validate_filtration(&back).unwrap(), Verdict::Valid);

        let r2 = PolyRing::parse_vars(CoeffField::prime(2).unwrap(), "x,y").unwrap();
        let st = staircase_filtration(&QuotientPresentation::polynomial(&r2), &variables(&r2, &[0, 1]), 2).unwrap();
        let back = FiltrationCertificate::from_json(&st.to_json()).unwrap();
        assert_eq!(back.describe_generators(), st.describe_generators());
        assert_eq!(validate_filtration(&back).unwrap(), Verdict::Valid);
    }
}
