//! Limit closures `(I_t)^lm` and bounded tables for the content of top
//! local cohomology.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::Polynomial;
use crate::quasilength::{
    dimension_cap, quasilength_exact, staircase_filtration, Element, FiltrationCertificate, ModuleContext,
};
use crate::quotient::{self, QuotientPresentation, VectorModule};

pub const DEFAULT_WINDOW: usize = 3;
/// Colon steps tried before giving up on stabilization.
pub const MAX_CHAIN: usize = 64;

/// `J_k = (I_{t+k} + rels) : (x_1⋯x_d)^k`, stopped once `window`
/// consecutive terms agree.
#[derive(Clone, Debug)]
pub struct LimitClosure {
    pub ideal: Ideal,
    /// Index of the returned term.
    pub k: usize,
    /// Whether `window` equal consecutive terms were seen. This is a
    /// heuristic stopping rule: a later term could still be larger.
    pub stabilized_within_window: bool,
}

pub fn limit_closure(ctx: &QuotientPresentation, xs: &[Polynomial], t: u32, window: usize) -> Result<LimitClosure> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    let ring = ctx.ring();
    let product = xs.iter().fold(Polynomial::one(ring), |acc, x| acc.mul(x));
    let mut previous: Option<Ideal> = None;
    let mut run = 0;
    for k in 0..MAX_CHAIN {
        crate::budget::check()?;
        let k32 = k as u32;
        let it = ctx.ideal(&xs.iter().map(|x| x.pow(t + k32)).collect::<Vec<_>>())?;
        let jk = if k == 0 { it } else { it.colon_poly(&product.pow(k32))?.canonical()? };
        if let Some(prev) = &previous {
            if !jk.contains_ideal(prev)? {
                return Err(Error::Internal(format!("limit-closure chain is not ascending at k = {k}")));
            }
            if prev.contains_ideal(&jk)? {
                run += 1;
            } else {
                run = 1;
            }
        } else {
            run = 1;
        }
        if run >= window {
            return Ok(LimitClosure { ideal: jk, k, stabilized_within_window: true });
        }
        if jk.is_unit()? {
            return Ok(LimitClosure { ideal: jk, k, stabilized_within_window: true });
        }
        previous = Some(jk);
    }
    Ok(LimitClosure { ideal: previous.expect("chain computed"), k: MAX_CHAIN - 1, stabilized_within_window: false })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentMode {
    Plain,
    LimitClosure,
}

/// Where a bound came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Staircase,
    ExactSearch,
    RestrictedSearch,
    LengthRatio,
    MinGenerators,
    ZeroModule,
    Unknown,
}

fn ratio_string<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct ContentRow {
    pub t: u32,
    pub upper: usize,
    pub lower: usize,
    #[serde(serialize_with = "ratio_string")]
    pub upper_ratio: Ratio<u64>,
    #[serde(serialize_with = "ratio_string")]
    pub lower_ratio: Ratio<u64>,
    pub upper_source: BoundSource,
    pub lower_source: BoundSource,
    /// Limit-closure mode only: whether the chain stabilized in the window.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilized: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContentTable {
    pub d: usize,
    pub mode: ContentMode,
    pub rows: Vec<ContentRow>,
}

/// Rows `t ∈ ts` for the module `R/I_t` (plain) or `R/(I_t)^lm`.
pub fn content_scan(
    ctx: &QuotientPresentation,
    xs: &[Polynomial],
    ts: impl IntoIterator<Item = u32>,
    mode: ContentMode,
    window: usize,
) -> Result<ContentTable> {
    let d = xs.len();
    let killing = ctx.ideal(xs)?;
    let mut rows = Vec::new();
    for t in ts {
        rows.push(content_row(ctx, xs, &killing, t, mode, window)?);
    }
    Ok(ContentTable { d, mode, rows })
}

/// [`content_scan`] in limit-closure mode.
pub fn underline_content_scan(
    ctx: &QuotientPresentation,
    xs: &[Polynomial],
    ts: impl IntoIterator<Item = u32>,
    window: usize,
) -> Result<ContentTable> {
    content_scan(ctx, xs, ts, ContentMode::LimitClosure, window)
}

fn content_row(
    ctx: &QuotientPresentation,
    xs: &[Polynomial],
    killing: &Ideal,
    t: u32,
    mode: ContentMode,
    window: usize,
) -> Result<ContentRow> {
    crate::budget::check()?;
    let denom = (t as u64).pow(xs.len() as u32);
    let (target, stabilized) = match mode {
        ContentMode::Plain => (ctx.ideal(&xs.iter().map(|x| x.pow(t)).collect::<Vec<_>>())?, None),
        ContentMode::LimitClosure => {
            let lc = limit_closure(ctx, xs, t, window)?;
            (lc.ideal, Some(lc.stabilized_within_window))
        }
    };
    let row = |upper, lower, upper_source, lower_source| ContentRow {
        t,
        upper,
        lower,
        upper_ratio: Ratio::new(upper as u64, denom),
        lower_ratio: Ratio::new(lower as u64, denom),
        upper_source,
        lower_source,
        stabilized,
    };
    if target.is_unit()? {
        return Ok(row(0, 0, BoundSource::ZeroModule, BoundSource::ZeroModule));
    }

    let cert = pruned_staircase(ctx, xs, t, &target)?;
    let mut upper = cert.factors();
    let mut upper_source = BoundSource::Staircase;
    let (mut lower, mut lower_source) = (1, BoundSource::MinGenerators);

    if quotient::is_zero_dim(&target)? {
        let len = quotient::length(&target)?;
        if quotient::is_zero_dim(killing)? {
            let per_factor = quotient::length(killing)?.max(1);
            let ratio = len.div_ceil(per_factor);
            if ratio > lower {
                lower = ratio;
                lower_source = BoundSource::LengthRatio;
            }
        }
        let field = ctx.ring().field();
        if len <= dimension_cap(field) && lower < upper {
            let module = VectorModule::cyclic(&target)?;
            let mc = ModuleContext::from_module(module);
            let ideal = Ideal::new(ctx.ring(), xs.to_vec())?;
            match quasilength_exact(&mc, &ideal) {
                Ok(res) => {
                    if res.value < upper {
                        upper = res.value;
                        upper_source = if res.exact { BoundSource::ExactSearch } else { BoundSource::RestrictedSearch };
                    }
                    if res.exact {
                        lower = res.value;
                        lower_source = BoundSource::ExactSearch;
                    }
                }
                Err(Error::SearchLimit(_)) => {}
                Err(e) => return Err(e),
            }
        }
    } else {
        lower_source = BoundSource::MinGenerators;
    }
    if lower > upper {
        return Err(Error::Internal(format!("content bounds crossed at t = {t}: {lower} > {upper}")));
    }
    Ok(row(upper, lower, upper_source, lower_source))
}

/// The staircase filtration pushed into `R/target`, with steps that
/// became trivial dropped.
fn pruned_staircase(
    ctx: &QuotientPresentation,
    xs: &[Polynomial],
    t: u32,
    target: &Ideal,
) -> Result<FiltrationCertificate> {
    let base = staircase_filtration(ctx, xs, t)?;
    let mut n = target.clone();
    let mut kept = Vec::new();
    for g in &base.generators {
        let Element::Poly(p) = g else { unreachable!("staircase generators are polynomials") };
        if !n.contains(p)? {
            kept.push(p.clone());
            n = n.with_generators(std::slice::from_ref(p))?;
        }
    }
    let cert =
        FiltrationCertificate::for_quotient(ctx.clone(), target.clone(), base.ideal.clone(), kept).validated()?;
    if !cert.validated.is_valid() {
        return Err(Error::Internal(format!("pushed-forward staircase is invalid: {:?}", cert.validated)));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoeffField;
    use crate::parse::parse_poly;
    use crate::quasilength::variables;
    use crate::ring::PolyRing;

    fn ratio(a: u64, b: u64) -> Ratio<u64> {
        Ratio::new(a, b)
    }

    #[test]
    fn regular_sequence_limit_closure_is_constant() {
        let r = PolyRing::parse_vars(CoeffField::Rational, "x,y").unwrap();
        let ctx = QuotientPresentation::polynomial(&r);
        let lc = limit_closure(&ctx, &variables(&r, &[0, 1]), 2, DEFAULT_WINDOW).unwrap();
        assert!(lc.stabilized_within_window);
        assert!(lc.ideal.same_ideal(&Ideal::parse(&r, "x^2; y^2").unwrap()).unwrap());
        // oracle: the first colon step by hand
        let one_step = Ideal::parse(&r, "x^3; y^3").unwrap().colon_poly(&parse_poly("x*y", &r).unwrap()).unwrap();
        assert!(one_step.same_ideal(&lc.ideal).unwrap());
    }

    #[test]
    fn nonzerodivisor_limit_closure() {
        let r = PolyRing::parse_vars(CoeffField::Rational, "u,v").unwrap();
        let ctx = QuotientPresentation::new(&r, vec![parse_poly("u*v", &r).unwrap()]).unwrap();
        let x = parse_poly("u+v", &r).unwrap();
        let lc = limit_closure(&ctx, std::slice::from_ref(&x), 1, DEFAULT_WINDOW).unwrap();
        assert!(lc.ideal.same_ideal(&ctx.ideal(&[x]).unwrap()).unwrap());
    }

    #[test]
    fn unit_limit_closure() {
        let r = PolyRing::parse_vars(CoeffField::Rational, "x").unwrap();
        let ctx = QuotientPresentation::polynomial(&r);
        let lc = limit_closure(&ctx, &[Polynomial::one(&r)], 1, DEFAULT_WINDOW).unwrap();
        assert!(lc.ideal.is_unit().unwrap());
    }

    #[test]
    fn content_one_rows() {
        let r = PolyRing::parse_vars(CoeffField::Rational, "x,y").unwrap();
        let ctx = QuotientPresentation::polynomial(&r);
        let table = content_scan(&ctx, &variables(&r, &[0, 1]), 1..=3, ContentMode::Plain, DEFAULT_WINDOW).unwrap();
        let got: Vec<_> = table.rows.iter().map(|r| (r.t, r.upper, r.lower, r.upper_ratio, r.lower_ratio)).collect();
        assert_eq!(
            got,
            vec![
                (1, 1, 1, ratio(1, 1), ratio(1, 1)),
                (2, 4, 4, ratio(1, 1), ratio(1, 1)),
                (3, 9, 9, ratio(1, 1), ratio(1, 1))
            ]
        );
        let r1 = PolyRing::parse_vars(CoeffField::Rational, "x").unwrap();
        let t1 =
            content_scan(&QuotientPresentation::polynomial(&r1), &variables(&r1, &[0]), [5], ContentMode::Plain, 3)
                .unwrap();
        assert_eq!((t1.rows[0].upper, t1.rows[0].lower), (5, 5));
    }

    #[test]
    fn nodal_curve_row() {
        let r = PolyRing::parse_vars(CoeffField::prime(2).unwrap(), "x,y").unwrap();
        let ctx = QuotientPresentation::new(&r, vec![parse_poly("x*y", &r).unwrap()]).unwrap();
        let x = parse_poly("x+y", &r).unwrap();
        // oracle lengths
        // standard monomials 1, x, y, y^2 (basis (y^3, x^2 + y^2, x*y))
        assert_eq!(quotient::length(&ctx.ideal(&[x.pow(2)]).unwrap()).unwrap(), 4);
        assert_eq!(quotient::length(&ctx.ideal(std::slice::from_ref(&x)).unwrap()).unwrap(), 2);
        let table = content_scan(&ctx, &[x], [2], ContentMode::Plain, 3).unwrap();
        assert_eq!((table.rows[0].upper, table.rows[0].lower), (2, 2));
    }

    #[test]
    fn underline_matches_plain_for_regular_sequence() {
        let r = PolyRing::parse_vars(CoeffField::Rational, "x,y").unwrap();
        let ctx = QuotientPresentation::polynomial(&r);
        let xs = variables(&r, &[0, 1]);
        let plain = content_scan(&ctx, &xs, [2], ContentMode::Plain, 3).unwrap();
        let under = underline_content_scan(&ctx, &xs, [2], 3).unwrap();
        assert_eq!(plain.rows[0].upper, under.rows[0].upper);
        assert_eq!(plain.rows[0].lower, under.rows[0].lower);
        assert_eq!(under.rows[0].stabilized, Some(true));
    }

    #[test]
    fn degenerate_unit_row() {
        let r = PolyRing::parse_vars(CoeffField::Rational, "x").unwrap();
        let ctx = QuotientPresentation::polynomial(&r);
        let table = content_scan(&ctx, &[Polynomial::one(&r)], [1], ContentMode::LimitClosure, 3).unwrap();
        assert_eq!(table.rows[0].upper, 0);
    }
}
