//! Generic forcing algebras and Frobenius-power membership tests in
//! positive characteristic.

use std::collections::{HashMap, HashSet};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, Ideal};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::quasilength::FiltrationCertificate;
use crate::quotient::QuotientPresentation;
use crate::ring::PolyRing;

/// The triple `(R, I = (g_1, …, g_h), u)`.
#[derive(Clone, Debug)]
pub struct ForcingData {
    pub base: QuotientPresentation,
    pub generators: Vec<Polynomial>,
    pub target: Polynomial,
}

impl ForcingData {
    pub fn new(base: QuotientPresentation, generators: Vec<Polynomial>, target: Polynomial) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument("a forcing algebra needs at least one generator".into()));
        }
        for g in generators.iter().chain([&target]) {
            PolyRing::ensure_same(base.ring(), g.ring())?;
        }
        Ok(ForcingData { base, generators, target })
    }

    /// `(g_1, …, g_h)` in the ambient ring of the base.
    pub fn ideal(&self) -> Result<Ideal> {
        Ideal::new(self.base.ring(), self.generators.clone())
    }
}

#[derive(Clone, Debug)]
pub struct ForcingAlgebra {
    /// `R[Z_1, …, Z_h] / (relations of R, u − Σ Z_i g_i)`.
    pub presentation: QuotientPresentation,
    pub forcing_variables: Vec<String>,
    /// Requested names that collided and were replaced.
    pub warnings: Vec<String>,
}

impl ForcingAlgebra {
    /// Image of a base-ring polynomial.
    pub fn lift(&self, f: &Polynomial) -> Result<Polynomial> {
        f.to_ring(self.presentation.ring())
    }
}

/// Adjoin fresh variables `Z_1, …, Z_h` (or the given names) and the
/// relation `u − Σ Z_i g_i`. Colliding names are renamed with a warning.
pub fn generic_forcing_algebra(fd: &ForcingData, names: Option<&[String]>) -> Result<ForcingAlgebra> {
    let h = fd.generators.len();
    if h == 0 {
        return Err(Error::InvalidArgument("a forcing algebra needs at least one generator".into()));
    }
    let requested: Vec<String> = match names {
        Some(ns) if ns.len() != h => {
            return Err(Error::InvalidArgument(format!("{} forcing names given for {h} generators", ns.len())))
        }
        Some(ns) => ns.to_vec(),
        None => (1..=h).map(|i| format!("Z{i}")).collect(),
    };
    let base_ring = fd.base.ring();
    let mut taken: HashSet<String> = base_ring.vars().iter().cloned().collect();
    let mut chosen = Vec::with_capacity(h);
    let mut warnings = Vec::new();
    for name in requested {
        let fresh = if taken.contains(&name) || (name == "t" && base_ring.field().parameter().is_some()) {
            let renamed = (1..).map(|i| format!("{name}_{i}")).find(|n| !taken.contains(n)).unwrap();
            warnings.push(format!("forcing variable `{name}` is already in use; renamed to `{renamed}`"));
            renamed
        } else {
            name
        };
        taken.insert(fresh.clone());
        chosen.push(fresh);
    }

    let mut vars = base_ring.vars().to_vec();
    vars.extend(chosen.iter().cloned());
    let ambient = PolyRing::new(base_ring.field().clone(), vars)?;
    let lift = |f: &Polynomial| f.to_ring(&ambient);
    let n = base_ring.nvars();
    let mut relation = lift(&fd.target)?;
    for (i, g) in fd.generators.iter().enumerate() {
        relation = relation.sub(&Polynomial::var(&ambient, n + i).mul(&lift(g)?));
    }
    let mut relations = fd.base.relations().gens().iter().map(lift).collect::<Result<Vec<_>>>()?;
    relations.push(relation);
    let presentation = QuotientPresentation::new(&ambient, relations)?;

    let gens = fd.generators.iter().map(lift).collect::<Result<Vec<_>>>()?;
    if !presentation.ideal(&gens)?.contains(&lift(&fd.target)?)? {
        return Err(Error::Internal("target is not in the forced ideal".into()));
    }
    Ok(ForcingAlgebra { presentation, forcing_variables: chosen, warnings })
}

fn characteristic(ctx: &QuotientPresentation) -> Result<u64> {
    match ctx.ring().field().characteristic() {
        0 => Err(Error::CharacteristicZero),
        p => Ok(p),
    }
}

fn frobenius_power(p: u64, e: u32) -> Result<u32> {
    p.checked_pow(e)
        .filter(|&q| q <= u32::MAX as u64)
        .map(|q| q as u32)
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{e} is too large")))
}

/// `f^k` reduced modulo `gb` after every multiplication.
fn power_mod(f: &Polynomial, mut k: u32, gb: &GroebnerBasis) -> Result<Polynomial> {
    let mut base = gb.normal_form(f)?;
    let mut acc = gb.normal_form(&Polynomial::one(f.ring()))?;
    while k > 0 {
        crate::budget::check()?;
        if k & 1 == 1 {
            acc = gb.normal_form(&acc.mul(&base))?;
        }
        k >>= 1;
        if k > 0 {
            base = gb.normal_form(&base.mul(&base))?;
        }
    }
    Ok(acc)
}

fn is_one(c: &Polynomial) -> bool {
    c.as_constant().is_some_and(|k| c.field().is_one(&k)) && !c.is_zero()
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipRow {
    pub e: u32,
    pub q: u64,
    pub member: bool,
    /// Normal form of `c u^q` modulo `I^[q]` plus the relations.
    pub normal_form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipTable {
    pub multiplier: String,
    pub rows: Vec<MembershipRow>,
}

/// `c u^q ∈ I^[q]` for one Frobenius exponent, with the bracket power
/// basis precomputed.
struct FrobeniusTest {
    e: u32,
    q: u32,
    gb: std::sync::Arc<GroebnerBasis>,
    /// `u^q` reduced.
    power: Polynomial,
}

impl FrobeniusTest {
    fn new(ctx: &QuotientPresentation, ideal: &Ideal, u: &Polynomial, p: u64, e: u32) -> Result<Self> {
        crate::budget::check()?;
        let q = frobenius_power(p, e)?;
        let gb = ctx.extend(&ideal.bracket_power(q as u64)?)?.groebner()?;
        let power = power_mod(u, q, &gb)?;
        Ok(FrobeniusTest { e, q, gb, power })
    }

    fn row(&self, c: &Polynomial) -> Result<MembershipRow> {
        let nf = self.gb.normal_form(&c.mul(&self.power))?;
        Ok(MembershipRow { e: self.e, q: self.q as u64, member: nf.is_zero(), normal_form: nf.to_string() })
    }
}

fn check_inputs(ctx: &QuotientPresentation, ideal: &Ideal, polys: &[&Polynomial]) -> Result<u64> {
    let p = characteristic(ctx)?;
    PolyRing::ensure_same(ctx.ring(), ideal.ring())?;
    for f in polys {
        PolyRing::ensure_same(ctx.ring(), f.ring())?;
    }
    Ok(p)
}

/// Rows `c u^q ∈ I^[q] + relations` for each `e` in `es`.
pub fn tight_membership_rows(
    ctx: &QuotientPresentation,
    ideal: &Ideal,
    u: &Polynomial,
    c: &Polynomial,
    es: &[u32],
) -> Result<MembershipTable> {
    let p = check_inputs(ctx, ideal, &[u, c])?;
    if ctx.relations().contains(c)? {
        return Err(Error::InvalidArgument("the multiplier must be nonzero in the ring".into()));
    }
    let mut es = es.to_vec();
    es.sort_unstable();
    es.dedup();
    let rows = es.iter().map(|&e| FrobeniusTest::new(ctx, ideal, u, p, e)?.row(c)).collect::<Result<Vec<_>>>()?;
    if is_one(c) {
        // Raising c u^q ∈ I^[q] to the p-th power keeps it true for larger q.
        if let Some(first) = rows.iter().position(|r| r.member) {
            if let Some(bad) = rows[first..].iter().find(|r| !r.member) {
                return Err(Error::Internal(format!(
                    "u^q ∈ I^[q] holds at q = {} but fails at q = {}",
                    rows[first].q, bad.q
                )));
            }
        }
    }
    Ok(MembershipTable { multiplier: c.to_string(), rows })
}

/// [`tight_membership_rows`] for `e = 1, …, e_max`.
pub fn tight_membership_table(
    ctx: &QuotientPresentation,
    ideal: &Ideal,
    u: &Polynomial,
    c: &Polynomial,
    e_max: u32,
) -> Result<MembershipTable> {
    tight_membership_rows(ctx, ideal, u, c, &(1..=e_max).collect::<Vec<_>>())
}

/// Candidate monomials in ascending degree, lexicographically descending
/// within a degree.
fn candidate_monomials(ring: &std::sync::Arc<PolyRing>, degree_bound: u32) -> impl Iterator<Item = Polynomial> + '_ {
    (0..=degree_bound).flat_map(move |deg| {
        Monomial::of_degree(ring.nvars(), deg)
            .into_iter()
            .map(move |m| Polynomial::monomial(ring, m, ring.field().one()))
    })
}

/// First monomial `c ∉ relations` of degree at most `degree_bound` with
/// `c u^q ∈ I^[q]` for every `e` in `e_list`.
pub fn test_element_search(
    ctx: &QuotientPresentation,
    ideal: &Ideal,
    u: &Polynomial,
    degree_bound: u32,
    e_list: &[u32],
) -> Result<Option<Polynomial>> {
    let p = check_inputs(ctx, ideal, &[u])?;
    if e_list.is_empty() {
        return Err(Error::InvalidArgument("no Frobenius exponents to test".into()));
    }
    let mut es = e_list.to_vec();
    es.sort_unstable();
    es.dedup();
    let tests = es.iter().map(|&e| FrobeniusTest::new(ctx, ideal, u, p, e)).collect::<Result<Vec<_>>>()?;
    let relations = ctx.relations().groebner()?;
    for c in candidate_monomials(ctx.ring(), degree_bound) {
        crate::budget::check()?;
        if relations.contains(&c)? {
            continue;
        }
        let mut passes = true;
        for test in &tests {
            if !test.row(&c)?.member {
                passes = false;
                break;
            }
        }
        if passes {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LcRow {
    pub k: u32,
    /// `(x_1⋯x_d)^k ∈ (x_1^{k+1}, …, x_d^{k+1})`.
    pub vanished: bool,
}

/// Bounded check of whether `[1/(x_1⋯x_d)]` dies in top local cohomology:
/// the class vanishes iff some row has `vanished = true`.
pub fn lc_class_vanishing(ctx: &QuotientPresentation, xs: &[Polynomial], k_max: u32) -> Result<Vec<LcRow>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    if xs.is_empty() {
        return Err(Error::InvalidArgument("no parameters given".into()));
    }
    for x in xs {
        PolyRing::ensure_same(ctx.ring(), x.ring())?;
    }
    let product = xs.iter().fold(Polynomial::one(ctx.ring()), |acc, x| acc.mul(x));
    let mut rows: Vec<LcRow> = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        crate::budget::check()?;
        let ideal = ctx.ideal(&xs.iter().map(|x| x.pow(k + 1)).collect::<Vec<_>>())?;
        let vanished = ideal.contains(&product.pow(k))?;
        if !vanished && rows.last().is_some_and(|r| r.vanished) {
            return Err(Error::Internal(format!("class vanished at level {} but not at level {k}", k - 1)));
        }
        rows.push(LcRow { k, vanished });
    }
    Ok(rows)
}

/// Bounds for [`short_filtration_search`].
#[derive(Clone, Debug)]
pub struct FiltrationSearchOptions {
    /// Accept filtrations with at most this many factors.
    pub max_factors: usize,
    /// Candidate generators are monomials up to this degree.
    pub degree_bound: u32,
    /// Candidate tests before giving up.
    pub max_checks: usize,
}

#[derive(Clone, Debug)]
pub enum FiltrationSearchOutcome {
    Found(Box<FiltrationCertificate>),
    /// Every candidate chain within the bounds was tried.
    NoneWithinBounds,
    /// `max_checks` ran out.
    BudgetExhausted,
}

struct ShortSearch<'a> {
    killing: &'a Ideal,
    candidates: &'a [Polynomial],
    checks: usize,
    max_checks: usize,
    /// Canonical basis → most steps left when it was expanded.
    seen: HashMap<Vec<String>, usize>,
}

enum Step {
    Found(Vec<Polynomial>),
    Miss,
    Budget,
}

impl ShortSearch<'_> {
    fn dfs(&mut self, l: &Ideal, left: usize) -> Result<Step> {
        crate::budget::check()?;
        if left == 0 {
            return Ok(Step::Miss);
        }
        // The last generator must be a unit, which needs the killing ideal in L.
        if l.contains_ideal(self.killing)? {
            return Ok(Step::Found(vec![Polynomial::one(l.ring())]));
        }
        if left == 1 {
            return Ok(Step::Miss);
        }
        let key: Vec<String> = l.groebner()?.polys().iter().map(|p| p.to_string()).collect();
        if self.seen.get(&key).is_some_and(|&seen| seen >= left) {
            return Ok(Step::Miss);
        }
        self.seen.insert(key, left);
        let gb = l.groebner()?;
        for g in self.candidates.iter().filter(|g| !is_one(g)) {
            self.checks += 1;
            if self.checks > self.max_checks {
                return Ok(Step::Budget);
            }
            if gb.contains(g)? {
                continue;
            }
            let mut killed = true;
            for x in self.killing.gens() {
                if !gb.contains(&x.mul(g))? {
                    killed = false;
                    break;
                }
            }
            if !killed {
                continue;
            }
            let next = l.with_generators(std::slice::from_ref(g))?;
            match self.dfs(&next, left - 1)? {
                Step::Found(mut rest) => {
                    rest.insert(0, g.clone());
                    return Ok(Step::Found(rest));
                }
                Step::Budget => return Ok(Step::Budget),
                Step::Miss => {}
            }
        }
        Ok(Step::Miss)
    }
}

/// Look for a filtration of `R/(x_1^t, …, x_d^t)` by quotients of
/// `R/(x_1, …, x_d)` with few factors, using monomial generators. Shorter
/// filtrations are tried first.
pub fn short_filtration_search(
    ctx: &QuotientPresentation,
    xs: &[Polynomial],
    t: u32,
    opts: &FiltrationSearchOptions,
) -> Result<FiltrationSearchOutcome> {
    if t == 0 || xs.is_empty() {
        return Err(Error::InvalidArgument("need t ≥ 1 and at least one parameter".into()));
    }
    let ring = ctx.ring();
    let target = Ideal::new(ring, xs.iter().map(|x| x.pow(t)).collect())?;
    let killing = Ideal::new(ring, xs.to_vec())?;
    let start = ctx.extend(&target)?;
    let candidates: Vec<Polynomial> = candidate_monomials(ring, opts.degree_bound).collect();
    let mut search = ShortSearch {
        killing: &killing,
        candidates: &candidates,
        checks: 0,
        max_checks: opts.max_checks,
        seen: HashMap::new(),
    };
    for depth in 1..=opts.max_factors {
        search.seen.clear();
        match search.dfs(&start, depth)? {
            Step::Found(gens) => {
                let cert = FiltrationCertificate::for_quotient(ctx.clone(), target, killing, gens).validated()?;
                if !cert.validated.is_valid() {
                    return Err(Error::Internal(format!(
                        "search produced an invalid filtration: {:?}",
                        cert.validated
                    )));
                }
                return Ok(FiltrationSearchOutcome::Found(Box::new(cert)));
            }
            Step::Budget => return Ok(FiltrationSearchOutcome::BudgetExhausted),
            Step::Miss => {}
        }
    }
    Ok(FiltrationSearchOutcome::NoneWithinBounds)
}

#[derive(Clone, Debug)]
pub struct QseqConfig {
    /// Degree bound for the multiplier search.
    pub degree_bound: u32,
    pub e_list: Vec<u32>,
    /// Disproof search runs for `t = 2, …, t_max`.
    pub t_max: u32,
    /// Monomial degree bound for disproof candidates; `2·t·d` when unset.
    pub search_degree: Option<u32>,
    /// Candidate tests per value of `t`.
    pub max_checks: usize,
    pub names: Option<Vec<String>>,
}

impl Default for QseqConfig {
    fn default() -> Self {
        QseqConfig {
            degree_bound: 1,
            e_list: vec![1, 2],
            t_max: 2,
            search_degree: None,
            max_checks: 20_000,
            names: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QseqVerdict {
    Supported,
    Inconclusive,
    Disproved,
}

impl std::fmt::Display for QseqVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            QseqVerdict::Supported => "supported",
            QseqVerdict::Inconclusive => "inconclusive",
            QseqVerdict::Disproved => "disproved",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttemptOutcome {
    Found,
    NoneWithinBounds,
    BudgetExhausted,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisproofAttempt {
    pub t: u32,
    pub max_factors: usize,
    pub degree_bound: u32,
    pub outcome: AttemptOutcome,
}

fn certificate_json<S: Serializer>(cert: &Option<FiltrationCertificate>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match cert {
        Some(c) => c.to_json().serialize(s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QseqReport {
    pub verdict: QseqVerdict,
    pub summary: String,
    pub forcing_algebra: String,
    pub forcing_variables: Vec<String>,
    pub target_in_ideal: bool,
    pub multiplier: Option<String>,
    pub tested_q: Vec<u64>,
    pub attempts: Vec<DisproofAttempt>,
    #[serde(serialize_with = "certificate_json")]
    pub disproof: Option<FiltrationCertificate>,
    /// Hypotheses the caller asserts and bounded-search caveats.
    pub notes: Vec<String>,
}

/// Q-sequence evidence for the images of `params` in the generic forcing
/// algebra, in positive characteristic.
///
/// A multiplier `c` with `c u^q ∈ I^[q]` at every tested `q` supports the
/// Q-sequence property when the base is a complete local domain and
/// `params` is a system of parameters; neither hypothesis is checked. A
/// filtration of `S/(params^t)` with fewer than `t^d` factors disproves it
/// outright and takes precedence.
pub fn qseq_verdict_charp(fd: &ForcingData, params: &[Polynomial], config: &QseqConfig) -> Result<QseqReport> {
    let p = characteristic(&fd.base)?;
    if params.is_empty() {
        return Err(Error::InvalidArgument("no parameters given".into()));
    }
    for x in params {
        PolyRing::ensure_same(fd.base.ring(), x.ring())?;
    }
    let algebra = generic_forcing_algebra(fd, config.names.as_deref())?;
    let ideal = fd.ideal()?;
    let target_in_ideal = fd.base.contains(&ideal, &fd.target)?;
    let mut notes =
        vec!["caller asserts the base is a complete local domain and the parameters form a system of parameters"
            .to_string()];
    notes.extend(algebra.warnings.iter().cloned());
    let mut es = config.e_list.clone();
    es.sort_unstable();
    es.dedup();
    let tested_q = es.iter().map(|&e| frobenius_power(p, e).map(u64::from)).collect::<Result<Vec<_>>>()?;

    let mut report = QseqReport {
        verdict: QseqVerdict::Inconclusive,
        summary: String::new(),
        forcing_algebra: algebra.presentation.to_string(),
        forcing_variables: algebra.forcing_variables.clone(),
        target_in_ideal,
        multiplier: None,
        tested_q,
        attempts: Vec::new(),
        disproof: None,
        notes,
    };
    if target_in_ideal {
        report.verdict = QseqVerdict::Supported;
        report.multiplier = Some("1".into());
        report.summary = "Q-sequence: supported, u ∈ I so c = 1 works at every q".into();
        report.notes.push("u ∈ I: no short filtration can exist, disproof search skipped".into());
        return Ok(report);
    }

    let multiplier = test_element_search(&fd.base, &ideal, &fd.target, config.degree_bound, &es)?;
    report.multiplier = multiplier.as_ref().map(|c| c.to_string());

    let lifted = params.iter().map(|x| algebra.lift(x)).collect::<Result<Vec<_>>>()?;
    let d = params.len() as u32;
    for t in 2..=config.t_max {
        let max_factors = (t as usize).pow(d) - 1;
        let degree_bound = config.search_degree.unwrap_or(2 * t * d);
        let opts = FiltrationSearchOptions { max_factors, degree_bound, max_checks: config.max_checks };
        let outcome = short_filtration_search(&algebra.presentation, &lifted, t, &opts)?;
        let (kind, cert) = match outcome {
            FiltrationSearchOutcome::Found(c) => (AttemptOutcome::Found, Some(*c)),
            FiltrationSearchOutcome::NoneWithinBounds => (AttemptOutcome::NoneWithinBounds, None),
            FiltrationSearchOutcome::BudgetExhausted => (AttemptOutcome::BudgetExhausted, None),
        };
        report.attempts.push(DisproofAttempt { t, max_factors, degree_bound, outcome: kind });
        if cert.is_some() {
            report.disproof = cert;
            break;
        }
    }

    let max_q = report.tested_q.last().copied().unwrap_or(p);
    match (&report.disproof, &multiplier) {
        (Some(cert), _) => {
            let t = report.attempts.last().map(|a| a.t).unwrap_or(0);
            report.verdict = QseqVerdict::Disproved;
            report.summary = format!(
                "not a Q-sequence: S/(params^{t}) has a filtration with {} < {} factors",
                cert.factors(),
                (t as usize).pow(d)
            );
            if multiplier.is_some() {
                report.notes.push("the multiplier passed only the tested q and is overruled by the certificate".into());
            }
        }
        (None, Some(c)) => {
            report.verdict = QseqVerdict::Supported;
            report.summary =
                format!("Q-sequence: supported by the tight-closure criterion with c = {c} (tested q ≤ {max_q})");
        }
        (None, None) => {
            report.verdict = QseqVerdict::Inconclusive;
            report.summary = format!(
                "inconclusive: no multiplier of degree ≤ {} for q ≤ {max_q} and no short filtration found",
                config.degree_bound
            );
        }
    }
    if report.verdict == QseqVerdict::Supported && report.disproof.is_some() {
        return Err(Error::Internal("supported verdict alongside a disproof".into()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_poly_list};
    use crate::quasilength::variables;

    fn poly(ctx: &QuotientPresentation, s: &str) -> Polynomial {
        parse_poly(s, ctx.ring()).unwrap()
    }

    fn fermat7() -> QuotientPresentation {
        QuotientPresentation::parse("F7[x,y,z]/(x^3 + y^3 + z^3)").unwrap()
    }

    /// Every term `x^{3i} y^{3(n-i)}` of `(x^3 + y^3)^n` lies in `(x^q, y^q)`.
    fn binomial_oracle(n: u32, q: u32) -> bool {
        (0..=n).all(|i| 3 * i >= q || 3 * (n - i) >= q)
    }

    #[test]
    fn forcing_algebra_presentation() {
        let base = QuotientPresentation::parse("Q[x1,x2,x3]").unwrap();
        let gens = parse_poly_list("x1^3; x2^3; x3^3", base.ring()).unwrap();
        let u = poly(&base, "x1^2*x2^2*x3^2");
        let fd = ForcingData::new(base, gens, u).unwrap();
        let alg = generic_forcing_algebra(&fd, None).unwrap();
        assert_eq!(alg.forcing_variables, ["Z1", "Z2", "Z3"]);
        assert_eq!(alg.presentation.ring().vars(), ["x1", "x2", "x3", "Z1", "Z2", "Z3"]);
        let rel = parse_poly("x1^2*x2^2*x3^2 - Z1*x1^3 - Z2*x2^3 - Z3*x3^3", alg.presentation.ring()).unwrap();
        assert!(alg.presentation.relations().contains(&rel).unwrap());
        assert!(alg.warnings.is_empty());
    }

    #[test]
    fn forcing_names_collide_and_rename() {
        let base = QuotientPresentation::parse("F2[x,u]").unwrap();
        let fd = ForcingData::new(base.clone(), vec![poly(&base, "x")], poly(&base, "x*u")).unwrap();
        let names = vec!["u".to_string()];
        let alg = generic_forcing_algebra(&fd, Some(&names)).unwrap();
        assert_eq!(alg.forcing_variables, ["u_1"]);
        assert_eq!(alg.warnings.len(), 1);
    }

    #[test]
    fn trivial_forcing_algebra() {
        let base = QuotientPresentation::parse("Q[x]").unwrap();
        let g = poly(&base, "x");
        let fd = ForcingData::new(base, vec![g.clone()], g).unwrap();
        let alg = generic_forcing_algebra(&fd, None).unwrap();
        let rel = parse_poly("x - Z1*x", alg.presentation.ring()).unwrap();
        assert!(alg.presentation.relations().contains(&rel).unwrap());
    }

    #[test]
    fn fermat_cubic_table_matches_binomial_oracle() {
        let ctx = fermat7();
        let i = Ideal::parse(ctx.ring(), "x; y").unwrap();
        let table = tight_membership_table(&ctx, &i, &poly(&ctx, "z^2"), &poly(&ctx, "z"), 2).unwrap();
        // z^{2q+1} = z^{3n} = (-(x^3 + y^3))^n with n = 5, 33
        for (row, n) in table.rows.iter().zip([5, 33]) {
            assert_eq!(2 * row.q + 1, 3 * n as u64);
            assert!(binomial_oracle(n, row.q as u32));
            assert!(row.member, "q = {}", row.q);
        }
        assert_eq!(table.rows.iter().map(|r| r.q).collect::<Vec<_>>(), [7, 49]);
    }

    #[test]
    fn members_stay_members() {
        let ctx = fermat7();
        let i = Ideal::parse(ctx.ring(), "x; y").unwrap();
        let table = tight_membership_table(&ctx, &i, &poly(&ctx, "x*z + y"), &poly(&ctx, "z^2 + 1"), 2).unwrap();
        assert!(table.rows.iter().all(|r| r.member && r.normal_form == "0"));
    }

    #[test]
    fn char_zero_is_rejected() {
        let ctx = QuotientPresentation::parse("Q[x,y]").unwrap();
        let i = Ideal::parse(ctx.ring(), "x").unwrap();
        let u = poly(&ctx, "y");
        assert_eq!(tight_membership_table(&ctx, &i, &u, &u, 1).unwrap_err(), Error::CharacteristicZero);
        assert_eq!(test_element_search(&ctx, &i, &u, 1, &[1]).unwrap_err(), Error::CharacteristicZero);
    }

    #[test]
    fn test_element_for_fermat_cubic() {
        let ctx = fermat7();
        let i = Ideal::parse(ctx.ring(), "x; y").unwrap();
        let u = poly(&ctx, "z^2");
        let one = Polynomial::one(ctx.ring());
        // c = 1 fails at q = 7: z^14 leaves x^6 y^6 z^2 with coefficient 6
        let plain = tight_membership_table(&ctx, &i, &u, &one, 1).unwrap();
        assert!(!plain.rows[0].member);
        let c = test_element_search(&ctx, &i, &u, 1, &[1, 2]).unwrap().unwrap();
        assert_eq!(c.total_degree(), Some(1));
        assert_eq!(c.to_string(), "x");
        let z = tight_membership_rows(&ctx, &i, &u, &poly(&ctx, "z"), &[1, 2]).unwrap();
        assert!(z.rows.iter().all(|r| r.member));
    }

    #[test]
    fn test_element_is_one_for_members() {
        let ctx = fermat7();
        let i = Ideal::parse(ctx.ring(), "x; y").unwrap();
        let c = test_element_search(&ctx, &i, &poly(&ctx, "x*y + y^2"), 2, &[1, 2]).unwrap().unwrap();
        assert_eq!(c.to_string(), "1");
    }

    #[test]
    fn class_survives_in_polynomial_ring() {
        let ctx = QuotientPresentation::parse("Q[x,y]").unwrap();
        let rows = lc_class_vanishing(&ctx, &variables(ctx.ring(), &[0, 1]), 3).unwrap();
        assert!(rows.iter().all(|r| !r.vanished));
    }

    #[test]
    fn class_dies_when_relation_rewrites_xy() {
        let ctx = QuotientPresentation::parse("Q[x,y,Z1,Z2]/(x*y - Z1*x^2 - Z2*y^2)").unwrap();
        let rows = lc_class_vanishing(&ctx, &variables(ctx.ring(), &[0, 1]), 3).unwrap();
        assert_eq!(rows.iter().map(|r| r.vanished).collect::<Vec<_>>(), [true, true, true]);
    }

    #[test]
    fn class_survives_in_cubic_forcing_ring() {
        let ctx = QuotientPresentation::parse("Q[x,y,z,u,v]/(x^3 + y^3 + z^3; z^2 - u*x - v*y)").unwrap();
        let rows = lc_class_vanishing(&ctx, &variables(ctx.ring(), &[0, 1]), 4).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| !r.vanished));
    }

    #[test]
    fn regular_ring_disproof() {
        let base = QuotientPresentation::parse("F2[x,y]").unwrap();
        let gens = parse_poly_list("x^2; y^2", base.ring()).unwrap();
        let fd = ForcingData::new(base.clone(), gens, poly(&base, "x*y")).unwrap();
        let params = variables(base.ring(), &[0, 1]);
        let report = qseq_verdict_charp(&fd, &params, &QseqConfig::default()).unwrap();
        assert_eq!(report.verdict, QseqVerdict::Disproved);
        let cert = report.disproof.as_ref().unwrap();
        assert!(cert.validated.is_valid());
        assert_eq!(cert.factors(), 3);
        assert_eq!(cert.describe_generators(), ["x", "y", "1"]);
    }

    #[test]
    fn fermat_forcing_supported() {
        let base = fermat7();
        let gens = parse_poly_list("x; y", base.ring()).unwrap();
        let fd = ForcingData::new(base.clone(), gens, poly(&base, "z^2")).unwrap();
        let params = variables(base.ring(), &[0, 1]);
        let report = qseq_verdict_charp(&fd, &params, &QseqConfig::default()).unwrap();
        assert_eq!(report.verdict, QseqVerdict::Supported, "{report:?}");
        assert_eq!(report.multiplier.as_deref(), Some("x"));
        assert_eq!(report.tested_q, [7, 49]);
        assert!(report.disproof.is_none());
    }

    #[test]
    fn members_are_trivially_supported() {
        let base = QuotientPresentation::parse("F3[x,y]").unwrap();
        let gens = parse_poly_list("x; y", base.ring()).unwrap();
        let fd = ForcingData::new(base.clone(), gens, poly(&base, "x*y")).unwrap();
        let report = qseq_verdict_charp(&fd, &variables(base.ring(), &[0, 1]), &QseqConfig::default()).unwrap();
        assert_eq!(report.verdict, QseqVerdict::Supported);
        assert_eq!(report.multiplier.as_deref(), Some("1"));
        assert!(report.attempts.is_empty());
    }

    #[test]
    fn report_serializes() {
        let base = QuotientPresentation::parse("F2[x,y]").unwrap();
        let gens = parse_poly_list("x^2; y^2", base.ring()).unwrap();
        let fd = ForcingData::new(base.clone(), gens, poly(&base, "x*y")).unwrap();
        let report = qseq_verdict_charp(&fd, &variables(base.ring(), &[0, 1]), &QseqConfig::default()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["verdict"], "disproved");
        assert_eq!(json["disproof"]["generators"].as_array().unwrap().len(), 3);
    }
}
