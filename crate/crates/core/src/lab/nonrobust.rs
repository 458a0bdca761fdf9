//! The ideal `(xu, yv, xv + yu)` of `A[x,y,u,v]`, whose top local
//! cohomology is nonzero but has content 0.

use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use super::ExampleReport;
use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::groebner::Ideal;
use crate::poly::Polynomial;
use crate::quasilength::FiltrationCertificate;
use crate::quotient::QuotientPresentation;
use crate::ring::PolyRing;

/// Sign of `yu` in the third generator `x_3 = xv ± yu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            _ => Err(Error::InvalidArgument(format!("sign must be `plus` or `minus`, got `{s}`"))),
        }
    }
}

/// `A[x,y,u,v]` with `x_1 = xu`, `x_2 = yv`, `x_3 = xv ± yu`.
#[derive(Clone, Debug)]
pub struct XuYvRing {
    pub ring: Arc<PolyRing>,
    pub x: Polynomial,
    pub y: Polynomial,
    pub u: Polynomial,
    pub v: Polynomial,
    pub sign: Sign,
}

impl XuYvRing {
    pub fn new(field: CoeffField, sign: Sign) -> Result<Self> {
        let ring = PolyRing::new(field, ["x", "y", "u", "v"].map(String::from).to_vec())?;
        let var = |i| Polynomial::var(&ring, i);
        Ok(XuYvRing { x: var(0), y: var(1), u: var(2), v: var(3), ring, sign })
    }

    pub fn x1(&self) -> Polynomial {
        self.x.mul(&self.u)
    }

    pub fn x2(&self) -> Polynomial {
        self.y.mul(&self.v)
    }

    pub fn xv(&self) -> Polynomial {
        self.x.mul(&self.v)
    }

    pub fn yu(&self) -> Polynomial {
        self.y.mul(&self.u)
    }

    pub fn x3(&self) -> Polynomial {
        match self.sign {
            Sign::Plus => self.xv().add(&self.yu()),
            Sign::Minus => self.xv().sub(&self.yu()),
        }
    }

    /// `x^e v^e + y^e u^e`, taken literally (so `2` at `e = 0`).
    pub fn h(&self, e: u32) -> Polynomial {
        self.xv().pow(e).add(&self.yu().pow(e))
    }

    pub fn ideal(&self) -> Result<Ideal> {
        Ideal::new(&self.ring, vec![self.x1(), self.x2(), self.x3()])
    }

    /// `I_t = (x_1^t, x_2^t, x_3^t)`.
    pub fn i_t(&self, t: u32) -> Result<Ideal> {
        Ideal::new(&self.ring, vec![self.x1().pow(t), self.x2().pow(t), self.x3().pow(t)])
    }

    /// `I'_t = (x_1^t, x_2^t, x^t v^t + y^t u^t)`.
    pub fn i_prime(&self, t: u32) -> Result<Ideal> {
        Ideal::new(&self.ring, self.i_prime_row(t).to_vec())
    }

    fn i_prime_row(&self, t: u32) -> [Polynomial; 3] {
        [self.x1().pow(t), self.x2().pow(t), self.h(t)]
    }

    /// `(xu)^s (yv)^s (x^s v^s + y^s u^s)`.
    pub fn det(&self, s: u32) -> Polynomial {
        self.x1().pow(s).mul(&self.x2().pow(s)).mul(&self.h(s))
    }
}

/// Containments between `I_t` and `I'_t`, with the identities expressing
/// `(xv)^2` and `(yu)^2` through `x_1, x_2, x_3`.
pub fn comparison(t: u32, field: CoeffField, sign: Sign) -> Result<ExampleReport> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    let r = XuYvRing::new(field, sign)?;
    let mut report = ExampleReport::new("comparison");
    report.param("t", t).param("field", r.ring.field().to_string()).param("sign", sign);
    let (x1, x2, x3) = (r.x1(), r.x2(), r.x3());
    let base = x3.pow(2).sub(&x1.mul(&x2));
    let id1 = r.xv().pow(2) == base.sub(&r.yu().mul(&x3));
    let id2 = r.yu().pow(2) == base.sub(&r.xv().mul(&x3));
    report.check("(xv)^2 = x3^2 - yu·x3 - x1·x2 and (yu)^2 = x3^2 - xv·x3 - x1·x2", true, id1 && id2);
    let i = r.ideal()?;
    let members = i.contains(&r.xv().pow(2))? && i.contains(&r.yu().pow(2))?;
    report.check("(xv)^2, (yu)^2 ∈ I (membership)", true, members);
    report.check(format!("I_{} ⊆ I'_{t}", 4 * t), true, r.i_prime(t)?.contains_ideal(&r.i_t(4 * t)?)?);
    report.check(format!("I'_{} ⊆ I_{t}", 12 * t), true, r.i_t(t)?.contains_ideal(&r.i_prime(12 * t)?)?);
    if sign == Sign::Minus && r.ring.field().characteristic() != 2 {
        report.note("with x3 = xv - yu the displayed identities fail while the memberships still hold");
    }
    Ok(report)
}

/// Determinant of a 3×3 polynomial matrix by cofactor expansion.
fn det3(m: &[[Polynomial; 3]; 3]) -> Polynomial {
    let minor = |a: usize, b: usize| m[1][a].mul(&m[2][b]).sub(&m[1][b].mul(&m[2][a]));
    m[0][0].mul(&minor(1, 2)).sub(&m[0][1].mul(&minor(0, 2))).add(&m[0][2].mul(&minor(0, 1)))
}

/// The factorization of the generator row of `I'_{t+s}` as the row of
/// `I'_t` times an upper-triangular matrix, for `s ≥ t`.
pub fn matrix_identity(s: u32, t: u32, field: CoeffField) -> Result<ExampleReport> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    if s < t {
        return Err(Error::InvalidArgument(format!("need s ≥ t (u^(s-t) is undefined), got s = {s}, t = {t}")));
    }
    let r = XuYvRing::new(field, Sign::Plus)?;
    let mut report = ExampleReport::new("matrix_identity");
    report.param("s", s).param("t", t).param("field", r.ring.field().to_string());
    let zero = Polynomial::zero(&r.ring);
    let m = [
        [r.x1().pow(s), zero.clone(), r.y.pow(s).mul(&r.u.pow(s - t)).mul(&r.v.pow(t)).neg()],
        [zero.clone(), r.x2().pow(s), r.x.pow(s).mul(&r.u.pow(t)).mul(&r.v.pow(s - t)).neg()],
        [zero.clone(), zero, r.h(s)],
    ];
    let row = r.i_prime_row(t);
    let target = r.i_prime_row(t + s);
    for (j, want) in target.iter().enumerate() {
        let got = (0..3).fold(Polynomial::zero(&r.ring), |acc, i| acc.add(&row[i].mul(&m[i][j])));
        report.check(
            format!("column {}: row(I'_{t})·M = generator {} of I'_{}", j + 1, j + 1, t + s),
            true,
            got == *want,
        );
    }
    let det = det3(&m);
    report.check("det M = (xu)^s (yv)^s (x^s v^s + y^s u^s)", true, det == r.det(s));
    let scaled = Ideal::new(&r.ring, r.i_prime_row(t).iter().map(|g| g.mul(&det)).collect())?;
    report.check(format!("det M · I'_{t} ⊆ I'_{}", t + s), true, r.i_prime(t + s)?.contains_ideal(&scaled)?);
    report.artifact("determinant", det.to_string());
    Ok(report)
}

/// `g(e_1, e_2, e_3) = (xu)^{e_1} (yv)^{e_2} (x^{e_3} v^{e_3} + y^{e_3} u^{e_3})`,
/// with the last factor read as `1` when `e_3 = 0`.
pub fn generator(r: &XuYvRing, e: [u32; 3]) -> Polynomial {
    let base = r.x1().pow(e[0]).mul(&r.x2().pow(e[1]));
    if e[2] == 0 {
        base
    } else {
        base.mul(&r.h(e[2]))
    }
}

/// Exponent triples in `[0, s+t)^3` not all `≥ s`, ordered by `e_1 + e_2`
/// descending, then `e_1` descending, then `e_3` descending.
pub fn filtration_generators(s: u32, t: u32) -> Vec<[u32; 3]> {
    let n = s + t;
    let mut out: Vec<[u32; 3]> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| [a, b, c])))
        .filter(|e| !e.iter().all(|&k| k >= s))
        .collect();
    out.sort_by(|a, b| (b[0] + b[1]).cmp(&(a[0] + a[1])).then(b[0].cmp(&a[0])).then(b[2].cmp(&a[2])));
    out
}

/// The filtration of `R/(I'_{s+t}, det)` with `(s+t)^3 - t^3` factors
/// killed by `I = (xu, yv, xv + yu)`.
pub fn special_filtration(s: u32, t: u32, field: CoeffField) -> Result<(FiltrationCertificate, ExampleReport)> {
    if s < 2 || t == 0 {
        return Err(Error::InvalidArgument(format!("need s ≥ 2 and t ≥ 1, got s = {s}, t = {t}")));
    }
    let r = XuYvRing::new(field, Sign::Plus)?;
    let mut report = ExampleReport::new("special_filtration");
    report.param("s", s).param("t", t).param("field", r.ring.field().to_string());
    let exps = filtration_generators(s, t);
    let expected = ((s + t).pow(3) - t.pow(3)) as usize;
    report.check("number of generators = (s+t)^3 - t^3", expected, exps.len());
    let first = [s + t - 1, s + t - 1, s - 1];
    report.check("first generator", format!("{first:?}"), format!("{:?}", exps[0]));

    // x3·g(e) = g(e1, e2, e3 + 1) + (xu)(yv)·(xu)^{e1}(yv)^{e2}(x^{e3-1}v^{e3-1} + y^{e3-1}u^{e3-1})
    let x3 = r.x3();
    let mut cases = Vec::new();
    if let Some(e) = exps.iter().find(|e| e[2] == 0) {
        cases.push(("e3 = 0", *e));
    }
    if let Some(e) = exps.iter().find(|e| e[2] > 0 && e[2] < s - 1) {
        cases.push(("0 < e3 < s-1", *e));
    }
    if let Some(e) = exps.iter().find(|e| e[2] == s - 1 && s > 1) {
        cases.push(("e3 = s-1", *e));
    }
    for (label, e) in cases {
        let lhs = x3.mul(&generator(&r, e));
        let rhs = if e[2] == 0 {
            generator(&r, [e[0], e[1], 1])
        } else {
            let lifted = r.x1().pow(e[0] + 1).mul(&r.x2().pow(e[1] + 1)).mul(&r.h(e[2] - 1));
            generator(&r, [e[0], e[1], e[2] + 1]).add(&lifted)
        };
        report.check(format!("rewriting identity for {label} at e = {e:?}"), true, lhs == rhs);
    }

    let ctx = QuotientPresentation::polynomial(&r.ring);
    let target = r.i_prime(s + t)?.with_generators(&[r.det(s)])?;
    let gens = exps.iter().map(|&e| generator(&r, e)).collect();
    let cert = FiltrationCertificate::for_quotient(ctx, target, r.ideal()?, gens).validated()?;
    report.check("filtration validates", "valid", verdict_label(&cert));
    report.note("only the finite filtration is checked; identifying its image in local cohomology needs s large and no effective bound is known");
    report.artifact("certificate", cert.to_json());
    Ok((cert, report))
}

pub(crate) fn verdict_label(cert: &FiltrationCertificate) -> String {
    match &cert.validated {
        crate::quasilength::Verdict::Valid => "valid".into(),
        crate::quasilength::Verdict::Unchecked => "unchecked".into(),
        crate::quasilength::Verdict::Invalid { step, witness } => format!("invalid at step {step}: {witness}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> CoeffField {
        CoeffField::prime(2).unwrap()
    }

    #[test]
    fn comparison_holds_over_f2_and_q() {
        for field in [f2(), CoeffField::Rational] {
            let report = comparison(1, field, Sign::Plus).unwrap();
            assert!(report.passed(), "{report}");
            assert_eq!(report.checks.len(), 4);
        }
        assert!(comparison(2, f2(), Sign::Plus).unwrap().passed());
    }

    #[test]
    fn minus_sign_breaks_only_the_identities() {
        let report = comparison(1, CoeffField::Rational, Sign::Minus).unwrap();
        let passes: Vec<bool> = report.checks.iter().map(|c| c.pass).collect();
        assert_eq!(passes, [false, true, true, true]);
    }

    #[test]
    fn matrix_identity_small_cases() {
        for (s, t) in [(1, 1), (2, 1), (3, 2)] {
            let report = matrix_identity(s, t, f2()).unwrap();
            assert!(report.passed(), "{report}");
        }
        assert!(matrix_identity(2, 1, CoeffField::Rational).unwrap().passed());
        assert!(matrix_identity(1, 2, f2()).is_err());
    }

    #[test]
    fn determinant_by_hand() {
        // upper triangular: the determinant is the product of the diagonal
        let r = XuYvRing::new(CoeffField::Rational, Sign::Plus).unwrap();
        let diag = r.x1().pow(3).mul(&r.x2().pow(3)).mul(&r.h(3));
        assert_eq!(diag, r.det(3));
    }

    #[test]
    fn generator_counts() {
        assert_eq!(filtration_generators(2, 1).len(), 26);
        assert_eq!(filtration_generators(2, 2).len(), 56);
        assert_eq!(filtration_generators(3, 1).len(), 63);
        let g = filtration_generators(3, 2);
        assert_eq!(g[0], [4, 4, 2]);
        assert_eq!(g[1], [4, 4, 1]);
    }

    #[test]
    fn case_split_identities_over_q() {
        // s = 3 has all three cases: e3 = 0, e3 = 1 (0 < e3 < 2), e3 = 2
        let r = XuYvRing::new(CoeffField::Rational, Sign::Plus).unwrap();
        let x3 = r.x3();
        let lifted = |e: [u32; 3]| r.x1().pow(e[0] + 1).mul(&r.x2().pow(e[1] + 1)).mul(&r.h(e[2] - 1));
        assert_eq!(x3.mul(&generator(&r, [1, 0, 0])), generator(&r, [1, 0, 1]));
        // e3 = 1: the lower term carries the literal factor x^0 v^0 + y^0 u^0 = 2
        let e = [0, 2, 1];
        assert_eq!(x3.mul(&generator(&r, e)), generator(&r, [0, 2, 2]).add(&lifted(e)));
        assert_eq!(lifted(e), generator(&r, [1, 3, 0]).scale(&CoeffField::Rational.from_i64(2)));
        let e = [2, 1, 2];
        assert_eq!(x3.mul(&generator(&r, e)), generator(&r, [2, 1, 3]).add(&generator(&r, [3, 2, 1])));
    }

    #[test]
    fn special_filtration_validates() {
        let (cert, report) = special_filtration(2, 1, f2()).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(cert.factors(), 26);
        assert!(cert.validated.is_valid());
        let mut reversed = cert.clone();
        reversed.generators.reverse();
        assert!(!reversed.validated().unwrap().validated.is_valid());
    }
}
