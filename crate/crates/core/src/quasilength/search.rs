//! Shortest-path search over the submodule lattice.
//!
//! From a submodule `S` one may step to `S + R v` for any `v ∉ S` with
//! `I v ⊆ S`. The number of steps needed to reach `M` from `S` can only
//! shrink when `S` grows, so only inclusion-maximal successors are
//! expanded. The heuristic `max(μ(M/S), ⌈dim(M/S)/λ⌉)`, with `λ` bounding
//! the length of any cyclic factor, is consistent, so A* returns a minimum.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use serde::Serialize;

use super::cert::{FiltrationCertificate, ModuleContext};
use crate::error::{Error, Result};
use crate::field::{Coeff, CoeffField};
use crate::groebner::Ideal;
use crate::linalg::{self, kernel, minimal_polynomial, Matrix, Subspace, Vector};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::quotient::{self, VectorModule};

/// Largest module dimension searched exactly by default: the largest `d`
/// with `q^d ≤ 3^8` for a finite field of order `q`, and 8 otherwise.
pub fn dimension_cap(field: &CoeffField) -> usize {
    const POINTS: u64 = 6561;
    match field.order() {
        Some(q) => {
            let mut d = 0;
            let mut size = 1u64;
            while size.saturating_mul(q) <= POINTS {
                size *= q;
                d += 1;
            }
            d
        }
        None => 8,
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Overrides [`dimension_cap`].
    pub max_dim: Option<usize>,
    /// Maximum number of expanded submodules.
    pub max_states: usize,
    /// Candidate generators over infinite fields (in module coordinates).
    pub pool: Option<Vec<Vector>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_dim: None, max_states: 200_000, pool: None }
    }
}

/// Result of the lattice search. `exact` is false when the candidate pool
/// was restricted (infinite fields), in which case `value` is an upper
/// bound.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub value: usize,
    pub certificate: FiltrationCertificate,
    pub exact: bool,
    pub states: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerMethod {
    MinGenerators,
    LengthRatio,
}

#[derive(Clone, Debug)]
pub struct QuasilengthBounds {
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
    pub upper_certificate: FiltrationCertificate,
    pub lower_method: LowerMethod,
    /// Why the exact search was skipped or stopped, if it was.
    pub note: Option<String>,
}

struct Searcher<'a> {
    m: &'a VectorModule,
    field: CoeffField,
    /// Columns of the matrices of the generators of `I`.
    ideal_columns: Vec<Vec<Vector>>,
    maximal: Subspace,
    factor_bound: usize,
    pool: Option<Vec<Vector>>,
}

impl<'a> Searcher<'a> {
    fn new(m: &'a VectorModule, ideal: &Ideal, pool: Option<Vec<Vector>>) -> Result<Self> {
        let field = m.field().clone();
        let mut ideal_columns = Vec::new();
        for g in ideal.gens() {
            let a = m.apply_poly(g)?;
            ideal_columns.push((0..m.dim()).map(|k| a.column(k)).collect());
        }
        let mut maximal = Subspace::zero(m.dim());
        for a in m.actions() {
            for k in 0..m.dim() {
                maximal.insert(&field, &a.column(k));
            }
        }
        let factor_bound = factor_bound(m, ideal)?;
        Ok(Searcher { m, field, ideal_columns, maximal, factor_bound, pool })
    }

    /// `(S :_M I)`.
    fn colon(&self, s: &Subspace) -> Subspace {
        let free = s.free_columns();
        if free.is_empty() || self.ideal_columns.is_empty() {
            return Subspace::full(&self.field, self.m.dim());
        }
        let mut rows = Vec::new();
        for cols in &self.ideal_columns {
            let reduced: Vec<Vector> = cols.iter().map(|c| s.reduce(&self.field, c)).collect();
            for &r in &free {
                rows.push(reduced.iter().map(|c| c[r].clone()).collect());
            }
        }
        kernel(&self.field, &Matrix::from_rows(rows, self.m.dim()))
    }

    fn extend(&self, s: &Subspace, v: &Vector) -> Subspace {
        let mut t = s.clone();
        let mut queue = vec![v.clone()];
        t.insert(&self.field, v);
        while let Some(w) = queue.pop() {
            for a in self.m.actions() {
                let u = a.mul_vec(&self.field, &w);
                if t.insert(&self.field, &u) {
                    queue.push(u);
                }
            }
        }
        t
    }

    fn heuristic(&self, s: &Subspace) -> usize {
        let rest = self.m.dim() - s.dim();
        if rest == 0 {
            return 0;
        }
        let mingens = self.m.dim() - s.sum(&self.field, &self.maximal).dim();
        mingens.max(rest.div_ceil(self.factor_bound)).max(1)
    }

    fn candidates(&self, s: &Subspace) -> Vec<Vector> {
        let c = self.colon(s);
        let mut complement = Subspace::zero(self.m.dim());
        for b in c.basis() {
            complement.insert(&self.field, &s.reduce(&self.field, b));
        }
        let mut out: Vec<Vector> = complement.basis().to_vec();
        match (&self.pool, self.field.elements()) {
            (None, Some(elements)) => out.extend(projective_points(&self.field, &elements, complement.basis())),
            _ => {
                if let Some(pool) = &self.pool {
                    out.extend(
                        pool.iter().filter(|v| c.contains(&self.field, v) && !s.contains(&self.field, v)).cloned(),
                    );
                }
            }
        }
        out
    }

    /// Inclusion-maximal successors with a witnessing generator, in
    /// candidate order.
    fn successors(&self, s: &Subspace) -> Vec<(Vector, Subspace)> {
        let mut seen: HashSet<Subspace> = HashSet::new();
        let mut found: Vec<(Vector, Subspace)> = Vec::new();
        for v in self.candidates(s) {
            let t = self.extend(s, &v);
            if seen.insert(t.clone()) {
                found.push((v, t));
            }
        }
        let mut order: Vec<usize> = (0..found.len()).collect();
        order.sort_by_key(|&i| Reverse(found[i].1.dim()));
        let mut keep = vec![false; found.len()];
        let mut kept: Vec<usize> = Vec::new();
        for i in order {
            let t = &found[i].1;
            if !kept.iter().any(|&k| found[k].1.dim() > t.dim() && found[k].1.contains_subspace(&self.field, t)) {
                keep[i] = true;
                kept.push(i);
            }
        }
        found.into_iter().zip(keep).filter(|(_, k)| *k).map(|(f, _)| f).collect()
    }

    fn check_nilpotent(&self) -> Result<()> {
        let mut current = Subspace::full(&self.field, self.m.dim());
        loop {
            let mut next = Subspace::zero(self.m.dim());
            for cols in &self.ideal_columns {
                let a = Matrix::from_columns(&self.field, cols, self.m.dim());
                for v in current.basis() {
                    next.insert(&self.field, &a.mul_vec(&self.field, v));
                }
            }
            if next.dim() == 0 {
                return Ok(());
            }
            if next.dim() == current.dim() {
                return Err(Error::InvalidArgument(
                    "no filtration exists: the ideal does not act nilpotently on the module".into(),
                ));
            }
            current = next;
        }
    }
}

/// Upper bound for the length of any cyclic factor killed by `I`:
/// `λ(R/(I + (μ_1(x_1), …, μ_n(x_n))))` where `μ_i` is the minimal
/// polynomial of the action of `x_i`, which annihilates `M`.
fn factor_bound(m: &VectorModule, ideal: &Ideal) -> Result<usize> {
    if m.dim() == 0 {
        return Ok(1);
    }
    let ring = m.ring();
    let field = m.field();
    let n = ring.nvars();
    let mut extra = Vec::new();
    for (i, a) in m.actions().iter().enumerate() {
        let mu = minimal_polynomial(field, a);
        let terms: Vec<(Monomial, Coeff)> =
            mu.into_iter().enumerate().map(|(k, c)| (Monomial::var_pow(n, i, k as u32), c)).collect();
        extra.push(Polynomial::from_terms(ring, terms));
    }
    let j = ideal.with_generators(&extra)?;
    Ok(quotient::length(&j)?.clamp(1, m.dim()))
}

/// One representative per line of the span of `basis`: the first nonzero
/// coefficient is 1.
fn projective_points(field: &CoeffField, elements: &[Coeff], basis: &[Vector]) -> Vec<Vector> {
    let q = elements.len() as u64;
    let mut out = Vec::new();
    for lead in 0..basis.len() {
        let tail = &basis[lead + 1..];
        for code in 0..q.pow(tail.len() as u32) {
            let mut v = basis[lead].clone();
            let mut c = code;
            for b in tail {
                linalg::add_scaled(field, &mut v, &elements[(c % q) as usize], b);
                c /= q;
            }
            out.push(v);
        }
    }
    out
}

fn default_pool(field: &CoeffField, dim: usize) -> Vec<Vector> {
    let values = [field.zero(), field.one(), field.neg(&field.one())];
    let mut out = Vec::new();
    let total = 3u64.pow(dim as u32);
    for code in 1..total {
        let mut v = Vec::with_capacity(dim);
        let mut c = code;
        for _ in 0..dim {
            v.push(values[(c % 3) as usize].clone());
            c /= 3;
        }
        let first = v.iter().position(|x| !field.is_zero(x)).expect("nonzero code");
        if field.is_one(&v[first]) {
            out.push(v);
        }
    }
    out
}

struct Node {
    space: Subspace,
    g: usize,
    parent: Option<usize>,
    generator: Option<Vector>,
    closed: bool,
}

/// Minimal number of factors in an `I`-filtration of the module, with an
/// optimal certificate.
pub fn quasilength_exact(ctx: &ModuleContext, ideal: &Ideal) -> Result<SearchResult> {
    quasilength_exact_with(ctx, ideal, &SearchOptions::default())
}

pub fn quasilength_exact_with(ctx: &ModuleContext, ideal: &Ideal, opts: &SearchOptions) -> Result<SearchResult> {
    let m = ctx.module();
    crate::ring::PolyRing::ensure_same(m.ring(), ideal.ring())?;
    let cap = opts.max_dim.unwrap_or_else(|| dimension_cap(m.field()));
    if m.dim() > cap {
        return Err(Error::SearchLimit(format!("module dimension {} exceeds the exact-search cap {cap}", m.dim())));
    }
    let finite = m.field().is_finite() && opts.pool.is_none();
    let pool = if finite { None } else { Some(opts.pool.clone().unwrap_or_else(|| default_pool(m.field(), m.dim()))) };
    let searcher = Searcher::new(m, ideal, pool)?;
    searcher.check_nilpotent()?;

    let start = Subspace::zero(m.dim());
    let mut nodes = vec![Node { space: start.clone(), g: 0, parent: None, generator: None, closed: false }];
    let mut index: HashMap<Subspace, usize> = HashMap::from([(start.clone(), 0)]);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((searcher.heuristic(&start), Reverse(0usize), 0usize)));
    let mut states = 0;
    while let Some(Reverse((_, Reverse(g), id))) = heap.pop() {
        if nodes[id].closed || nodes[id].g != g {
            continue;
        }
        nodes[id].closed = true;
        if nodes[id].space.dim() == m.dim() {
            let mut gens = Vec::new();
            let mut cur = id;
            while let Some(p) = nodes[cur].parent {
                gens.push(nodes[cur].generator.clone().expect("non-root node has a generator"));
                cur = p;
            }
            gens.reverse();
            let cert = FiltrationCertificate::for_module(ctx.clone(), ideal.clone(), gens).validated()?;
            if !cert.validated.is_valid() {
                return Err(Error::Internal(format!("search produced an invalid certificate: {:?}", cert.validated)));
            }
            return Ok(SearchResult { value: g, certificate: cert, exact: finite, states });
        }
        states += 1;
        if states > opts.max_states {
            return Err(Error::SearchLimit(format!("more than {} submodules expanded", opts.max_states)));
        }
        crate::budget::check()?;
        let space = nodes[id].space.clone();
        for (v, t) in searcher.successors(&space) {
            let ng = g + 1;
            match index.get(&t) {
                Some(&k) if nodes[k].g <= ng => continue,
                Some(&k) => {
                    nodes[k].g = ng;
                    nodes[k].parent = Some(id);
                    nodes[k].generator = Some(v);
                    nodes[k].closed = false;
                    heap.push(Reverse((ng + searcher.heuristic(&t), Reverse(ng), k)));
                }
                None => {
                    let k = nodes.len();
                    let f = ng + searcher.heuristic(&t);
                    index.insert(t.clone(), k);
                    nodes.push(Node { space: t, g: ng, parent: Some(id), generator: Some(v), closed: false });
                    heap.push(Reverse((f, Reverse(ng), k)));
                }
            }
        }
    }
    Err(Error::Internal("submodule search exhausted without reaching the module".into()))
}

/// A valid filtration built by always taking the largest available step.
pub fn greedy_filtration(ctx: &ModuleContext, ideal: &Ideal) -> Result<FiltrationCertificate> {
    let m = ctx.module();
    let pool = if m.field().is_finite() && m.dim() <= dimension_cap(m.field()) { None } else { Some(Vec::new()) };
    let searcher = Searcher::new(m, ideal, pool)?;
    searcher.check_nilpotent()?;
    let mut s = Subspace::zero(m.dim());
    let mut gens = Vec::new();
    while s.dim() < m.dim() {
        crate::budget::check()?;
        let mut best: Option<(Vector, Subspace)> = None;
        for (v, t) in searcher.successors(&s) {
            if best.as_ref().is_none_or(|(_, b)| t.dim() > b.dim()) {
                best = Some((v, t));
            }
        }
        let (v, t) = best.ok_or_else(|| Error::Internal("no filtration step available".into()))?;
        gens.push(v);
        s = t;
    }
    FiltrationCertificate::for_module(ctx.clone(), ideal.clone(), gens).validated()
}

/// Lower bound from generator counts and factor lengths.
pub fn quasilength_lower(m: &VectorModule, ideal: &Ideal) -> Result<(usize, LowerMethod)> {
    if m.dim() == 0 {
        return Ok((0, LowerMethod::MinGenerators));
    }
    let mingens = m.min_generators_all();
    let ratio = m.dim().div_ceil(factor_bound(m, ideal)?);
    Ok(if ratio > mingens { (ratio, LowerMethod::LengthRatio) } else { (mingens, LowerMethod::MinGenerators) })
}

/// Lower and upper bounds, exact when the search fits within the limits.
pub fn quasilength_bounds(ctx: &ModuleContext, ideal: &Ideal, opts: &SearchOptions) -> Result<QuasilengthBounds> {
    let m = ctx.module();
    let (lower, lower_method) = quasilength_lower(m, ideal)?;
    match quasilength_exact_with(ctx, ideal, opts) {
        Ok(r) => Ok(QuasilengthBounds {
            lower: if r.exact { r.value } else { lower },
            upper: r.value,
            exact: r.exact.then_some(r.value),
            upper_certificate: r.certificate,
            lower_method,
            note: (!r.exact).then(|| "candidate pool restricted over an infinite field".to_string()),
        }),
        Err(Error::SearchLimit(why)) => {
            let cert = greedy_filtration(ctx, ideal)?;
            Ok(QuasilengthBounds {
                lower,
                upper: cert.factors(),
                exact: (lower == cert.factors()).then_some(lower),
                upper_certificate: cert,
                lower_method,
                note: Some(why),
            })
        }
        Err(e) => Err(e),
    }
}
