//! Buchberger's algorithm with the Gebauer–Möller pair criteria and the
//! sugar selection strategy.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::budget;
use crate::error::{Error, Result};
use crate::field::{Coeff, CoeffField};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Polynomial, Term};
use crate::ring::PolyRing;

/// `a - c * mult * b`, all inputs sorted descending.
fn sub_scaled(
    a: &[Term],
    b: &[Term],
    mult: &Monomial,
    c: &Coeff,
    field: &CoeffField,
    order: &MonomialOrder,
) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let neg_c = field.neg(c);
    let next_b = |j: usize| (b[j].0.mul(mult), field.mul(&b[j].1, &neg_c));
    let mut pending: Option<Term> = if b.is_empty() { None } else { Some(next_b(0)) };
    while i < a.len() {
        let Some(bt) = pending.as_ref() else { break };
        match order.cmp(&a[i].0, &bt.0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(pending.take().unwrap());
                j += 1;
                pending = if j < b.len() { Some(next_b(j)) } else { None };
            }
            Ordering::Equal => {
                let s = field.add(&a[i].1, &bt.1);
                if !field.is_zero(&s) {
                    out.push((a[i].0.clone(), s));
                }
                i += 1;
                j += 1;
                pending = if j < b.len() { Some(next_b(j)) } else { None };
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    if let Some(bt) = pending {
        out.push(bt);
        j += 1;
        while j < b.len() {
            out.push(next_b(j));
            j += 1;
        }
    }
    out
}

/// Full normal form of `f` with respect to monic `basis` (any set of
/// polynomials; the result is canonical only when `basis` is a Gröbner
/// basis).
pub fn normal_form(f: &Polynomial, basis: &[&Polynomial]) -> Polynomial {
    let ring = f.ring().clone();
    let field = ring.field().clone();
    let order = ring.order().clone();
    let mut p: Vec<Term> = f.terms().to_vec();
    let mut start = 0;
    let mut rem: Vec<Term> = Vec::new();
    while start < p.len() {
        let (m, c) = &p[start];
        let divisor = basis.iter().find(|g| g.leading_monomial().map(|lm| lm.divides(m)).unwrap_or(false));
        match divisor {
            Some(g) => {
                let q = g.leading_monomial().unwrap().quotient_of(m).unwrap();
                let c = c.clone();
                p = sub_scaled(&p[start + 1..], &g.terms()[1..], &q, &c, &field, &order);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    Polynomial::from_sorted_terms(&ring, rem)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct State {
    ring: Arc<PolyRing>,
    polys: Vec<Polynomial>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State {
    fn new(ring: &Arc<PolyRing>) -> Self {
        State { ring: ring.clone(), polys: Vec::new(), sugar: Vec::new(), active: Vec::new(), pairs: Vec::new() }
    }

    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().unwrap()
    }

    fn reducers(&self) -> Vec<&Polynomial> {
        self.polys.iter().zip(&self.active).filter(|(_, &a)| a).map(|(p, _)| p).collect()
    }

    fn is_unit(&self) -> bool {
        self.polys.iter().zip(&self.active).any(|(p, &a)| a && p.leading_monomial().unwrap().is_one())
    }

    /// Insert an element already known to be compatible (no pairs).
    fn seed(&mut self, p: Polynomial) {
        let s = p.total_degree().unwrap_or(0);
        self.polys.push(p);
        self.sugar.push(s);
        self.active.push(true);
    }

    fn insert(&mut self, h: Polynomial, sugar: u32) {
        let h = h.monic();
        let idx = self.polys.len();
        self.polys.push(h);
        self.sugar.push(sugar);
        self.active.push(false);
        self.update(idx);
    }

    fn update(&mut self, h: usize) {
        let lm_h = self.lm(h).clone();
        let mut candidates: Vec<(usize, Monomial)> =
            (0..h).filter(|&i| self.active[i]).map(|i| (i, self.lm(i).lcm(&lm_h))).collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        while let Some((i, l)) = candidates.pop() {
            let coprime = self.lm(i).is_coprime(&lm_h);
            let dominated = candidates.iter().chain(kept.iter()).any(|(_, l2)| l2.divides(&l));
            if coprime || !dominated {
                kept.push((i, l));
            }
        }
        let new_pairs: Vec<(usize, Monomial)> =
            kept.into_iter().filter(|(i, _)| !self.lm(*i).is_coprime(&lm_h)).collect();

        let lms: Vec<Monomial> = (0..self.polys.len()).map(|i| self.lm(i).clone()).collect();
        self.pairs.retain(|p| !(lm_h.divides(&p.lcm) && lms[p.i].lcm(&lm_h) != p.lcm && lms[p.j].lcm(&lm_h) != p.lcm));
        for (i, l) in new_pairs {
            let s = self.pair_sugar(i, h, &l);
            self.pairs.push(Pair { i, j: h, lcm: l, sugar: s });
        }
        for (active, lm) in self.active.iter_mut().zip(&lms).take(h) {
            if *active && lm_h.divides(lm) {
                *active = false;
            }
        }
        self.active[h] = true;
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let d = lcm.degree();
        let si = self.sugar[i] + d - self.lm(i).degree();
        let sj = self.sugar[j] + d - self.lm(j).degree();
        si.max(sj)
    }

    fn select(&mut self) -> Option<Pair> {
        let order = self.ring.order();
        let best = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            pa.sugar
                .cmp(&pb.sugar)
                .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
                .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
        })?;
        Some(self.pairs.swap_remove(best))
    }

    fn s_poly(&self, p: &Pair) -> Polynomial {
        let one = self.ring.field().one();
        let a = &self.polys[p.i];
        let b = &self.polys[p.j];
        let ma = self.lm(p.i).quotient_of(&p.lcm).unwrap();
        let mb = self.lm(p.j).quotient_of(&p.lcm).unwrap();
        let ta = Polynomial::from_sorted_terms(&self.ring, a.terms()[1..].to_vec()).mul_term(&ma, &one);
        let tb = Polynomial::from_sorted_terms(&self.ring, b.terms()[1..].to_vec()).mul_term(&mb, &one);
        ta.sub(&tb)
    }

    fn add_input(&mut self, f: &Polynomial) {
        if self.is_unit() {
            return;
        }
        let h = normal_form(f, &self.reducers());
        if !h.is_zero() {
            let s = f.total_degree().unwrap_or(0);
            self.insert(h, s);
        }
    }

    fn run(&mut self) -> Result<()> {
        while !self.is_unit() {
            let Some(pair) = self.select() else { break };
            budget::check()?;
            let s = self.s_poly(&pair);
            let h = normal_form(&s, &self.reducers());
            if !h.is_zero() {
                self.insert(h, pair.sugar);
            }
        }
        Ok(())
    }

    fn finish(self) -> Vec<Polynomial> {
        if self.is_unit() {
            return vec![Polynomial::one(&self.ring)];
        }
        let order = self.ring.order().clone();
        let mut minimal: Vec<Polynomial> =
            self.polys.into_iter().zip(self.active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
        minimal.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
        let mut reduced = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<&Polynomial> =
                minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p).collect();
            let lead = &minimal[k].terms()[0];
            let tail = Polynomial::from_sorted_terms(&self.ring, minimal[k].terms()[1..].to_vec());
            let tail = normal_form(&tail, &others);
            let mut terms = vec![lead.clone()];
            terms.extend(tail.into_terms());
            reduced.push(Polynomial::from_sorted_terms(&self.ring, terms));
        }
        reduced
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` with respect to
/// the order of their ring, sorted by ascending leading monomial.
pub fn groebner_basis(ring: &Arc<PolyRing>, gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let mut st = State::new(ring);
    for f in gens {
        if !PolyRing::same(ring, f.ring()) {
            return Err(Error::RingMismatch(format!("{} vs {}", ring, f.ring())));
        }
        st.add_input(f);
    }
    st.run()?;
    Ok(st.finish())
}

/// Reduced Gröbner basis of `(basis) + (new)` where `basis` is already a
/// Gröbner basis; pairs inside `basis` are not revisited.
pub fn extend_basis(ring: &Arc<PolyRing>, basis: &[Polynomial], new: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let mut st = State::new(ring);
    for g in basis {
        st.seed(g.monic());
    }
    for f in new {
        st.add_input(f);
    }
    st.run()?;
    Ok(st.finish())
}
