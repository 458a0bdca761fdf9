//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::var_pow(nvars, index, 1)
    }

    pub fn var_pow(nvars: usize, index: usize, exp: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = exp;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// The single variable index when this is a pure power `x_i^e`, `e > 0`.
    pub fn pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    /// All monomials of total degree `deg`, lexicographically descending
    /// (`x_1^deg` first).
    pub fn of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        fn fill(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == exps.len() {
                exps[i] = left;
                out.push(Monomial::from_exponents(exps));
                return;
            }
            for e in (0..=left).rev() {
                exps[i] = e;
                fill(i + 1, left - e, exps, out);
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if deg == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        fill(0, deg, &mut vec![0; nvars], &mut out);
        out
    }
}

/// A multiplicative well-order on monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    #[default]
    GrevLex,
    /// Compare the first `split` variables with `first`; break ties on the
    /// remaining variables with `rest`.
    Block {
        split: usize,
        first: Box<MonomialOrder>,
        rest: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    /// Elimination order for the first `split` variables.
    pub fn elimination(split: usize, rest: MonomialOrder) -> Self {
        MonomialOrder::Block { split, first: Box::new(MonomialOrder::GrevLex), rest: Box::new(rest) }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp_slices(&a.0, &b.0)
    }

    fn cmp_slices(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
            MonomialOrder::Block { split, first, rest } => {
                first.cmp_slices(&a[..*split], &b[..*split]).then_with(|| rest.cmp_slices(&a[*split..], &b[*split..]))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::GrevLex => "grevlex".into(),
            MonomialOrder::Block { split, first, rest } => {
                format!("block({split},{},{})", first.name(), rest.name())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_breaks_ties_on_last_variable() {
        let o = MonomialOrder::GrevLex;
        // x*z < y^2 in grevlex on (x, y, z)
        assert_eq!(o.cmp(&mono(&[1, 0, 1]), &mono(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&mono(&[2, 0, 0]), &mono(&[0, 2, 0])), Ordering::Greater);
    }

    #[test]
    fn monomials_of_degree_in_lex_order() {
        let ms = Monomial::of_degree(3, 2);
        let exps: Vec<&[u32]> = ms.iter().map(|m| m.exponents()).collect();
        assert_eq!(exps, [&[2, 0, 0][..], &[1, 1, 0], &[1, 0, 1], &[0, 2, 0], &[0, 1, 1], &[0, 0, 2]]);
        // C(n + d - 1, d)
        assert_eq!(Monomial::of_degree(4, 5).len(), 56);
        assert_eq!(Monomial::of_degree(2, 0), vec![Monomial::one(2)]);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let o = MonomialOrder::elimination(1, MonomialOrder::GrevLex);
        assert_eq!(o.cmp(&mono(&[1, 0, 0]), &mono(&[0, 9, 9])), Ordering::Greater);
    }

    fn orders() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::Lex),
            Just(MonomialOrder::GrevLex),
            Just(MonomialOrder::elimination(1, MonomialOrder::GrevLex)),
            Just(MonomialOrder::Block {
                split: 2,
                first: Box::new(MonomialOrder::Lex),
                rest: Box::new(MonomialOrder::GrevLex)
            }),
        ]
    }

    fn monomials() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..5, 3).prop_map(|v| mono(&v))
    }

    proptest! {
        #[test]
        fn order_axioms(o in orders(), a in monomials(), b in monomials(), c in monomials()) {
            // totality and antisymmetry
            let ab = o.cmp(&a, &b);
            prop_assert_eq!(ab, o.cmp(&b, &a).reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            // 1 is the minimum
            prop_assert_ne!(o.cmp(&Monomial::one(3), &a), Ordering::Greater);
            // multiplicative
            if ab == Ordering::Less {
                prop_assert_eq!(o.cmp(&a.mul(&c), &b.mul(&c)), Ordering::Less);
            }
        }
    }
}
