use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::groebner::{GroebnerBasis, Ideal};
use crate::linalg::{self, Matrix, Subspace, Vector};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::PolyRing;

pub const DEFAULT_DEGREE_BOUND: u32 = 64;

/// Echelon basis of polynomials with distinct monic leading terms, used to
/// express elements of `J/K` in coordinates.
#[derive(Clone, Debug)]
struct Embedding {
    k: Arc<GroebnerBasis>,
    basis: Vec<Polynomial>,
    leads: HashMap<Monomial, usize>,
}

impl Embedding {
    /// Reduce `p` against the span; returns the remainder and the
    /// coordinates of the part that was removed.
    fn reduce(&self, p: &Polynomial) -> (Polynomial, Vector) {
        let field = p.field().clone();
        let mut coords = linalg::zero_vector(&field, self.basis.len());
        let mut rest = p.clone();
        let mut kept = Polynomial::zero(p.ring());
        while let Some((m, c)) = rest.leading_term().cloned() {
            match self.leads.get(&m) {
                Some(&i) => {
                    coords[i] = field.add(&coords[i], &c);
                    rest = rest.sub(&self.basis[i].scale(&c));
                }
                None => {
                    let lead = Polynomial::monomial(p.ring(), m, c);
                    kept = kept.add(&lead);
                    rest = rest.sub(&lead);
                }
            }
        }
        (kept, coords)
    }

    fn coordinates(&self, p: &Polynomial) -> Option<Vector> {
        let nf = self.k.normal_form(p).ok()?;
        let (rem, coords) = self.reduce(&nf);
        rem.is_zero().then_some(coords)
    }
}

/// A finite-length module given by a basis and one action matrix per ring
/// variable (column convention: `x·v = A_x v`).
#[derive(Clone, Debug)]
pub struct VectorModule {
    ring: Arc<PolyRing>,
    labels: Vec<String>,
    actions: Vec<Matrix>,
    embedding: Option<Arc<Embedding>>,
}

#[derive(Serialize)]
struct ModuleJson<'a> {
    ring: String,
    dim: usize,
    basis: &'a [String],
    actions: Vec<(String, Vec<Vec<String>>)>,
}

impl VectorModule {
    /// Build from explicit action matrices; they must be square of size
    /// `labels.len()` and pairwise commute.
    pub fn new(ring: &Arc<PolyRing>, labels: Vec<String>, actions: Vec<Matrix>) -> Result<Self> {
        let n = labels.len();
        if actions.len() != ring.nvars() {
            return Err(Error::InvalidArgument(format!(
                "expected {} action matrices, got {}",
                ring.nvars(),
                actions.len()
            )));
        }
        if actions.iter().any(|a| a.rows() != n || a.cols() != n) {
            return Err(Error::InvalidArgument(format!("action matrices must be {n}x{n}")));
        }
        let m = VectorModule { ring: ring.clone(), labels, actions, embedding: None };
        m.check_commuting()?;
        Ok(m)
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        let f = ring.field();
        VectorModule {
            ring: ring.clone(),
            labels: Vec::new(),
            actions: (0..ring.nvars()).map(|_| Matrix::zero(f, 0, 0)).collect(),
            embedding: None,
        }
    }

    /// `R/I` for a zero-dimensional ideal.
    pub fn cyclic(ideal: &Ideal) -> Result<Self> {
        vector_module(&Ideal::unit(ideal.ring()), ideal, DEFAULT_DEGREE_BOUND)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &CoeffField {
        self.ring.field()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }

    pub fn check_commuting(&self) -> Result<()> {
        let f = self.field();
        for i in 0..self.actions.len() {
            for j in i + 1..self.actions.len() {
                let ab = self.actions[i].mul(f, &self.actions[j]);
                let ba = self.actions[j].mul(f, &self.actions[i]);
                if ab != ba {
                    return Err(Error::InvalidArgument(format!(
                        "actions of {} and {} do not commute",
                        self.ring.vars()[i],
                        self.ring.vars()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Coordinates of the class of `f` when the module was built from
    /// ideals `J/K` and `f ∈ J`.
    pub fn element(&self, f: &Polynomial) -> Result<Vector> {
        PolyRing::ensure_same(&self.ring, f.ring())?;
        let emb = self
            .embedding
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("module has no polynomial embedding".into()))?;
        emb.coordinates(f).ok_or_else(|| Error::InvalidArgument(format!("{f} does not lie in the module")))
    }

    /// Polynomial representative of `v` for modules built from ideals.
    pub fn polynomial_of(&self, v: &[crate::field::Coeff]) -> Result<Polynomial> {
        let emb = self
            .embedding
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("module has no polynomial embedding".into()))?;
        Ok(emb.basis.iter().zip(v).fold(Polynomial::zero(&self.ring), |acc, (b, c)| acc.add(&b.scale(c))))
    }

    pub fn unit(&self, i: usize) -> Vector {
        linalg::unit_vector(self.field(), self.dim(), i)
    }

    /// `f·v`.
    pub fn apply(&self, f: &Polynomial, v: &[crate::field::Coeff]) -> Result<Vector> {
        PolyRing::ensure_same(&self.ring, f.ring())?;
        let field = self.field();
        let mut out = linalg::zero_vector(field, self.dim());
        for (m, c) in f.terms() {
            let mut w = v.to_vec();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    w = self.actions[i].mul_vec(field, &w);
                }
            }
            linalg::add_scaled(field, &mut out, c, &w);
        }
        Ok(out)
    }

    /// Matrix of multiplication by `f`.
    pub fn apply_poly(&self, f: &Polynomial) -> Result<Matrix> {
        let cols = (0..self.dim()).map(|i| self.apply(f, &self.unit(i))).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.field(), &cols, self.dim()))
    }

    /// Smallest submodule containing `vs`.
    pub fn submodule<'a>(&self, vs: impl IntoIterator<Item = &'a Vector>) -> Subspace {
        let field = self.field();
        let mut s = Subspace::zero(self.dim());
        let mut queue: VecDeque<Vector> = VecDeque::new();
        for v in vs {
            if s.insert(field, v) {
                queue.push_back(v.clone());
            }
        }
        while let Some(v) = queue.pop_front() {
            for a in &self.actions {
                let w = a.mul_vec(field, &v);
                if s.insert(field, &w) {
                    queue.push_back(w);
                }
            }
        }
        s
    }

    pub fn is_submodule(&self, s: &Subspace) -> bool {
        let field = self.field();
        s.basis().iter().all(|v| self.actions.iter().all(|a| s.contains(field, &a.mul_vec(field, v))))
    }

    /// `I·M`.
    pub fn ideal_image(&self, ideal: &Ideal) -> Result<Subspace> {
        PolyRing::ensure_same(&self.ring, ideal.ring())?;
        let field = self.field();
        let mut s = Subspace::zero(self.dim());
        for g in ideal.gens() {
            for i in 0..self.dim() {
                s.insert(field, &self.apply(g, &self.unit(i))?);
            }
        }
        Ok(s)
    }

    /// `M / S` for a submodule `S`, with basis the unit vectors of the
    /// columns of `S` that carry no pivot.
    pub fn quotient(&self, s: &Subspace) -> Result<VectorModule> {
        if !self.is_submodule(s) {
            return Err(Error::InvalidArgument("quotient by a subspace that is not a submodule".into()));
        }
        let field = self.field();
        let free = s.free_columns();
        let labels = free.iter().map(|&c| self.labels[c].clone()).collect();
        let actions = self
            .actions
            .iter()
            .map(|a| {
                let cols: Vec<Vector> = free
                    .iter()
                    .map(|&c| {
                        let w = s.reduce(field, &a.column(c));
                        free.iter().map(|&r| w[r].clone()).collect()
                    })
                    .collect();
                Matrix::from_columns(field, &cols, free.len())
            })
            .collect();
        Ok(VectorModule { ring: self.ring.clone(), labels, actions, embedding: None })
    }

    /// `M / I·M`.
    pub fn mod_ideal(&self, ideal: &Ideal) -> Result<VectorModule> {
        self.quotient(&self.ideal_image(ideal)?)
    }

    /// The submodule `S` as a module in its own right (basis: the echelon
    /// rows of `S`).
    pub fn restrict(&self, s: &Subspace) -> Result<VectorModule> {
        if !self.is_submodule(s) {
            return Err(Error::InvalidArgument("restriction to a subspace that is not a submodule".into()));
        }
        let field = self.field();
        let labels = s.basis().iter().map(|v| self.describe(v)).collect();
        let actions = self
            .actions
            .iter()
            .map(|a| {
                let cols: Vec<Vector> =
                    s.basis().iter().map(|v| s.coordinates(field, &a.mul_vec(field, v)).expect("submodule")).collect();
                Matrix::from_columns(field, &cols, s.dim())
            })
            .collect();
        Ok(VectorModule { ring: self.ring.clone(), labels, actions, embedding: None })
    }

    pub fn direct_sum(&self, other: &VectorModule) -> Result<VectorModule> {
        PolyRing::ensure_same(&self.ring, &other.ring)?;
        let field = self.field();
        let (n, m) = (self.dim(), other.dim());
        let labels = self
            .labels
            .iter()
            .map(|l| format!("({l}, 0)"))
            .chain(other.labels.iter().map(|l| format!("(0, {l})")))
            .collect();
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| {
                let mut out = Matrix::zero(field, n + m, n + m);
                for i in 0..n {
                    for j in 0..n {
                        out.set(i, j, a.get(i, j).clone());
                    }
                }
                for i in 0..m {
                    for j in 0..m {
                        out.set(n + i, n + j, b.get(i, j).clone());
                    }
                }
                out
            })
            .collect();
        Ok(VectorModule { ring: self.ring.clone(), labels, actions, embedding: None })
    }

    /// The same module in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<VectorModule> {
        let field = self.field();
        let inv = p.inverse(field).ok_or_else(|| Error::InvalidArgument("basis change is singular".into()))?;
        let actions = self.actions.iter().map(|a| inv.mul(field, &a.mul(field, p))).collect();
        let labels = (0..self.dim()).map(|j| self.describe(&p.column(j))).collect();
        Ok(VectorModule { ring: self.ring.clone(), labels, actions, embedding: None })
    }

    /// `dim M/𝔪M` where `𝔪` is generated by the given variables.
    pub fn min_generators(&self, vars: &[usize]) -> usize {
        let field = self.field();
        let mut s = Subspace::zero(self.dim());
        for &i in vars {
            for k in 0..self.dim() {
                s.insert(field, &self.actions[i].column(k));
            }
        }
        self.dim() - s.dim()
    }

    /// Minimal generator count with respect to all variables.
    pub fn min_generators_all(&self) -> usize {
        self.min_generators(&(0..self.ring.nvars()).collect::<Vec<_>>())
    }

    /// Human-readable linear combination of basis labels.
    pub fn describe(&self, v: &[crate::field::Coeff]) -> String {
        let field = self.field();
        let parts: Vec<String> = v
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !field.is_zero(c))
            .map(|(c, l)| if field.is_one(c) { format!("[{l}]") } else { format!("{}*[{l}]", field.format_factor(c)) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let field = self.field();
        let actions = self
            .ring
            .vars()
            .iter()
            .zip(&self.actions)
            .map(|(v, a)| {
                let rows = (0..a.rows()).map(|i| a.row(i).iter().map(|c| field.format(c)).collect()).collect();
                (v.clone(), rows)
            })
            .collect();
        serde_json::to_value(ModuleJson { ring: self.ring.to_string(), dim: self.dim(), basis: &self.labels, actions })
            .expect("serializable")
    }
}

/// `J/K` as a vector space with action matrices, found by closing the
/// generators of `J` under multiplication by the variables modulo `K`.
pub fn vector_module(j: &Ideal, k: &Ideal, degree_bound: u32) -> Result<VectorModule> {
    PolyRing::ensure_same(j.ring(), k.ring())?;
    if !j.contains_ideal(k)? {
        return Err(Error::InvalidArgument("K must be contained in J".into()));
    }
    let ring = j.ring().clone();
    let kgb = k.groebner()?;
    let mut emb = Embedding { k: kgb.clone(), basis: Vec::new(), leads: HashMap::new() };
    let mut queue: VecDeque<usize> = VecDeque::new();

    let try_insert = |emb: &mut Embedding, p: Polynomial, queue: &mut VecDeque<usize>| -> Result<()> {
        crate::budget::check()?;
        let nf = emb.k.normal_form(&p)?;
        let (rem, _) = emb.reduce(&nf);
        if rem.is_zero() {
            return Ok(());
        }
        if rem.total_degree().unwrap_or(0) > degree_bound {
            return Err(Error::DegreeBound(degree_bound));
        }
        let rem = rem.monic();
        let idx = emb.basis.len();
        emb.leads.insert(rem.leading_monomial().unwrap().clone(), idx);
        emb.basis.push(rem);
        queue.push_back(idx);
        Ok(())
    };

    for g in j.gens() {
        try_insert(&mut emb, g.clone(), &mut queue)?;
    }
    while let Some(idx) = queue.pop_front() {
        for v in 0..ring.nvars() {
            let p = emb.basis[idx].mul(&Polynomial::var(&ring, v));
            try_insert(&mut emb, p, &mut queue)?;
        }
    }

    let field = ring.field();
    let n = emb.basis.len();
    let mut actions = Vec::with_capacity(ring.nvars());
    for v in 0..ring.nvars() {
        let x = Polynomial::var(&ring, v);
        let cols = emb
            .basis
            .iter()
            .map(|b| {
                emb.coordinates(&b.mul(&x))
                    .ok_or_else(|| Error::Internal("spun basis is not closed under multiplication".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        actions.push(Matrix::from_columns(field, &cols, n));
    }
    let labels = emb.basis.iter().map(|b| b.to_string()).collect();
    let m = VectorModule { ring, labels, actions, embedding: Some(Arc::new(emb)) };
    m.check_commuting().map_err(|e| Error::Internal(e.to_string()))?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ring(field: CoeffField, vars: &str) -> Arc<PolyRing> {
        PolyRing::parse_vars(field, vars).unwrap()
    }

    #[test]
    fn principal_truncation() {
        let r = ring(CoeffField::Rational, "x");
        let m = vector_module(&Ideal::parse(&r, "x").unwrap(), &Ideal::parse(&r, "x^4").unwrap(), 64).unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.labels(), ["x", "x^2", "x^3"]);
        let f = r.field();
        let a = &m.actions()[0];
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j + 1 { f.one() } else { f.zero() };
                assert_eq!(a.get(i, j), &expected);
            }
        }
        assert_eq!(m.min_generators_all(), 1);
    }

    #[test]
    fn truncation_dimensions() {
        let r = ring(CoeffField::Rational, "x");
        for t in 1..8 {
            let k = Ideal::new(&r, vec![parse_poly("x", &r).unwrap().pow(t)]).unwrap();
            let m = vector_module(&Ideal::parse(&r, "x").unwrap(), &k, 64).unwrap();
            assert_eq!(m.dim(), t as usize - 1);
        }
    }

    #[test]
    fn box_and_zero_module() {
        let r = ring(CoeffField::prime(2).unwrap(), "x,y");
        let m = vector_module(&Ideal::unit(&r), &Ideal::parse(&r, "x^2; y^2").unwrap(), 64).unwrap();
        assert_eq!(m.dim(), 4);
        let z = vector_module(&Ideal::parse(&r, "x").unwrap(), &Ideal::parse(&r, "x").unwrap(), 64).unwrap();
        assert_eq!(z.dim(), 0);
        assert_eq!(z.min_generators_all(), 0);
    }

    #[test]
    fn infinite_length_hits_degree_bound() {
        let r = ring(CoeffField::Rational, "x,y");
        let err = vector_module(&Ideal::unit(&r), &Ideal::parse(&r, "x").unwrap(), 10).unwrap_err();
        assert_eq!(err, Error::DegreeBound(10));
    }

    #[test]
    fn direct_sum_generators() {
        let r = ring(CoeffField::prime(2).unwrap(), "x");
        let x = Ideal::parse(&r, "x").unwrap();
        let m = vector_module(&x, &Ideal::parse(&r, "x^4").unwrap(), 64).unwrap();
        let n = vector_module(&x, &Ideal::parse(&r, "x^2").unwrap(), 64).unwrap();
        let s = m.direct_sum(&n).unwrap();
        assert_eq!(s.dim(), 4);
        // oracle: dim of the span of the x-images, computed by rank directly
        let f = r.field();
        let image = Subspace::span(f, 4, &(0..4).map(|k| s.actions()[0].column(k)).collect::<Vec<_>>());
        assert_eq!(s.min_generators_all(), 4 - image.dim());
        assert_eq!(s.min_generators_all(), 2);
    }

    #[test]
    fn element_coordinates_and_quotients() {
        let r = ring(CoeffField::Rational, "x,y");
        let m = VectorModule::cyclic(&Ideal::parse(&r, "x^2; y^2").unwrap()).unwrap();
        let v = m.element(&parse_poly("x*y + 2*x + x^3", &r).unwrap()).unwrap();
        assert_eq!(m.describe(&v), "2*[x] + [x*y]");
        let q = m.mod_ideal(&Ideal::parse(&r, "x").unwrap()).unwrap();
        assert_eq!(q.dim(), 2);
        let sub = m.submodule(&[m.element(&parse_poly("y", &r).unwrap()).unwrap()]);
        assert_eq!(sub.dim(), 2);
        let restricted = m.restrict(&sub).unwrap();
        assert_eq!(restricted.dim(), 2);
        assert_eq!(restricted.min_generators_all(), 1);
    }
}
