//! Dense linear algebra over a [`CoeffField`]: matrices, reduced row
//! echelon subspaces and kernels.

use crate::field::{Coeff, CoeffField};

pub type Vector = Vec<Coeff>;

pub fn zero_vector(field: &CoeffField, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: &CoeffField, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(field: &CoeffField, v: &[Coeff]) -> bool {
    v.iter().all(|c| field.is_zero(c))
}

pub fn add_scaled(field: &CoeffField, target: &mut [Coeff], c: &Coeff, v: &[Coeff]) {
    if field.is_zero(c) {
        return;
    }
    for (t, x) in target.iter_mut().zip(v) {
        if !field.is_zero(x) {
            *t = field.add(t, &field.mul(c, x));
        }
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl Matrix {
    pub fn zero(field: &CoeffField, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &CoeffField, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Self {
        let n = rows.len();
        let data: Vec<Coeff> = rows
            .into_iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix");
                r
            })
            .collect();
        Matrix { rows: n, cols, data }
    }

    /// Matrix whose `k`-th column is `cols[k]`.
    pub fn from_columns(field: &CoeffField, columns: &[Vector], rows: usize) -> Self {
        let mut m = Matrix::zero(field, rows, columns.len());
        for (k, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, k, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Coeff) {
        self.data[i * self.cols + j] = c;
    }

    pub fn row(&self, i: usize) -> &[Coeff] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, field: &CoeffField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zero(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !field.is_zero(b) {
                        let idx = i * out.cols + j;
                        out.data[idx] = field.add(&out.data[idx], &field.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, field: &CoeffField, v: &[Coeff]) -> Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let mut out = zero_vector(field, self.rows);
        for (i, o) in out.iter_mut().enumerate() {
            for (a, x) in self.row(i).iter().zip(v) {
                if !field.is_zero(a) && !field.is_zero(x) {
                    *o = field.add(o, &field.mul(a, x));
                }
            }
        }
        out
    }

    pub fn add(&self, field: &CoeffField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| field.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, field: &CoeffField, c: &Coeff) -> Matrix {
        let data = self.data.iter().map(|a| field.mul(a, c)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self, field: &CoeffField) -> bool {
        is_zero_vector(field, &self.data)
    }

    /// Inverse, if the matrix is square and invertible.
    pub fn inverse(&self, field: &CoeffField) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend(unit_vector(field, n, i));
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !field.is_zero(&aug[r][col]))?;
            aug.swap(col, piv);
            let inv = field.inv(&aug[col][col])?;
            for x in aug[col].iter_mut() {
                *x = field.mul(x, &inv);
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != col {
                    let c = field.neg(&row[col]);
                    add_scaled(field, row, &c, &pivot_row);
                }
            }
        }
        Some(Matrix::from_rows(aug.into_iter().map(|r| r[n..].to_vec()).collect(), n))
    }
}

/// A subspace of `field^n` kept as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &CoeffField, ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: (0..ambient).map(|i| unit_vector(field, ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span<'a>(field: &CoeffField, ambient: usize, vs: impl IntoIterator<Item = &'a Vector>) -> Self {
        let mut s = Subspace::zero(ambient);
        for v in vs {
            s.insert(field, v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Rows of the reduced echelon basis, sorted by pivot column.
    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns without a pivot; their unit vectors span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// `v` minus its projection along the pivot columns; zero exactly on
    /// members.
    pub fn reduce(&self, field: &CoeffField, v: &[Coeff]) -> Vector {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = field.neg(&w[p]);
            add_scaled(field, &mut w, &c, row);
        }
        w
    }

    pub fn contains(&self, field: &CoeffField, v: &[Coeff]) -> bool {
        is_zero_vector(field, &self.reduce(field, v))
    }

    pub fn contains_subspace(&self, field: &CoeffField, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(field, r))
    }

    /// Coordinates of a member with respect to [`Subspace::basis`].
    pub fn coordinates(&self, field: &CoeffField, v: &[Coeff]) -> Option<Vector> {
        if !self.contains(field, v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Add `v`; returns whether the dimension grew.
    pub fn insert(&mut self, field: &CoeffField, v: &[Coeff]) -> bool {
        let mut w = self.reduce(field, v);
        let Some(p) = w.iter().position(|c| !field.is_zero(c)) else {
            return false;
        };
        let inv = field.inv(&w[p]).expect("nonzero pivot");
        for x in w.iter_mut() {
            *x = field.mul(x, &inv);
        }
        for row in self.rows.iter_mut() {
            let c = field.neg(&row[p]);
            add_scaled(field, row, &c, &w);
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(pos, w);
        self.pivots.insert(pos, p);
        true
    }

    pub fn sum(&self, field: &CoeffField, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(field, r);
        }
        s
    }
}

/// Basis of the kernel of `m` (as a subspace of `field^cols`).
pub fn kernel(field: &CoeffField, m: &Matrix) -> Subspace {
    let mut rref = Subspace::zero(m.cols());
    for i in 0..m.rows() {
        rref.insert(field, m.row(i));
    }
    let free = rref.free_columns();
    let mut ker = Subspace::zero(m.cols());
    for &f in &free {
        let mut v = unit_vector(field, m.cols(), f);
        for (row, &p) in rref.rows.iter().zip(&rref.pivots) {
            v[p] = field.neg(&row[f]);
        }
        ker.insert(field, &v);
    }
    ker
}

/// Monic minimal polynomial of a square matrix, coefficients in ascending
/// degree.
pub fn minimal_polynomial(field: &CoeffField, a: &Matrix) -> Vector {
    let n = a.rows();
    let width = n * n;
    let mut span = Subspace::zero(width + n + 1);
    let mut power = Matrix::identity(field, n);
    for k in 0..=n {
        let mut aug: Vector = power.data.clone();
        aug.extend(unit_vector(field, n + 1, k));
        let w = span.reduce(field, &aug);
        if is_zero_vector(field, &w[..width]) {
            let tag = &w[width..];
            let lead = field.inv(&tag[k]).expect("relation has a top coefficient");
            return tag[..=k].iter().map(|c| field.mul(c, &lead)).collect();
        }
        span.insert(field, &aug);
        power = power.mul(field, a);
    }
    unreachable!("Cayley-Hamilton bounds the degree by n")
}
