use nalgebra::DMatrix;
use num_complex::Complex;

use crate::scalar::Real;

/// Compressed-sparse-row complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T: Real> {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex<T>>,
}

impl<T: Real> SparseMatrix<T> {
    /// Build from `(row, col, value)` triplets; duplicates are summed in input order and
    /// exact zeros dropped.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex<T>)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<Complex<T>> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                let n = vals.len() - 1;
                vals[n] = vals[n] + v;
            } else {
                rows.push(r);
                cols.push(c);
                vals.push(v);
                last = Some((r, c));
            }
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut keep_rows = Vec::with_capacity(rows.len());
        let mut keep_cols = Vec::with_capacity(rows.len());
        let mut keep_vals = Vec::with_capacity(rows.len());
        for ((r, c), v) in rows.into_iter().zip(cols).zip(vals) {
            if v != zero {
                keep_rows.push(r);
                keep_cols.push(c);
                keep_vals.push(v);
            }
        }
        for &r in &keep_rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { dim, row_ptr, cols: keep_cols, vals: keep_vals }
    }

    pub fn identity(dim: usize) -> Self {
        let one = Complex::new(T::one(), T::zero());
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, one)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex<T>)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.cols[a..b].iter().copied().zip(self.vals[a..b].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex<T>)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.row(r)
            .find(|&(cc, _)| cc == c)
            .map(|(_, v)| v)
            .unwrap_or(Complex::new(T::zero(), T::zero()))
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|r| self.row(r).fold(Complex::new(T::zero(), T::zero()), |s, (c, a)| s + a * v[c]))
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { vals: self.vals.iter().map(|v| v * s).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_triplets(self.dim, self.triplets().chain(other.triplets()).collect())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut t = Vec::new();
        for r in 0..self.dim {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    t.push((r, c, a * b));
                }
            }
        }
        Self::from_triplets(self.dim, t)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let neg = other.scale(Complex::new(-T::one(), T::zero()));
        self.add(&neg).vals.iter().map(|v| v.norm()).fold(T::zero(), |m, v| m.max(v))
    }

    pub fn max_abs(&self) -> T {
        self.vals.iter().map(|v| v.norm()).fold(T::zero(), |m, v| m.max(v))
    }

    pub fn to_dense(&self) -> DMatrix<Complex<T>> {
        let mut m = DMatrix::from_element(self.dim, self.dim, Complex::new(T::zero(), T::zero()));
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn from_dense(m: &DMatrix<Complex<T>>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        let mut t = Vec::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                t.push((r, c, m[(r, c)]));
            }
        }
        Self::from_triplets(m.nrows(), t)
    }

    /// Restriction `P^T M P` onto the basis subset `indices` (in the given order).
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let mut pos = std::collections::HashMap::with_capacity(indices.len());
        for (i, &b) in indices.iter().enumerate() {
            pos.insert(b, i);
        }
        let mut t = Vec::new();
        for (i, &r) in indices.iter().enumerate() {
            for (c, v) in self.row(r) {
                if let Some(&j) = pos.get(&c) {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(indices.len(), t)
    }
}
