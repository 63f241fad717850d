//! Exact linear algebra over Z, Q, F_p and F[x].

mod int;
mod polymat;

pub use int::{bareiss_det, smith_normal_form_int, IntMatrix};
pub use polymat::{
    char_matrix, eval_poly_at_matrix, min_poly_of_matrix, min_poly_of_vector,
    smith_normal_form_poly, PolyMatrix,
};

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{domain, Result};
use crate::poly::Field;

/// Diagonal of a Smith normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithResult<T> {
    /// Nonzero invariant factors in divisibility order, units included.
    pub diagonal: Vec<T>,
    pub rank: usize,
    /// Primes dividing any scalar inverted during a reduction over Q[x].
    pub bad_primes: BTreeSet<BigUint>,
}

/// Dense row-major matrix over a field.
#[derive(Clone, PartialEq)]
pub struct Matrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::El>,
}

/// Row-reduced echelon form together with pivot columns.
#[derive(Debug, Clone)]
pub struct Rref<K: Field> {
    pub matrix: Matrix<K>,
    pub pivots: Vec<usize>,
}

impl<K: Field> Matrix<K> {
    pub fn zeros(field: K, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        Self { field, rows, cols, data: vec![z; rows * cols] }
    }

    pub fn identity(field: K, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_flat(field: K, rows: usize, cols: usize, data: Vec<K::El>) -> Self {
        assert_eq!(data.len(), rows * cols, "flat data does not match dimensions");
        Self { field, rows, cols, data }
    }

    /// Builds from row vectors of equal length `cols`.
    pub fn from_rows(field: K, cols: usize, rows: &[Vec<K::El>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return domain("matrix rows have different lengths");
        }
        let data = rows.iter().flatten().cloned().collect();
        Ok(Self { field, rows: rows.len(), cols, data })
    }

    pub fn from_i64(field: K, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let v: Vec<Vec<K::El>> =
            rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, cols, &v).expect("rectangular literal")
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K::El {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K::El) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K::El] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<K::El>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<K::El> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return domain(format!(
                "dimension mismatch: {}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            ));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, o.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[K::El]) -> Result<Vec<K::El>> {
        if v.len() != self.cols {
            return domain("dimension mismatch in matrix-vector product");
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |f, a, b| f.sub(a, b))
    }

    fn zip(&self, o: &Self, op: impl Fn(&K, &K::El, &K::El) -> K::El) -> Result<Self> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return domain("dimension mismatch in elementwise operation");
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| op(&self.field, a, b)).collect();
        Ok(Self { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &K::El) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Self { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        if self.rows != self.cols {
            return domain("power of a non-square matrix");
        }
        let mut base = self.clone();
        let mut r = Self::identity(self.field.clone(), self.rows);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(r)
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref<K> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, pr * m.cols + j);
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<K::El>> {
        let f = &self.field;
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(matrix.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, in reduced form.
    pub fn image(&self) -> Vec<Vec<K::El>> {
        row_space(&self.field, self.rows, &self.transpose().to_rows())
    }

    /// Some solution of `M x = b`, if one exists.
    pub fn solve(&self, b: &[K::El]) -> Result<Option<Vec<K::El>>> {
        if b.len() != self.rows {
            return domain("right-hand side length does not match row count");
        }
        let f = &self.field;
        let mut aug = Self::zeros(f.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }
}

impl<K: Field> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Reduced basis of the span of `vectors` in `K^dim`.
pub fn row_space<K: Field>(field: &K, dim: usize, vectors: &[Vec<K::El>]) -> Vec<Vec<K::El>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(field.clone(), dim, vectors).expect("vectors of length dim");
    let Rref { matrix, pivots } = m.rref();
    (0..pivots.len()).map(|i| matrix.row(i).to_vec()).collect()
}

/// Reduced basis of `U + W`.
pub fn subspace_sum<K: Field>(
    field: &K,
    dim: usize,
    u: &[Vec<K::El>],
    w: &[Vec<K::El>],
) -> Vec<Vec<K::El>> {
    let all: Vec<Vec<K::El>> = u.iter().chain(w).cloned().collect();
    row_space(field, dim, &all)
}

/// Reduced basis of `U ∩ W`, from the kernel of the stacked bases.
pub fn subspace_intersection<K: Field>(
    field: &K,
    dim: usize,
    u: &[Vec<K::El>],
    w: &[Vec<K::El>],
) -> Vec<Vec<K::El>> {
    if u.is_empty() || w.is_empty() {
        return Vec::new();
    }
    let cols = u.len() + w.len();
    let mut m = Matrix::zeros(field.clone(), dim, cols);
    for (j, v) in u.iter().enumerate() {
        for i in 0..dim {
            m.set(i, j, v[i].clone());
        }
    }
    for (j, v) in w.iter().enumerate() {
        for i in 0..dim {
            m.set(i, u.len() + j, field.neg(&v[i]));
        }
    }
    let vecs: Vec<Vec<K::El>> = m
        .kernel()
        .into_iter()
        .map(|coef| {
            let mut acc = vec![field.zero(); dim];
            for (c, v) in coef.iter().zip(u) {
                for i in 0..dim {
                    acc[i] = field.add(&acc[i], &field.mul(c, &v[i]));
                }
            }
            acc
        })
        .collect();
    row_space(field, dim, &vecs)
}
