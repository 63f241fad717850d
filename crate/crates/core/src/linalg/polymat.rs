//! Matrices over F[x]: Smith normal form and minimal polynomials.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::{Matrix, SmithResult};
use crate::arith::prime_divisors;
use crate::error::{domain, Result};
use crate::poly::{lcm_over_field, Field, Poly};

/// Dense row-major matrix of polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<Poly<K>>,
}

impl<K: Field> PolyMatrix<K> {
    pub fn zeros(field: K, rows: usize, cols: usize) -> Self {
        let z = Poly::zero(field.clone());
        Self { field, rows, cols, data: vec![z; rows * cols] }
    }

    pub fn from_rows(field: K, cols: usize, rows: Vec<Vec<Poly<K>>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return domain("polynomial matrix rows have different lengths");
        }
        let n = rows.len();
        Ok(Self { field, rows: n, cols, data: rows.into_iter().flatten().collect() })
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

    pub fn get(&self, i: usize, j: usize) -> &Poly<K> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly<K>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn map<L: Field>(&self, to: L, g: impl Fn(&Poly<K>) -> Poly<L>) -> PolyMatrix<L> {
        PolyMatrix { field: to, rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] -= q * row[src]`
    fn row_axpy(&mut self, dst: usize, src: usize, q: &Poly<K>) {
        for j in 0..self.cols {
            let v = self.get(dst, j).sub(&q.mul(self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, q: &Poly<K>) {
        for i in 0..self.rows {
            let v = self.get(i, dst).sub(&q.mul(self.get(i, src)));
            self.set(i, dst, v);
        }
    }
}

/// `x·I − A`.
pub fn char_matrix<K: Field>(a: &Matrix<K>) -> Result<PolyMatrix<K>> {
    if a.rows() != a.cols() {
        return domain("characteristic matrix of a non-square matrix");
    }
    let f = a.field().clone();
    let n = a.rows();
    let mut m = PolyMatrix::zeros(f.clone(), n, n);
    for i in 0..n {
        for j in 0..n {
            let mut p = Poly::constant(f.clone(), f.neg(a.get(i, j)));
            if i == j {
                p = p.add(&Poly::x(f.clone()));
            }
            m.set(i, j, p);
        }
    }
    Ok(m)
}

/// Smith normal form over K[x] by Euclidean row and column operations.
///
/// Over Q, `bad_primes` collects the prime divisors of the numerator and
/// denominator of every leading coefficient that gets inverted, which
/// contains every prime at which the reduction fails to commute with
/// reduction mod p.
pub fn smith_normal_form_poly<K: Field>(m: &PolyMatrix<K>) -> Result<SmithResult<Poly<K>>> {
    let mut a = m.clone();
    let f = m.field.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag: Vec<Poly<K>> = Vec::new();
    let mut ledger = Vec::new();
    'outer: for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = a.get(i, j);
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.deg() < a.get(bi, bj).deg()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break 'outer;
            };
            a.swap_rows(t, bi);
            a.swap_cols(t, bj);
            let piv = a.get(t, t).clone();
            ledger.extend(f.ledger_ints(piv.lead().expect("nonzero pivot")));
            let mut dirty = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = a.get(i, t).divrem(&piv)?;
                a.row_axpy(i, t, &q);
                dirty |= !r.is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = a.get(t, j).divrem(&piv)?;
                a.col_axpy(j, t, &q);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !piv.divides(a.get(i, j)) {
                        let neg_one = Poly::constant(f.clone(), f.neg(&f.one()));
                        a.row_axpy(t, i, &neg_one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                diag.push(piv.monic());
                break;
            }
        }
    }
    let mut bad_primes: BTreeSet<BigUint> = BTreeSet::new();
    for n in ledger {
        bad_primes.extend(prime_divisors(&n));
    }
    Ok(SmithResult { rank: diag.len(), diagonal: diag, bad_primes })
}

/// `f(A)` by Horner's rule.
pub fn eval_poly_at_matrix<K: Field>(f: &Poly<K>, a: &Matrix<K>) -> Result<Matrix<K>> {
    if a.rows() != a.cols() {
        return domain("polynomial of a non-square matrix");
    }
    let fld = a.field().clone();
    let n = a.rows();
    let mut acc = Matrix::zeros(fld.clone(), n, n);
    let id = Matrix::identity(fld, n);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(a)?.add(&id.scale(c))?;
    }
    Ok(acc)
}

/// Monic generator of `{g : g(A) v = 0}`, from the first linear dependency
/// in the Krylov sequence `v, Av, A²v, …`.
pub fn min_poly_of_vector<K: Field>(a: &Matrix<K>, v: &[K::El]) -> Result<Poly<K>> {
    let f = a.field().clone();
    let n = a.rows();
    let mut krylov: Vec<Vec<K::El>> = Vec::new();
    let mut cur = v.to_vec();
    loop {
        let k = krylov.len();
        let coeffs = if k == 0 {
            cur.iter().all(|c| f.is_zero(c)).then(Vec::new)
        } else {
            let mut m = Matrix::zeros(f.clone(), n, k);
            for (j, col) in krylov.iter().enumerate() {
                for i in 0..n {
                    m.set(i, j, col[i].clone());
                }
            }
            m.solve(&cur)?
        };
        if let Some(c) = coeffs {
            let mut p: Vec<K::El> = c.iter().map(|x| f.neg(x)).collect();
            p.push(f.one());
            return Ok(Poly::new(f, p));
        }
        let next = a.mul_vec(&cur)?;
        krylov.push(cur);
        cur = next;
    }
}

/// Minimal polynomial: lcm of the minimal polynomials of the standard basis.
pub fn min_poly_of_matrix<K: Field>(a: &Matrix<K>) -> Result<Poly<K>> {
    if a.rows() != a.cols() {
        return domain("minimal polynomial of a non-square matrix");
    }
    let f = a.field().clone();
    let n = a.rows();
    let mut acc = Poly::one(f.clone());
    for i in 0..n {
        let mut e = vec![f.zero(); n];
        e[i] = f.one();
        acc = lcm_over_field(&acc, &min_poly_of_vector(a, &e)?)?;
    }
    Ok(acc)
}
