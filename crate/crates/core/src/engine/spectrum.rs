//! Maximal ideals of a commutative algebra of matrices over F_p, with the
//! dimension of the corresponding quotient of the module.
//!
//! The space is split into primary components of the generators. On a
//! component where every generator is primary, `J = (g_i(A_i))` is the
//! radical, so `V/JV` is a module over the reduced algebra `B = A/J`.
//! The Frobenius-fixed subalgebra of `B` has dimension equal to the number
//! of field factors; when it exceeds 1, a fixed non-scalar element lifts to
//! a splitting element of the component.

use rand::Rng;
use serde::Serialize;

use super::FiberModule;
use crate::error::{domain, Error, Result};
use crate::linalg::{eval_poly_at_matrix, min_poly_of_matrix, row_space, Matrix};
use crate::poly::{factor_mod_p, Field, Fp};

/// One maximal ideal `m` of the action algebra on a fiber `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SpectrumEntry {
    /// Residue degree: `|R/m| = p^e`.
    pub e: usize,
    /// `dim_{R/m} V/mV`.
    pub s: usize,
    /// F_p-dimension of the primary component of `V` at `m`.
    pub component_dim: usize,
}

/// Joint spectrum of the commuting actions on a fiber, sorted.
pub fn joint_spectrum<R: Rng + ?Sized>(f: &FiberModule, rng: &mut R) -> Result<Vec<SpectrumEntry>> {
    let field = Fp::new(f.p)?;
    for (i, a) in f.actions.iter().enumerate() {
        if a.rows() != f.dim || a.cols() != f.dim {
            return domain(format!("fiber action {i} has the wrong size"));
        }
    }
    for i in 0..f.actions.len() {
        for j in i + 1..f.actions.len() {
            if f.actions[i].mul(&f.actions[j])? != f.actions[j].mul(&f.actions[i])? {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    let mut out = Vec::new();
    if f.dim > 0 {
        let mats = if f.actions.is_empty() { vec![Matrix::identity(field, f.dim)] } else { f.actions.clone() };
        split(field, mats, rng, &mut out, f.dim)?;
    }
    out.sort();
    Ok(out)
}

fn split<R: Rng + ?Sized>(
    field: Fp,
    mats: Vec<Matrix<Fp>>,
    rng: &mut R,
    out: &mut Vec<SpectrumEntry>,
    budget: usize,
) -> Result<()> {
    let w = mats[0].rows();
    if budget == 0 {
        return Err(Error::Internal(format!("spectrum recursion exhausted on a component of dimension {w}")));
    }
    let mut primes = Vec::with_capacity(mats.len());
    for m in &mats {
        let comps = primary_components(m, rng)?;
        if comps.len() > 1 {
            return recurse(field, &mats, comps, rng, out, budget);
        }
        primes.push(comps.into_iter().next().expect("one component").0);
    }

    // J·W = Σ image g_i(A_i)
    let mut rad = Vec::new();
    for g in &primes {
        rad.extend(g.image());
    }
    let rad = row_space(&field, w, &rad);
    let basis = extend_to_basis(&field, w, &rad);
    let moved = restrict(&mats, &basis)?;
    let r = rad.len();
    let bar: Vec<Matrix<Fp>> = moved.iter().map(|m| block(m, r, w)).collect();
    let wbar = w - r;

    let (alg, lifts) = algebra_closure(field, &bar, &mats)?;
    let e = alg.len();
    let fixed = frobenius_fixed(field, &alg)?;
    if fixed.len() == 1 {
        if e == 0 || !wbar.is_multiple_of(e) {
            return Err(Error::Internal(format!("residue field of degree {e} does not divide {wbar}")));
        }
        out.push(SpectrumEntry { e, s: wbar / e, component_dim: w });
        return Ok(());
    }
    let v = fixed
        .iter()
        .find(|v| v.iter().skip(1).any(|c| *c != 0))
        .ok_or_else(|| Error::Internal("no non-scalar Frobenius-fixed element".into()))?;
    let mut lift = Matrix::zeros(field, w, w);
    for (c, l) in v.iter().zip(&lifts) {
        lift = lift.add(&l.scale(c))?;
    }
    let comps = primary_components(&lift, rng)?;
    if comps.len() < 2 {
        return Err(Error::Internal("Frobenius-fixed element failed to split".into()));
    }
    recurse(field, &mats, comps, rng, out, budget)
}

fn recurse<R: Rng + ?Sized>(
    field: Fp,
    mats: &[Matrix<Fp>],
    comps: Vec<(Matrix<Fp>, Vec<Vec<u64>>)>,
    rng: &mut R,
    out: &mut Vec<SpectrumEntry>,
    budget: usize,
) -> Result<()> {
    for (_, basis) in comps {
        let sub = restrict(mats, &basis)?;
        split(field, sub, rng, out, budget - 1)?;
    }
    Ok(())
}

/// For each distinct irreducible factor `g^k` of the minimal polynomial:
/// `(g(M), basis of ker g(M)^k)`.
fn primary_components<R: Rng + ?Sized>(
    m: &Matrix<Fp>,
    rng: &mut R,
) -> Result<Vec<(Matrix<Fp>, Vec<Vec<u64>>)>> {
    let mp = min_poly_of_matrix(m)?;
    let fac = factor_mod_p(&mp, rng)?;
    let mut out = Vec::new();
    for (g, k) in &fac.factors {
        let gm = eval_poly_at_matrix(g, m)?;
        let basis = gm.pow(*k as u64)?.kernel();
        out.push((gm, basis));
    }
    Ok(out)
}

/// `rad` followed by standard vectors completing it to a basis.
fn extend_to_basis(field: &Fp, w: usize, rad: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut basis = rad.to_vec();
    for i in 0..w {
        if basis.len() == w {
            break;
        }
        let mut e = vec![0u64; w];
        e[i] = 1;
        let mut trial = basis.clone();
        trial.push(e);
        if row_space(field, w, &trial).len() == trial.len() {
            basis = trial;
        }
    }
    basis
}

/// Matrices of the actions in the basis `basis` of an invariant subspace.
fn restrict(mats: &[Matrix<Fp>], basis: &[Vec<u64>]) -> Result<Vec<Matrix<Fp>>> {
    let field = *mats[0].field();
    let n = mats[0].rows();
    let k = basis.len();
    let mut out = Vec::with_capacity(mats.len());
    for m in mats {
        let mut aug = Matrix::zeros(field, n, 2 * k);
        for (j, b) in basis.iter().enumerate() {
            let img = m.mul_vec(b)?;
            for i in 0..n {
                aug.set(i, j, b[i]);
                aug.set(i, k + j, img[i]);
            }
        }
        let r = aug.rref();
        if r.pivots.iter().take(k).copied().ne(0..k) || r.pivots.len() != k {
            return Err(Error::Internal("subspace is not invariant under the actions".into()));
        }
        let mut x = Matrix::zeros(field, k, k);
        for i in 0..k {
            for j in 0..k {
                x.set(i, j, *r.matrix.get(i, k + j));
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// Lower-right `(w − r) × (w − r)` block.
fn block(m: &Matrix<Fp>, r: usize, w: usize) -> Matrix<Fp> {
    let mut out = Matrix::zeros(*m.field(), w - r, w - r);
    for i in r..w {
        for j in r..w {
            out.set(i - r, j - r, *m.get(i, j));
        }
    }
    out
}

fn flatten(m: &Matrix<Fp>) -> Vec<u64> {
    m.to_rows().into_iter().flatten().collect()
}

/// Basis of the algebra generated by `bar` (identity first), with each basis
/// element's monomial evaluated at the lifted generators `full`.
fn algebra_closure(
    field: Fp,
    bar: &[Matrix<Fp>],
    full: &[Matrix<Fp>],
) -> Result<(Vec<Matrix<Fp>>, Vec<Matrix<Fp>>)> {
    let wb = bar[0].rows();
    let w = full[0].rows();
    let mut alg = vec![Matrix::identity(field, wb)];
    let mut lifts = vec![Matrix::identity(field, w)];
    let mut flat = vec![flatten(&alg[0])];
    let mut next = 0;
    while next < alg.len() {
        for (g, gl) in bar.iter().zip(full) {
            let c = g.mul(&alg[next])?;
            let cf = flatten(&c);
            let mut trial = flat.clone();
            trial.push(cf.clone());
            if row_space(&field, wb * wb, &trial).len() == trial.len() {
                flat.push(cf);
                lifts.push(gl.mul(&lifts[next])?);
                alg.push(c);
            }
        }
        next += 1;
    }
    Ok((alg, lifts))
}

/// Kernel of `b ↦ b^p − b` on the algebra, in coordinates of `alg`.
fn frobenius_fixed(field: Fp, alg: &[Matrix<Fp>]) -> Result<Vec<Vec<u64>>> {
    let e = alg.len();
    let n = flatten(&alg[0]).len();
    let mut basis = Matrix::zeros(field, n, e);
    for (j, b) in alg.iter().enumerate() {
        for (i, x) in flatten(b).into_iter().enumerate() {
            basis.set(i, j, x);
        }
    }
    let mut phi = Matrix::zeros(field, e, e);
    for (j, b) in alg.iter().enumerate() {
        let img = flatten(&b.pow(field.p())?);
        let coords = basis
            .solve(&img)?
            .ok_or_else(|| Error::Internal("algebra is not closed under p-th powers".into()))?;
        for (i, c) in coords.into_iter().enumerate() {
            let v = field.sub(&c, &u64::from(i == j));
            phi.set(i, j, v);
        }
    }
    Ok(phi.kernel())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fiber(p: u64, mats: &[IntMatrix]) -> FiberModule {
        let f = Fp::new(p).unwrap();
        FiberModule { p, dim: mats[0].rows(), actions: mats.iter().map(|m| m.reduce(f)).collect() }
    }

    fn entries(f: &FiberModule) -> Vec<(usize, usize)> {
        let mut r = ChaCha8Rng::seed_from_u64(1);
        joint_spectrum(f, &mut r).unwrap().iter().map(|e| (e.e, e.s)).collect()
    }

    fn three_cycle() -> IntMatrix {
        IntMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])
    }

    #[test]
    fn spectrum_examples() {
        let j = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(entries(&fiber(2, &[j])), vec![(1, 1)]);
        assert_eq!(entries(&fiber(7, &[three_cycle()])), vec![(1, 1), (1, 1), (1, 1)]);
        assert_eq!(entries(&fiber(2, &[three_cycle()])), vec![(1, 1), (2, 1)]);
        assert_eq!(entries(&fiber(3, &[three_cycle()])), vec![(1, 1)]);
    }

    #[test]
    fn scalar_actions_give_one_ideal_of_full_multiplicity() {
        let id = IntMatrix::identity(3);
        assert_eq!(entries(&fiber(5, &[id.clone(), id])), vec![(1, 3)]);
    }

    #[test]
    fn generators_primary_but_algebra_split() {
        // Two commuting copies of F_4 = F_2[x]/(x^2+x+1) acting on F_2^4 as
        // F_4 ⊗ F_4 ≅ F_4 × F_4: each generator is primary, the algebra is not.
        let c = [[0i64, 1], [1, 1]];
        let mut a = vec![vec![0i64; 4]; 4];
        let mut b = vec![vec![0i64; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    a[2 * i + k][2 * j + k] = c[i][j];
                    b[2 * k + i][2 * k + j] = c[i][j];
                }
            }
        }
        let ar: Vec<&[i64]> = a.iter().map(|r| r.as_slice()).collect();
        let br: Vec<&[i64]> = b.iter().map(|r| r.as_slice()).collect();
        let f = fiber(2, &[IntMatrix::from_i64(&ar), IntMatrix::from_i64(&br)]);
        assert_eq!(entries(&f), vec![(2, 1), (2, 1)]);
    }

    #[test]
    fn empty_fiber_has_empty_spectrum() {
        let f = FiberModule { p: 3, dim: 0, actions: vec![Matrix::zeros(Fp::new(3).unwrap(), 0, 0)] };
        assert!(entries(&f).is_empty());
    }

    #[test]
    fn non_commuting_fiber_is_rejected() {
        let a = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let b = IntMatrix::from_i64(&[&[1, 0], &[1, 1]]);
        let mut r = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(joint_spectrum(&fiber(3, &[a, b]), &mut r).unwrap_err(), Error::NonCommuting(0, 1));
    }
}
