//! Finitely generated modules over Z[x_1, …, x_ℓ] and their maximal submodules.

mod counting;
mod spectrum;

pub use counting::{chain_count, GrowthType, ModuleInvariants, Provenance};
pub use spectrum::{joint_spectrum, SpectrumEntry};

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::prime_divisors;
use crate::error::{domain, Error, Result};
use crate::linalg::{
    char_matrix, smith_normal_form_int, smith_normal_form_poly, IntMatrix, Matrix, PolyMatrix,
};
use crate::poly::{Field, Fp, Poly, ZPoly, Q};

/// Default seed of the engine's random source.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Largest module dimension (generators plus torsion) accepted.
pub const MAX_MODULE_DIM: usize = 64;

/// `Z^rank ⊕ ⊕ Z/t_i` with commuting integer actions.
///
/// Column `j` of each action is the image of generator `j`; generators
/// `rank..rank + torsion.len()` are the torsion generators.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixModule {
    rank: usize,
    torsion: Vec<u64>,
    actions: Vec<IntMatrix>,
    group_action: bool,
}

/// `Z[x]^gens / (relations)`; each relation is a vector of `gens` polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct PresentedModule {
    gens: usize,
    relations: Vec<Vec<ZPoly>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModuleDescriptor {
    MatrixAction(MatrixModule),
    Presented(PresentedModule),
}

/// The F_p-module `N/pN` with the induced commuting actions.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberModule {
    pub p: u64,
    pub dim: usize,
    pub actions: Vec<Matrix<Fp>>,
}

/// Invariant factors of `N/pN` over F_p[x] for a presented module.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberFactors {
    pub p: u64,
    /// Nonunit monic invariant factors in divisibility order.
    pub factors: Vec<Poly<Fp>>,
    pub free_rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fiber {
    Matrices(FiberModule),
    InvariantFactors(FiberFactors),
}

fn reduce_mod(v: &BigInt, t: u64) -> BigInt {
    v.mod_floor(&BigInt::from(t))
}

impl MatrixModule {
    /// Validates shapes, torsion preservation, commutation and, for group
    /// actions, invertibility.
    pub fn new(
        rank: usize,
        torsion: Vec<u64>,
        actions: Vec<IntMatrix>,
        group_action: bool,
    ) -> Result<Self> {
        let dim = rank + torsion.len();
        if dim > MAX_MODULE_DIM {
            return Err(Error::BoundExceeded {
                what: format!("module dimension {dim}"),
                bound: MAX_MODULE_DIM.to_string(),
            });
        }
        if let Some(t) = torsion.iter().find(|&&t| t < 2) {
            return domain(format!("torsion coefficient {t} must be at least 2"));
        }
        if actions.is_empty() {
            return domain("at least one action matrix is required");
        }
        for (i, a) in actions.iter().enumerate() {
            if a.rows() != dim || a.cols() != dim {
                return domain(format!(
                    "actions[{i}] is {}x{}, expected {dim}x{dim}",
                    a.rows(),
                    a.cols()
                ));
            }
        }
        let m = Self { rank, torsion, actions, group_action };
        for (i, a) in m.actions.iter().enumerate() {
            m.check_preserves_torsion(i, a)?;
        }
        for i in 0..m.actions.len() {
            for j in i + 1..m.actions.len() {
                let ab = m.actions[i].mul(&m.actions[j])?;
                let ba = m.actions[j].mul(&m.actions[i])?;
                if !m.same_endomorphism(&ab, &ba) {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }
        if group_action {
            for (i, a) in m.actions.iter().enumerate() {
                m.check_invertible(i, a)?;
            }
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.actions
    }

    pub fn group_action(&self) -> bool {
        self.group_action
    }

    pub fn dim(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Restriction of action `i` to the free generators.
    pub fn free_block(&self, i: usize) -> IntMatrix {
        self.actions[i].block(0, self.rank, 0, self.rank)
    }

    fn check_preserves_torsion(&self, i: usize, a: &IntMatrix) -> Result<()> {
        let k = self.rank;
        for (m, &t) in self.torsion.iter().enumerate() {
            let col = k + m;
            for r in 0..k {
                if !a.get(r, col).is_zero() {
                    return domain(format!(
                        "actions[{i}] maps torsion generator {col} to an element of infinite order (row {r})"
                    ));
                }
            }
            for (m2, &t2) in self.torsion.iter().enumerate() {
                let v = a.get(k + m2, col) * BigInt::from(t);
                if !reduce_mod(&v, t2).is_zero() {
                    return domain(format!(
                        "actions[{i}] does not respect the order {t} of torsion generator {col}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Equality as endomorphisms: free rows exactly, torsion rows modulo the order.
    fn same_endomorphism(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        let k = self.rank;
        (0..self.dim()).all(|r| {
            (0..self.dim()).all(|c| {
                if r < k {
                    a.get(r, c) == b.get(r, c)
                } else {
                    let t = self.torsion[r - k];
                    reduce_mod(&(a.get(r, c) - b.get(r, c)), t).is_zero()
                }
            })
        })
    }

    pub fn is_identity_action(&self, a: &IntMatrix) -> bool {
        self.same_endomorphism(a, &IntMatrix::identity(self.dim()))
    }

    fn check_invertible(&self, i: usize, a: &IntMatrix) -> Result<()> {
        let det = self.free_block(i).det()?;
        if det.abs() != BigInt::one() {
            return domain(format!(
                "actions[{i}] is not invertible on the free part (determinant {det})"
            ));
        }
        let mut primes: BTreeSet<BigUint> = BTreeSet::new();
        for &t in &self.torsion {
            primes.extend(prime_divisors(&BigInt::from(t)));
        }
        for p in primes {
            let p = p.to_u64().expect("divides a u64");
            let fiber = self.torsion_fiber_block(a, p)?;
            if fiber.rank() != fiber.rows() {
                return domain(format!(
                    "actions[{i}] is not an automorphism of the {p}-torsion"
                ));
            }
        }
        Ok(())
    }

    fn torsion_fiber_block(&self, a: &IntMatrix, p: u64) -> Result<Matrix<Fp>> {
        let idx: Vec<usize> = self
            .torsion
            .iter()
            .enumerate()
            .filter(|(_, &t)| t % p == 0)
            .map(|(m, _)| self.rank + m)
            .collect();
        Ok(submatrix_mod(a, &idx, Fp::new(p)?))
    }

    /// Coordinates that survive in `N/pN`.
    fn fiber_coords(&self, p: u64) -> Vec<usize> {
        (0..self.rank)
            .chain(
                self.torsion
                    .iter()
                    .enumerate()
                    .filter(|(_, &t)| t % p == 0)
                    .map(|(m, _)| self.rank + m),
            )
            .collect()
    }

    pub fn fiber_mod_p(&self, p: u64) -> Result<FiberModule> {
        let field = Fp::new(p)?;
        let idx = self.fiber_coords(p);
        let actions = self.actions.iter().map(|a| submatrix_mod(a, &idx, field)).collect();
        Ok(FiberModule { p, dim: idx.len(), actions })
    }

    /// Smallest `m ≥ 1` with `A_i^m = I` on the module, if at most `bound`.
    pub fn action_order(&self, i: usize, bound: u64) -> Result<Option<u64>> {
        let a = &self.actions[i];
        let mut cur = a.clone();
        for m in 1..=bound {
            if self.is_identity_action(&cur) {
                return Ok(Some(m));
            }
            cur = cur.mul(a)?;
        }
        Ok(None)
    }
}

fn submatrix_mod(a: &IntMatrix, idx: &[usize], field: Fp) -> Matrix<Fp> {
    let mut m = Matrix::zeros(field, idx.len(), idx.len());
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            m.set(r, c, field.from_bigint(a.get(i, j)));
        }
    }
    m
}

impl PresentedModule {
    pub fn new(gens: usize, relations: Vec<Vec<ZPoly>>) -> Result<Self> {
        if gens > MAX_MODULE_DIM || relations.len() > MAX_MODULE_DIM {
            return Err(Error::BoundExceeded {
                what: format!("presentation of size {gens}x{}", relations.len()),
                bound: MAX_MODULE_DIM.to_string(),
            });
        }
        for (i, r) in relations.iter().enumerate() {
            if r.len() != gens {
                return domain(format!(
                    "relations[{i}] has {} entries, expected {gens}",
                    r.len()
                ));
            }
        }
        Ok(Self { gens, relations })
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &[Vec<ZPoly>] {
        &self.relations
    }

    /// The `gens × relations` presentation matrix over a field.
    fn matrix<K: Field>(&self, conv: impl Fn(&ZPoly) -> Poly<K>, field: K) -> PolyMatrix<K> {
        let mut m = PolyMatrix::zeros(field, self.gens, self.relations.len());
        for (c, rel) in self.relations.iter().enumerate() {
            for (r, f) in rel.iter().enumerate() {
                m.set(r, c, conv(f));
            }
        }
        m
    }

    pub fn q_matrix(&self) -> PolyMatrix<Q> {
        self.matrix(ZPoly::to_q, Q)
    }

    pub fn fp_matrix(&self, field: Fp) -> PolyMatrix<Fp> {
        self.matrix(|f| f.reduce(field), field)
    }

    pub fn fiber_mod_p(&self, p: u64) -> Result<FiberFactors> {
        let s = smith_normal_form_poly(&self.fp_matrix(Fp::new(p)?))?;
        Ok(FiberFactors {
            p,
            free_rank: self.gens - s.rank,
            factors: s.diagonal.into_iter().filter(|d| !d.is_constant()).collect(),
        })
    }
}

impl FiberFactors {
    /// `⊕ F_p[x]/(b_j)` with `x` acting by block companion matrices, or
    /// `None` when the fiber has a free part.
    pub fn to_fiber_module(&self) -> Result<Option<FiberModule>> {
        if self.free_rank > 0 {
            return Ok(None);
        }
        let field = Fp::new(self.p)?;
        let dim: usize = self.factors.iter().map(|b| b.deg()).sum();
        let mut a = Matrix::zeros(field, dim, dim);
        let mut off = 0;
        for b in &self.factors {
            let d = b.deg();
            let c = b.coeffs();
            for j in 0..d {
                if j + 1 < d {
                    a.set(off + j + 1, off + j, 1);
                }
            }
            for i in 0..d {
                a.set(off + i, off + d - 1, field.neg(&c[i]));
            }
            off += d;
        }
        Ok(Some(FiberModule { p: self.p, dim, actions: vec![a] }))
    }
}

impl ModuleDescriptor {
    pub fn matrix(rank: usize, torsion: Vec<u64>, actions: Vec<IntMatrix>, group_action: bool) -> Result<Self> {
        Ok(Self::MatrixAction(MatrixModule::new(rank, torsion, actions, group_action)?))
    }

    pub fn presented(gens: usize, relations: Vec<Vec<ZPoly>>) -> Result<Self> {
        Ok(Self::Presented(PresentedModule::new(gens, relations)?))
    }

    /// Number of commuting variables ℓ.
    pub fn ell(&self) -> usize {
        match self {
            Self::MatrixAction(m) => m.actions.len(),
            Self::Presented(_) => 1,
        }
    }

    pub fn fiber_mod_p(&self, p: u64) -> Result<Fiber> {
        Ok(match self {
            Self::MatrixAction(m) => Fiber::Matrices(m.fiber_mod_p(p)?),
            Self::Presented(m) => Fiber::InvariantFactors(m.fiber_mod_p(p)?),
        })
    }

    /// Finite set of primes outside of which every fiber has the generic shape.
    pub fn bad_primes(&self) -> Result<BTreeSet<BigUint>> {
        let mut out = BTreeSet::new();
        match self {
            Self::MatrixAction(m) => {
                for &t in &m.torsion {
                    out.extend(prime_divisors(&BigInt::from(t)));
                }
                for i in 0..m.actions.len() {
                    let free = m.free_block(i);
                    out.extend(prime_divisors(&free.det()?));
                    let s = smith_normal_form_poly(&char_matrix(&free.to_q())?)?;
                    out.extend(s.bad_primes);
                }
            }
            Self::Presented(m) => {
                out.extend(smith_normal_form_poly(&m.q_matrix())?.bad_primes);
            }
        }
        Ok(out)
    }
}

/// Engine configuration: the seed of the random source used by
/// equal-degree factorization. Results do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engine {
    pub seed: u64,
}

impl Default for Engine {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED }
    }
}

impl Engine {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub(crate) fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    pub fn joint_spectrum(&self, f: &FiberModule) -> Result<Vec<SpectrumEntry>> {
        joint_spectrum(f, &mut self.rng(f.p))
    }
}

/// `t_p = dim_{F_p}(V / Σ image(A_i − I))` on a fiber.
pub fn trivial_quotient_dim(f: &FiberModule) -> Result<usize> {
    let field = Fp::new(f.p)?;
    let id = Matrix::identity(field, f.dim);
    let mut vecs = Vec::new();
    for a in &f.actions {
        vecs.extend(a.sub(&id)?.image());
    }
    Ok(f.dim - crate::linalg::row_space(&field, f.dim, &vecs).len())
}

/// Torsion-free rank of `N / Σ (A_i − I)N`.
pub fn coinvariant_rank(m: &MatrixModule) -> Result<usize> {
    let k = m.rank;
    if k == 0 {
        return Ok(0);
    }
    let mut rows = vec![Vec::new(); k];
    for i in 0..m.actions.len() {
        let d = m.free_block(i).sub(&IntMatrix::identity(k))?;
        for (r, row) in rows.iter_mut().enumerate() {
            row.extend(d.row(r).iter().cloned());
        }
    }
    let stacked = IntMatrix::from_rows(&rows)?;
    Ok(k - smith_normal_form_int(&stacked).rank)
}
