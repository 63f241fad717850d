//! Brute-force verifiers, independent of the counting formulas.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::arith::{is_prime, prime_power_decompose};
use crate::engine::{FiberModule, ModuleDescriptor};
use crate::groups::GroupDescriptor;
use crate::error::{domain, Error, Result};
use crate::linalg::Matrix;
use crate::poly::{Field, Fp};

/// Size limits of the oracles. Exceeding one is an error, never an
/// approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBounds {
    /// Largest `p^dim` for subspace enumeration.
    pub max_vectors: u64,
    /// Largest `|S|^generators` for derivation enumeration.
    pub max_maps: u64,
    /// Largest group order for subgroup enumeration.
    pub max_group_order: usize,
    /// Largest number of subgroups kept during subgroup enumeration.
    pub max_subgroups: usize,
    /// Largest number of table lookups spent on subgroup closures.
    pub max_work: u64,
}

impl Default for OracleBounds {
    fn default() -> Self {
        Self {
            max_vectors: 81,
            max_maps: 1_000_000,
            max_group_order: 2000,
            max_subgroups: 10_000,
            max_work: 2_000_000_000,
        }
    }
}

fn refuse<T>(what: String, bound: impl ToString) -> Result<T> {
    Err(Error::BoundExceeded { what, bound: bound.to_string() })
}

/// All subspaces of `F_p^dim`, one reduced echelon basis each.
#[derive(Debug, Clone)]
pub struct SubspaceEnumeration {
    pub p: u64,
    pub dim: usize,
    pub subspaces: Vec<Vec<Vec<u64>>>,
}

impl SubspaceEnumeration {
    pub fn new(p: u64, dim: usize, bounds: &OracleBounds) -> Result<Self> {
        if !is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        if vector_count(p, dim).is_none_or(|v| v > bounds.max_vectors) {
            return refuse(format!("{p}^{dim} vectors"), bounds.max_vectors);
        }
        let mut subspaces = Vec::new();
        for r in 0..=dim {
            for pivots in combinations(dim, r) {
                // free positions: (row i, column c) with c > pivots[i], c not a pivot
                let free: Vec<(usize, usize)> = (0..r)
                    .flat_map(|i| {
                        let pv = pivots.clone();
                        ((pivots[i] + 1)..dim).filter(move |c| !pv.contains(c)).map(move |c| (i, c))
                    })
                    .collect();
                let total = (p as u128).pow(free.len() as u32);
                for mut idx in 0..total {
                    let mut basis = vec![vec![0u64; dim]; r];
                    for (i, &pc) in pivots.iter().enumerate() {
                        basis[i][pc] = 1;
                    }
                    for &(i, c) in &free {
                        basis[i][c] = (idx % p as u128) as u64;
                        idx /= p as u128;
                    }
                    subspaces.push(basis);
                }
            }
        }
        Ok(Self { p, dim, subspaces })
    }
}

fn vector_count(p: u64, dim: usize) -> Option<u64> {
    p.checked_pow(u32::try_from(dim).ok()?)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Number of subspaces of `F_q^n` by the q-binomial recurrence.
pub fn galois_number(n: usize, q: u64) -> BigUint {
    // binom[k] for the current n
    let mut binom = vec![BigUint::from(1u32)];
    for m in 1..=n {
        let mut next = vec![BigUint::from(1u32); m + 1];
        for k in 1..m {
            next[k] = &binom[k - 1] + &binom[k] * BigUint::from(q).pow(k as u32);
        }
        binom = next;
    }
    binom.iter().sum()
}

fn encode(v: &[u64], p: u64) -> usize {
    v.iter().rev().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

fn decode(mut idx: usize, p: u64, dim: usize) -> Vec<u64> {
    (0..dim)
        .map(|_| {
            let x = (idx % p as usize) as u64;
            idx /= p as usize;
            x
        })
        .collect()
}

/// Bitmask of all vectors in the span of `basis`.
fn span_mask(basis: &[Vec<u64>], field: Fp, dim: usize) -> u128 {
    let p = field.p();
    let mut mask = 0u128;
    let count = (p as usize).pow(basis.len() as u32);
    for c in 0..count {
        let coeffs = decode(c, p, basis.len());
        let mut v = vec![0u64; dim];
        for (a, b) in coeffs.iter().zip(basis) {
            for i in 0..dim {
                v[i] = field.add(&v[i], &field.mul(a, &b[i]));
            }
        }
        mask |= 1u128 << encode(&v, p);
    }
    mask
}

/// Maximal invariant subspaces of index `n`, by exhaustive enumeration.
pub fn oracle_count_max_submodules(f: &FiberModule, n: u64, bounds: &OracleBounds) -> Result<BigUint> {
    let field = Fp::new(f.p)?;
    let en = SubspaceEnumeration::new(f.p, f.dim, bounds)?;
    if en.subspaces.is_empty() || vector_count(f.p, f.dim).is_none_or(|v| v > 128) {
        return refuse(format!("{}^{} vectors", f.p, f.dim), 128);
    }
    let invariant = invariant_subspaces(f, field, &en)?;
    let full = invariant.iter().map(|(_, m)| *m).max().unwrap_or(0);
    let maximal = maximal_proper(&invariant.iter().map(|(_, m)| *m).collect::<Vec<_>>(), full);
    let Some(idx) = prime_power_decompose(n)? else {
        return Ok(BigUint::from(0u32));
    };
    if idx.p != f.p {
        return Ok(BigUint::from(0u32));
    }
    let count = maximal
        .iter()
        .filter(|&&i| f.dim - invariant[i].0 == idx.k as usize)
        .count();
    Ok(BigUint::from(count))
}

/// `(dimension, mask)` of every subspace invariant under all actions.
fn invariant_subspaces(f: &FiberModule, field: Fp, en: &SubspaceEnumeration) -> Result<Vec<(usize, u128)>> {
    let mut out = Vec::new();
    for basis in &en.subspaces {
        let mask = span_mask(basis, field, f.dim);
        let mut ok = true;
        'check: for a in &f.actions {
            for b in basis {
                let img = a.mul_vec(b)?;
                if mask & (1u128 << encode(&img, f.p)) == 0 {
                    ok = false;
                    break 'check;
                }
            }
        }
        if ok {
            out.push((basis.len(), mask));
        }
    }
    Ok(out)
}

/// Indices of the proper members that are maximal under inclusion.
fn maximal_proper(masks: &[u128], full: u128) -> Vec<usize> {
    (0..masks.len())
        .filter(|&i| {
            let m = masks[i];
            m != full
                && !masks
                    .iter()
                    .any(|&o| o != full && o != m && o & m == m)
        })
        .collect()
}

/// A finite module `S = F_p^dim` for a f.g. abelian group with generators
/// `x_1..x_g`; `orders[i] = Some(n)` for a generator of finite order `n`.
#[derive(Debug, Clone)]
pub struct ActingModule {
    pub p: u64,
    pub actions: Vec<Matrix<Fp>>,
    pub orders: Vec<Option<u64>>,
}

/// Derivations `δ: H → S` counted by enumerating the images of generators.
pub fn oracle_der_count(s: &ActingModule, bounds: &OracleBounds) -> Result<BigUint> {
    let field = Fp::new(s.p)?;
    let g = s.actions.len();
    if s.orders.len() != g {
        return domain("one order entry per generator is required");
    }
    let dim = s.actions.first().map_or(0, Matrix::rows);
    let size = vector_count(s.p, dim).ok_or_else(|| Error::BoundExceeded {
        what: "module size".into(),
        bound: bounds.max_maps.to_string(),
    })?;
    let maps = (size as u128).checked_pow(g as u32).unwrap_or(u128::MAX);
    if maps > bounds.max_maps as u128 {
        return refuse(format!("{size}^{g} maps"), bounds.max_maps);
    }
    let id = Matrix::identity(field, dim);
    let one_minus: Vec<Matrix<Fp>> = s.actions.iter().map(|a| id.sub(a)).collect::<Result<_>>()?;
    let norms: Vec<Option<Matrix<Fp>>> = s
        .actions
        .iter()
        .zip(&s.orders)
        .map(|(a, o)| {
            o.map(|n| {
                let mut acc = Matrix::zeros(field, dim, dim);
                let mut pw = Matrix::identity(field, dim);
                for _ in 0..n {
                    acc = acc.add(&pw)?;
                    pw = pw.mul(a)?;
                }
                Ok(acc)
            })
            .transpose()
        })
        .collect::<Result<_>>()?;
    let vectors: Vec<Vec<u64>> = (0..size as usize).map(|i| decode(i, s.p, dim)).collect();
    let mut count = 0u64;
    for idx in 0..maps as u64 {
        let mut t = idx;
        let choice: Vec<&Vec<u64>> = (0..g)
            .map(|_| {
                let v = &vectors[(t % size) as usize];
                t /= size;
                v
            })
            .collect();
        let mut ok = true;
        for (i, n) in norms.iter().enumerate() {
            if let Some(n) = n {
                if n.mul_vec(choice[i])?.iter().any(|&x| x != 0) {
                    ok = false;
                    break;
                }
            }
        }
        'pairs: for i in 0..g {
            if !ok {
                break;
            }
            for j in i + 1..g {
                let lhs = one_minus[i].mul_vec(choice[j])?;
                let rhs = one_minus[j].mul_vec(choice[i])?;
                if lhs != rhs {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// Whether `S` has no invariant subspaces besides 0 and itself.
pub fn oracle_is_simple(s: &ActingModule, bounds: &OracleBounds) -> Result<bool> {
    let dim = s.actions.first().map_or(0, Matrix::rows);
    if dim == 0 {
        return Ok(false);
    }
    let f = FiberModule { p: s.p, dim, actions: s.actions.clone() };
    let field = Fp::new(s.p)?;
    let en = SubspaceEnumeration::new(s.p, dim, bounds)?;
    Ok(invariant_subspaces(&f, field, &en)?.len() == 2)
}

/// `(Z/m)^k ⋊ Z/q` where the generator of `Z/q` acts by `action` mod `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSemidirect {
    pub m: u64,
    pub q: u64,
    /// `k × k`, column `j` the image of basis vector `j`.
    pub action: Vec<Vec<u64>>,
}

impl FiniteSemidirect {
    pub fn k(&self) -> usize {
        self.action.len()
    }

    pub fn order(&self) -> Option<usize> {
        let base = (self.m as usize).checked_pow(self.k() as u32)?;
        base.checked_mul(self.q as usize)
    }

    fn apply(&self, v: &[u64]) -> Vec<u64> {
        let k = self.k();
        (0..k)
            .map(|i| (0..k).map(|j| self.action[i][j] * v[j]).sum::<u64>() % self.m)
            .collect()
    }
}

/// Maximal subgroups of index `n`, by enumerating every subgroup.
pub fn oracle_finite_group_max_subgroups(
    g: &FiniteSemidirect,
    n: u64,
    bounds: &OracleBounds,
) -> Result<BigUint> {
    Ok(BigUint::from(maximal_subgroup_indices(g, bounds)?.iter().filter(|&&i| i == n).count()))
}

/// Indices of all maximal subgroups.
pub fn maximal_subgroup_indices(g: &FiniteSemidirect, bounds: &OracleBounds) -> Result<Vec<u64>> {
    let k = g.k();
    if g.m < 1 || g.q < 1 || g.action.iter().any(|r| r.len() != k) {
        return domain("finite group data has inconsistent shape");
    }
    let order = match g.order() {
        Some(o) if o <= bounds.max_group_order => o,
        _ => return refuse(format!("group of order {}^{k}·{}", g.m, g.q), bounds.max_group_order),
    };
    let table = multiplication_table(g, order)?;
    let words = order.div_ceil(64);
    let mut work = 0u64;
    let mut closure = |gens: &[usize]| -> Result<Vec<u64>> {
        let mut bits = vec![0u64; words];
        let mut elems = vec![0usize];
        bits[0] |= 1;
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &s in gens {
                let y = table[x * order + s];
                if bits[y / 64] >> (y % 64) & 1 == 0 {
                    bits[y / 64] |= 1 << (y % 64);
                    elems.push(y);
                }
            }
            i += 1;
        }
        work += (elems.len() * gens.len()) as u64;
        if work > bounds.max_work {
            return refuse("subgroup enumeration work".into(), bounds.max_work);
        }
        Ok(bits)
    };
    let subset = |a: &[u64], b: &[u64]| a.iter().zip(b).all(|(x, y)| x & !y == 0);
    let contains = |a: &[u64], x: usize| a[x / 64] >> (x % 64) & 1 == 1;

    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut cyclic: Vec<(usize, Vec<u64>)> = Vec::new();
    for x in 0..order {
        let c = closure(&[x])?;
        if seen.insert(c.clone()) {
            cyclic.push((x, c));
        }
    }
    let mut all: Vec<(Vec<usize>, Vec<u64>)> = cyclic.iter().map(|(x, c)| (vec![*x], c.clone())).collect();
    let mut frontier = all.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (gens, bits) in &frontier {
            for (x, c) in &cyclic {
                if contains(bits, *x) || subset(c, bits) {
                    continue;
                }
                let mut ng = gens.clone();
                ng.push(*x);
                let nb = closure(&ng)?;
                if seen.insert(nb.clone()) {
                    if seen.len() > bounds.max_subgroups {
                        return refuse("subgroup count".into(), bounds.max_subgroups);
                    }
                    next.push((ng, nb));
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    let full: Vec<u64> = closure(&(0..order).collect::<Vec<_>>())?;
    let sizes: Vec<usize> = all.iter().map(|(_, b)| b.iter().map(|w| w.count_ones() as usize).sum()).collect();
    let mut out = Vec::new();
    for (i, (_, b)) in all.iter().enumerate() {
        if *b == full {
            continue;
        }
        let is_max = !all
            .iter()
            .enumerate()
            .any(|(j, (_, o))| sizes[j] > sizes[i] && *o != full && subset(b, o));
        if is_max {
            out.push((order / sizes[i]) as u64);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// A finite quotient with the same maximal subgroups of index `p^k` as
/// `g`, for the shapes acted on by one generator. `None` for other shapes.
///
/// For `N ⋊ Z` this is `N/pN ⋊ Z/L` with `L = lcm(p, order of the action
/// on N/pN)`; for `N ⋊ Z/t` it is `N/pN ⋊ Z/t`.
pub fn finite_shadow(g: &GroupDescriptor, p: u64, bounds: &OracleBounds) -> Result<Option<FiniteSemidirect>> {
    let (mm, q) = match g.expand()? {
        GroupDescriptor::ZkByZ { module: ModuleDescriptor::MatrixAction(mm) } => (mm, None),
        GroupDescriptor::SemidirectFgAbelian {
            module: ModuleDescriptor::MatrixAction(mm),
            acting_rank,
            acting_torsion,
        } => match (acting_rank, acting_torsion.as_slice()) {
            (1, []) => (mm, None),
            (0, [t]) => (mm, Some(*t)),
            _ => return Ok(None),
        },
        _ => return Ok(None),
    };
    let fiber = mm.fiber_mod_p(p)?;
    let a = &fiber.actions[0];
    let vectors = vector_count(p, fiber.dim).filter(|&v| v <= bounds.max_group_order as u64);
    let Some(vectors) = vectors else {
        return refuse(format!("shadow of order {p}^{}·q", fiber.dim), bounds.max_group_order);
    };
    let q = match q {
        Some(t) => t,
        None => {
            let limit = bounds.max_group_order as u64 / vectors;
            let field = Fp::new(p)?;
            let id = Matrix::identity(field, fiber.dim);
            let mut cur = a.clone();
            let mut ord = 1u64;
            while cur != id {
                ord += 1;
                if ord > limit {
                    return refuse(format!("shadow of order {p}^{}·{ord}+", fiber.dim), bounds.max_group_order);
                }
                cur = cur.mul(a)?;
            }
            ord.lcm(&p)
        }
    };
    let action = (0..fiber.dim).map(|i| (0..fiber.dim).map(|j| *a.get(i, j)).collect()).collect();
    let shadow = FiniteSemidirect { m: p, q, action };
    if shadow.order().is_none_or(|o| o > bounds.max_group_order) {
        return refuse(format!("shadow of order {p}^{}·{q}", fiber.dim), bounds.max_group_order);
    }
    Ok(Some(shadow))
}

/// Elements `(v, c)` indexed by `c·m^k + encode(v)`; identity is 0.
fn multiplication_table(g: &FiniteSemidirect, order: usize) -> Result<Vec<usize>> {
    let k = g.k();
    let nv = order / g.q as usize;
    let m = g.m;
    // powers of the action on every vector
    let vecs: Vec<Vec<u64>> = (0..nv).map(|i| decode(i, m, k)).collect();
    let mut pow_img: Vec<Vec<usize>> = vec![(0..nv).collect()];
    for c in 1..=g.q as usize {
        let prev = &pow_img[c - 1];
        let row: Vec<usize> = (0..nv).map(|i| encode(&g.apply(&vecs[prev[i]]), m)).collect();
        pow_img.push(row);
    }
    if pow_img[g.q as usize] != pow_img[0] {
        return domain(format!("the action does not have order dividing {}", g.q));
    }
    let mut table = vec![0usize; order * order];
    for a in 0..order {
        let (ca, va) = (a / nv, a % nv);
        for b in 0..order {
            let (cb, vb) = (b / nv, b % nv);
            let w = &vecs[pow_img[ca][vb]];
            let sum: Vec<u64> = vecs[va].iter().zip(w).map(|(x, y)| (x + y) % m).collect();
            let c = (ca + cb) % g.q as usize;
            table[a * order + b] = c * nv + encode(&sum, m);
        }
    }
    Ok(table)
}
