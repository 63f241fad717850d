//! Maximal subgroup counts, degrees and growth tables for metabelian groups.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{big_pow, is_prime, prime_power_decompose, primes_up_to, repunit};
use crate::engine::{
    coinvariant_rank, Engine, GrowthType, MatrixModule, ModuleDescriptor, Provenance,
};
use crate::error::{domain, Error, Result};
use crate::linalg::IntMatrix;
use crate::oracle::FiniteSemidirect;
use crate::poly::{distinct_complex_root_count, Fp};

/// Number of good primes used to stabilize `d` when it is not exact.
pub const MDEG_WINDOW: usize = 8;

/// Largest ℓ accepted for the nilpotent family.
pub const MAX_NILPOTENT_ELL: usize = 12;

/// Supported group shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupDescriptor {
    /// `N ⋊ Z` for a module with one invertible action.
    ZkByZ { module: ModuleDescriptor },
    /// `N ⋊ (Z^ℓ × Π Z/t_i)`: the first `acting_rank` actions belong to the
    /// free generators, the rest to the torsion generators in order.
    SemidirectFgAbelian { module: ModuleDescriptor, acting_rank: usize, acting_torsion: Vec<u64> },
    /// `Z ≀ Z/m`.
    WreathCyclic { m: usize },
    /// Generators `x_1..x_ℓ` and central `z_1..z_k`, `k = C(ℓ, 2)`, with
    /// `[x_i, x_j] = z^{f(i, j)}`; keys are 1-based pairs `i < j`, missing
    /// pairs are zero.
    NilpotentGf { ell: usize, f: BTreeMap<(usize, usize), Vec<BigInt>> },
}

/// An mdeg value with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mdeg {
    pub value: usize,
    pub provenance: Provenance,
}

/// One exact count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Count {
    pub value: BigUint,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: u64,
    pub p: u64,
    pub k: u32,
    pub count: BigUint,
    pub mtriv: BigUint,
    pub mnontriv: BigUint,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    pub mdeg: Mdeg,
    /// `(ρ₁, d)` for `N ⋊ Z` with a matrix module.
    pub asymptotic: Option<(usize, usize)>,
    pub growth_type: Option<GrowthType>,
    pub exact: bool,
}

/// The acting abelian group `Z^rank × Π Z/t_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    /// `dim_{F_p} Hom(A, Z/p)`.
    pub fn p_rank(&self, p: u64) -> usize {
        self.rank + self.torsion.iter().filter(|&&t| t % p == 0).count()
    }
}

/// A simple module given by its order and whether the action is trivial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleModuleData {
    pub size: BigUint,
    pub trivial: bool,
}

/// Derivations from `acting` into a simple module.
pub fn der_count(acting: &AbelianGroup, s: &SimpleModuleData) -> Result<BigUint> {
    let Some(q) = s.size.to_u64() else {
        return Err(Error::Unsupported(format!("module of order {} is too large", s.size)));
    };
    if s.trivial {
        if !is_prime(q) {
            return domain(format!("a simple module with trivial action has prime order, got {q}"));
        }
        return Ok(big_pow(q, acting.p_rank(q) as u32));
    }
    if q < 2 || prime_power_decompose(q)?.is_none() {
        return domain(format!("a simple module has prime power order, got {q}"));
    }
    Ok(s.size.clone())
}

fn cyclic_permutation(m: usize) -> IntMatrix {
    let mut a = IntMatrix::zeros(m, m);
    for j in 0..m {
        a.set((j + 1) % m, j, BigInt::one());
    }
    a
}

fn binomial2(ell: usize) -> usize {
    ell * ell.saturating_sub(1) / 2
}

impl GroupDescriptor {
    pub fn zk_by_z(module: ModuleDescriptor) -> Result<Self> {
        let g = Self::ZkByZ { module };
        g.validate()?;
        Ok(g)
    }

    pub fn semidirect(module: ModuleDescriptor, acting_rank: usize, acting_torsion: Vec<u64>) -> Result<Self> {
        let g = Self::SemidirectFgAbelian { module, acting_rank, acting_torsion };
        g.validate()?;
        Ok(g)
    }

    pub fn wreath_cyclic(m: usize) -> Result<Self> {
        let g = Self::WreathCyclic { m };
        g.validate()?;
        Ok(g)
    }

    pub fn nilpotent(ell: usize, f: BTreeMap<(usize, usize), Vec<BigInt>>) -> Result<Self> {
        let g = Self::NilpotentGf { ell, f };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::ZkByZ { module } => match module {
                ModuleDescriptor::MatrixAction(m) => {
                    if m.actions().len() != 1 {
                        return domain(format!("N ⋊ Z needs exactly one action, got {}", m.actions().len()));
                    }
                    if !m.group_action() {
                        return domain("N ⋊ Z needs an invertible action");
                    }
                    Ok(())
                }
                ModuleDescriptor::Presented(_) => Ok(()),
            },
            Self::SemidirectFgAbelian { module, acting_rank, acting_torsion } => {
                if let Some(t) = acting_torsion.iter().find(|&&t| t < 2) {
                    return domain(format!("acting torsion order {t} must be at least 2"));
                }
                let ell0 = acting_rank + acting_torsion.len();
                match module {
                    ModuleDescriptor::MatrixAction(m) => {
                        if m.actions().len() != ell0 {
                            return domain(format!(
                                "{} actions given for {ell0} acting generators",
                                m.actions().len()
                            ));
                        }
                        if !m.group_action() {
                            return domain("a semidirect product needs invertible actions");
                        }
                        for (j, &t) in acting_torsion.iter().enumerate() {
                            let i = acting_rank + j;
                            if !m.is_identity_action(&m.actions()[i].pow(t)?) {
                                return domain(format!("actions[{i}] does not have order dividing {t}"));
                            }
                        }
                        Ok(())
                    }
                    ModuleDescriptor::Presented(_) => {
                        if *acting_rank != 1 || !acting_torsion.is_empty() {
                            return domain("a presented module can only be acted on by Z");
                        }
                        Ok(())
                    }
                }
            }
            Self::WreathCyclic { m } => {
                if *m < 2 {
                    return domain(format!("wreath product needs m ≥ 2, got {m}"));
                }
                Ok(())
            }
            Self::NilpotentGf { ell, f } => {
                if *ell < 2 || *ell > MAX_NILPOTENT_ELL {
                    return domain(format!("ell must lie in 2..={MAX_NILPOTENT_ELL}, got {ell}"));
                }
                let k = binomial2(*ell);
                for (&(i, j), v) in f {
                    if !(1 <= i && i < j && j <= *ell) {
                        return domain(format!("f key ({i},{j}) is not a pair 1 ≤ i < j ≤ {ell}"));
                    }
                    if v.len() != k {
                        return domain(format!("f({i},{j}) has length {}, expected {k}", v.len()));
                    }
                }
                Ok(())
            }
        }
    }

    /// Rewrites the wreath product as a semidirect product; other shapes
    /// are returned unchanged.
    pub fn expand(&self) -> Result<Self> {
        match self {
            Self::WreathCyclic { m } => {
                let module = ModuleDescriptor::matrix(*m, Vec::new(), vec![cyclic_permutation(*m)], true)?;
                Ok(Self::SemidirectFgAbelian { module, acting_rank: 0, acting_torsion: vec![*m as u64] })
            }
            other => Ok(other.clone()),
        }
    }

    /// `(Z/m)^k ⋊ Z/q` as a semidirect product with acting torsion `[q]`.
    pub fn from_finite(g: &FiniteSemidirect) -> Result<Self> {
        let k = g.k();
        let rows: Vec<Vec<BigInt>> = g.action.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let a = if k == 0 { IntMatrix::zeros(0, 0) } else { IntMatrix::from_rows(&rows)? };
        let module = ModuleDescriptor::matrix(0, vec![g.m; k], vec![a], true)?;
        Self::semidirect(module, 0, vec![g.q])
    }

    fn nilpotent_matrix(ell: usize, f: &BTreeMap<(usize, usize), Vec<BigInt>>) -> Result<IntMatrix> {
        let k = binomial2(ell);
        let mut rows = Vec::with_capacity(k);
        for i in 1..=ell {
            for j in i + 1..=ell {
                rows.push(f.get(&(i, j)).cloned().unwrap_or_else(|| vec![BigInt::zero(); k]));
            }
        }
        IntMatrix::from_rows(&rows)
    }
}

/// One row of the growth table.
fn row(engine: &Engine, g: &GroupDescriptor, n: u64) -> Result<GrowthRow> {
    if n < 2 {
        return domain(format!("index must be at least 2, got {n}"));
    }
    let Some(idx) = prime_power_decompose(n)? else {
        let z = BigUint::zero();
        return Ok(GrowthRow { n, p: 0, k: 0, count: z.clone(), mtriv: z.clone(), mnontriv: z, exact: true });
    };
    let (p, k) = (idx.p, idx.k);
    let pb = BigUint::from(p);
    let nb = BigUint::from(n);
    let (count, mtriv, mnontriv) = match g.expand()? {
        GroupDescriptor::ZkByZ { module } => {
            let laurent = matches!(module, ModuleDescriptor::Presented(_));
            let (t, nt) = engine.split_triv_nontriv_with(&module, n, laurent)?;
            let base = if k == 1 { BigUint::one() } else { BigUint::zero() };
            (base + &nb * (&t + &nt), t, nt)
        }
        GroupDescriptor::SemidirectFgAbelian { module, acting_rank, acting_torsion } => {
            let laurent = matches!(module, ModuleDescriptor::Presented(_));
            let (t, nt) = engine.split_triv_nontriv_with(&module, n, laurent)?;
            let acting = AbelianGroup { rank: acting_rank, torsion: acting_torsion };
            let count = if k == 1 {
                let r = acting.p_rank(p);
                repunit(&pb, r) + big_pow(p, r as u32) * &t + &pb * &nt
            } else {
                &nb * &nt
            };
            (count, t, nt)
        }
        GroupDescriptor::NilpotentGf { ell, f } => {
            let count = if k == 1 {
                let fm = GroupDescriptor::nilpotent_matrix(ell, &f)?;
                let u = ell + binomial2(ell) - fm.reduce(Fp::new(p)?).rank();
                repunit(&pb, u)
            } else {
                BigUint::zero()
            };
            (count.clone(), count, BigUint::zero())
        }
        GroupDescriptor::WreathCyclic { .. } => unreachable!("expanded above"),
    };
    Ok(GrowthRow { n, p, k, count, mtriv, mnontriv, exact: true })
}

/// Maximal subgroups of index `n`.
pub fn max_subgroups(engine: &Engine, g: &GroupDescriptor, n: u64) -> Result<Count> {
    let r = row(engine, g, n)?;
    Ok(Count { value: r.count, exact: r.exact })
}

/// `max{ℓ + t − 1, d}` and the exact special cases.
pub fn mdeg(engine: &Engine, g: &GroupDescriptor) -> Result<Mdeg> {
    match g.expand()? {
        GroupDescriptor::ZkByZ { module } => match &module {
            ModuleDescriptor::MatrixAction(_) => {
                let inv = engine.module_invariants(&module, MDEG_WINDOW)?;
                Ok(Mdeg { value: inv.d, provenance: Provenance::ExactTheorem })
            }
            ModuleDescriptor::Presented(_) => presented_mdeg(engine, &module),
        },
        GroupDescriptor::SemidirectFgAbelian { module, acting_rank, .. } => {
            let ModuleDescriptor::MatrixAction(mm) = &module else {
                return presented_mdeg(engine, &module);
            };
            let inv = engine.module_invariants(&module, MDEG_WINDOW)?;
            let t = coinvariant_rank(mm)?;
            let value = (acting_rank + t).saturating_sub(1).max(inv.d);
            let provenance = if acting_rank == 0 {
                Provenance::UpperBound
            } else if inv.provenance == Provenance::WindowStabilized {
                Provenance::WindowStabilized
            } else {
                Provenance::ExactTheorem
            };
            Ok(Mdeg { value, provenance })
        }
        GroupDescriptor::NilpotentGf { ell, f } => {
            let fm = GroupDescriptor::nilpotent_matrix(ell, &f)?;
            let r = ell + binomial2(ell) - fm.to_q().rank();
            Ok(Mdeg { value: r - 1, provenance: Provenance::ExactTheorem })
        }
        GroupDescriptor::WreathCyclic { .. } => unreachable!("expanded above"),
    }
}

/// For `N ⋊ Z` with `N` presented, the degree of the shifted growth type.
fn presented_mdeg(engine: &Engine, module: &ModuleDescriptor) -> Result<Mdeg> {
    let value = match engine.growth_type_classify(module)?.shifted() {
        GrowthType::PolyDegree(k) | GrowthType::SubPoly(k) => k,
    };
    Ok(Mdeg { value, provenance: Provenance::ExactTheorem })
}

/// `(ρ₁, d)`: distinct complex roots of the first nonunit invariant factor
/// of `xI − A`, and the number of nonunit invariant factors.
pub fn asymptotic_leading(engine: &Engine, g: &GroupDescriptor) -> Result<(usize, usize)> {
    let GroupDescriptor::ZkByZ { module } = g else {
        return domain("the leading term is only defined for N ⋊ Z");
    };
    if !matches!(module, ModuleDescriptor::MatrixAction(_)) {
        return Err(Error::Unsupported("the leading term needs a matrix module".into()));
    }
    let inv = engine.module_invariants(module, MDEG_WINDOW)?;
    let Some(a1) = inv.a.first() else {
        return Err(Error::Unsupported("the module has no free part".into()));
    };
    Ok((distinct_complex_root_count(a1)?, inv.d))
}

/// Growth type of the group when it is `N ⋊ Z` with `N` presented.
pub fn group_growth_type(engine: &Engine, g: &GroupDescriptor) -> Result<Option<GrowthType>> {
    match g {
        GroupDescriptor::ZkByZ { module } | GroupDescriptor::SemidirectFgAbelian { module, .. }
            if matches!(module, ModuleDescriptor::Presented(_)) =>
        {
            Ok(Some(engine.growth_type_classify(module)?.shifted()))
        }
        _ => Ok(None),
    }
}

/// All prime powers up to `n_max`, ascending.
pub fn prime_powers_up_to(n_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in primes_up_to(n_max) {
        let mut q = p;
        loop {
            out.push(q);
            match q.checked_mul(p) {
                Some(next) if next <= n_max => q = next,
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

/// `p^k` for primes `p ≤ p_max` and `1 ≤ k ≤ k_max`, ascending.
pub fn prime_powers_by_exponent(p_max: u64, k_max: u32) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for p in primes_up_to(p_max) {
        for k in 1..=k_max {
            match p.checked_pow(k) {
                Some(q) => out.push(q),
                None => {
                    return Err(Error::BoundExceeded { what: format!("{p}^{k}"), bound: "2^64".into() })
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Growth table over every prime power `n ≤ n_max`.
pub fn growth_table(engine: &Engine, g: &GroupDescriptor, n_max: u64) -> Result<GrowthReport> {
    if n_max < 2 {
        return domain(format!("n_max must be at least 2, got {n_max}"));
    }
    growth_table_for(engine, g, &prime_powers_up_to(n_max))
}

/// Growth table over the given indices, evaluated in parallel and
/// reported in ascending order.
pub fn growth_table_for(engine: &Engine, g: &GroupDescriptor, indices: &[u64]) -> Result<GrowthReport> {
    g.validate()?;
    let mut ns = indices.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let rows = ns.par_iter().map(|&n| row(engine, g, n)).collect::<Result<Vec<_>>>()?;
    let asymptotic = match g {
        GroupDescriptor::ZkByZ { module: ModuleDescriptor::MatrixAction(m) } if m.rank() > 0 => {
            Some(asymptotic_leading(engine, g)?)
        }
        _ => None,
    };
    Ok(GrowthReport {
        exact: rows.iter().all(|r| r.exact),
        rows,
        mdeg: mdeg(engine, g)?,
        asymptotic,
        growth_type: group_growth_type(engine, g)?,
    })
}

/// Rows of `n ↦ m_n(N)` for a module, with the trivial/nontrivial split.
pub fn module_growth_rows(engine: &Engine, m: &ModuleDescriptor, indices: &[u64]) -> Result<Vec<GrowthRow>> {
    let mut ns = indices.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns.par_iter()
        .map(|&n| {
            if n < 2 {
                return domain(format!("index must be at least 2, got {n}"));
            }
            let (p, k) = prime_power_decompose(n)?.map_or((0, 0), |i| (i.p, i.k));
            let (mtriv, mnontriv) = if p == 0 {
                (BigUint::zero(), BigUint::zero())
            } else {
                engine.split_triv_nontriv(m, n)?
            };
            Ok(GrowthRow { n, p, k, count: &mtriv + &mnontriv, mtriv, mnontriv, exact: true })
        })
        .collect()
}

/// The module of a wreath product, for callers that need it directly.
pub fn wreath_module(m: usize) -> Result<MatrixModule> {
    MatrixModule::new(m, Vec::new(), vec![cyclic_permutation(m)], true)
}
