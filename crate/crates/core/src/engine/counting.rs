//! Counting maximal submodules and the global invariants of a module.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{
    coinvariant_rank, trivial_quotient_dim, Engine, FiberFactors, MatrixModule,
    ModuleDescriptor, PresentedModule, SpectrumEntry,
};
use crate::arith::{big_pow, is_prime, prime_power_decompose, repunit};
use crate::error::{domain, Error, Result};
use crate::linalg::{char_matrix, smith_normal_form_poly};
use crate::poly::{
    count_irreducibles, distinct_complex_root_count, distinct_factor_degrees, Fp, Poly, ZPoly,
};

/// How a reported value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    ExactTheorem,
    WindowStabilized,
    UpperBound,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::ExactTheorem => "exact-theorem",
            Self::WindowStabilized => "window-stabilized",
            Self::UpperBound => "upper-bound",
        })
    }
}

/// Global invariants of a module.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuleInvariants {
    /// Minimal number of generators of `Q ⊗ N`.
    pub d: usize,
    /// Torsion-free rank of the coinvariants `N / Σ (x_i − 1)N`.
    pub t: usize,
    /// Nonunit invariant factors over Q[x], when available.
    #[serde(skip)]
    pub a: Vec<ZPoly>,
    /// Distinct complex roots of each `a_j`.
    pub rho: Vec<usize>,
    /// Torsion and free counts of `Q ⊗ N` over Q[x] (presented modules).
    pub s0: Option<usize>,
    pub r0: Option<usize>,
    pub provenance: Provenance,
}

/// Growth type of `n ↦ m_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GrowthType {
    /// Comparable to `n^k`.
    PolyDegree(usize),
    /// Comparable to `n^k / log n`.
    SubPoly(usize),
}

impl GrowthType {
    /// Multiplies the type by `n`.
    pub fn shifted(self) -> Self {
        match self {
            Self::PolyDegree(k) => Self::PolyDegree(k + 1),
            Self::SubPoly(k) => Self::SubPoly(k + 1),
        }
    }
}

impl fmt::Display for GrowthType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PolyDegree(k) => write!(f, "n^{k}"),
            Self::SubPoly(k) => write!(f, "n^{k}/log(n)"),
        }
    }
}

/// Count of maximal submodules of index `n = p^k` of
/// `⊕_j F_p[x]/(b_j) ⊕ F_p[x]^free_rank`, with `b_1 | b_2 | …`.
///
/// With `exclude_x`, the ideal `(x)` is skipped, as for modules over the
/// Laurent ring.
pub fn chain_count(
    factors: &[Poly<Fp>],
    free_rank: usize,
    n: u64,
    exclude_x: bool,
) -> Result<BigUint> {
    for w in factors.windows(2) {
        if !w[0].divides(&w[1]) {
            return domain(format!("invariant factors violate the divisibility chain: {} does not divide {}", w[0], w[1]));
        }
    }
    let Some(idx) = prime_power_decompose(n)? else {
        return Ok(BigUint::zero());
    };
    if let Some(f) = factors.first() {
        if f.field().p() != idx.p {
            return domain("invariant factors are over a different prime");
        }
    }
    let k = idx.k as usize;
    let mut per_term: Vec<BigUint> = Vec::with_capacity(factors.len() + free_rank);
    for b in factors {
        let mut c = distinct_factor_degrees(b)?.iter().filter(|&&d| d == k).count();
        if exclude_x && k == 1 && b.coeff(0) == 0 {
            c -= 1;
        }
        per_term.push(BigUint::from(c));
    }
    if free_rank > 0 {
        let mut free = count_irreducibles(idx.p, idx.k)?;
        if exclude_x && k == 1 {
            free -= 1u32;
        }
        per_term.extend(std::iter::repeat_n(free, free_rank));
    }
    let t = per_term.len();
    let nn = BigUint::from(n);
    let mut total = BigUint::zero();
    let mut prev = BigUint::zero();
    for (j, m) in per_term.iter().enumerate() {
        if *m < prev {
            return Err(Error::Internal("chain terms are not increasing".into()));
        }
        total += (m - &prev) * repunit(&nn, t - j);
        prev = m.clone();
    }
    Ok(total)
}

/// Sum of `(q^s − 1)/(q − 1)` over spectrum entries of residue degree `k`.
pub fn count_from_spectrum(spectrum: &[SpectrumEntry], p: u64, k: u32) -> BigUint {
    let q = big_pow(p, k);
    spectrum
        .iter()
        .filter(|e| e.e == k as usize)
        .map(|e| repunit(&q, e.s))
        .sum()
}

fn presented_fiber(m: &PresentedModule, p: u64) -> Result<FiberFactors> {
    m.fiber_mod_p(p)
}

impl Engine {
    pub fn spectrum(&self, m: &MatrixModule, p: u64) -> Result<Vec<SpectrumEntry>> {
        self.joint_spectrum(&m.fiber_mod_p(p)?)
    }

    /// Number of maximal submodules of index `n`.
    pub fn count_max_submodules(&self, m: &ModuleDescriptor, n: u64) -> Result<BigUint> {
        self.count_max_submodules_with(m, n, false)
    }

    /// As [`Engine::count_max_submodules`]; `laurent` treats a presented
    /// module as a module over Z[x, 1/x].
    pub fn count_max_submodules_with(&self, m: &ModuleDescriptor, n: u64, laurent: bool) -> Result<BigUint> {
        let Some(idx) = prime_power_decompose(n)? else {
            return Ok(BigUint::zero());
        };
        match m {
            ModuleDescriptor::MatrixAction(mm) => {
                Ok(count_from_spectrum(&self.spectrum(mm, idx.p)?, idx.p, idx.k))
            }
            ModuleDescriptor::Presented(pm) => {
                let f = presented_fiber(pm, idx.p)?;
                chain_count(&f.factors, f.free_rank, n, laurent)
            }
        }
    }

    /// `(mtriv, mnontriv)`: maximal submodules of index `n` whose quotient
    /// has trivial, respectively nontrivial, action.
    pub fn split_triv_nontriv(&self, m: &ModuleDescriptor, n: u64) -> Result<(BigUint, BigUint)> {
        self.split_triv_nontriv_with(m, n, false)
    }

    pub fn split_triv_nontriv_with(
        &self,
        m: &ModuleDescriptor,
        n: u64,
        laurent: bool,
    ) -> Result<(BigUint, BigUint)> {
        let total = self.count_max_submodules_with(m, n, laurent)?;
        let triv = self.mtriv(m, n)?;
        if triv > total {
            return Err(Error::Internal("trivial count exceeds total".into()));
        }
        let rest = &total - &triv;
        Ok((triv, rest))
    }

    /// Maximal submodules of index `n` with trivial quotient action.
    pub fn mtriv(&self, m: &ModuleDescriptor, n: u64) -> Result<BigUint> {
        if n < 2 {
            return domain(format!("index must be at least 2, got {n}"));
        }
        if !is_prime(n) {
            return Ok(BigUint::zero());
        }
        let t = match m {
            ModuleDescriptor::MatrixAction(mm) => trivial_quotient_dim(&mm.fiber_mod_p(n)?)?,
            ModuleDescriptor::Presented(pm) => {
                let f = presented_fiber(pm, n)?;
                let field = Fp::new(n)?;
                let xm1 = Poly::from_i64s(field, &[-1, 1]);
                f.factors.iter().filter(|b| xm1.divides(b)).count() + f.free_rank
            }
        };
        Ok(repunit(&BigUint::from(n), t))
    }

    /// Global invariants. For ℓ ≥ 2, `d` is the largest `s` over the fibers
    /// at the first `window` primes off the bad-prime ledger, which must be
    /// constant across the window.
    pub fn module_invariants(&self, m: &ModuleDescriptor, window: usize) -> Result<ModuleInvariants> {
        match m {
            ModuleDescriptor::MatrixAction(mm) => {
                let t = coinvariant_rank(mm)?;
                if mm.actions().len() == 1 {
                    let free = mm.free_block(0);
                    let s = smith_normal_form_poly(&char_matrix(&free.to_q())?)?;
                    let a: Vec<ZPoly> = s
                        .diagonal
                        .iter()
                        .filter(|d| !d.is_constant())
                        .map(ZPoly::primitive_from_q)
                        .collect();
                    let rho = a.iter().map(distinct_complex_root_count).collect::<Result<_>>()?;
                    return Ok(ModuleInvariants {
                        d: a.len(),
                        t,
                        a,
                        rho,
                        s0: None,
                        r0: None,
                        provenance: Provenance::Exact,
                    });
                }
                let d = self.window_d(m, mm, window)?;
                Ok(ModuleInvariants {
                    d,
                    t,
                    a: Vec::new(),
                    rho: Vec::new(),
                    s0: None,
                    r0: None,
                    provenance: Provenance::WindowStabilized,
                })
            }
            ModuleDescriptor::Presented(pm) => {
                let s = smith_normal_form_poly(&pm.q_matrix())?;
                let a: Vec<ZPoly> = s
                    .diagonal
                    .iter()
                    .filter(|d| !d.is_constant())
                    .map(ZPoly::primitive_from_q)
                    .collect();
                let rho = a.iter().map(distinct_complex_root_count).collect::<Result<_>>()?;
                let r0 = pm.gens() - s.rank;
                let s0 = a.len();
                let t = self.presented_coinvariant_rank(pm)?;
                Ok(ModuleInvariants {
                    d: s0 + r0,
                    t,
                    a,
                    rho,
                    s0: Some(s0),
                    r0: Some(r0),
                    provenance: Provenance::Exact,
                })
            }
        }
    }

    /// Torsion-free rank of `N/(x − 1)N`: the number of Q[x] invariant
    /// factors divisible by `x − 1` plus the free rank.
    fn presented_coinvariant_rank(&self, pm: &PresentedModule) -> Result<usize> {
        let s = smith_normal_form_poly(&pm.q_matrix())?;
        let xm1 = ZPoly::from_i64s(&[-1, 1]).to_q();
        Ok(s.diagonal.iter().filter(|d| xm1.divides(d)).count() + pm.gens() - s.rank)
    }

    fn window_d(&self, m: &ModuleDescriptor, mm: &MatrixModule, window: usize) -> Result<usize> {
        if window == 0 {
            return domain("window must be positive");
        }
        if mm.dim() == 0 {
            return Ok(0);
        }
        let bad = m.bad_primes()?;
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut detail = Vec::new();
        let good = (2u64..).filter(|&p| is_prime(p) && !bad.contains(&BigUint::from(p)));
        for p in good.take(window) {
            let s = self.spectrum(mm, p)?.iter().map(|e| e.s).max().unwrap_or(0);
            seen.insert(s);
            detail.push(format!("p={p}: {s}"));
        }
        if seen.len() != 1 {
            return Err(Error::WindowUnstable { window, detail: detail.join(", ") });
        }
        Ok(*seen.iter().next().expect("nonempty"))
    }

    /// Growth type of `n ↦ m_n(N)` for a presented module.
    pub fn growth_type_classify(&self, m: &ModuleDescriptor) -> Result<GrowthType> {
        let ModuleDescriptor::Presented(pm) = m else {
            return domain("growth type classification needs a presented module");
        };
        let inv = self.module_invariants(m, 1)?;
        let (s0, r0) = (inv.s0.unwrap_or(0), inv.r0.unwrap_or(0));
        let d = s0 + r0;
        let mut primes: BTreeSet<BigUint> = m.bad_primes()?;
        primes.insert(BigUint::from(2u32));
        primes.insert(BigUint::from(3u32));
        let mut r_max = r0;
        for p in primes {
            let Some(p) = p.to_u64() else {
                return Err(Error::Unsupported(format!("ledger prime {p} exceeds 64 bits")));
            };
            r_max = r_max.max(presented_fiber(pm, p)?.free_rank);
        }
        Ok(if d > r_max {
            GrowthType::PolyDegree(d - 1)
        } else if d == r_max && r_max == r0 {
            GrowthType::PolyDegree(d)
        } else {
            GrowthType::SubPoly(r_max)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;
    use crate::linalg::{smith_normal_form_poly, IntMatrix};
    use crate::poly::parse_polynomial;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn three_cycle() -> IntMatrix {
        IntMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])
    }

    fn cyclic_module() -> ModuleDescriptor {
        ModuleDescriptor::matrix(3, vec![], vec![three_cycle()], true).unwrap()
    }

    fn presented(gens: usize, rels: &[&[&str]]) -> ModuleDescriptor {
        let rels = rels
            .iter()
            .map(|r| r.iter().map(|s| parse_polynomial(s).unwrap()).collect())
            .collect();
        ModuleDescriptor::presented(gens, rels).unwrap()
    }

    fn fpoly(p: u64, s: &str) -> Poly<Fp> {
        parse_polynomial(s).unwrap().reduce(Fp::new(p).unwrap())
    }

    #[test]
    fn count_examples() {
        let e = Engine::default();
        let m = cyclic_module();
        assert_eq!(e.count_max_submodules(&m, 3).unwrap(), big(1));
        assert_eq!(e.count_max_submodules(&m, 7).unwrap(), big(3));
        assert_eq!(e.count_max_submodules(&m, 25).unwrap(), big(1));
        assert_eq!(e.count_max_submodules(&m, 9).unwrap(), big(0));
        assert_eq!(e.count_max_submodules(&m, 12).unwrap(), big(0));
        assert!(e.count_max_submodules(&m, 1).is_err());
    }

    #[test]
    fn split_examples() {
        let e = Engine::default();
        let m = cyclic_module();
        assert_eq!(e.split_triv_nontriv(&m, 3).unwrap(), (big(1), big(0)));
        assert_eq!(e.split_triv_nontriv(&m, 7).unwrap(), (big(1), big(2)));
        let z2 = ModuleDescriptor::matrix(2, vec![], vec![IntMatrix::identity(2)], true).unwrap();
        assert_eq!(e.split_triv_nontriv(&z2, 5).unwrap(), (big(6), big(0)));
    }

    #[test]
    fn chain_examples() {
        assert_eq!(chain_count(&[fpoly(7, "x^3 - 1")], 0, 7, false).unwrap(), big(3));
        assert_eq!(chain_count(&[], 1, 4, false).unwrap(), big(1));
        for p in [2u64, 3, 5, 7] {
            let f = fpoly(p, "x - 1");
            assert_eq!(chain_count(&[f.clone(), f], 0, p, false).unwrap(), big(1 + p));
        }
        assert!(chain_count(&[fpoly(5, "x^2"), fpoly(5, "x + 1")], 0, 5, false).is_err());
        // Laurent: (x) is not a maximal ideal
        assert_eq!(chain_count(&[], 1, 5, true).unwrap(), big(4));
        assert_eq!(chain_count(&[fpoly(5, "x^2 - x")], 0, 5, true).unwrap(), big(1));
    }

    #[test]
    fn invariants_examples() {
        let e = Engine::default();
        let inv = e.module_invariants(&cyclic_module(), 5).unwrap();
        assert_eq!((inv.d, inv.t, inv.rho.clone()), (1, 1, vec![3]));
        assert_eq!(inv.a, vec![parse_polynomial("x^3 - 1").unwrap()]);
        let z2 = ModuleDescriptor::matrix(2, vec![], vec![IntMatrix::identity(2)], true).unwrap();
        let inv = e.module_invariants(&z2, 5).unwrap();
        assert_eq!((inv.d, inv.t, inv.rho), (2, 2, vec![1, 1]));
        let two = ModuleDescriptor::matrix(2, vec![], vec![IntMatrix::identity(2), IntMatrix::identity(2)], true).unwrap();
        let inv = e.module_invariants(&two, 5).unwrap();
        assert_eq!((inv.d, inv.t, inv.provenance), (2, 2, Provenance::WindowStabilized));
    }

    #[test]
    fn growth_type_examples() {
        let e = Engine::default();
        assert_eq!(e.growth_type_classify(&presented(1, &[])).unwrap(), GrowthType::PolyDegree(1));
        assert_eq!(e.growth_type_classify(&presented(1, &[&["5"]])).unwrap(), GrowthType::SubPoly(1));
        assert_eq!(e.growth_type_classify(&presented(1, &[&["x^2 + 1"]])).unwrap(), GrowthType::PolyDegree(0));
        assert_eq!(e.growth_type_classify(&presented(2, &[])).unwrap(), GrowthType::PolyDegree(2));
        assert!(e.growth_type_classify(&cyclic_module()).is_err());
        assert_eq!(GrowthType::SubPoly(1).to_string(), "n^1/log(n)");
    }

    #[test]
    fn free_module_counts() {
        let e = Engine::default();
        let z2 = presented(2, &[]);
        for p in primes_up_to(50) {
            assert_eq!(e.count_max_submodules(&z2, p).unwrap(), big(p * p + p));
        }
        let zx = presented(1, &[]);
        assert_eq!(e.count_max_submodules(&zx, 4).unwrap(), big(1));
        assert_eq!(e.count_max_submodules(&zx, 8).unwrap(), big(2));
    }

    #[test]
    fn presented_matches_matrix_form() {
        let e = Engine::default();
        let pres = presented(1, &[&["x^3 - 1"]]);
        let m = cyclic_module();
        for n in [2u64, 3, 4, 5, 7, 8, 9, 13, 25, 27, 49] {
            assert_eq!(
                e.count_max_submodules(&pres, n).unwrap(),
                e.count_max_submodules(&m, n).unwrap(),
                "n = {n}"
            );
            assert_eq!(e.mtriv(&pres, n).unwrap(), e.mtriv(&m, n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn torsion_kept_agrees_with_quotient_beyond_its_order() {
        // N = Z^2 (swap) ⊕ Z/2 with trivial action on the torsion part
        let e = Engine::default();
        let a = IntMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let with = ModuleDescriptor::matrix(2, vec![2], vec![a], true).unwrap();
        let without = ModuleDescriptor::matrix(
            2,
            vec![],
            vec![IntMatrix::from_i64(&[&[0, 1], &[1, 0]])],
            true,
        )
        .unwrap();
        for n in [3u64, 4, 5, 7, 9, 11] {
            assert_eq!(e.count_max_submodules(&with, n).unwrap(), e.count_max_submodules(&without, n).unwrap());
        }
        assert_ne!(e.count_max_submodules(&with, 2).unwrap(), e.count_max_submodules(&without, 2).unwrap());
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
            let rows: Vec<&[i64]> = v.chunks(n).collect();
            IntMatrix::from_i64(&rows)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn spectrum_agrees_with_snf_chain(a in (1usize..=4).prop_flat_map(small_matrix), seed in any::<u64>()) {
            let e = Engine::new(seed);
            let m = ModuleDescriptor::matrix(a.rows(), vec![], vec![a.clone()], false).unwrap();
            for p in [2u64, 3, 5, 7] {
                let s = smith_normal_form_poly(&char_matrix(&a.reduce(Fp::new(p).unwrap())).unwrap()).unwrap();
                let factors: Vec<Poly<Fp>> = s.diagonal.into_iter().filter(|d| !d.is_constant()).collect();
                for k in 1..=4u32 {
                    let n = p.pow(k);
                    prop_assert_eq!(
                        e.count_max_submodules(&m, n).unwrap(),
                        chain_count(&factors, 0, n, false).unwrap()
                    );
                }
            }
        }

        #[test]
        fn split_sums_to_total(a in (1usize..=3).prop_flat_map(small_matrix), n in 2u64..60) {
            let e = Engine::default();
            let m = ModuleDescriptor::matrix(a.rows(), vec![], vec![a], false).unwrap();
            let (t, nt) = e.split_triv_nontriv(&m, n).unwrap();
            prop_assert_eq!(t + nt, e.count_max_submodules(&m, n).unwrap());
        }

        #[test]
        fn direct_powers_of_cyclic_modules(
            cs in proptest::collection::vec(0u64..5, 1..4),
            d in 1usize..=3,
            k in 1u32..=3,
        ) {
            let p = 5u64;
            let field = Fp::new(p).unwrap();
            let mut v = cs.clone();
            v.push(1);
            let f = Poly::new(field, v);
            let n = p.pow(k);
            let single = chain_count(std::slice::from_ref(&f), 0, n, false).unwrap();
            let power = chain_count(&vec![f.clone(); d], 0, n, false).unwrap();
            prop_assert_eq!(power, single.clone() * repunit(&big(n), d));
            prop_assert!(single <= big((f.deg() / k as usize) as u64));
        }

        #[test]
        fn trivial_actions_count_all_hyperplanes(k in 1usize..=3, tors in proptest::collection::vec(2u64..7, 0..2), pi in 0usize..5) {
            let p = [2u64, 3, 5, 7, 11][pi];
            let dim = k + tors.len();
            let m = ModuleDescriptor::matrix(k, tors.clone(), vec![IntMatrix::identity(dim)], true).unwrap();
            let fd = k + tors.iter().filter(|&&t| t % p == 0).count();
            let e = Engine::default();
            prop_assert_eq!(e.count_max_submodules(&m, p).unwrap(), repunit(&big(p), fd));
            prop_assert_eq!(e.split_triv_nontriv(&m, p).unwrap().1, big(0));
        }

        #[test]
        fn cyclic_z_lattice_bound(a in (1usize..=4).prop_flat_map(small_matrix)) {
            // Z^d cyclic over Z[x] when e_1 generates: use a companion matrix
            let d = a.rows();
            let mut comp = IntMatrix::zeros(d, d);
            for i in 1..d {
                comp.set(i, i - 1, 1.into());
            }
            for i in 0..d {
                comp.set(i, d - 1, a.get(0, i).clone());
            }
            let m = ModuleDescriptor::matrix(d, vec![], vec![comp], false).unwrap();
            let e = Engine::default();
            for n in [2u64, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27] {
                prop_assert!(e.count_max_submodules(&m, n).unwrap() <= big(d as u64));
            }
        }
    }
}
