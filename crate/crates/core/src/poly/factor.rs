//! Factorization over F_p: squarefree decomposition, distinct-degree and
//! equal-degree splitting.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::Rng;

use super::{fp_poly_key, gcd_over_field, Field, Fp, Poly};
use crate::arith::{big_pow, mobius};
use crate::error::{domain, Error, Result};

/// Largest p for which linear factors are found by exhaustive root search.
const ROOT_SEARCH_LIMIT: u64 = 1 << 16;

/// Complete factorization of a polynomial over F_p.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationModP {
    pub p: u64,
    /// Leading coefficient of the input.
    pub unit: u64,
    /// Distinct monic irreducible factors with multiplicities, sorted by
    /// degree and then coefficients.
    pub factors: Vec<(Poly<Fp>, u32)>,
}

impl FactorizationModP {
    pub fn expand(&self) -> Poly<Fp> {
        let field = Fp::new(self.p).expect("prime");
        self.factors
            .iter()
            .fold(Poly::constant(field, self.unit), |acc, (g, e)| acc.mul(&g.pow(*e)))
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// Number of distinct irreducible factors of degree `k`.
    pub fn count_of_degree(&self, k: usize) -> usize {
        self.factors.iter().filter(|(g, _)| g.deg() == k).count()
    }
}

/// Squarefree decomposition of a monic polynomial: pairwise coprime
/// squarefree monic `g_i` with `f = Π g_i^{e_i}`.
pub fn squarefree_decomposition(f: &Poly<Fp>) -> Result<Vec<(Poly<Fp>, u32)>> {
    if f.is_zero() {
        return domain("squarefree decomposition of zero");
    }
    let p = f.field().p();
    let f = f.monic();
    let mut out = Vec::new();
    if f.is_constant() {
        return Ok(out);
    }
    let mut c = gcd_over_field(&f, &f.derivative())?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1u32;
    while !w.is_constant() {
        let y = gcd_over_field(&w, &c)?;
        let fac = w.exact_div(&y)?;
        if !fac.is_constant() {
            out.push((fac, i));
        }
        c = c.exact_div(&y)?;
        w = y;
        i += 1;
    }
    if !c.is_constant() {
        let root = Poly::new(*f.field(), c.coeffs().iter().step_by(p as usize).cloned().collect());
        let mult = u32::try_from(p).map_err(|_| Error::Internal("multiplicity overflow".into()))?;
        for (g, e) in squarefree_decomposition(&root)? {
            out.push((g, e * mult));
        }
    }
    Ok(out)
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// `(product of all irreducible factors of degree d, d)`.
pub fn distinct_degree(f: &Poly<Fp>) -> Result<Vec<(Poly<Fp>, usize)>> {
    let field = *f.field();
    let p = BigUint::from(field.p());
    let x = Poly::x(field);
    let mut rest = f.monic();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(&p, &rest)?;
        let g = gcd_over_field(&rest, &h.sub(&x))?;
        if !g.is_one() {
            rest = rest.exact_div(&g)?;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
    }
    if !rest.is_constant() {
        let d = rest.deg();
        out.push((rest, d));
    }
    Ok(out)
}

/// Splits a squarefree monic product of degree-`d` irreducibles.
fn equal_degree<R: Rng + ?Sized>(f: &Poly<Fp>, d: usize, rng: &mut R) -> Result<Vec<Poly<Fp>>> {
    let field = *f.field();
    let p = field.p();
    let n = f.deg();
    if n == d {
        return Ok(vec![f.clone()]);
    }
    if d == 1 && p <= ROOT_SEARCH_LIMIT {
        let roots: Vec<u64> = (0..p).filter(|r| field.is_zero(&f.eval(r))).collect();
        if roots.len() != n {
            return Err(Error::Internal(format!("expected {n} roots mod {p}, found {}", roots.len())));
        }
        return Ok(roots
            .into_iter()
            .map(|r| Poly::new(field, vec![field.neg(&r), 1]))
            .collect());
    }
    let exp = if p == 2 {
        BigUint::zero()
    } else {
        (big_pow(p, d as u32) - 1u32) / 2u32
    };
    loop {
        let a = Poly::new(field, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.is_constant() {
            continue;
        }
        let g0 = gcd_over_field(&a, f)?;
        let splitter = if !g0.is_one() {
            g0
        } else if p == 2 {
            let mut t = a.clone();
            let mut sq = a.clone();
            for _ in 1..d {
                sq = sq.mul(&sq).rem(f)?;
                t = t.add(&sq);
            }
            gcd_over_field(&t, f)?
        } else {
            let b = a.powmod(&exp, f)?.sub(&Poly::one(field));
            if b.is_zero() {
                continue;
            }
            gcd_over_field(&b, f)?
        };
        if splitter.is_constant() || splitter.deg() == n {
            continue;
        }
        let other = f.exact_div(&splitter)?;
        let mut out = equal_degree(&splitter, d, rng)?;
        out.extend(equal_degree(&other, d, rng)?);
        return Ok(out);
    }
}

/// Complete factorization over F_p.
pub fn factor_mod_p<R: Rng + ?Sized>(f: &Poly<Fp>, rng: &mut R) -> Result<FactorizationModP> {
    let field = *f.field();
    let Some(&unit) = f.lead() else {
        return domain(format!("polynomial vanishes mod {} (content divisible by p)", field.p()));
    };
    let mut factors = Vec::new();
    for (part, e) in squarefree_decomposition(f)? {
        for (block, d) in distinct_degree(&part)? {
            for g in equal_degree(&block, d, rng)? {
                factors.push((g.monic(), e));
            }
        }
    }
    factors.sort_by_key(|(g, _)| fp_poly_key(g));
    Ok(FactorizationModP { p: field.p(), unit, factors })
}

/// Degrees of the distinct irreducible factors, with repetition.
pub fn distinct_factor_degrees(f: &Poly<Fp>) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (part, _) in squarefree_decomposition(f)? {
        for (block, d) in distinct_degree(&part)? {
            out.extend(std::iter::repeat_n(d, block.deg() / d));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Number of monic irreducible polynomials of degree `k` over F_p:
/// `(1/k) Σ_{a | k} μ(k/a) p^a`.
pub fn count_irreducibles(p: u64, k: u32) -> Result<BigUint> {
    if k == 0 {
        return domain("degree must be positive");
    }
    Fp::new(p)?;
    let mut acc = BigInt::zero();
    for a in (1..=k).filter(|a| k.is_multiple_of(*a)) {
        let mu = mobius((k / a) as u64)?;
        acc += BigInt::from(mu) * BigInt::from(big_pow(p, a));
    }
    let k = BigInt::from(k);
    if !(&acc % &k).is_zero() {
        return Err(Error::Internal("necklace count is not an integer".into()));
    }
    (acc / k)
        .to_biguint()
        .ok_or_else(|| Error::Internal("negative necklace count".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ZPoly;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64, cs: &[i64]) -> Poly<Fp> {
        Poly::from_i64s(Fp::new(p).unwrap(), cs)
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    /// Irreducibility by trial division by every monic polynomial of
    /// degree at most half.
    fn brute_irreducible(f: &Poly<Fp>) -> bool {
        let p = f.field().p();
        let n = f.deg();
        for d in 1..=n / 2 {
            for idx in 0..p.pow(d as u32) {
                let mut cs = Vec::with_capacity(d + 1);
                let mut t = idx;
                for _ in 0..d {
                    cs.push(t % p);
                    t /= p;
                }
                cs.push(1);
                let g = Poly::new(*f.field(), cs);
                if g.divides(f) {
                    return false;
                }
            }
        }
        n >= 1
    }

    #[test]
    fn factor_examples() {
        let f = factor_mod_p(&fp(2, &[1, 1, 1]), &mut rng()).unwrap();
        assert!(f.is_irreducible());
        let f = factor_mod_p(&fp(7, &[1, 1, 1]), &mut rng()).unwrap();
        assert_eq!(f.factors, vec![(fp(7, &[-4, 1]), 1), (fp(7, &[-2, 1]), 1)]);
        let f = factor_mod_p(&fp(3, &[-1, 0, 0, 1]), &mut rng()).unwrap();
        assert_eq!(f.factors, vec![(fp(3, &[-1, 1]), 3)]);
        assert!(factor_mod_p(&ZPoly::from_i64s(&[3, 6]).reduce(Fp::new(3).unwrap()), &mut rng()).is_err());
    }

    #[test]
    fn large_prime_uses_cantor_zassenhaus() {
        let p = 1_000_000_007u64;
        // (x-1)(x-2)(x-3)(x^2+1): x^2+1 irreducible since p ≡ 3 mod 4
        let f = fp(p, &[-1, 1]).mul(&fp(p, &[-2, 1])).mul(&fp(p, &[-3, 1])).mul(&fp(p, &[1, 0, 1]));
        let fac = factor_mod_p(&f, &mut rng()).unwrap();
        assert_eq!(fac.factors.len(), 4);
        assert_eq!(fac.expand(), f);
        // two quadratics over F_2 need the trace splitter
        let g = fp(2, &[1, 1, 0, 1]).mul(&fp(2, &[1, 0, 1, 1]));
        let fac = factor_mod_p(&g, &mut rng()).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.expand(), g);
    }

    #[test]
    fn irreducible_counts_match_enumeration() {
        assert_eq!(count_irreducibles(2, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(count_irreducibles(2, 2).unwrap(), BigUint::from(1u32));
        assert_eq!(count_irreducibles(3, 3).unwrap(), BigUint::from(8u32));
        for p in [2u64, 3, 5] {
            for k in 1..=4u32 {
                let field = Fp::new(p).unwrap();
                let mut n = 0u64;
                for idx in 0..p.pow(k) {
                    let mut cs = Vec::new();
                    let mut t = idx;
                    for _ in 0..k {
                        cs.push(t % p);
                        t /= p;
                    }
                    cs.push(1);
                    if brute_irreducible(&Poly::new(field, cs)) {
                        n += 1;
                    }
                }
                assert_eq!(count_irreducibles(p, k).unwrap(), BigUint::from(n), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn count_times_degree_bounded() {
        for p in [2u64, 3, 5, 7, 11] {
            assert_eq!(count_irreducibles(p, 1).unwrap(), BigUint::from(p));
            for k in 1..=8u32 {
                assert!(count_irreducibles(p, k).unwrap() * k <= big_pow(p, k));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn factorization_multiplies_back(
            cs in proptest::collection::vec(-20i64..20, 2..10),
            pi in 0usize..15,
            seed in any::<u64>(),
        ) {
            let p = crate::arith::primes_up_to(50)[pi];
            let f = fp(p, &cs);
            prop_assume!(!f.is_zero());
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let fac = factor_mod_p(&f, &mut r).unwrap();
            prop_assert_eq!(fac.expand(), f.clone());
            for w in fac.factors.windows(2) {
                prop_assert!(w[0].0 != w[1].0);
            }
            if f.deg() <= 6 && p <= 7 {
                for (g, _) in &fac.factors {
                    prop_assert!(brute_irreducible(g));
                }
            }
            let degs: Vec<usize> = fac.factors.iter().map(|(g, _)| g.deg()).collect();
            let mut sorted = degs.clone();
            sorted.sort_unstable();
            prop_assert_eq!(distinct_factor_degrees(&f).unwrap(), sorted);
        }
    }
}
