//! Elementary number theory on machine and arbitrary-precision integers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Result};

/// Exact rational number with a positive denominator in lowest terms.
pub type Rational = BigRational;

/// An index `n` written as a prime power `p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimePowerIndex {
    pub n: u64,
    pub p: u64,
    pub k: u32,
}

impl PrimePowerIndex {
    /// Builds the index from `p` and `k`, checking primality and overflow.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        if k == 0 {
            return domain("prime power exponent must be positive");
        }
        match p.checked_pow(k) {
            Some(n) => Ok(Self { n, p, k }),
            None => domain(format!("{p}^{k} overflows 64 bits")),
        }
    }

    pub fn is_prime(&self) -> bool {
        self.k == 1
    }
}

/// Returns `Some((p, k))` when `n = p^k`, `None` when `n` is not a prime power.
pub fn prime_power_decompose(n: u64) -> Result<Option<PrimePowerIndex>> {
    if n < 2 {
        return domain(format!("prime_power_decompose needs n >= 2, got {n}"));
    }
    let p = smallest_prime_factor(n);
    let mut m = n;
    let mut k = 0u32;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    Ok((m == 1).then_some(PrimePowerIndex { n, p, k }))
}

/// Möbius function.
pub fn mobius(m: u64) -> Result<i8> {
    if m < 1 {
        return domain("mobius needs m >= 1");
    }
    let mut sign = 1i8;
    for (_, e) in factor_u64(m) {
        if e > 1 {
            return Ok(0);
        }
        sign = -sign;
    }
    Ok(sign)
}

/// Legendre symbol `(a|p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return domain(format!("legendre needs an odd prime, got {p}"));
    }
    let r = (a as i128).rem_euclid(p as i128) as u64;
    if r == 0 {
        return Ok(0);
    }
    let e = pow_mod(r, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// All primes `<= bound`, ascending (sieve of Eratosthenes).
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let b = bound as usize;
    let mut composite = vec![false; b + 1];
    let mut out = Vec::new();
    for i in 2..=b {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= b {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality for all 64-bit integers (Miller–Rabin with the
/// first twelve prime bases, which is exact below 3.3·10^24).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn smallest_prime_factor(n: u64) -> u64 {
    factor_u64(n).first().map(|&(p, _)| p).unwrap_or(n)
}

/// Prime factorization of a 64-bit integer as `(prime, exponent)` pairs, ascending.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    collect_factors_u64(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn collect_factors_u64(mut n: u64, out: &mut Vec<u64>) {
    if n < 2 {
        return;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
    }
    if n < 2 {
        return;
    }
    if n < 41 * 41 || is_prime(n) {
        out.push(n);
        return;
    }
    let mut c = 1u64;
    loop {
        if let Some(d) = pollard_brent(n, c) {
            collect_factors_u64(d, out);
            collect_factors_u64(n / d, out);
            return;
        }
        c += 1;
    }
}

fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
    while d == 1 {
        x = f(x);
        y = f(f(y));
        d = x.abs_diff(y).gcd(&n);
    }
    (d != n).then_some(d)
}

/// Distinct prime divisors of a nonzero big integer.
///
/// Trial division up to 2^16 and 64-bit Pollard rho are exact. Cofactors
/// above 64 bits fall back to Pollard rho with Miller–Rabin, deterministic
/// below 3.3·10^24.
pub fn prime_divisors(n: &BigInt) -> Vec<BigUint> {
    let mut m = n.magnitude().clone();
    let mut out = Vec::new();
    if m.is_zero() {
        return out;
    }
    let mut d = 2u32;
    while d < 1 << 16 {
        let dd = BigUint::from(d);
        if (&m % &dd).is_zero() {
            out.push(dd.clone());
            while (&m % &dd).is_zero() {
                m /= &dd;
            }
        }
        if m.is_one() {
            break;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        big_factors(m, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn big_factors(m: BigUint, out: &mut Vec<BigUint>) {
    if m.is_one() {
        return;
    }
    if let Some(small) = m.to_u64() {
        out.extend(factor_u64(small).into_iter().map(|(p, _)| BigUint::from(p)));
        return;
    }
    if big_is_probable_prime(&m) {
        out.push(m);
        return;
    }
    let mut c = BigUint::one();
    loop {
        if let Some(d) = big_pollard(&m, &c) {
            let rest = &m / &d;
            big_factors(d, out);
            big_factors(rest, out);
            return;
        }
        c += 1u32;
    }
}

fn big_pollard(n: &BigUint, c: &BigUint) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let mut x = BigUint::from(2u32);
    let mut y = x.clone();
    let mut d = BigUint::one();
    while d.is_one() {
        x = f(&x);
        y = f(&f(&y));
        let diff = if x > y { &x - &y } else { &y - &x };
        d = diff.gcd(n);
    }
    (&d != n).then_some(d)
}

fn big_is_probable_prime(n: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// `1 + q + ... + q^(s-1)`, i.e. `(q^s - 1)/(q - 1)`; zero when `s = 0`.
pub fn repunit(q: &BigUint, s: usize) -> BigUint {
    let mut acc = BigUint::zero();
    let mut term = BigUint::one();
    for _ in 0..s {
        acc += &term;
        term *= q;
    }
    acc
}

pub fn big_pow(base: u64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), e as usize)
}
