//! Dense univariate polynomials over Z, Q and F_p.

mod factor;
mod zpoly;

pub use factor::{
    count_irreducibles, distinct_factor_degrees, factor_mod_p, squarefree_decomposition,
    FactorizationModP,
};
pub use zpoly::{content_and_primitive, distinct_complex_root_count, parse_polynomial, ZPoly};

use std::fmt::{self, Debug};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_prime, mul_mod, pow_mod};
use crate::error::{domain, Result};

/// A coefficient field.
pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    type El: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    /// Multiplicative inverse. `a` must be nonzero.
    fn inv(&self, a: &Self::El) -> Self::El;
    fn from_bigint(&self, n: &BigInt) -> Self::El;
    /// 0 for Q.
    fn characteristic(&self) -> u64;
    /// Integers whose prime divisors a computation must record when it
    /// divides by `a`. Empty for finite fields.
    fn ledger_ints(&self, _a: &Self::El) -> Vec<BigInt> {
        Vec::new()
    }
    fn is_negative(&self, _a: &Self::El) -> bool {
        false
    }
    fn fmt_el(&self, a: &Self::El) -> String;

    fn from_i64(&self, n: i64) -> Self::El {
        self.from_bigint(&BigInt::from(n))
    }
    fn div(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.mul(a, &self.inv(b))
    }
    fn is_one(&self, a: &Self::El) -> bool {
        *a == self.one()
    }
}

/// The prime field F_p, for primes below 2^63.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        if p >= 1 << 63 {
            return domain(format!("prime {p} is outside the supported range (< 2^63)"));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }
}

impl Field for Fp {
    type El = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        pow_mod(*a, self.p - 2, self.p)
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap_or(0)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn fmt_el(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// The rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Q;

impl Field for Q {
    type El = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn ledger_ints(&self, a: &BigRational) -> Vec<BigInt> {
        vec![a.numer().clone(), a.denom().clone()]
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
    fn fmt_el(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("({}/{})", a.numer(), a.denom())
        }
    }
}

/// A polynomial with dense ascending coefficients and no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<K: Field> {
    field: K,
    coeffs: Vec<K::El>,
}

impl<K: Field> Poly<K> {
    pub fn new(field: K, mut coeffs: Vec<K::El>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: K) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn one(field: K) -> Self {
        let one = field.one();
        Self::new(field, vec![one])
    }

    pub fn constant(field: K, c: K::El) -> Self {
        Self::new(field, vec![c])
    }

    /// The monomial `c·x^d`.
    pub fn monomial(field: K, c: K::El, d: usize) -> Self {
        let mut v = vec![field.zero(); d + 1];
        v[d] = c;
        Self::new(field, v)
    }

    pub fn x(field: K) -> Self {
        let one = field.one();
        Self::monomial(field, one, 1)
    }

    pub fn from_i64s(field: K, cs: &[i64]) -> Self {
        let v = cs.iter().map(|&c| field.from_i64(c)).collect();
        Self::new(field, v)
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn coeffs(&self) -> &[K::El] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K::El {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn lead(&self) -> Option<&K::El> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| self.field.is_one(c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| f.add(&self.coeff(i), &o.coeff(i))).collect();
        Self::new(f.clone(), v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| f.sub(&self.coeff(i), &o.coeff(i))).collect();
        Self::new(f.clone(), v)
    }

    pub fn neg(&self) -> Self {
        let v = self.coeffs.iter().map(|c| self.field.neg(c)).collect();
        Self::new(self.field.clone(), v)
    }

    pub fn scale(&self, c: &K::El) -> Self {
        let v = self.coeffs.iter().map(|a| self.field.mul(a, c)).collect();
        Self::new(self.field.clone(), v)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || o.is_zero() {
            return Self::zero(f.clone());
        }
        let mut v = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(a, b));
            }
        }
        Self::new(f.clone(), v)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.field.clone());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Division with remainder. `d` must be nonzero.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let f = &self.field;
        let Some(dl) = d.lead() else {
            return domain("polynomial division by zero");
        };
        let dn = d.deg();
        let inv = f.inv(dl);
        let mut r = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return Ok((Self::zero(f.clone()), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - dn];
        for i in (dn..r.len()).rev() {
            let c = f.mul(&r[i], &inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dn + j;
                r[idx] = f.sub(&r[idx], &f.mul(&c, dc));
            }
            q[i - dn] = c;
        }
        r.truncate(dn);
        Ok((Self::new(f.clone(), q), Self::new(f.clone(), r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return domain("polynomial division is not exact");
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) if !self.field.is_one(l) => self.scale(&self.field.inv(l)),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        Self::new(f.clone(), v)
    }

    pub fn eval(&self, x: &K::El) -> K::El {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// `self^e mod m`.
    pub fn powmod(&self, e: &BigUint, m: &Self) -> Result<Self> {
        let mut base = self.rem(m)?;
        let mut r = Self::one(self.field.clone()).rem(m)?;
        for i in 0..e.bits() {
            if e.bit(i) {
                r = r.mul(&base).rem(m)?;
            }
            if i + 1 < e.bits() {
                base = base.mul(&base).rem(m)?;
            }
        }
        Ok(r)
    }

    /// Substitutes `x -> x^k`.
    pub fn inflate(&self, k: usize) -> Self {
        let f = &self.field;
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![f.zero(); self.deg() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Self::new(f.clone(), v)
    }

    pub fn map_field<L: Field>(&self, to: L, g: impl Fn(&K::El) -> L::El) -> Poly<L> {
        Poly::new(to, self.coeffs.iter().map(g).collect())
    }
}

/// Monic gcd over a field.
pub fn gcd_over_field<K: Field>(a: &Poly<K>, b: &Poly<K>) -> Result<Poly<K>> {
    if a.is_zero() && b.is_zero() {
        return domain("gcd of two zero polynomials");
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.rem(&y)?;
        x = y;
        y = r;
    }
    Ok(x.monic())
}

/// Extended Euclid: returns `(g, s, t)` with `g = s·a + t·b`, `g` monic.
pub fn xgcd<K: Field>(a: &Poly<K>, b: &Poly<K>) -> Result<(Poly<K>, Poly<K>, Poly<K>)> {
    if a.is_zero() && b.is_zero() {
        return domain("gcd of two zero polynomials");
    }
    let f = a.field().clone();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(f.clone()), Poly::zero(f.clone()));
    let (mut t0, mut t1) = (Poly::zero(f.clone()), Poly::one(f.clone()));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1)?;
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let l = f.inv(r0.lead().expect("nonzero gcd"));
    Ok((r0.scale(&l), s0.scale(&l), t0.scale(&l)))
}

pub fn lcm_over_field<K: Field>(a: &Poly<K>, b: &Poly<K>) -> Result<Poly<K>> {
    if a.is_zero() || b.is_zero() {
        return Ok(Poly::zero(a.field().clone()));
    }
    let g = gcd_over_field(a, b)?;
    Ok(a.exact_div(&g)?.mul(b).monic())
}

/// Monic squarefree part over Q or F_p: the product of the distinct monic
/// irreducible factors.
pub fn squarefree_part<K: Field>(f: &Poly<K>) -> Result<Poly<K>> {
    if f.is_constant() {
        return domain("squarefree part of a constant polynomial");
    }
    let p = f.field().characteristic();
    if p == 0 {
        let g = gcd_over_field(f, &f.derivative())?;
        return Ok(f.exact_div(&g)?.monic());
    }
    let mut out = Poly::one(f.field().clone());
    let mut rest = f.monic();
    loop {
        let d = rest.derivative();
        if d.is_zero() {
            if rest.is_constant() {
                break;
            }
            rest = pth_root(&rest, p as usize);
            continue;
        }
        let g = gcd_over_field(&rest, &d)?;
        let part = rest.exact_div(&g)?;
        out = lcm_over_field(&out, &part)?;
        rest = g;
        if rest.is_constant() {
            break;
        }
    }
    Ok(out)
}

/// For `f(x) = g(x^p)` over F_p, returns `g` (Frobenius fixes F_p).
fn pth_root<K: Field>(f: &Poly<K>, p: usize) -> Poly<K> {
    let v = f.coeffs.iter().step_by(p).cloned().collect();
    Poly::new(f.field.clone(), v)
}

impl<K: Field> fmt::Display for Poly<K> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let neg = f.is_negative(c);
            let mag = if neg { f.neg(c) } else { c.clone() };
            if first {
                if neg {
                    write!(out, "-")?;
                }
            } else {
                write!(out, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = f.is_one(&mag);
            match (i, unit) {
                (0, _) => write!(out, "{}", f.fmt_el(&mag))?,
                (_, true) => {}
                (_, false) => write!(out, "{}*", f.fmt_el(&mag))?,
            }
            match i {
                0 => {}
                1 => write!(out, "x")?,
                _ => write!(out, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<K: Field> Debug for Poly<K> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "Poly({self})")
    }
}

/// Orders F_p polynomials by degree, then coefficients from the top.
pub fn fp_poly_key(f: &Poly<Fp>) -> (usize, Vec<u64>) {
    (f.deg(), f.coeffs.iter().rev().cloned().collect())
}
