//! Integer polynomials: content, reduction, bad primes and the text format.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{squarefree_part, Field, Fp, Poly, Q};
use crate::arith::prime_divisors;
use crate::error::{domain, Error, Result};
use crate::linalg::bareiss_det;

/// Largest exponent the text parser accepts.
pub const MAX_PARSE_DEGREE: usize = 10_000;
/// Longest coefficient literal, in decimal digits, the text parser accepts.
pub const MAX_COEFF_DIGITS: usize = 1_000;

/// A polynomial with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn to_q(&self) -> Poly<Q> {
        Poly::new(Q, self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn reduce(&self, field: Fp) -> Poly<Fp> {
        Poly::new(field, self.coeffs.iter().map(|c| field.from_bigint(c)).collect())
    }

    /// Clears denominators of a rational polynomial and divides by the content,
    /// giving a primitive integer polynomial with positive leading coefficient.
    pub fn primitive_from_q(f: &Poly<Q>) -> Self {
        let lcm = f
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = f
            .coeffs()
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let z = Self::new(ints);
        if z.is_zero() {
            return z;
        }
        let (_, mut prim) = content_and_primitive(&z).expect("nonzero");
        if prim.lead().is_some_and(Signed::is_negative) {
            prim.coeffs.iter_mut().for_each(|c| *c = -c.clone());
        }
        prim
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Primes at which reduction can lose degree or squarefreeness: divisors
    /// of the content, the leading coefficient, and the resultant of the
    /// primitive squarefree part with its derivative.
    pub fn bad_primes(&self) -> Result<BTreeSet<BigUint>> {
        let (content, _) = content_and_primitive(self)?;
        let mut out: BTreeSet<BigUint> = prime_divisors(&content).into_iter().collect();
        out.extend(prime_divisors(self.lead().expect("nonzero")));
        if !self.is_constant() {
            let g = Self::primitive_from_q(&squarefree_part(&self.to_q())?);
            out.extend(prime_divisors(&g.lead().cloned().unwrap_or_default()));
            out.extend(prime_divisors(&resultant(&g, &g.derivative())));
        }
        Ok(out)
    }
}

/// Resultant via the Sylvester determinant.
pub fn resultant(a: &ZPoly, b: &ZPoly) -> BigInt {
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
        return BigInt::zero();
    };
    if m + n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.coeffs.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.coeffs.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(rows)
}

/// Content (positive gcd of coefficients) and primitive part.
pub fn content_and_primitive(f: &ZPoly) -> Result<(BigInt, ZPoly)> {
    if f.is_zero() {
        return domain("content of the zero polynomial");
    }
    let g = f.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let prim = ZPoly::new(f.coeffs.iter().map(|c| c / &g).collect());
    Ok((g, prim))
}

/// Number of distinct complex roots.
pub fn distinct_complex_root_count(f: &ZPoly) -> Result<usize> {
    if f.is_constant() {
        return domain("root count of a constant polynomial");
    }
    Ok(squarefree_part(&f.to_q())?.deg())
}

impl fmt::Display for ZPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.to_q())
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "ZPoly({self})")
    }
}

impl std::str::FromStr for ZPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_polynomial(s)
    }
}

fn parse_err<T>(pos: usize, msg: &str) -> Result<T> {
    domain(format!("polynomial parse error at byte {pos}: {msg}"))
}

/// Parses integer polynomials in `x` such as `x^3 - 1` or `6*x^2 + 4`.
///
/// Accepts `+`, `-`, `*`, `^`, whitespace, optional coefficients and
/// juxtaposition (`3x`). Never panics.
pub fn parse_polynomial(s: &str) -> Result<ZPoly> {
    let b = s.as_bytes();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < b.len() && b[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut first = true;
    loop {
        skip_ws(&mut i);
        if i >= b.len() {
            if first {
                return parse_err(i, "empty polynomial");
            }
            break;
        }
        let mut negative = false;
        if b[i] == b'+' || b[i] == b'-' {
            negative = b[i] == b'-';
            i += 1;
            skip_ws(&mut i);
        } else if !first {
            return parse_err(i, "expected '+' or '-'");
        }
        first = false;

        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        let coeff = if i > start {
            if i - start > MAX_COEFF_DIGITS {
                return parse_err(start, "coefficient literal too long");
            }
            let lit = std::str::from_utf8(&b[start..i]).map_err(|_| Error::Domain("utf8".into()))?;
            Some(lit.parse::<BigInt>().map_err(|_| Error::Domain("bad integer".into()))?)
        } else {
            None
        };
        skip_ws(&mut i);
        let mut star = false;
        if i < b.len() && b[i] == b'*' {
            if coeff.is_none() {
                return parse_err(i, "'*' without a coefficient");
            }
            star = true;
            i += 1;
            skip_ws(&mut i);
        }
        let mut exp = 0usize;
        if i < b.len() && b[i] == b'x' {
            i += 1;
            exp = 1;
            skip_ws(&mut i);
            if i < b.len() && b[i] == b'^' {
                i += 1;
                skip_ws(&mut i);
                let es = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                if es == i {
                    return parse_err(es, "expected an exponent after '^'");
                }
                if i - es > 6 {
                    return parse_err(es, "exponent too large");
                }
                exp = std::str::from_utf8(&b[es..i])
                    .ok()
                    .and_then(|t| t.parse().ok())
                    .unwrap_or(usize::MAX);
                if exp > MAX_PARSE_DEGREE {
                    return parse_err(es, "exponent too large");
                }
            }
        } else if star {
            return parse_err(i, "expected 'x' after '*'");
        } else if coeff.is_none() {
            return parse_err(i, "expected a coefficient or 'x'");
        }
        let mut c = coeff.unwrap_or_else(BigInt::one);
        if negative {
            c = -c;
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigInt::zero());
        }
        coeffs[exp] += c;
    }
    Ok(ZPoly::new(coeffs))
}
