//! Dense polynomials over the prime field F_q, little-endian coefficients.

use crate::error::{DrhError, Result};
use crate::util::is_prime_u64;

/// A polynomial over F_q. Coefficients ascending by degree with no trailing
/// zeros; the zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqPoly {
    q: u64,
    coeffs: Vec<u64>,
}

impl FqPoly {
    pub fn new(q: u64, mut coeffs: Vec<u64>) -> Result<Self> {
        if !is_prime_u64(q) {
            return Err(DrhError::Argument(format!("q = {q} is not prime")));
        }
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok(Self { q, coeffs })
    }

    pub fn zero(q: u64) -> Self {
        Self { q, coeffs: vec![] }
    }

    pub fn one(q: u64) -> Self {
        Self { q, coeffs: vec![1] }
    }

    pub fn constant(q: u64, c: u64) -> Self {
        let c = c % q;
        Self { q, coeffs: if c == 0 { vec![] } else { vec![c] } }
    }

    /// Monic polynomial of the given degree from its base-q code
    /// (the code encodes the coefficients below the leading 1).
    pub fn from_code(q: u64, mut code: u64, degree: u32) -> Self {
        let mut coeffs = Vec::with_capacity(degree as usize + 1);
        for _ in 0..degree {
            coeffs.push(code % q);
            code /= q;
        }
        coeffs.push(1);
        Self { q, coeffs }
    }

    /// Base-q code of a monic polynomial (positions below the leading 1).
    pub fn code(&self) -> u64 {
        debug_assert!(self.is_monic());
        let mut code = 0u64;
        for &c in self.coeffs[..self.coeffs.len() - 1].iter().rev() {
            code = code * self.q + c;
        }
        code
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() as u32 - 1)
        }
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.q);
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.q;
        let mut coeffs: Vec<u64> = self.coeffs.iter().map(|&x| x * c % self.q).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { q: self.q, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.q, other.q);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0u64; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *c = (a + b) % self.q;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { q: self.q, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(self.q - 1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.q, other.q);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.q);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = (coeffs[i + j] + a * b) % self.q;
            }
        }
        Self { q: self.q, coeffs }
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divmod(&self, divisor: &Self) -> (Self, Self) {
        debug_assert!(!divisor.is_zero());
        let q = self.q;
        let dd = divisor.coeffs.len();
        if self.coeffs.len() < dd {
            return (Self::zero(q), self.clone());
        }
        let lead_inv = inv_mod(divisor.leading(), q);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len() - dd + 1];
        for i in (0..quot.len()).rev() {
            let factor = rem[i + dd - 1] * lead_inv % q;
            if factor == 0 {
                continue;
            }
            quot[i] = factor;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let sub = factor * dc % q;
                rem[i + j] = (rem[i + j] + q - sub) % q;
            }
        }
        let mut quotient = Self { q, coeffs: quot };
        while quotient.coeffs.last() == Some(&0) {
            quotient.coeffs.pop();
        }
        while rem.last() == Some(&0) {
            rem.pop();
        }
        (quotient, Self { q, coeffs: rem })
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divmod(divisor).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Substitute T -> u T + t and normalize monic. Maps monic irreducibles
    /// of each degree bijectively onto themselves.
    pub fn affine_substitute(&self, u: u64, t: u64) -> Self {
        let q = self.q;
        let lin = Self { q, coeffs: vec![t % q, u % q] };
        let mut acc = Self::zero(q);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(q, c));
        }
        acc.make_monic()
    }

    /// Parse a comma-separated little-endian coefficient string, e.g.
    /// "1,0,1" for T^2 + 1.
    pub fn parse(q: u64, text: &str) -> Result<Self> {
        let coeffs: Vec<u64> = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| DrhError::Argument(format!("bad coefficient {s:?}")))
            })
            .collect::<Result<_>>()?;
        Self::new(q, coeffs)
    }
}

impl std::fmt::Display for FqPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, _) => write!(f, "{c}T")?,
                (_, 1) => write!(f, "T^{i}")?,
                _ => write!(f, "{c}T^{i}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn inv_mod(a: u64, q: u64) -> u64 {
    // q is prime
    crate::util::pow_mod(a, q - 2, q)
}
