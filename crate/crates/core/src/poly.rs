//! Dense polynomials over GF(p), minimal polynomials of tower elements and
//! the generator / parity-check polynomials of the codes.

use std::fmt;

use crate::code::CodeSpec;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldTower};

/// Multiplicative inverse in GF(p), `a` nonzero.
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a as u64, (p - 2) as u64, p as u64) as u32
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % modulus as u128) as u64;
        }
        base = (base as u128 * base as u128 % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Polynomial over GF(p), coefficients low degree first.
///
/// Always canonical: no trailing zero coefficients, so the zero polynomial
/// has an empty coefficient vector and `degree() == None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyGFp {
    p: u32,
    coeffs: Vec<u32>,
}

impl fmt::Debug for PolyGFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyGFp[p={}]({})", self.p, self.to_coeff_string())
    }
}

impl fmt::Display for PolyGFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
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
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl PolyGFp {
    pub fn new(p: u32, coeffs: Vec<u32>) -> Self {
        let mut poly = Self {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    pub fn zero(p: u32) -> Self {
        Self {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn one(p: u32) -> Self {
        Self::new(p, vec![1])
    }

    /// `c * x^deg`.
    pub fn monomial(p: u32, deg: usize, c: u32) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Self::new(p, coeffs)
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(p: u32, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = p - 1;
        coeffs[n] = 1;
        Self::new(p, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Report serialization: `"c0,c1,...,cd"`, low degree first.
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn eval(&self, x: u32) -> u32 {
        let p = self.p as u64;
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p) as u32
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| (self.coeff(i) + other.coeff(i)) % self.p)
            .collect();
        Self::new(self.p, coeffs)
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        Self::new(p, self.coeffs.iter().map(|&c| (p - c) % p).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p as u64;
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .map(|&a| (a as u64 * c as u64 % p) as u32)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u64;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % p;
            }
        }
        Self::new(self.p, out.into_iter().map(|c| c as u32).collect())
    }

    /// Schoolbook division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = inv_mod(divisor.leading(), p) as u64;
        let mut rem: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        if rem.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - dd];
        let p64 = p as u64;
        for i in (dd..rem.len()).rev() {
            let c = rem[i] % p64 * lead_inv % p64;
            if c == 0 {
                continue;
            }
            quot[i - dd] = c as u32;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + (p64 - c) * dc as u64) % p64;
            }
        }
        rem.truncate(dd);
        (
            Self::new(p, quot),
            Self::new(p, rem.into_iter().map(|c| c as u32).collect()),
        )
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn derivative(&self) -> Self {
        let p = self.p as u64;
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| ((i as u64 % p) * c as u64 % p) as u32)
                .collect(),
        )
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, mut exp: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.p).rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            exp >>= 1;
        }
        acc
    }

    /// Monic reciprocal `x^deg f(1/x) / f(0)`; requires `f(0) != 0`.
    pub fn reciprocal(&self) -> Self {
        assert!(
            self.coeff(0) != 0,
            "reciprocal needs a nonzero constant term"
        );
        let reversed: Vec<u32> = self.coeffs.iter().rev().copied().collect();
        Self::new(self.p, reversed).make_monic()
    }
}

/// Monic minimal polynomial of a nonzero tower element over GF(p).
///
/// Built as the product of `(X - c)` over the distinct Frobenius conjugates
/// of `x`; the coefficients are checked to lie in the prime field.
pub fn min_poly(tower: &FieldTower, x: FieldElem) -> PolyGFp {
    let p = tower.p();
    let mut conjugates = vec![x];
    let mut c = tower.frobenius(x, 1);
    while c != x {
        conjugates.push(c);
        c = tower.frobenius(c, 1);
    }
    // Product over the extension field, low degree first.
    let mut prod = vec![tower.one()];
    for &root in &conjugates {
        let neg_root = tower.neg(root);
        let mut next = vec![tower.zero(); prod.len() + 1];
        for (i, &coef) in prod.iter().enumerate() {
            next[i + 1] = tower.add(next[i + 1], coef);
            next[i] = tower.add(next[i], tower.mul(coef, neg_root));
        }
        prod = next;
    }
    let coeffs = prod
        .into_iter()
        .map(|c| {
            tower
                .prime_field_value(c)
                .expect("minimal polynomial coefficient outside GF(p)")
        })
        .collect();
    PolyGFp::new(p, coeffs)
}

/// The polynomials attached to a code: `h = h1 h2` is the parity-check
/// polynomial and `g = (x^n - 1) / h` the generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodePolynomials {
    pub h1: PolyGFp,
    pub h2: PolyGFp,
    pub h: PolyGFp,
    pub g: PolyGFp,
}

pub fn code_polynomials(spec: &CodeSpec, tower: &FieldTower) -> Result<CodePolynomials> {
    let neg_pi = tower.neg(tower.pi());
    let h1 = min_poly(tower, tower.inv(neg_pi));
    let h2 = min_poly(tower, tower.inv(tower.pi_pow(spec.u_mod_n())));
    let h = h1.mul(&h2);
    let n = spec.n as usize;
    if h.degree() != Some(2 * spec.m as usize) {
        return Err(Error::InternalInconsistency(format!(
            "deg h = {:?}, expected {}",
            h.degree(),
            2 * spec.m
        )));
    }
    let (g, r) = PolyGFp::x_pow_minus_one(spec.p, n).div_rem(&h);
    if !r.is_zero() {
        return Err(Error::InternalInconsistency(
            "h(x) does not divide x^n - 1".to_string(),
        ));
    }
    Ok(CodePolynomials { h1, h2, h, g })
}

/// Generator polynomial of the dual code: the monic reciprocal of `h`.
pub fn dual_generator(h: &PolyGFp, n: usize) -> PolyGFp {
    debug_assert!(PolyGFp::x_pow_minus_one(h.characteristic(), n)
        .rem(h)
        .is_zero());
    h.reciprocal()
}
