//! Exact elements of the cyclotomic ring Z[ζ_p].
//!
//! An element `Σ_j c_j ζ^j` is kept as its count vector `(c_0, …, c_{p-1})`.
//! The only relation is `1 + ζ + … + ζ^{p-1} = 0`, so the canonical
//! representative is the one whose smallest coordinate is zero. Equality of
//! canonical vectors is equality in the ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    counts: Vec<i64>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integer() {
            Some(v) => write!(f, "CycInt({v})"),
            None => write!(f, "CycInt{:?}", self.counts),
        }
    }
}

impl CycInt {
    /// Canonicalize an arbitrary count vector of length `p`.
    pub fn from_counts(mut counts: Vec<i64>) -> Self {
        assert!(counts.len() >= 2, "need p >= 2");
        let min = *counts.iter().min().expect("nonempty");
        counts.iter_mut().for_each(|c| *c -= min);
        Self { counts }
    }

    pub fn zero(p: u32) -> Self {
        Self::from_counts(vec![0; p as usize])
    }

    pub fn from_integer(p: u32, v: i64) -> Self {
        let mut counts = vec![0; p as usize];
        counts[0] = v;
        Self::from_counts(counts)
    }

    /// `ζ^j`
    pub fn root_power(p: u32, j: u64) -> Self {
        let mut counts = vec![0; p as usize];
        counts[(j % p as u64) as usize] = 1;
        Self::from_counts(counts)
    }

    pub fn p(&self) -> u32 {
        self.counts.len() as u32
    }

    /// Canonical count vector.
    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// The rational integer this element equals, if it is one.
    pub fn to_integer(&self) -> Option<i64> {
        let c = self.counts[1];
        self.counts[2..]
            .iter()
            .all(|&x| x == c)
            .then_some(self.counts[0] - c)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_counts(self.counts.iter().map(|c| c * k).collect())
    }

    /// Complex conjugate: `ζ^j ↦ ζ^{-j}`.
    pub fn conj(&self) -> Self {
        self.galois(self.p() as u64 - 1)
    }

    /// Galois automorphism `ζ ↦ ζ^y` for `y` prime to `p`.
    pub fn galois(&self, y: u64) -> Self {
        let p = self.p() as u64;
        debug_assert!(!y.is_multiple_of(p));
        let mut counts = vec![0; p as usize];
        for (j, &c) in self.counts.iter().enumerate() {
            counts[(j as u64 * y % p) as usize] += c;
        }
        Self::from_counts(counts)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::from_integer(self.p(), 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `Σ_{y ∈ GF(p)*} σ_y(self)`.
    pub fn trace_over_units(&self) -> Self {
        let p = self.p() as u64;
        (1..p).fold(Self::zero(self.p()), |acc, y| &acc + &self.galois(y))
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        debug_assert_eq!(self.p(), rhs.p());
        CycInt::from_counts(
            self.counts
                .iter()
                .zip(&rhs.counts)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        debug_assert_eq!(self.p(), rhs.p());
        CycInt::from_counts(
            self.counts
                .iter()
                .zip(&rhs.counts)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.scale(-1)
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        let p = self.counts.len();
        debug_assert_eq!(p, rhs.counts.len());
        let mut out = vec![0i64; p];
        for (i, &a) in self.counts.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.counts.iter().enumerate() {
                out[(i + j) % p] += a * b;
            }
        }
        CycInt::from_counts(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sum_of_all_roots_is_zero() {
        let total = (0..5).fold(CycInt::zero(5), |acc, j| &acc + &CycInt::root_power(5, j));
        assert_eq!(total, CycInt::zero(5));
        assert_eq!(total.to_integer(), Some(0));
    }

    #[test]
    fn quadratic_gauss_sum_squares() {
        // G = Σ_z ζ^{z^2}; G^2 = (-1)^{(p-1)/2} p
        for p in [3u32, 5, 7, 11, 13] {
            let mut counts = vec![0; p as usize];
            for z in 0..p as u64 {
                counts[(z * z % p as u64) as usize] += 1;
            }
            let g = CycInt::from_counts(counts);
            let sign = if p % 4 == 1 { 1 } else { -1 };
            assert_eq!((&g * &g).to_integer(), Some(sign * p as i64));
            assert_eq!((&g * &g.conj()).to_integer(), Some(p as i64));
        }
    }

    #[test]
    fn non_integer_is_detected() {
        assert_eq!(CycInt::root_power(3, 1).to_integer(), None);
        assert_eq!(CycInt::from_integer(3, -4).to_integer(), Some(-4));
    }

    proptest! {
        #[test]
        fn ring_axioms(
            a in proptest::collection::vec(-20i64..20, 5),
            b in proptest::collection::vec(-20i64..20, 5),
            c in proptest::collection::vec(-20i64..20, 5),
        ) {
            let (a, b, c) = (CycInt::from_counts(a), CycInt::from_counts(b), CycInt::from_counts(c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }
    }
}
