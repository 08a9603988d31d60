//! Arithmetic in the tower GF(p) ⊂ GF(q) = GF(p^e) ⊂ GF(q^s) = GF(p^m).
//!
//! Elements are stored as their polynomial-basis coordinates packed into a
//! single integer (coordinate `i` is the base-`p` digit of weight `p^i`).
//! Multiplication goes through discrete-log tables with respect to the
//! primitive element `pi`, addition through a Zech-logarithm table. The
//! tables are built once at construction and the tower is immutable
//! afterwards, so it can be shared freely across threads.

use std::fmt;

use crate::error::{Error, ParamViolation, Result};
use crate::poly::PolyGFp;

/// Largest supported `p^m`; beyond this the lookup tables get too big.
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

const NO_LOG: u32 = u32::MAX;

/// Element of GF(p^m): packed polynomial-basis coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(u32);

impl FieldElem {
    /// Packed coordinate index in `0..p^m`.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) fn from_raw(index: u32) -> Self {
        Self(index)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({})", self.0)
    }
}

/// Which field of the tower a character or membership test refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subfield {
    /// GF(p)
    Prime,
    /// GF(q) = GF(p^e)
    Middle,
    /// GF(q^s) = GF(p^m)
    Full,
}

pub(crate) fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The field tower with its fixed primitive element and nonsquare.
pub struct FieldTower {
    p: u32,
    m: u32,
    e: u32,
    order: u32,
    n: u32,
    modulus: PolyGFp,
    /// `p^i`, `i = 0..=m`
    digit_weight: Vec<u32>,
    /// `exp[i] = pi^i` for `i in 0..n`
    exp: Vec<u32>,
    /// `log[pi^i] = i`; `log[0] = NO_LOG`
    log: Vec<u32>,
    /// `zech[i] = log(1 + pi^i)`, `NO_LOG` when that sum is zero
    zech: Vec<u32>,
    /// `trace_exp[i] = Tr_{p^m/p}(pi^i)`
    trace_exp: Vec<u8>,
    /// `p^j mod n`, `j = 0..m`
    frob_exp: Vec<u32>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Smallest monic primitive polynomial of degree `m` over GF(p), ordered
/// lexicographically by `(c0, c1, ..., c_{m-1})`.
fn smallest_primitive_polynomial(p: u32, m: u32) -> PolyGFp {
    let n = (p as u64).pow(m) - 1;
    let cofactors: Vec<u64> = prime_factors(n).into_iter().map(|r| n / r).collect();
    let x = PolyGFp::monomial(p, 1, 1);
    let one = PolyGFp::one(p);
    let count = (p as u64).pow(m);
    for counter in 0..count {
        // c0 is the most significant digit of the counter.
        let mut coeffs = vec![0u32; m as usize + 1];
        let mut c = counter;
        for i in (0..m as usize).rev() {
            coeffs[i] = (c % p as u64) as u32;
            c /= p as u64;
        }
        if coeffs[0] == 0 {
            continue;
        }
        coeffs[m as usize] = 1;
        let f = PolyGFp::new(p, coeffs);
        // X has order exactly p^m - 1 modulo f, hence f is primitive (and
        // in particular irreducible).
        if x.pow_mod(n, &f) == one && cofactors.iter().all(|&c| x.pow_mod(c, &f) != one) {
            return f;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

impl FieldTower {
    /// Build the tower for GF(p) ⊂ GF(p^e) ⊂ GF(p^m), requiring `e | m` and
    /// `s = m/e` odd and at least 3.
    pub fn build(p: u32, m: u32, e: u32) -> Result<Self> {
        let invalid = |v| Err(Error::InvalidParams(v));
        if !is_odd_prime(p as u64) {
            return invalid(ParamViolation::NotOddPrime { p: p as u64 });
        }
        if m == 0 || e == 0 {
            return invalid(ParamViolation::ZeroDegree);
        }
        if !m.is_multiple_of(e) {
            return invalid(ParamViolation::SubfieldNotDivisor { m, e });
        }
        let s = m / e;
        if s.is_multiple_of(2) {
            return invalid(ParamViolation::EvenRelativeDegree { s });
        }
        if s < 3 {
            return invalid(ParamViolation::RelativeDegreeTooSmall { s });
        }
        match (p as u64).checked_pow(m) {
            Some(order) if order <= MAX_FIELD_ORDER => {}
            _ => {
                return invalid(ParamViolation::FieldTooLarge {
                    p: p as u64,
                    m,
                    limit: MAX_FIELD_ORDER,
                })
            }
        }
        Ok(Self::with_modulus(
            p,
            m,
            e,
            smallest_primitive_polynomial(p, m),
        ))
    }

    /// Build the tables for a given primitive modulus.
    fn with_modulus(p: u32, m: u32, e: u32, modulus: PolyGFp) -> Self {
        let order = p.pow(m);
        let n = order - 1;
        let digit_weight: Vec<u32> = (0..=m).map(|i| p.pow(i)).collect();

        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![NO_LOG; order as usize];
        let mut v: u32 = 1;
        for i in 0..n {
            exp.push(v);
            debug_assert_eq!(log[v as usize], NO_LOG, "modulus is not primitive");
            log[v as usize] = i;
            // multiply by X and reduce with X^m = -(c0 + ... + c_{m-1} X^{m-1})
            let shifted = v as u64 * p as u64;
            let top = (shifted / order as u64) as u32;
            let mut w = (shifted % order as u64) as u32;
            if top != 0 {
                let mut reduced = 0u32;
                for j in 0..m as usize {
                    let digit = (w / digit_weight[j]) % p;
                    let sub = top * modulus.coeff(j) % p;
                    reduced += ((digit + p - sub) % p) * digit_weight[j];
                }
                w = reduced;
            }
            v = w;
        }
        assert_eq!(v, 1, "modulus is not primitive");

        let zech = (0..n)
            .map(|i| {
                let x = exp[i as usize];
                let c0 = x % p;
                let sum = x - c0 + (c0 + 1) % p;
                log[sum as usize]
            })
            .collect();

        let frob_exp: Vec<u32> = (0..m)
            .map(|j| crate::poly::pow_mod(p as u64, j as u64, n as u64) as u32)
            .collect();

        let mut tower = Self {
            p,
            m,
            e,
            order,
            n,
            modulus,
            digit_weight,
            exp,
            log,
            zech,
            trace_exp: Vec::new(),
            frob_exp,
        };
        // Trace by its definition: the sum of the m Frobenius conjugates.
        let trace_exp = (0..n)
            .map(|i| {
                let x = FieldElem(tower.exp[i as usize]);
                let sum = (0..m).fold(tower.zero(), |acc, j| tower.add(acc, tower.frobenius(x, j)));
                tower
                    .prime_field_value(sum)
                    .expect("absolute trace must lie in GF(p)") as u8
            })
            .collect();
        tower.trace_exp = trace_exp;
        tower
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn s(&self) -> u32 {
        self.m / self.e
    }

    /// `q = p^e`
    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }

    /// `p^m`
    pub fn order(&self) -> u32 {
        self.order
    }

    /// `p^m - 1`, the multiplicative order of `pi`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &PolyGFp {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// The class of the indeterminate; primitive by construction.
    pub fn pi(&self) -> FieldElem {
        FieldElem(self.exp[1 % self.n as usize])
    }

    /// Generator of GF(q)*: `pi^{(p^m-1)/(p^e-1)}`.
    pub fn gamma(&self) -> FieldElem {
        self.pi_pow(self.subfield_log_step() as u64)
    }

    /// Fixed nonsquare of GF(q); equal to `gamma`.
    pub fn lambda(&self) -> FieldElem {
        self.gamma()
    }

    /// `(p^m - 1) / (q - 1)`: logs of GF(q)* elements are multiples of this.
    pub(crate) fn subfield_log_step(&self) -> u32 {
        self.n / (self.q() - 1)
    }

    /// Embed `c mod p` from the prime field.
    pub fn from_prime(&self, c: u64) -> FieldElem {
        FieldElem((c % self.p as u64) as u32)
    }

    /// Element with the given coordinates (low degree first, at most m).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElem {
        assert!(coeffs.len() <= self.m as usize);
        FieldElem(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (c % self.p) * self.digit_weight[i])
                .sum(),
        )
    }

    /// Checked conversion from a packed index.
    pub fn elem(&self, index: u32) -> Option<FieldElem> {
        (index < self.order).then_some(FieldElem(index))
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        (0..self.m as usize)
            .map(|i| (x.0 / self.digit_weight[i]) % self.p)
            .collect()
    }

    /// The value of `x` as an integer in `0..p` if `x` lies in GF(p).
    pub fn prime_field_value(&self, x: FieldElem) -> Option<u32> {
        (x.0 < self.p).then_some(x.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(FieldElem)
    }

    /// Discrete log base `pi`, `None` for zero.
    pub fn log(&self, x: FieldElem) -> Option<u32> {
        let l = self.log[x.0 as usize];
        (l != NO_LOG).then_some(l)
    }

    /// `pi^e` for any exponent.
    pub fn pi_pow(&self, e: u64) -> FieldElem {
        FieldElem(self.exp[(e % self.n as u64) as usize])
    }

    #[inline]
    pub(crate) fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    #[inline]
    pub(crate) fn log_table(&self) -> &[u32] {
        &self.log
    }

    /// `Tr_{p^m/p}(pi^i)` indexed by `i`.
    #[inline]
    pub(crate) fn trace_exp_table(&self) -> &[u8] {
        &self.trace_exp
    }

    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if x.0 == 0 {
            return y;
        }
        if y.0 == 0 {
            return x;
        }
        let lx = self.log[x.0 as usize];
        let ly = self.log[y.0 as usize];
        let d = if ly >= lx { ly - lx } else { ly + self.n - lx };
        let z = self.zech[d as usize];
        if z == NO_LOG {
            return FieldElem(0);
        }
        let mut l = lx + z;
        if l >= self.n {
            l -= self.n;
        }
        FieldElem(self.exp[l as usize])
    }

    pub fn neg(&self, x: FieldElem) -> FieldElem {
        if x.0 == 0 {
            return x;
        }
        let mut l = self.log[x.0 as usize] + self.n / 2;
        if l >= self.n {
            l -= self.n;
        }
        FieldElem(self.exp[l as usize])
    }

    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if x.0 == 0 || y.0 == 0 {
            return FieldElem(0);
        }
        let mut l = self.log[x.0 as usize] + self.log[y.0 as usize];
        if l >= self.n {
            l -= self.n;
        }
        FieldElem(self.exp[l as usize])
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, x: FieldElem) -> FieldElem {
        let l = self.log(x).expect("inverse of zero");
        FieldElem(self.exp[((self.n - l) % self.n) as usize])
    }

    pub fn pow(&self, x: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return self.one();
        }
        match self.log(x) {
            None => x,
            Some(l) => {
                let r = (l as u128 * (e % self.n as u64) as u128 % self.n as u128) as usize;
                FieldElem(self.exp[r])
            }
        }
    }

    /// `x^{p^j}`; `j` is taken modulo `m`.
    pub fn frobenius(&self, x: FieldElem, j: u32) -> FieldElem {
        match self.log(x) {
            None => x,
            Some(l) => {
                let f = self.frob_exp[(j % self.m) as usize] as u64;
                FieldElem(self.exp[(l as u64 * f % self.n as u64) as usize])
            }
        }
    }

    /// Absolute trace `Tr_{p^m/p}(x)`.
    pub fn trace_to_prime(&self, x: FieldElem) -> u32 {
        match self.log(x) {
            None => 0,
            Some(l) => self.trace_exp[l as usize] as u32,
        }
    }

    /// Relative trace `Tr_{q^s/q}(x) = x + x^q + ... + x^{q^{s-1}}`.
    pub fn trace_to_subfield(&self, x: FieldElem) -> FieldElem {
        (0..self.s()).fold(self.zero(), |acc, i| {
            self.add(acc, self.frobenius(x, i * self.e))
        })
    }

    /// Trace from GF(q) down to GF(p); `x` must lie in GF(q).
    pub fn trace_middle_to_prime(&self, x: FieldElem) -> Result<u32> {
        if !self.in_subfield(x, Subfield::Middle) {
            return Err(Error::DomainError(format!("{x:?} is not in GF(q)")));
        }
        let sum = (0..self.e).fold(self.zero(), |acc, j| self.add(acc, self.frobenius(x, j)));
        Ok(self.prime_field_value(sum).expect("trace lands in GF(p)"))
    }

    fn subfield_degree(&self, sf: Subfield) -> u32 {
        match sf {
            Subfield::Prime => 1,
            Subfield::Middle => self.e,
            Subfield::Full => self.m,
        }
    }

    /// `x^{p^d} = x` where `d` is the degree of the named subfield.
    pub fn in_subfield(&self, x: FieldElem, sf: Subfield) -> bool {
        let d = self.subfield_degree(sf);
        self.frobenius(x, d % self.m) == x
    }

    /// Quadratic character of the named subfield evaluated at `x`:
    /// `x^{(|F| - 1)/2}` mapped to `+1`/`-1`, and `0` at zero.
    pub fn quadratic_character(&self, x: FieldElem, sf: Subfield) -> Result<i8> {
        if !self.in_subfield(x, sf) {
            return Err(Error::DomainError(format!(
                "{x:?} does not lie in the {sf:?} subfield"
            )));
        }
        if x.is_zero() {
            return Ok(0);
        }
        let size = (self.p as u64).pow(self.subfield_degree(sf));
        let r = self.pow(x, (size - 1) / 2);
        if r == self.one() {
            Ok(1)
        } else if r == self.neg(self.one()) {
            Ok(-1)
        } else {
            Err(Error::InternalInconsistency(
                "Euler criterion produced neither 1 nor -1".into(),
            ))
        }
    }

    /// Square roots of `x` in GF(p^m): empty for nonsquares, `[0]` for zero.
    pub fn sqrt(&self, x: FieldElem) -> Vec<FieldElem> {
        match self.log(x) {
            None => vec![x],
            Some(l) if l % 2 == 1 => Vec::new(),
            Some(l) => {
                let r = FieldElem(self.exp[(l / 2) as usize]);
                vec![r, self.neg(r)]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn multiplicative_order(t: &FieldTower, x: FieldElem) -> u32 {
        let mut y = x;
        let mut k = 1;
        while y != t.one() {
            y = t.mul(y, x);
            k += 1;
        }
        k
    }

    #[test]
    fn pi_is_primitive_333() {
        let t = FieldTower::build(3, 3, 1).unwrap();
        assert_eq!(multiplicative_order(&t, t.pi()), 26);
    }

    #[test]
    fn gamma_generates_gf9() {
        let t = FieldTower::build(3, 6, 2).unwrap();
        let g = t.gamma();
        assert_eq!(multiplicative_order(&t, g), 8);
        assert_eq!(t.pow(g, 4), t.neg(t.one()));
        assert_eq!(
            t.quadratic_character(t.lambda(), Subfield::Middle).unwrap(),
            -1
        );
        assert_eq!(
            t.quadratic_character(t.lambda(), Subfield::Full).unwrap(),
            -1
        );
    }

    #[test]
    fn rejects_even_relative_degree() {
        assert_eq!(
            FieldTower::build(3, 4, 1).unwrap_err(),
            Error::InvalidParams(ParamViolation::EvenRelativeDegree { s: 4 })
        );
        assert!(matches!(
            FieldTower::build(4, 3, 1),
            Err(Error::InvalidParams(ParamViolation::NotOddPrime { p: 4 }))
        ));
        assert!(matches!(
            FieldTower::build(3, 2, 2),
            Err(Error::InvalidParams(
                ParamViolation::RelativeDegreeTooSmall { s: 1 }
            ))
        ));
        assert!(matches!(
            FieldTower::build(3, 6, 4),
            Err(Error::InvalidParams(
                ParamViolation::SubfieldNotDivisor { .. }
            ))
        ));
    }

    #[test]
    fn modulus_is_lexicographically_smallest_primitive() {
        let t = FieldTower::build(3, 3, 1).unwrap();
        let f = t.modulus();
        assert_eq!(f.degree(), Some(3));
        // every lexicographically smaller monic cubic fails to have X of order 26
        let x = PolyGFp::monomial(3, 1, 1);
        let key = |g: &PolyGFp| (g.coeff(0), g.coeff(1), g.coeff(2));
        for c0 in 0..3 {
            for c1 in 0..3 {
                for c2 in 0..3 {
                    let g = PolyGFp::new(3, vec![c0, c1, c2, 1]);
                    if key(&g) >= key(f) {
                        continue;
                    }
                    let primitive = c0 != 0
                        && x.pow_mod(26, &g) == PolyGFp::one(3)
                        && x.pow_mod(13, &g) != PolyGFp::one(3)
                        && x.pow_mod(2, &g) != PolyGFp::one(3);
                    assert!(!primitive, "{g:?} is smaller and primitive");
                }
            }
        }
    }

    #[test]
    fn trace_basics() {
        let t = FieldTower::build(3, 3, 1).unwrap();
        assert_eq!(t.trace_to_prime(t.zero()), 0);
        assert_eq!(t.trace_to_prime(t.one()), 0);
        // Sum of the conjugates pi + pi^3 + pi^9 equals -c2.
        let pi = t.pi();
        let sum = t.add(t.add(pi, t.mul(pi, t.mul(pi, pi))), t.pow(pi, 9));
        let c2 = t.modulus().coeff(2);
        assert_eq!(t.prime_field_value(sum), Some((3 - c2) % 3));
        assert_eq!(t.trace_to_prime(pi), (3 - c2) % 3);
    }

    #[test]
    fn subfield_trace_of_one() {
        let t = FieldTower::build(5, 3, 1).unwrap();
        assert_eq!(t.trace_to_subfield(t.one()), t.from_prime(3));
        let t = FieldTower::build(3, 6, 2).unwrap();
        assert_eq!(t.trace_to_subfield(t.one()), t.zero());
        assert_eq!(t.trace_to_subfield(t.zero()), t.zero());
    }

    #[test]
    fn trace_is_transitive() {
        let t = FieldTower::build(3, 6, 2).unwrap();
        for idx in (0..t.order()).step_by(7).take(100) {
            let x = t.elem(idx).unwrap();
            let rel = t.trace_to_subfield(x);
            assert!(t.in_subfield(rel, Subfield::Middle));
            assert_eq!(t.trace_middle_to_prime(rel).unwrap(), t.trace_to_prime(x));
        }
    }

    #[test]
    fn quadratic_character_values() {
        let t = FieldTower::build(3, 3, 1).unwrap();
        assert_eq!(t.quadratic_character(t.one(), Subfield::Prime).unwrap(), 1);
        assert_eq!(
            t.quadratic_character(t.from_prime(2), Subfield::Prime)
                .unwrap(),
            -1
        );
        assert_eq!(t.quadratic_character(t.zero(), Subfield::Full).unwrap(), 0);
        assert!(matches!(
            t.quadratic_character(t.pi(), Subfield::Prime),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn prime_and_middle_characters_agree_for_odd_e() {
        for (p, m, e) in [(3, 3, 1), (5, 3, 1), (3, 9, 3), (7, 3, 1)] {
            let t = FieldTower::build(p, m, e).unwrap();
            for c in 1..p as u64 {
                let x = t.from_prime(c);
                assert_eq!(
                    t.quadratic_character(x, Subfield::Prime).unwrap(),
                    t.quadratic_character(x, Subfield::Middle).unwrap()
                );
            }
        }
    }

    #[test]
    fn primitive_element_is_a_nonsquare() {
        for (p, m, e) in [(3, 3, 1), (3, 5, 1), (5, 3, 1), (3, 6, 2)] {
            let t = FieldTower::build(p, m, e).unwrap();
            assert_eq!(t.pow(t.pi(), (t.n() / 2) as u64), t.neg(t.one()));
        }
    }

    #[test]
    fn frobenius_q_fixes_exactly_the_subfield() {
        for (p, m, e) in [(3, 3, 1), (3, 6, 2), (5, 3, 1), (3, 5, 1)] {
            let t = FieldTower::build(p, m, e).unwrap();
            let fixed = t.elements().filter(|&x| t.frobenius(x, e) == x).count();
            assert_eq!(fixed as u32, t.q());
        }
    }

    #[test]
    fn zech_addition_matches_coordinates() {
        let t = FieldTower::build(5, 3, 1).unwrap();
        for x in t.elements() {
            for y in t.elements().step_by(3) {
                let cx = t.coeffs(x);
                let cy = t.coeffs(y);
                let sum: Vec<u32> = cx.iter().zip(&cy).map(|(a, b)| (a + b) % 5).collect();
                assert_eq!(t.add(x, y), t.from_coeffs(&sum));
            }
        }
    }

    proptest! {
        #[test]
        fn trace_is_gf_p_linear(a in 0u32..729, b in 0u32..729, c in 0u64..3) {
            let t = FieldTower::build(3, 6, 2).unwrap();
            let (x, y) = (t.elem(a).unwrap(), t.elem(b).unwrap());
            prop_assert_eq!(
                t.trace_to_prime(t.add(x, y)),
                (t.trace_to_prime(x) + t.trace_to_prime(y)) % 3
            );
            prop_assert_eq!(
                t.trace_to_prime(t.mul(t.from_prime(c), x)),
                (c as u32 * t.trace_to_prime(x)) % 3
            );
            prop_assert_eq!(
                t.trace_to_subfield(t.add(x, y)),
                t.add(t.trace_to_subfield(x), t.trace_to_subfield(y))
            );
        }
    }
}
