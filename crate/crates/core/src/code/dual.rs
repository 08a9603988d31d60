//! Minimum distance of the dual code.
//!
//! A vector `c` lies in the dual code exactly when
//! `Σ c_t (-π)^t = 0` and `Σ c_t π^{ut} = 0`. The certificate refutes every
//! support of size at most three exhaustively and exhibits an explicit
//! weight-four dual codeword.

use num_bigint::BigUint;
use serde::Serialize;

use crate::code::weights::Budget;
use crate::code::CodeSpec;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldTower};
use crate::poly::{dual_generator, PolyGFp};

/// One nonzero entry of a dual codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct WitnessEntry {
    pub position: u32,
    pub coefficient: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualCertificate {
    pub length: u32,
    pub dimension: u32,
    pub min_distance: u32,
    /// Weights shown to carry no nonzero dual codeword.
    pub refuted_weights: Vec<u32>,
    pub witness: Vec<WitnessEntry>,
    /// Largest minimum distance any `[n, n - 2m]` code can have by the
    /// sphere-packing bound.
    pub sphere_packing_bound: u64,
    pub optimal: bool,
}

/// Columns `((-π)^t, π^{ut})` of the parity-check matrix over GF(p^m).
struct Columns<'t> {
    tower: &'t FieldTower,
    alpha: Vec<FieldElem>,
    beta: Vec<FieldElem>,
    /// for each field element `z`, the pairs `(t, c)` with `c (-π)^t = z`,
    /// sorted by `t`
    preimage: Vec<Vec<(u32, u32)>>,
    units: Vec<FieldElem>,
}

impl<'t> Columns<'t> {
    fn new(spec: &CodeSpec, tower: &'t FieldTower) -> Self {
        let n = tower.n() as u64;
        let neg_pi = tower.neg(tower.pi());
        let alpha: Vec<FieldElem> = (0..n).map(|t| tower.pow(neg_pi, t)).collect();
        let beta: Vec<FieldElem> = (0..n)
            .map(|t| tower.pi_pow(spec.u_mod_n() * t % n))
            .collect();
        let units: Vec<FieldElem> = (1..tower.p() as u64).map(|c| tower.from_prime(c)).collect();
        let mut preimage = vec![Vec::new(); tower.order() as usize];
        for (t, &a) in alpha.iter().enumerate() {
            for (ci, &c) in units.iter().enumerate() {
                preimage[tower.mul(c, a).index() as usize].push((t as u32, ci as u32 + 1));
            }
        }
        Self {
            tower,
            alpha,
            beta,
            preimage,
            units,
        }
    }

    fn unit(&self, c: u32) -> FieldElem {
        self.units[c as usize - 1]
    }

    /// `Σ c_i (α_{t_i}, β_{t_i})`.
    fn combine(&self, entries: &[(u32, u32)]) -> (FieldElem, FieldElem) {
        let t = self.tower;
        entries
            .iter()
            .fold((t.zero(), t.zero()), |(x, y), &(pos, c)| {
                let c = self.unit(c);
                (
                    t.add(x, t.mul(c, self.alpha[pos as usize])),
                    t.add(y, t.mul(c, self.beta[pos as usize])),
                )
            })
    }

    /// Entries `(t, c)` with `t > after` completing `partial` to zero in both
    /// coordinates.
    fn completions(
        &self,
        partial: (FieldElem, FieldElem),
        after: Option<u32>,
    ) -> impl Iterator<Item = (u32, u32)> + '_ {
        let t = self.tower;
        let target = t.neg(partial.0);
        let need_beta = t.neg(partial.1);
        self.preimage[target.index() as usize]
            .iter()
            .copied()
            .filter(move |&(pos, _)| after.is_none_or(|a| pos > a))
            .filter(move |&(pos, c)| t.mul(self.unit(c), self.beta[pos as usize]) == need_beta)
    }

    fn n(&self) -> u32 {
        self.alpha.len() as u32
    }

    fn refute_weight_one(&self) -> bool {
        let z = self.tower.zero();
        (0..self.n()).all(|t| self.alpha[t as usize] != z || self.beta[t as usize] != z)
    }

    /// No dual codeword of weight two: with `c_1 = 1`, no `(t_2, c_2)` with
    /// `t_2 > t_1` completes `(α_{t_1}, β_{t_1})`.
    fn refute_weight_two(&self) -> bool {
        (0..self.n()).all(|t1| {
            let partial = self.combine(&[(t1, 1)]);
            self.completions(partial, Some(t1)).next().is_none()
        })
    }

    fn refute_weight_three(&self) -> bool {
        let p = self.tower.p();
        (0..self.n()).all(|t1| {
            (t1 + 1..self.n()).all(|t2| {
                (1..p).all(|c2| {
                    let partial = self.combine(&[(t1, 1), (t2, c2)]);
                    self.completions(partial, Some(t2)).next().is_none()
                })
            })
        })
    }

    /// First weight-four dual codeword in the order `t_1 < t_2 < t_3`,
    /// then `(c_2, c_3)`, then the smallest `t_4 > t_3`.
    fn first_weight_four(&self) -> Option<Vec<(u32, u32)>> {
        let p = self.tower.p();
        let n = self.n();
        for t1 in 0..n {
            for t2 in t1 + 1..n {
                for t3 in t2 + 1..n {
                    for c2 in 1..p {
                        for c3 in 1..p {
                            let entries = [(t1, 1), (t2, c2), (t3, c3)];
                            let partial = self.combine(&entries);
                            if let Some(last) = self.completions(partial, Some(t3)).next() {
                                return Some(vec![entries[0], entries[1], entries[2], last]);
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

/// Check that `entries` is a dual codeword both from the parity-check
/// equations and by divisibility of `Σ c_i x^{t_i}` by the dual generator.
pub fn verify_dual_codeword(
    spec: &CodeSpec,
    tower: &FieldTower,
    h: &PolyGFp,
    entries: &[WitnessEntry],
) -> bool {
    let cols = Columns::new(spec, tower);
    let pairs: Vec<(u32, u32)> = entries
        .iter()
        .map(|e| (e.position, e.coefficient))
        .collect();
    if pairs
        .iter()
        .any(|&(pos, c)| pos >= cols.n() || c == 0 || c >= tower.p())
    {
        return false;
    }
    let (x, y) = cols.combine(&pairs);
    let by_equations = x.is_zero() && y.is_zero();
    let p = tower.p();
    let witness_poly = pairs.iter().fold(PolyGFp::zero(p), |acc, &(pos, c)| {
        acc.add(&PolyGFp::monomial(p, pos as usize, c))
    });
    let by_division = witness_poly
        .rem(&dual_generator(h, spec.n as usize))
        .is_zero();
    by_equations && by_division && !witness_poly.is_zero()
}

/// `Σ_{i=0}^{r} C(n, i) (p-1)^i`
fn ball_volume(n: u64, r: u64, p: u64) -> BigUint {
    let mut total = BigUint::from(0u32);
    let mut term = BigUint::from(1u32);
    for i in 0..=r.min(n) {
        if i > 0 {
            term = term * BigUint::from(n - i + 1) * BigUint::from(p - 1) / BigUint::from(i);
        }
        total += &term;
    }
    total
}

/// Largest `d` such that an `[n, k]_p` code with minimum distance `d`
/// satisfies the sphere-packing bound
/// `Σ_{i <= ⌊(d-1)/2⌋} C(n,i)(p-1)^i <= p^{n-k}`, capped by the Singleton
/// bound `n - k + 1`.
pub fn sphere_packing_max_d(n: u64, k: u64, p: u64) -> u64 {
    assert!(k <= n, "dimension exceeds length");
    let space = BigUint::from(p).pow((n - k) as u32);
    let singleton = n - k + 1;
    // radius r admits d = 2r + 1 and 2r + 2
    let mut r = 0;
    while 2 * (r + 1) < singleton && ball_volume(n, r + 1, p) <= space {
        r += 1;
    }
    (2 * r + 2).min(singleton)
}

/// Certify the dual minimum distance as 4 with an explicit witness.
pub fn dual_min_distance_certify(
    spec: &CodeSpec,
    tower: &FieldTower,
    h: &PolyGFp,
    budget: &Budget,
) -> Result<DualCertificate> {
    let n = spec.n as u64;
    if n > budget.dual_length {
        return Err(Error::BudgetExceeded {
            what: "dual distance search",
            needed: n,
            budget: budget.dual_length,
        });
    }
    let cols = Columns::new(spec, tower);
    let checks = [
        (1, cols.refute_weight_one()),
        (2, cols.refute_weight_two()),
        (3, cols.refute_weight_three()),
    ];
    if let Some(&(w, _)) = checks.iter().find(|(_, ok)| !ok) {
        return Err(Error::InternalInconsistency(format!(
            "the dual code has a codeword of weight {w}"
        )));
    }
    let witness: Vec<WitnessEntry> = cols
        .first_weight_four()
        .ok_or(Error::WitnessNotFound { weight: 4 })?
        .into_iter()
        .map(|(position, coefficient)| WitnessEntry {
            position,
            coefficient,
        })
        .collect();
    if !verify_dual_codeword(spec, tower, h, &witness) {
        return Err(Error::InternalInconsistency(
            "weight-four witness failed verification".into(),
        ));
    }
    let dimension = spec.n - spec.dim;
    let bound = sphere_packing_max_d(n, dimension as u64, spec.p as u64);
    Ok(DualCertificate {
        length: spec.n,
        dimension,
        min_distance: 4,
        refuted_weights: vec![1, 2, 3],
        witness,
        sphere_packing_bound: bound,
        optimal: bound == 4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::validate;
    use crate::poly::code_polynomials;

    fn certify(p: u32, m: u32, k: u32) -> (CodeSpec, FieldTower, PolyGFp, DualCertificate) {
        let spec = validate(p, m, k).unwrap();
        let tower = FieldTower::build(p, m, spec.e).unwrap();
        let h = code_polynomials(&spec, &tower).unwrap().h;
        let cert = dual_min_distance_certify(&spec, &tower, &h, &Budget::default()).unwrap();
        (spec, tower, h, cert)
    }

    #[test]
    fn sphere_packing_values() {
        assert_eq!(sphere_packing_max_d(26, 20, 3), 4);
        assert!(sphere_packing_max_d(124, 6, 5) >= 95);
        assert_eq!(sphere_packing_max_d(242, 232, 3), 4);
        assert_eq!(sphere_packing_max_d(10, 10, 3), 1);
        assert_eq!(sphere_packing_max_d(10, 9, 3), 2);
        // repetition-like: [3,1]_2 meets d = 3
        assert_eq!(sphere_packing_max_d(3, 1, 2), 3);
    }

    #[test]
    fn ball_volume_small() {
        assert_eq!(ball_volume(26, 1, 3), BigUint::from(53u32));
        assert_eq!(ball_volume(26, 0, 3), BigUint::from(1u32));
    }

    #[test]
    fn dual_332() {
        let (spec, tower, h, cert) = certify(3, 3, 2);
        assert_eq!(
            (cert.length, cert.dimension, cert.min_distance),
            (26, 20, 4)
        );
        assert!(cert.optimal);
        assert_eq!(cert.witness.len(), 4);
        assert!(verify_dual_codeword(&spec, &tower, &h, &cert.witness));
        let mut broken = cert.witness.clone();
        broken[0].coefficient = 3 - broken[0].coefficient;
        assert!(!verify_dual_codeword(&spec, &tower, &h, &broken));
    }

    #[test]
    fn dual_354() {
        let (_, _, _, cert) = certify(3, 5, 4);
        assert_eq!(
            (cert.length, cert.dimension, cert.min_distance),
            (242, 232, 4)
        );
        assert!(cert.optimal);
    }

    #[test]
    fn dual_budget() {
        let spec = validate(3, 3, 2).unwrap();
        let tower = FieldTower::build(3, 3, 1).unwrap();
        let h = code_polynomials(&spec, &tower).unwrap().h;
        let budget = Budget {
            pairs: 1 << 20,
            dual_length: 10,
        };
        assert!(matches!(
            dual_min_distance_certify(&spec, &tower, &h, &budget),
            Err(Error::BudgetExceeded { needed: 26, .. })
        ));
    }

    #[test]
    fn published_dual_generator_arises_for_some_primitive_element() {
        // x^6 + 2x^5 + 2x^3 + x + 2 generates the dual for one choice of
        // primitive element in GF(27).
        let target = PolyGFp::new(3, vec![2, 1, 0, 2, 0, 2, 1]);
        let tower = FieldTower::build(3, 3, 1).unwrap();
        let spec = validate(3, 3, 2).unwrap();
        let n = tower.n() as u64;
        let found = (1..n).filter(|&j| gcd(j, n) == 1).any(|j| {
            let g = tower.pi_pow(j);
            let neg_inv = tower.inv(tower.neg(g));
            let h1 = crate::poly::min_poly(&tower, neg_inv);
            let h2 = crate::poly::min_poly(&tower, tower.inv(tower.pow(g, spec.u_mod_n())));
            dual_generator(&h1.mul(&h2), spec.n as usize) == target
        });
        assert!(found);
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
}
