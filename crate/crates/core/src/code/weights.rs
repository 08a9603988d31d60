//! Codewords and their weight distributions, enumerated or predicted.
//!
//! The codeword attached to `(a, b)` has entries
//! `c_t = Tr(a (-π)^t + b π^{ut})` for `0 <= t < n`. Its Hamming weight is
//! `p^m - p^{m-1} - Σ/(2p)` where `Σ` is `S(a,b)` or `T(a,b)`.

use std::collections::BTreeMap;
use std::io::Write;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{CodeSpec, Regime};
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldTower};
use crate::quad::sums::{predicted_value_distribution, SumEvaluator, SumPath, ValueDistribution};

/// Pair count below which the definition-level cross-check runs on every
/// pair rather than on a sample.
pub const FULL_CROSS_CHECK_PAIRS: u64 = 6561;
/// Sample size of the definition-level cross-check for larger codes.
pub const CROSS_CHECK_SAMPLE: usize = 1000;
pub const CROSS_CHECK_SEED: u64 = 0x0074_7765_6967_6874;

/// Resource limits for the exhaustive stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of `(a, b)` pairs to sweep.
    pub pairs: u64,
    /// Maximum code length for the dual-distance search.
    pub dual_length: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            pairs: 3u64.pow(12),
            dual_length: 20_000,
        }
    }
}

impl Budget {
    pub fn with_pairs(pairs: u64) -> Self {
        Self {
            pairs,
            ..Self::default()
        }
    }

    pub fn check_pairs(&self, spec: &CodeSpec) -> Result<()> {
        let needed = spec.pair_count();
        if needed > self.pairs {
            return Err(Error::BudgetExceeded {
                what: "weight enumeration",
                needed,
                budget: self.pairs,
            });
        }
        Ok(())
    }
}

/// Weight → number of codewords, including the zero codeword.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WeightDistribution {
    counts: BTreeMap<u64, u64>,
}

impl WeightDistribution {
    pub fn from_counts(counts: BTreeMap<u64, u64>) -> Self {
        Self {
            counts: counts.into_iter().filter(|&(_, c)| c > 0).collect(),
        }
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, weight: u64) -> u64 {
        self.counts.get(&weight).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Nonzero weights in increasing order.
    pub fn nonzero_weights(&self) -> Vec<u64> {
        self.counts.keys().copied().filter(|&w| w > 0).collect()
    }

    pub fn min_nonzero_weight(&self) -> Option<u64> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    /// Exactly one zero codeword and `p^{2m}` codewords in total.
    pub fn check_invariants(&self, spec: &CodeSpec) -> Result<()> {
        if self.count(0) != 1 {
            return Err(Error::InternalInconsistency(format!(
                "{} zero codewords",
                self.count(0)
            )));
        }
        if self.total() != spec.pair_count() {
            return Err(Error::InternalInconsistency(format!(
                "{} codewords, expected {}",
                self.total(),
                spec.pair_count()
            )));
        }
        if let Some((&w, _)) = self.counts.iter().next_back() {
            if w > spec.n as u64 {
                return Err(Error::InternalInconsistency(format!(
                    "weight {w} exceeds the length {}",
                    spec.n
                )));
            }
        }
        Ok(())
    }

    /// `weight,count` rows with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io_err = |e: csv::Error| Error::DomainError(format!("csv output failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["weight", "count"]).map_err(io_err)?;
        for (weight, count) in &self.counts {
            w.write_record([weight.to_string(), count.to_string()])
                .map_err(io_err)?;
        }
        w.flush()
            .map_err(|e| Error::DomainError(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

/// Weight of the codeword with sum value `value`.
pub fn weight_from_sum(spec: &CodeSpec, value: i64) -> Result<u64> {
    let two_p = 2 * spec.p as i64;
    if value % two_p != 0 {
        return Err(Error::InternalInconsistency(format!(
            "sum value {value} is not divisible by 2p"
        )));
    }
    let w = spec.middle_weight() as i64 - value / two_p;
    u64::try_from(w)
        .map_err(|_| Error::InternalInconsistency(format!("sum value {value} gives weight {w}")))
}

fn distribution_from_values(
    spec: &CodeSpec,
    values: &BTreeMap<i64, u64>,
) -> Result<WeightDistribution> {
    let mut counts = BTreeMap::new();
    for (&v, &c) in values {
        *counts.entry(weight_from_sum(spec, v)?).or_insert(0) += c;
    }
    Ok(WeightDistribution::from_counts(counts))
}

/// Entry `c_t` of the codeword for `(a, b)`.
pub fn codeword_entry(
    spec: &CodeSpec,
    tower: &FieldTower,
    a: FieldElem,
    b: FieldElem,
    t: u64,
) -> u32 {
    let n = tower.n() as u64;
    let t = t % n;
    let neg_pi_t = tower.pow(tower.neg(tower.pi()), t);
    let twisted = tower.pi_pow(spec.u_mod_n() * t % n);
    tower.trace_to_prime(tower.add(tower.mul(a, neg_pi_t), tower.mul(b, twisted)))
}

/// Logs of `(-π)^t` and `π^{ut}` for every position `t`.
pub(crate) struct PositionLogs {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl PositionLogs {
    pub fn new(spec: &CodeSpec, tower: &FieldTower) -> Self {
        let n = tower.n() as u64;
        let half = n / 2;
        let u = spec.u_mod_n();
        let alpha = (0..n).map(|t| ((t + (t % 2) * half) % n) as u32).collect();
        let beta = (0..n).map(|t| (u * t % n) as u32).collect();
        Self { alpha, beta }
    }
}

/// Hamming weight computed from the definition, one trace per position.
pub(crate) fn definition_weight(
    tower: &FieldTower,
    logs: &PositionLogs,
    a: FieldElem,
    b: FieldElem,
) -> u64 {
    let tr = tower.trace_exp_table();
    let n = tower.n();
    let p = tower.p();
    let term = |l: Option<u32>, pos: &[u32]| -> Vec<u32> {
        match l {
            None => vec![0; n as usize],
            Some(l) => pos
                .iter()
                .map(|&x| {
                    let i = l + x;
                    tr[(if i >= n { i - n } else { i }) as usize] as u32
                })
                .collect(),
        }
    };
    let ta = term(tower.log(a), &logs.alpha);
    let tb = term(tower.log(b), &logs.beta);
    ta.iter()
        .zip(&tb)
        .filter(|&(&x, &y)| (x + y) % p != 0)
        .count() as u64
}

pub fn codeword_weight(spec: &CodeSpec, tower: &FieldTower, a: FieldElem, b: FieldElem) -> u64 {
    definition_weight(tower, &PositionLogs::new(spec, tower), a, b)
}

/// How the exhaustive enumeration computes each weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    /// Closed-form sum evaluation with a definition-level cross-check.
    Fast,
    /// Count nonzero entries of every codeword.
    BruteForce,
}

/// Result of an exhaustive enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub distribution: WeightDistribution,
    /// Sum values, present in fast mode.
    pub values: Option<ValueDistribution>,
    /// Number of pairs whose weight was recomputed from the definition.
    pub cross_checked: u64,
}

/// Pairs used by the definition-level cross-check.
pub fn cross_check_pairs(spec: &CodeSpec, tower: &FieldTower) -> Vec<(FieldElem, FieldElem)> {
    let order = tower.order();
    if spec.pair_count() <= FULL_CROSS_CHECK_PAIRS {
        return tower
            .elements()
            .flat_map(|a| tower.elements().map(move |b| (a, b)))
            .collect();
    }
    let mut rng = StdRng::seed_from_u64(CROSS_CHECK_SEED);
    (0..CROSS_CHECK_SAMPLE)
        .map(|_| {
            let a = tower.elem(rng.random_range(0..order)).expect("in range");
            let b = tower.elem(rng.random_range(0..order)).expect("in range");
            (a, b)
        })
        .collect()
}

/// Exact weight distribution over all `p^{2m}` codewords.
pub fn enumerate_distribution(
    spec: &CodeSpec,
    tower: &FieldTower,
    budget: &Budget,
    mode: EnumerationMode,
) -> Result<Enumeration> {
    budget.check_pairs(spec)?;
    let mode = if spec.regime == Regime::Unsupported {
        EnumerationMode::BruteForce
    } else {
        mode
    };
    let logs = PositionLogs::new(spec, tower);
    let enumeration = match mode {
        EnumerationMode::BruteForce => {
            let counts = tower
                .elements()
                .collect::<Vec<_>>()
                .into_par_iter()
                .fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, a| {
                    for b in tower.elements() {
                        *acc.entry(definition_weight(tower, &logs, a, b))
                            .or_insert(0) += 1;
                    }
                    acc
                })
                .reduce(BTreeMap::new, |mut x, y| {
                    for (w, c) in y {
                        *x.entry(w).or_insert(0) += c;
                    }
                    x
                });
            Enumeration {
                distribution: WeightDistribution::from_counts(counts),
                values: None,
                cross_checked: spec.pair_count(),
            }
        }
        EnumerationMode::Fast => {
            let ev = SumEvaluator::new(spec, tower);
            let values = ValueDistribution::from_counts(ev.kind(), ev.sweep());
            let distribution = distribution_from_values(spec, &values.counts)?;
            let pairs = cross_check_pairs(spec, tower);
            pairs.par_iter().try_for_each(|&(a, b)| {
                let v = ev.evaluate(a, b, SumPath::Fast)?;
                let predicted = weight_from_sum(spec, v)?;
                let actual = definition_weight(tower, &logs, a, b);
                if predicted != actual {
                    return Err(Error::OracleMismatch(format!(
                        "(a={a:?}, b={b:?}): weight {actual} but sum {v} gives {predicted}"
                    )));
                }
                Ok(())
            })?;
            Enumeration {
                distribution,
                values: Some(values),
                cross_checked: pairs.len() as u64,
            }
        }
    };
    enumeration.distribution.check_invariants(spec)?;
    Ok(enumeration)
}

/// Closed-form weight distribution, `None` for the unsupported regime.
pub fn predicted_distribution(spec: &CodeSpec) -> Option<WeightDistribution> {
    let values = predicted_value_distribution(spec)?;
    distribution_from_values(spec, &values.counts).ok()
}
