//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use rayon::prelude::*;

use threeweight::code::dual::verify_dual_codeword;
use threeweight::code::weights::{codeword_weight, weight_from_sum};
use threeweight::quad::form::FormSpace;
use threeweight::quad::sums::{SumEvaluator, SumKind};
use threeweight::{
    analyze, code_polynomials, dual_min_distance_certify, intersection_set_counts,
    predicted_distribution, sphere_packing_max_d, validate, value_distribution, Budget, CodeSpec,
    Error, FieldElem, FieldTower, Options,
};

fn setup(p: u32, m: u32, k: u32) -> (CodeSpec, FieldTower) {
    let spec = validate(p, m, k).expect("valid parameters");
    let tower = FieldTower::build(p, m, spec.e).expect("field builds");
    (spec, tower)
}

/// Full analysis of an example against its header `[n, dim, d]` and its
/// weight table, within a time limit.
fn example(p: u32, m: u32, k: u32, header: [u64; 3], rows: [(u64, u64); 3], limit: Duration) {
    let opts = Options {
        skip_dual: true,
        ..Options::default()
    };
    let start = Instant::now();
    let report = analyze(p, m, k, &opts).expect("analysis succeeds");
    let elapsed = start.elapsed();
    let dist = report.distribution.as_ref().expect("enumerated");
    let mut expected: BTreeMap<u64, u64> = rows.into_iter().collect();
    expected.insert(0, 1);
    assert_eq!(dist.counts(), &expected, "enumerated distribution");
    assert_eq!(
        report.predicted.as_ref(),
        Some(dist),
        "closed-form distribution"
    );
    assert_eq!(report.matches, Some(true));
    assert!(report.consistent());
    let got = [
        report.params.n as u64,
        report.params.dim as u64,
        dist.min_nonzero_weight().expect("nonzero codewords"),
    ];
    assert_eq!(got, header, "code parameters");
    assert!(elapsed < limit, "took {elapsed:?}, limit {limit:?}");
}

fn criterion_1() {
    example(
        3,
        3,
        2,
        [26, 6, 15],
        [(15, 312), (18, 260), (21, 156)],
        Duration::from_secs(1),
    );
}

fn criterion_2() {
    example(
        3,
        5,
        4,
        [242, 10, 153],
        [(153, 21780), (162, 19844), (171, 17424)],
        Duration::from_secs(5),
    );
}

fn criterion_3() {
    example(
        5,
        3,
        2,
        [124, 6, 90],
        [(90, 3720), (100, 9424), (110, 2480)],
        Duration::from_secs(5),
    );
}

fn criterion_4() {
    example(
        3,
        6,
        2,
        [728, 12, 432],
        [(432, 32760), (486, 472472), (540, 26208)],
        Duration::from_secs(300),
    );
}

fn criterion_5() {
    example(
        5,
        3,
        1,
        [124, 6, 80],
        [(80, 1860), (100, 12524), (120, 1240)],
        Duration::from_secs(5),
    );
}

/// Value distribution and both moment identities, the second one in the
/// form `p^{2m} (2(p-1)^2 p^m + 2(p-1)^2)` or `p^{2m} · 4(p-1)^2 p^m`.
fn value_criterion(
    p: u32,
    m: u32,
    k: u32,
    kind: SumKind,
    peak: i64,
    counts: [u64; 3],
    second: i128,
) {
    let (spec, tower) = setup(p, m, k);
    let vd = value_distribution(&spec, &tower);
    assert_eq!(vd.kind, kind);
    let origin = 2 * (p as i64 - 1) * (p as i64).pow(m);
    let expected: BTreeMap<i64, u64> = [
        (origin, 1),
        (peak, counts[0]),
        (-peak, counts[1]),
        (0, counts[2]),
    ]
    .into_iter()
    .collect();
    assert_eq!(vd.counts, expected);
    let pairs = (p as i128).pow(2 * m);
    assert_eq!(vd.first_moment, 2 * (p as i128 - 1) * pairs);
    assert_eq!(vd.second_moment, pairs * second);
}

fn criterion_6() {
    // 2(p-1)^2 p^m + 2(p-1)^2 = 216 + 8
    value_criterion(3, 3, 2, SumKind::S, 18, [312, 156, 260], 224);
}

fn criterion_7() {
    // four sets of (p-1)^2 p^m = 2000
    value_criterion(5, 3, 1, SumKind::T, 200, [1860, 1240, 12524], 8000);
}

fn criterion_8() {
    let (spec, tower) = setup(3, 3, 2);
    assert_eq!(intersection_set_counts(&spec, &tower), [108, 4, 4, 108]);
    let (spec, tower) = setup(5, 3, 1);
    assert_eq!(intersection_set_counts(&spec, &tower), [2000; 4]);
}

fn dual_case(m: u32, k: u32) {
    let start = Instant::now();
    let (spec, tower) = setup(3, m, k);
    let h = code_polynomials(&spec, &tower).expect("polynomials").h;
    let cert = dual_min_distance_certify(&spec, &tower, &h, &Budget::default()).expect("certified");
    assert_eq!(cert.min_distance, 4);
    assert_eq!(cert.dimension, spec.n - 2 * m);
    assert_eq!(cert.witness.len(), 4);
    // both defining equations, recomputed here from field arithmetic
    let neg_pi = tower.neg(tower.pi());
    let (mut x, mut y) = (tower.zero(), tower.zero());
    for w in &cert.witness {
        assert!(w.coefficient != 0);
        let c = tower.from_prime(w.coefficient as u64);
        x = tower.add(x, tower.mul(c, tower.pow(neg_pi, w.position as u64)));
        y = tower.add(
            y,
            tower.mul(c, tower.pi_pow(spec.u_mod_n() * w.position as u64)),
        );
    }
    assert!(
        x.is_zero() && y.is_zero(),
        "witness fails a defining equation"
    );
    assert!(verify_dual_codeword(&spec, &tower, &h, &cert.witness));
    let bound = sphere_packing_max_d(spec.n as u64, cert.dimension as u64, 3);
    assert_eq!(bound, 4);
    assert!(cert.optimal);
    assert!(start.elapsed() < Duration::from_secs(60));
}

fn criterion_9() {
    dual_case(3, 2);
    dual_case(5, 4);
}

/// `B(x, z) = Tr(2a x z + b (x z^{p^k} + x^{p^k} z))`, straight from the
/// definition of the polarization.
fn polar(t: &FieldTower, pk: u64, a: FieldElem, b: FieldElem, x: FieldElem, z: FieldElem) -> u32 {
    let two = t.from_prime(2);
    let cross = t.add(t.mul(x, t.pow(z, pk)), t.mul(t.pow(x, pk), z));
    t.trace_to_prime(t.add(t.mul(two, t.mul(a, t.mul(x, z))), t.mul(b, cross)))
}

/// Rank of `Q_{a,b}` from the size of its radical, counted point by point.
/// Testing `z` on a GF(p)-basis suffices because `B` is GF(p)-bilinear.
fn definition_rank(spec: &CodeSpec, t: &FieldTower, a: FieldElem, b: FieldElem) -> u32 {
    let pk = spec.pk_mod_n();
    let basis: Vec<FieldElem> = (0..spec.m as u64).map(|i| t.pi_pow(i)).collect();
    let radical = t
        .elements()
        .filter(|&x| basis.iter().all(|&z| polar(t, pk, a, b, x, z) == 0))
        .count() as u64;
    let mut size = 1u64;
    let mut dim = 0;
    while size < radical {
        size *= spec.q as u64;
        dim += 1;
    }
    assert_eq!(size, radical, "radical size is not a power of q");
    spec.s - dim
}

fn oracle_pair(
    spec: &CodeSpec,
    t: &FieldTower,
    ev: &SumEvaluator,
    forms: &FormSpace,
    a: FieldElem,
    b: FieldElem,
) {
    // (i) fast path against direct counting
    let direct = ev.direct(a, b).expect("integer sum");
    assert_eq!(ev.fast(a, b), direct, "sum at (a={a:?}, b={b:?})");
    // (ii) three rank computations
    let form = forms.form(a, b);
    let gq = forms.small_field();
    let rank = form.radical_rank();
    assert_eq!(form.symmetric_matrix().rank(gq), rank, "matrix rank");
    assert_eq!(form.fast_matrix(), form.symmetric_matrix());
    assert_eq!(definition_rank(spec, t, a, b), rank, "radical count");
    // (iii) Gauss sum
    assert_eq!(
        form.gauss_sum_closed(),
        form.gauss_sum_direct(),
        "gauss sum"
    );
    // (iv) weight from the sum against the codeword itself
    assert_eq!(
        weight_from_sum(spec, direct).expect("weight"),
        codeword_weight(spec, t, a, b),
        "weight at (a={a:?}, b={b:?})"
    );
}

fn oracle_suite(p: u32, m: u32, k: u32, sample: Option<usize>) {
    let (spec, tower) = setup(p, m, k);
    let ev = SumEvaluator::new(&spec, &tower);
    let forms = FormSpace::new(&tower, k);
    let order = tower.order();
    let pairs: Vec<(u32, u32)> = match sample {
        None => (0..order)
            .flat_map(|a| (0..order).map(move |b| (a, b)))
            .collect(),
        Some(count) => {
            let mut rng = StdRng::seed_from_u64(((p as u64) << 16) | ((m as u64) << 8) | k as u64);
            (0..count)
                .map(|_| (rng.random_range(0..order), rng.random_range(0..order)))
                .collect()
        }
    };
    pairs.par_iter().for_each(|&(a, b)| {
        let (a, b) = (tower.elem(a).unwrap(), tower.elem(b).unwrap());
        oracle_pair(&spec, &tower, &ev, &forms, a, b);
    });
}

fn criterion_10() {
    for (p, m, k) in [(3, 3, 2), (5, 3, 2), (5, 3, 1), (3, 5, 4), (3, 6, 2)] {
        oracle_suite(p, m, k, None);
    }
    for (p, m, k) in [(3, 7, 6), (3, 9, 3)] {
        oracle_suite(p, m, k, Some(1000));
    }
}

fn criterion_11() {
    let spec = validate(3, 9, 3).unwrap();
    let predicted = predicted_distribution(&spec).unwrap();
    assert_eq!(predicted.min_nonzero_weight(), Some(12636));
    assert_eq!(predicted.count(12636), 7439796);
    assert_eq!(predicted.nonzero_weights().len(), 3);
    let failure = analyze(3, 9, 3, &Options::default()).unwrap_err();
    assert!(matches!(failure.error, Error::BudgetExceeded { .. }));
    let partial = failure.partial.expect("partial report");
    assert_eq!(partial.predicted.as_ref(), Some(&predicted));
    let flag = partial
        .anomalies
        .iter()
        .find(|a| a.id == "code_parameters")
        .expect("header discrepancy flagged");
    assert!(flag.published.contains("12879"));
    assert!(flag.computed.contains("12636"));
}

fn main() {
    let criteria: [(&str, fn()); 11] = [
        ("1 (3,3,2) weight distribution [26,6,15]", criterion_1),
        ("2 (3,5,4) weight distribution [242,10,153]", criterion_2),
        ("3 (5,3,2) weight distribution [124,6,90]", criterion_3),
        ("4 (3,6,2) weight distribution [728,12,432]", criterion_4),
        ("5 (5,3,1) weight distribution [124,6,80]", criterion_5),
        ("6 (3,3,2) S value distribution and moments", criterion_6),
        ("7 (5,3,1) T value distribution and moments", criterion_7),
        ("8 intersection set counts", criterion_8),
        (
            "9 dual distance 4 with verified witness, optimal",
            criterion_9,
        ),
        (
            "10 fast paths agree with definition-level oracles",
            criterion_10,
        ),
        (
            "11 (3,9,3) closed-form minimum weight and header flag",
            criterion_11,
        ),
    ];
    panic::set_hook(Box::new(|info| eprintln!("  {info}")));
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let ok = panic::catch_unwind(AssertUnwindSafe(run)).is_ok();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} criterion {name} ({secs:.2}s)",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
