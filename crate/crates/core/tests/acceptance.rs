//! Acceptance battery: one test per criterion, each printing a pass/fail
//! line and enforcing its runtime budget. Run with
//! `cargo test -p qfsplit-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use num::bigint::BigInt;
use num::integer::gcd;
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfsplit_core::blowup::{cusp_log_resolution, cusp_reference_coefficients};
use qfsplit_core::cone::{
    different, floor_identity_holds, q_factorial_index_toric, reflexive_power_witness,
};
use qfsplit_core::graph::DualGraph;
use qfsplit_core::ledger::{
    curve_acc_enumerate, search_candidates, vanishing_42_check, DelPezzoCase, DimLedger,
};
use qfsplit_core::rational::{rat, Rational};
use qfsplit_core::witt::battery::{ghost_battery, grading_battery, ring_axioms_exhaustive};

fn report(criterion: &str, elapsed: Duration, budget: Duration) {
    println!(
        "acceptance {criterion}: PASS in {:.3}s (budget {:.0}s)",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(
        elapsed <= budget,
        "{criterion} exceeded its runtime budget: {elapsed:?} > {budget:?}"
    );
}

#[test]
fn criterion_1_del_pezzo_arithmetic() {
    let start = Instant::now();
    let expected: [(&str, i64); 5] = [
        ("i", 132),
        ("ii", 306),
        ("iii", 380),
        ("iv", 552),
        ("v", 1722),
    ];
    for (label, denom) in expected {
        let case = DelPezzoCase::fixture(label).unwrap();
        let report = case.verify_ldp();
        assert_eq!(
            report.deg_k_plus_delta,
            rat(-1, denom),
            "case {label}: deg(K + Delta)"
        );
        assert_eq!(
            report.deg_k_plus_delta,
            rat(-1, case.p as i64 * (case.p as i64 + 1)),
            "case {label}: -1/(p(p+1)) shape"
        );
        assert!(report.ample, "case {label}: anti-ample");
        assert_eq!(
            case.floor_p_degree(1),
            BigInt::from(-1),
            "case {label}: first Frobenius floor degree"
        );
    }
    report(
        "criterion 1 (del Pezzo arithmetic, five cases)",
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_dimension_table() {
    for label in DelPezzoCase::fixture_labels() {
        let start = Instant::now();
        let case = DelPezzoCase::fixture(label).unwrap();
        let ledger = DimLedger::run(&case, 10).unwrap();
        // the exactness audit re-runs over every fully derived sequence
        ledger.audit().unwrap();
        let rows = ledger.table_report();
        for row in &rows {
            assert!(
                row.ok(),
                "case {label}: `{}` expected {} derived {:?}",
                row.description,
                row.expected,
                row.actual
            );
        }
        report(
            &format!(
                "criterion 2 (dimension table, case {label}, {} rows)",
                rows.len()
            ),
            start.elapsed(),
            Duration::from_secs(5),
        );
    }
}

#[test]
fn criterion_3_verdicts() {
    let start = Instant::now();
    for label in DelPezzoCase::fixture_labels() {
        let case = DelPezzoCase::fixture(label).unwrap();
        let ledger = DimLedger::run(&case, 10).unwrap();
        let verdict = ledger.verdict().unwrap();
        assert!(verdict.certified, "case {label} must certify");
        assert_eq!(verdict.m_max, 10);
        assert!(
            verdict.chain.iter().any(|s| s.contains("injective")),
            "case {label}: chain cites the injectivity of the level-1 connecting map"
        );
        assert!(
            verdict.chain.iter().any(|s| s.contains("isomorphism")),
            "case {label}: chain cites the tower isomorphisms"
        );
        // monotonicity: certifying at 10 certifies at every lower level
        for m in [1u32, 3, 5] {
            let small = DimLedger::run(&case, m).unwrap().verdict().unwrap();
            assert!(small.certified, "case {label} at m_max = {m}");
        }
    }
    report(
        "criterion 3 (non-quasi-F-split verdicts, five cases)",
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_4_search() {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let hits = pool.install(|| search_candidates(41, 64));
    let elapsed_single = start.elapsed();

    // deterministic output
    let again = search_candidates(41, 64);
    assert_eq!(hits, again, "search output must be deterministic");

    // every fixture tuple appears
    for label in DelPezzoCase::fixture_labels() {
        let case = DelPezzoCase::fixture(label).unwrap();
        assert!(hits.contains(&case), "fixture {label} missing from search");
    }
    // characteristics 17, 19, 23, 41: the fixture tuple is the only hit
    for (label, p) in [("ii", 17u64), ("iii", 19), ("iv", 23), ("v", 41)] {
        let per_p: Vec<_> = hits.iter().filter(|h| h.p == p).collect();
        assert_eq!(per_p.len(), 1, "characteristic {p} admits exactly one tuple");
        assert_eq!(per_p[0], &DelPezzoCase::fixture(label).unwrap());
    }
    // characteristic 11: the exhaustive run finds the fixture plus four
    // further raw candidates under the two degree filters (frozen from
    // the oracle run; reported as candidates, never as verdicts)
    let eleven: Vec<[i64; 4]> = vec![
        [2, 3, 11, 11],
        [2, 3, 11, 12],
        [2, 3, 11, 13],
        [2, 4, 6, 11],
        [3, 3, 4, 11],
    ];
    let per_11: Vec<_> = hits.iter().filter(|h| h.p == 11).collect();
    assert_eq!(per_11.len(), eleven.len());
    for ms in eleven {
        let case = DelPezzoCase::new(
            11,
            [
                rat(ms[0] - 1, ms[0]),
                rat(ms[1] - 1, ms[1]),
                rat(ms[2] - 1, ms[2]),
                rat(ms[3] - 1, ms[3]),
            ],
        )
        .unwrap();
        assert!(per_11.contains(&&case), "missing 11-candidate {ms:?}");
    }
    println!(
        "acceptance criterion 4 note: characteristic 11 admits 4 raw candidates beyond the \
         fixture under the two degree filters; they are reported as candidates only"
    );
    report(
        "criterion 4 (candidate search, single-threaded)",
        elapsed_single,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_5_cusp_chains() {
    let start = Instant::now();
    for n in 1..=30u64 {
        let graph = cusp_log_resolution(n).unwrap();
        let sol = graph.solve_discrepancies().unwrap();
        let expected = cusp_reference_coefficients(n);
        assert_eq!(sol.coefficients.len(), expected.len(), "n = {n}");
        for ((id, got), want) in sol.coefficients.iter().zip(&expected) {
            assert_eq!(got, want, "n = {n}: coefficient of {id}");
        }
        for (id, _) in &sol.coefficients {
            assert!(
                graph
                    .pairing_residual(&sol.coefficients, id)
                    .unwrap()
                    .is_zero(),
                "n = {n}: residual at {id}"
            );
        }
        let sign = if n % 2 == 0 { 1i64 } else { -1 };
        let ids: Vec<String> = (1..=n).map(|i| format!("E{i}")).collect();
        let refs: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
        let det = graph.intersection_matrix(&refs).unwrap().determinant();
        assert_eq!(det, BigInt::from(sign * (2 * n as i64 + 1)), "n = {n}: chain det");

        let plain = DualGraph::chain(&vec![-2; n as usize]);
        let det = plain.intersection_matrix(&refs).unwrap().determinant();
        assert_eq!(det, BigInt::from(sign * (n as i64 + 1)), "n = {n}: plain det");
    }
    report(
        "criterion 5 (cusp chains n = 1..30)",
        start.elapsed(),
        Duration::from_secs(30),
    );
}

/// Brute-force oracle: the maximum of `sum floor((b-1)/b + d_i a/b)` over
/// all integer splits of `d` into `q` parts.
///
/// Moving a multiple of `b` from one part to another changes neither the
/// sum nor the objective (each floor shifts by `a` in opposite
/// directions), so every split canonicalises to parts `2..q` in `[0, b)`
/// with part 1 free. The maximum is then a small dynamic program.
fn best_split_sum(a: i64, b: i64, q: i64, d: i64) -> BigInt {
    const NEG: i64 = i64::MIN / 4;
    let term = |di: i64| -> i64 {
        // floor((b-1)/b + di * a / b) = floor((b - 1 + di * a) / b)
        (b - 1 + di * a).div_euclid(b)
    };
    // dp over the sum of parts 2..q, each in [0, b)
    let width = ((q - 1) * (b - 1) + 1).max(1) as usize;
    let mut best = vec![NEG; width];
    best[0] = 0;
    for _ in 1..q {
        let mut next = vec![NEG; width];
        for (s, &v) in best.iter().enumerate() {
            if v == NEG {
                continue;
            }
            for di in 0..b {
                let idx = s + di as usize;
                if idx >= width {
                    break;
                }
                let cand = v + term(di);
                if cand > next[idx] {
                    next[idx] = cand;
                }
            }
        }
        best = next;
    }
    let overall = best
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != NEG)
        .map(|(s, &v)| v + term(d - s as i64))
        .max()
        .expect("dp is populated");
    BigInt::from(overall)
}

#[test]
fn criterion_6_toric() {
    let start = Instant::now();
    // Q-factorial index equals the denominator for every coprime pair
    assert_eq!(q_factorial_index_toric(1, 0).unwrap(), 1);
    for d in 2..=30i64 {
        for l in 1..d {
            if gcd(d, l) != 1 {
                continue;
            }
            assert_eq!(q_factorial_index_toric(d, l).unwrap(), d, "(d, l) = ({d}, {l})");
            assert_eq!(different(&[(d, l)]).unwrap()[0], rat(d - 1, d));
        }
    }
    // reflexive-power witnesses against the dynamic-programming maximum
    for b in 1..=12i64 {
        for a in 1..=b {
            if gcd(a, b) != 1 {
                continue;
            }
            for q in 1..=6i64 {
                for d in 0..b.max(1) {
                    let parts = reflexive_power_witness(a, b, q, d).unwrap();
                    assert_eq!(parts.len() as i64, q);
                    assert_eq!(parts.iter().sum::<i64>(), d);
                    assert!(
                        floor_identity_holds(a, b, q, d, &parts),
                        "witness identity fails at a={a} b={b} q={q} d={d}: {parts:?}"
                    );
                    // the floor sum is subadditive, so the identity value
                    // must also be the brute-force maximum
                    let rhs = BigInt::from((q * (b - 1) + d * a).div_euclid(b));
                    assert_eq!(
                        best_split_sum(a, b, q, d),
                        rhs,
                        "brute-force maximum disagrees at a={a} b={b} q={q} d={d}"
                    );
                }
            }
        }
    }
    report(
        "criterion 6 (toric index sweep and witnesses)",
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_7_witt_battery() {
    let start = Instant::now();
    for p in [2u64, 3, 5] {
        for n in 1..=4usize {
            ghost_battery(p, n, 1000, 0xACCE5).unwrap();
        }
    }
    for p in [2u64, 3] {
        for n in 1..=3usize {
            ring_axioms_exhaustive(p, n).unwrap();
        }
    }
    for p in [2u64, 3] {
        grading_battery(p, 3).unwrap();
    }
    report(
        "criterion 7 (witt ghost/ring/grading battery)",
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_8_acc_and_vanishing() {
    let start = Instant::now();
    let acc = curve_acc_enumerate(&rat(5, 6), 42).unwrap();
    assert!(acc.none_in_open_interval);
    assert!(!acc.solutions.is_empty());

    // 200 random standard boundaries with denominators <= 42 (and
    // anti-ample degree, the del Pezzo hypothesis), checked at p > 41
    let mut rng = ChaCha8Rng::seed_from_u64(0x42);
    let primes = [43u64, 47, 53];
    let mut tested = 0;
    while tested < 200 {
        let ds: Vec<i64> = (0..4).map(|_| rng.random_range(2..=42)).collect();
        let coeffs: Vec<Rational> = ds.iter().map(|&d| rat(d - 1, d)).collect();
        let total: Rational = coeffs.iter().cloned().sum();
        if total >= rat(3, 1) {
            continue;
        }
        let p = primes[rng.random_range(0..primes.len())];
        let ell = rng.random_range(1..=3u32);
        let report = vanishing_42_check(&coeffs, p, ell).unwrap();
        assert!(
            report.p2_degree.is_negative(),
            "degree must be negative for p = {p}, ell = {ell}, ds = {ds:?}: got {}",
            report.p2_degree
        );
        assert!(
            report.per_component_ok.iter().all(|&ok| ok),
            "componentwise inequality fails for p = {p}, ds = {ds:?}"
        );
        tested += 1;
    }

    // the mechanism's boundary: case (v) at its own characteristic has
    // degree exactly zero
    let case_v = DelPezzoCase::fixture("v").unwrap();
    let edge = vanishing_42_check(&case_v.coefficients, 41, 1).unwrap();
    assert_eq!(edge.p2_degree, BigInt::zero());

    report(
        "criterion 8 (boundary enumeration and vanishing checks)",
        start.elapsed(),
        Duration::from_secs(30),
    );
}
