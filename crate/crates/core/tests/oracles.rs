mod common;

use std::time::Instant;

use common::{brute_force_admissible, brute_force_count, brute_force_set, coeffs, exists_relation, mp, reduce, SUITE};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use perron_core::beta::{count_admissible, quasi_greedy_one};
use perron_core::digits::{count_sequence, find_height_witness, level_set, verify_witness, EnumerationConfig};
use perron_core::power_sums::{newton_traces, trace_enclosure};

const FOUR_GIB: u64 = 4 << 30;

#[test]
fn power_oracle_agrees_with_companion_multiplication() {
    for text in SUITE {
        let p = mp(text);
        let c = coeffs(&p);
        for k in 0..25 {
            let expect: Vec<BigInt> = common::power_coords(&c, k).into_iter().map(BigInt::from).collect();
            assert_eq!(p.theta_pow(k).coords(), &expect[..], "{text} k={k}");
        }
    }
}

#[test]
fn level_sets_match_direct_generation() {
    let cfg = EnumerationConfig::default();
    for text in SUITE {
        let p = mp(text);
        let c = coeffs(&p);
        let m = p.floor_theta() as i64;
        for n in 0..=6 {
            let level = level_set(&p, n, &cfg).unwrap();
            let got: Vec<Vec<i64>> = level.iter_coords().collect();
            assert_eq!(got, brute_force_set(&c, m, n), "{text} n={n}");
        }
    }
}

#[test]
fn counts_match_brute_force_up_to_twelve() {
    let start = Instant::now();
    for text in SUITE {
        let p = mp(text);
        let c = coeffs(&p);
        let m = p.floor_theta() as i64;
        let seq = count_sequence(&p, 12, FOUR_GIB);
        assert_eq!(seq.truncated, None, "{text}");
        for n in 1..=12 {
            assert_eq!(seq.counts[n - 1], brute_force_count(&c, m, n), "{text} n={n}");
        }
    }
    eprintln!("count oracle: {:?}", start.elapsed());
}

#[test]
fn witnesses_are_minimal() {
    for text in ["x^2-x-1", "x-2", "x-3", "x^2-2x-1", "x^3-x-1", "x^2-5x+3"] {
        let p = mp(text);
        let c = coeffs(&p);
        let m = p.floor_theta() as i64;
        let w = find_height_witness(&p, 64, 1_000_000).unwrap();
        assert!(verify_witness(&w, &p));
        assert!(reduce(&c, &w.coeffs).iter().all(|&x| x == 0));
        let shorter = w.len() - 1;
        let budget = (2 * m as u64 + 1).pow(shorter.min(16) as u32);
        if shorter <= 8 && budget <= 50_000_000 {
            assert!(!exists_relation(&c, m, shorter), "{text}: shorter relation exists");
        }
    }
}

#[test]
fn golden_ratio_has_no_relation_shorter_than_three() {
    let c = coeffs(&mp("x^2-x-1"));
    assert!(!exists_relation(&c, 1, 1));
    assert!(!exists_relation(&c, 1, 2));
    assert!(exists_relation(&c, 1, 3));
}

#[test]
fn admissible_counts_match_brute_force() {
    for text in SUITE {
        let p = mp(text);
        let m = p.floor_theta();
        let n_max = if m >= 3 { 7 } else { 10 };
        let e = quasi_greedy_one(&p, n_max).unwrap();
        for n in 1..=n_max {
            let got = count_admissible(&p, n).unwrap().to_u64().unwrap();
            assert_eq!(got, brute_force_admissible(&e.digits, m, n), "{text} n={n}");
        }
    }
}

#[test]
fn traces_match_embedding_sums_up_to_thirty() {
    for text in SUITE.iter().chain(&["x^2-2", "x^4-x^3-1"]) {
        let p = mp(text);
        let traces = newton_traces(&p, 30);
        for k in 1..=30 {
            let s = trace_enclosure(&p, k, 64).unwrap();
            assert_eq!(s.re.unique_integer().as_ref(), traces.get(k), "{text} k={k}");
        }
    }
}
