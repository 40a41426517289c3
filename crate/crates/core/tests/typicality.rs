//! Exact-tail and Monte Carlo typicality checks.
//!
//! The oracle below sums binomial terms in exact integer arithmetic for a
//! rational `p = a/b` and rational `ε`.

use ghz_core::branch::{
    deviation_measures, typicality_exact, typicality_monte_carlo, typicality_monte_carlo_on, BranchState, MeasureKind,
};
use ghz_core::quantum::{canonical_triples, Basis, OutcomeTriple};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    q.to_f64().unwrap() * 2f64.powi(-shift as i32)
}

/// Exact tail for `p = a/b`, `ε = e_num/e_den`.
fn oracle_tail(a: u64, b: u64, n: u64, e_num: u64, e_den: u64) -> f64 {
    let mut binom = BigUint::one();
    let mut num = BigUint::zero();
    for k in 0..=n {
        // |k/n - a/b| > e_num/e_den  <=>  |k b e_den - a n e_den| > e_num n b
        let lhs = (k * b * e_den).abs_diff(a * n * e_den);
        if lhs > e_num * n * b {
            num += &binom * BigUint::from(a).pow(k as u32) * BigUint::from(b - a).pow((n - k) as u32);
        }
        binom = binom * BigUint::from(n - k) / BigUint::from(k + 1);
    }
    ratio_to_f64(&num, &BigUint::from(b).pow(n as u32))
}

// Frozen from the oracle (and cross-checked with exact rational arithmetic).
const HALF_TAIL_10: f64 = 0.34375;
const HALF_TAIL_100: f64 = 0.03520020021770481;
const HALF_TAIL_1000: f64 = 1.8016825412560717e-10;
const HALF_TAIL_10000: f64 = 1.1591337779918926e-89;
const QUARTER_TAIL_100: f64 = 0.2033176490614008;
const QUARTER_TAIL_1000: f64 = 0.00022822246194330862;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn oracle_reproduces_frozen_values() {
    assert!(rel(oracle_tail(1, 2, 10, 1, 10), HALF_TAIL_10) < 1e-15);
    assert!(rel(oracle_tail(1, 2, 100, 1, 10), HALF_TAIL_100) < 1e-15);
    assert!(rel(oracle_tail(1, 4, 100, 1, 20), QUARTER_TAIL_100) < 1e-15);
}

#[test]
fn exact_tail_matches_oracle() {
    let cases = [
        (0.5, 10, 0.1, HALF_TAIL_10),
        (0.5, 100, 0.1, HALF_TAIL_100),
        (0.5, 1000, 0.1, HALF_TAIL_1000),
        (0.5, 10_000, 0.1, HALF_TAIL_10000),
        (0.25, 100, 0.05, QUARTER_TAIL_100),
        (0.25, 1000, 0.05, QUARTER_TAIL_1000),
    ];
    for (p, n, eps, want) in cases {
        let got = typicality_exact(p, n, eps).unwrap().measure_of_deviation_set;
        assert!(rel(got, want) < 1e-11, "p={p} n={n}: {got} vs {want}");
    }
}

#[test]
fn large_n_oracle_agreement() {
    let want = oracle_tail(1, 2, 1000, 1, 10);
    assert!(rel(want, HALF_TAIL_1000) < 1e-14);
    let want = oracle_tail(1, 4, 1000, 1, 20);
    assert!(rel(want, QUARTER_TAIL_1000) < 1e-14);
}

#[test]
fn weak_law_trend() {
    let t = |n| typicality_exact(0.5, n, 0.1).unwrap().measure_of_deviation_set;
    assert!(t(100) < t(10));
    let q = |n| typicality_exact(0.25, n, 0.05).unwrap().measure_of_deviation_set;
    assert!(q(1000) < q(100));
}

#[test]
fn deviation_and_complement_sum_to_one() {
    for (p, n, eps) in [
        (0.5, 10, 0.1),
        (0.5, 10_000, 0.1),
        (0.25, 1000, 0.05),
        (0.9, 333, 0.01),
        (0.3, 1_000_000, 0.001),
    ] {
        let (dev, comp) = deviation_measures(p, n, eps).unwrap();
        assert!((dev + comp - 1.0).abs() < 1e-12, "p={p} n={n}: {dev} + {comp}");
    }
}

#[test]
fn log_measure_survives_underflow() {
    let r = typicality_exact(0.5, 1_000_000, 0.1).unwrap();
    assert_eq!(r.measure_of_deviation_set, 0.0);
    let ln = r.ln_measure_of_deviation_set.unwrap();
    // Chernoff: ln P ≈ -n D(0.4 || 0.5) ≈ -20136
    assert!(ln < -20_000.0 && ln > -20_300.0, "{ln}");
}

#[test]
fn born_monte_carlo_near_quarter() {
    let o: OutcomeTriple = "++-".parse().unwrap();
    let r = typicality_monte_carlo(&canonical_triples()[0], o, 10_000, 0.02, MeasureKind::Born, 42).unwrap();
    let f = r.empirical_frequency.unwrap();
    assert!((f - 0.25).abs() < 0.02, "{f}");
    assert_eq!(r.measure_of_deviation_set, 0.0);
    assert_eq!(r.reference, 0.25);
    let again = typicality_monte_carlo(&canonical_triples()[0], o, 10_000, 0.02, MeasureKind::Born, 42).unwrap();
    assert_eq!(f.to_bits(), again.empirical_frequency.unwrap().to_bits());
    let other = typicality_monte_carlo(&canonical_triples()[0], o, 10_000, 0.02, MeasureKind::Born, 43).unwrap();
    assert_ne!(f.to_bits(), other.empirical_frequency.unwrap().to_bits());
}

#[test]
fn forbidden_outcome_never_appears() {
    let o: OutcomeTriple = "+++".parse().unwrap();
    for kind in [MeasureKind::Born, MeasureKind::BranchCount] {
        let r = typicality_monte_carlo(&canonical_triples()[0], o, 1000, 0.01, kind, 7).unwrap();
        assert_eq!(r.empirical_frequency, Some(0.0));
        assert_eq!(r.reference, 0.0);
    }
}

#[test]
fn branch_counting_diverges_from_born_on_biased_state() {
    let allowed: Vec<OutcomeTriple> = OutcomeTriple::all()
        .into_iter()
        .filter(|o| o.parity().value() < 0.0)
        .collect();
    let heavy = allowed[0];
    let weights: Vec<(OutcomeTriple, f64)> = allowed
        .iter()
        .map(|&o| (o, if o == heavy { 0.9 } else { 0.1 / 3.0 }))
        .collect();
    let state = BranchState::joint_from_weights([Basis::X; 3], &weights).unwrap();

    let counted = typicality_monte_carlo_on(&state, heavy, 10_000, 0.05, MeasureKind::BranchCount, 42).unwrap();
    let f = counted.empirical_frequency.unwrap();
    assert!((f - 0.25).abs() < 0.02, "{f}");
    assert!((counted.reference - 0.9).abs() < 1e-12);
    assert_eq!(counted.measure_of_deviation_set, 1.0);

    let born = typicality_monte_carlo_on(&state, heavy, 10_000, 0.05, MeasureKind::Born, 42).unwrap();
    assert!((born.empirical_frequency.unwrap() - 0.9).abs() < 0.02);
    assert_eq!(born.measure_of_deviation_set, 0.0);
}
