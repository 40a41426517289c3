//! Weak-law typicality experiments.
//!
//! For `n` repetitions of an event with measure `p`, the deviation set is the
//! set of frequency outcomes `k/n` with `|k/n - p| > ε`. Its exact measure is
//! a binomial tail; the Monte Carlo variant samples one run of `n`
//! repetitions from the t2 branch weights (Born) or uniformly over the
//! branches (branch counting) and reports whether that run deviates.

use alloc::format;
use alloc::string::String;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evolve, ln_binomial_pmf, BranchState};
use crate::quantum::{OutcomeTriple, SettingTriple};
use crate::Error;

/// Identity of the pseudo-random generator used by Monte Carlo runs.
pub const GENERATOR: &str = "rand_chacha::ChaCha8Rng::seed_from_u64";

const MAX_EXACT_N: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MeasureKind {
    Born,
    BranchCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TypicalityResult {
    pub n: u64,
    pub epsilon: f64,
    /// Exact: binomial tail measure. Monte Carlo: 1 if the sampled run deviates, else 0.
    pub measure_of_deviation_set: f64,
    /// Natural log of the exact measure; `None` when the set is empty or
    /// the tail underflows to zero in log space too.
    pub ln_measure_of_deviation_set: Option<f64>,
    pub empirical_frequency: Option<f64>,
    /// Born weight the frequency is compared against.
    pub reference: f64,
    pub tracked: Option<OutcomeTriple>,
    pub measure_kind: MeasureKind,
    pub method: Method,
    pub seed: Option<u64>,
    pub generator: Option<String>,
}

fn check_common(n: u64, epsilon: f64) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::InvalidParam("n must be at least 1".into()));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidParam(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

fn ln_sum_exp(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + libm::log(terms.map(|t| libm::exp(t - max)).sum::<f64>())
}

fn deviates(k: u64, n: u64, p: f64, epsilon: f64) -> bool {
    (k as f64 / n as f64 - p).abs() > epsilon
}

/// Natural-log measures `(deviation set, complement)`.
fn ln_deviation_measures(p: f64, n: u64, epsilon: f64) -> Result<(f64, f64), Error> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!("p must lie in [0, 1], got {p}")));
    }
    check_common(n, epsilon)?;
    if n > MAX_EXACT_N {
        return Err(Error::InvalidParam(format!("n must be at most {MAX_EXACT_N}, got {n}")));
    }
    let split = |dev: bool| {
        (0..=n)
            .filter(move |&k| deviates(k, n, p, epsilon) == dev)
            .map(move |k| ln_binomial_pmf(k, n, p))
    };
    Ok((ln_sum_exp(split(true)), ln_sum_exp(split(false))))
}

/// `(measure of the deviation set, measure of its complement)`, each summed
/// separately from the binomial terms.
pub fn deviation_measures(p: f64, n: u64, epsilon: f64) -> Result<(f64, f64), Error> {
    let (dev, comp) = ln_deviation_measures(p, n, epsilon)?;
    Ok((libm::exp(dev), libm::exp(comp)))
}

/// Exact measure of `{|k/n - p| > ε}` under `Binomial(n, p)`.
pub fn typicality_exact(p: f64, n: u64, epsilon: f64) -> Result<TypicalityResult, Error> {
    let (ln_dev, _) = ln_deviation_measures(p, n, epsilon)?;
    Ok(TypicalityResult {
        n,
        epsilon,
        measure_of_deviation_set: libm::exp(ln_dev).min(1.0),
        ln_measure_of_deviation_set: ln_dev.is_finite().then_some(ln_dev.min(0.0)),
        empirical_frequency: None,
        reference: p,
        tracked: None,
        measure_kind: MeasureKind::Born,
        method: Method::Exact,
        seed: None,
        generator: None,
    })
}

/// Seeded Monte Carlo run on the t2 branches of a canonical triple.
pub fn typicality_monte_carlo(
    settings: &SettingTriple,
    tracked: OutcomeTriple,
    n: u64,
    epsilon: f64,
    kind: MeasureKind,
    seed: u64,
) -> Result<TypicalityResult, Error> {
    let (_, t2) = evolve(settings)?;
    typicality_monte_carlo_on(&t2, tracked, n, epsilon, kind, seed)
}

/// Seeded Monte Carlo run on an arbitrary branch state whose terms carry outcomes.
pub fn typicality_monte_carlo_on(
    state: &BranchState,
    tracked: OutcomeTriple,
    n: u64,
    epsilon: f64,
    kind: MeasureKind,
    seed: u64,
) -> Result<TypicalityResult, Error> {
    check_common(n, epsilon)?;
    let terms = state.terms();
    let outcomes = terms
        .iter()
        .map(|t| {
            t.outcome
                .ok_or_else(|| Error::InvalidParam("branch terms carry no outcomes".into()))
        })
        .collect::<Result<alloc::vec::Vec<_>, _>>()?;
    let total = state.total_weight();
    let reference: f64 = terms
        .iter()
        .zip(&outcomes)
        .filter(|(_, o)| **o == tracked)
        .map(|(t, _)| t.weight())
        .sum::<f64>()
        / total;

    let mut cumulative = alloc::vec::Vec::with_capacity(terms.len());
    let mut acc = 0.0;
    for t in terms {
        acc += t.weight() / total;
        cumulative.push(acc);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..n {
        let idx = match kind {
            MeasureKind::Born => {
                let u: f64 = rng.gen();
                cumulative.iter().position(|&c| u < c).unwrap_or(terms.len() - 1)
            }
            MeasureKind::BranchCount => rng.gen_range(0..terms.len()),
        };
        if outcomes[idx] == tracked {
            hits += 1;
        }
    }
    let f = hits as f64 / n as f64;
    Ok(TypicalityResult {
        n,
        epsilon,
        measure_of_deviation_set: if (f - reference).abs() > epsilon { 1.0 } else { 0.0 },
        ln_measure_of_deviation_set: None,
        empirical_frequency: Some(f),
        reference,
        tracked: Some(tracked),
        measure_kind: kind,
        method: Method::MonteCarlo,
        seed: Some(seed),
        generator: Some(GENERATOR.into()),
    })
}
