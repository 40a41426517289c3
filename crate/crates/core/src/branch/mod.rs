//! Everettian branch bookkeeping for the GHZ protocol.
//!
//! At `t0` the observers are ready and uncorrelated. At `t1` each observer
//! holds a local record of their own outcome. At `t2` the records have been
//! shared and each branch carries a single joint label; the joint records
//! are not written as per-observer factors.

mod binomial;
mod typicality;

pub use binomial::ln_binomial_pmf;
pub use typicality::{
    deviation_measures, typicality_exact, typicality_monte_carlo, typicality_monte_carlo_on, MeasureKind, Method,
    TypicalityResult, GENERATOR,
};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::quantum::{ghz_state, outcome_amplitude, Amplitude, Basis, OutcomeTriple, Party, SettingTriple};
use crate::{Error, DEGENERATE_TOL, SUM_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Stage {
    T0,
    T1,
    T2,
}

impl Stage {
    pub fn parse(s: &str) -> Result<Stage, Error> {
        match s {
            "t0" => Ok(Stage::T0),
            "t1" => Ok(Stage::T1),
            "t2" => Ok(Stage::T2),
            _ => Err(Error::Parse(format!("unknown stage {s:?}; expected t0, t1 or t2"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BranchTerm {
    /// Local record of observers A, B, C, e.g. `A:+x`.
    pub records: [String; 3],
    /// Joint record after the observers compared data (t2 only).
    pub shared: Option<String>,
    /// Spin outcomes this term records, if any.
    pub outcome: Option<OutcomeTriple>,
    pub amplitude: Amplitude,
}

impl BranchTerm {
    pub fn weight(&self) -> f64 {
        self.amplitude.norm_sqr()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BranchState {
    stage: Stage,
    terms: Vec<BranchTerm>,
}

impl BranchState {
    pub fn new(stage: Stage, terms: Vec<BranchTerm>) -> Result<BranchState, Error> {
        let total: f64 = terms.iter().map(BranchTerm::weight).sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidParam(format!("branch weights sum to {total}")));
        }
        match stage {
            Stage::T2 if terms.iter().any(|t| t.shared.is_none()) => {
                return Err(Error::InvalidParam("t2 terms need a joint record".into()))
            }
            Stage::T0 | Stage::T1 if terms.iter().any(|t| t.shared.is_some()) => {
                return Err(Error::InvalidParam("joint records exist only at t2".into()))
            }
            _ => {}
        }
        Ok(BranchState { stage, terms })
    }

    /// A t2 state with given outcome weights, used for biased fixtures.
    pub fn joint_from_weights(bases: [Basis; 3], weights: &[(OutcomeTriple, f64)]) -> Result<BranchState, Error> {
        let terms = weights
            .iter()
            .map(|&(o, w)| {
                if w.is_nan() || w < 0.0 {
                    return Err(Error::InvalidParam(format!("negative branch weight {w}")));
                }
                Ok(joint_term(o, bases, Amplitude::new(libm::sqrt(w), 0.0)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        BranchState::new(Stage::T2, terms)
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn terms(&self) -> &[BranchTerm] {
        &self.terms
    }

    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(BranchTerm::weight).sum()
    }
}

fn record(party: Party, sign: crate::quantum::Sign, basis: Basis) -> String {
    format!("{}:{}{}", party.observer(), sign.symbol(), basis.symbol())
}

fn local_records(o: OutcomeTriple, bases: [Basis; 3]) -> [String; 3] {
    Party::ALL.map(|p| record(p, o.get(p), bases[p.index()]))
}

fn joint_term(o: OutcomeTriple, bases: [Basis; 3], amplitude: Amplitude) -> BranchTerm {
    let records = local_records(o, bases);
    let shared = format!("ABC:{}", records.iter().map(|r| &r[2..]).collect::<String>());
    BranchTerm {
        records,
        shared: Some(shared),
        outcome: Some(o),
        amplitude,
    }
}

/// Observers ready, before any measurement.
pub fn initial_state() -> BranchState {
    BranchState {
        stage: Stage::T0,
        terms: alloc::vec![BranchTerm {
            records: ["A:ready".into(), "B:ready".into(), "C:ready".into()],
            shared: None,
            outcome: None,
            amplitude: Amplitude::new(1.0, 0.0),
        }],
    }
}

/// States after local measurement (t1) and after comparing data (t2) for a
/// canonical triple. Terms with vanishing amplitude are dropped.
pub fn evolve(settings: &SettingTriple) -> Result<(BranchState, BranchState), Error> {
    if !settings.is_canonical() {
        return Err(Error::UnsupportedSettings(format!(
            "branch evolution is defined for xxx, xyy, yxy, yyx (got {settings})"
        )));
    }
    let bases = settings.bases().expect("canonical");
    let psi = ghz_state();
    let mut t1 = Vec::new();
    let mut t2 = Vec::new();
    for o in OutcomeTriple::all() {
        let amplitude = outcome_amplitude(&psi, settings, o);
        if amplitude.norm_sqr() <= DEGENERATE_TOL {
            continue;
        }
        t1.push(BranchTerm {
            records: local_records(o, bases),
            shared: None,
            outcome: Some(o),
            amplitude,
        });
        t2.push(joint_term(o, bases, amplitude));
    }
    Ok((BranchState::new(Stage::T1, t1)?, BranchState::new(Stage::T2, t2)?))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RelativeWorld {
    pub record: String,
    pub weight: f64,
}

/// Terms grouped by one observer's record, in order of first appearance.
pub fn relative_worlds(state: &BranchState, observer: Party) -> Vec<RelativeWorld> {
    let mut worlds: Vec<RelativeWorld> = Vec::new();
    for t in &state.terms {
        let label = &t.records[observer.index()];
        match worlds.iter_mut().find(|w| &w.record == label) {
            Some(w) => w.weight += t.weight(),
            None => worlds.push(RelativeWorld {
                record: label.clone(),
                weight: t.weight(),
            }),
        }
    }
    worlds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{canonical_triples, Sign};

    #[test]
    fn xxx_branches() {
        let (t1, t2) = evolve(&canonical_triples()[0]).unwrap();
        assert_eq!(t1.terms().len(), 4);
        assert_eq!(t2.terms().len(), 4);
        for t in t2.terms() {
            assert!((t.weight() - 0.25).abs() < 1e-12);
            assert_eq!(t.outcome.unwrap().parity(), Sign::Minus);
            assert!(t.shared.as_ref().unwrap().starts_with("ABC:"));
        }
        assert!((t1.total_weight() - 1.0).abs() < 1e-12);
        assert!((t2.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn xyy_branches_have_even_parity() {
        let (_, t2) = evolve(&canonical_triples()[1]).unwrap();
        assert!(t2.terms().iter().all(|t| t.outcome.unwrap().parity() == Sign::Plus));
        assert_eq!(t2.terms()[0].shared.as_deref(), Some("ABC:+x+y+y"));
    }

    #[test]
    fn alice_sees_two_worlds() {
        let (t1, t2) = evolve(&canonical_triples()[0]).unwrap();
        for state in [&t1, &t2] {
            let w = relative_worlds(state, Party::One);
            assert_eq!(w.len(), 2);
            assert_eq!(w[0].record, "A:+x");
            assert_eq!(w[1].record, "A:-x");
            assert!(w.iter().all(|w| (w.weight - 0.5).abs() < 1e-12));
        }
    }

    #[test]
    fn bob_profile_independent_of_remote_settings() {
        let profile = |i: usize| {
            let (t1, _) = evolve(&canonical_triples()[i]).unwrap();
            relative_worlds(&t1, Party::Two)
                .iter()
                .map(|w| w.weight)
                .collect::<Vec<_>>()
        };
        let a = profile(0);
        let b = profile(1);
        assert_eq!(a.len(), 2);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12 && (x - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_canonical() {
        let s = SettingTriple::from_bases([Basis::Y; 3]);
        assert!(matches!(evolve(&s), Err(Error::UnsupportedSettings(_))));
    }

    #[test]
    fn state_validation() {
        let o: OutcomeTriple = "+++".parse().unwrap();
        assert!(BranchState::joint_from_weights([Basis::X; 3], &[(o, 0.5)]).is_err());
        let t0 = initial_state();
        assert_eq!(t0.stage(), Stage::T0);
        assert_eq!(relative_worlds(&t0, Party::Three)[0].record, "C:ready");
    }
}
