//! The audit battery.
//!
//! Every check is evaluated exhaustively over the given setting triples and
//! the atoms of the model's supports. A failing verdict carries the witness
//! with the largest residual; ties go to the first candidate in settings
//! list order, then atom id, then outcome index.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{response_distribution, response_marginals, Beable, OntologicalModel, WeightedSupport};
use crate::logic::parity_target;
use crate::quantum::{
    born_joint, canonical_triples, marginal, Basis, OutcomeTriple, Party, PureState, SettingTriple, Sign,
};
use crate::{Error, DEGENERATE_TOL, SUM_TOL};

/// Structured counterexample attached to a failing check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Witness {
    /// Joint response differs from the product of its own party marginals.
    Factorization {
        settings: String,
        atom: String,
        outcome: OutcomeTriple,
        joint: f64,
        product: f64,
    },
    /// A party's conditional shifts when conditioning on remote outcomes.
    OutcomeDependence {
        settings: String,
        atom: String,
        party: Party,
        outcome: Sign,
        conditioned_on: Vec<(Party, Sign)>,
        conditional: f64,
        marginal: f64,
    },
    /// A party's marginal at fixed λ changes with a remote setting.
    ParameterDependence {
        party: Party,
        atom: String,
        settings_a: String,
        settings_b: String,
        marginal_a: f64,
        marginal_b: f64,
    },
    /// Beable density depends on the settings.
    SupportMismatch {
        settings_a: String,
        settings_b: String,
        support_a: Vec<(String, f64)>,
        support_b: Vec<(String, f64)>,
    },
    /// Observed marginal changes with a remote setting.
    Signaling {
        party: Party,
        settings_a: String,
        settings_b: String,
        marginal_a: (f64, f64),
        marginal_b: (f64, f64),
    },
    /// A supported atom gives weight to an outcome the GHZ parity forbids.
    ForbiddenOutcome {
        settings: String,
        atom: String,
        outcome: OutcomeTriple,
        response: f64,
    },
    /// A party response at a supported atom is neither 0 nor 1.
    Indeterminate {
        settings: String,
        atom: String,
        party: Party,
        basis: Basis,
        response_plus: f64,
        response_minus: f64,
    },
    /// Derived values at an atom violate the parity of its own triple.
    ParityMismatch {
        settings: String,
        atom: String,
        values: [Sign; 3],
        target: Sign,
    },
    /// Prediction differs from the Born rule.
    QuantumMismatch {
        settings: String,
        outcome: OutcomeTriple,
        predicted: f64,
        born: f64,
    },
    /// The check cannot be run on this model.
    NotApplicable { reason: String },
}

/// A conditional or evaluation that was skipped rather than failed.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Skipped {
    pub settings: String,
    pub atom: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub pass: bool,
    pub counterexample: Option<Witness>,
    /// Largest residual seen, pass or fail.
    pub max_residual: f64,
    pub tolerance: f64,
    pub skipped: Vec<Skipped>,
}

impl Verdict {
    fn not_applicable(reason: String) -> Verdict {
        Verdict {
            pass: false,
            counterexample: Some(Witness::NotApplicable { reason }),
            max_residual: 0.0,
            tolerance: SUM_TOL,
            skipped: Vec::new(),
        }
    }
}

/// Keeps the worst residual and the first witness reaching it.
struct Worst {
    tolerance: f64,
    residual: f64,
    witness: Option<Witness>,
    skipped: Vec<Skipped>,
}

impl Worst {
    fn new(tolerance: f64) -> Worst {
        Worst {
            tolerance,
            residual: 0.0,
            witness: None,
            skipped: Vec::new(),
        }
    }

    fn offer(&mut self, residual: f64, witness: impl FnOnce() -> Witness) {
        let failing = residual.is_nan() || residual > self.tolerance;
        let worse = match self.witness {
            Some(_) => residual > self.residual,
            None => failing,
        };
        if worse && failing {
            self.witness = Some(witness());
        }
        if residual > self.residual || residual.is_nan() {
            self.residual = residual;
        }
    }

    /// Records a failure even when the residual is within tolerance.
    fn force(&mut self, residual: f64, witness: impl FnOnce() -> Witness) {
        if self.witness.is_none() || residual > self.residual {
            self.witness = Some(witness());
        }
        self.residual = self.residual.max(residual);
    }

    fn finish(self) -> Verdict {
        Verdict {
            pass: self.witness.is_none(),
            counterexample: self.witness,
            max_residual: self.residual,
            tolerance: self.tolerance,
            skipped: self.skipped,
        }
    }
}

struct Evaluated {
    settings: SettingTriple,
    atoms: Vec<(Beable, f64, [f64; 8])>,
}

fn evaluate_all<M: OntologicalModel + ?Sized>(
    model: &M,
    settings_list: &[SettingTriple],
    psi: &PureState,
) -> Result<Vec<Evaluated>, Error> {
    settings_list
        .iter()
        .map(|s| {
            let support = model.support(s, psi)?;
            let atoms = support
                .atoms()
                .iter()
                .map(|a| {
                    let r = response_distribution(model, &a.beable, s, psi)?;
                    Ok((a.beable.clone(), a.weight, r))
                })
                .collect::<Result<_, Error>>()?;
            Ok(Evaluated { settings: *s, atoms })
        })
        .collect()
}

/// Joint response equals the product of its own party marginals at every atom.
pub fn audit_factorizability<M: OntologicalModel + ?Sized>(
    model: &M,
    settings_list: &[SettingTriple],
    psi: &PureState,
) -> Result<Verdict, Error> {
    let mut worst = Worst::new(SUM_TOL);
    for ev in evaluate_all(model, settings_list, psi)? {
        for (beable, _, probs) in &ev.atoms {
            let m = response_marginals(probs);
            for o in OutcomeTriple::all() {
                let joint = probs[o.index()];
                let product: f64 = Party::ALL.iter().map(|p| m[p.index()][o.get(*p).bit()]).product();
                worst.offer((joint - product).abs(), || Witness::Factorization {
                    settings: ev.settings.label(),
                    atom: beable.id.clone(),
                    outcome: o,
                    joint,
                    product,
                });
            }
        }
    }
    Ok(worst.finish())
}

/// `P(α | β, γ, λ) = P_1(α | λ)` and `P(β | γ, λ) = P_2(β | λ)` at every atom.
pub fn audit_outcome_independence<M: OntologicalModel + ?Sized>(
    model: &M,
    settings_list: &[SettingTriple],
    psi: &PureState,
) -> Result<Verdict, Error> {
    let mut worst = Worst::new(SUM_TOL);
    for ev in evaluate_all(model, settings_list, psi)? {
        for (beable, _, probs) in &ev.atoms {
            let m = response_marginals(probs);
            let p = |a: Sign, b: Sign, c: Sign| probs[OutcomeTriple::new(a, b, c).index()];
            // Party 1 conditioned on (β, γ).
            for b in Sign::BOTH {
                for c in Sign::BOTH {
                    let evidence = p(Sign::Plus, b, c) + p(Sign::Minus, b, c);
                    if evidence < DEGENERATE_TOL {
                        worst.skipped.push(Skipped {
                            settings: ev.settings.label(),
                            atom: beable.id.clone(),
                            reason: format!("P(β={b}, γ={c}) = {evidence:e}"),
                        });
                        continue;
                    }
                    for a in Sign::BOTH {
                        let conditional = p(a, b, c) / evidence;
                        let marginal = m[0][a.bit()];
                        worst.offer((conditional - marginal).abs(), || Witness::OutcomeDependence {
                            settings: ev.settings.label(),
                            atom: beable.id.clone(),
                            party: Party::One,
                            outcome: a,
                            conditioned_on: alloc::vec![(Party::Two, b), (Party::Three, c)],
                            conditional,
                            marginal,
                        });
                    }
                }
            }
            // Party 2 conditioned on γ.
            for c in Sign::BOTH {
                let evidence: f64 = OutcomeTriple::all()
                    .iter()
                    .filter(|o| o.c == c)
                    .map(|o| probs[o.index()])
                    .sum();
                if evidence < DEGENERATE_TOL {
                    worst.skipped.push(Skipped {
                        settings: ev.settings.label(),
                        atom: beable.id.clone(),
                        reason: format!("P(γ={c}) = {evidence:e}"),
                    });
                    continue;
                }
                for b in Sign::BOTH {
                    let conditional = (p(Sign::Plus, b, c) + p(Sign::Minus, b, c)) / evidence;
                    let marginal = m[1][b.bit()];
                    worst.offer((conditional - marginal).abs(), || Witness::OutcomeDependence {
                        settings: ev.settings.label(),
                        atom: beable.id.clone(),
                        party: Party::Two,
                        outcome: b,
                        conditioned_on: alloc::vec![(Party::Three, c)],
                        conditional,
                        marginal,
                    });
                }
            }
        }
    }
    Ok(worst.finish())
}

/// At each fixed beable, a party's marginal depends only on its own setting.
///
/// Every atom found in any support is evaluated under every setting triple
/// in the list; evaluations the model cannot perform are skipped.
pub fn audit_parameter_independence<M: OntologicalModel + ?Sized>(
    model: &M,
    settings_list: &[SettingTriple],
    psi: &PureState,
) -> Result<Verdict, Error> {
    let mut worst = Worst::new(SUM_TOL);
    let mut beables: Vec<Beable> = Vec::new();
    for s in settings_list {
        for a in model.support(s, psi)?.atoms() {
            if !beables.iter().any(|b| b.id == a.beable.id) {
                beables.push(a.beable.clone());
            }
        }
    }
    beables.sort_by(|a, b| a.id.cmp(&b.id));
    for beable in &beables {
        let marginals: Vec<Option<[[f64; 2]; 3]>> = settings_list
            .iter()
            .map(|s| match response_distribution(model, beable, s, psi) {
                Ok(r) => Ok(Some(response_marginals(&r))),
                Err(Error::UnsupportedSettings(reason)) | Err(Error::PreconditionFailed(reason)) => {
                    worst.skipped.push(Skipped {
                        settings: s.label(),
                        atom: beable.id.clone(),
                        reason,
                    });
                    Ok(None)
                }
                Err(e) => Err(e),
            })
            .collect::<Result<_, Error>>()?;
        for party in Party::ALL {
            for i in 0..settings_list.len() {
                for k in i + 1..settings_list.len() {
                    let (si, sk) = (&settings_list[i], &settings_list[k]);
                    if si.setting(party) != sk.setting(party) {
                        continue;
                    }
                    let (Some(mi), Some(mk)) = (&marginals[i], &marginals[k]) else {
                        continue;
                    };
                    let (a, b) = (mi[party.index()][0], mk[party.index()][0]);
                    worst.offer((a - b).abs(), || Witness::ParameterDependence {
                        party,
                        atom: beable.id.clone(),
                        settings_a: si.label(),
                        settings_b: sk.label(),
                        marginal_a: a,
                        marginal_b: b,
                    });
                }
            }
        }
    }
    Ok(worst.finish())
}

fn support_summary(s: &WeightedSupport) -> Vec<(String, f64)> {
    s.atoms().iter().map(|a| (a.beable.id.clone(), a.weight)).collect()
}

/// `ρ(λ | settings, ψ)` is the same for every setting triple in the list.
pub fn audit_setting_independence<M: OntologicalModel + ?Sized>(
    model: &M,
    settings_list: &[SettingTriple],
    psi: &PureState,
) -> Result<Verdict, Error> {
    if settings_list.len() < 2 {
        return Err(Error::PreconditionFailed(
            "setting independence needs at least two setting triples".into(),
        ));
    }
    let supports = settings_list
        .iter()
        .map(|s| model.support(s, psi))
        .collect::<Result<Vec<_>, _>>()?;
    let mut worst = Worst::new(SUM_TOL);
    let reference = &supports[0];
    for (s, support) in settings_list.iter().zip(&supports).skip(1) {
        if reference.matches(support, SUM_TOL) {
            let residual = reference
                .atoms()
                .iter()
                .zip(support.atoms())
                .map(|(a, b)| (a.weight - b.weight).abs())
                .fold(0.0, f64::max);
            worst.offer(residual, || unreachable!("matching supports are within tolerance"));
        } else {
            // Residual is the total variation distance between the two densities.
            worst.force(support_distance(reference, support), || Witness::SupportMismatch {
                settings_a: settings_list[0].label(),
                settings_b: s.label(),
                support_a: support_summary(reference),
                support_b: support_summary(support),
            });
        }
    }
    Ok(worst.finish())
}

fn support_distance(a: &WeightedSupport, b: &WeightedSupport) -> f64 {
    let weight_in =
        |s: &WeightedSupport, beable: &Beable| s.atoms().iter().find(|x| x.beable == *beable).map_or(0.0, |x| x.weight);
    let mut d = 0.0;
    for x in a.atoms() {
        d += (x.weight - weight_in(b, &x.beable)).abs();
    }
    for y in b.atoms() {
        if !a.atoms().iter().any(|x| x.beable == y.beable) {
            d += y.weight;
        }
    }
    d / 2.0
}

/// Each party's predicted marginal is unchanged by the other parties' settings.
pub fn audit_nonsignaling<M: OntologicalModel + ?Sized>(
    model: &M,
    settings_grid: &[SettingTriple],
    psi: &PureState,
) -> Result<Verdict, Error> {
    let predictions = settings_grid
        .iter()
        .map(|s| super::predict_joint(model, s, psi))
        .collect::<Result<Vec<_>, _>>()?;
    let mut worst = Worst::new(SUM_TOL);
    for party in Party::ALL {
        for i in 0..settings_grid.len() {
            for k in i + 1..settings_grid.len() {
                if settings_grid[i].setting(party) != settings_grid[k].setting(party) {
                    continue;
                }
                let a = marginal(&predictions[i], party);
                let b = marginal(&predictions[k], party);
                worst.offer((a.0 - b.0).abs().max((a.1 - b.1).abs()), || Witness::Signaling {
                    party,
                    settings_a: settings_grid[i].label(),
                    settings_b: settings_grid[k].label(),
                    marginal_a: a,
                    marginal_b: b,
                });
            }
        }
    }
    Ok(worst.finish())
}

/// Every supported atom gives zero response to outcomes with the wrong GHZ parity.
pub fn audit_perfect_correlation_support<M: OntologicalModel + ?Sized>(
    model: &M,
    psi: &PureState,
) -> Result<Verdict, Error> {
    let mut worst = Worst::new(SUM_TOL);
    let triples = canonical_triples();
    for ev in evaluate_all(model, &triples, psi)? {
        let target = canonical_target(&ev.settings);
        for (beable, weight, probs) in &ev.atoms {
            if *weight <= DEGENERATE_TOL {
                continue;
            }
            for o in OutcomeTriple::all().into_iter().filter(|o| o.parity() != target) {
                let response = probs[o.index()];
                worst.offer(response, || Witness::ForbiddenOutcome {
                    settings: ev.settings.label(),
                    atom: beable.id.clone(),
                    outcome: o,
                    response,
                });
            }
        }
    }
    Ok(worst.finish())
}

fn canonical_target(s: &SettingTriple) -> Sign {
    s.bases()
        .and_then(parity_target)
        .expect("canonical triples carry a parity target")
}

/// Values derived at one supported atom under its own setting triple.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeterminismRow {
    pub settings: String,
    pub atom: String,
    pub bases: [Basis; 3],
    /// `(P_j(+1), P_j(-1))` for each party.
    pub responses: [(f64, f64); 3],
    /// `Σ_α α P_j(α)`: `A_j` for x̂ parties, `B_j` for ŷ parties.
    pub values: [f64; 3],
    pub parity_target: Sign,
    /// Product of the values, when all three are `±1`.
    pub parity: Option<Sign>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeterminismReport {
    pub verdict: Verdict,
    pub rows: Vec<DeterminismRow>,
}

/// Checks that the party responses at every supported atom of every canonical
/// triple are 0 or 1, that the derived local values are `±1`, and that their
/// product matches the parity of the atom's own triple.
pub fn derive_determinism<M: OntologicalModel + ?Sized>(
    model: &M,
    psi: &PureState,
) -> Result<DeterminismReport, Error> {
    if !model.declares_factorized() {
        return Err(Error::PreconditionFailed(format!(
            "model {} does not declare a factorized form",
            model.name()
        )));
    }
    let mut worst = Worst::new(SUM_TOL);
    let mut rows = Vec::new();
    for settings in canonical_triples() {
        let bases = settings.bases().expect("canonical");
        let target = canonical_target(&settings);
        for atom in model.support(&settings, psi)?.atoms() {
            if atom.weight <= DEGENERATE_TOL {
                continue;
            }
            let beable = &atom.beable;
            let mut responses = [(0.0, 0.0); 3];
            let mut values = [0.0; 3];
            let mut signs = [Some(Sign::Plus); 3];
            for party in Party::ALL {
                let j = party.index();
                let s = settings.setting(party);
                let plus = model.party_response(party, Sign::Plus, beable, s, psi)?;
                let minus = model.party_response(party, Sign::Minus, beable, s, psi)?;
                responses[j] = (plus, minus);
                values[j] = plus - minus;
                let off = |p: f64| p.abs().min((1.0 - p).abs());
                worst.offer(off(plus).max(off(minus)), || Witness::Indeterminate {
                    settings: settings.label(),
                    atom: beable.id.clone(),
                    party,
                    basis: bases[j],
                    response_plus: plus,
                    response_minus: minus,
                });
                signs[j] = Sign::from_value(values[j], SUM_TOL);
            }
            let parity = match signs {
                [Some(a), Some(b), Some(c)] => Some(a * b * c),
                _ => None,
            };
            if let (Some(p), [Some(a), Some(b), Some(c)]) = (parity, signs) {
                let residual = if p == target { 0.0 } else { 2.0 };
                worst.offer(residual, || Witness::ParityMismatch {
                    settings: settings.label(),
                    atom: beable.id.clone(),
                    values: [a, b, c],
                    target,
                });
            }
            rows.push(DeterminismRow {
                settings: settings.label(),
                atom: beable.id.clone(),
                bases,
                responses,
                values,
                parity_target: target,
                parity,
            });
        }
    }
    Ok(DeterminismReport {
        verdict: worst.finish(),
        rows,
    })
}

/// Predictions match the Born rule for `psi` on every listed triple.
pub fn quantum_agreement<M: OntologicalModel + ?Sized>(
    model: &M,
    settings_list: &[SettingTriple],
    psi: &PureState,
) -> Result<Verdict, Error> {
    let mut worst = Worst::new(SUM_TOL);
    for s in settings_list {
        let predicted = super::predict_joint(model, s, psi)?;
        let born = born_joint(psi, s);
        for o in OutcomeTriple::all() {
            let (p, q) = (predicted[o], born[o]);
            worst.offer((p - q).abs(), || Witness::QuantumMismatch {
                settings: s.label(),
                outcome: o,
                predicted: p,
                born: q,
            });
        }
    }
    Ok(worst.finish())
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AuditTolerances {
    pub audit: f64,
    pub degenerate_conditional: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AuditReport {
    pub model_name: String,
    pub factorized_form_declared: bool,
    pub factorizability: Verdict,
    pub outcome_independence: Verdict,
    pub parameter_independence: Verdict,
    pub setting_independence: Verdict,
    pub nonsignaling: Verdict,
    pub perfect_correlation_support: Verdict,
    pub determinism: Verdict,
    pub derived_values: Vec<DeterminismRow>,
    pub quantum_agreement: Verdict,
    /// Factorizability and setting independence together.
    pub bell_locality: bool,
    /// At least one of quantum agreement, factorizability, setting independence fails.
    pub meta_theorem_holds: bool,
    pub tolerances: AuditTolerances,
}

/// Runs the full battery on the four canonical setting triples.
pub fn run_audit<M: OntologicalModel + ?Sized>(model: &M, psi: &PureState) -> Result<AuditReport, Error> {
    let triples = canonical_triples();
    let factorizability = audit_factorizability(model, &triples, psi)?;
    let setting_independence = audit_setting_independence(model, &triples, psi)?;
    let quantum_agreement = quantum_agreement(model, &triples, psi)?;
    let (determinism, derived_values) = match derive_determinism(model, psi) {
        Ok(r) => (r.verdict, r.rows),
        Err(Error::PreconditionFailed(reason)) => (Verdict::not_applicable(reason), Vec::new()),
        Err(e) => return Err(e),
    };
    Ok(AuditReport {
        model_name: model.name(),
        factorized_form_declared: model.declares_factorized(),
        outcome_independence: audit_outcome_independence(model, &triples, psi)?,
        parameter_independence: audit_parameter_independence(model, &triples, psi)?,
        nonsignaling: audit_nonsignaling(model, &triples, psi)?,
        perfect_correlation_support: audit_perfect_correlation_support(model, psi)?,
        bell_locality: factorizability.pass && setting_independence.pass,
        meta_theorem_holds: !(quantum_agreement.pass && factorizability.pass && setting_independence.pass),
        factorizability,
        setting_independence,
        determinism,
        derived_values,
        quantum_agreement,
        tolerances: AuditTolerances {
            audit: SUM_TOL,
            degenerate_conditional: DEGENERATE_TOL,
        },
    })
}

impl AuditReport {
    /// `(check name, pass)` pairs in report order.
    pub fn verdicts(&self) -> [(&'static str, &Verdict); 8] {
        [
            ("factorizability", &self.factorizability),
            ("outcome_independence", &self.outcome_independence),
            ("parameter_independence", &self.parameter_independence),
            ("setting_independence", &self.setting_independence),
            ("nonsignaling", &self.nonsignaling),
            ("perfect_correlation_support", &self.perfect_correlation_support),
            ("determinism", &self.determinism),
            ("quantum_agreement", &self.quantum_agreement),
        ]
    }
}
