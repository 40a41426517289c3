//! Ontological (beable) models and their predictions.
//!
//! A model assigns to every setting triple a finite weighted support of
//! beables and, per beable, a response distribution over outcome triples.
//! Its prediction is the weight-averaged response:
//!
//! ```text
//! P(α,β,γ | settings, ψ) = Σ_λ ρ(λ | settings, ψ) · P(α,β,γ | λ, settings, ψ)
//! ```
//!
//! Models that declare a factorized form additionally expose per-party
//! responses `P_j(α | λ, n_j, ψ)`; the joint response must then be their
//! product. Supports are finite sums of point masses.

mod audit;

pub use audit::*;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::quantum::{
    normalize_angle, JointDistribution, OutcomeTriple, Party, PureState, Setting, SettingTriple, Sign,
};
use crate::{Error, ALGEBRAIC_TOL, SUM_TOL};

/// What a beable carries.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Payload {
    /// Local angles `(θ1, θ2, θ3)` in `(-π, π]`.
    Angles([f64; 3]),
    /// An ontic quantum state.
    State(PureState),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Beable {
    pub id: String,
    pub payload: Payload,
}

impl Beable {
    /// Angle beable with normalized angles and a canonical id.
    pub fn angles(theta: [f64; 3]) -> Beable {
        let theta = theta.map(normalize_angle);
        Beable {
            id: angle_id(theta),
            payload: Payload::Angles(theta),
        }
    }

    pub fn state(id: impl Into<String>, psi: PureState) -> Beable {
        Beable {
            id: id.into(),
            payload: Payload::State(psi),
        }
    }

    pub fn angle_triple(&self) -> Option<[f64; 3]> {
        match self.payload {
            Payload::Angles(t) => Some(t),
            Payload::State(_) => None,
        }
    }
}

fn angle_name(theta: f64) -> String {
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
    let named = [
        (0.0, "0"),
        (PI, "pi"),
        (FRAC_PI_2, "pi/2"),
        (-FRAC_PI_2, "-pi/2"),
        (FRAC_PI_4, "pi/4"),
        (-FRAC_PI_4, "-pi/4"),
        (3.0 * FRAC_PI_4, "3pi/4"),
        (-3.0 * FRAC_PI_4, "-3pi/4"),
    ];
    match named.iter().find(|(v, _)| *v == theta) {
        Some((_, n)) => n.to_string(),
        None => format!("{theta}"),
    }
}

fn angle_id(theta: [f64; 3]) -> String {
    format!(
        "({},{},{})",
        angle_name(theta[0]),
        angle_name(theta[1]),
        angle_name(theta[2])
    )
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Atom {
    pub beable: Beable,
    pub weight: f64,
}

/// Finite beable density `ρ(λ | settings, ψ)`. Atoms are kept sorted by id.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightedSupport {
    atoms: Vec<Atom>,
}

impl WeightedSupport {
    pub fn new(atoms: impl IntoIterator<Item = (Beable, f64)>) -> Result<WeightedSupport, Error> {
        let mut atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|(beable, weight)| Atom { beable, weight })
            .collect();
        if atoms.is_empty() {
            return Err(Error::MalformedModel("empty support".into()));
        }
        for a in &atoms {
            if !a.weight.is_finite() || a.weight < 0.0 {
                return Err(Error::MalformedModel(format!(
                    "atom {} has invalid weight {}",
                    a.beable.id, a.weight
                )));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::MalformedModel(format!("support weights sum to {total}")));
        }
        atoms.sort_by(|a, b| a.beable.id.cmp(&b.beable.id));
        if let Some(w) = atoms.windows(2).find(|w| w[0].beable.id == w[1].beable.id) {
            return Err(Error::MalformedModel(format!("duplicate atom id {}", w[0].beable.id)));
        }
        Ok(WeightedSupport { atoms })
    }

    pub fn single(beable: Beable) -> WeightedSupport {
        WeightedSupport {
            atoms: alloc::vec![Atom { beable, weight: 1.0 }],
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Same atoms (id and payload) with weights within `tol`.
    pub fn matches(&self, other: &WeightedSupport, tol: f64) -> bool {
        self.atoms.len() == other.atoms.len()
            && self
                .atoms
                .iter()
                .zip(other.atoms.iter())
                .all(|(a, b)| a.beable == b.beable && (a.weight - b.weight).abs() <= tol)
    }
}

/// Behavioral contract of an ontological model.
///
/// Implementations must be pure: the audit framework evaluates them
/// repeatedly and possibly from several threads.
pub trait OntologicalModel: Send + Sync {
    fn name(&self) -> String;

    /// `ρ(· | settings, ψ)`.
    fn support(&self, settings: &SettingTriple, psi: &PureState) -> Result<WeightedSupport, Error>;

    /// `P(α,β,γ | λ, settings, ψ)`.
    fn joint_response(
        &self,
        outcome: OutcomeTriple,
        beable: &Beable,
        settings: &SettingTriple,
        psi: &PureState,
    ) -> Result<f64, Error>;

    /// Whether [`party_response`](Self::party_response) is implemented and the
    /// joint response is claimed to be its product.
    fn declares_factorized(&self) -> bool {
        false
    }

    /// `P_j(α | λ, n_j, ψ)` for factorized models.
    fn party_response(
        &self,
        party: Party,
        outcome: Sign,
        beable: &Beable,
        setting: Setting,
        psi: &PureState,
    ) -> Result<f64, Error> {
        let _ = (party, outcome, beable, setting, psi);
        Err(Error::PreconditionFailed(format!(
            "model {} does not declare a factorized form",
            self.name()
        )))
    }
}

/// Product of the three party responses, for use by factorized models.
pub fn factorized_response<M: OntologicalModel + ?Sized>(
    model: &M,
    outcome: OutcomeTriple,
    beable: &Beable,
    settings: &SettingTriple,
    psi: &PureState,
) -> Result<f64, Error> {
    let mut p = 1.0;
    for party in Party::ALL {
        p *= model.party_response(party, outcome.get(party), beable, settings.setting(party), psi)?;
    }
    Ok(p)
}

fn check_probability(p: f64, what: impl FnOnce() -> String) -> Result<f64, Error> {
    if !p.is_finite() || !(-ALGEBRAIC_TOL..=1.0 + ALGEBRAIC_TOL).contains(&p) {
        return Err(Error::MalformedModel(format!("{} = {p} is not a probability", what())));
    }
    Ok(p)
}

/// Validated response distribution of one beable, indexed by outcome.
pub fn response_distribution<M: OntologicalModel + ?Sized>(
    model: &M,
    beable: &Beable,
    settings: &SettingTriple,
    psi: &PureState,
) -> Result<[f64; 8], Error> {
    let mut probs = [0.0; 8];
    for o in OutcomeTriple::all() {
        let p = model.joint_response(o, beable, settings, psi)?;
        probs[o.index()] = check_probability(p, || format!("response P({o} | {}, {settings})", beable.id))?;
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > SUM_TOL {
        return Err(Error::MalformedModel(format!(
            "responses at {} under {settings} sum to {total}",
            beable.id
        )));
    }
    Ok(probs)
}

fn mix<M: OntologicalModel + ?Sized>(
    model: &M,
    settings: &SettingTriple,
    psi: &PureState,
    response: impl Fn(&Beable) -> Result<[f64; 8], Error>,
) -> Result<JointDistribution, Error> {
    let support = model.support(settings, psi)?;
    let total = support.total_weight();
    if (total - 1.0).abs() > SUM_TOL {
        return Err(Error::MalformedModel(format!("support weights sum to {total}")));
    }
    let mut probs = [0.0; 8];
    for atom in support.atoms() {
        let r = response(&atom.beable)?;
        for (p, q) in probs.iter_mut().zip(r) {
            *p += atom.weight * q;
        }
    }
    JointDistribution::new(probs).map_err(|e| Error::MalformedModel(format!("{e}")))
}

/// Model prediction for one setting triple.
pub fn predict_joint<M: OntologicalModel + ?Sized>(
    model: &M,
    settings: &SettingTriple,
    psi: &PureState,
) -> Result<JointDistribution, Error> {
    mix(model, settings, psi, |b| response_distribution(model, b, settings, psi))
}

/// Prediction assembled from declared party responses instead of the joint
/// response.
pub fn predict_joint_factorized<M: OntologicalModel + ?Sized>(
    model: &M,
    settings: &SettingTriple,
    psi: &PureState,
) -> Result<JointDistribution, Error> {
    if !model.declares_factorized() {
        return Err(Error::PreconditionFailed(format!(
            "model {} does not declare a factorized form",
            model.name()
        )));
    }
    mix(model, settings, psi, |b| {
        let mut probs = [0.0; 8];
        for o in OutcomeTriple::all() {
            probs[o.index()] = factorized_response(model, o, b, settings, psi)?;
        }
        Ok(probs)
    })
}

/// Largest gap between the joint response and the product of declared
/// party responses over all supported atoms of `settings_list`.
pub fn declared_form_residual<M: OntologicalModel + ?Sized>(
    model: &M,
    settings_list: &[SettingTriple],
    psi: &PureState,
) -> Result<f64, Error> {
    let mut worst: f64 = 0.0;
    for s in settings_list {
        for atom in model.support(s, psi)?.atoms() {
            for o in OutcomeTriple::all() {
                let joint = model.joint_response(o, &atom.beable, s, psi)?;
                let product = factorized_response(model, o, &atom.beable, s, psi)?;
                worst = worst.max((joint - product).abs());
            }
        }
    }
    Ok(worst)
}

/// Marginals `(P_j(+), P_j(-))` of a response distribution, per party.
pub(crate) fn response_marginals(probs: &[f64; 8]) -> [[f64; 2]; 3] {
    let mut m = [[0.0; 2]; 3];
    for o in OutcomeTriple::all() {
        for party in Party::ALL {
            m[party.index()][o.get(party).bit()] += probs[o.index()];
        }
    }
    m
}
