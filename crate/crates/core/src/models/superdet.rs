use core::f64::consts::{FRAC_PI_2, PI};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::logic::parity_target;
use crate::ontology::{factorized_response, Beable, OntologicalModel, WeightedSupport};
use crate::quantum::{Basis, OutcomeTriple, Party, PureState, Setting, SettingTriple, Sign};
use crate::Error;

/// `P_j(α | θ_j, n_j) = (1 + α cos θ_j)/2` for x̂ and `(1 + α sin θ_j)/2` for ŷ.
pub fn local_response(alpha: Sign, theta: f64, basis: Basis) -> f64 {
    let proj = match basis {
        Basis::X => libm::cos(theta),
        Basis::Y => libm::sin(theta),
    };
    (1.0 + alpha.value() * proj) / 2.0
}

/// Angle of the unit vector `v · n̂` for `n̂ ∈ {x̂, ŷ}`: `+x̂ ↦ 0`, `-x̂ ↦ π`,
/// `+ŷ ↦ π/2`, `-ŷ ↦ -π/2`.
fn direction_angle(v: Sign, basis: Basis) -> f64 {
    match (basis, v) {
        (Basis::X, Sign::Plus) => 0.0,
        (Basis::X, Sign::Minus) => PI,
        (Basis::Y, Sign::Plus) => FRAC_PI_2,
        (Basis::Y, Sign::Minus) => -FRAC_PI_2,
    }
}

fn canonical_bases(settings: &SettingTriple) -> Result<[Basis; 3], Error> {
    settings.bases().filter(|b| parity_target(*b).is_some()).ok_or_else(|| {
        Error::UnsupportedSettings(format!(
            "superdeterministic model is defined only on xxx, xyy, yxy, yyx (got {settings})"
        ))
    })
}

/// Four atoms of weight 1/4: the sign triples `(v1, v2, v3)` whose product is
/// the triple's GHZ parity, each mapped to its direction angles.
pub fn superdet_support(settings: &SettingTriple) -> Result<WeightedSupport, Error> {
    let bases = canonical_bases(settings)?;
    let target = parity_target(bases).expect("canonical");
    let atoms: Vec<(Beable, f64)> = OutcomeTriple::all()
        .into_iter()
        .filter(|v| v.parity() == target)
        .map(|v| {
            let theta = [
                direction_angle(v.a, bases[0]),
                direction_angle(v.b, bases[1]),
                direction_angle(v.c, bases[2]),
            ];
            (Beable::angles(theta), 0.25)
        })
        .collect();
    WeightedSupport::new(atoms)
}

/// Factorized local responses over setting-dependent angle densities.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SuperdetGhzModel;

pub fn superdeterministic_ghz() -> SuperdetGhzModel {
    SuperdetGhzModel
}

impl OntologicalModel for SuperdetGhzModel {
    fn name(&self) -> String {
        "superdet".into()
    }

    fn support(&self, settings: &SettingTriple, _psi: &PureState) -> Result<WeightedSupport, Error> {
        superdet_support(settings)
    }

    fn joint_response(
        &self,
        outcome: OutcomeTriple,
        beable: &Beable,
        settings: &SettingTriple,
        psi: &PureState,
    ) -> Result<f64, Error> {
        canonical_bases(settings)?;
        factorized_response(self, outcome, beable, settings, psi)
    }

    fn declares_factorized(&self) -> bool {
        true
    }

    fn party_response(
        &self,
        party: Party,
        outcome: Sign,
        beable: &Beable,
        setting: Setting,
        _psi: &PureState,
    ) -> Result<f64, Error> {
        let basis = setting.basis().ok_or_else(|| {
            Error::UnsupportedSettings(format!("local response needs x or y, got angle {}", setting.phi()))
        })?;
        let theta = beable
            .angle_triple()
            .ok_or_else(|| Error::MalformedModel(format!("superdet model given non-angle beable {}", beable.id)))?;
        Ok(local_response(outcome, theta[party.index()], basis))
    }
}
