use core::f64::consts::FRAC_PI_4;

use alloc::format;
use alloc::string::String;

use crate::logic::ValueAssignment;
use crate::ontology::{factorized_response, Beable, OntologicalModel, WeightedSupport};
use crate::quantum::{Basis, OutcomeTriple, Party, PureState, Setting, SettingTriple, Sign};
use crate::Error;

/// Local deterministic strawman built from one value assignment.
///
/// The single beable encodes `(A_j, B_j)` as the angle of the point
/// `(A_j, B_j)` on the circle, i.e. one of `±π/4, ±3π/4`; responses read the
/// signs of its cosine and sine back out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalDetModel {
    pub assignment: ValueAssignment,
}

pub fn local_deterministic(v: ValueAssignment) -> LocalDetModel {
    LocalDetModel { assignment: v }
}

fn encode(a: Sign, b: Sign) -> f64 {
    match (a, b) {
        (Sign::Plus, Sign::Plus) => FRAC_PI_4,
        (Sign::Minus, Sign::Plus) => 3.0 * FRAC_PI_4,
        (Sign::Minus, Sign::Minus) => -3.0 * FRAC_PI_4,
        (Sign::Plus, Sign::Minus) => -FRAC_PI_4,
    }
}

fn decode(theta: f64, basis: Basis) -> Sign {
    let proj = match basis {
        Basis::X => libm::cos(theta),
        Basis::Y => libm::sin(theta),
    };
    if proj >= 0.0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

impl LocalDetModel {
    pub fn beable(&self) -> Beable {
        let v = &self.assignment;
        Beable::angles(core::array::from_fn(|j| encode(v.a[j], v.b[j])))
    }
}

impl OntologicalModel for LocalDetModel {
    fn name(&self) -> String {
        format!("localdet:{}", self.assignment)
    }

    fn support(&self, _settings: &SettingTriple, _psi: &PureState) -> Result<WeightedSupport, Error> {
        Ok(WeightedSupport::single(self.beable()))
    }

    fn joint_response(
        &self,
        outcome: OutcomeTriple,
        beable: &Beable,
        settings: &SettingTriple,
        psi: &PureState,
    ) -> Result<f64, Error> {
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
            Error::UnsupportedSettings(format!(
                "value assignments cover only x and y, got angle {}",
                setting.phi()
            ))
        })?;
        let theta = beable
            .angle_triple()
            .ok_or_else(|| Error::MalformedModel(format!("localdet model given non-angle beable {}", beable.id)))?;
        Ok(if decode(theta[party.index()], basis) == outcome {
            1.0
        } else {
            0.0
        })
    }
}
