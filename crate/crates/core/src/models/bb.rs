use alloc::string::String;

use crate::ontology::{Beable, OntologicalModel, Payload, WeightedSupport};
use crate::quantum::{born_joint, OutcomeTriple, PureState, SettingTriple};
use crate::Error;

/// Ontic-state model: the single beable is the quantum state, with weight 1
/// for every setting, and the response is the Born rule evaluated on it.
///
/// Only the joint response is exposed; the factorizability audit has to
/// derive the party marginals itself.
#[derive(Debug, Clone, PartialEq)]
pub struct BBModel {
    pub psi: PureState,
}

pub fn beltrametti_bugajski(psi: PureState) -> BBModel {
    BBModel { psi }
}

impl OntologicalModel for BBModel {
    fn name(&self) -> String {
        "bb".into()
    }

    fn support(&self, _settings: &SettingTriple, _psi: &PureState) -> Result<WeightedSupport, Error> {
        Ok(WeightedSupport::single(Beable::state("psi", self.psi)))
    }

    fn joint_response(
        &self,
        outcome: OutcomeTriple,
        beable: &Beable,
        settings: &SettingTriple,
        _psi: &PureState,
    ) -> Result<f64, Error> {
        match &beable.payload {
            Payload::State(theta) => Ok(born_joint(theta, settings)[outcome]),
            Payload::Angles(_) => Err(Error::MalformedModel(alloc::format!(
                "bb model given angle beable {}",
                beable.id
            ))),
        }
    }
}
