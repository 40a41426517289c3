use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::local_response;
use crate::ontology::{factorized_response, Beable, OntologicalModel, WeightedSupport};
use crate::quantum::{normalize_angle, Basis, OutcomeTriple, Party, PureState, Setting, SettingTriple, Sign};
use crate::{Error, ALGEBRAIC_TOL};

/// `P_j(+1 | θ, basis)` for one party.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TableEntry {
    pub party: Party,
    pub basis: Basis,
    pub angle: f64,
    pub p_plus: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ResponseSpec {
    /// The cosine/sine local responses of [`local_response`].
    CosSin,
    Table(Vec<TableEntry>),
}

/// Support used for one setting triple.
#[derive(Debug, Clone, PartialEq)]
pub struct TriplePlan {
    pub settings: SettingTriple,
    pub support: WeightedSupport,
}

/// Factorized model given by explicit per-triple angle supports and a
/// response rule. Defined only on the listed triples.
#[derive(Debug, Clone, PartialEq)]
pub struct TableModel {
    name: String,
    plans: Vec<TriplePlan>,
    responses: ResponseSpec,
}

impl TableModel {
    pub fn new(name: impl Into<String>, plans: Vec<TriplePlan>, responses: ResponseSpec) -> Result<TableModel, Error> {
        if plans.is_empty() {
            return Err(Error::MalformedModel("no setting triples".into()));
        }
        for (i, p) in plans.iter().enumerate() {
            if p.settings.bases().is_none() {
                return Err(Error::MalformedModel(format!(
                    "settings_triples[{i}]: table models use x/y settings only, got {}",
                    p.settings
                )));
            }
            if plans[..i].iter().any(|q| q.settings == p.settings) {
                return Err(Error::MalformedModel(format!(
                    "settings_triples[{i}]: duplicate triple {}",
                    p.settings
                )));
            }
            if let Some(a) = p.support.atoms().iter().find(|a| a.beable.angle_triple().is_none()) {
                return Err(Error::MalformedModel(format!(
                    "settings_triples[{i}]: atom {} is not an angle triple",
                    a.beable.id
                )));
            }
        }
        if let ResponseSpec::Table(entries) = &responses {
            for (i, e) in entries.iter().enumerate() {
                if !(0.0..=1.0).contains(&e.p_plus) {
                    return Err(Error::MalformedModel(format!(
                        "response_table[{i}].p_plus = {} is not a probability",
                        e.p_plus
                    )));
                }
                if entries[..i]
                    .iter()
                    .any(|f| f.party == e.party && f.basis == e.basis && same_angle(f.angle, e.angle))
                {
                    return Err(Error::MalformedModel(format!("response_table[{i}]: duplicate entry")));
                }
            }
        }
        let model = TableModel {
            name: name.into(),
            plans,
            responses,
        };
        // Every supported atom must have a response under its own triple.
        for (i, p) in model.plans.iter().enumerate() {
            for a in p.support.atoms() {
                for party in Party::ALL {
                    model
                        .party_plus(party, &a.beable, p.settings.setting(party))
                        .map_err(|e| Error::MalformedModel(format!("settings_triples[{i}]: {e}")))?;
                }
            }
        }
        Ok(model)
    }

    pub fn plans(&self) -> &[TriplePlan] {
        &self.plans
    }

    pub fn responses(&self) -> &ResponseSpec {
        &self.responses
    }

    fn party_plus(&self, party: Party, beable: &Beable, setting: Setting) -> Result<f64, Error> {
        let basis = setting.basis().ok_or_else(|| {
            Error::UnsupportedSettings(format!("table responses need x or y, got angle {}", setting.phi()))
        })?;
        let theta = beable
            .angle_triple()
            .ok_or_else(|| Error::MalformedModel(format!("non-angle beable {}", beable.id)))?[party.index()];
        match &self.responses {
            ResponseSpec::CosSin => Ok(local_response(Sign::Plus, theta, basis)),
            ResponseSpec::Table(entries) => entries
                .iter()
                .find(|e| e.party == party && e.basis == basis && same_angle(e.angle, theta))
                .map(|e| e.p_plus)
                .ok_or_else(|| {
                    Error::UnsupportedSettings(format!(
                        "no response entry for party {} basis {} angle {theta}",
                        party.number(),
                        basis.symbol()
                    ))
                }),
        }
    }
}

fn same_angle(a: f64, b: f64) -> bool {
    (normalize_angle(a) - normalize_angle(b)).abs() <= ALGEBRAIC_TOL
}

impl OntologicalModel for TableModel {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn support(&self, settings: &SettingTriple, _psi: &PureState) -> Result<WeightedSupport, Error> {
        self.plans
            .iter()
            .find(|p| p.settings == *settings)
            .map(|p| p.support.clone())
            .ok_or_else(|| Error::UnsupportedSettings(format!("model {} does not define {settings}", self.name)))
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
        let p = self.party_plus(party, beable, setting)?;
        Ok(match outcome {
            Sign::Plus => p,
            Sign::Minus => 1.0 - p,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::superdet_support;
    use crate::ontology::predict_joint;
    use crate::quantum::{born_joint, canonical_triples, ghz_state};

    fn superdet_plans() -> Vec<TriplePlan> {
        canonical_triples()
            .into_iter()
            .map(|s| TriplePlan {
                settings: s,
                support: superdet_support(&s).unwrap(),
            })
            .collect()
    }

    #[test]
    fn cos_sin_table_model_matches_born() {
        let m = TableModel::new("copy", superdet_plans(), ResponseSpec::CosSin).unwrap();
        let g = ghz_state();
        for s in canonical_triples() {
            assert!(predict_joint(&m, &s, &g).unwrap().max_residual(&born_joint(&g, &s)) < 1e-12);
        }
        let yyy = SettingTriple::from_bases([Basis::Y; 3]);
        assert!(matches!(m.support(&yyy, &g), Err(Error::UnsupportedSettings(_))));
    }

    #[test]
    fn explicit_table_needs_coverage() {
        let plans = superdet_plans();
        let missing = TableModel::new("t", plans.clone(), ResponseSpec::Table(Vec::new()));
        assert!(matches!(missing, Err(Error::MalformedModel(_))));

        use core::f64::consts::{FRAC_PI_2, PI};
        let mut entries = Vec::new();
        for party in Party::ALL {
            for (basis, angles) in [
                (Basis::X, [0.0, PI, FRAC_PI_2, -FRAC_PI_2]),
                (Basis::Y, [0.0, PI, FRAC_PI_2, -FRAC_PI_2]),
            ] {
                for angle in angles {
                    entries.push(TableEntry {
                        party,
                        basis,
                        angle,
                        p_plus: local_response(Sign::Plus, angle, basis),
                    });
                }
            }
        }
        let m = TableModel::new("t", plans, ResponseSpec::Table(entries)).unwrap();
        let g = ghz_state();
        let s = canonical_triples()[2];
        assert!(predict_joint(&m, &s, &g).unwrap().max_residual(&born_joint(&g, &s)) < 1e-12);
    }

    #[test]
    fn rejects_bad_probabilities() {
        let entries = alloc::vec![TableEntry {
            party: Party::One,
            basis: Basis::X,
            angle: 0.0,
            p_plus: 1.5
        }];
        assert!(matches!(
            TableModel::new("t", superdet_plans(), ResponseSpec::Table(entries)),
            Err(Error::MalformedModel(_))
        ));
    }
}
