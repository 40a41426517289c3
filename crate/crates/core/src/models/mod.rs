//! Bundled ontological models.
//!
//! - [`BBModel`]: the quantum state itself as the only beable. Setting
//!   independent, not factorizable.
//! - [`SuperdetGhzModel`]: factorized local responses with setting-dependent
//!   angle densities, defined only on the four canonical triples.
//! - [`LocalDetModel`]: one fixed value assignment. Factorized and setting
//!   independent, and therefore unable to match the quantum predictions.
//! - [`TableModel`]: user-defined supports and responses.

mod bb;
mod localdet;
mod superdet;
mod table;

pub use bb::{beltrametti_bugajski, BBModel};
pub use localdet::{local_deterministic, LocalDetModel};
pub use superdet::{local_response, superdet_support, superdeterministic_ghz, SuperdetGhzModel};
pub use table::{ResponseSpec, TableEntry, TableModel, TriplePlan};

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::logic::ValueAssignment;
use crate::ontology::{AuditReport, OntologicalModel};
use crate::quantum::ghz_state;
use crate::Error;

/// Resolves the registered names `bb`, `superdet` and `localdet:<6 signs>`.
pub fn bundled(name: &str) -> Result<Box<dyn OntologicalModel>, Error> {
    match name {
        "bb" => Ok(Box::new(beltrametti_bugajski(ghz_state()))),
        "superdet" => Ok(Box::new(superdeterministic_ghz())),
        _ => match name.strip_prefix("localdet:") {
            Some(signs) => Ok(Box::new(local_deterministic(signs.parse::<ValueAssignment>()?))),
            None => Err(Error::Parse(format!(
                "unknown model {name:?}; expected bb, superdet or localdet:<6 signs>"
            ))),
        },
    }
}

/// Verdicts a bundled model is known to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedRow {
    pub factorizability: Option<bool>,
    pub setting_independence: Option<bool>,
    pub quantum_agreement: Option<bool>,
}

impl ExpectedRow {
    /// Expected row for a registered model name, `None` for user models.
    pub fn for_model(name: &str) -> Option<ExpectedRow> {
        match name {
            "bb" => Some(ExpectedRow {
                factorizability: Some(false),
                setting_independence: Some(true),
                quantum_agreement: Some(true),
            }),
            "superdet" => Some(ExpectedRow {
                factorizability: Some(true),
                setting_independence: Some(false),
                quantum_agreement: Some(true),
            }),
            n if n.starts_with("localdet:") => Some(ExpectedRow {
                factorizability: Some(true),
                setting_independence: Some(true),
                quantum_agreement: Some(false),
            }),
            _ => None,
        }
    }

    /// Names of checks whose verdict differs from the expectation.
    pub fn deviations(&self, report: &AuditReport) -> Vec<String> {
        let mut out = Vec::new();
        let checks = [
            ("factorizability", self.factorizability, report.factorizability.pass),
            (
                "setting_independence",
                self.setting_independence,
                report.setting_independence.pass,
            ),
            (
                "quantum_agreement",
                self.quantum_agreement,
                report.quantum_agreement.pass,
            ),
        ];
        for (name, expected, actual) in checks {
            if let Some(e) = expected {
                if e != actual {
                    out.push(format!("{name}: expected {}, got {}", pass_word(e), pass_word(actual)));
                }
            }
        }
        out
    }
}

fn pass_word(p: bool) -> &'static str {
    if p {
        "PASS"
    } else {
        "FAIL"
    }
}
