//! Declarative model documents.
//!
//! ```json
//! {
//!   "name": "my-model",
//!   "settings_triples": [
//!     { "settings": "xxx", "atoms": [ { "angles": [0, 0, "pi"], "weight": 0.25 } ] }
//!   ],
//!   "response_family": "eq43"
//! }
//! ```
//!
//! Instead of `response_family`, a `response_table` lists
//! `{ "party": 1, "basis": "x", "angle": "pi/2", "p_plus": 0.5 }` entries.

use std::path::Path;

use ghz_core::models::{ResponseSpec, TableEntry, TableModel, TriplePlan};
use ghz_core::ontology::{Beable, WeightedSupport};
use ghz_core::quantum::{parse_angle, Basis, Party, SettingTriple};
use serde::Deserialize;

use crate::CliError;

/// Accepted value of `response_family`.
pub const COS_SIN_FAMILY: &str = "eq43";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: Option<String>,
    settings_triples: Vec<RawTriple>,
    response_family: Option<String>,
    response_table: Option<Vec<RawEntry>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTriple {
    settings: String,
    atoms: Vec<RawAtom>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    angles: Vec<RawAngle>,
    weight: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawAngle {
    Number(f64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    party: usize,
    basis: String,
    angle: RawAngle,
    p_plus: f64,
}

pub fn load_model(path: &Path) -> Result<TableModel, CliError> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: label.clone(),
        source,
    })?;
    let default_name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_model(&text, &label, &default_name)
}

pub fn parse_model(text: &str, path: &str, default_name: &str) -> Result<TableModel, CliError> {
    let raw: RawModel = serde_json::from_str(text).map_err(|e| CliError::Syntax {
        path: path.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let field = |field: String, message: String| CliError::Field {
        path: path.into(),
        field,
        message,
    };

    let mut plans = Vec::with_capacity(raw.settings_triples.len());
    for (i, t) in raw.settings_triples.iter().enumerate() {
        let settings: SettingTriple = t
            .settings
            .parse()
            .map_err(|e: ghz_core::Error| field(format!("settings_triples[{i}].settings"), e.to_string()))?;
        let mut atoms = Vec::with_capacity(t.atoms.len());
        for (k, a) in t.atoms.iter().enumerate() {
            let at = format!("settings_triples[{i}].atoms[{k}]");
            if a.angles.len() != 3 {
                return Err(field(
                    format!("{at}.angles"),
                    format!("expected 3 angles, got {}", a.angles.len()),
                ));
            }
            let mut theta = [0.0; 3];
            for (j, v) in a.angles.iter().enumerate() {
                theta[j] = angle(v).map_err(|m| field(format!("{at}.angles[{j}]"), m))?;
            }
            atoms.push((Beable::angles(theta), a.weight));
        }
        let support =
            WeightedSupport::new(atoms).map_err(|e| field(format!("settings_triples[{i}].atoms"), e.to_string()))?;
        plans.push(TriplePlan { settings, support });
    }

    let responses = match (&raw.response_family, &raw.response_table) {
        (Some(f), None) if f == COS_SIN_FAMILY => ResponseSpec::CosSin,
        (Some(f), None) => {
            return Err(field(
                "response_family".into(),
                format!("unknown family {f:?}; expected {COS_SIN_FAMILY:?}"),
            ))
        }
        (None, Some(entries)) => {
            let mut table = Vec::with_capacity(entries.len());
            for (i, e) in entries.iter().enumerate() {
                let at = format!("response_table[{i}]");
                let party = e
                    .party
                    .checked_sub(1)
                    .and_then(Party::from_index)
                    .ok_or_else(|| field(format!("{at}.party"), format!("expected 1, 2 or 3, got {}", e.party)))?;
                let mut chars = e.basis.chars();
                let basis = match (chars.next().and_then(Basis::from_symbol), chars.next()) {
                    (Some(b), None) => b,
                    _ => {
                        return Err(field(
                            format!("{at}.basis"),
                            format!("expected \"x\" or \"y\", got {:?}", e.basis),
                        ))
                    }
                };
                let angle = angle(&e.angle).map_err(|m| field(format!("{at}.angle"), m))?;
                table.push(TableEntry {
                    party,
                    basis,
                    angle,
                    p_plus: e.p_plus,
                });
            }
            ResponseSpec::Table(table)
        }
        _ => {
            return Err(field(
                "response_family".into(),
                "exactly one of response_family or response_table is required".into(),
            ))
        }
    };

    let name = raw.name.unwrap_or_else(|| default_name.to_string());
    TableModel::new(name, plans, responses).map_err(|e| match e {
        ghz_core::Error::MalformedModel(msg) => match msg.split_once(": ") {
            Some((f, m)) if f.starts_with("settings_triples[") || f.starts_with("response_table[") => {
                field(f.into(), m.into())
            }
            _ => field("model".into(), msg),
        },
        other => CliError::Core(other),
    })
}

fn angle(v: &RawAngle) -> Result<f64, String> {
    match v {
        RawAngle::Number(x) => Ok(*x),
        RawAngle::Text(s) => parse_angle(s).map_err(|e| e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghz_core::ontology::OntologicalModel;

    #[test]
    fn reports_syntax_position() {
        let err = parse_model("{\n  \"name\": \"x\",\n  oops\n}", "m.json", "m")
            .err()
            .unwrap();
        match err {
            CliError::Syntax { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn reports_field_path() {
        let doc = r#"{"settings_triples":[{"settings":"xxx","atoms":[{"angles":[0,0],"weight":1}]}],"response_family":"eq43"}"#;
        let err = parse_model(doc, "m.json", "m").err().unwrap().to_string();
        assert!(err.contains("settings_triples[0].atoms[0].angles"), "{err}");
    }

    #[test]
    fn parses_table_model() {
        let doc = r#"{"name":"t","settings_triples":[{"settings":"xxx","atoms":[{"angles":["pi",0,0],"weight":1}]}],
            "response_table":[{"party":1,"basis":"x","angle":"pi","p_plus":0},
                              {"party":2,"basis":"x","angle":0,"p_plus":1},
                              {"party":3,"basis":"x","angle":0,"p_plus":1}]}"#;
        let m = parse_model(doc, "m.json", "m").unwrap();
        assert_eq!(m.name(), "t");
    }
}
