use std::path::PathBuf;

use ghz_core::branch::{
    evolve, initial_state, relative_worlds, typicality_exact, typicality_monte_carlo, BranchState, MeasureKind, Stage,
    TypicalityResult,
};
use ghz_core::logic::enumerate_assignments;
use ghz_core::models::{bundled, ExpectedRow};
use ghz_core::ontology::{predict_joint, run_audit, OntologicalModel, Witness};
use ghz_core::quantum::{
    closed_form_residual, eigen_checks, equatorial_grid, ghz_state, OutcomeTriple, Party, SettingTriple,
};
use ghz_core::{ALGEBRAIC_TOL, SUM_TOL};
use serde_json::{json, Value};

use crate::model_file::load_model;
use crate::render::num;
use crate::{CliError, Output, Report, Table};

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    Ok(serde_json::to_value(v)?)
}

fn check_mark(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// `bb`, `superdet`, `localdet:<signs>` or `file:<path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSpec {
    Bundled(String),
    File(PathBuf),
}

impl ModelSpec {
    pub fn parse(s: &str) -> ModelSpec {
        match s.strip_prefix("file:") {
            Some(path) => ModelSpec::File(path.into()),
            None => ModelSpec::Bundled(s.into()),
        }
    }

    pub fn load(&self) -> Result<Box<dyn OntologicalModel>, CliError> {
        match self {
            ModelSpec::Bundled(name) => Ok(bundled(name)?),
            ModelSpec::File(path) => Ok(Box::new(load_model(path)?)),
        }
    }
}

pub fn parse_settings(s: &str) -> Result<SettingTriple, CliError> {
    Ok(s.parse()?)
}

pub fn parse_outcome(s: &str) -> Result<OutcomeTriple, CliError> {
    Ok(s.parse()?)
}

pub fn parse_observer(s: &str) -> Result<Party, CliError> {
    Party::ALL
        .into_iter()
        .find(|p| s.len() == 1 && s.starts_with(p.observer()))
        .ok_or_else(|| CliError::Usage(format!("unknown observer {s:?}; expected A, B or C")))
}

pub fn verify_ghz() -> Result<Output, CliError> {
    let checks = eigen_checks(&ghz_state());
    let grid = equatorial_grid();
    let grid_residual = closed_form_residual(&grid);
    let eigen_ok = |c: &ghz_core::quantum::EigenCheck| {
        c.residual < ALGEBRAIC_TOL && (c.eigenvalue - c.expected).abs() < ALGEBRAIC_TOL
    };
    let pass = checks.iter().all(eigen_ok) && grid_residual < ALGEBRAIC_TOL;

    let mut table = Table::new(&["check", "expected", "value", "residual", "pass"]);
    let mut text = Vec::new();
    for c in &checks {
        let op: String = c.operator.iter().map(|p| format!("{p:?}")).collect();
        table.push(vec![
            op.clone(),
            num(c.expected),
            num(c.eigenvalue),
            num(c.residual),
            check_mark(eigen_ok(c)).into(),
        ]);
        text.push(format!(
            "{op}: eigenvalue {} (expected {}), residual {}",
            num(c.eigenvalue),
            num(c.expected),
            num(c.residual)
        ));
    }
    let grid_ok = grid_residual < ALGEBRAIC_TOL;
    table.push(vec![
        "born_vs_closed_form".into(),
        "0".into(),
        num(grid_residual),
        num(grid_residual),
        check_mark(grid_ok).into(),
    ]);
    text.push(format!(
        "born vs closed form on {} grid points: max residual {}",
        grid.len(),
        num(grid_residual)
    ));

    let results = json!({
        "eigenvalues": checks.iter().map(|c| c.eigenvalue).collect::<Vec<_>>(),
        "eigen_checks": to_value(&checks)?,
        "grid_points": grid.len(),
        "grid_max_residual": grid_residual,
    });
    let report = Report::new("verify-ghz", json!({}), results, pass)
        .tolerance("eigen_residual", ALGEBRAIC_TOL)
        .tolerance("grid_residual", ALGEBRAIC_TOL);
    Ok(Output { report, table, text })
}

pub fn enumerate() -> Result<Output, CliError> {
    let summary = enumerate_assignments();
    let mut table = Table::new(&["code", "assignment", "xxx", "xyy", "yxy", "yyx", "a_product"]);
    for r in &summary.witnesses {
        let mut row = vec![r.code.to_string(), r.assignment.to_string()];
        row.extend(r.satisfied.iter().map(|s| s.to_string()));
        row.push(r.a_product.symbol().to_string());
        table.push(row);
    }
    let mut text = vec![
        format!("assignments: {}", summary.total),
        format!(
            "per constraint (xxx, xyy, yxy, yyx): {:?}",
            summary.per_constraint_counts
        ),
        format!("satisfying xyy, yxy, yyx jointly: {}", summary.joint_123_count),
        format!("satisfying all four: {}", summary.all_four_count),
    ];
    for r in summary.joint_123() {
        text.push(format!(
            "  {} (code {}): A1A2A3 = {}",
            r.assignment,
            r.code,
            r.a_product.symbol()
        ));
    }
    let pass = summary.all_four_count == 0;
    let report = Report::new("enumerate", json!({}), to_value(&summary)?, pass);
    Ok(Output { report, table, text })
}

fn witness_text(w: &Option<Witness>) -> Result<String, CliError> {
    Ok(match w {
        Some(w) => serde_json::to_string(w)?,
        None => String::new(),
    })
}

pub fn audit(spec: &str) -> Result<Output, CliError> {
    let parsed = ModelSpec::parse(spec);
    let model = parsed.load()?;
    let report = run_audit(model.as_ref(), &ghz_state())?;
    let deviations = match &parsed {
        ModelSpec::Bundled(name) => ExpectedRow::for_model(name)
            .map(|e| e.deviations(&report))
            .unwrap_or_default(),
        ModelSpec::File(_) => Vec::new(),
    };
    let pass = report.meta_theorem_holds && deviations.is_empty();

    let mut table = Table::new(&[
        "check",
        "pass",
        "max_residual",
        "tolerance",
        "skipped",
        "counterexample",
    ]);
    let mut text = vec![format!("model: {}", report.model_name)];
    for (name, v) in report.verdicts() {
        table.push(vec![
            name.into(),
            v.pass.to_string(),
            num(v.max_residual),
            num(v.tolerance),
            v.skipped.len().to_string(),
            witness_text(&v.counterexample)?,
        ]);
        text.push(format!(
            "{name}: {} (max residual {})",
            check_mark(v.pass),
            num(v.max_residual)
        ));
    }
    text.push(format!("bell locality: {}", report.bell_locality));
    text.push(format!("meta-theorem holds: {}", report.meta_theorem_holds));
    for d in &deviations {
        text.push(format!("deviation from expected row: {d}"));
    }

    let mut results = to_value(&report)?;
    results["expected_deviations"] = to_value(&deviations)?;
    let report = Report::new("audit", json!({ "model": spec }), results, pass)
        .tolerance("audit", report.tolerances.audit)
        .tolerance("degenerate_conditional", report.tolerances.degenerate_conditional);
    Ok(Output { report, table, text })
}

pub fn predict(spec: &str, settings: &str) -> Result<Output, CliError> {
    let model = ModelSpec::parse(spec).load()?;
    let s = parse_settings(settings)?;
    let dist = predict_joint(model.as_ref(), &s, &ghz_state())?;
    let mut table = Table::new(&["outcome", "probability"]);
    let mut text = vec![format!("model: {}", model.name()), format!("settings: {s}")];
    let mut rows = Vec::new();
    for (o, p) in OutcomeTriple::all().into_iter().zip(dist.clamped()) {
        table.push(vec![o.label(), num(p)]);
        text.push(format!("P({}) = {}", o.label(), num(p)));
        rows.push(json!({ "outcome": o.label(), "probability": p }));
    }
    let results = json!({ "model_name": model.name(), "settings": s.label(), "distribution": rows });
    let report = Report::new("predict", json!({ "model": spec, "settings": settings }), results, true)
        .tolerance("normalization", SUM_TOL);
    Ok(Output { report, table, text })
}

pub fn branches(settings: &str, stage: &str, observer: Option<&str>) -> Result<Output, CliError> {
    let s = parse_settings(settings)?;
    let st = Stage::parse(stage)?;
    let observer = observer.map(parse_observer).transpose()?;
    let state: BranchState = match st {
        Stage::T0 => initial_state(),
        Stage::T1 => evolve(&s)?.0,
        Stage::T2 => evolve(&s)?.1,
    };
    let mut text = vec![format!("settings: {s}"), format!("stage: {stage}")];
    let mut results = json!({ "settings": s.label(), "stage": st, "terms": to_value(&state.terms())? });
    let table = match observer {
        Some(p) => {
            let worlds = relative_worlds(&state, p);
            let mut t = Table::new(&["observer", "record", "weight"]);
            text.push(format!(
                "relative worlds of observer {}: {}",
                p.observer(),
                worlds.len()
            ));
            for w in &worlds {
                t.push(vec![p.observer().to_string(), w.record.clone(), num(w.weight)]);
                text.push(format!("  {} weight {}", w.record, num(w.weight)));
            }
            results["observer"] = json!(p.observer().to_string());
            results["relative_worlds"] = to_value(&worlds)?;
            t
        }
        None => {
            let mut t = Table::new(&[
                "record_a", "record_b", "record_c", "shared", "outcome", "amp_re", "amp_im", "weight",
            ]);
            text.push(format!("terms: {}", state.terms().len()));
            for term in state.terms() {
                let outcome = term.outcome.map(OutcomeTriple::label).unwrap_or_default();
                let shared = term.shared.clone().unwrap_or_default();
                t.push(vec![
                    term.records[0].clone(),
                    term.records[1].clone(),
                    term.records[2].clone(),
                    shared.clone(),
                    outcome,
                    num(term.amplitude.re),
                    num(term.amplitude.im),
                    num(term.weight()),
                ]);
                let label = if shared.is_empty() {
                    term.records.join(" ")
                } else {
                    shared
                };
                text.push(format!("  {label} weight {}", num(term.weight())));
            }
            t
        }
    };
    let inputs =
        json!({ "settings": settings, "stage": stage, "observer": observer.map(|p| p.observer().to_string()) });
    let report = Report::new("branches", inputs, results, true).tolerance("weight_sum", SUM_TOL);
    Ok(Output { report, table, text })
}

/// Parameters of the two typicality forms.
#[derive(Debug, Clone, PartialEq)]
pub enum TypicalityParams {
    Exact {
        p: f64,
        n: u64,
        eps: f64,
    },
    MonteCarlo {
        settings: String,
        outcome: String,
        n: u64,
        eps: f64,
        measure: MeasureKind,
        seed: u64,
    },
}

pub fn typicality(params: &TypicalityParams) -> Result<Output, CliError> {
    let (inputs, r): (Value, TypicalityResult) = match params {
        TypicalityParams::Exact { p, n, eps } => (
            json!({ "p": p, "n": n, "eps": eps, "exact": true }),
            typicality_exact(*p, *n, *eps)?,
        ),
        TypicalityParams::MonteCarlo {
            settings,
            outcome,
            n,
            eps,
            measure,
            seed,
        } => {
            let s = parse_settings(settings)?;
            let o = parse_outcome(outcome)?;
            let inputs = json!({
                "settings": settings, "outcome": outcome, "n": n, "eps": eps,
                "measure": measure, "seed": seed, "exact": false,
            });
            (inputs, typicality_monte_carlo(&s, o, *n, *eps, *measure, *seed)?)
        }
    };
    let fields: Vec<(&str, String)> = vec![
        ("method", format!("{:?}", r.method)),
        ("measure_kind", format!("{:?}", r.measure_kind)),
        ("n", r.n.to_string()),
        ("epsilon", num(r.epsilon)),
        ("reference", num(r.reference)),
        ("measure_of_deviation_set", num(r.measure_of_deviation_set)),
        (
            "ln_measure_of_deviation_set",
            r.ln_measure_of_deviation_set.map(num).unwrap_or_default(),
        ),
        (
            "empirical_frequency",
            r.empirical_frequency.map(num).unwrap_or_default(),
        ),
        ("tracked", r.tracked.map(OutcomeTriple::label).unwrap_or_default()),
        ("seed", r.seed.map(|x| x.to_string()).unwrap_or_default()),
        ("generator", r.generator.clone().unwrap_or_default()),
    ];
    let mut table = Table::new(&["field", "value"]);
    let mut text = Vec::new();
    for (k, v) in fields {
        if !v.is_empty() {
            text.push(format!("{k}: {v}"));
        }
        table.push(vec![k.into(), v]);
    }
    let report = Report::new("typicality", inputs, to_value(&r)?, true);
    Ok(Output { report, table, text })
}
