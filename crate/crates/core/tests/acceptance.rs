//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;

use ghz_core::branch::{evolve, relative_worlds, typicality_exact, typicality_monte_carlo, MeasureKind};
use ghz_core::logic::{enumerate_assignments, ValueAssignment};
use ghz_core::models::{bundled, superdeterministic_ghz, ExpectedRow};
use ghz_core::ontology::{derive_determinism, predict_joint, run_audit};
use ghz_core::quantum::*;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eigen_identities() -> Check {
    use Pauli::{X, Y};
    let g = ghz_state();
    for (axes, lambda) in [([X, X, X], -1.0), ([X, Y, Y], 1.0), ([Y, X, Y], 1.0), ([Y, Y, X], 1.0)] {
        let out = apply_pauli_product(&g, axes);
        let res = (0..8)
            .map(|k| (out.amps()[k] - g.amps()[k] * lambda).norm())
            .fold(0.0, f64::max);
        ensure(res < 1e-12, || format!("{axes:?}: residual {res:e}"))?;
    }
    Ok(())
}

fn impossibility() -> Check {
    let s = enumerate_assignments();
    ensure(s.total == 64, || format!("{} assignments", s.total))?;
    ensure(s.all_four_count == 0, || {
        format!("{} satisfy all four", s.all_four_count)
    })?;
    ensure(s.joint_123_count == 8, || {
        format!("{} satisfy the +1 constraints", s.joint_123_count)
    })?;
    let even = s.joint_123().all(|r| r.a_product == Sign::Plus);
    ensure(even, || "A1A2A3 = -1 in the +1 set".into())
}

fn superdet_fidelity() -> Check {
    let g = ghz_state();
    let m = superdeterministic_ghz();
    for s in canonical_triples() {
        let r = predict_joint(&m, &s, &g)
            .map_err(|e| e.to_string())?
            .max_residual(&born_joint(&g, &s));
        ensure(r < 1e-12, || format!("{s}: residual {r:e}"))?;
    }
    Ok(())
}

fn bundled_names() -> Vec<String> {
    let mut names = vec!["bb".to_string(), "superdet".to_string()];
    names.extend(ValueAssignment::all().map(|v| format!("localdet:{v}")));
    names
}

fn audit_matrix() -> Check {
    let g = ghz_state();
    for name in bundled_names() {
        let model = bundled(&name).map_err(|e| e.to_string())?;
        let report = run_audit(model.as_ref(), &g).map_err(|e| e.to_string())?;
        let dev = ExpectedRow::for_model(&name)
            .ok_or("no expected row")?
            .deviations(&report);
        ensure(dev.is_empty(), || format!("{name}: {}", dev.join("; ")))?;
    }
    Ok(())
}

fn meta_theorem() -> Check {
    let g = ghz_state();
    for name in bundled_names() {
        let model = bundled(&name).map_err(|e| e.to_string())?;
        let r = run_audit(model.as_ref(), &g).map_err(|e| e.to_string())?;
        let holds = !r.quantum_agreement.pass || !r.factorizability.pass || !r.setting_independence.pass;
        ensure(holds && r.meta_theorem_holds, || format!("{name}: all three pass"))?;
    }
    Ok(())
}

fn determinism() -> Check {
    let r = derive_determinism(&superdeterministic_ghz(), &ghz_state()).map_err(|e| e.to_string())?;
    ensure(r.rows.len() == 16, || format!("{} atoms", r.rows.len()))?;
    for row in &r.rows {
        for (p, m) in row.responses {
            let binary = |x: f64| x.abs() < 1e-9 || (x - 1.0).abs() < 1e-9;
            ensure(binary(p) && binary(m), || {
                format!("{} {}: response ({p}, {m})", row.settings, row.atom)
            })?;
        }
        let signs: Vec<Option<Sign>> = row.values.iter().map(|v| Sign::from_value(*v, 1e-9)).collect();
        ensure(signs.iter().all(Option::is_some), || {
            format!("{} {}: values {:?}", row.settings, row.atom, row.values)
        })?;
        let parity = signs.iter().flatten().fold(Sign::Plus, |a, s| a * *s);
        ensure(parity == row.parity_target, || {
            format!("{} {}: parity {parity}", row.settings, row.atom)
        })?;
    }
    ensure(r.verdict.pass, || "derivation verdict failed".into())
}

fn nonsignaling() -> Check {
    let g = ghz_state();
    let axes = [Pauli::X, Pauli::Y, Pauli::Z];
    for a in Party::ALL {
        for b in Party::ALL.into_iter().filter(|b| *b != a) {
            for pa in axes {
                for pb in axes {
                    for k in 0..9 {
                        let dt = -2.0 + 0.5 * k as f64;
                        let r = commuting_mean_invariance(&g, a, pa, b, pb, dt);
                        ensure(r < 1e-12, || format!("{a:?}{pa:?} vs {b:?}{pb:?} dt={dt}: {r:e}"))?;
                    }
                }
            }
        }
    }
    for s in canonical_triples() {
        let d = born_joint(&g, &s);
        for p in Party::ALL {
            let (plus, minus) = marginal(&d, p);
            ensure((plus - 0.5).abs() < 1e-9 && (minus - 0.5).abs() < 1e-9, || {
                format!("{s} party {}: ({plus}, {minus})", p.number())
            })?;
        }
    }
    Ok(())
}

fn branches() -> Check {
    for (s, target) in canonical_triples()
        .into_iter()
        .zip([Sign::Minus, Sign::Plus, Sign::Plus, Sign::Plus])
    {
        let (t1, t2) = evolve(&s).map_err(|e| e.to_string())?;
        ensure(t2.terms().len() == 4, || {
            format!("{s}: {} worlds at t2", t2.terms().len())
        })?;
        for t in t2.terms() {
            ensure((t.weight() - 0.25).abs() < 1e-12, || {
                format!("{s}: weight {}", t.weight())
            })?;
            let parity = t.outcome.map(OutcomeTriple::parity);
            ensure(parity == Some(target), || format!("{s}: parity {parity:?}"))?;
        }
        for p in Party::ALL {
            let worlds = relative_worlds(&t1, p);
            ensure(worlds.len() == 2, || {
                format!("{s}: observer {} has {} worlds", p.observer(), worlds.len())
            })?;
            for w in worlds {
                ensure((w.weight - 0.5).abs() < 1e-12, || {
                    format!("{s}: {} weight {}", w.record, w.weight)
                })?;
            }
        }
    }
    Ok(())
}

/// Empirical frequency of `++-` under xxx, seed 42, n = 10⁴.
const RECORDED_FREQUENCY: f64 = 0.2538;

fn weak_law() -> Check {
    let mut prev = f64::INFINITY;
    for n in [10, 100, 1000, 10_000] {
        let m = typicality_exact(0.5, n, 0.1)
            .map_err(|e| e.to_string())?
            .measure_of_deviation_set;
        ensure(m < prev, || format!("n={n}: {m:e} does not decrease from {prev:e}"))?;
        prev = m;
    }
    ensure(prev < 1e-3, || format!("n=10000: {prev:e}"))?;
    let xxx = canonical_triples()[0];
    let o: OutcomeTriple = "++-".parse().map_err(|e: ghz_core::Error| e.to_string())?;
    let run = || typicality_monte_carlo(&xxx, o, 10_000, 0.1, MeasureKind::Born, 42).map(|r| r.empirical_frequency);
    let first = run().map_err(|e| e.to_string())?.ok_or("no frequency")?;
    let second = run().map_err(|e| e.to_string())?.ok_or("no frequency")?;
    ensure(first.to_bits() == second.to_bits(), || format!("{first} then {second}"))?;
    ensure(first.to_bits() == RECORDED_FREQUENCY.to_bits(), || {
        format!("{first} vs recorded {RECORDED_FREQUENCY}")
    })
}

fn oracle_equivalence() -> Check {
    let g = ghz_state();
    let angles = [
        0.0,
        core::f64::consts::FRAC_PI_2,
        core::f64::consts::PI,
        -core::f64::consts::FRAC_PI_2,
    ];
    let mut count = 0;
    for a in angles {
        for b in angles {
            for c in angles {
                let s = SettingTriple::from_angles([a, b, c]).map_err(|e| e.to_string())?;
                let r = born_joint(&g, &s).max_residual(&closed_form_ghz(&s));
                ensure(r < 1e-12, || format!("{s}: residual {r:e}"))?;
                count += 1;
            }
        }
    }
    ensure(count == 64, || format!("{count} grid points"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("eigen-identities", eigen_identities),
        ("ghz-impossibility", impossibility),
        ("superdet-fidelity", superdet_fidelity),
        ("audit-matrix", audit_matrix),
        ("meta-theorem", meta_theorem),
        ("determinism-derivation", determinism),
        ("non-signaling", nonsignaling),
        ("branch-structure", branches),
        ("weak-law", weak_law),
        ("oracle-equivalence", oracle_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("[PASS] {} {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
