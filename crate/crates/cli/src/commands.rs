//! Subcommand bodies. Each builds the effective configuration (hashed into
//! the manifest), runs the computation and fills a report.

use crate::report::{Report, RunManifest};
use crate::{BilinearArgs, ClassifyArgs, CliError, Outcome, ResonanceArgs, SharpnessArgs, SimulateArgs, SystemKind};
use ckdv_core::classifier::{classify_with_tol, required_estimates, RRegion};
use ckdv_core::quadrature::{coupling_growth, coupling_supremum, lemma_suite, SearchDomain};
use ckdv_core::rational::{render, to_f64};
use ckdv_core::resonance::{char_quadratic, coercivity, identity_sweep};
use ckdv_core::selftest::run_all;
use ckdv_core::sharpness::{fit_growth, necessary_conditions};
use ckdv_core::spectral::{packet_growth, packet_sweep, simulate as run_simulation, SimulationConfig};
use ckdv_core::system::SystemDocument;
use ckdv_core::{
    bilinear_critical, classify_named, trouble_diagnosis, BilinearQuery, DiagonalSystem, EstimateType, NamedSystem,
    PhaseFunction, Verdict,
};
use serde_json::{json, Value};

const IDENTITY_TOL: f64 = 1e-9;
const SHARPNESS_TOL: f64 = 0.1;
const BILINEAR_TOL: f64 = 0.15;
/// Fitted exponents this close to zero count as a flat ratio.
const FLAT_TOL: f64 = 0.1;

fn required(value: Option<f64>, flag: &str, system: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--system {system} needs --{flag}")))
}

fn system_document(a: &ClassifyArgs) -> Result<SystemDocument, CliError> {
    if let Some(path) = &a.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        return serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad system document {}: {e}", path.display())));
    }
    let kind = a.system.ok_or_else(|| CliError::Usage("classify needs --system or --config".into()))?;
    let named = match kind {
        SystemKind::Mb => NamedSystem::MajdaBiello { a2: required(a.a2, "a2", "mb")? },
        SystemKind::Hs => NamedSystem::HirotaSatsuma { a1: required(a.a1, "a1", "hs")?, c12: required(a.c12, "c12", "hs")? },
        SystemKind::Gg => NamedSystem::GearGrimshaw {
            rho1: required(a.rho1, "rho1", "gg")?,
            rho2: required(a.rho2, "rho2", "gg")?,
            sigma1: a.sigma1.unwrap_or(0.0),
            sigma2: a.sigma2.unwrap_or(0.0),
            sigma3: required(a.sigma3, "sigma3", "gg")?,
            sigma4: a.sigma4.unwrap_or(0.0),
        },
        SystemKind::Bcs => NamedSystem::BonaChenSaut,
        SystemKind::Diagonal => return diagonal_document(a),
    };
    Ok(SystemDocument::from_named(named))
}

fn diagonal_document(a: &ClassifyArgs) -> Result<SystemDocument, CliError> {
    let mut map = serde_json::Map::new();
    map.insert("a1".into(), json!(a.a1.unwrap_or(1.0)));
    map.insert("a2".into(), json!(required(a.a2, "a2", "diagonal")?));
    let names: Vec<&str> = DiagonalSystem::default().coefficients().iter().map(|c| c.0).collect();
    for (name, value) in &a.coefs {
        if !names.contains(&name.as_str()) || name == "a1" || name == "a2" {
            return Err(CliError::Usage(format!("unknown coefficient `{name}` (use --a1/--a2 for dispersion)")));
        }
        map.insert(name.clone(), json!(value));
    }
    let sys: DiagonalSystem = serde_json::from_value(Value::Object(map)).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(SystemDocument::from_diagonal(sys))
}

fn verdict_row(label: &str, v: &Verdict) -> Vec<Value> {
    vec![json!(label), json!(v.case_id), json!(v.range_text()), json!(v.classification_basis)]
}

pub fn classify(a: &ClassifyArgs) -> Result<Outcome, CliError> {
    let doc = system_document(a)?;
    let (diag, basis) = doc.resolve(a.tol)?;
    let r = diag.a2 / diag.a1;
    let (lwp, gwp) = match &doc.named {
        Some(named) => {
            let (l, g) = classify_named(named, a.tol)?;
            (l, Some(g))
        }
        None => (classify_with_tol(&diag, a.tol)?, None),
    };
    let mut warnings = diag.near_pattern_boundary(1e-6);
    if RRegion::near_boundary(r, 1e-6) {
        warnings.push(format!("dispersion ratio {r} is close to a region boundary"));
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let config = json!({ "system": doc, "tol": a.tol });
    let summary = json!({
        "system": doc,
        "diagonal": diag,
        "change_of_basis": basis,
        "dispersion_ratio": r,
        "required_estimates": required_estimates(&diag),
        "lwp": lwp,
        "gwp": gwp,
        "warnings": warnings,
    });
    let mut report =
        Report::new("classify", RunManifest::new("classify", &config), summary, &["result", "case", "range", "basis"]);
    report.row(verdict_row("LWP", &lwp));
    if let Some(g) = &gwp {
        report.row(verdict_row("GWP", g));
    }
    Ok(Outcome { report, pass: true })
}

pub fn resonance(a: &ResonanceArgs) -> Result<Outcome, CliError> {
    let p1 = PhaseFunction::new(a.a1, a.b1)?;
    let p2 = PhaseFunction::new(a.a2, a.b2)?;
    let r = a.a2 / a.a1;
    let (_, roots) = char_quadratic(r);
    let delta = if r < 0.25 { Some(coercivity(r)?) } else { None };
    let worst = identity_sweep(Some((p1, p2)), a.samples, a.seed)?;
    let pass = worst <= IDENTITY_TOL;
    let config = json!({ "a1": a.a1, "a2": a.a2, "b1": a.b1, "b2": a.b2, "samples": a.samples, "seed": a.seed });
    let summary = json!({
        "r": r,
        "characteristic_roots": roots,
        "coercivity": delta,
        "identity_samples": a.samples,
        "identity_worst_residual": worst,
        "identity_tolerance": IDENTITY_TOL,
        "pass": pass,
    });
    let mut report = Report::new(
        "resonance",
        RunManifest::new("resonance", &config),
        summary,
        &["estimate", "r", "range", "troubles", "combination"],
    );
    for t in [EstimateType::D1, EstimateType::D2, EstimateType::ND1, EstimateType::ND2] {
        let q = BilinearQuery { r, estimate_type: t };
        let v = bilinear_critical(&q)?;
        let tr = trouble_diagnosis(&q)?;
        let tags: Vec<String> = tr.tags.iter().map(|t| format!("{t:?}")).collect();
        report.row(vec![
            json!(format!("{t:?}")),
            json!(r),
            json!(v.range_text()),
            json!(tags.join("+")),
            serde_json::to_value(tr.combination).unwrap_or(Value::Null),
        ]);
    }
    eprintln!(
        "identity check: {} points, worst residual {worst:.3e} ({})",
        a.samples,
        if pass { "pass" } else { "FAIL" }
    );
    Ok(Outcome { report, pass })
}

pub fn verify_quadrature() -> Result<Outcome, CliError> {
    let checks = lemma_suite()?;
    let mut pass = true;
    let mut report = Report::new(
        "verify-quadrature",
        RunManifest::new("verify-quadrature", &json!({ "suite": "default" })),
        json!({}),
        &["check", "sweep", "fitted", "predicted", "tolerance", "r_squared", "decades", "pass"],
    );
    for c in &checks {
        let ok = c.pass && c.r_squared >= 0.99 && (c.fitted_exponent - c.predicted).abs() <= c.tolerance;
        pass &= ok;
        report.row(vec![
            json!(c.lemma),
            json!(c.sweep),
            json!(c.fitted_exponent),
            json!(c.predicted),
            json!(c.tolerance),
            json!(c.r_squared),
            json!(c.decades),
            json!(ok),
        ]);
    }
    let (p1, p2) = (PhaseFunction::new(1.0, 0.0)?, PhaseFunction::new(-1.0, 0.0)?);
    let near = coupling_supremum(p1, p2, 0.6, SearchDomain::Line { xi_max: 10.0, samples: 4001 })?.sup;
    let far = coupling_supremum(p1, p2, 0.6, SearchDomain::Line { xi_max: 20.0, samples: 8001 })?.sup;
    let change = (far - near).abs() / near;
    let stable = change < 0.01;
    pass &= stable;
    report.row(vec![
        json!("coupling-distinct"),
        json!("alpha = 1 vs -1, b = 0.6, range 10 vs 20"),
        json!(change),
        json!(0.0),
        json!(0.01),
        Value::Null,
        Value::Null,
        json!(stable),
    ]);
    let ns: Vec<f64> = (4..=10).map(|k| 2f64.powi(k)).collect();
    let fit = coupling_growth(1.0, 0.0, 1.0, 0.6, &ns)?;
    let ok = (fit.fitted_exponent - 0.6).abs() <= 0.05;
    pass &= ok;
    report.row(vec![
        json!("coupling-equal"),
        json!("alpha = 1, beta 0 vs 1, b = 0.6, N from 2^4 to 2^10"),
        json!(fit.fitted_exponent),
        json!(0.6),
        json!(0.05),
        json!(fit.r_squared),
        json!((ns[ns.len() - 1] / ns[0]).log10()),
        json!(ok),
    ]);
    report.summary = json!({ "checks": report.rows.len(), "pass": pass });
    Ok(Outcome { report, pass })
}

fn sweep_ns(given: &[f64], default: Vec<f64>) -> Result<Vec<f64>, CliError> {
    if given.is_empty() {
        return Ok(default);
    }
    if given.len() < 4 || given.iter().any(|n| !(n.is_finite() && *n > 0.0)) {
        return Err(CliError::Usage("--ns needs at least four positive values".into()));
    }
    Ok(given.to_vec())
}

fn growth_verdict(fitted: f64) -> &'static str {
    if fitted.abs() <= FLAT_TOL {
        "boundary: flat ratio"
    } else if fitted > 0.0 {
        "counterexample: ratio grows"
    } else {
        "no contradiction: ratio decays"
    }
}

pub fn sharpness(a: &SharpnessArgs) -> Result<Outcome, CliError> {
    let ns = sweep_ns(&a.ns, (4..=12).map(|k| 2f64.powi(k)).collect())?;
    let (s, b) = (to_f64(a.s), to_f64(a.b));
    let fit = fit_growth(a.family, s, b, &ns)?;
    let predicted = a.family.predicted_ratio_exponent(s, b);
    let pass = (fit.fitted_exponent - predicted).abs() <= SHARPNESS_TOL;
    let conditions = necessary_conditions(a.family);
    let conditions_hold = conditions.iter().all(|c| c.holds(a.s, a.b));
    let verdict = growth_verdict(fit.fitted_exponent);
    let config = json!({ "family": a.family.name(), "s": render(a.s), "b": render(a.b), "ns": ns });
    let summary = json!({
        "family": a.family.name(),
        "s": render(a.s),
        "b": render(a.b),
        "predicted_exponent": predicted,
        "fitted_exponent": fit.fitted_exponent,
        "r_squared": fit.r_squared,
        "tolerance": SHARPNESS_TOL,
        "verdict": verdict,
        "necessary_conditions": conditions,
        "necessary_conditions_hold": conditions_hold,
        "pass": pass,
    });
    let mut report = Report::new("sharpness", RunManifest::new("sharpness", &config), summary, &["N", "ratio"]);
    for (n, v) in fit.parameters.iter().zip(&fit.values) {
        report.row(vec![json!(n), json!(v)]);
    }
    eprintln!(
        "{}: fitted exponent {:.4}, predicted {predicted:.4}; verdict {verdict}",
        a.family, fit.fitted_exponent
    );
    Ok(Outcome { report, pass })
}

pub fn bilinear_test(a: &BilinearArgs) -> Result<Outcome, CliError> {
    let ns = sweep_ns(&a.ns, packet_sweep())?;
    let (s, b) = (to_f64(a.s), to_f64(a.b));
    let fit = packet_growth(a.family, s, b, &ns)?;
    let predicted = a.family.predicted_ratio_exponent(s, b);
    let pass = (fit.fitted_exponent - predicted).abs() <= BILINEAR_TOL;
    let config = json!({ "family": a.family.name(), "s": render(a.s), "b": render(a.b), "ns": ns });
    let summary = json!({
        "family": a.family.name(),
        "s": render(a.s),
        "b": render(a.b),
        "predicted_exponent": predicted,
        "fitted_exponent": fit.fitted_exponent,
        "r_squared": fit.r_squared,
        "tolerance": BILINEAR_TOL,
        "verdict": growth_verdict(fit.fitted_exponent),
        "pass": pass,
    });
    let mut report = Report::new("bilinear-test", RunManifest::new("bilinear-test", &config), summary, &["N", "ratio"]);
    for (n, v) in fit.parameters.iter().zip(&fit.values) {
        report.row(vec![json!(n), json!(v)]);
    }
    eprintln!("{}: packet exponent {:.4}, predicted {predicted:.4}", a.family, fit.fitted_exponent);
    Ok(Outcome { report, pass })
}

pub fn simulate(a: &SimulateArgs) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", a.config.display())))?;
    let config: SimulationConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", a.config.display())))?;
    config.grid.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let out = run_simulation(&config)?;
    let drifts = out.final_report.map(|r| (r.relative_drift_e1, r.relative_drift_e2));
    let pass = match (a.max_drift, drifts) {
        (Some(limit), Some((d1, d2))) => d1 <= limit && d2 <= limit,
        _ => true,
    };
    let summary = json!({
        "records": out.records.len(),
        "final_time": out.records.last().map(|r| r.t),
        "final_report": out.final_report,
        "max_drift": a.max_drift,
        "pass": pass,
    });
    let mut report = Report::new(
        "simulate",
        RunManifest::new("simulate", &serde_json::to_value(&config).unwrap_or(Value::Null)),
        summary,
        &["t", "E1", "E2", "norm_u", "norm_v"],
    );
    for r in &out.records {
        report.row(vec![json!(r.t), json!(r.e1), json!(r.e2), json!(r.norm_u), json!(r.norm_v)]);
    }
    Ok(Outcome { report, pass })
}

pub fn selftest() -> Outcome {
    let results = run_all();
    let pass = results.iter().all(|r| r.pass);
    for r in &results {
        eprintln!("{}", r.line());
    }
    let summary = json!({ "criteria": results.len(), "passed": results.iter().filter(|r| r.pass).count(), "pass": pass });
    let mut report = Report::new(
        "selftest",
        RunManifest::new("selftest", &json!({ "suite": "acceptance" })),
        summary,
        &["id", "criterion", "result", "detail"],
    );
    for r in &results {
        report.row(vec![json!(r.id), json!(r.name), json!(if r.pass { "PASS" } else { "FAIL" }), json!(r.detail)]);
    }
    Outcome { report, pass }
}
