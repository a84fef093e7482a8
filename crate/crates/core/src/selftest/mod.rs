//! The acceptance suite: ten self-contained checks, each reporting pass or fail
//! with a one-line detail.

pub mod fixtures;

use crate::classifier::admissible_b;
use crate::error::{Error, Result};
use crate::quadrature::coupling::{coupling_growth, coupling_supremum, SearchDomain};
use crate::quadrature::lemmas::lemma_suite;
use crate::resonance::{identity_sweep, PhaseFunction};
use crate::sharpness::{build_family, feasible, fit_growth, necessary_conditions, FamilyTag};
use crate::spectral::{
    bourgain_norm, packet_growth, packet_sweep, scale_data, simulate, sobolev_norm, space_time_l2, DataSet,
    DataSpec, Grid, OutputSpec, SimulationConfig, SpaceTimeField,
};
use crate::system::{NamedSystem, SystemDocument};
use num_rational::Rational64;
use num_traits::Signed;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "classification fixtures"),
    (2, "admissible b ranges"),
    (3, "resonance identities"),
    (4, "decay-integral sweeps"),
    (5, "coupling supremum"),
    (6, "sharpness families"),
    (7, "feasibility threshold"),
    (8, "solver conservation"),
    (9, "scaling law"),
    (10, "discrete Bourgain consistency"),
];

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: {} ({:.2} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

type Check = Result<(bool, String)>;

pub fn run_criterion(id: u8) -> Result<CriterionResult> {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::InvalidParameter(format!("no acceptance criterion {id}")))?
        .1;
    let start = Instant::now();
    let outcome = match id {
        1 => classification(),
        2 => b_ranges(),
        3 => resonance_identities(),
        4 => decay_sweeps(),
        5 => coupling(),
        6 => families(),
        7 => feasibility(),
        8 => conservation(),
        9 => scaling(),
        _ => bourgain_consistency(),
    };
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Ok(CriterionResult { id, name: name.to_string(), pass, detail, elapsed: start.elapsed() })
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| run_criterion(c.0).expect("listed criterion")).collect()
}

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn classification() -> Check {
    let rows = fixtures::classification_fixtures();
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} {} (want {}, got {})", r.table, r.label, r.expected, r.actual))
        .collect();
    let detail = if failed.is_empty() {
        format!("{} rows match", rows.len())
    } else {
        format!("{} of {} rows differ: {}", failed.len(), rows.len(), failed.join("; "))
    };
    Ok((failed.is_empty(), detail))
}

fn b_ranges() -> Check {
    let cases = [
        (q(-13, 12), q(11, 18), q(11, 18), true),
        (q(-1, 1), q(7, 12), q(2, 3), true),
        (q(0, 1), q(1, 2), q(3, 4), false),
    ];
    let mut bad = Vec::new();
    for (s, lo, hi, closed) in cases {
        let r = admissible_b(s)?;
        if (r.lower, r.upper, r.lower_closed, r.upper_closed) != (lo, hi, closed, closed) {
            bad.push(format!("s = {s}: got {r}"));
        }
    }
    let seam = admissible_b(q(-1, 1))?;
    for k in 2..=6 {
        let eps = q(1, 10i64.pow(k));
        for side in [admissible_b(q(-1, 1) - eps)?, admissible_b(q(-1, 1) + eps)?] {
            let gap = (side.lower - seam.lower).abs().max((side.upper - seam.upper).abs());
            if gap > eps {
                bad.push(format!("seam jump {gap} at distance {eps}"));
            }
        }
    }
    let detail = if bad.is_empty() { "three ranges exact, seam at s = -1 continuous".into() } else { bad.join("; ") };
    Ok((bad.is_empty(), detail))
}

fn resonance_identities() -> Check {
    const TRIALS: usize = 10_000;
    let worst = identity_sweep(None, TRIALS, 0x5eed)?;
    Ok((worst <= 1e-9, format!("{TRIALS} triples, worst relative error {worst:.2e} (tolerance 1e-9)")))
}

fn decay_sweeps() -> Check {
    let checks = lemma_suite()?;
    let mut bad = Vec::new();
    for c in &checks {
        let ok = c.pass && c.r_squared >= 0.99 && c.decades >= 2.0 && (c.fitted_exponent - c.predicted).abs() <= c.tolerance;
        if !ok {
            bad.push(format!(
                "{} [{}]: {:.4} vs {:.4}, r² {:.4}, {:.2} decades",
                c.lemma, c.sweep, c.fitted_exponent, c.predicted, c.r_squared, c.decades
            ));
        }
    }
    let detail = if bad.is_empty() {
        let worst = checks.iter().map(|c| (c.fitted_exponent - c.predicted).abs()).fold(0.0, f64::max);
        format!("{} sweeps within tolerance, worst exponent error {worst:.4}", checks.len())
    } else {
        bad.join("; ")
    };
    Ok((bad.is_empty(), detail))
}

fn coupling() -> Check {
    let (p1, p2) = (PhaseFunction::new(1.0, 0.0)?, PhaseFunction::new(-1.0, 0.0)?);
    let a = coupling_supremum(p1, p2, 0.6, SearchDomain::Line { xi_max: 10.0, samples: 4001 })?.sup;
    let b = coupling_supremum(p1, p2, 0.6, SearchDomain::Line { xi_max: 20.0, samples: 8001 })?.sup;
    let change = (b - a).abs() / a;
    let ns: Vec<f64> = (4..=10).map(|k| 2f64.powi(k)).collect();
    let fit = coupling_growth(1.0, 0.0, 1.0, 0.6, &ns)?;
    let growth_err = (fit.fitted_exponent - 0.6).abs();
    let pass = a.is_finite() && change < 0.01 && growth_err <= 0.05;
    Ok((
        pass,
        format!(
            "sup {a:.6} vs {b:.6} (change {:.3}%); equal-dispersion exponent {:.4} vs 0.6",
            100.0 * change,
            fit.fitted_exponent
        ),
    ))
}

const GROWTH_MATRIX: [(FamilyTag, [(f64, f64); 3]); 8] = [
    (FamilyTag::ClaimA, [(-13.0 / 12.0, 11.0 / 18.0), (-1.2, 0.6), (-1.0, 0.5)]),
    (FamilyTag::ClaimB, [(-13.0 / 12.0, 11.0 / 18.0), (-0.5, 0.5), (-1.5, 0.5)]),
    (FamilyTag::Case3ThmA, [(-0.9, 0.6), (-0.8, 0.8), (0.0, 1.0)]),
    (FamilyTag::D1Neg, [(-1.0, 0.6), (-0.75, 0.5), (0.0, 0.5)]),
    (FamilyTag::D2PosSmall, [(-1.0, 0.6), (-0.75, 0.5), (0.0, 0.5)]),
    (FamilyTag::Nd1Neg, [(-1.0, 0.6), (-0.75, 0.5), (0.0, 0.5)]),
    (FamilyTag::Nd1Quarter, [(0.5, 0.5), (0.75, 0.6), (1.0, 0.5)]),
    (FamilyTag::Nd1Equal, [(-0.5, 0.5), (0.0, 0.6), (0.5, 0.5)]),
];

fn families() -> Check {
    let ns: Vec<f64> = (4..=12).map(|k| 2f64.powi(k)).collect();
    let mut bad = Vec::new();
    let mut worst_growth = 0.0f64;
    let mut worst_mass = 0.0f64;
    for (tag, points) in GROWTH_MATRIX {
        for n in [16.0, 256.0, 4096.0] {
            if !build_family(tag, n, None)?.containment(4096) {
                bad.push(format!("{tag}: containment fails at N = {n}"));
            }
        }
        let f = build_family(tag, 16.0, None)?;
        let (mass, brute) = (f.mass()?, f.brute_mass());
        let mass_err = (brute - mass).abs() / mass;
        worst_mass = worst_mass.max(mass_err);
        if mass_err >= 0.02 {
            bad.push(format!("{tag}: brute mass {brute:.6} vs {mass:.6}"));
        }
        for (s, b) in points {
            let fit = fit_growth(tag, s, b, &ns)?;
            let err = (fit.fitted_exponent - tag.predicted_ratio_exponent(s, b)).abs();
            worst_growth = worst_growth.max(err);
            if err > 0.1 {
                bad.push(format!("{tag} at ({s:.4}, {b:.4}): exponent {:.4}", fit.fitted_exponent));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("8 families; worst mass error {:.3}%, worst exponent error {worst_growth:.4}", 100.0 * worst_mass)
    } else {
        bad.join("; ")
    };
    Ok((bad.is_empty(), detail))
}

fn feasibility() -> Check {
    let mut conds = necessary_conditions(FamilyTag::ClaimA);
    conds.extend(necessary_conditions(FamilyTag::ClaimB));
    let cases = [(q(-13, 12), true), (q(-13, 12) - q(1, 100), false), (q(-2, 1), false)];
    let mut parts = Vec::new();
    let mut pass = true;
    for (s, want) in cases {
        let got = feasible(&conds, s);
        pass &= got == want;
        parts.push(format!("s = {s}: {}", if got { "feasible" } else { "infeasible" }));
    }
    Ok((pass, parts.join(", ")))
}

fn conservation_run(named: NamedSystem) -> Result<(f64, f64)> {
    let gauss = DataSpec::Gaussian { amplitude: 0.5, width: 3.0, center: None };
    let config = SimulationConfig {
        system: SystemDocument::from_named(named),
        grid: Grid::new(40.0 * PI, 256, 1e-4, 1.0)?,
        data: DataSet { u: gauss.clone(), v: DataSpec::Gaussian { amplitude: 0.3, width: 3.0, center: Some(20.0 * PI + 2.0) } },
        outputs: OutputSpec { stride: 500, s: 0.0 },
    };
    let out = simulate(&config)?;
    let first = out.records.first().ok_or_else(|| Error::InvalidParameter("no records".into()))?;
    let drift = |get: fn(&crate::spectral::SeriesRecord) -> Option<f64>| -> f64 {
        let e0 = get(first).unwrap_or(f64::NAN);
        let denom = if e0 == 0.0 { 1.0 } else { e0.abs() };
        out.records.iter().map(|r| (get(r).unwrap_or(f64::NAN) - e0).abs() / denom).fold(0.0, f64::max)
    };
    Ok((drift(|r| r.e1), drift(|r| r.e2)))
}

fn conservation() -> Check {
    let systems = [
        ("Majda-Biello", NamedSystem::MajdaBiello { a2: 2.0 }, 1e-8, 1e-6),
        ("Hirota-Satsuma", NamedSystem::HirotaSatsuma { a1: 2.0, c12: 1.0 }, 1e-8, 1e-6),
        (
            "Gear-Grimshaw",
            NamedSystem::GearGrimshaw { rho1: 0.9, rho2: 1.1, sigma1: 0.3, sigma2: 0.2, sigma3: 0.25, sigma4: 0.1 },
            1e-6,
            1e-6,
        ),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, sys, t1, t2) in systems {
        let (d1, d2) = conservation_run(sys)?;
        pass &= d1 <= t1 && d2 <= t2;
        parts.push(format!("{name} drift E1 {d1:.2e}, E2 {d2:.2e}"));
    }
    Ok((pass, parts.join("; ")))
}

fn scaling() -> Check {
    let base = Grid::new(40.0 * PI, 256, 1e-3, 1.0)?;
    let c = base.length / 2.0;
    let gaussian = move |x: f64| (-((x - c) / 3.0).powi(2)).exp();
    let sech2 = move |x: f64| 1.0 / ((x - c) / 3.0).cosh().powi(2);
    let profiles: [(&str, &dyn Fn(f64) -> f64); 2] = [("gaussian", &gaussian), ("sech2", &sech2)];
    let mut worst = f64::NEG_INFINITY;
    let mut pass = true;
    for (_, f) in profiles {
        for s in [-13.0 / 12.0, -1.0, 0.0, 1.0] {
            let n0 = sobolev_norm(&base.points().iter().map(|&x| f(x)).collect::<Vec<_>>(), s, base.length);
            for lambda in [1.0f64, 2.0, 4.0, 8.0] {
                let fl = scale_data(f, lambda)?;
                let (len, n) = (lambda * base.length, (lambda as usize) * base.n);
                let samples: Vec<f64> = (0..n).map(|j| fl(j as f64 * len / n as f64)).collect();
                let ratio = sobolev_norm(&samples, s, len) / n0;
                let bound = lambda.powf(-5.0 / 12.0);
                worst = worst.max(ratio / bound);
                pass &= ratio <= bound * 1.01;
            }
        }
    }
    Ok((pass, format!("32 cases, largest ratio / λ^(-5/12) = {worst:.6} (slack 1%)")))
}

fn bourgain_consistency() -> Check {
    let (length, period, nx, nt) = (20.0, 8.0, 64, 64);
    let w = SpaceTimeField::from_fn(length, period, nx, nt, |x, t| {
        (-(x - 10.0).powi(2) / 4.0).exp() * (1.0 + 0.5 * (2.0 * PI * t / period).sin()) + 0.1 * (2.0 * PI * 3.0 * x / length).cos()
    })?;
    let phase = PhaseFunction::new(1.0, 0.0)?;
    let (bn, l2) = (bourgain_norm(&w, phase, 0.0, 0.0), space_time_l2(&w));
    let parseval = (bn - l2).abs() / l2;
    let fit = packet_growth(FamilyTag::ClaimA, -1.2, 0.6, &packet_sweep())?;
    let want = FamilyTag::ClaimA.predicted_ratio_exponent(-1.2, 0.6);
    let err = (fit.fitted_exponent - want).abs();
    Ok((
        parseval <= 1e-12 && err <= 0.15,
        format!("Parseval error {parseval:.1e}; packet exponent {:.4} vs {want:.4}", fit.fitted_exponent),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion_is_rejected() {
        assert!(run_criterion(0).is_err());
        assert!(run_criterion(11).is_err());
    }

    #[test]
    fn fast_criteria_pass() {
        for id in [1, 2, 3, 7] {
            let r = run_criterion(id).unwrap();
            assert!(r.pass, "{}", r.line());
        }
    }
}
