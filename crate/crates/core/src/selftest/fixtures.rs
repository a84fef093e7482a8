//! Table rows of the well-posedness and bilinear results, written out
//! independently of the classifier.

use crate::classifier::{
    bilinear_critical, bilinear_fails, classify, classify_named, BilinearQuery, EstimateType, Threshold,
    Verdict,
};
use crate::system::{DiagonalSystem, NamedSystem};
use num_rational::Rational64;

/// Expected threshold: `Some((s*, strict))`, or `None` when the row is not covered.
pub type Expected = Option<(Rational64, bool)>;

#[derive(Debug, Clone)]
pub struct FixtureOutcome {
    pub table: &'static str,
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn show(e: Expected) -> String {
    match e {
        Some((s, true)) => format!("s > {s}"),
        Some((s, false)) => format!("s ≥ {s}"),
        None => "not covered".into(),
    }
}

fn of_verdict(v: &Verdict) -> Expected {
    match (v.s_star, v.threshold_kind) {
        (Some(s), Some(k)) => Some((s, k == Threshold::Strict)),
        _ => None,
    }
}

fn outcome(table: &'static str, label: String, expected: Expected, actual: crate::Result<Verdict>) -> FixtureOutcome {
    let (actual, pass) = match actual {
        Ok(v) => {
            let got = of_verdict(&v);
            (show(got), got == expected)
        }
        Err(e) => (format!("error: {e}"), false),
    };
    FixtureOutcome { table, label, expected: show(expected), actual, pass }
}

fn diag(r: f64, f: impl FnOnce(&mut DiagonalSystem)) -> DiagonalSystem {
    let mut s = DiagonalSystem { a1: 1.0, a2: r, ..Default::default() };
    f(&mut s);
    s
}

fn main_table() -> Vec<FixtureOutcome> {
    let strict = |n, d| Some((q(n, d), true));
    let closed = |n, d| Some((q(n, d), false));
    let rows: Vec<(&str, DiagonalSystem, Expected)> = vec![
        ("(1) r=-1, c=0, (uv)_x in both", diag(-1.0, |s| { s.d11 = 1.0; s.d12 = 1.0; s.d21 = 2.0; s.d22 = 2.0 }), closed(-13, 12)),
        ("(1) r=-1/2, c=0, only first (uv)_x", diag(-0.5, |s| { s.d11 = 0.3; s.d12 = 0.3 }), closed(-13, 12)),
        ("(1) r=-2, weak nonlinearity d1=1, d2=-1", diag(-2.0, |s| { s.d11 = 1.0; s.d12 = 1.0; s.d21 = -1.0; s.d22 = -1.0 }), closed(-13, 12)),
        ("(1) r=-1, c11 ≠ 0", diag(-1.0, |s| s.c11 = 1.0), strict(-3, 4)),
        ("(1) r=-2, d11 ≠ d12", diag(-2.0, |s| s.d11 = 1.0), strict(-3, 4)),
        ("(2) r=1/10, c12=d21=d22=0", diag(0.1, |s| { s.c11 = 1.0; s.d11 = 1.0 }), strict(-3, 4)),
        ("(2) r=1/5, c12 ≠ 0", diag(0.2, |s| s.c12 = 1.0), closed(0, 1)),
        ("(2) r=1/10, d21 ≠ 0", diag(0.1, |s| s.d21 = 1.0), closed(0, 1)),
        ("(3) r=1/4, c21=d11=d12=0", diag(0.25, |s| { s.c11 = 1.0; s.c12 = 1.0 }), closed(0, 1)),
        ("(3) r=1/4, d11 ≠ 0", diag(0.25, |s| s.d11 = 1.0), closed(3, 4)),
        ("(3) r=1/4, c21 ≠ 0", diag(0.25, |s| s.c21 = 1.0), closed(3, 4)),
        ("(4) r=1/2", diag(0.5, |s| { s.c11 = 1.0; s.d21 = 1.0 }), closed(0, 1)),
        ("(4) r=9/10", diag(0.9, |s| s.c22 = 1.0), closed(0, 1)),
        ("(5) r=1, divergence form", diag(1.0, |s| { s.c11 = 1.0; s.d21 = 1.0; s.d22 = 1.0 }), strict(-3, 4)),
        ("(5) r=1, d11 ≠ d12", diag(1.0, |s| s.d11 = 1.0), strict(0, 1)),
        ("(5) r=1, b12 ≠ 0", diag(1.0, |s| { s.b12 = 1.0; s.c11 = 1.0 }), None),
        ("(6) r=2", diag(2.0, |s| s.c12 = 1.0), closed(0, 1)),
        ("(6) r=7/2", diag(3.5, |s| s.d12 = 1.0), closed(0, 1)),
        ("(7) r=4, c12=d21=d22=0", diag(4.0, |s| { s.c11 = 1.0; s.c21 = 1.0 }), closed(0, 1)),
        ("(7) r=4, c12 ≠ 0", diag(4.0, |s| s.c12 = 1.0), closed(3, 4)),
        ("(8) r=5, c21=d11=d12=0", diag(5.0, |s| { s.c12 = 1.0; s.d22 = 1.0 }), strict(-3, 4)),
        ("(8) r=10, c21 ≠ 0", diag(10.0, |s| s.c21 = 1.0), closed(0, 1)),
    ];
    rows.into_iter()
        .map(|(label, sys, e)| outcome("main", label.to_string(), e, Ok(classify(&sys))))
        .collect()
}

fn named_tables() -> Vec<FixtureOutcome> {
    let strict = |n, d| Some((q(n, d), true));
    let closed = |n, d| Some((q(n, d), false));
    let mb = |a2| NamedSystem::MajdaBiello { a2 };
    let hs = |a1, c12| NamedSystem::HirotaSatsuma { a1, c12 };
    let gg = |rho1, rho2, sigma3| NamedSystem::GearGrimshaw { rho1, rho2, sigma1: 0.5, sigma2: -0.3, sigma3, sigma4: 0.2 };
    // (table, label, system, local?, expected)
    let rows: Vec<(&'static str, &str, NamedSystem, bool, Expected)> = vec![
        ("mb-lwp", "a2=-2", mb(-2.0), true, strict(-3, 4)),
        ("mb-lwp", "a2=1", mb(1.0), true, strict(-3, 4)),
        ("mb-lwp", "a2=5", mb(5.0), true, strict(-3, 4)),
        ("mb-lwp", "a2=1/2", mb(0.5), true, closed(0, 1)),
        ("mb-lwp", "a2=2", mb(2.0), true, closed(0, 1)),
        ("mb-lwp", "a2=4", mb(4.0), true, closed(3, 4)),
        ("mb-gwp", "a2=1", mb(1.0), false, strict(-3, 4)),
        ("mb-gwp", "a2=2", mb(2.0), false, closed(0, 1)),
        ("mb-gwp", "a2=-1", mb(-1.0), false, closed(0, 1)),
        ("mb-gwp", "a2=4", mb(4.0), false, closed(1, 1)),
        ("hs-lwp", "a1=-1", hs(-1.0, 1.0), true, strict(-3, 4)),
        ("hs-lwp", "a1=1/10", hs(0.1, 1.0), true, strict(-3, 4)),
        ("hs-lwp", "a1=1/2", hs(0.5, 1.0), true, closed(0, 1)),
        ("hs-lwp", "a1=2", hs(2.0, -1.0), true, closed(0, 1)),
        ("hs-lwp", "a1=1", hs(1.0, 1.0), true, strict(0, 1)),
        ("hs-lwp", "a1=1/4", hs(0.25, 1.0), true, closed(3, 4)),
        ("hs-gwp", "a1=2, c12=1", hs(2.0, 1.0), false, closed(0, 1)),
        ("hs-gwp", "a1=-1, c12=1/2", hs(-1.0, 0.5), false, closed(0, 1)),
        ("hs-gwp", "a1=1/4, c12=1", hs(0.25, 1.0), false, closed(1, 1)),
        ("gg-lwp", "sigma3=0, rho1=1", gg(1.0, 1.0, 0.0), true, strict(-3, 4)),
        ("gg-lwp", "rho2 sigma3^2 = 2", gg(1.0, 2.0, 1.0), true, strict(-3, 4)),
        ("gg-lwp", "rho2 sigma3^2 = 1/4, quarter condition fails", gg(2.0, 1.0, 0.5), true, closed(0, 1)),
        ("gg-lwp", "sigma3=0, rho1=4, quarter condition holds", gg(4.0, 1.0, 0.0), true, closed(3, 4)),
        ("gg-gwp", "rho2 sigma3^2 = 1/4, quarter condition fails", gg(2.0, 1.0, 0.5), false, closed(0, 1)),
        ("gg-gwp", "rho2 sigma3^2 = 2", gg(1.0, 2.0, 1.0), false, closed(0, 1)),
        ("gg-gwp", "sigma3=0, rho1=1", gg(1.0, 1.0, 0.0), false, closed(0, 1)),
        ("gg-gwp", "sigma3=0, rho1=4, quarter condition holds", gg(4.0, 1.0, 0.0), false, closed(1, 1)),
    ];
    rows.into_iter()
        .map(|(table, label, sys, local, e)| {
            let v = classify_named(&sys, 1e-12).map(|(l, g)| if local { l } else { g });
            outcome(table, label.to_string(), e, v)
        })
        .collect()
}

const COLUMNS: [(f64, &str); 5] = [(-1.0, "r<0"), (0.1, "0<r<1/4"), (0.25, "r=1/4"), (2.0, "r>1/4, r≠1"), (1.0, "r=1")];

fn bilinear_cells() -> Vec<(EstimateType, usize, Rational64, bool)> {
    use EstimateType::*;
    let mut cells = Vec::new();
    for t in [D1, D2, ND1, ND2] {
        let row: [(Rational64, bool); 5] = match t {
            D1 => [(q(-3, 4), true), (q(-3, 4), true), (q(3, 4), false), (q(0, 1), false), (q(-3, 4), true)],
            D2 => [(q(-13, 12), false), (q(-3, 4), true), (q(3, 4), false), (q(0, 1), false), (q(-3, 4), true)],
            ND1 | ND2 => [(q(-3, 4), true), (q(-3, 4), true), (q(3, 4), false), (q(0, 1), false), (q(0, 1), true)],
        };
        for (i, (s, strict)) in row.into_iter().enumerate() {
            cells.push((t, i, s, strict));
        }
    }
    cells
}

fn bilinear_table() -> Vec<FixtureOutcome> {
    bilinear_cells()
        .into_iter()
        .map(|(t, i, s, strict)| {
            let (r, col) = COLUMNS[i];
            let v = bilinear_critical(&BilinearQuery { r, estimate_type: t });
            outcome("bilinear", format!("{t:?}, {col}"), Some((s, strict)), v)
        })
        .collect()
}

/// Failure just below the critical index and not at it.
fn sharpness_table() -> Vec<FixtureOutcome> {
    bilinear_cells()
        .into_iter()
        .map(|(t, i, s, _)| {
            let (r, col) = COLUMNS[i];
            let query = BilinearQuery { r, estimate_type: t };
            let below = s - q(1, 100);
            let result = bilinear_fails(&query, below).and_then(|a| Ok((a, bilinear_fails(&query, s)?)));
            let (actual, pass) = match result {
                Ok((a, b)) => (format!("fails at {below}: {a}, at {s}: {b}"), a && !b),
                Err(e) => (format!("error: {e}"), false),
            };
            FixtureOutcome {
                table: "sharp-bilinear",
                label: format!("{t:?}, {col}"),
                expected: format!("fails exactly for s < {s}"),
                actual,
                pass,
            }
        })
        .collect()
}

/// Every fixture row with its outcome.
pub fn classification_fixtures() -> Vec<FixtureOutcome> {
    let mut all = main_table();
    all.extend(named_tables());
    all.extend(bilinear_table());
    all.extend(sharpness_table());
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_matches() {
        let rows = classification_fixtures();
        assert!(rows.len() >= 60);
        for r in &rows {
            assert!(r.pass, "{} {}: expected {}, got {}", r.table, r.label, r.expected, r.actual);
        }
    }
}
