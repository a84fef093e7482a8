//! sup over (ξ, τ) of |ξ| / ⟨τ − φ1(ξ)⟩^b ⟨τ − φ2(ξ)⟩^{1−b}.

use crate::bracket;
use crate::error::{Error, Result};
use crate::fit::SweepFit;
use crate::resonance::PhaseFunction;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SearchDomain {
    /// All τ, with ξ ∈ [−xi_max, xi_max].
    Line { xi_max: f64, samples: usize },
    /// ξ ∈ [n−1, n] and |τ − φ1(ξ)| ≤ 1.
    Strip { n: f64, samples: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingEstimate {
    pub sup: f64,
    pub witness: (f64, f64),
}

fn weight(l1: f64, l2: f64, b: f64) -> f64 {
    bracket(l1).powf(b) * bracket(l2).powf(1.0 - b)
}

/// Best τ for fixed ξ over all of ℝ. The log-weight is concave between the
/// two phase values and increasing outside, so an endpoint wins.
fn inner_line(p1: f64, p2: f64, b: f64) -> (f64, f64) {
    let a = weight(0.0, p1 - p2, b);
    let c = weight(p2 - p1, 0.0, b);
    if a <= c {
        (a, p1)
    } else {
        (c, p2)
    }
}

/// Best τ with L1 = τ − p1 confined to [−1, 1].
fn inner_strip(p1: f64, p2: f64, b: f64) -> (f64, f64) {
    let c = p1 - p2;
    [-1.0, 1.0, 0.0, (-c).clamp(-1.0, 1.0)]
        .into_iter()
        .map(|l1| (weight(l1, l1 + c, b), p1 + l1))
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .expect("four candidates")
}

pub fn coupling_supremum(
    phase1: PhaseFunction,
    phase2: PhaseFunction,
    b: f64,
    domain: SearchDomain,
) -> Result<CouplingEstimate> {
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::InvalidParameter(format!("b = {b} must lie in [0, 1]")));
    }
    let (lo, hi, samples, strip) = match domain {
        SearchDomain::Line { xi_max, samples } => (-xi_max, xi_max, samples, false),
        SearchDomain::Strip { n, samples } => (n - 1.0, n, samples, true),
    };
    if samples < 2 || !(hi > lo) {
        return Err(Error::InvalidParameter("search domain needs ≥ 2 samples and width".into()));
    }
    let objective = |xi: f64| {
        let (p1, p2) = (phase1.eval(xi), phase2.eval(xi));
        let (w, tau) = if strip { inner_strip(p1, p2, b) } else { inner_line(p1, p2, b) };
        (xi.abs() / w, tau)
    };
    let h = (hi - lo) / (samples - 1) as f64;
    let mut best = (f64::NEG_INFINITY, lo, 0.0);
    let mut best_i = 0;
    for i in 0..samples {
        let xi = lo + h * i as f64;
        let (v, tau) = objective(xi);
        if v > best.0 {
            best = (v, xi, tau);
            best_i = i;
        }
    }
    // Golden-section polish inside the neighbouring cells.
    let (mut a, mut c) = (
        lo + h * best_i.saturating_sub(1) as f64,
        (lo + h * (best_i + 1) as f64).min(hi),
    );
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let x1 = c - g * (c - a);
        let x2 = a + g * (c - a);
        if objective(x1).0 >= objective(x2).0 {
            c = x2;
        } else {
            a = x1;
        }
    }
    let xi = 0.5 * (a + c);
    let (v, tau) = objective(xi);
    if v > best.0 {
        best = (v, xi, tau);
    }
    Ok(CouplingEstimate { sup: best.0, witness: (best.1, best.2) })
}

/// Strip suprema for equal dispersion and unequal drift, fitted against N.
pub fn coupling_growth(
    alpha: f64,
    beta1: f64,
    beta2: f64,
    b: f64,
    ns: &[f64],
) -> Result<SweepFit> {
    let p1 = PhaseFunction::new(alpha, beta1)?;
    let p2 = PhaseFunction::new(alpha, beta2)?;
    let values = ns
        .iter()
        .map(|&n| Ok(coupling_supremum(p1, p2, b, SearchDomain::Strip { n, samples: 401 })?.sup))
        .collect::<Result<Vec<_>>>()?;
    SweepFit::fit(ns.to_vec(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phase(a: f64, b: f64) -> PhaseFunction {
        PhaseFunction::new(a, b).unwrap()
    }

    /// Brute force over a τ grid spanning both phase values and beyond.
    fn brute_inner(p1: f64, p2: f64, b: f64) -> f64 {
        let (lo, hi) = (p1.min(p2) - 5.0, p1.max(p2) + 5.0);
        (0..=20_000)
            .map(|i| lo + (hi - lo) * i as f64 / 20_000.0)
            .map(|t| weight(t - p1, t - p2, b))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn endpoint_rule_matches_brute_force() {
        for (p1, p2, b) in [(0.0, 7.0, 0.6), (3.0, -40.0, 0.55), (1.0, 1.0, 0.6), (-2.0, 9.0, 0.4)] {
            let (w, _) = inner_line(p1, p2, b);
            let brute = brute_inner(p1, p2, b);
            assert!(w <= brute * (1.0 + 1e-12) && w >= brute * (1.0 - 1e-3), "{p1} {p2} {b}");
        }
    }

    #[test]
    fn distinct_dispersion_is_bounded_and_stable() {
        let (p1, p2) = (phase(1.0, 0.0), phase(-1.0, 0.0));
        let s = |x| coupling_supremum(p1, p2, 0.6, SearchDomain::Line { xi_max: x, samples: 4001 }).unwrap();
        let (a, b) = (s(20.0), s(40.0));
        assert!((b.sup - a.sup).abs() / a.sup < 0.01, "{a:?} {b:?}");
        assert!(a.sup <= (2.0f64 / 2.0).cbrt().max(1.0) * 1.5);
    }

    #[test]
    fn unit_frequencies_give_at_most_one() {
        for (a1, a2, b1, b2) in [(1.0, -1.0, 0.0, 0.0), (1.0, 1.0, 0.0, 3.0), (2.0, 0.5, -1.0, 1.0)] {
            let e = coupling_supremum(
                phase(a1, b1),
                phase(a2, b2),
                0.6,
                SearchDomain::Line { xi_max: 1.0, samples: 501 },
            )
            .unwrap();
            assert!(e.sup <= 1.0 + 1e-12, "{e:?}");
        }
    }

    #[test]
    fn equal_dispersion_strip_grows_like_n_to_the_b() {
        let ns: Vec<f64> = (4..=10).map(|k| 2f64.powi(k)).collect();
        for b in [0.55, 0.6, 2.0 / 3.0] {
            let fit = coupling_growth(1.0, 0.0, 1.0, b, &ns).unwrap();
            assert!((fit.fitted_exponent - b).abs() < 0.05, "b={b}: {}", fit.fitted_exponent);
        }
    }
}
