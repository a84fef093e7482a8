//! Containment, convolution mass and the indicator test ratio.

use super::families::{build_family, BoxFamily, FamilyTag, Numerator, Quantity};
use super::BoxSet;
use crate::bracket;
use crate::error::{Error, Result};
use crate::fit::SweepFit;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const SLACK: f64 = 64.0 * f64::EPSILON;
const RATIO_GRID: usize = 9;

fn target_contains(t: &BoxSet, p: (f64, f64), q: (f64, f64)) -> bool {
    let (xi, tau) = (-(p.0 + q.0), -(p.1 + q.1));
    let eps_xi = SLACK * (p.0.abs() + q.0.abs());
    let eps_tau = SLACK * (p.1.abs() + q.1.abs() + t.center.eval(xi).abs());
    t.contains_with_slack(xi, tau, eps_xi, eps_tau)
}

/// Checks a + b ⊆ −target on an m×m grid per source box, m⁴ ≥ `samples`,
/// so every corner pair is included.
pub fn minkowski_containment(a: &BoxSet, b: &BoxSet, target: &BoxSet, samples: usize) -> bool {
    let m = ((samples.max(1) as f64).powf(0.25).ceil() as usize).max(4);
    let (ga, gb) = (a.grid(m), b.grid(m));
    ga.par_iter().all(|&p| gb.iter().all(|&q| target_contains(target, p, q)))
}

/// |a|·|b|, the measure of the convolution of the indicators once containment holds.
pub fn convolution_mass(a: &BoxSet, b: &BoxSet, target: &BoxSet) -> Result<f64> {
    if !minkowski_containment(a, b, target, 4096) {
        return Err(Error::ContainmentViolated("sampled sum left the target box".into()));
    }
    Ok(a.area() * b.area())
}

/// Midpoint cells of a sheared (ξ, τ − g(ξ)) grid covering the box plus a
/// two-cell margin on every side; box edges fall on cell boundaries.
fn sheared_cells(bx: &BoxSet, m: usize) -> (Vec<(f64, f64)>, f64) {
    let inner_cells = m - 4;
    let dx = (bx.xi_hi - bx.xi_lo) / inner_cells as f64;
    let dl = 2.0 * bx.half_width / inner_cells as f64;
    let mut pts = Vec::with_capacity(m * m);
    for i in 0..m {
        let xi = bx.xi_lo + dx * (i as f64 - 1.5);
        let g = bx.center.eval(xi);
        for j in 0..m {
            let l = -bx.half_width + dl * (j as f64 - 1.5);
            pts.push((xi, g + l));
        }
    }
    (pts, dx * dl)
}

/// ∫ 1_a(p) 1_b(q) 1_target(−p−q) by brute force on a 16⁴ sheared grid.
pub fn brute_force_mass(a: &BoxSet, b: &BoxSet, target: &BoxSet) -> f64 {
    const M: usize = 16;
    let (ca, va) = sheared_cells(a, M);
    let (cb, vb) = sheared_cells(b, M);
    let hits: usize = ca
        .par_iter()
        .filter(|p| a.contains(p.0, p.1))
        .map(|&p| cb.iter().filter(|q| b.contains(q.0, q.1) && target_contains(target, p, **q)).count())
        .sum();
    hits as f64 * va * vb
}

impl BoxFamily {
    pub fn containment(&self, samples: usize) -> bool {
        let (ia, ib) = self.sources();
        minkowski_containment(&self.boxes[ia], &self.boxes[ib], &self.boxes[self.derived], samples)
    }

    pub fn mass(&self) -> Result<f64> {
        let (ia, ib) = self.sources();
        convolution_mass(&self.boxes[ia], &self.boxes[ib], &self.boxes[self.derived])
    }

    pub fn brute_mass(&self) -> f64 {
        let (ia, ib) = self.sources();
        brute_force_mass(&self.boxes[ia], &self.boxes[ib], &self.boxes[self.derived])
    }

    /// Completes a source pair to the full triple (ξi, τi), i = 1..3.
    fn triple(&self, p: (f64, f64), q: (f64, f64)) -> [(f64, f64); 3] {
        let (ia, ib) = self.sources();
        let mut t = [(0.0, 0.0); 3];
        t[ia] = p;
        t[ib] = q;
        t[self.derived] = (-(p.0 + q.0), -(p.1 + q.1));
        t
    }

    fn modulations(&self, t: &[(f64, f64); 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| t[i].1 - self.phases[i].eval(t[i].0))
    }

    fn weight(&self, t: &[(f64, f64); 3], s: f64, b: f64) -> f64 {
        let [l1, l2, l3] = self.modulations(t);
        let lead = match self.numerator {
            Numerator::Xi3 => t[2].0.abs(),
            Numerator::Xi1 => t[0].0.abs(),
        };
        let k = lead * bracket(t[2].0).powf(s) / (bracket(t[0].0).powf(s) * bracket(t[1].0).powf(s));
        k / (bracket(l1).powf(b) * bracket(l2).powf(b) * bracket(l3).powf(1.0 - b))
    }

    /// Lower bound for LHS/RHS of the weighted estimate with indicator data:
    /// (inf of the weight) · mass / Π|Bi|^{1/2}.
    pub fn ratio(&self, s: f64, b: f64) -> Result<f64> {
        let mass = self.mass()?;
        let (ia, ib) = self.sources();
        let ga = self.boxes[ia].grid(RATIO_GRID);
        let gb = self.boxes[ib].grid(RATIO_GRID);
        let inf = ga
            .iter()
            .flat_map(|&p| gb.iter().map(move |&q| (p, q)))
            .map(|(p, q)| self.weight(&self.triple(p, q), s, b))
            .fold(f64::INFINITY, f64::min);
        let rhs: f64 = self.boxes.iter().map(|bx| bx.area().sqrt()).product();
        Ok(inf * mass / rhs)
    }
}

pub fn ratio_estimate(tag: FamilyTag, s: f64, b: f64, n: f64) -> Result<f64> {
    build_family(tag, n, None)?.ratio(s, b)
}

/// Log-log fit of the ratio against N.
pub fn fit_growth(tag: FamilyTag, s: f64, b: f64, ns: &[f64]) -> Result<SweepFit> {
    let values = ns.par_iter().map(|&n| ratio_estimate(tag, s, b, n)).collect::<Result<Vec<_>>>()?;
    SweepFit::fit(ns.to_vec(), values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleReport {
    pub quantity: Quantity,
    pub exponent: f64,
    pub two_sided: bool,
    /// Largest over smallest normalized value (per-N maxima when one-sided).
    pub spread: f64,
    pub pass: bool,
}

/// Checks |Li| and |H| against their predicted powers of N: normalized values
/// must stay within a factor 4 of their geometric mean.
pub fn scale_check(tag: FamilyTag, ns: &[f64]) -> Result<Vec<ScaleReport>> {
    let families = ns.iter().map(|&n| build_family(tag, n, None)).collect::<Result<Vec<_>>>()?;
    let records = families[0].predicted_scales();
    let mut out = Vec::new();
    for rec in records {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        let mut max_lo = f64::INFINITY;
        let mut max_hi: f64 = 0.0;
        for fam in &families {
            let (ia, ib) = fam.sources();
            let scale = fam.n.powf(rec.exponent);
            let mut fam_max: f64 = 0.0;
            for p in fam.boxes[ia].grid(5) {
                for q in fam.boxes[ib].grid(5) {
                    let t = fam.triple(p, q);
                    let l = fam.modulations(&t);
                    let v = match rec.quantity {
                        Quantity::L1 => l[0],
                        Quantity::L2 => l[1],
                        Quantity::L3 => l[2],
                        Quantity::H => (0..3).map(|i| fam.phases[i].eval(t[i].0)).sum(),
                    };
                    let v = v.abs() / scale;
                    lo = lo.min(v);
                    hi = hi.max(v);
                    fam_max = fam_max.max(v);
                }
            }
            max_lo = max_lo.min(fam_max);
            max_hi = max_hi.max(fam_max);
        }
        let spread = if rec.two_sided { hi / lo } else { max_hi / max_lo };
        out.push(ScaleReport {
            quantity: rec.quantity,
            exponent: rec.exponent,
            two_sided: rec.two_sided,
            spread,
            pass: spread.is_finite() && spread <= 16.0,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sharpness::CenterCurve;

    const NS3: [f64; 3] = [16.0, 256.0, 4096.0];

    #[test]
    fn unit_boxes_self_test() {
        let zero = CenterCurve::affine(0.0, 0.0);
        let unit = BoxSet::strip(-0.5, 0.5, zero, 0.5);
        let twice = BoxSet::strip(-1.0, 1.0, zero, 1.0);
        assert!(minkowski_containment(&unit, &unit, &twice, 1000));
        assert!(!minkowski_containment(&unit, &unit, &unit, 1000));
        assert_eq!(convolution_mass(&unit, &unit, &twice).unwrap(), 1.0);
        assert!(matches!(convolution_mass(&unit, &unit, &unit), Err(Error::ContainmentViolated(_))));
        assert!((brute_force_mass(&unit, &unit, &twice) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_families_contain() {
        for tag in FamilyTag::ALL {
            for n in NS3 {
                let f = build_family(tag, n, None).unwrap();
                assert!(f.containment(4096), "{tag} at N = {n}");
            }
        }
    }

    #[test]
    fn shrunken_target_fails() {
        for n in [256.0, 4096.0] {
            let mut f = build_family(FamilyTag::ClaimA, n, None).unwrap();
            f.boxes[2].half_width /= n;
            assert!(!f.containment(1000));
        }
    }

    #[test]
    fn brute_force_agrees_with_area_product() {
        for tag in FamilyTag::ALL {
            let f = build_family(tag, 16.0, None).unwrap();
            let (m, brute) = (f.mass().unwrap(), f.brute_mass());
            assert!((brute - m).abs() / m < 0.02, "{tag}: {brute} vs {m}");
        }
    }

    #[test]
    fn claim_a_mass_is_four() {
        let f = build_family(FamilyTag::ClaimA, 100.0, None).unwrap();
        assert_eq!(f.mass().unwrap(), 4.0);
        let g = build_family(FamilyTag::ClaimB, 100.0, None).unwrap();
        assert!((g.mass().unwrap() - 0.04).abs() < 1e-12);
    }

    #[test]
    fn scales_follow_predictions() {
        for tag in FamilyTag::ALL {
            for r in scale_check(tag, &NS3).unwrap() {
                assert!(r.pass, "{tag} {:?}: spread {}", r.quantity, r.spread);
            }
        }
    }

    #[test]
    fn critical_claim_a_is_flat() {
        let ns: Vec<f64> = (4..=12).map(|k| 2f64.powi(k)).collect();
        let fit = fit_growth(FamilyTag::ClaimA, -13.0 / 12.0, 11.0 / 18.0, &ns).unwrap();
        assert!(fit.spread() < 3.0, "{:?}", fit.values);
    }
}

#[cfg(test)]
mod growth_tests {
    use super::*;

    #[test]
    fn fitted_exponents_track_predictions() {
        let ns: Vec<f64> = (4..=12).map(|k| 2f64.powi(k)).collect();
        let matrix: [(FamilyTag, [(f64, f64); 3]); 8] = [
            (FamilyTag::ClaimA, [(-13.0 / 12.0, 11.0 / 18.0), (-1.2, 0.6), (-1.0, 0.5)]),
            (FamilyTag::ClaimB, [(-13.0 / 12.0, 11.0 / 18.0), (-0.5, 0.5), (-1.5, 0.5)]),
            (FamilyTag::Case3ThmA, [(-0.9, 0.6), (-0.8, 0.8), (0.0, 1.0)]),
            (FamilyTag::D1Neg, [(-1.0, 0.6), (-0.75, 0.5), (0.0, 0.5)]),
            (FamilyTag::D2PosSmall, [(-1.0, 0.6), (-0.75, 0.5), (0.0, 0.5)]),
            (FamilyTag::Nd1Neg, [(-1.0, 0.6), (-0.75, 0.5), (0.0, 0.5)]),
            (FamilyTag::Nd1Quarter, [(0.5, 0.5), (0.75, 0.6), (1.0, 0.5)]),
            (FamilyTag::Nd1Equal, [(-0.5, 0.5), (0.0, 0.6), (0.5, 0.5)]),
        ];
        for (tag, points) in matrix {
            for (s, b) in points {
                let fit = fit_growth(tag, s, b, &ns).unwrap();
                let want = tag.predicted_ratio_exponent(s, b);
                assert!((fit.fitted_exponent - want).abs() <= 0.1, "{tag} ({s}, {b})");
            }
        }
    }
}
