//! Bilinear ratios of Fourier-space packets evaluated by quadrature.
//!
//! A packet is ŵ(ξ, τ) = A(ξ) 1{|τ − φ(ξ)| ≤ h} with A a raised-cosine bump.
//! The product spectrum is a one-dimensional integral along ξ1, which is
//! rewritten in u = Φ(ξ1) = φ1(ξ1) + φ2(ξ − ξ1) and sampled on a τ grid, so
//! the cost stays polynomial in N where a uniform lattice would need
//! resolution 1/N² in ξ.

use super::bourgain::BilinearPhases;
use crate::bracket;
use crate::classifier::EstimateType;
use crate::error::{Error, Result};
use crate::fit::{geometric, SweepFit};
use crate::quadrature::adaptive::integrate;
use crate::resonance::PhaseFunction;
use crate::sharpness::{build_family, BoxSet, FamilyTag, Numerator};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const FOUR_PI2: f64 = 4.0 * PI * PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Packet {
    pub xi_lo: f64,
    pub xi_hi: f64,
    pub phase: PhaseFunction,
    pub half_width: f64,
}

impl Packet {
    /// Packet filling a strip box whose centre curve is a phase function.
    pub fn from_box(b: &BoxSet, phase: PhaseFunction) -> Result<Self> {
        if b.inner_half_width > 0.0 {
            return Err(Error::InvalidParameter("packets need strip boxes, not annuli".into()));
        }
        Ok(Self { xi_lo: b.xi_lo, xi_hi: b.xi_hi, phase, half_width: b.half_width })
    }

    pub fn amplitude(&self, xi: f64) -> f64 {
        let w = self.xi_hi - self.xi_lo;
        let y = (xi - 0.5 * (self.xi_lo + self.xi_hi)) / w;
        if y.abs() >= 0.5 {
            0.0
        } else {
            (PI * y).cos().powi(2)
        }
    }

    pub fn value(&self, xi: f64, tau: f64) -> f64 {
        if (tau - self.phase.eval(xi)).abs() <= self.half_width {
            self.amplitude(xi)
        } else {
            0.0
        }
    }

    /// Continuum norm in X^{phase}_{s,b}: (1/4π²)∫∫ ⟨ξ⟩^{2s}⟨τ − φ(ξ)⟩^{2b}|ŵ|².
    pub fn norm(&self, phase: PhaseFunction, s: f64, b: f64) -> f64 {
        let e = 2.0 * b;
        let anti = |y: f64| -> f64 {
            let m = if (e + 1.0).abs() < 1e-12 {
                (1.0 + y.abs()).ln()
            } else {
                ((1.0 + y.abs()).powf(e + 1.0) - 1.0) / (e + 1.0)
            };
            m.copysign(y)
        };
        let f = |xi: f64| {
            let off = self.phase.eval(xi) - phase.eval(xi);
            let tau_part = anti(off + self.half_width) - anti(off - self.half_width);
            bracket(xi).powf(2.0 * s) * self.amplitude(xi).powi(2) * tau_part
        };
        let (v, _) = integrate(&f, &[self.xi_lo, self.xi_hi], 1e-14, 1e-10, 2000);
        (v / FOUR_PI2).sqrt()
    }
}

/// Discretization of the output integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketResolution {
    pub xi_nodes: usize,
    pub tau_step: f64,
}

impl Default for PacketResolution {
    fn default() -> Self {
        Self { xi_nodes: 32, tau_step: 0.25 }
    }
}

/// ∫ 1{|τ1| ≤ h1} 1{|τ − τ1| ≤ h2} dτ1.
fn box_convolution(y: f64, h1: f64, h2: f64) -> f64 {
    (h1 + h2 - y.abs()).min(2.0 * h1.min(h2)).max(0.0)
}

/// Output-norm contribution of one output frequency ξ (before the ξ quadrature weight).
fn slice(
    w1: &Packet,
    w2: &Packet,
    estimate: EstimateType,
    out: PhaseFunction,
    b: f64,
    xi: f64,
    step: f64,
) -> Result<f64> {
    let a = w1.xi_lo.max(xi - w2.xi_hi);
    let z = w1.xi_hi.min(xi - w2.xi_lo);
    if z <= a {
        return Ok(0.0);
    }
    let (p1, p2) = (w1.phase, w2.phase);
    let big_phi = |x1: f64| p1.eval(x1) + p2.eval(xi - x1);
    let d_phi = |x1: f64| 3.0 * p1.alpha * x1 * x1 - p1.beta - 3.0 * p2.alpha * (xi - x1).powi(2) + p2.beta;
    let mut probes = vec![a, z];
    if p1.alpha != p2.alpha {
        let crit = -p2.alpha * xi / (p1.alpha - p2.alpha);
        if crit > a && crit < z {
            probes.push(crit);
        }
    }
    let signs: Vec<f64> = probes.iter().map(|&x| d_phi(x)).collect();
    if !(signs.iter().all(|&d| d > 0.0) || signs.iter().all(|&d| d < 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "packet route needs a monotone phase sum; Φ' changes sign at ξ = {xi}"
        )));
    }
    let (ua, uz) = (big_phi(a), big_phi(z));
    let increasing = uz > ua;
    let (umin, umax) = if increasing { (ua, uz) } else { (uz, ua) };
    let j0 = (umin / step).ceil() as i64;
    let j1 = (umax / step).floor() as i64;
    if j1 < j0 {
        return Ok(0.0);
    }
    let factor = |x1: f64| match estimate {
        EstimateType::ND1 => x1,
        EstimateType::ND2 => xi - x1,
        _ => 1.0,
    };
    let mut g = Vec::with_capacity((j1 - j0 + 1) as usize);
    let (mut lo, mut hi) = (a, z);
    for j in j0..=j1 {
        let u = j as f64 * step;
        // the root is monotone in u, so the previous root brackets the next one
        let (mut l, mut r) = (lo, hi);
        let mut x = 0.5 * (l + r);
        for _ in 0..100 {
            let f = big_phi(x) - u;
            let below = if increasing { f < 0.0 } else { f > 0.0 };
            if below {
                l = x;
            } else {
                r = x;
            }
            let newton = x - f / d_phi(x);
            let next = if newton > l && newton < r { newton } else { 0.5 * (l + r) };
            if (next - x).abs() <= 1e-15 * (1.0 + x.abs()) || r - l <= 1e-15 * (1.0 + x.abs()) {
                x = next;
                break;
            }
            x = next;
        }
        if increasing {
            lo = x;
        } else {
            hi = x;
        }
        g.push(factor(x) * w1.amplitude(x) * w2.amplitude(xi - x) / d_phi(x).abs());
    }
    let (h1, h2) = (w1.half_width, w2.half_width);
    let taps = ((h1 + h2) / step).ceil() as i64;
    let kernel: Vec<f64> = (-taps..=taps).map(|d| box_convolution(d as f64 * step, h1, h2)).collect();
    let mut sum = 0.0;
    for i in (j0 - taps)..=(j1 + taps) {
        let mut acc = 0.0;
        let lo_j = (i - taps).max(j0);
        let hi_j = (i + taps).min(j1);
        for j in lo_j..=hi_j {
            acc += g[(j - j0) as usize] * kernel[(i - j + taps) as usize];
        }
        let w_hat = step * acc / FOUR_PI2;
        let tau = i as f64 * step;
        sum += bracket(tau - out.eval(xi)).powf(2.0 * (b - 1.0)) * w_hat * w_hat;
    }
    Ok(step * sum)
}

/// Continuum bilinear ratio of two packets for the given estimate type.
pub fn packet_bilinear_ratio(
    w1: &Packet,
    w2: &Packet,
    estimate: EstimateType,
    phases: BilinearPhases,
    s: f64,
    b: f64,
    res: PacketResolution,
) -> Result<f64> {
    let [q1, q2, out] = phases.roles(estimate);
    let den = w1.norm(q1, s, b) * w2.norm(q2, s, b);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::ZeroDenominator("an input norm is zero".into()));
    }
    let lo = w1.xi_lo + w2.xi_lo;
    let hi = w1.xi_hi + w2.xi_hi;
    let dx = (hi - lo) / res.xi_nodes as f64;
    let parts: Result<Vec<f64>> = (0..res.xi_nodes)
        .into_par_iter()
        .map(|k| {
            let xi = lo + (k as f64 + 0.5) * dx;
            let d = if matches!(estimate, EstimateType::D1 | EstimateType::D2) { xi * xi } else { 1.0 };
            Ok(bracket(xi).powf(2.0 * s) * d * slice(w1, w2, estimate, out, b, xi, res.tau_step)?)
        })
        .collect();
    let num = (dx * parts?.iter().sum::<f64>() / FOUR_PI2).sqrt();
    Ok(num / den)
}

/// Packets filling the two source boxes of a strip family, with the family's estimate type.
pub fn claim_a_packets(tag: FamilyTag, n: f64) -> Result<(Packet, Packet, EstimateType, BilinearPhases)> {
    let fam = build_family(tag, n, None)?;
    let (ia, ib) = fam.sources();
    let estimate = match fam.numerator {
        Numerator::Xi3 => EstimateType::D2,
        Numerator::Xi1 => EstimateType::ND1,
    };
    let pa = Packet::from_box(&fam.boxes[ia], fam.phases[ia])?;
    let pb = Packet::from_box(&fam.boxes[ib], fam.phases[ib])?;
    let phases = BilinearPhases { first: fam.phases[ia], second: fam.phases[ib] };
    Ok((pa, pb, estimate, phases))
}

/// Log-log growth of the packet ratio over `ns`.
pub fn packet_growth(tag: FamilyTag, s: f64, b: f64, ns: &[f64]) -> Result<SweepFit> {
    let values: Result<Vec<f64>> = ns
        .iter()
        .map(|&n| {
            let (w1, w2, est, ph) = claim_a_packets(tag, n)?;
            packet_bilinear_ratio(&w1, &w2, est, ph, s, b, PacketResolution::default())
        })
        .collect();
    SweepFit::fit(ns.to_vec(), values?)
}

/// Default N sweep for packet growth fits.
pub fn packet_sweep() -> Vec<f64> {
    geometric(16.0, 128.0, 7)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::bourgain::{bilinear_ratio, SpaceTimeField};
    use num_complex::Complex64;

    fn ph(a: f64) -> PhaseFunction {
        PhaseFunction::new(a, 0.0).unwrap()
    }

    #[test]
    fn norm_matches_closed_form_on_own_curve() {
        // ∫ cos⁴ over a unit interval is 3/8; the τ factor is 2 at b = 0
        let p = Packet { xi_lo: 3.0, xi_hi: 4.0, phase: ph(1.0), half_width: 1.0 };
        let n = p.norm(ph(1.0), 0.0, 0.0);
        assert!((n * n * FOUR_PI2 - 0.75).abs() < 1e-9, "{}", n * n * FOUR_PI2);
    }

    #[test]
    fn quadrature_route_agrees_with_dense_lattice() {
        // two packets near ξ = 2 and ξ = −3.5 on a fine torus
        let w1 = Packet { xi_lo: 1.0, xi_hi: 2.0, phase: ph(1.0), half_width: 1.0 };
        let w2 = Packet { xi_lo: -4.0, xi_hi: -3.0, phase: ph(-1.0), half_width: 1.0 };
        let phases = BilinearPhases { first: ph(1.0), second: ph(-1.0) };
        let (s, b) = (-0.5, 0.6);
        let fine = PacketResolution { xi_nodes: 64, tau_step: 0.05 };
        let q = packet_bilinear_ratio(&w1, &w2, EstimateType::D2, phases, s, b, fine).unwrap();
        let (length, period, nx, nt) = (64.0 * PI, 16.0 * PI, 512, 1024);
        let field = |p: Packet| {
            SpaceTimeField::from_coefficients(length, period, nx, nt, |k, m| {
                let xi = 2.0 * PI * k as f64 / length;
                let tau = 2.0 * PI * m as f64 / period;
                Complex64::new(p.value(xi, tau) / (length * period), 0.0)
            })
            .unwrap()
        };
        let d = bilinear_ratio(&field(w1), &field(w2), EstimateType::D2, phases, s, b).unwrap();
        assert!(((q - d) / q).abs() < 0.05, "quadrature {q} vs lattice {d}");
    }

    #[test]
    fn resolution_refinement_is_stable() {
        let (w1, w2, est, phases) = claim_a_packets(FamilyTag::ClaimA, 32.0).unwrap();
        let a = packet_bilinear_ratio(&w1, &w2, est, phases, -1.2, 0.6, PacketResolution::default()).unwrap();
        let f = packet_bilinear_ratio(&w1, &w2, est, phases, -1.2, 0.6, PacketResolution { xi_nodes: 64, tau_step: 0.125 })
            .unwrap();
        assert!(((a - f) / f).abs() < 0.01, "{a} {f}");
    }

    #[test]
    fn claim_a_growth_matches_prediction() {
        let (s, b) = (-1.2, 0.6);
        let fit = packet_growth(FamilyTag::ClaimA, s, b, &packet_sweep()).unwrap();
        let want = FamilyTag::ClaimA.predicted_ratio_exponent(s, b);
        assert!((fit.fitted_exponent - want).abs() < 0.15, "{} vs {want}", fit.fitted_exponent);
    }

    #[test]
    fn folded_phase_sum_is_rejected() {
        // Φ' = 3ξ1² − 12ξ2² vanishes at ξ1 = 2|ξ2|, inside the slice ξ = 1
        let w1 = Packet { xi_lo: 1.5, xi_hi: 2.5, phase: ph(1.0), half_width: 1.0 };
        let w2 = Packet { xi_lo: -1.5, xi_hi: -0.5, phase: ph(4.0), half_width: 1.0 };
        let phases = BilinearPhases { first: ph(1.0), second: ph(4.0) };
        let r = packet_bilinear_ratio(&w1, &w2, EstimateType::D2, phases, 0.0, 0.6, PacketResolution::default());
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
    }
}
