//! Conserved energies of the named systems, Sobolev norms and the scaling map.

use super::fourier::{wavenumbers, Transform};
use super::SpectralState;
use crate::error::{Error, Result};
use crate::system::{DiagonalSystem, NamedSystem, DEFAULT_TOL};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    #[serde(rename = "E1")]
    pub e1: f64,
    #[serde(rename = "E2")]
    pub e2: f64,
    pub relative_drift_e1: f64,
    pub relative_drift_e2: f64,
}

/// Remembers the energies at t = 0 and reports drifts against them.
#[derive(Debug, Clone)]
pub struct EnergyTracker {
    kind: NamedSystem,
    initial: (f64, f64),
}

impl EnergyTracker {
    pub fn new(state: &SpectralState, kind: NamedSystem) -> Result<Self> {
        Ok(Self { kind, initial: energies(state, &kind)? })
    }

    pub fn report(&self, state: &SpectralState) -> Result<EnergyReport> {
        let (e1, e2) = energies(state, &self.kind)?;
        Ok(EnergyReport {
            e1,
            e2,
            relative_drift_e1: drift(e1, self.initial.0),
            relative_drift_e2: drift(e2, self.initial.1),
        })
    }
}

fn drift(now: f64, start: f64) -> f64 {
    let d = (now - start).abs();
    if start == 0.0 {
        d
    } else {
        d / start.abs()
    }
}

fn coefficients_match(a: &DiagonalSystem, b: &DiagonalSystem) -> bool {
    a.coefficients()
        .iter()
        .zip(b.coefficients().iter())
        .all(|((_, x), (_, y))| (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs())))
}

/// (E1, E2) of the named system. Gear–Grimshaw energies are evaluated in the
/// original unknowns reconstructed through the change of basis.
pub fn energies(state: &SpectralState, kind: &NamedSystem) -> Result<(f64, f64)> {
    let (diag, basis) = kind.diagonal_form(DEFAULT_TOL)?;
    if !coefficients_match(&diag, &state.sys) {
        return Err(Error::KindMismatch(format!(
            "state system does not match the {} coefficient pattern",
            kind.tag()
        )));
    }
    let length = state.grid.length;
    let m = basis.m;
    let u_hat: Vec<Complex64> =
        state.u_hat.iter().zip(&state.v_hat).map(|(p, q)| p * m[0][0] + q * m[0][1]).collect();
    let v_hat: Vec<Complex64> =
        state.u_hat.iter().zip(&state.v_hat).map(|(p, q)| p * m[1][0] + q * m[1][1]).collect();
    let xi = state.wavenumbers();
    let deriv = |f: &[Complex64]| -> Vec<Complex64> {
        f.iter().zip(xi).map(|(z, &x)| z * Complex64::new(0.0, x)).collect()
    };
    let (ux_hat, vx_hat) = (deriv(&u_hat), deriv(&v_hat));
    let quad = |f: &[Complex64], g: &[Complex64]| -> f64 {
        length * f.iter().zip(g).map(|(a, b)| (a * b.conj()).re).sum::<f64>()
    };
    let t = Transform::new(state.grid.n);
    let u = t.inverse_real(&u_hat);
    let v = t.inverse_real(&v_hat);
    let h = length / state.grid.n as f64;
    let cubic = |f: &dyn Fn(f64, f64) -> f64| -> f64 { h * u.iter().zip(&v).map(|(&u, &v)| f(u, v)).sum::<f64>() };
    let uu = quad(&u_hat, &u_hat);
    let vv = quad(&v_hat, &v_hat);
    let uxux = quad(&ux_hat, &ux_hat);
    let vxvx = quad(&vx_hat, &vx_hat);
    match *kind {
        NamedSystem::MajdaBiello { a2 } => {
            Ok((uu + vv, uxux + a2 * vxvx - cubic(&|u, v| u * v * v)))
        }
        NamedSystem::HirotaSatsuma { a1, c12 } => Ok((
            uu + c12 / 3.0 * vv,
            (1.0 - a1) * uxux + c12 * vxvx - cubic(&|u, v| 2.0 * (1.0 - a1) * u.powi(3) + c12 * u * v * v),
        )),
        NamedSystem::GearGrimshaw { rho1, rho2, sigma1, sigma2, sigma3, sigma4 } => {
            let uxvx = quad(&ux_hat, &vx_hat);
            let e2 = rho2 * uxux + vxvx + 2.0 * rho2 * sigma3 * uxvx - sigma4 * vv
                + cubic(&|u, v| {
                    -rho2 / 3.0 * u.powi(3) + rho2 * sigma2 * u * u * v + rho2 * sigma1 * u * v * v
                        - v.powi(3) / 3.0
                });
            Ok((rho2 * uu + rho1 * vv, e2))
        }
        NamedSystem::BonaChenSaut => Err(Error::KindMismatch(
            "no conserved energies are tracked for bona-chen-saut".into(),
        )),
    }
}

/// Discrete H^s norm: sqrt(L Σ ⟨ξ_k⟩^{2s} |c_k|²), ⟨ξ⟩ = 1 + |ξ|.
pub fn sobolev_norm(f: &[f64], s: f64, length: f64) -> f64 {
    sobolev_norm_of_coeffs(&Transform::new(f.len()).forward_real(f), s, length)
}

pub fn sobolev_norm_of_coeffs(c: &[Complex64], s: f64, length: f64) -> f64 {
    let xi = wavenumbers(c.len(), length);
    let sum: f64 = c.iter().zip(&xi).map(|(z, x)| (1.0 + x.abs()).powf(2.0 * s) * z.norm_sqr()).sum();
    (length * sum).sqrt()
}

/// x ↦ λ^{-2} f(x/λ).
pub fn scale_data<F: Fn(f64) -> f64>(f: F, lambda: f64) -> Result<impl Fn(f64) -> f64> {
    if !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("scaling factor {lambda} must be ≥ 1")));
    }
    Ok(move |x: f64| f(x / lambda) / (lambda * lambda))
}
