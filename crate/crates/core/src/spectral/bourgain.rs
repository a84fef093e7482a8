//! Discrete Bourgain norms on a space-time torus and the dense bilinear ratio.

use super::fourier::{fft2, signed_index, wavenumbers};
use super::SpectralState;
use crate::bracket;
use crate::classifier::EstimateType;
use crate::error::{Error, Result};
use crate::resonance::PhaseFunction;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Samples w(x_i, t_m) on [0, L) × [0, T), stored row-major with time as the row index.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    pub nx: usize,
    pub nt: usize,
    pub length: f64,
    pub period: f64,
    pub data: Vec<Complex64>,
}

impl SpaceTimeField {
    pub fn new(length: f64, period: f64, nx: usize, nt: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != nx * nt {
            return Err(Error::GridMismatch(format!("{} samples for a {nx}×{nt} grid", data.len())));
        }
        if !(length > 0.0 && period > 0.0) || nx == 0 || nt == 0 {
            return Err(Error::InvalidParameter("space-time grid needs positive extents".into()));
        }
        Ok(Self { nx, nt, length, period, data })
    }

    pub fn from_fn(length: f64, period: f64, nx: usize, nt: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(nx * nt);
        for m in 0..nt {
            let t = m as f64 * period / nt as f64;
            for i in 0..nx {
                data.push(Complex64::new(f(i as f64 * length / nx as f64, t), 0.0));
            }
        }
        Self::new(length, period, nx, nt, data)
    }

    /// Field with the given normalized coefficients c(ξ_k, τ_m), indexed by signed (k, m).
    pub fn from_coefficients(
        length: f64,
        period: f64,
        nx: usize,
        nt: usize,
        coeff: impl Fn(i64, i64) -> Complex64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(nx * nt);
        for m in 0..nt {
            for k in 0..nx {
                data.push(coeff(signed_index(k, nx), signed_index(m, nt)));
            }
        }
        fft2(&mut data, nt, nx, true);
        Self::new(length, period, nx, nt, data)
    }

    /// Records the u component of a running simulation every `stride` steps.
    pub fn record(state: &mut SpectralState, nt: usize, stride: usize) -> Result<Self> {
        let nx = state.grid.n;
        let mut data = Vec::with_capacity(nx * nt);
        for m in 0..nt {
            if m > 0 {
                state.advance(stride)?;
            }
            data.extend(state.u().into_iter().map(|x| Complex64::new(x, 0.0)));
        }
        let period = nt as f64 * stride as f64 * state.grid.dt;
        Self::new(state.grid.length, period, nx, nt, data)
    }

    /// Multiplies by a smooth bump in time supported on the open period.
    pub fn windowed(&self) -> Self {
        let mut out = self.clone();
        for m in 0..self.nt {
            let sigma = 2.0 * (m as f64 + 0.5) / self.nt as f64 - 1.0;
            let psi = if sigma.abs() < 1.0 { (1.0 - 1.0 / (1.0 - sigma * sigma)).exp() } else { 0.0 };
            for z in &mut out.data[m * self.nx..(m + 1) * self.nx] {
                *z *= psi;
            }
        }
        out
    }

    /// Normalized coefficients c with w = Σ c e^{i(ξx + τt)}.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut c = self.data.clone();
        fft2(&mut c, self.nt, self.nx, false);
        let k = 1.0 / (self.nx * self.nt) as f64;
        c.iter_mut().for_each(|z| *z *= k);
        c
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.nx == other.nx
            && self.nt == other.nt
            && (self.length - other.length).abs() <= 1e-12 * self.length
            && (self.period - other.period).abs() <= 1e-12 * self.period
    }
}

/// Plain space-time L² norm by the trapezoid rule.
pub fn space_time_l2(w: &SpaceTimeField) -> f64 {
    let cell = w.length * w.period / (w.nx * w.nt) as f64;
    (cell * w.data.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

fn weighted_norm(c: &[Complex64], nx: usize, nt: usize, length: f64, period: f64, phase: PhaseFunction, s: f64, b: f64) -> f64 {
    let xi = wavenumbers(nx, length);
    let tau = wavenumbers(nt, period);
    let mut sum = 0.0;
    for (m, &tm) in tau.iter().enumerate() {
        for (k, &xk) in xi.iter().enumerate() {
            let z = c[m * nx + k];
            if z.norm_sqr() == 0.0 {
                continue;
            }
            let weight = bracket(xk).powf(s) * bracket(tm - phase.eval(xk)).powf(b);
            sum += weight * weight * z.norm_sqr();
        }
    }
    (length * period * sum).sqrt()
}

/// ‖w‖ in X^{α,β}_{s,b}: sqrt(LT Σ ⟨ξ⟩^{2s}⟨τ − φ(ξ)⟩^{2b}|c|²).
pub fn bourgain_norm(w: &SpaceTimeField, phase: PhaseFunction, s: f64, b: f64) -> f64 {
    weighted_norm(&w.spectrum(), w.nx, w.nt, w.length, w.period, phase, s, b)
}

/// The two dispersion pairs of a bilinear estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilinearPhases {
    pub first: PhaseFunction,
    pub second: PhaseFunction,
}

impl BilinearPhases {
    /// (input, input, output) phases for the estimate type.
    pub fn roles(&self, estimate: EstimateType) -> [PhaseFunction; 3] {
        match estimate {
            EstimateType::D1 => [self.first, self.first, self.second],
            EstimateType::D2 | EstimateType::ND1 | EstimateType::ND2 => [self.first, self.second, self.first],
        }
    }
}

/// Quotient of the output norm (exponent b − 1) by the product of the input norms (exponent b).
pub fn bilinear_ratio(
    w1: &SpaceTimeField,
    w2: &SpaceTimeField,
    estimate: EstimateType,
    phases: BilinearPhases,
    s: f64,
    b: f64,
) -> Result<f64> {
    if !w1.same_grid(w2) {
        return Err(Error::GridMismatch("bilinear inputs live on different grids".into()));
    }
    let [p1, p2, p_out] = phases.roles(estimate);
    let (nx, nt, length, period) = (w1.nx, w1.nt, w1.length, w1.period);
    let c1 = w1.spectrum();
    let c2 = w2.spectrum();
    let den = weighted_norm(&c1, nx, nt, length, period, p1, s, b) * weighted_norm(&c2, nx, nt, length, period, p2, s, b);
    if den == 0.0 {
        return Err(Error::ZeroDenominator("an input norm is zero".into()));
    }
    let xi = wavenumbers(nx, length);
    let deriv = |c: &[Complex64]| -> Vec<Complex64> {
        c.iter().enumerate().map(|(j, z)| z * Complex64::new(0.0, xi[j % nx])).collect()
    };
    let (f1, f2) = match estimate {
        EstimateType::ND1 => (deriv(&c1), c2),
        EstimateType::ND2 => (c1, deriv(&c2)),
        _ => (c1, c2),
    };
    let (px, pt) = (2 * nx, 2 * nt);
    let pad = |c: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); px * pt];
        for m in 0..nt {
            let mm = signed_index(m, nt).rem_euclid(pt as i64) as usize;
            for k in 0..nx {
                let kk = signed_index(k, nx).rem_euclid(px as i64) as usize;
                out[mm * px + kk] = c[m * nx + k];
            }
        }
        fft2(&mut out, pt, px, true);
        out
    };
    let mut prod: Vec<Complex64> = pad(&f1).iter().zip(pad(&f2)).map(|(a, b)| a * b).collect();
    fft2(&mut prod, pt, px, false);
    let scale = 1.0 / (px * pt) as f64;
    let pxi = wavenumbers(px, length);
    for (j, z) in prod.iter_mut().enumerate() {
        *z *= scale;
        if matches!(estimate, EstimateType::D1 | EstimateType::D2) {
            *z *= Complex64::new(0.0, pxi[j % px]);
        }
    }
    let num = weighted_norm(&prod, px, pt, length, period, p_out, s, b - 1.0);
    Ok(num / den)
}
