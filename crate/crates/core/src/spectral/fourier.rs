//! FFT helpers: normalized coefficient transforms and frequency tables.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Signed integer frequency of FFT slot `j` on `n` points. The Nyquist slot maps to −n/2.
pub fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Physical wavenumbers ξ_j = 2πk/L in FFT order.
pub fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * signed_index(j, n) as f64 / length).collect()
}

/// 2/3-rule mask: keeps |k| < n/3.
pub fn dealias_mask(n: usize) -> Vec<bool> {
    (0..n).map(|j| 3 * signed_index(j, n).unsigned_abs() < n as u64).collect()
}

/// Forward/inverse plan pair. `forward` returns c_k with f(x_j) = Σ c_k e^{iξ_k x_j}.
#[derive(Clone)]
pub struct Transform {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Transform({})", self.n)
    }
}

impl Transform {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { n, fwd: planner.plan_fft_forward(n), inv: planner.plan_fft_inverse(n) }
    }

    pub fn forward_real(&self, f: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward_in_place(&mut buf);
        buf
    }

    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
        let k = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= k);
    }

    pub fn inverse(&self, c: &[Complex64]) -> Vec<Complex64> {
        let mut buf = c.to_vec();
        self.inv.process(&mut buf);
        buf
    }

    pub fn inverse_real(&self, c: &[Complex64]) -> Vec<f64> {
        self.inverse(c).into_iter().map(|z| z.re).collect()
    }
}

/// In-place 2-D transform of row-major data (`rows` × `cols`).
pub fn fft2(data: &mut [Complex64], rows: usize, cols: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let (row_plan, col_plan) = if inverse {
        (planner.plan_fft_inverse(cols), planner.plan_fft_inverse(rows))
    } else {
        (planner.plan_fft_forward(cols), planner.plan_fft_forward(rows))
    };
    for row in data.chunks_mut(cols) {
        row_plan.process(row);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = data[r * cols + c];
        }
        col_plan.process(&mut column);
        for r in 0..rows {
            data[r * cols + c] = column[r];
        }
    }
}
