//! Pseudospectral simulation of diagonal systems on a periodic box, Sobolev
//! and discrete Bourgain norms, and bilinear ratios.

mod bourgain;
mod energy;
mod fourier;
mod packets;
mod simulate;
mod solver;

pub use bourgain::{bilinear_ratio, bourgain_norm, space_time_l2, BilinearPhases, SpaceTimeField};
pub use energy::{energies, scale_data, sobolev_norm, sobolev_norm_of_coeffs, EnergyReport, EnergyTracker};
pub use fourier::{dealias_mask, wavenumbers};
pub use packets::{
    claim_a_packets, packet_bilinear_ratio, packet_growth, packet_sweep, Packet, PacketResolution,
};
pub use simulate::{
    sample_data, simulate, DataSet, DataSpec, OutputSpec, SeriesRecord, SimulationConfig,
    SimulationOutput,
};
pub use solver::{edge_magnitude, SpectralState};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Periodic grid x_j = jL/N and time stepping parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
}

impl Grid {
    pub fn new(length: f64, n: usize, dt: f64, t_final: f64) -> Result<Self> {
        let g = Self { length, n, dt, t_final };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 32 || !self.n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("N = {} must be a power of two ≥ 32", self.n)));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::InvalidParameter(format!("L = {} must be positive", self.length)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_final >= 0.0) {
            return Err(Error::InvalidParameter(format!("T = {} must be nonnegative", self.t_final)));
        }
        Ok(())
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.length / self.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Number of steps to reach T (rounded to the nearest integer).
    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }
}
