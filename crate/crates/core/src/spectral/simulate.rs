//! Config-driven simulation runs producing energy and norm time series.

use super::energy::{sobolev_norm_of_coeffs, EnergyReport, EnergyTracker};
use super::fourier::Transform;
use super::{Grid, SpectralState};
use crate::error::{Error, Result};
use crate::system::{SystemDocument, DEFAULT_TOL};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::PathBuf;

/// Initial profile for one component. Centres default to the middle of the box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum DataSpec {
    Gaussian {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: Option<f64>,
    },
    Sech2 {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: Option<f64>,
    },
    /// Two-column CSV (x, value) on a uniform periodic grid.
    File { path: PathBuf },
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSet {
    pub u: DataSpec,
    #[serde(default = "zero_spec")]
    pub v: DataSpec,
}

fn zero_spec() -> DataSpec {
    DataSpec::Zero
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub stride: usize,
    /// Sobolev index of the tracked norms.
    #[serde(default)]
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub system: SystemDocument,
    pub grid: Grid,
    pub data: DataSet,
    pub outputs: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub t: f64,
    #[serde(rename = "E1")]
    pub e1: Option<f64>,
    #[serde(rename = "E2")]
    pub e2: Option<f64>,
    pub norm_u: f64,
    pub norm_v: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationOutput {
    pub records: Vec<SeriesRecord>,
    pub final_report: Option<EnergyReport>,
    #[serde(skip)]
    pub final_state: Option<SpectralState>,
}

/// Samples a data spec on the grid.
pub fn sample_data(spec: &DataSpec, grid: &Grid) -> Result<Vec<f64>> {
    let x = grid.points();
    let mid = grid.length / 2.0;
    let check_width = |w: f64| {
        if w > 0.0 && w.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("profile width {w} must be positive")))
        }
    };
    match spec {
        DataSpec::Gaussian { amplitude, width, center } => {
            check_width(*width)?;
            let c = center.unwrap_or(mid);
            Ok(x.iter().map(|&x| amplitude * (-((x - c) / width).powi(2)).exp()).collect())
        }
        DataSpec::Sech2 { amplitude, width, center } => {
            check_width(*width)?;
            let c = center.unwrap_or(mid);
            Ok(x.iter().map(|&x| amplitude / ((x - c) / width).cosh().powi(2)).collect())
        }
        DataSpec::Zero => Ok(vec![0.0; grid.n]),
        DataSpec::File { path } => {
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .comment(Some(b'#'))
                .trim(csv::Trim::All)
                .from_path(path)
                .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
            let mut xs = Vec::new();
            let mut fs = Vec::new();
            for row in reader.records() {
                let row = row.map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
                let parse = |i: usize| -> Option<f64> { row.get(i)?.parse().ok() };
                match (parse(0), parse(1)) {
                    (Some(x), Some(f)) => {
                        xs.push(x);
                        fs.push(f);
                    }
                    // a non-numeric first row is a header
                    _ if xs.is_empty() => continue,
                    _ => return Err(Error::InvalidParameter(format!("{}: malformed row", path.display()))),
                }
            }
            resample(&xs, &fs, &x)
        }
    }
}

/// Band-limited (trigonometric) interpolation of uniform periodic samples.
fn resample(xs: &[f64], fs: &[f64], targets: &[f64]) -> Result<Vec<f64>> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::InvalidParameter("data file needs at least two samples".into()));
    }
    let h = xs[1] - xs[0];
    if !(h > 0.0) || xs.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0)) {
        return Err(Error::InvalidParameter("data file samples must be uniformly spaced".into()));
    }
    let period = n as f64 * h;
    let c = Transform::new(n).forward_real(fs);
    let half = n / 2;
    Ok(targets
        .iter()
        .map(|&x| {
            let y = x - xs[0];
            let mut acc = c[0].re;
            for k in 1..=half {
                let theta = 2.0 * PI * k as f64 * y / period;
                let (cos, sin) = (theta.cos(), theta.sin());
                if 2 * k == n {
                    // Nyquist mode: symmetric interpolant
                    acc += c[k].re * cos;
                } else {
                    acc += 2.0 * (c[k].re * cos - c[k].im * sin);
                }
            }
            acc
        })
        .collect())
}

/// Runs the configured simulation, recording every `stride` steps and at T.
pub fn simulate(config: &SimulationConfig) -> Result<SimulationOutput> {
    config.grid.validate()?;
    if config.outputs.stride == 0 {
        return Err(Error::InvalidParameter("output stride must be positive".into()));
    }
    let (sys, basis) = config.system.resolve(DEFAULT_TOL)?;
    let u0 = sample_data(&config.data.u, &config.grid)?;
    let v0 = sample_data(&config.data.v, &config.grid)?;
    // data describe the original unknowns; the state holds M⁻¹(u, v)
    let mi = basis.m_inv;
    let p0: Vec<f64> = u0.iter().zip(&v0).map(|(u, v)| mi[0][0] * u + mi[0][1] * v).collect();
    let q0: Vec<f64> = u0.iter().zip(&v0).map(|(u, v)| mi[1][0] * u + mi[1][1] * v).collect();
    let mut state = SpectralState::init(config.grid, sys, &p0, &q0)?;
    let tracker = match &config.system.named {
        Some(kind) if config.system.matrices.is_none() && config.system.coefficients.is_none() => {
            Some(EnergyTracker::new(&state, *kind)?)
        }
        _ => None,
    };
    let s = config.outputs.s;
    let record = |state: &SpectralState| -> Result<SeriesRecord> {
        let report = tracker.as_ref().map(|t| t.report(state)).transpose()?;
        Ok(SeriesRecord {
            t: state.t,
            e1: report.map(|r| r.e1),
            e2: report.map(|r| r.e2),
            norm_u: sobolev_norm_of_coeffs(&state.u_hat, s, state.grid.length),
            norm_v: sobolev_norm_of_coeffs(&state.v_hat, s, state.grid.length),
        })
    };
    let steps = config.grid.steps();
    let mut records = vec![record(&state)?];
    for k in 1..=steps {
        state.step()?;
        if k % config.outputs.stride == 0 || k == steps {
            records.push(record(&state)?);
        }
    }
    let final_report = tracker.as_ref().map(|t| t.report(&state)).transpose()?;
    Ok(SimulationOutput { records, final_report, final_state: Some(state) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::NamedSystem;
    use std::io::Write;

    fn config(kind: NamedSystem, n: usize, t: f64) -> SimulationConfig {
        SimulationConfig {
            system: SystemDocument::from_named(kind),
            grid: Grid::new(40.0 * PI, n, 1e-4, t).unwrap(),
            data: DataSet {
                u: DataSpec::Gaussian { amplitude: 1.0, width: 3.0, center: None },
                v: DataSpec::Gaussian { amplitude: 0.5, width: 3.0, center: None },
            },
            outputs: OutputSpec { stride: 1000, s: 0.0 },
        }
    }

    #[test]
    fn zero_data_gives_zero_series() {
        let mut c = config(NamedSystem::MajdaBiello { a2: 2.0 }, 64, 0.01);
        c.data = DataSet { u: DataSpec::Zero, v: DataSpec::Zero };
        c.outputs.stride = 10;
        let out = simulate(&c).unwrap();
        assert_eq!(out.records.len(), 11);
        assert!(out.records.iter().all(|r| r.e1 == Some(0.0) && r.e2 == Some(0.0) && r.norm_u == 0.0 && r.norm_v == 0.0));
    }

    #[test]
    fn short_mb_run_conserves_e1() {
        let out = simulate(&config(NamedSystem::MajdaBiello { a2: 2.0 }, 128, 0.1)).unwrap();
        let rep = out.final_report.unwrap();
        assert!(rep.relative_drift_e1 < 1e-10 && rep.relative_drift_e2 < 1e-8, "{rep:?}");
    }

    #[test]
    fn refinement_changes_terminal_state_little() {
        let a = simulate(&config(NamedSystem::MajdaBiello { a2: 2.0 }, 256, 0.1)).unwrap();
        let b = simulate(&config(NamedSystem::MajdaBiello { a2: 2.0 }, 512, 0.1)).unwrap();
        let d = a.final_state.unwrap().l2_distance(b.final_state.as_ref().unwrap()).unwrap();
        assert!(d < 1e-8, "{d}");
    }

    #[test]
    fn config_json_round_trip() {
        let c = config(NamedSystem::HirotaSatsuma { a1: 2.0, c12: 1.0 }, 256, 1.0);
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"L\"") && text.contains("\"kind\":\"gaussian\""));
        let back: SimulationConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn file_data_is_resampled() {
        let grid = Grid::new(2.0 * PI, 64, 1e-3, 1.0).unwrap();
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "x,value").unwrap();
        for j in 0..16 {
            let x = 2.0 * PI * j as f64 / 16.0;
            writeln!(f, "{x},{}", (2.0 * x).cos() + 0.5 * x.sin()).unwrap();
        }
        let spec = DataSpec::File { path: f.path().to_path_buf() };
        let got = sample_data(&spec, &grid).unwrap();
        for (x, g) in grid.points().iter().zip(&got) {
            assert!((g - ((2.0 * x).cos() + 0.5 * x.sin())).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_width_is_rejected() {
        let grid = Grid::new(2.0 * PI, 64, 1e-3, 1.0).unwrap();
        assert!(sample_data(&DataSpec::Gaussian { amplitude: 1.0, width: 0.0, center: None }, &grid).is_err());
    }
}
