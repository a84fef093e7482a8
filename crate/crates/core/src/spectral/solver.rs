//! Integrating-factor RK4 for diagonal systems on a periodic grid.

use super::fourier::{dealias_mask, signed_index, wavenumbers, Transform};
use super::Grid;
use crate::error::{Error, Result};
use crate::system::DiagonalSystem;
use num_complex::Complex64;

const BLOWUP: f64 = 1e12;

#[derive(Debug, Clone)]
struct Factors {
    h: f64,
    full: [Vec<Complex64>; 2],
    half: [Vec<Complex64>; 2],
}

/// Fourier coefficients of (u, v) with c_k = FFT/N, so u(x_j) = Σ c_k e^{iξ_k x_j}.
#[derive(Debug, Clone)]
pub struct SpectralState {
    pub u_hat: Vec<Complex64>,
    pub v_hat: Vec<Complex64>,
    pub t: f64,
    pub sys: DiagonalSystem,
    pub grid: Grid,
    xi: Vec<f64>,
    mask: Vec<bool>,
    transform: Transform,
    factors: Option<Factors>,
}

impl SpectralState {
    /// Transforms sampled data and applies the dealiasing mask.
    pub fn init(grid: Grid, sys: DiagonalSystem, u0: &[f64], v0: &[f64]) -> Result<Self> {
        grid.validate()?;
        sys.validate()?;
        for (name, f) in [("u0", u0), ("v0", v0)] {
            if f.len() != grid.n {
                return Err(Error::GridMismatch(format!(
                    "{name} has {} samples, grid has N = {}",
                    f.len(),
                    grid.n
                )));
            }
        }
        let transform = Transform::new(grid.n);
        let mask = dealias_mask(grid.n);
        let mut u_hat = transform.forward_real(u0);
        let mut v_hat = transform.forward_real(v0);
        apply_mask(&mut u_hat, &mask);
        apply_mask(&mut v_hat, &mask);
        Ok(Self {
            u_hat,
            v_hat,
            t: 0.0,
            sys,
            xi: wavenumbers(grid.n, grid.length),
            mask,
            transform,
            factors: None,
            grid,
        })
    }

    /// Samples `u0`, `v0` at the grid points.
    pub fn init_fn(
        grid: Grid,
        sys: DiagonalSystem,
        u0: impl Fn(f64) -> f64,
        v0: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let x = grid.points();
        let u: Vec<f64> = x.iter().map(|&x| u0(x)).collect();
        let v: Vec<f64> = x.iter().map(|&x| v0(x)).collect();
        Self::init(grid, sys, &u, &v)
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.xi
    }

    pub fn u(&self) -> Vec<f64> {
        self.transform.inverse_real(&self.u_hat)
    }

    pub fn v(&self) -> Vec<f64> {
        self.transform.inverse_real(&self.v_hat)
    }

    /// Largest imaginary part of the inverse-transformed fields relative to their sup norm.
    pub fn imaginary_ratio(&self) -> f64 {
        [&self.u_hat, &self.v_hat]
            .iter()
            .map(|c| {
                let f = self.transform.inverse(c);
                let im = f.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
                let re = f.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
                if re == 0.0 {
                    im
                } else {
                    im / re
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn max_coefficient(&self) -> f64 {
        self.u_hat.iter().chain(&self.v_hat).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Advances by the grid's dt.
    pub fn step(&mut self) -> Result<()> {
        self.step_by(self.grid.dt)
    }

    /// Advances by `h` (negative values integrate backwards).
    pub fn step_by(&mut self, h: f64) -> Result<()> {
        if self.factors.as_ref().map(|f| f.h) != Some(h) {
            self.factors = Some(self.make_factors(h));
        }
        let f = self.factors.take().expect("factors set above");
        let c = [self.u_hat.clone(), self.v_hat.clone()];
        let a = self.rhs(&c, h);
        let stage = |k: &[Vec<Complex64>; 2], base: &[Vec<Complex64>; 2], w: f64, e: &[Vec<Complex64>; 2]| {
            let mut out = [vec![], vec![]];
            for i in 0..2 {
                out[i] = base[i]
                    .iter()
                    .zip(&k[i])
                    .zip(&e[i])
                    .map(|((b, k), e)| e * b + e * k * w)
                    .collect();
            }
            out
        };
        // E2 (c + a/2)
        let b = self.rhs(&stage(&a, &c, 0.5, &f.half), h);
        // E2 c + b/2
        let mut s3 = [vec![], vec![]];
        for i in 0..2 {
            s3[i] = c[i].iter().zip(&b[i]).zip(&f.half[i]).map(|((c, b), e)| e * c + b * 0.5).collect();
        }
        let cc = self.rhs(&s3, h);
        // E c + E2 cc
        let mut s4 = [vec![], vec![]];
        for i in 0..2 {
            s4[i] = c[i]
                .iter()
                .zip(&cc[i])
                .zip(f.full[i].iter().zip(&f.half[i]))
                .map(|((c, k), (e, e2))| e * c + e2 * k)
                .collect();
        }
        let d = self.rhs(&s4, h);
        for i in 0..2 {
            let target = if i == 0 { &mut self.u_hat } else { &mut self.v_hat };
            for j in 0..target.len() {
                let (e, e2) = (f.full[i][j], f.half[i][j]);
                target[j] = e * c[i][j] + (e * a[i][j] + e2 * (b[i][j] + cc[i][j]) * 2.0 + d[i][j]) / 6.0;
            }
            apply_mask(target, &self.mask);
        }
        self.factors = Some(f);
        self.t += h;
        let max = self.max_coefficient();
        if !max.is_finite() || max > BLOWUP {
            return Err(Error::Blowup { t: self.t, max_coeff: max });
        }
        Ok(())
    }

    /// Runs `steps` steps of size dt.
    pub fn advance(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    /// L² distance between the fields of two states on the same box, matching modes by index.
    pub fn l2_distance(&self, other: &SpectralState) -> Result<f64> {
        if (self.grid.length - other.grid.length).abs() > 1e-12 * self.grid.length {
            return Err(Error::GridMismatch("states live on boxes of different length".into()));
        }
        let mut sum = 0.0;
        for (a, b) in [(&self.u_hat, &other.u_hat), (&self.v_hat, &other.v_hat)] {
            let (na, nb) = (a.len(), b.len());
            let lookup = |c: &[Complex64], n: usize, k: i64| -> Complex64 {
                if 2 * k.unsigned_abs() >= n as u64 {
                    return Complex64::new(0.0, 0.0);
                }
                c[k.rem_euclid(n as i64) as usize]
            };
            let m = na.max(nb);
            for j in 0..m {
                let k = signed_index(j, m);
                sum += (lookup(a, na, k) - lookup(b, nb, k)).norm_sqr();
            }
        }
        Ok((self.grid.length * sum).sqrt())
    }

    fn make_factors(&self, h: f64) -> Factors {
        let s = &self.sys;
        let phase = |a: f64, b: f64, frac: f64| -> Vec<Complex64> {
            self.xi
                .iter()
                .map(|&x| Complex64::from_polar(1.0, (a * x * x * x - b * x) * h * frac))
                .collect()
        };
        Factors {
            h,
            full: [phase(s.a1, s.b11, 1.0), phase(s.a2, s.b22, 1.0)],
            half: [phase(s.a1, s.b11, 0.5), phase(s.a2, s.b22, 0.5)],
        }
    }

    /// h times the interaction-picture-free right-hand side: coupling plus quadratic terms.
    fn rhs(&self, c: &[Vec<Complex64>; 2], h: f64) -> [Vec<Complex64>; 2] {
        let s = &self.sys;
        let deriv = |f: &[Complex64]| -> Vec<Complex64> {
            f.iter().zip(&self.xi).map(|(z, &x)| z * Complex64::new(0.0, x)).collect()
        };
        let ux_hat = deriv(&c[0]);
        let vx_hat = deriv(&c[1]);
        let u = self.transform.inverse_real(&c[0]);
        let v = self.transform.inverse_real(&c[1]);
        let ux = self.transform.inverse_real(&ux_hat);
        let vx = self.transform.inverse_real(&vx_hat);
        let n = u.len();
        let mut nu = Vec::with_capacity(n);
        let mut nv = Vec::with_capacity(n);
        for j in 0..n {
            let (u, v, ux, vx) = (u[j], v[j], ux[j], vx[j]);
            nu.push(Complex64::new(
                s.c11 * u * ux + s.c12 * v * vx + s.d11 * ux * v + s.d12 * u * vx,
                0.0,
            ));
            nv.push(Complex64::new(
                s.c21 * u * ux + s.c22 * v * vx + s.d21 * ux * v + s.d22 * u * vx,
                0.0,
            ));
        }
        self.transform.forward_in_place(&mut nu);
        self.transform.forward_in_place(&mut nv);
        for j in 0..n {
            nu[j] = (nu[j] - vx_hat[j] * s.b12) * h;
            nv[j] = (nv[j] - ux_hat[j] * s.b21) * h;
        }
        apply_mask(&mut nu, &self.mask);
        apply_mask(&mut nv, &self.mask);
        [nu, nv]
    }
}

fn apply_mask(c: &mut [Complex64], mask: &[bool]) {
    for (z, &keep) in c.iter_mut().zip(mask) {
        if !keep {
            *z = Complex64::new(0.0, 0.0);
        }
    }
}

/// Sup norm of the samples within `margin` points of either end of the box.
pub fn edge_magnitude(samples: &[f64], margin: usize) -> f64 {
    let n = samples.len();
    let m = margin.min(n / 2);
    samples[..m].iter().chain(&samples[n - m..]).map(|x| x.abs()).fold(0.0, f64::max)
}
