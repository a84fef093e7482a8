//! Decay integrals of algebraic weights ∫ Π⟨pᵢ(x)⟩^{-ρᵢ} dx over the real line,
//! the lemma sweeps built on them, and the linear coupling supremum.

pub(crate) mod adaptive;
pub mod coupling;
pub mod lemmas;

pub use coupling::{coupling_growth, coupling_supremum, CouplingEstimate, SearchDomain};
pub use lemmas::{
    cubic_sharp_bound, lemma_suite, poly_decay_integral, quad_sharp_bound, sharp_cubic_family,
    tau_convolution, LemmaCheck,
};

use crate::bracket;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use serde::{Deserialize, Serialize};

const TAIL_FRACTION: f64 = 1e-8;
const REL_TOL: f64 = 1e-11;
const MAX_PANELS: usize = 20_000;
const MAX_RADIUS: f64 = 1e200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub est_error: f64,
    pub truncation_radius: f64,
}

/// One factor ⟨p(x)⟩^{-ρ} of an integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub poly: Polynomial,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicIntegrand {
    factors: Vec<Factor>,
}

impl AlgebraicIntegrand {
    pub fn new(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    pub fn single(poly: Polynomial, rho: f64) -> Self {
        Self::new(vec![Factor { poly, rho }])
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.factors.iter().map(|f| bracket(f.poly.eval(x)).powf(-f.rho)).product()
    }

    /// Total algebraic decay rate p: the integrand is O(|x|^{-p}).
    pub fn decay_rate(&self) -> f64 {
        self.factors.iter().map(|f| f.poly.degree() as f64 * f.rho).sum()
    }

    fn dominance_radius(&self) -> f64 {
        self.factors
            .iter()
            .filter(|f| f.poly.degree() > 0 && f.rho != 0.0)
            .map(|f| f.poly.dominance_radius())
            .fold(1.0, f64::max)
    }

    /// Bound on the integral over |x| ≥ radius, valid beyond the dominance radius.
    fn tail_bound(&self, radius: f64) -> f64 {
        let p = self.decay_rate();
        let k: f64 = self
            .factors
            .iter()
            .map(|f| {
                if f.poly.degree() == 0 {
                    bracket(f.poly.leading()).powf(-f.rho)
                } else {
                    (f.poly.leading().abs() / 2.0).powf(-f.rho)
                }
            })
            .product();
        2.0 * k * radius.powf(1.0 - p) / (p - 1.0)
    }

    fn knots(&self, radius: f64) -> Vec<f64> {
        let mut centres = vec![0.0];
        for f in &self.factors {
            centres.extend(f.poly.real_roots());
            if f.poly.degree() >= 2 {
                centres.extend(f.poly.derivative().real_roots());
            }
        }
        let mut knots = vec![-radius, radius];
        let top = radius.log10().ceil() as i32 + 1;
        for c in centres {
            knots.push(c);
            for k in -3..=top {
                let d = 10f64.powi(k);
                knots.push(c - d);
                knots.push(c + d);
            }
        }
        knots.retain(|x| x.abs() <= radius && x.is_finite());
        knots.sort_by(f64::total_cmp);
        knots.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (1.0 + y.abs()));
        knots
    }

    /// Integrates over ℝ: [-R, R] adaptively plus an analytic tail allowance.
    pub fn integrate(&self) -> Result<IntegralResult> {
        let p = self.decay_rate();
        if p <= 1.0 {
            return Err(Error::NonIntegrable(format!("integrand decays like |x|^-{p}, need > 1")));
        }
        let r0 = self.dominance_radius();
        let f = |x: f64| self.eval(x);
        let (core, _) = adaptive::integrate(&f, &self.knots(r0), 0.0, 1e-6, MAX_PANELS);
        // Radius at which the tail drops below the target share of the core value.
        let need = 2.0 * self.tail_bound(1.0) / (TAIL_FRACTION * core);
        let radius = need.powf(1.0 / (p - 1.0)).clamp(r0, MAX_RADIUS);
        let (value, err) = adaptive::integrate(&f, &self.knots(radius), 0.0, REL_TOL, MAX_PANELS);
        let tail = self.tail_bound(radius);
        if !value.is_finite() {
            return Err(Error::NonIntegrable("quadrature produced a non-finite value".into()));
        }
        Ok(IntegralResult { value, est_error: err + tail, truncation_radius: radius })
    }
}
