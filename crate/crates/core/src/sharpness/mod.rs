//! Counterexample box families for the bilinear estimates: construction,
//! Minkowski containment, convolution masses and growth of the test ratio.

mod conditions;
mod families;
mod measure;

pub use conditions::{feasible, necessary_conditions, NecessaryCondition};
pub use families::{build_family, BoxFamily, FamilyParams, FamilyTag, Numerator, Quantity, ScaleRecord};
pub use measure::{
    brute_force_mass, convolution_mass, fit_growth, minkowski_containment, ratio_estimate,
    scale_check, ScaleReport,
};

use serde::{Deserialize, Serialize};

/// Smallest N accepted by the builders.
pub const N_MIN: f64 = 16.0;

/// τ = cubic·ξ³ + linear·ξ + constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterCurve {
    pub cubic: f64,
    pub linear: f64,
    pub constant: f64,
}

impl CenterCurve {
    /// The phase curve τ = αξ³ − βξ.
    pub fn phase(alpha: f64, beta: f64) -> Self {
        Self { cubic: alpha, linear: -beta, constant: 0.0 }
    }

    pub fn affine(constant: f64, linear: f64) -> Self {
        Self { cubic: 0.0, linear, constant }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        (self.cubic * xi * xi + self.linear) * xi + self.constant
    }
}

/// {(ξ, τ) : ξ_lo ≤ ξ ≤ ξ_hi, inner ≤ |τ − g(ξ)| ≤ half_width}. A zero inner
/// half-width gives the plain strip around the curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSet {
    pub xi_lo: f64,
    pub xi_hi: f64,
    pub center: CenterCurve,
    pub half_width: f64,
    #[serde(default)]
    pub inner_half_width: f64,
}

impl BoxSet {
    pub fn strip(xi_lo: f64, xi_hi: f64, center: CenterCurve, half_width: f64) -> Self {
        Self { xi_lo, xi_hi, center, half_width, inner_half_width: 0.0 }
    }

    pub fn annulus(xi_lo: f64, xi_hi: f64, center: CenterCurve, inner: f64, outer: f64) -> Self {
        Self { xi_lo, xi_hi, center, half_width: outer, inner_half_width: inner }
    }

    pub fn area(&self) -> f64 {
        2.0 * (self.half_width - self.inner_half_width) * (self.xi_hi - self.xi_lo)
    }

    /// Membership with absolute slack `eps_xi`, `eps_tau` for rounding.
    pub fn contains_with_slack(&self, xi: f64, tau: f64, eps_xi: f64, eps_tau: f64) -> bool {
        let d = (tau - self.center.eval(xi)).abs();
        xi >= self.xi_lo - eps_xi
            && xi <= self.xi_hi + eps_xi
            && d <= self.half_width + eps_tau
            && d >= self.inner_half_width - eps_tau
    }

    pub fn contains(&self, xi: f64, tau: f64) -> bool {
        self.contains_with_slack(xi, tau, 0.0, 0.0)
    }

    /// m×m sample points, endpoints included. Offsets run over both bands of an annulus.
    pub fn grid(&self, m: usize) -> Vec<(f64, f64)> {
        let m = m.max(2);
        let step = |i: usize| i as f64 / (m - 1) as f64;
        let mut out = Vec::with_capacity(m * m);
        for i in 0..m {
            let xi = self.xi_lo + (self.xi_hi - self.xi_lo) * step(i);
            let g = self.center.eval(xi);
            for j in 0..m {
                let u = 2.0 * step(j) - 1.0;
                let mag = self.inner_half_width + u.abs() * (self.half_width - self.inner_half_width);
                out.push((xi, g + mag.copysign(u)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_formula() {
        let b = BoxSet::strip(-1.0, 2.0, CenterCurve::phase(1.0, 0.0), 0.5);
        assert_eq!(b.area(), 3.0);
        let a = BoxSet::annulus(0.0, 1.0, CenterCurve::affine(0.0, 0.0), 1.0, 3.0);
        assert_eq!(a.area(), 4.0);
    }

    #[test]
    fn grid_points_are_members() {
        let a = BoxSet::annulus(2.0, 3.0, CenterCurve::phase(-2.0, 1.0), 0.5, 1.0);
        assert!(a.grid(6).iter().all(|&(x, t)| a.contains_with_slack(x, t, 1e-12, 1e-12)));
        assert!(!a.contains(2.5, a.center.eval(2.5)));
    }
}
