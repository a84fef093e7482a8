//! Phase functions, resonance functions, the characteristic quadratics and the
//! reduced polynomials that organize the frequency-interaction analysis.

use crate::bracket;
use crate::error::{Error, Result};
use crate::poly::{quadratic_roots_with_disc, Polynomial};
use serde::{Deserialize, Serialize};

/// φ(ξ) = αξ³ − βξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseFunction {
    pub alpha: f64,
    pub beta: f64,
}

impl PhaseFunction {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("phase needs finite α ≠ 0, got α = {alpha}")));
        }
        Ok(Self { alpha, beta })
    }

    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        self.alpha * xi * xi * xi - self.beta * xi
    }
}

pub fn phase_eval(p: &PhaseFunction, xi: f64) -> f64 {
    p.eval(xi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceTriple {
    pub phases: [PhaseFunction; 3],
}

/// A point of the convolution set: Σξᵢ = 0 and Στᵢ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionPoint {
    pub xi: [f64; 3],
    pub tau: [f64; 3],
}

impl ConvolutionPoint {
    pub fn new(xi1: f64, tau1: f64, xi2: f64, tau2: f64) -> Self {
        Self { xi: [xi1, xi2, -(xi1 + xi2)], tau: [tau1, tau2, -(tau1 + tau2)] }
    }
}

/// Lᵢ = τᵢ − φᵢ(ξᵢ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationWeights {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl ModulationWeights {
    pub fn max_bracket(&self) -> f64 {
        bracket(self.l1).max(bracket(self.l2)).max(bracket(self.l3))
    }
}

impl ResonanceTriple {
    pub fn new(phases: [PhaseFunction; 3]) -> Self {
        Self { phases }
    }

    /// All three positions share (α1, β1).
    pub fn h0(p: PhaseFunction) -> Self {
        Self { phases: [p, p, p] }
    }

    /// Positions 1 and 2 share `p1`; position 3 carries `p2`.
    pub fn h1(p1: PhaseFunction, p2: PhaseFunction) -> Self {
        Self { phases: [p1, p1, p2] }
    }

    /// Positions 1 and 3 share `p1`; position 2 carries `p2`.
    pub fn h2(p1: PhaseFunction, p2: PhaseFunction) -> Self {
        Self { phases: [p1, p2, p1] }
    }

    /// H(ξ1, ξ2, −ξ1−ξ2) = Σ φᵢ(ξᵢ).
    pub fn value(&self, xi1: f64, xi2: f64) -> f64 {
        let xi3 = -(xi1 + xi2);
        self.phases[0].eval(xi1) + self.phases[1].eval(xi2) + self.phases[2].eval(xi3)
    }

    pub fn modulations(&self, p: &ConvolutionPoint) -> ModulationWeights {
        ModulationWeights {
            l1: p.tau[0] - self.phases[0].eval(p.xi[0]),
            l2: p.tau[1] - self.phases[1].eval(p.xi[1]),
            l3: p.tau[2] - self.phases[2].eval(p.xi[2]),
        }
    }
}

pub fn resonance_value(t: &ResonanceTriple, xi1: f64, xi2: f64) -> f64 {
    t.value(xi1, xi2)
}

/// `a x² + b x + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Quadratic {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }

    #[inline]
    pub fn deriv(&self, x: f64) -> f64 {
        2.0 * self.a * x + self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootKind {
    NoRealRoots,
    DoubleRoot,
    TwoDistinctRoots,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootClassification {
    pub kind: RootKind,
    pub roots: Vec<f64>,
}

impl RootClassification {
    fn from_roots(roots: Vec<f64>) -> Self {
        let kind = match roots.len() {
            0 => RootKind::NoRealRoots,
            1 => RootKind::DoubleRoot,
            _ => RootKind::TwoDistinctRoots,
        };
        Self { kind, roots }
    }
}

/// h_r(x) = x² + x + (1 − r)/3, whose discriminant is (4r − 1)/3.
pub fn char_quadratic(r: f64) -> (Quadratic, RootClassification) {
    let h = Quadratic { a: 1.0, b: 1.0, c: (1.0 - r) / 3.0 };
    let disc = (4.0 * r - 1.0) / 3.0;
    (h, RootClassification::from_roots(quadratic_roots_with_disc(h.a, h.b, h.c, disc)))
}

/// p_r(x) = x² + 2x + 1 − r, whose discriminant is 4r.
pub fn deriv_quadratic(r: f64) -> (Quadratic, RootClassification) {
    let p = Quadratic { a: 1.0, b: 2.0, c: 1.0 - r };
    let roots = if r > 0.0 {
        vec![-1.0 - r.sqrt(), -1.0 + r.sqrt()]
    } else if r == 0.0 {
        vec![-1.0]
    } else {
        Vec::new()
    };
    (p, RootClassification::from_roots(roots))
}

/// −3α1 ξ3³ h_r(ξ1/ξ3) + (β1 − β2) ξ3, the factored form of the resonance
/// function with positions 1 and 2 sharing (α1, β1). Requires ξ3 ≠ 0.
pub fn h1_factored(p1: &PhaseFunction, p2: &PhaseFunction, xi1: f64, xi2: f64) -> f64 {
    let xi3 = -(xi1 + xi2);
    let (h, _) = char_quadratic(p2.alpha / p1.alpha);
    -3.0 * p1.alpha * xi3 * xi3 * xi3 * h.eval(xi1 / xi3) + (p1.beta - p2.beta) * xi3
}

/// −3α1 ξ2³ h_r(ξ1/ξ2) + (β1 − β2) ξ2, the factored form of the resonance
/// function with positions 1 and 3 sharing (α1, β1). Requires ξ2 ≠ 0.
pub fn h2_factored(p1: &PhaseFunction, p2: &PhaseFunction, xi1: f64, xi2: f64) -> f64 {
    let (h, _) = char_quadratic(p2.alpha / p1.alpha);
    -3.0 * p1.alpha * xi2 * xi2 * xi2 * h.eval(xi1 / xi2) + (p1.beta - p2.beta) * xi2
}

/// P(x) = (α1−α2)x³ + 3α1ξx² + (3α1ξ² + β2 − β1)x + φ^{α1,β1}(ξ) − τ and P′.
pub fn reduced_p(
    xi: f64,
    tau: f64,
    alpha1: f64,
    alpha2: f64,
    beta1: f64,
    beta2: f64,
) -> (Polynomial, Polynomial) {
    let phi = alpha1 * xi * xi * xi - beta1 * xi;
    let p = Polynomial::new(vec![
        phi - tau,
        3.0 * alpha1 * xi * xi + beta2 - beta1,
        3.0 * alpha1 * xi,
        alpha1 - alpha2,
    ]);
    let dp = p.derivative();
    (p, dp)
}

/// Q(x) = 3α1ξx² + 3α1ξ²x + φ^{α1,β1}(ξ) − τ and Q′(x) = 3α1ξ(2x + ξ).
pub fn reduced_q(xi: f64, tau: f64, alpha1: f64, beta1: f64) -> (Quadratic, Quadratic) {
    let phi = alpha1 * xi * xi * xi - beta1 * xi;
    let q = Quadratic { a: 3.0 * alpha1 * xi, b: 3.0 * alpha1 * xi * xi, c: phi - tau };
    let dq = Quadratic { a: 0.0, b: 6.0 * alpha1 * xi, c: 3.0 * alpha1 * xi * xi };
    (q, dq)
}

/// δ1 = inf h_r(x)/(1 + x²) for r < 1/4, with the minimizer.
pub fn coercivity_with_minimizer(r: f64) -> Result<(f64, f64)> {
    if !(r < 0.25) {
        return Err(Error::OutOfDomain(format!("coercivity needs r < 1/4, got {r}")));
    }
    let (h, _) = char_quadratic(r);
    let f = |x: f64| h.eval(x) / (1.0 + x * x);
    // The ratio tends to 1 at ±∞ and dips below 1 near x ≈ 2(1 − c) when the
    // constant term c is large, so the scan window grows with c.
    let reach = 10.0_f64.max(4.0 * (1.0 - h.c).abs() + 10.0);
    let n = 4000;
    let step = 2.0 * reach / n as f64;
    let (mut best_x, mut best) = (-reach, f(-reach));
    for i in 1..=n {
        let x = -reach + i as f64 * step;
        let v = f(x);
        if v < best {
            best = v;
            best_x = x;
        }
    }
    let (x, v) = golden_min(&f, best_x - step, best_x + step);
    Ok((v.min(best), x))
}

pub fn coercivity(r: f64) -> Result<f64> {
    coercivity_with_minimizer(r).map(|(d, _)| d)
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Largest residual of the resonance identities at one point, relative to
/// 1 + the largest term involved: the factored forms of H₁ and H₂, and the
/// pairwise modulation sums L1+L2 = P, L2+L3 = P, L1+L3 = Q for the H₂ triple.
pub fn identity_residual(p1: &PhaseFunction, p2: &PhaseFunction, point: &ConvolutionPoint) -> f64 {
    let [xi1, xi2, xi3] = point.xi;
    let [tau1, tau2, tau3] = point.tau;
    let rel = |a: f64, b: f64, scale: f64| (a - b).abs() / (1.0 + scale);
    let mut worst = 0.0f64;
    if xi3 != 0.0 {
        let scale = p1.eval(xi1).abs().max(p1.eval(xi2).abs()).max(p2.eval(xi3).abs());
        worst = worst.max(rel(h1_factored(p1, p2, xi1, xi2), ResonanceTriple::h1(*p1, *p2).value(xi1, xi2), scale));
    }
    let t2 = ResonanceTriple::h2(*p1, *p2);
    let scale = p1.eval(xi1).abs().max(p2.eval(xi2).abs()).max(p1.eval(xi3).abs());
    if xi2 != 0.0 {
        worst = worst.max(rel(h2_factored(p1, p2, xi1, xi2), t2.value(xi1, xi2), scale));
    }
    let m = t2.modulations(point);
    let scale = m.l1.abs().max(m.l2.abs()).max(m.l3.abs()).max(scale);
    let (a1, a2, b1, b2) = (p1.alpha, p2.alpha, p1.beta, p2.beta);
    worst = worst.max(rel(m.l1 + m.l2, reduced_p(xi3, tau3, a1, a2, b1, b2).0.eval(xi2), scale));
    worst = worst.max(rel(m.l2 + m.l3, reduced_p(xi1, tau1, a1, a2, b1, b2).0.eval(xi2), scale));
    worst = worst.max(rel(m.l1 + m.l3, reduced_q(xi2, tau2, a1, b1).0.eval(xi1), scale));
    worst
}

/// Worst [`identity_residual`] over `samples` seeded random points. Phases
/// are drawn too when `phases` is `None`; coefficients and frequencies lie in
/// [−5, 5] away from zero, modulations in [−500, 500].
pub fn identity_sweep(phases: Option<(PhaseFunction, PhaseFunction)>, samples: usize, seed: u64) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let nonzero = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let v: f64 = rng.gen_range(-5.0..5.0);
        if v.abs() > 1e-3 {
            return v;
        }
    };
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (p1, p2) = match phases {
            Some(p) => p,
            None => (
                PhaseFunction::new(nonzero(&mut rng), nonzero(&mut rng))?,
                PhaseFunction::new(nonzero(&mut rng), nonzero(&mut rng))?,
            ),
        };
        let (xi1, xi2) = (nonzero(&mut rng), nonzero(&mut rng));
        let (tau1, tau2) = (rng.gen_range(-500.0..500.0), rng.gen_range(-500.0..500.0));
        worst = worst.max(identity_residual(&p1, &p2, &ConvolutionPoint::new(xi1, tau1, xi2, tau2)));
    }
    Ok(worst)
}
