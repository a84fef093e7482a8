//! Real polynomials of low degree with real-root isolation.

/// Polynomial with coefficients in ascending order: `c[0] + c[1] x + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![0.0]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// p(-x), which flips the sign of odd coefficients.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    /// Radius beyond which |p(x)| ≥ |leading|·|x|^d / 2.
    pub fn dominance_radius(&self) -> f64 {
        let lead = self.leading().abs();
        let rest: f64 = self.coeffs[..self.degree()].iter().map(|c| c.abs()).sum();
        (2.0 * rest / lead).max(1.0)
    }

    /// Sorted real roots (degree ≤ 3). Double roots appear once.
    pub fn real_roots(&self) -> Vec<f64> {
        match self.degree() {
            0 => Vec::new(),
            1 => vec![-self.coeffs[0] / self.coeffs[1]],
            2 => quadratic_roots(self.coeffs[2], self.coeffs[1], self.coeffs[0]),
            3 => self.cubic_roots(),
            d => panic!("real_roots supports degree ≤ 3, got {d}"),
        }
    }

    fn cubic_roots(&self) -> Vec<f64> {
        let bound = self.dominance_radius() + 1.0;
        let mut knots = vec![-bound];
        knots.extend(self.derivative().real_roots());
        knots.push(bound);
        let scale: f64 = self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
        let mut roots: Vec<f64> = Vec::new();
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (self.eval(a), self.eval(b));
            if fa.abs() <= 1e-13 * scale * (1.0 + a.abs()).powi(3) {
                roots.push(a);
            }
            if fa * fb < 0.0 {
                roots.push(self.bisect(a, b, fa));
            }
            if fb.abs() <= 1e-13 * scale * (1.0 + b.abs()).powi(3) {
                roots.push(b);
            }
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * (1.0 + y.abs()));
        roots
    }

    fn bisect(&self, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m == a || m == b {
                break;
            }
            let fm = self.eval(m);
            if fm == 0.0 {
                return m;
            }
            if fa * fm < 0.0 {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        0.5 * (a + b)
    }
}

/// Real roots of `a x² + b x + c` via the cancellation-free formula, sorted.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    quadratic_roots_with_disc(a, b, c, b * b - 4.0 * a * c)
}

/// Same as [`quadratic_roots`] with a caller-supplied discriminant, so that
/// exactly-known discriminants classify exactly.
pub fn quadratic_roots_with_disc(a: f64, b: f64, c: f64, disc: f64) -> Vec<f64> {
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-b / (2.0 * a) + 0.0];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (x1, x2) = if q == 0.0 {
        let h = disc.sqrt() / (2.0 * a);
        (-h, h)
    } else {
        (q / a, c / q)
    };
    let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    vec![lo + 0.0, hi + 0.0]
}
