//! Coupled KdV–KdV systems in general and diagonal form, diagonalization of
//! the dispersion matrix, and the named physical systems.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub type Mat2 = [[f64; 2]; 2];

/// Default relative tolerance used by [`diagonalize`].
pub const DEFAULT_TOL: f64 = 1e-10;

/// `w_t + A1 w_xxx + A2 w_x = A3 (uu_x, vv_x)ᵀ + A4 (u_x v, u v_x)ᵀ` for `w = (u, v)ᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralSystem {
    #[serde(rename = "A1")]
    pub dispersion: Mat2,
    #[serde(rename = "A2")]
    pub drift: Mat2,
    #[serde(rename = "A3")]
    pub square: Mat2,
    #[serde(rename = "A4")]
    pub mixed: Mat2,
}

/// Diagonal form:
///
/// ```text
/// u_t + a1 u_xxx + b11 u_x = -b12 v_x + c11 uu_x + c12 vv_x + d11 u_x v + d12 u v_x
/// v_t + a2 v_xxx + b22 v_x = -b21 u_x + c21 uu_x + c22 vv_x + d21 u_x v + d22 u v_x
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DiagonalSystem {
    pub a1: f64,
    pub a2: f64,
    #[serde(default)]
    pub b11: f64,
    #[serde(default)]
    pub b12: f64,
    #[serde(default)]
    pub b21: f64,
    #[serde(default)]
    pub b22: f64,
    #[serde(default)]
    pub c11: f64,
    #[serde(default)]
    pub c12: f64,
    #[serde(default)]
    pub c21: f64,
    #[serde(default)]
    pub c22: f64,
    #[serde(default)]
    pub d11: f64,
    #[serde(default)]
    pub d12: f64,
    #[serde(default)]
    pub d21: f64,
    #[serde(default)]
    pub d22: f64,
}

/// Change of unknowns `(u, v)ᵀ = M (p, q)ᵀ` relating a general system to its diagonal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChangeOfBasis {
    pub m: Mat2,
    pub m_inv: Mat2,
}

/// r = a2/a1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionRatio(pub f64);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NamedSystem {
    MajdaBiello {
        a2: f64,
    },
    HirotaSatsuma {
        a1: f64,
        c12: f64,
    },
    GearGrimshaw {
        rho1: f64,
        rho2: f64,
        sigma1: f64,
        sigma2: f64,
        sigma3: f64,
        sigma4: f64,
    },
    BonaChenSaut,
}

impl DiagonalSystem {
    pub fn validate(&self) -> Result<()> {
        let all = self.coefficients();
        if all.iter().any(|(_, c)| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        if self.a1 == 0.0 || self.a2 == 0.0 {
            return Err(Error::InvalidParameter("a1 and a2 must be nonzero".into()));
        }
        Ok(())
    }

    pub fn divergence_form(&self) -> bool {
        self.d11 == self.d12 && self.d21 == self.d22
    }

    /// Named coefficient list in a fixed order.
    pub fn coefficients(&self) -> [(&'static str, f64); 14] {
        [
            ("a1", self.a1),
            ("a2", self.a2),
            ("b11", self.b11),
            ("b12", self.b12),
            ("b21", self.b21),
            ("b22", self.b22),
            ("c11", self.c11),
            ("c12", self.c12),
            ("c21", self.c21),
            ("c22", self.c22),
            ("d11", self.d11),
            ("d12", self.d12),
            ("d21", self.d21),
            ("d22", self.d22),
        ]
    }

    /// Exchanges the roles of the two equations and unknowns.
    pub fn swapped(&self) -> Self {
        Self {
            a1: self.a2,
            a2: self.a1,
            b11: self.b22,
            b12: self.b21,
            b21: self.b12,
            b22: self.b11,
            c11: self.c22,
            c12: self.c21,
            c21: self.c12,
            c22: self.c11,
            d11: self.d22,
            d12: self.d21,
            d21: self.d12,
            d22: self.d11,
        }
    }

    /// Multiplies every quadratic coefficient by `k`.
    pub fn scale_nonlinearity(&self, k: f64) -> Self {
        Self {
            c11: k * self.c11,
            c12: k * self.c12,
            c21: k * self.c21,
            c22: k * self.c22,
            d11: k * self.d11,
            d12: k * self.d12,
            d21: k * self.d21,
            d22: k * self.d22,
            ..*self
        }
    }

    pub fn to_general(&self) -> GeneralSystem {
        GeneralSystem {
            dispersion: [[self.a1, 0.0], [0.0, self.a2]],
            drift: [[self.b11, self.b12], [self.b21, self.b22]],
            square: [[self.c11, self.c12], [self.c21, self.c22]],
            mixed: [[self.d11, self.d12], [self.d21, self.d22]],
        }
    }

    /// Coefficients that are nonzero but within `tol` (relative to the largest
    /// nonlinear or coupling coefficient) of zero, or pairs `d_i1, d_i2` that
    /// nearly coincide. Such values sit next to a discontinuity of the verdict.
    pub fn near_pattern_boundary(&self, tol: f64) -> Vec<String> {
        let coeffs = self.coefficients();
        let scale = coeffs[2..]
            .iter()
            .map(|(_, c)| c.abs())
            .fold(0.0, f64::max)
            .max(1.0);
        let mut out: Vec<String> = coeffs[2..]
            .iter()
            .filter(|(_, c)| *c != 0.0 && c.abs() <= tol * scale)
            .map(|(n, c)| format!("{n} = {c:e} is within tolerance of zero"))
            .collect();
        for (name, x, y) in [("d11/d12", self.d11, self.d12), ("d21/d22", self.d21, self.d22)] {
            if x != y && (x - y).abs() <= tol * scale {
                out.push(format!("{name} differ only by {:e}", (x - y).abs()));
            }
        }
        out
    }
}

impl ChangeOfBasis {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0], [0.0, 1.0]],
            m_inv: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    /// Original unknowns from diagonal ones: `(u, v) = M (p, q)`.
    pub fn to_original(&self, p: f64, q: f64) -> (f64, f64) {
        let m = &self.m;
        (m[0][0] * p + m[0][1] * q, m[1][0] * p + m[1][1] * q)
    }

    pub fn residual(&self) -> f64 {
        let prod = mul(&self.m, &self.m_inv);
        let mut worst: f64 = 0.0;
        for (i, row) in prod.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((x - id).abs());
            }
        }
        worst / max_norm(&self.m).max(1.0)
    }
}

pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn inverse(a: &Mat2) -> Option<Mat2> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some([
        [a[1][1] / det, -a[0][1] / det],
        [-a[1][0] / det, a[0][0] / det],
    ])
}

fn max_norm(a: &Mat2) -> f64 {
    a.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Unit null vector of the 2×2 matrix `A − λI`, sign-normalized so its
/// largest component is positive.
fn eigenvector(a: &Mat2, lambda: f64) -> [f64; 2] {
    let from_row0 = [a[0][1], lambda - a[0][0]];
    let from_row1 = [lambda - a[1][1], a[1][0]];
    let n0 = from_row0[0].hypot(from_row0[1]);
    let n1 = from_row1[0].hypot(from_row1[1]);
    let (v, n) = if n0 >= n1 { (from_row0, n0) } else { (from_row1, n1) };
    let mut v = [v[0] / n, v[1] / n];
    let big = if v[0].abs() >= v[1].abs() { v[0] } else { v[1] };
    if big < 0.0 {
        v = [-v[0], -v[1]];
    }
    v
}

/// Eigendecomposes `A1 = M diag(a1, a2) M⁻¹` and rewrites the system in the
/// unknowns `M⁻¹(u, v)ᵀ`. `tol` is relative to the max-norm of `A1`.
///
/// Ordering: `|a1| ≥ |a2|`, ties broken with the positive eigenvalue first.
pub fn diagonalize(sys: &GeneralSystem, tol: f64) -> Result<(DiagonalSystem, ChangeOfBasis)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let a = &sys.dispersion;
    let scale = max_norm(a);
    if scale == 0.0 {
        return Err(Error::ZeroEigenvalue(0.0));
    }
    let trace = a[0][0] + a[1][1];
    let disc = (a[0][0] - a[1][1]).powi(2) + 4.0 * a[0][1] * a[1][0];
    let sep = disc.abs().sqrt();
    if disc < 0.0 && sep > tol * scale {
        return Err(Error::ComplexEigenvalues(disc));
    }

    let basis = if sep <= tol * scale {
        let lambda = 0.5 * trace;
        let defect = max_norm(&[[a[0][0] - lambda, a[0][1]], [a[1][0], a[1][1] - lambda]]);
        if defect > tol * scale {
            return Err(Error::NonDiagonalizable(lambda));
        }
        if lambda.abs() <= tol * scale {
            return Err(Error::ZeroEigenvalue(lambda));
        }
        (lambda, lambda, ChangeOfBasis::identity())
    } else {
        // Stable pair: the larger-magnitude root from the sum, the other from det/λ.
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let big = 0.5 * (trace + if trace >= 0.0 { sep } else { -sep });
        let small = if big != 0.0 { det / big } else { -0.5 * sep };
        let (mut l1, mut l2) = (big, small);
        let tie = (l1.abs() - l2.abs()).abs() <= tol * scale;
        if l2.abs() > l1.abs() || (tie && l2 > l1) {
            std::mem::swap(&mut l1, &mut l2);
        }
        if l2.abs() <= tol * scale {
            return Err(Error::ZeroEigenvalue(l2));
        }
        let e1 = eigenvector(a, l1);
        let e2 = eigenvector(a, l2);
        let m = [[e1[0], e2[0]], [e1[1], e2[1]]];
        let m_inv = inverse(&m).ok_or(Error::NonDiagonalizable(l1))?;
        (l1, l2, ChangeOfBasis { m, m_inv })
    };
    let (a1, a2, basis) = basis;
    Ok((transform(sys, a1, a2, &basis), basis))
}

/// Applies the substitution `(u, v) = M (p, q)` to the lower-order terms.
fn transform(sys: &GeneralSystem, a1: f64, a2: f64, basis: &ChangeOfBasis) -> DiagonalSystem {
    let m = &basis.m;
    let mi = &basis.m_inv;
    let b = mul(&mul(mi, &sys.drift), m);

    // Rows: uu_x, vv_x, u_x v, u v_x in the old unknowns.
    // Columns: pp_x, qq_x, p_x q, p q_x in the new unknowns.
    let (m11, m12, m21, m22) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let t = [
        [m11 * m11, m12 * m12, m11 * m12, m11 * m12],
        [m21 * m21, m22 * m22, m21 * m22, m21 * m22],
        [m11 * m21, m12 * m22, m11 * m22, m12 * m21],
        [m11 * m21, m12 * m22, m12 * m21, m11 * m22],
    ];
    let mut rhs = [[0.0; 4]; 2];
    for (i, row) in rhs.iter_mut().enumerate() {
        let old = [sys.square[i][0], sys.square[i][1], sys.mixed[i][0], sys.mixed[i][1]];
        for (col, out) in row.iter_mut().enumerate() {
            *out = (0..4).map(|k| old[k] * t[k][col]).sum();
        }
    }
    let mut new = [[0.0; 4]; 2];
    for i in 0..2 {
        for col in 0..4 {
            new[i][col] = mi[i][0] * rhs[0][col] + mi[i][1] * rhs[1][col];
        }
    }
    DiagonalSystem {
        a1,
        a2,
        b11: b[0][0],
        b12: b[0][1],
        b21: b[1][0],
        b22: b[1][1],
        c11: new[0][0],
        c12: new[0][1],
        d11: new[0][2],
        d12: new[0][3],
        c21: new[1][0],
        c22: new[1][1],
        d21: new[1][2],
        d22: new[1][3],
    }
}

pub fn dispersion_ratio(sys: &DiagonalSystem) -> DispersionRatio {
    DispersionRatio(sys.a2 / sys.a1)
}

/// Eigenvalues of the Gear–Grimshaw dispersion matrix, `λ1 ≥ λ2`.
pub fn gg_eigenvalues(rho1: f64, rho2: f64, sigma3: f64) -> (f64, f64) {
    let mean = (rho1 + 1.0) / (2.0 * rho1);
    let radius = ((rho1 - 1.0).powi(2) + 4.0 * rho1 * rho2 * sigma3 * sigma3).sqrt() / (2.0 * rho1);
    (mean + radius, mean - radius)
}

/// True when the Gear–Grimshaw eigenvalue ratio equals 1/4.
pub fn gg_quarter_condition(rho1: f64, rho2: f64, sigma3: f64, tol: f64) -> bool {
    let k = rho2 * sigma3 * sigma3;
    let quad = rho1 * rho1 + (25.0 * k - 17.0) / 4.0 * rho1 + 1.0;
    k <= 9.0 / 25.0 + tol && quad.abs() <= tol
}

impl NamedSystem {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        match *self {
            NamedSystem::MajdaBiello { a2 } => {
                if a2 == 0.0 || !a2.is_finite() {
                    return bad("Majda-Biello requires a finite a2 ≠ 0");
                }
            }
            NamedSystem::HirotaSatsuma { a1, c12 } => {
                if a1 == 0.0 || !a1.is_finite() || !c12.is_finite() {
                    return bad("Hirota-Satsuma requires a finite a1 ≠ 0");
                }
            }
            NamedSystem::GearGrimshaw { rho1, rho2, sigma1, sigma2, sigma3, sigma4 } => {
                if !(rho1 > 0.0 && rho2 > 0.0) {
                    return bad("Gear-Grimshaw requires rho1, rho2 > 0");
                }
                if ![rho1, rho2, sigma1, sigma2, sigma3, sigma4].iter().all(|x| x.is_finite()) {
                    return bad("Gear-Grimshaw parameters must be finite");
                }
            }
            NamedSystem::BonaChenSaut => {}
        }
        Ok(())
    }

    /// Short tag used in reports and on the command line.
    pub fn tag(&self) -> &'static str {
        match self {
            NamedSystem::MajdaBiello { .. } => "majda-biello",
            NamedSystem::HirotaSatsuma { .. } => "hirota-satsuma",
            NamedSystem::GearGrimshaw { .. } => "gear-grimshaw",
            NamedSystem::BonaChenSaut => "bona-chen-saut",
        }
    }

    /// Diagonal form. Systems whose dispersion matrix is already diagonal keep
    /// their own unknown order; the others go through [`diagonalize`].
    pub fn diagonal_form(&self, tol: f64) -> Result<(DiagonalSystem, ChangeOfBasis)> {
        self.validate()?;
        match *self {
            NamedSystem::MajdaBiello { a2 } => Ok((
                DiagonalSystem {
                    a1: 1.0,
                    a2,
                    c12: -1.0,
                    d21: -1.0,
                    d22: -1.0,
                    ..Default::default()
                },
                ChangeOfBasis::identity(),
            )),
            NamedSystem::HirotaSatsuma { a1, c12 } => Ok((
                DiagonalSystem {
                    a1,
                    a2: 1.0,
                    c11: -6.0 * a1,
                    c12,
                    d22: -3.0,
                    ..Default::default()
                },
                ChangeOfBasis::identity(),
            )),
            _ => diagonalize(&named_system(self)?, tol),
        }
    }
}

/// Coefficient matrices of a named system in the general form.
pub fn named_system(kind: &NamedSystem) -> Result<GeneralSystem> {
    kind.validate()?;
    let zero = [[0.0; 2]; 2];
    Ok(match *kind {
        NamedSystem::MajdaBiello { a2 } => GeneralSystem {
            dispersion: [[1.0, 0.0], [0.0, a2]],
            drift: zero,
            square: [[0.0, -1.0], [0.0, 0.0]],
            mixed: [[0.0, 0.0], [-1.0, -1.0]],
        },
        NamedSystem::HirotaSatsuma { a1, c12 } => GeneralSystem {
            dispersion: [[a1, 0.0], [0.0, 1.0]],
            drift: zero,
            square: [[-6.0 * a1, c12], [0.0, 0.0]],
            mixed: [[0.0, 0.0], [0.0, -3.0]],
        },
        NamedSystem::GearGrimshaw { rho1, rho2, sigma1, sigma2, sigma3, sigma4 } => GeneralSystem {
            dispersion: [[1.0, sigma3], [rho2 * sigma3 / rho1, 1.0 / rho1]],
            drift: [[0.0, 0.0], [0.0, sigma4 / rho1]],
            square: [[-1.0, sigma1], [rho2 * sigma2 / rho1, -1.0 / rho1]],
            mixed: [
                [sigma2, sigma2],
                [rho2 * sigma1 / rho1, rho2 * sigma1 / rho1],
            ],
        },
        NamedSystem::BonaChenSaut => GeneralSystem {
            dispersion: [[0.0, 1.0 / 6.0], [1.0 / 6.0, 0.0]],
            drift: [[0.0, 1.0], [1.0, 0.0]],
            square: [[0.0, 0.0], [0.0, -1.0]],
            mixed: [[-1.0, -1.0], [0.0, 0.0]],
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    General,
    Diagonal,
}

/// JSON document describing a system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub form: Form,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<GeneralSystem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<DiagonalSystem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<NamedSystem>,
}

impl SystemDocument {
    pub fn from_named(named: NamedSystem) -> Self {
        Self { form: Form::General, matrices: None, coefficients: None, named: Some(named) }
    }

    pub fn from_diagonal(sys: DiagonalSystem) -> Self {
        Self { form: Form::Diagonal, matrices: None, coefficients: Some(sys), named: None }
    }

    /// Diagonal system and change of basis described by the document.
    pub fn resolve(&self, tol: f64) -> Result<(DiagonalSystem, ChangeOfBasis)> {
        match (self.form, &self.matrices, &self.coefficients, &self.named) {
            (Form::Diagonal, _, Some(c), _) => {
                c.validate()?;
                Ok((*c, ChangeOfBasis::identity()))
            }
            (Form::General, Some(m), _, _) => diagonalize(m, tol),
            (_, None, None, Some(named)) => named.diagonal_form(tol),
            (Form::Diagonal, ..) => Err(Error::InvalidParameter(
                "diagonal form requires a `coefficients` object".into(),
            )),
            (Form::General, ..) => Err(Error::InvalidParameter(
                "general form requires a `matrices` object or a `named` constructor".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn diagonal_input_is_left_alone() {
        let sys = GeneralSystem {
            dispersion: [[2.0, 0.0], [0.0, -1.0]],
            drift: [[0.0; 2]; 2],
            square: [[0.0; 2]; 2],
            mixed: [[0.0; 2]; 2],
        };
        let (d, basis) = diagonalize(&sys, DEFAULT_TOL).unwrap();
        assert_eq!((d.a1, d.a2), (2.0, -1.0));
        assert_eq!(basis.m, ChangeOfBasis::identity().m);
        assert!(d.coefficients()[2..].iter().all(|(_, c)| *c == 0.0));
    }

    #[test]
    fn ordering_puts_larger_magnitude_first() {
        let sys = GeneralSystem {
            dispersion: [[1.0, 0.0], [0.0, 4.0]],
            drift: [[0.0; 2]; 2],
            square: [[1.0, 2.0], [3.0, 4.0]],
            mixed: [[5.0, 6.0], [7.0, 8.0]],
        };
        let (d, _) = diagonalize(&sys, DEFAULT_TOL).unwrap();
        assert_eq!((d.a1, d.a2), (4.0, 1.0));
        // The permutation swaps the equations, which swaps the coefficient roles.
        assert_eq!((d.c11, d.c12, d.c21, d.c22), (4.0, 3.0, 2.0, 1.0));
        assert_eq!((d.d11, d.d12, d.d21, d.d22), (8.0, 7.0, 6.0, 5.0));
    }

    #[test]
    fn gear_grimshaw_diagonalization() {
        let gg = NamedSystem::GearGrimshaw {
            rho1: 1.0,
            rho2: 4.0,
            sigma1: 0.3,
            sigma2: -0.7,
            sigma3: 1.0,
            sigma4: 0.2,
        };
        let (d, basis) = gg.diagonal_form(DEFAULT_TOL).unwrap();
        assert!(close(d.a1, 3.0, 1e-12) && close(d.a2, -1.0, 1e-12));
        assert!(close(dispersion_ratio(&d).0, -1.0 / 3.0, 1e-12));
        // Divergence form survives the change of unknowns.
        assert!(close(d.d11, d.d12, 1e-12) && close(d.d21, d.d22, 1e-12));
        assert!(basis.residual() <= 1e-12);
    }

    #[test]
    fn gear_grimshaw_zero_eigenvalue() {
        let gg = NamedSystem::GearGrimshaw {
            rho1: 1.0,
            rho2: 1.0,
            sigma1: 0.0,
            sigma2: 0.0,
            sigma3: 1.0,
            sigma4: 0.0,
        };
        assert!(matches!(gg.diagonal_form(DEFAULT_TOL), Err(Error::ZeroEigenvalue(_))));
    }

    #[test]
    fn defective_and_complex_cases() {
        let jordan = GeneralSystem {
            dispersion: [[1.0, 1.0], [0.0, 1.0]],
            drift: [[0.0; 2]; 2],
            square: [[0.0; 2]; 2],
            mixed: [[0.0; 2]; 2],
        };
        assert!(matches!(diagonalize(&jordan, DEFAULT_TOL), Err(Error::NonDiagonalizable(_))));
        let rotation = GeneralSystem { dispersion: [[0.0, -1.0], [1.0, 0.0]], ..jordan };
        assert!(matches!(diagonalize(&rotation, DEFAULT_TOL), Err(Error::ComplexEigenvalues(_))));
        let scalar = GeneralSystem { dispersion: [[2.0, 0.0], [0.0, 2.0]], ..jordan };
        assert_eq!(diagonalize(&scalar, DEFAULT_TOL).unwrap().0.a2, 2.0);
    }

    #[test]
    fn named_constructors() {
        let (mb, _) = NamedSystem::MajdaBiello { a2: 2.0 }.diagonal_form(DEFAULT_TOL).unwrap();
        assert_eq!(
            mb,
            DiagonalSystem { a1: 1.0, a2: 2.0, c12: -1.0, d21: -1.0, d22: -1.0, ..Default::default() }
        );
        let (hs, _) = NamedSystem::HirotaSatsuma { a1: 2.0, c12: 1.0 }
            .diagonal_form(DEFAULT_TOL)
            .unwrap();
        assert_eq!((hs.c11, hs.d22, hs.a2, hs.c12), (-12.0, -3.0, 1.0, 1.0));
        let bcs = named_system(&NamedSystem::BonaChenSaut).unwrap();
        assert_eq!(bcs.dispersion, [[0.0, 1.0 / 6.0], [1.0 / 6.0, 0.0]]);
        let (d, _) = NamedSystem::BonaChenSaut.diagonal_form(DEFAULT_TOL).unwrap();
        assert!(close(d.a1, 1.0 / 6.0, 1e-14) && close(d.a2, -1.0 / 6.0, 1e-14));
        assert!(NamedSystem::MajdaBiello { a2: 0.0 }.validate().is_err());
        assert!(named_system(&NamedSystem::GearGrimshaw {
            rho1: -1.0,
            rho2: 1.0,
            sigma1: 0.0,
            sigma2: 0.0,
            sigma3: 0.0,
            sigma4: 0.0
        })
        .is_err());
    }

    #[test]
    fn named_general_and_diagonal_forms_agree() {
        // The general-form matrices of Majda-Biello are already diagonal with
        // |a1| ≥ |a2| when a2 = 1/2, so both routes must coincide.
        let named = NamedSystem::MajdaBiello { a2: 0.5 };
        let via_general = diagonalize(&named_system(&named).unwrap(), DEFAULT_TOL).unwrap().0;
        assert_eq!(via_general, named.diagonal_form(DEFAULT_TOL).unwrap().0);
    }

    #[test]
    fn gg_eigenvalue_examples() {
        assert_eq!(gg_eigenvalues(1.0, 4.0, 1.0), (3.0, -1.0));
        assert_eq!(gg_eigenvalues(1.0, 1.0, 0.0), (1.0, 1.0));
        let (l1, l2) = gg_eigenvalues(1.0, 9.0 / 25.0, 1.0);
        assert!(close(l1, 1.6, 1e-15) && close(l2, 0.4, 1e-15));
        assert!(gg_quarter_condition(1.0, 9.0 / 25.0, 1.0, 1e-12));
        assert!(!gg_quarter_condition(1.0, 1.0, 0.0, 1e-12));
        assert!(!gg_quarter_condition(1.0, 1.0, 1.0, 1e-12));
    }

    #[test]
    fn document_round_trip() {
        let doc = SystemDocument::from_named(NamedSystem::GearGrimshaw {
            rho1: 2.0,
            rho2: 1.0,
            sigma1: 0.1,
            sigma2: 0.2,
            sigma3: 0.3,
            sigma4: 0.4,
        });
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains("\"rho1\":2.0") && text.contains("\"kind\":\"gear-grimshaw\""));
        let back: SystemDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        let diag: SystemDocument =
            serde_json::from_str(r#"{"form":"diagonal","coefficients":{"a1":1,"a2":4,"c12":2}}"#)
                .unwrap();
        let (d, _) = diag.resolve(DEFAULT_TOL).unwrap();
        assert_eq!((d.a2, d.c12, d.d22), (4.0, 2.0, 0.0));
        let general: SystemDocument = serde_json::from_str(
            r#"{"form":"general","matrices":{"A1":[[2,0],[0,-1]],"A2":[[0,0],[0,0]],"A3":[[0,0],[0,0]],"A4":[[0,0],[0,0]]}}"#,
        )
        .unwrap();
        assert_eq!(general.resolve(DEFAULT_TOL).unwrap().0.a1, 2.0);
        let broken: SystemDocument = serde_json::from_str(r#"{"form":"diagonal"}"#).unwrap();
        assert!(broken.resolve(DEFAULT_TOL).is_err());
    }

    #[test]
    fn near_boundary_warnings() {
        let sys = DiagonalSystem { a1: 1.0, a2: 2.0, c12: 1.0, d11: 1e-13, ..Default::default() };
        let w = sys.near_pattern_boundary(1e-10);
        assert_eq!(w.len(), 2);
        assert!(sys.swapped().swapped() == sys);
    }
}
