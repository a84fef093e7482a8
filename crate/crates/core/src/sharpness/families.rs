//! The eight box families and their predicted scalings.

use super::{BoxSet, CenterCurve, N_MIN};
use crate::error::{Error, Result};
use crate::resonance::PhaseFunction;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    ClaimA,
    ClaimB,
    Case3ThmA,
    #[serde(rename = "D1_neg")]
    D1Neg,
    #[serde(rename = "D2_pos_small")]
    D2PosSmall,
    #[serde(rename = "ND1_neg")]
    Nd1Neg,
    #[serde(rename = "ND1_quarter")]
    Nd1Quarter,
    #[serde(rename = "ND1_equal")]
    Nd1Equal,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 8] = [
        FamilyTag::ClaimA,
        FamilyTag::ClaimB,
        FamilyTag::Case3ThmA,
        FamilyTag::D1Neg,
        FamilyTag::D2PosSmall,
        FamilyTag::Nd1Neg,
        FamilyTag::Nd1Quarter,
        FamilyTag::Nd1Equal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::ClaimA => "ClaimA",
            FamilyTag::ClaimB => "ClaimB",
            FamilyTag::Case3ThmA => "Case3ThmA",
            FamilyTag::D1Neg => "D1_neg",
            FamilyTag::D2PosSmall => "D2_pos_small",
            FamilyTag::Nd1Neg => "ND1_neg",
            FamilyTag::Nd1Quarter => "ND1_quarter",
            FamilyTag::Nd1Equal => "ND1_equal",
        }
    }

    /// Exponent of N in the test ratio, as (coefficient of s, coefficient of b, constant).
    pub fn exponent_form(self) -> (f64, f64, f64) {
        match self {
            FamilyTag::ClaimA => (-2.0, 3.0, -4.0),
            FamilyTag::ClaimB => (-1.0, -3.0, 0.75),
            FamilyTag::Case3ThmA => (-1.0, 3.0, -3.0),
            FamilyTag::D1Neg | FamilyTag::Nd1Neg => (-2.0, 0.0, -1.5),
            FamilyTag::D2PosSmall => (-1.0, 3.0, -2.25),
            FamilyTag::Nd1Quarter => (-1.0, 0.0, 0.75),
            FamilyTag::Nd1Equal => (-2.0, 0.0, 0.0),
        }
    }

    pub fn predicted_ratio_exponent(self, s: f64, b: f64) -> f64 {
        let (cs, cb, c0) = self.exponent_form();
        cs * s + cb * b + c0
    }

    /// Default dispersion coefficients (α1, α2) placing r in the family's region.
    pub fn default_params(self) -> FamilyParams {
        let (alpha1, alpha2) = match self {
            FamilyTag::D2PosSmall => (1.0, 1.0 / 9.0),
            FamilyTag::Nd1Quarter => (1.0, 0.25),
            FamilyTag::Nd1Equal => (1.0, 1.0),
            _ => (1.0, -1.0),
        };
        FamilyParams { alpha1, alpha2, beta: 0.0 }
    }

    fn check_ratio(self, r: f64) -> Result<()> {
        let ok = match self {
            FamilyTag::D2PosSmall => r > 0.0 && r < 0.25,
            FamilyTag::Nd1Quarter => (r - 0.25).abs() <= 1e-12,
            FamilyTag::Nd1Equal => (r - 1.0).abs() <= 1e-12,
            _ => r < 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{self} needs a different dispersion ratio, got r = {r}")))
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| *c != '_' && *c != '-').collect::<String>().to_lowercase();
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name().replace('_', "").to_lowercase() == key)
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
}

/// Which frequency multiplies the weight: ξ3 for the D types, ξ1 for ND1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Numerator {
    Xi3,
    Xi1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    L1,
    L2,
    L3,
    H,
}

/// |quantity| ∼ N^exponent; one-sided records are only bounded above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleRecord {
    pub quantity: Quantity,
    pub exponent: f64,
    pub two_sided: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxFamily {
    pub tag: FamilyTag,
    pub n: f64,
    pub params: FamilyParams,
    pub boxes: [BoxSet; 3],
    /// Index of the box built from the other two.
    pub derived: usize,
    /// Phases defining L1, L2, L3.
    pub phases: [PhaseFunction; 3],
    pub numerator: Numerator,
}

impl BoxFamily {
    pub fn sources(&self) -> (usize, usize) {
        match self.derived {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        }
    }

    pub fn predicted_scales(&self) -> Vec<ScaleRecord> {
        let rec = |quantity, exponent, two_sided| ScaleRecord { quantity, exponent, two_sided };
        use Quantity::*;
        match self.tag {
            FamilyTag::ClaimA | FamilyTag::Case3ThmA | FamilyTag::D2PosSmall => {
                vec![rec(L1, 0.0, false), rec(L2, 0.0, false), rec(L3, 3.0, true), rec(H, 3.0, true)]
            }
            FamilyTag::ClaimB => {
                vec![rec(L1, 0.0, false), rec(L3, 0.0, false), rec(L2, 3.0, true), rec(H, 3.0, true)]
            }
            FamilyTag::D1Neg => {
                vec![rec(L1, 1.0, true), rec(L2, 1.0, true), rec(L3, 2.0, true), rec(H, 2.0, true)]
            }
            FamilyTag::Nd1Neg => {
                vec![rec(L1, 1.5, true), rec(L2, 1.5, true), rec(L3, 3.0, true), rec(H, 3.0, true)]
            }
            FamilyTag::Nd1Quarter => {
                vec![rec(L1, 0.0, false), rec(L2, 0.0, false), rec(L3, 0.0, false), rec(H, 0.0, false)]
            }
            FamilyTag::Nd1Equal => {
                vec![rec(L1, 0.0, false), rec(L2, 0.0, false), rec(L3, 0.0, false), rec(H, 0.0, true)]
            }
        }
    }

    /// Predicted power of N for each box area.
    pub fn predicted_area_exponents(&self) -> [f64; 3] {
        match self.tag {
            FamilyTag::ClaimA | FamilyTag::Case3ThmA => [0.0, 0.0, 2.0],
            FamilyTag::ClaimB | FamilyTag::D2PosSmall | FamilyTag::Nd1Quarter => [-0.5; 3],
            FamilyTag::D1Neg | FamilyTag::Nd1Neg => [1.0; 3],
            FamilyTag::Nd1Equal => [-2.0; 3],
        }
    }
}

/// Builds the three boxes at scale `n`. The derived box takes the exact
/// Minkowski ξ-range of the sources and a half-width equal to the largest
/// deviation of −(τ_a + τ_b) from its centre curve, times 1.05.
pub fn build_family(tag: FamilyTag, n: f64, params: Option<FamilyParams>) -> Result<BoxFamily> {
    if !(n >= N_MIN) || !n.is_finite() {
        return Err(Error::InvalidParameter(format!("N = {n} is below the minimum {N_MIN}")));
    }
    let p = params.unwrap_or_else(|| tag.default_params());
    let (a1, a2, beta) = (p.alpha1, p.alpha2, p.beta);
    if a1 == 0.0 || a2 == 0.0 {
        return Err(Error::InvalidParameter("dispersion coefficients must be nonzero".into()));
    }
    tag.check_ratio(a2 / a1)?;
    let ph1 = CenterCurve::phase(a1, beta);
    let ph2 = CenterCurve::phase(a2, beta);
    let n3 = n.powi(3);
    let n2 = n * n;
    let h = n.powf(-0.5);
    // (sources, derived index, derived centre, L phases (α), numerator)
    let (b_a, b_b, derived, centre, alphas, numerator) = match tag {
        FamilyTag::ClaimA => (
            BoxSet::strip(n - 1.0, n, ph1, 1.0),
            BoxSet::strip(-n - 2.0, -n - 1.0, ph2, 1.0),
            2,
            CenterCurve::affine(-(a1 - a2) * n3, 0.0),
            [a1, a2, a1],
            Numerator::Xi3,
        ),
        FamilyTag::ClaimB => (
            BoxSet::strip(n - h, n, ph1, 1.0),
            BoxSet::strip(n - h, n, ph1, 1.0),
            1,
            CenterCurve::phase(a1 / 4.0, beta),
            [a1, a2, a1],
            Numerator::Xi3,
        ),
        FamilyTag::Case3ThmA => (
            BoxSet::strip(n - 1.0, n, ph1, 1.0),
            BoxSet::strip(n - 1.0, n, ph2, 1.0),
            2,
            CenterCurve::affine(-(a1 + a2) * n3, 0.0),
            [a1, a2, a1],
            Numerator::Xi3,
        ),
        FamilyTag::D1Neg => (
            BoxSet::annulus(n - 1.0, n, ph1, 0.5 * n, n),
            BoxSet::annulus(-n - 2.0, -n - 1.0, ph1, 0.5 * n, n),
            2,
            CenterCurve::affine(0.0, 3.0 * a1 * n2),
            [a1, a1, a2],
            Numerator::Xi3,
        ),
        FamilyTag::D2PosSmall => {
            let q = (a2 / a1).powf(-0.5);
            (
                BoxSet::strip(n - h, n, ph1, 1.0),
                BoxSet::strip(q * n - h, q * n, ph2, 1.0),
                2,
                CenterCurve::affine(2.0 * a1 * (1.0 + q) * n3, 3.0 * a1 * n2 - beta),
                [a1, a2, a1],
                Numerator::Xi3,
            )
        }
        FamilyTag::Nd1Neg => {
            let w = n.powf(1.5);
            (
                BoxSet::annulus(n - h, n, ph1, 0.5 * w, w),
                BoxSet::annulus(-n - h, -n, ph2, 0.5 * w, w),
                2,
                CenterCurve::affine(-(a1 - a2) * n3, 0.0),
                [a1, a2, a1],
                Numerator::Xi1,
            )
        }
        FamilyTag::Nd1Quarter => (
            BoxSet::strip(n - h, n, ph1, 1.0),
            BoxSet::strip(-2.0 * n - h, -2.0 * n, ph2, 1.0),
            2,
            CenterCurve::affine(-2.0 * a1 * n3, 3.0 * a1 * n2 - beta),
            [a1, a2, a1],
            Numerator::Xi1,
        ),
        FamilyTag::Nd1Equal => {
            let e = n.powi(-2);
            (
                BoxSet::strip(n - e, n, ph1, 1.0),
                BoxSet::strip(-n - 2.0 * e, -n - e, ph2, 1.0),
                2,
                CenterCurve::affine(0.0, -beta),
                [a1, a2, a1],
                Numerator::Xi1,
            )
        }
    };
    let xi_lo = -(b_a.xi_hi + b_b.xi_hi);
    let xi_hi = -(b_a.xi_lo + b_b.xi_lo);
    let mut target = BoxSet::strip(xi_lo, xi_hi, centre, 0.0);
    target.half_width = 1.05 * max_deviation(&b_a, &b_b, &centre);
    let mut boxes = [target; 3];
    let (ia, ib) = match derived {
        1 => (0, 2),
        _ => (0, 1),
    };
    boxes[ia] = b_a;
    boxes[ib] = b_b;
    let phases = [
        PhaseFunction::new(alphas[0], beta)?,
        PhaseFunction::new(alphas[1], beta)?,
        PhaseFunction::new(alphas[2], beta)?,
    ];
    Ok(BoxFamily { tag, n, params: p, boxes, derived, phases, numerator })
}

/// Largest |−(τa+τb) − g(−(ξa+ξb))| over a 33×33 ξ-grid and the four outer
/// τ-offset corners. The deviation is affine in the offsets, so corners suffice there.
fn max_deviation(a: &BoxSet, b: &BoxSet, centre: &CenterCurve) -> f64 {
    const M: usize = 33;
    let xs = |bx: &BoxSet| -> Vec<f64> {
        (0..M).map(|i| bx.xi_lo + (bx.xi_hi - bx.xi_lo) * i as f64 / (M - 1) as f64).collect()
    };
    let (xa, xb) = (xs(a), xs(b));
    let mut worst: f64 = 0.0;
    for &x1 in &xa {
        let g1 = a.center.eval(x1);
        for &x2 in &xb {
            let base = -(g1 + b.center.eval(x2)) - centre.eval(-(x1 + x2));
            let dev = base.abs() + a.half_width + b.half_width;
            worst = worst.max(dev);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_parse_loosely() {
        assert_eq!("claima".parse::<FamilyTag>().unwrap(), FamilyTag::ClaimA);
        assert_eq!("ND1_quarter".parse::<FamilyTag>().unwrap(), FamilyTag::Nd1Quarter);
        assert_eq!("d2-pos-small".parse::<FamilyTag>().unwrap(), FamilyTag::D2PosSmall);
        assert!(matches!("Case9".parse::<FamilyTag>(), Err(Error::UnknownCase(_))));
        for t in FamilyTag::ALL {
            assert_eq!(t.name().parse::<FamilyTag>().unwrap(), t);
        }
    }

    #[test]
    fn derived_ranges_match_constructions() {
        let n = 100.0;
        let a = build_family(FamilyTag::ClaimA, n, None).unwrap();
        assert_eq!((a.boxes[2].xi_lo, a.boxes[2].xi_hi), (1.0, 3.0));
        assert_eq!(a.boxes[0].area(), 2.0);
        assert_eq!(a.boxes[1].area(), 2.0);
        let b = build_family(FamilyTag::ClaimB, n, None).unwrap();
        assert_eq!(b.derived, 1);
        assert!((b.boxes[1].xi_lo + 2.0 * n).abs() < 1e-12);
        assert!((b.boxes[1].xi_hi - (-2.0 * n + 0.2)).abs() < 1e-12);
        let c = build_family(FamilyTag::Case3ThmA, n, None).unwrap();
        assert_eq!((c.boxes[2].xi_lo, c.boxes[2].xi_hi), (-2.0 * n, -2.0 * n + 2.0));
        let e = build_family(FamilyTag::Nd1Equal, n, None).unwrap();
        assert!((e.boxes[2].xi_lo - 1e-4).abs() < 1e-12 && (e.boxes[2].xi_hi - 3e-4).abs() < 1e-12);
        let q = build_family(FamilyTag::Nd1Quarter, n, None).unwrap();
        assert!((q.boxes[2].xi_lo - n).abs() < 1e-12 && (q.boxes[2].xi_hi - (n + 0.2)).abs() < 1e-12);
    }

    #[test]
    fn area_scalings_at_hundred() {
        let n: f64 = 100.0;
        let a = build_family(FamilyTag::ClaimA, n, None).unwrap();
        let c1 = a.boxes[2].half_width / n.powi(2);
        assert!(c1 > 0.5 && c1 < 20.0, "C1 = {c1}");
        let b = build_family(FamilyTag::ClaimB, n, None).unwrap();
        for bx in &b.boxes {
            let k = bx.area() * n.sqrt();
            assert!(k > 0.1 && k < 50.0, "{k}");
        }
        let e = build_family(FamilyTag::Nd1Equal, n, None).unwrap();
        for bx in &e.boxes {
            let k = bx.area() * n * n;
            assert!(k > 0.1 && k < 50.0, "{k}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(build_family(FamilyTag::ClaimA, 8.0, None), Err(Error::InvalidParameter(_))));
        let bad = FamilyParams { alpha1: 1.0, alpha2: 1.0, beta: 0.0 };
        assert!(build_family(FamilyTag::ClaimA, 32.0, Some(bad)).is_err());
        assert!(build_family(FamilyTag::Nd1Equal, 32.0, Some(bad)).is_ok());
    }

    #[test]
    fn critical_pair_zeroes_claims() {
        let (s, b) = (-13.0 / 12.0, 11.0 / 18.0);
        assert!(FamilyTag::ClaimA.predicted_ratio_exponent(s, b).abs() < 1e-12);
        assert!(FamilyTag::ClaimB.predicted_ratio_exponent(s, b).abs() < 1e-12);
        assert!((FamilyTag::ClaimA.predicted_ratio_exponent(-1.2, 0.6) - 0.2).abs() < 1e-12);
    }
}
