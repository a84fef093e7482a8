//! Well-posedness thresholds from coefficient patterns, bilinear-estimate
//! critical indices, trouble tags and admissible `b` ranges.

use crate::error::{Error, Result};
use crate::rational::{self, serde_opt_str, serde_str};
use crate::system::{dispersion_ratio, gg_quarter_condition, DiagonalSystem, NamedSystem};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Threshold {
    /// `s > s*`
    Strict,
    /// `s ≥ s*`
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WellPosedness {
    #[serde(rename = "LWP")]
    Lwp,
    #[serde(rename = "GWP")]
    Gwp,
    Unclassified,
}

/// Which result table a verdict was read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictTable {
    Main,
    Bilinear,
    MajdaBielloLwp,
    MajdaBielloGwp,
    HirotaSatsumaLwp,
    HirotaSatsumaGwp,
    GearGrimshawLwp,
    GearGrimshawGwp,
    BonaChenSautGwp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub table: VerdictTable,
    pub case_id: u8,
    #[serde(with = "serde_opt_str")]
    pub s_star: Option<Rational64>,
    pub threshold_kind: Option<Threshold>,
    pub classification_basis: String,
    pub well_posedness: WellPosedness,
}

impl Verdict {
    fn new(
        table: VerdictTable,
        case_id: u8,
        s_star: Rational64,
        kind: Threshold,
        basis: &str,
        wp: WellPosedness,
    ) -> Self {
        Self {
            table,
            case_id,
            s_star: Some(s_star),
            threshold_kind: Some(kind),
            classification_basis: basis.to_string(),
            well_posedness: wp,
        }
    }

    fn unclassified(table: VerdictTable, case_id: u8, basis: &str) -> Self {
        Self {
            table,
            case_id,
            s_star: None,
            threshold_kind: None,
            classification_basis: basis.to_string(),
            well_posedness: WellPosedness::Unclassified,
        }
    }

    /// Whether regularity `s` lies in the covered range.
    pub fn holds_at(&self, s: Rational64) -> bool {
        match (self.s_star, self.threshold_kind) {
            (Some(t), Some(Threshold::Strict)) => s > t,
            (Some(t), Some(Threshold::Closed)) => s >= t,
            _ => false,
        }
    }

    /// The range statement, e.g. `s ≥ -13/12`.
    pub fn range_text(&self) -> String {
        match (self.s_star, self.threshold_kind) {
            (Some(t), Some(Threshold::Strict)) => format!("s > {}", rational::render(t)),
            (Some(t), Some(Threshold::Closed)) => format!("s ≥ {}", rational::render(t)),
            _ => "unclassified".to_string(),
        }
    }

    /// Orders thresholds by how much they exclude: a larger `s*` is more
    /// restrictive, and at equal `s*` the strict inequality is.
    pub fn restrictiveness(&self) -> Option<(Rational64, u8)> {
        let strict = matches!(self.threshold_kind, Some(Threshold::Strict)) as u8;
        self.s_star.map(|s| (s, strict))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wp = match self.well_posedness {
            WellPosedness::Lwp => "LWP",
            WellPosedness::Gwp => "GWP",
            WellPosedness::Unclassified => "Unclassified",
        };
        write!(f, "{wp} case ({}) {}: {}", self.case_id, self.range_text(), self.classification_basis)
    }
}

/// The eight r-regions of the main table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RRegion {
    Negative,
    BelowQuarter,
    Quarter,
    QuarterToOne,
    One,
    OneToFour,
    Four,
    AboveFour,
}

impl RRegion {
    /// Locates `r`; boundary values match within `tol` (0 for exact comparison).
    pub fn of(r: f64, tol: f64) -> Result<Self> {
        if r == 0.0 || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("dispersion ratio must be finite and nonzero, got {r}")));
        }
        let near = |x: f64| (r - x).abs() <= tol;
        Ok(if r < 0.0 {
            RRegion::Negative
        } else if near(0.25) {
            RRegion::Quarter
        } else if near(1.0) {
            RRegion::One
        } else if near(4.0) {
            RRegion::Four
        } else if r < 0.25 {
            RRegion::BelowQuarter
        } else if r < 1.0 {
            RRegion::QuarterToOne
        } else if r < 4.0 {
            RRegion::OneToFour
        } else {
            RRegion::AboveFour
        })
    }

    /// Whether `r` lies within `warn_tol` of a region boundary it is not on.
    pub fn near_boundary(r: f64, warn_tol: f64) -> bool {
        [0.0, 0.25, 1.0, 4.0]
            .iter()
            .any(|&x| r != x && (r - x).abs() <= warn_tol * (1.0 + x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EstimateType {
    D1,
    D2,
    ND1,
    ND2,
}

impl std::str::FromStr for EstimateType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "D1" => Ok(EstimateType::D1),
            "D2" => Ok(EstimateType::D2),
            "ND1" => Ok(EstimateType::ND1),
            "ND2" => Ok(EstimateType::ND2),
            _ => Err(Error::InvalidParameter(format!("unknown estimate type `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilinearQuery {
    pub r: f64,
    pub estimate_type: EstimateType,
}

/// Columns of the bilinear tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Negative,
    BelowQuarter,
    Quarter,
    AboveQuarter,
    One,
}

impl Column {
    fn of(r: f64, tol: f64) -> Result<Self> {
        Ok(match RRegion::of(r, tol)? {
            RRegion::Negative => Column::Negative,
            RRegion::BelowQuarter => Column::BelowQuarter,
            RRegion::Quarter => Column::Quarter,
            RRegion::One => Column::One,
            _ => Column::AboveQuarter,
        })
    }

    fn index(self) -> u8 {
        match self {
            Column::Negative => 1,
            Column::BelowQuarter => 2,
            Column::Quarter => 3,
            Column::AboveQuarter => 4,
            Column::One => 5,
        }
    }
}

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Main-table classification with exact comparison of `r` to the boundaries.
pub fn classify(sys: &DiagonalSystem) -> Verdict {
    classify_with_tol(sys, 0.0).expect("valid diagonal system has nonzero r")
}

/// Main-table classification with `r` boundaries matched within `tol`.
pub fn classify_with_tol(sys: &DiagonalSystem, tol: f64) -> Result<Verdict> {
    use Threshold::*;
    use WellPosedness::Lwp;
    sys.validate()?;
    let r = dispersion_ratio(sys).0;
    let t = VerdictTable::Main;
    let all_c_zero = sys.c11 == 0.0 && sys.c12 == 0.0 && sys.c21 == 0.0 && sys.c22 == 0.0;
    let first_pattern = sys.c12 == 0.0 && sys.d21 == 0.0 && sys.d22 == 0.0;
    let second_pattern = sys.c21 == 0.0 && sys.d11 == 0.0 && sys.d12 == 0.0;
    Ok(match RRegion::of(r, tol)? {
        RRegion::Negative => {
            if all_c_zero && sys.divergence_form() {
                Verdict::new(t, 1, q(-13, 12), Closed, "r < 0; c = 0, divergence form", Lwp)
            } else {
                Verdict::new(t, 1, q(-3, 4), Strict, "r < 0; otherwise", Lwp)
            }
        }
        RRegion::BelowQuarter => {
            if first_pattern {
                Verdict::new(t, 2, q(-3, 4), Strict, "0 < r < 1/4; c12 = d21 = d22 = 0", Lwp)
            } else {
                Verdict::new(t, 2, q(0, 1), Closed, "0 < r < 1/4; otherwise", Lwp)
            }
        }
        RRegion::Quarter => {
            if second_pattern {
                Verdict::new(t, 3, q(0, 1), Closed, "r = 1/4; c21 = d11 = d12 = 0", Lwp)
            } else {
                Verdict::new(t, 3, q(3, 4), Closed, "r = 1/4; otherwise", Lwp)
            }
        }
        RRegion::QuarterToOne => Verdict::new(t, 4, q(0, 1), Closed, "1/4 < r < 1; arbitrary", Lwp),
        RRegion::One => {
            if sys.b12 != 0.0 || sys.b21 != 0.0 {
                Verdict::unclassified(t, 5, "r = 1; b12 or b21 nonzero")
            } else if sys.divergence_form() {
                Verdict::new(t, 5, q(-3, 4), Strict, "r = 1; b12 = b21 = 0, divergence form", Lwp)
            } else {
                Verdict::new(t, 5, q(0, 1), Strict, "r = 1; b12 = b21 = 0, non-divergence form", Lwp)
            }
        }
        RRegion::OneToFour => Verdict::new(t, 6, q(0, 1), Closed, "1 < r < 4; arbitrary", Lwp),
        RRegion::Four => {
            if first_pattern {
                Verdict::new(t, 7, q(0, 1), Closed, "r = 4; c12 = d21 = d22 = 0", Lwp)
            } else {
                Verdict::new(t, 7, q(3, 4), Closed, "r = 4; otherwise", Lwp)
            }
        }
        RRegion::AboveFour => {
            if second_pattern {
                Verdict::new(t, 8, q(-3, 4), Strict, "r > 4; c21 = d11 = d12 = 0", Lwp)
            } else {
                Verdict::new(t, 8, q(0, 1), Closed, "r > 4; otherwise", Lwp)
            }
        }
    })
}

/// Critical index of a single bilinear estimate.
pub fn bilinear_critical(query: &BilinearQuery) -> Result<Verdict> {
    use EstimateType::*;
    use Threshold::*;
    let col = Column::of(query.r, 0.0)?;
    let (s, kind, basis) = match (query.estimate_type, col) {
        (D2, Column::Negative) => (q(-13, 12), Closed, "D2, r < 0"),
        (_, Column::Negative) => (q(-3, 4), Strict, "r < 0"),
        (_, Column::BelowQuarter) => (q(-3, 4), Strict, "0 < r < 1/4"),
        (_, Column::Quarter) => (q(3, 4), Closed, "r = 1/4"),
        (_, Column::AboveQuarter) => (q(0, 1), Closed, "r > 1/4, r ≠ 1"),
        (D1 | D2, Column::One) => (q(-3, 4), Strict, "divergence type, r = 1"),
        (ND1 | ND2, Column::One) => (q(0, 1), Strict, "non-divergence type, r = 1"),
    };
    Ok(Verdict::new(VerdictTable::Bilinear, col.index(), s, kind, basis, WellPosedness::Lwp))
}

/// Whether the estimate is known to fail at `s` (the sharpness table):
/// exactly the regularities below the critical index.
pub fn bilinear_fails(query: &BilinearQuery, s: Rational64) -> Result<bool> {
    let v = bilinear_critical(query)?;
    Ok(s < v.s_star.expect("bilinear verdicts are always classified"))
}

/// Bilinear estimates needed to close the fixed-point argument for `sys`,
/// with each ratio expressed as (output-space coefficient)/(first-input
/// coefficient) in the convention of the bilinear tables. `None` when the
/// linear coupling cannot be handled (equal dispersion with b12 or b21 ≠ 0).
pub fn required_estimates(sys: &DiagonalSystem) -> Option<Vec<BilinearQuery>> {
    let r = sys.a2 / sys.a1;
    if r == 1.0 && (sys.b12 != 0.0 || sys.b21 != 0.0) {
        return None;
    }
    let mut out = Vec::new();
    let mut push = |cond: bool, r: f64, t: EstimateType| {
        if cond {
            out.push(BilinearQuery { r, estimate_type: t });
        }
    };
    use EstimateType::*;
    // First equation, output in the a1 space.
    push(sys.c11 != 0.0, 1.0, D1);
    push(sys.c12 != 0.0, 1.0 / r, D1);
    if sys.d11 == sys.d12 {
        push(sys.d11 != 0.0, r, D2);
    } else {
        push(sys.d11 != 0.0, r, ND1);
        push(sys.d12 != 0.0, r, ND2);
    }
    // Second equation, output in the a2 space; its own unknown v comes first.
    push(sys.c21 != 0.0, r, D1);
    push(sys.c22 != 0.0, 1.0, D1);
    if sys.d21 == sys.d22 {
        push(sys.d22 != 0.0, 1.0 / r, D2);
    } else {
        push(sys.d22 != 0.0, 1.0 / r, ND1);
        push(sys.d21 != 0.0, 1.0 / r, ND2);
    }
    Some(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Trouble {
    /// Resonant interactions.
    T1,
    /// High-high to low interactions.
    T2,
    /// Derivative falling on the low-frequency factor.
    T3,
}

/// How the tags of a cell combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combination {
    /// All listed troubles occur at the same place ("+" cells and single tags).
    Together,
    /// Either trouble may be the obstruction ("or" cells).
    Either,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Troubles {
    pub tags: BTreeSet<Trouble>,
    pub combination: Combination,
}

pub fn trouble_diagnosis(query: &BilinearQuery) -> Result<Troubles> {
    use EstimateType::*;
    use Trouble::*;
    let col = Column::of(query.r, 0.0)?;
    let (tags, combination): (&[Trouble], Combination) = match (query.estimate_type, col) {
        (D1, Column::Negative) => (&[T2], Combination::Together),
        (D2, Column::Negative) => (&[], Combination::Together),
        (ND1 | ND2, Column::Negative) => (&[T3], Combination::Together),
        (D1 | D2, Column::BelowQuarter) => (&[T2], Combination::Together),
        (ND1 | ND2, Column::BelowQuarter) => (&[T2, T3], Combination::Either),
        (_, Column::Quarter) => (&[T1, T2], Combination::Together),
        (_, Column::AboveQuarter) => (&[T1], Combination::Together),
        (D1 | D2, Column::One) => (&[T2], Combination::Together),
        (ND1 | ND2, Column::One) => (&[T2, T3], Combination::Together),
    };
    Ok(Troubles { tags: tags.iter().copied().collect(), combination })
}

/// Interval of admissible `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BRange {
    #[serde(with = "serde_str")]
    pub lower: Rational64,
    #[serde(with = "serde_str")]
    pub upper: Rational64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl BRange {
    pub fn contains(&self, b: Rational64) -> bool {
        let lo = if self.lower_closed { b >= self.lower } else { b > self.lower };
        let hi = if self.upper_closed { b <= self.upper } else { b < self.upper };
        lo && hi
    }
}

impl fmt::Display for BRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lower_closed { '[' } else { '(' },
            rational::render(self.lower),
            rational::render(self.upper),
            if self.upper_closed { ']' } else { ')' }
        )
    }
}

/// Admissible `b` for the divergence estimate with opposite-sign dispersion.
pub fn admissible_b(s: Rational64) -> Result<BRange> {
    let third = q(1, 3);
    if s < q(-13, 12) {
        return Err(Error::OutOfDomain(format!("s = {} is below -13/12", rational::render(s))));
    }
    let (lower, upper, closed) = if s <= q(-1, 1) {
        (q(1, 4) - s * third, q(4, 3) + s * q(2, 3), true)
    } else if s < q(-3, 4) {
        (q(1, 4) - s * third, q(1, 1) + s * third, true)
    } else {
        (q(1, 2), q(3, 4), false)
    };
    debug_assert!(lower <= upper);
    Ok(BRange { lower, upper, lower_closed: closed, upper_closed: closed })
}

/// Local and global verdicts from the named-system tables.
pub fn classify_named(named: &NamedSystem, tol: f64) -> Result<(Verdict, Verdict)> {
    use Threshold::*;
    use VerdictTable::*;
    use WellPosedness::{Gwp, Lwp};
    named.validate()?;
    Ok(match *named {
        NamedSystem::MajdaBiello { a2 } => {
            let near = |x: f64| (a2 - x).abs() <= tol;
            let lwp = if near(4.0) {
                Verdict::new(MajdaBielloLwp, 3, q(3, 4), Closed, "a2 = 4", Lwp)
            } else if a2 < 0.0 || near(1.0) || a2 > 4.0 {
                Verdict::new(MajdaBielloLwp, 1, q(-3, 4), Strict, "a2 < 0, a2 = 1 or a2 > 4", Lwp)
            } else {
                Verdict::new(MajdaBielloLwp, 2, q(0, 1), Closed, "0 < a2 < 4, a2 ≠ 1", Lwp)
            };
            let gwp = if near(1.0) {
                Verdict::new(MajdaBielloGwp, 1, q(-3, 4), Strict, "a2 = 1", Gwp)
            } else if near(4.0) {
                Verdict::new(MajdaBielloGwp, 3, q(1, 1), Closed, "a2 = 4", Gwp)
            } else {
                Verdict::new(MajdaBielloGwp, 2, q(0, 1), Closed, "a2 ∉ {1, 4}", Gwp)
            };
            (lwp, gwp)
        }
        NamedSystem::HirotaSatsuma { a1, c12 } => {
            let near = |x: f64| (a1 - x).abs() <= tol;
            let lwp = if near(0.25) {
                Verdict::new(HirotaSatsumaLwp, 4, q(3, 4), Closed, "a1 = 1/4", Lwp)
            } else if near(1.0) {
                Verdict::new(HirotaSatsumaLwp, 3, q(0, 1), Strict, "a1 = 1", Lwp)
            } else if a1 < 0.25 {
                Verdict::new(HirotaSatsumaLwp, 1, q(-3, 4), Strict, "a1 < 1/4, a1 ≠ 0", Lwp)
            } else {
                Verdict::new(HirotaSatsumaLwp, 2, q(0, 1), Closed, "a1 > 1/4, a1 ≠ 1", Lwp)
            };
            let gwp = if !(c12 > 0.0) {
                Verdict::unclassified(HirotaSatsumaGwp, 0, "c12 ≤ 0")
            } else if near(1.0) {
                Verdict::unclassified(HirotaSatsumaGwp, 0, "a1 = 1")
            } else if near(0.25) {
                Verdict::new(HirotaSatsumaGwp, 2, q(1, 1), Closed, "a1 = 1/4, c12 > 0", Gwp)
            } else {
                Verdict::new(HirotaSatsumaGwp, 1, q(0, 1), Closed, "a1 ∉ {1/4, 1}, c12 > 0", Gwp)
            };
            (lwp, gwp)
        }
        NamedSystem::GearGrimshaw { rho1, rho2, sigma3, .. } => {
            let k = rho2 * sigma3 * sigma3;
            let k_is_one = (k - 1.0).abs() <= tol;
            let quarter = gg_quarter_condition(rho1, rho2, sigma3, tol.max(1e-12));
            let lwp = if sigma3 == 0.0 && (rho1 - 1.0).abs() <= tol {
                Verdict::new(GearGrimshawLwp, 1, q(-3, 4), Strict, "sigma3 = 0, rho1 = 1", Lwp)
            } else if k_is_one {
                Verdict::unclassified(GearGrimshawLwp, 0, "rho2 sigma3^2 = 1")
            } else if k > 1.0 {
                Verdict::new(GearGrimshawLwp, 2, q(-3, 4), Strict, "rho2 sigma3^2 > 1", Lwp)
            } else if quarter {
                Verdict::new(GearGrimshawLwp, 4, q(3, 4), Closed, "rho2 sigma3^2 < 1, eigenvalue ratio 1/4", Lwp)
            } else {
                Verdict::new(GearGrimshawLwp, 3, q(0, 1), Closed, "rho2 sigma3^2 < 1, eigenvalue ratio ≠ 1/4", Lwp)
            };
            let gwp = if k_is_one {
                Verdict::unclassified(GearGrimshawGwp, 0, "rho2 sigma3^2 = 1")
            } else if quarter {
                Verdict::new(GearGrimshawGwp, 2, q(1, 1), Closed, "eigenvalue ratio 1/4", Gwp)
            } else {
                Verdict::new(GearGrimshawGwp, 1, q(0, 1), Closed, "eigenvalue ratio ≠ 1/4", Gwp)
            };
            (lwp, gwp)
        }
        NamedSystem::BonaChenSaut => {
            let (sys, _) = named.diagonal_form(crate::system::DEFAULT_TOL)?;
            let lwp = classify_with_tol(&sys, tol)?;
            (lwp, Verdict::unclassified(BonaChenSautGwp, 0, "no global result"))
        }
    })
}

/// Orders two classified verdicts by restrictiveness.
pub fn compare_restrictiveness(a: &Verdict, b: &Verdict) -> Option<Ordering> {
    Some(a.restrictiveness()?.cmp(&b.restrictiveness()?))
}
