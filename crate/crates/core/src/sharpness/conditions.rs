//! Affine necessary conditions on (s, b) and their joint feasibility.

use super::families::FamilyTag;
use crate::rational;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// s_coeff·s + b_coeff·b + constant ≤ 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryCondition {
    pub source: FamilyTag,
    #[serde(with = "rational::serde_str")]
    pub s_coeff: Rational64,
    #[serde(with = "rational::serde_str")]
    pub b_coeff: Rational64,
    #[serde(with = "rational::serde_str")]
    pub constant: Rational64,
}

impl NecessaryCondition {
    pub fn holds(&self, s: Rational64, b: Rational64) -> bool {
        self.s_coeff * s + self.b_coeff * b + self.constant <= Rational64::zero()
    }

    pub fn holds_f64(&self, s: f64, b: f64) -> bool {
        let c = |r: Rational64| rational::to_f64(r);
        c(self.s_coeff) * s + c(self.b_coeff) * b + c(self.constant) <= 1e-12
    }

    /// The bound on b implied at `s`, if b appears.
    fn b_bound(&self, s: Rational64) -> Option<Rational64> {
        if self.b_coeff.is_zero() {
            None
        } else {
            Some(-(self.s_coeff * s + self.constant) / self.b_coeff)
        }
    }
}

fn affine_text(c0: Rational64, c1: Rational64, var: &str) -> String {
    let den = num_integer::lcm(*c0.denom(), *c1.denom());
    let (a, b) = ((c0 * den).to_integer(), (c1 * den).to_integer());
    let coeff = |k: i64| match k.abs() {
        1 => var.to_string(),
        m => format!("{m}{var}"),
    };
    let body = match (a, b) {
        (_, 0) => a.to_string(),
        (0, _) => format!("{}{}", if b < 0 { "-" } else { "" }, coeff(b)),
        _ => format!("{a}{}{}", if b < 0 { " - " } else { " + " }, coeff(b)),
    };
    if den == 1 {
        body
    } else if a != 0 && b != 0 {
        format!("({body})/{den}")
    } else {
        format!("{body}/{den}")
    }
}

impl fmt::Display for NecessaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b_coeff.is_zero() {
            let bound = -self.constant / self.s_coeff;
            let op = if self.s_coeff.is_positive() { "≤" } else { "≥" };
            return write!(f, "s {op} {}", rational::render(bound));
        }
        let op = if self.b_coeff.is_positive() { "≤" } else { "≥" };
        let c0 = -self.constant / self.b_coeff;
        let c1 = -self.s_coeff / self.b_coeff;
        write!(f, "b {op} {}", affine_text(c0, c1, "s"))
    }
}

pub fn necessary_conditions(tag: FamilyTag) -> Vec<NecessaryCondition> {
    let r = |n: i64, d: i64| Rational64::new(n, d);
    let (s_coeff, b_coeff, constant) = match tag {
        FamilyTag::ClaimA => (r(-2, 1), r(3, 1), r(-4, 1)),
        FamilyTag::ClaimB => (r(-1, 1), r(-3, 1), r(3, 4)),
        FamilyTag::Case3ThmA => (r(-1, 1), r(3, 1), r(-3, 1)),
        FamilyTag::D1Neg | FamilyTag::Nd1Neg => (r(-2, 1), r(0, 1), r(-3, 2)),
        FamilyTag::D2PosSmall => (r(-1, 1), r(3, 1), r(-9, 4)),
        FamilyTag::Nd1Quarter => (r(-1, 1), r(0, 1), r(3, 4)),
        FamilyTag::Nd1Equal => (r(-2, 1), r(0, 1), r(0, 1)),
    };
    vec![NecessaryCondition { source: tag, s_coeff, b_coeff, constant }]
}

/// Whether some real b satisfies every condition at this s.
pub fn feasible(conditions: &[NecessaryCondition], s: Rational64) -> bool {
    let mut lower: Option<Rational64> = None;
    let mut upper: Option<Rational64> = None;
    for c in conditions {
        match c.b_bound(s) {
            None => {
                if !c.holds(s, Rational64::zero()) {
                    return false;
                }
            }
            Some(v) if c.b_coeff.is_positive() => upper = Some(upper.map_or(v, |u| u.min(v))),
            Some(v) => lower = Some(lower.map_or(v, |l| l.max(v))),
        }
    }
    match (lower, upper) {
        (Some(l), Some(u)) => l <= u,
        _ => true,
    }
}
