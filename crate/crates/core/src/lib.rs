//! Verification and simulation workbench for coupled KdV–KdV systems.
//!
//! The crate classifies well-posedness thresholds from system coefficients,
//! checks the resonance and decay-integral machinery behind the bilinear
//! estimates numerically, builds the counterexample box families, and
//! simulates the diagonalized systems pseudospectrally.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod error;
pub mod fit;
pub mod poly;
pub mod quadrature;
pub mod rational;
pub mod resonance;
pub mod selftest;
pub mod sharpness;
pub mod spectral;
pub mod system;

pub use classifier::{
    admissible_b, bilinear_critical, classify, classify_named, trouble_diagnosis, BRange,
    BilinearQuery, EstimateType, RRegion, Threshold, Trouble, Troubles, Verdict, VerdictTable,
    WellPosedness,
};
pub use error::{Error, Result};
pub use fit::SweepFit;
pub use num_rational::Rational64;
pub use resonance::{PhaseFunction, ResonanceTriple};
pub use sharpness::{BoxFamily, BoxSet, FamilyTag, NecessaryCondition};
pub use spectral::{Grid, SpectralState};
pub use system::{
    diagonalize, dispersion_ratio, named_system, ChangeOfBasis, DiagonalSystem, GeneralSystem,
    NamedSystem,
};

/// The bracket ⟨x⟩ = 1 + |x| used throughout (not the √(1+x²) variant).
#[inline]
pub fn bracket(x: f64) -> f64 {
    1.0 + x.abs()
}
