use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dispersion matrix has complex eigenvalues (discriminant {0:e})")]
    ComplexEigenvalues(f64),
    #[error("dispersion matrix has a zero eigenvalue ({0:e})")]
    ZeroEigenvalue(f64),
    #[error("dispersion matrix has a repeated eigenvalue {0} with a defective eigenspace")]
    NonDiagonalizable(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("argument outside the domain: {0}")]
    OutOfDomain(String),
    #[error("integrand is not integrable: {0}")]
    NonIntegrable(String),
    #[error("unknown case tag `{0}`")]
    UnknownCase(String),
    #[error("Minkowski containment violated: {0}")]
    ContainmentViolated(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("solution left the resolved regime at t = {t} (max coefficient {max_coeff:e})")]
    Blowup { t: f64, max_coeff: f64 },
    #[error("energy functional does not match the system: {0}")]
    KindMismatch(String),
    #[error("denominator vanishes: {0}")]
    ZeroDenominator(String),
}

pub type Result<T> = std::result::Result<T, Error>;
