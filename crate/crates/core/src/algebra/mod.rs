//! Exact arithmetic: rationals, sparse multivariate polynomials, rational
//! functions and truncated power series.

mod gcd;
mod modgcd;
pub mod linalg;
mod poly;
mod ratfunc;
mod series;
mod unipoly;

pub use gcd::{content_in, gcd, gcd_all, pseudo_remainder};
pub use poly::{fmt_rational, Monomial, MultiPoly, Variable};
pub use ratfunc::RationalFunction;
pub use series::TruncatedSeries;
pub use unipoly::UniPoly;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
    #[error("series is not invertible: constant coefficient is zero")]
    DivisionByNonUnit,
    #[error("no value assigned to variable {0}")]
    UnassignedVariable(String),
}
