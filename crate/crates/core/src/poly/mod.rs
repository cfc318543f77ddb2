//! Exact sparse multivariate polynomials over the rationals.

mod monomial;
mod order;
mod parse;
mod polynomial;

use thiserror::Error;

pub use monomial::Monomial;
pub use order::{order_cmp, TermOrder};
pub use parse::parse_rational;
pub use polynomial::{PolyRing, Polynomial};

/// Arbitrary-precision rational coefficient, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{0}` must have positive degree")]
    NonPositiveDegree(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
