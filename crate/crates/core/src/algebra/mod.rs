//! Exact coefficient fields and univariate polynomial algebra.

mod factor;
mod field;
mod upoly;

pub use factor::{upoly_factor, upoly_squarefree, Factorization};
pub use field::{FieldElement, FieldOp, FieldSpec};
pub use upoly::{upoly_gcd, UPoly};

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements from different fields: {0} vs {1}")]
    MismatchedFields(FieldSpec, FieldSpec),
    #[error("invalid prime-field modulus {0}")]
    InvalidModulus(u64),
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeroPair,
    #[error("operation requires a nonconstant polynomial")]
    ConstantPolynomial,
    #[error("exact division left a nonzero remainder")]
    InexactDivision,
    #[error("equal-degree splitting failed to converge")]
    SplitRetryCap,
}
