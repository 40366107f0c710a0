//! Exact detection of loose edges on Newton polyhedra of multivariate power
//! series, and lifting of coprime initial-form factorizations along such an
//! edge to factorizations of the series itself, to any prescribed valuation
//! precision.
//!
//! All arithmetic is exact: coefficients live in ℚ or a prime field, the
//! polyhedral geometry runs on rational Fourier–Motzkin elimination, and the
//! lifting loop solves graded Bézout equations by exact elimination.

pub mod algebra;
pub mod bezout;
pub mod grading;
pub mod lifting;
pub mod polyhedron;
pub mod series;

pub use algebra::{FieldElement, FieldSpec, UPoly};
pub use series::{ExponentVector, LinearForm, Series, Valuation};
