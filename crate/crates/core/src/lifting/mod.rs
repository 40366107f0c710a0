//! Lifting of edge initial-form factorizations: the edge↔univariate
//! bridge, automatic coprime splitting, the plain and monic lifting loops,
//! truncated Weierstraß preparation, and the irreducibility report.

mod bridge;
mod irreducibility;
mod lift;
mod weierstrass;

pub use bridge::{
    default_split, edge_initial_form, edge_to_univariate, monomial_split, normalize_split,
    segment_is_irreducible_power, univariate_to_edge, EdgePolynomial, Split, SplitMode,
    SplitOrigin,
};
pub use irreducibility::{irreducibility_report, InconclusiveReason, Report, Verdict};
pub use lift::{
    default_target, lift_factorization, lift_factorization_with, lift_monic, lift_monic_with,
    minimal_face_of,
};
pub use weierstrass::{factor_weierstrass, factor_weierstrass_with, weierstrass_prepare};

use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::bezout::BezoutError;
use crate::grading::GradingError;
use crate::polyhedron::PolyhedronError;
use crate::series::{ExponentVector, Series, SeriesError, Valuation};

/// Default cap on lifting rounds; each round strictly raises the residual
/// valuation, so this is purely defensive.
pub const DEFAULT_ITERATION_CAP: u64 = 10_000;

#[derive(Clone, Debug)]
pub struct LiftOptions {
    /// Permit lifting along a non-loose edge (recorded in the result).
    pub allow_non_loose: bool,
    pub iteration_cap: u64,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            allow_non_loose: false,
            iteration_cap: DEFAULT_ITERATION_CAP,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("edge is not usable: {0}")]
    InvalidEdge(String),
    #[error("edge is not loose")]
    NotLoose,
    #[error("edge is not descendant")]
    NotDescendant,
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("segment factorization over the rationals is incomplete")]
    IncompleteFactorization,
    #[error("target precision is below the edge valuation")]
    TargetBelowValuation,
    #[error("iteration cap {0} exceeded")]
    IterationCap(u64),
    #[error("residual valuation failed to increase")]
    ValuationStalled,
    #[error("preparation order mismatch: {0}")]
    ZOrderMismatch(String),
    #[error("input series is zero")]
    ZeroInput,
    #[error("input series is a unit")]
    UnitInput,
    #[error(transparent)]
    Bezout(#[from] BezoutError),
    #[error(transparent)]
    Polyhedron(#[from] PolyhedronError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A face of a factor's polyhedron under the edge's witness form: a
/// segment parallel to the edge, or a single vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Face {
    Vertex(ExponentVector),
    Edge {
        alpha: ExponentVector,
        beta: ExponentVector,
    },
}

impl Face {
    /// Unordered end set, for comparisons that ignore orientation.
    pub fn ends(&self) -> Vec<ExponentVector> {
        match self {
            Face::Vertex(v) => vec![v.clone()],
            Face::Edge { alpha, beta } => {
                let mut ends = vec![alpha.clone(), beta.clone()];
                ends.sort();
                ends
            }
        }
    }

    /// Minkowski sum of two faces.
    pub fn minkowski(&self, other: &Face) -> Face {
        match (self, other) {
            (Face::Vertex(a), Face::Vertex(b)) => Face::Vertex(a.add(b)),
            (Face::Vertex(v), Face::Edge { alpha, beta })
            | (Face::Edge { alpha, beta }, Face::Vertex(v)) => Face::Edge {
                alpha: alpha.add(v),
                beta: beta.add(v),
            },
            (
                Face::Edge { alpha, beta },
                Face::Edge {
                    alpha: a2,
                    beta: b2,
                },
            ) => Face::Edge {
                alpha: alpha.add(a2),
                beta: beta.add(b2),
            },
        }
    }
}

/// One lifting round in the trace: the residual valuation it processed and
/// how many graded solves it took.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub iteration: u64,
    pub level: BigRational,
    pub bezout_solves: u64,
}

/// Result of a lifting run: truncated factors with their initial forms and
/// faces, the exact residual valuation of the computed data, and the
/// iteration trace.
#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub g: Series,
    pub h: Series,
    /// The graded initial form of g (the first split factor, expanded).
    pub initial_g: Series,
    /// The graded initial form of h (base monomial times second factor).
    pub initial_h: Series,
    pub e1: Face,
    pub e2: Face,
    /// Valuation of f − g·h on the computed data; infinite when the
    /// truncated factors multiply back exactly.
    pub residual_valuation: Valuation,
    pub trace: Vec<TraceEntry>,
    /// True when lifting was forced along a non-loose edge.
    pub forced_non_loose: bool,
    /// The requested valuation target.
    pub target: BigRational,
}
