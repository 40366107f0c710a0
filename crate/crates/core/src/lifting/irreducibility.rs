//! Irreducibility analysis from the loose-edge structure: a loose edge
//! whose initial form splits (a base monomial divides it, or its segment
//! polynomial has two distinct irreducible factors) certifies reducibility
//! with verified witness factors; the single-irreducible-power pattern on
//! every loose edge is reported as inconclusive, since it is only a
//! necessary condition for irreducibility.

use crate::polyhedron::NewtonPolyhedron;
use crate::series::Series;

use super::bridge::{default_split, edge_to_univariate, monomial_split, Split, SplitMode};
use super::lift::{default_target, lift_factorization};
use super::{FactorizationResult, LiftError};

#[derive(Clone, Debug)]
pub struct Report {
    pub verdict: Verdict,
    pub polyhedron: NewtonPolyhedron,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    /// A witness factorization was found and verified beyond the default
    /// precision.
    Reducible {
        edge_index: usize,
        split: Split,
        witness: Box<FactorizationResult>,
    },
    /// The loose-edge criteria cannot decide; irreducibility itself is
    /// never certified here.
    Inconclusive { reason: InconclusiveReason },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InconclusiveReason {
    /// No loose edge exists (possibly no edge at all).
    NoLooseEdge,
    /// Every loose edge carries a unit times a single irreducible power.
    IrreduciblePowerPattern { edge_index: usize },
    /// The segment factorization over the rationals could not be completed.
    IncompleteFactorization { edge_index: usize },
}

impl std::fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InconclusiveReason::NoLooseEdge => write!(f, "no loose edge"),
            InconclusiveReason::IrreduciblePowerPattern { edge_index } => write!(
                f,
                "initial form along loose edge {edge_index} is a unit times a single irreducible power"
            ),
            InconclusiveReason::IncompleteFactorization { edge_index } => write!(
                f,
                "segment polynomial of loose edge {edge_index} could not be fully factored over the rationals"
            ),
        }
    }
}

/// Scans the loose edges in deterministic order and stops at the first
/// reducibility witness. The input may not be zero or a unit.
pub fn irreducibility_report(f: &Series) -> Result<Report, LiftError> {
    if f.is_zero() {
        return Err(LiftError::ZeroInput);
    }
    if f.len() == 1 && f.support()[0].is_zero() {
        return Err(LiftError::UnitInput);
    }
    let np = NewtonPolyhedron::from_series(f)?;
    let mut fallback: Option<InconclusiveReason> = None;
    let mut saw_loose = false;
    for (edge_index, e) in np.edges().iter().enumerate() {
        if !e.loose {
            continue;
        }
        saw_loose = true;
        let ep = edge_to_univariate(f, e)?;
        // a nonzero base splits off the monomial factor outright
        let split = if !ep.base.is_zero() {
            Some(monomial_split(&ep))
        } else {
            match default_split(&ep, SplitMode::Plain) {
                Ok(s) => s,
                Err(LiftError::IncompleteFactorization) => {
                    fallback.get_or_insert(InconclusiveReason::IncompleteFactorization {
                        edge_index,
                    });
                    continue;
                }
                Err(other) => return Err(other),
            }
        };
        match split {
            Some(split) => {
                let target = default_target(e);
                let witness = lift_factorization(f, e, &split, &target)?;
                return Ok(Report {
                    verdict: Verdict::Reducible {
                        edge_index,
                        split,
                        witness: Box::new(witness),
                    },
                    polyhedron: np,
                });
            }
            None => {
                fallback
                    .get_or_insert(InconclusiveReason::IrreduciblePowerPattern { edge_index });
            }
        }
    }
    let reason = if !saw_loose {
        InconclusiveReason::NoLooseEdge
    } else {
        fallback.expect("every loose edge recorded a reason or returned a witness")
    };
    Ok(Report {
        verdict: Verdict::Inconclusive { reason },
        polyhedron: np,
    })
}
