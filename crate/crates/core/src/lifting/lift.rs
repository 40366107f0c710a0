//! The lifting loop: from a coprime split of an edge initial form to a
//! factorization of the series itself, correct beyond a prescribed
//! valuation target.
//!
//! Each round subtracts the current product, takes the initial form of the
//! residual, splits it into graded components along the edge direction, and
//! solves one graded Bézout problem per component; the solutions augment
//! the factors and strictly raise the residual valuation.

use num_rational::BigRational;

use crate::bezout::{solve_graded_bezout, BezoutMode, BezoutProblem};
use crate::grading::{decompose, homogeneous_index};
use crate::polyhedron::{EdgeFrame, NewtonPolyhedron};
use crate::series::{ExponentVector, LinearForm, Series, Truncation, Valuation};

use super::bridge::{
    edge_to_univariate, normalize_split, univariate_to_edge, EdgePolynomial, Split, SplitMode,
};
use super::{Face, FactorizationResult, LiftError, LiftOptions, TraceEntry};

/// Default target: ten grid steps above the edge level, where the grid
/// step is the gcd of the witness form's integer entries.
pub fn default_target(e: &EdgeFrame) -> BigRational {
    let mut g = num_bigint::BigInt::from(0);
    for c in e.witness.coefficients() {
        debug_assert!(c.is_integer());
        g = num_integer::Integer::gcd(&g, &c.to_integer());
    }
    e.level() + BigRational::from_integer(g * 10)
}

/// Lifts a coprime split of the initial form along a loose edge to a
/// factorization of `f` with residual valuation beyond `target`.
pub fn lift_factorization(
    f: &Series,
    e: &EdgeFrame,
    split: &Split,
    target: &BigRational,
) -> Result<FactorizationResult, LiftError> {
    lift_factorization_with(f, e, split, target, &LiftOptions::default())
}

pub fn lift_factorization_with(
    f: &Series,
    e: &EdgeFrame,
    split: &Split,
    target: &BigRational,
    options: &LiftOptions,
) -> Result<FactorizationResult, LiftError> {
    run_lift(f, e, split, target, options, SplitMode::Plain)
}

/// The monic variant: requires a descendant edge and produces a first
/// factor monic in the last variable, the input to Weierstraß preparation.
pub fn lift_monic(
    f: &Series,
    e: &EdgeFrame,
    split: &Split,
    target: &BigRational,
) -> Result<FactorizationResult, LiftError> {
    lift_monic_with(f, e, split, target, &LiftOptions::default())
}

pub fn lift_monic_with(
    f: &Series,
    e: &EdgeFrame,
    split: &Split,
    target: &BigRational,
    options: &LiftOptions,
) -> Result<FactorizationResult, LiftError> {
    if !e.is_descendant() {
        return Err(LiftError::NotDescendant);
    }
    run_lift(f, e, split, target, options, SplitMode::MonicFirst)
}

fn run_lift(
    f: &Series,
    e: &EdgeFrame,
    split: &Split,
    target: &BigRational,
    options: &LiftOptions,
    mode: SplitMode,
) -> Result<FactorizationResult, LiftError> {
    let np = NewtonPolyhedron::from_series(f)?;
    let frame = np.find_edge(e)?.clone();
    let forced_non_loose = if frame.loose {
        false
    } else if options.allow_non_loose {
        true
    } else {
        return Err(LiftError::NotLoose);
    };

    let ep = edge_to_univariate(f, &frame)?;
    let split = normalize_split(&ep, split, mode)?;
    let (g0, h0) = univariate_to_edge(&ep, &split);

    let level = frame.level();
    if target < &level {
        return Err(LiftError::TargetBelowValuation);
    }

    // work in permuted coordinates so the direction ends negative
    let perm = &frame.perm;
    let fp = f.permute_vars(perm);
    let lp = frame.witness.permute(perm);
    let delta_p = frame.permuted_delta();
    let bezout_mode = match mode {
        SplitMode::Plain => BezoutMode::NoVariableDivides,
        SplitMode::MonicFirst => BezoutMode::MonicInLast,
    };

    let mut g = g0.permute_vars(perm);
    let mut h = h0.permute_vars(perm);
    debug_assert!(homogeneous_index(&g, &delta_p)?.is_some());
    debug_assert!(homogeneous_index(&h, &delta_p)?.is_some());

    let mut trace = Vec::new();
    let mut prev_level = level.clone();
    let mut done = false;
    for iteration in 0..options.iteration_cap {
        let product = g.mul_truncated(&h, &lp, target)?;
        let residual = fp.sub(&product)?.truncate(&lp, target);
        if residual.is_zero() {
            done = true;
            break;
        }
        let a_k = match residual.valuation(&lp)? {
            Valuation::Finite(v) => v,
            Valuation::Infinite => unreachable!("nonzero residual"),
        };
        if iteration > 0 && a_k <= prev_level {
            return Err(LiftError::ValuationStalled);
        }
        if iteration == 0 && a_k <= level {
            // the split must cancel the edge level exactly
            return Err(LiftError::InvalidSplit(
                "initial product does not match the edge initial form".into(),
            ));
        }
        let init = residual.initial_form(&lp)?;
        let components = decompose(&init, &delta_p)?;
        let mut solves = 0u64;
        for component in components.values() {
            let solution = solve_graded_bezout(&BezoutProblem {
                g: g0.permute_vars(perm),
                h: h0.permute_vars(perm),
                f: component.clone(),
                delta: delta_p.clone(),
                mode: bezout_mode,
            })?;
            h = h.add(&solution.a)?;
            g = g.add(&solution.b)?;
            solves += 1;
        }
        trace.push(TraceEntry {
            iteration,
            level: a_k.clone(),
            bezout_solves: solves,
        });
        prev_level = a_k;
    }
    if !done {
        // the loop may also finish exactly at the cap; re-check
        let product = g.mul_truncated(&h, &lp, target)?;
        if !fp.sub(&product)?.truncate(&lp, target).is_zero() {
            return Err(LiftError::IterationCap(options.iteration_cap));
        }
    }

    // exact residual certificate on the computed data
    let mut g = g.permute_vars(perm);
    let mut h = h.permute_vars(perm);
    let residual_valuation = f.sub(&g.mul(&h)?)?.valuation(&frame.witness)?;
    debug_assert!(residual_valuation > *target);

    // honest truncation markers: a factor is final up to the target minus
    // the other factor's level
    let g_level = g0
        .valuation(&frame.witness)?
        .finite()
        .expect("nonzero factor")
        .clone();
    let h_level = h0
        .valuation(&frame.witness)?
        .finite()
        .expect("nonzero factor")
        .clone();
    g.set_truncation(Some(Truncation {
        form: frame.witness.clone(),
        cutoff: target - &h_level,
    }));
    h.set_truncation(Some(Truncation {
        form: frame.witness.clone(),
        cutoff: target - &g_level,
    }));

    let (e1, e2) = factor_faces(&ep, &split);
    Ok(FactorizationResult {
        g,
        h,
        initial_g: g0,
        initial_h: h0,
        e1,
        e2,
        residual_valuation,
        trace,
        forced_non_loose,
        target: target.clone(),
    })
}

/// The minimal faces of the factors under the edge's witness form, read off
/// the split: a segment parallel to the edge for the first factor, and a
/// segment or single vertex for the second.
fn factor_faces(ep: &EdgePolynomial, split: &Split) -> (Face, Face) {
    let zero = ExponentVector::zero(ep.base.len());
    let e1 = segment_face(&zero, split.p1.degree().unwrap_or(0) as u64, ep);
    let e2 = segment_face(&ep.base, split.p2.degree().unwrap_or(0) as u64, ep);
    (e1, e2)
}

fn segment_face(base: &ExponentVector, steps: u64, ep: &EdgePolynomial) -> Face {
    if steps == 0 {
        return Face::Vertex(base.clone());
    }
    let scale = |v: &ExponentVector, s: u64| ExponentVector(v.0.iter().map(|&e| e * s).collect());
    Face::Edge {
        alpha: base.add(&scale(&ep.d_minus, steps)),
        beta: base.add(&scale(&ep.d_plus, steps)),
    }
}

/// Convenience: the edge initial form of a factor result's first factor,
/// for contract checks.
pub fn minimal_face_of(f: &Series, l: &LinearForm) -> Result<Face, LiftError> {
    let init = f.initial_form(l)?;
    let support = init.support();
    if support.len() == 1 {
        return Ok(Face::Vertex(support[0].clone()));
    }
    let first = support.first().unwrap().clone();
    let last = support.last().unwrap().clone();
    // lexicographic order along a segment puts the ends first and last
    Ok(Face::Edge {
        alpha: choose_alpha(&first, &last),
        beta: choose_beta(&first, &last),
    })
}

fn choose_alpha(a: &ExponentVector, b: &ExponentVector) -> ExponentVector {
    let n = a.len();
    if a.0[n - 1] >= b.0[n - 1] {
        a.clone()
    } else {
        b.clone()
    }
}

fn choose_beta(a: &ExponentVector, b: &ExponentVector) -> ExponentVector {
    let n = a.len();
    if a.0[n - 1] >= b.0[n - 1] {
        b.clone()
    } else {
        a.clone()
    }
}
