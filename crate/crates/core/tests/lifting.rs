//! End-to-end tests of the lifting pipeline on hand-derivable instances,
//! with expected values frozen from independent multiplication oracles.

mod common;

use common::{ev, qelt, qfrac, qseries, rat};
use num_rational::BigRational;

use looseedge::algebra::{FieldSpec, UPoly};
use looseedge::lifting::{
    default_split, default_target, edge_to_univariate, factor_weierstrass, irreducibility_report,
    lift_factorization, lift_factorization_with, lift_monic, minimal_face_of, weierstrass_prepare,
    Face, InconclusiveReason, LiftError, LiftOptions, Split, SplitMode, Verdict,
};
use looseedge::polyhedron::{EdgeFrame, NewtonPolyhedron};
use looseedge::series::{Series, Valuation};

const Q: FieldSpec = FieldSpec::Rationals;

fn conic_with_tail() -> Series {
    // x² − y² + y³
    qseries(2, &[(&[2, 0], 1), (&[0, 2], -1), (&[0, 3], 1)])
}

fn only_edge(f: &Series) -> EdgeFrame {
    let np = NewtonPolyhedron::from_series(f).unwrap();
    assert_eq!(np.edges().len(), 1, "expected a unique edge");
    np.edges()[0].clone()
}

fn split_t_minus_plus() -> Split {
    Split::user(UPoly::from_ints(Q, &[-1, 1]), UPoly::from_ints(Q, &[1, 1]))
}

#[test]
fn lift_conic_to_target_three() {
    let f = conic_with_tail();
    let e = only_edge(&f);
    let res = lift_factorization(&f, &e, &split_t_minus_plus(), &rat(3)).unwrap();

    // canonical factors frozen from the independent product
    // (x − y + y²/2)(x + y − y²/2) = x² − y² + y³ − y⁴/4
    let mut g_expect = qseries(2, &[(&[1, 0], 1), (&[0, 1], -1)]);
    g_expect.add_term(ev(&[0, 2]), qfrac(1, 2)).unwrap();
    let mut h_expect = qseries(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
    h_expect.add_term(ev(&[0, 2]), qfrac(-1, 2)).unwrap();

    assert_eq!(res.g.support(), g_expect.support());
    for (exp, c) in g_expect.terms() {
        assert_eq!(res.g.coeff(exp), c.clone());
    }
    for (exp, c) in h_expect.terms() {
        assert_eq!(res.h.coeff(exp), c.clone());
    }
    assert_eq!(res.residual_valuation, Valuation::Finite(rat(4)));

    // residual really is y⁴/4
    let product = res.g.mul(&res.h).unwrap();
    let residual = f.sub(&product).unwrap();
    assert_eq!(residual.support(), vec![ev(&[0, 4])]);
    assert_eq!(residual.coeff(&ev(&[0, 4])), qfrac(1, 4));
}

#[test]
fn exact_product_terminates_with_infinite_residual() {
    // f = (x − y)(x + y)
    let f = qseries(2, &[(&[2, 0], 1), (&[0, 2], -1)]);
    let e = only_edge(&f);
    let res = lift_factorization(&f, &e, &split_t_minus_plus(), &rat(20)).unwrap();
    assert!(res.residual_valuation.is_infinite());
    assert_eq!(res.g, {
        let mut g = qseries(2, &[(&[1, 0], 1), (&[0, 1], -1)]);
        g.set_truncation(res.g.truncation().cloned());
        g
    });
    assert!(res.trace.is_empty(), "no corrections needed");
}

#[test]
fn lift_cusp_edge_with_monomial_factor() {
    // f = x³ + xy + y³ along the edge (0,3)-(1,1) with split (1 + T, 1)
    let f = qseries(2, &[(&[3, 0], 1), (&[1, 1], 1), (&[0, 3], 1)]);
    let np = NewtonPolyhedron::from_series(&f).unwrap();
    let e = np
        .edges()
        .iter()
        .find(|e| {
            let mut ends = [e.alpha.clone(), e.beta.clone()];
            ends.sort();
            ends == [ev(&[0, 3]), ev(&[1, 1])]
        })
        .unwrap()
        .clone();
    let split = Split::user(UPoly::from_ints(Q, &[1, 1]), UPoly::one(Q));
    let res = lift_factorization(&f, &e, &split, &rat(8)).unwrap();

    // initial-form contracts
    let in_g = res.g.initial_form(&e.witness).unwrap();
    let in_h = res.h.initial_form(&e.witness).unwrap();
    assert_eq!(in_g, qseries(2, &[(&[1, 0], 1), (&[0, 2], 1)])); // X + Y²
    assert_eq!(in_h, qseries(2, &[(&[0, 1], 1)])); // Y
    assert_eq!(in_g, res.initial_g);
    assert_eq!(in_h, res.initial_h);

    // residual beyond the target, certified by exact multiplication
    let residual = f.sub(&res.g.mul(&res.h).unwrap()).unwrap();
    assert!(residual.valuation(&e.witness).unwrap() > rat(8));
}

#[test]
fn trace_levels_strictly_ascend() {
    let f = conic_with_tail();
    let e = only_edge(&f);
    let res = lift_factorization(&f, &e, &split_t_minus_plus(), &rat(12)).unwrap();
    let mut prev = e.level();
    for entry in &res.trace {
        assert!(entry.level > prev, "levels must strictly increase");
        assert!(entry.bezout_solves >= 1);
        prev = entry.level.clone();
    }
    assert!(res.residual_valuation > rat(12));
}

#[test]
fn face_sum_reconstructs_the_edge() {
    let f = conic_with_tail();
    let e = only_edge(&f);
    let res = lift_factorization(&f, &e, &split_t_minus_plus(), &rat(6)).unwrap();
    let sum = res.e1.minkowski(&res.e2);
    let mut expect = vec![e.alpha.clone(), e.beta.clone()];
    expect.sort();
    assert_eq!(sum.ends(), expect);
    // the factor faces agree with the minimal faces of the lifted factors
    assert_eq!(
        minimal_face_of(&res.g, &e.witness).unwrap().ends(),
        res.e1.ends()
    );
    assert_eq!(
        minimal_face_of(&res.h, &e.witness).unwrap().ends(),
        res.e2.ends()
    );
}

#[test]
fn non_loose_edges_are_rejected_unless_forced() {
    // the simplex face: every edge sits inside the 2-face
    let f = qseries(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1)]);
    let np = NewtonPolyhedron::from_series(&f).unwrap();
    let e = np.edges()[0].clone();
    let ep = edge_to_univariate(&f, &e).unwrap();
    let split = Split::user(ep.poly.clone(), UPoly::one(Q));
    let err = lift_factorization(&f, &e, &split, &rat(5)).unwrap_err();
    assert!(matches!(err, LiftError::NotLoose));

    let forced = lift_factorization_with(
        &f,
        &e,
        &split,
        &rat(5),
        &LiftOptions {
            allow_non_loose: true,
            ..LiftOptions::default()
        },
    );
    if let Ok(res) = forced {
        assert!(res.forced_non_loose);
    }
}

#[test]
fn target_below_edge_level_is_rejected() {
    let f = conic_with_tail();
    let e = only_edge(&f);
    let err = lift_factorization(&f, &e, &split_t_minus_plus(), &rat(1)).unwrap_err();
    assert!(matches!(err, LiftError::TargetBelowValuation));
}

#[test]
fn default_target_is_ten_grid_steps_up() {
    let f = conic_with_tail();
    let e = only_edge(&f);
    assert_eq!(default_target(&e), rat(12));
}

#[test]
fn monic_lift_of_descendant_edge() {
    // f = z² − x² + x³ in variables (x, z)
    let f = qseries(2, &[(&[0, 2], 1), (&[2, 0], -1), (&[3, 0], 1)]);
    let e = only_edge(&f);
    assert!(e.is_descendant());
    let res = lift_monic(&f, &e, &split_t_minus_plus(), &rat(8)).unwrap();
    // monic initial: Z − X after normalization
    assert_eq!(res.initial_g, qseries(2, &[(&[0, 1], 1), (&[1, 0], -1)]));
    let residual = f.sub(&res.g.mul(&res.h).unwrap()).unwrap();
    assert!(residual.valuation(&e.witness).unwrap() > rat(8));
}

#[test]
fn monic_lift_exact_split() {
    // f = z² − x² factors exactly
    let f = qseries(2, &[(&[0, 2], 1), (&[2, 0], -1)]);
    let e = only_edge(&f);
    let res = lift_monic(&f, &e, &split_t_minus_plus(), &rat(10)).unwrap();
    assert!(res.residual_valuation.is_infinite());
    assert_eq!(res.g.support(), vec![ev(&[0, 1]), ev(&[1, 0])]);
    assert_eq!(res.g.coeff(&ev(&[0, 1])), qelt(1));
    assert_eq!(res.g.coeff(&ev(&[1, 0])), qelt(-1));
}

#[test]
fn monic_lift_rejects_non_descendant_edges() {
    // z²x − y³ geometry: edge direction has a positive and a negative entry
    // away from the last coordinate
    let f = qseries(3, &[(&[1, 0, 2], 1), (&[0, 3, 0], -1)]);
    let np = NewtonPolyhedron::from_series(&f).unwrap();
    let e = np.edges()[0].clone();
    assert!(!e.is_descendant());
    let ep = edge_to_univariate(&f, &e).unwrap();
    let split = default_split(&ep, SplitMode::Plain).unwrap();
    let split = split.unwrap_or_else(|| {
        Split::user(ep.poly.clone(), UPoly::one(Q))
    });
    let err = lift_monic(&f, &e, &split, &rat(9)).unwrap_err();
    assert!(matches!(err, LiftError::NotDescendant));
}

#[test]
fn prepare_fixed_point() {
    // already monic polynomial in z: u = 1, ghat = input
    let mut g = qseries(2, &[(&[0, 1], 1), (&[1, 0], -1)]);
    g.add_term(ev(&[2, 0]), qfrac(1, 2)).unwrap();
    let (u, ghat) = weierstrass_prepare(&g, 1, 6).unwrap();
    assert_eq!(u, Series::one(2, Q));
    assert_eq!(ghat, {
        let mut expect = g.clone();
        expect.set_truncation(None);
        expect
    });
}

#[test]
fn prepare_unit_times_monic() {
    // (1 + x)(z − x) = z + xz − x − x²
    let g = qseries(2, &[(&[0, 1], 1), (&[1, 1], 1), (&[1, 0], -1), (&[2, 0], -1)]);
    let (u, ghat) = weierstrass_prepare(&g, 1, 5).unwrap();
    assert_eq!(u, qseries(2, &[(&[0, 0], 1), (&[1, 0], 1)]));
    assert_eq!(ghat, qseries(2, &[(&[0, 1], 1), (&[1, 0], -1)]));
    // exact reconstruction
    assert_eq!(u.mul(&ghat).unwrap(), g);
}

#[test]
fn prepare_rejects_wrong_axis_order() {
    let g = qseries(2, &[(&[0, 2], 1), (&[1, 0], 1)]);
    assert!(matches!(
        weierstrass_prepare(&g, 1, 3),
        Err(LiftError::ZOrderMismatch(_))
    ));
}

/// Binomial-series oracle: the square root of 1 − x as exact rationals,
/// verified by squaring before use.
fn sqrt_one_minus_x(order: usize) -> Vec<BigRational> {
    // c_0 = 1, c_k = c_{k-1} · (1/2 − (k−1)) / k · (−1)
    let mut coeffs = vec![rat(1)];
    let half = BigRational::new(1.into(), 2.into());
    for k in 1..=order {
        let prev = coeffs[k - 1].clone();
        let factor = (&half - rat(k as i64 - 1)) / rat(k as i64);
        coeffs.push(prev * factor * rat(-1));
    }
    // verify by squaring: Σ c_i c_j with i+j = m must be [1, −1, 0, 0, …]
    for m in 0..=order {
        let mut acc = rat(0);
        for i in 0..=m {
            if i < coeffs.len() && m - i < coeffs.len() {
                acc += &coeffs[i] * &coeffs[m - i];
            }
        }
        let expect = match m {
            0 => rat(1),
            1 => rat(-1),
            _ => rat(0),
        };
        assert_eq!(acc, expect, "oracle self-check at degree {m}");
    }
    coeffs
}

#[test]
fn weierstrass_factorization_matches_binomial_oracle() {
    // f = z² − x² + x³ = (z − x√(1−x))(z + x√(1−x))
    let f = qseries(2, &[(&[0, 2], 1), (&[2, 0], -1), (&[3, 0], 1)]);
    let e = only_edge(&f);
    let order = 6u64;
    let res = factor_weierstrass(&f, &e, &split_t_minus_plus(), &rat(16), order).unwrap();

    // ghat = z − x·(1−x)^{1/2} truncated at x-order 6
    let root = sqrt_one_minus_x(order as usize);
    let mut expect = Series::zero(2, Q);
    expect.add_term(ev(&[0, 1]), qelt(1)).unwrap();
    for (k, c) in root.iter().enumerate() {
        if k + 1 > order as usize {
            break;
        }
        expect
            .add_term(
                ev(&[(k + 1) as u64, 0]),
                looseedge::algebra::FieldElement::Rational(-c.clone()),
            )
            .unwrap();
    }
    assert_eq!(res.g, expect);

    // the product reproduces f beyond the combined precision
    let residual = f.sub(&res.g.mul(&res.h).unwrap()).unwrap();
    assert!(residual.valuation(&e.witness).unwrap() > rat(order as i64));
}

#[test]
fn weierstrass_exact_case() {
    let f = qseries(2, &[(&[0, 2], 1), (&[2, 0], -1)]);
    let e = only_edge(&f);
    let res = factor_weierstrass(&f, &e, &split_t_minus_plus(), &rat(10), 5).unwrap();
    assert_eq!(res.g, qseries(2, &[(&[0, 1], 1), (&[1, 0], -1)]));
    assert_eq!(res.h, {
        let mut h = qseries(2, &[(&[0, 1], 1), (&[1, 0], 1)]);
        h.set_truncation(res.h.truncation().cloned());
        h
    });
    assert!(res.residual_valuation.is_infinite());
}

#[test]
fn weierstrass_desk_instance_with_perturbation() {
    // f = (z − x)(z + x + x²) + x⁷: monic ghat, residual beyond target
    let a = qseries(2, &[(&[0, 1], 1), (&[1, 0], -1)]);
    let b = qseries(2, &[(&[0, 1], 1), (&[1, 0], 1), (&[2, 0], 1)]);
    let mut f = a.mul(&b).unwrap();
    f.add_term(ev(&[7, 0]), qelt(1)).unwrap();
    let np = NewtonPolyhedron::from_series(&f).unwrap();
    let e = np
        .edges()
        .iter()
        .find(|e| e.loose && e.is_descendant())
        .expect("descendant loose edge")
        .clone();
    let order = 5u64;
    let res = factor_weierstrass(&f, &e, &split_t_minus_plus(), &rat(12), order).unwrap();
    // monic of z-degree 1, sub-leading coefficients vanish on the z-axis
    assert_eq!(res.g.coeff(&ev(&[0, 1])), qelt(1));
    for (exp, _) in res.g.terms() {
        if exp != &ev(&[0, 1]) {
            assert_eq!(exp.0[1], 0);
            assert!(exp.0[0] >= 1);
        }
    }
    let residual = f.sub(&res.g.mul(&res.h).unwrap()).unwrap();
    assert!(residual.valuation(&e.witness).unwrap() > rat(order as i64));
}

#[test]
fn irreducibility_reducible_with_three_vertices() {
    let f = qseries(2, &[(&[1, 1], 1), (&[3, 0], 1), (&[0, 3], 1)]);
    let report = irreducibility_report(&f).unwrap();
    match report.verdict {
        Verdict::Reducible { witness, .. } => {
            let residual = f.sub(&witness.g.mul(&witness.h).unwrap()).unwrap();
            let e = &report.polyhedron.edges()[0];
            assert!(residual.valuation(&e.witness).unwrap() > witness.target);
        }
        other => panic!("expected reducible, got {other:?}"),
    }
}

#[test]
fn irreducibility_inconclusive_on_irreducible_power() {
    // (x − y)² + y³
    let f = qseries(2, &[(&[2, 0], 1), (&[1, 1], -2), (&[0, 2], 1), (&[0, 3], 1)]);
    let report = irreducibility_report(&f).unwrap();
    match report.verdict {
        Verdict::Inconclusive { reason } => {
            assert!(matches!(
                reason,
                InconclusiveReason::IrreduciblePowerPattern { .. }
            ));
        }
        other => panic!("expected inconclusive, got {other:?}"),
    }
}

#[test]
fn irreducibility_unit_and_monomial_inputs() {
    // a single parameter: one vertex, no edge
    let f = qseries(2, &[(&[1, 0], 1)]);
    let report = irreducibility_report(&f).unwrap();
    match report.verdict {
        Verdict::Inconclusive { reason } => {
            assert_eq!(reason, InconclusiveReason::NoLooseEdge)
        }
        other => panic!("expected inconclusive, got {other:?}"),
    }

    assert!(matches!(
        irreducibility_report(&Series::zero(2, Q)),
        Err(LiftError::ZeroInput)
    ));
    assert!(matches!(
        irreducibility_report(&Series::one(2, Q)),
        Err(LiftError::UnitInput)
    ));
}

#[test]
fn irreducibility_simplex_has_no_loose_edge() {
    let f = qseries(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1)]);
    let report = irreducibility_report(&f).unwrap();
    match report.verdict {
        Verdict::Inconclusive { reason } => {
            assert_eq!(reason, InconclusiveReason::NoLooseEdge)
        }
        other => panic!("expected inconclusive, got {other:?}"),
    }
}

#[test]
fn truncation_markers_are_honest() {
    let f = conic_with_tail();
    let e = only_edge(&f);
    let res = lift_factorization(&f, &e, &split_t_minus_plus(), &rat(9)).unwrap();
    // h sits at level 1, so g is final through 9 − 1 = 8
    let tg = res.g.truncation().unwrap();
    assert_eq!(tg.cutoff, rat(8));
    let th = res.h.truncation().unwrap();
    assert_eq!(th.cutoff, rat(8));
    // raising the target must not change the terms below the old cutoffs
    let refined = lift_factorization(&f, &e, &split_t_minus_plus(), &rat(14)).unwrap();
    for (exp, c) in res.g.terms() {
        assert_eq!(refined.g.coeff(exp), c.clone());
    }
    for (exp, _) in refined.g.terms() {
        if e.witness.apply(exp) <= rat(8) && res.g.coeff(exp).is_zero() {
            panic!("term below the stated cutoff appeared only at higher target");
        }
    }
}

#[test]
fn face_types_for_monomial_second_factor() {
    // split (p, 1): the second face is a vertex
    let f = qseries(2, &[(&[1, 1], 1), (&[3, 0], 1), (&[0, 3], 1)]);
    let np = NewtonPolyhedron::from_series(&f).unwrap();
    let e = np
        .edges()
        .iter()
        .find(|e| {
            let mut ends = [e.alpha.clone(), e.beta.clone()];
            ends.sort();
            ends == [ev(&[0, 3]), ev(&[1, 1])]
        })
        .unwrap()
        .clone();
    let split = Split::user(UPoly::from_ints(Q, &[1, 1]), UPoly::one(Q));
    let res = lift_factorization(&f, &e, &split, &rat(9)).unwrap();
    assert!(matches!(res.e2, Face::Vertex(_)));
    assert!(matches!(res.e1, Face::Edge { .. }));
}
