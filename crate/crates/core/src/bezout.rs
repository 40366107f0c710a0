//! The graded Bézout solver: given coprime graded polynomials G and H and a
//! graded target F, find A and B in the prescribed pieces with
//! G·A + H·B = F, by exact Gaussian elimination over the fiber bases.
//!
//! Directions are in permuted coordinates throughout (last entry negative).

use thiserror::Error;

use crate::algebra::{upoly_gcd, AlgebraError, FieldElement, UPoly};
use crate::grading::{fiber_default, homogeneous_index, GradedIndex, GradingError};
use crate::series::{ExponentVector, Series, SeriesError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BezoutError {
    #[error("input polynomial is not homogeneous for the given direction")]
    NotGraded,
    #[error("G and H are not coprime")]
    NotCoprime,
    #[error("G is divisible by the variable at index {0}")]
    VariableDivides(usize),
    #[error("G is not monic in the last variable")]
    NotMonic,
    #[error("the graded system is inconsistent (violated preconditions)")]
    Unsolvable,
    #[error("index mismatch: target must sit above idx(G) + idx(H)")]
    IndexMismatch,
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Validation mode, mirroring the two solvability hypotheses: either G is
/// divisible by no variable, or G is monic in the last variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BezoutMode {
    NoVariableDivides,
    MonicInLast,
}

#[derive(Clone, Debug)]
pub struct BezoutProblem {
    pub g: Series,
    pub h: Series,
    pub f: Series,
    pub delta: Vec<i64>,
    pub mode: BezoutMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutSolution {
    /// Component in the piece of idx(H) + i; pairs with G.
    pub a: Series,
    /// Component in the piece of idx(G) + i; pairs with H.
    pub b: Series,
    /// Dimension of the solution space of the homogeneous system.
    pub kernel_dim: usize,
}

/// Segment data of a graded polynomial: fibers are lattice segments, so a
/// graded polynomial is a monomial times a univariate polynomial along the
/// primitive direction.
pub struct SegmentPoly {
    /// Common monomial factor (componentwise minimum of the support ends).
    pub base: ExponentVector,
    /// Coefficients along the primitive direction, starting from the
    /// support point with the largest last coordinate.
    pub poly: UPoly,
}

/// Extracts the segment form of a nonzero graded polynomial. The direction
/// must be primitive and in permuted coordinates.
pub fn segment_poly(g: &Series, primitive: &[i64]) -> Result<SegmentPoly, BezoutError> {
    if g.is_zero() {
        return Err(BezoutError::NotGraded);
    }
    let n = g.n_vars();
    // start: support point with maximal last coordinate (minimal along the
    // walking direction, whose last entry is negative)
    let start = g
        .terms()
        .map(|(e, _)| e)
        .max_by_key(|e| e.0[n - 1])
        .expect("nonzero")
        .clone();
    let end = g
        .terms()
        .map(|(e, _)| e)
        .min_by_key(|e| e.0[n - 1])
        .expect("nonzero")
        .clone();
    let span = (start.0[n - 1] - end.0[n - 1]) / primitive[n - 1].unsigned_abs();
    let mut coeffs = Vec::with_capacity(span as usize + 1);
    let mut cursor = Some(start.clone());
    for j in 0..=span {
        let at = cursor.as_ref().ok_or(BezoutError::NotGraded)?;
        coeffs.push(g.coeff(at));
        if j < span {
            cursor = at.offset(primitive);
        }
    }
    // every support point must have been visited
    let poly = UPoly::new(g.field(), coeffs)?;
    if poly.coeffs().iter().filter(|c| !c.is_zero()).count() != g.len() {
        return Err(BezoutError::NotGraded);
    }
    Ok(SegmentPoly {
        base: start.min_with(&end),
        poly,
    })
}

/// Coprimality of two graded polynomials through the segment bridge: no
/// common variable may divide both, and the segment polynomials must have
/// trivial gcd.
pub fn graded_coprime(g: &Series, h: &Series, primitive: &[i64]) -> Result<bool, BezoutError> {
    let sg = segment_poly(g, primitive)?;
    let sh = segment_poly(h, primitive)?;
    if !sg.base.min_with(&sh.base).is_zero() {
        return Ok(false);
    }
    Ok(upoly_gcd(&sg.poly, &sh.poly)?.is_one())
}

/// Indices of the variables dividing a nonzero polynomial.
fn dividing_variables(g: &Series) -> Vec<usize> {
    let n = g.n_vars();
    (0..n)
        .filter(|&i| g.terms().all(|(e, _)| e.0[i] > 0))
        .collect()
}

/// Monic in the last variable: the support point of maximal last coordinate
/// is a pure power of it, with coefficient one.
fn is_monic_in_last(g: &Series) -> bool {
    let n = g.n_vars();
    let top = match g.terms().map(|(e, _)| e).max_by_key(|e| e.0[n - 1]) {
        None => return false,
        Some(e) => e.clone(),
    };
    top.0[..n - 1].iter().all(|&e| e == 0) && g.coeff(&top).is_one()
}

impl BezoutProblem {
    fn validate(&self) -> Result<(GradedIndex, GradedIndex, GradedIndex), BezoutError> {
        let u = homogeneous_index(&self.g, &self.delta)?.ok_or(BezoutError::NotGraded)?;
        let w = homogeneous_index(&self.h, &self.delta)?.ok_or(BezoutError::NotGraded)?;
        let target = match homogeneous_index(&self.f, &self.delta)? {
            Some(t) => t,
            // a zero target is fine; use the base index so fibers are sane
            None if self.f.is_zero() => u.add(&w),
            None => return Err(BezoutError::NotGraded),
        };
        let primitive = primitive_of(&self.delta);
        match self.mode {
            BezoutMode::NoVariableDivides => {
                if let Some(&i) = dividing_variables(&self.g).first() {
                    return Err(BezoutError::VariableDivides(i));
                }
            }
            BezoutMode::MonicInLast => {
                if !is_monic_in_last(&self.g) {
                    return Err(BezoutError::NotMonic);
                }
            }
        }
        if !graded_coprime(&self.g, &self.h, &primitive)? {
            return Err(BezoutError::NotCoprime);
        }
        Ok((u, w, target))
    }
}

fn primitive_of(delta: &[i64]) -> Vec<i64> {
    let mut g: u64 = 0;
    for d in delta {
        g = num_integer::gcd(g, d.unsigned_abs());
    }
    debug_assert!(g >= 1);
    delta.iter().map(|d| d / g as i64).collect()
}

/// Solves G·A + H·B = F in the graded pieces determined by the indices.
/// The canonical solution zeroes all free variables under the documented
/// pivot order: columns are the A-basis then the B-basis, each sorted
/// lexicographically; rows are the target basis sorted lexicographically.
pub fn solve_graded_bezout(problem: &BezoutProblem) -> Result<BezoutSolution, BezoutError> {
    let (u, w, target_idx) = problem.validate()?;
    let i = target_idx.sub(&u.add(&w));
    let delta = &problem.delta;
    let field = problem.f.field();
    let n = problem.f.n_vars();

    let a_basis = fiber_default(delta, &w.add(&i))?.basis;
    let b_basis = fiber_default(delta, &u.add(&i))?.basis;
    let target_basis = fiber_default(delta, &target_idx)?.basis;

    if problem.f.is_zero() {
        return Ok(BezoutSolution {
            a: Series::zero(n, field),
            b: Series::zero(n, field),
            kernel_dim: fiber_default(delta, &i)
                .map(|p| p.dim())
                .unwrap_or(0),
        });
    }

    let row_of: std::collections::BTreeMap<&ExponentVector, usize> = target_basis
        .iter()
        .enumerate()
        .map(|(r, e)| (e, r))
        .collect();
    let rows = target_basis.len();
    let cols = a_basis.len() + b_basis.len();
    let zero = FieldElement::zero(field);
    let mut matrix = vec![vec![zero.clone(); cols]; rows];
    let mut rhs = vec![zero.clone(); rows];

    for (c, m) in a_basis.iter().enumerate() {
        for (e, coeff) in problem.g.terms() {
            let prod = e.add(m);
            let r = *row_of.get(&prod).ok_or(BezoutError::IndexMismatch)?;
            matrix[r][c] = matrix[r][c].add(coeff).expect("same field");
        }
    }
    for (c, m) in b_basis.iter().enumerate() {
        for (e, coeff) in problem.h.terms() {
            let prod = e.add(m);
            let r = *row_of.get(&prod).ok_or(BezoutError::IndexMismatch)?;
            let c = a_basis.len() + c;
            matrix[r][c] = matrix[r][c].add(coeff).expect("same field");
        }
    }
    for (e, coeff) in problem.f.terms() {
        let r = *row_of.get(e).ok_or(BezoutError::IndexMismatch)?;
        rhs[r] = coeff.clone();
    }

    let solution = gaussian_solve(matrix, rhs, field).ok_or(BezoutError::Unsolvable)?;
    let (values, kernel_dim) = solution;

    let mut a = Series::zero(n, field);
    for (m, v) in a_basis.iter().zip(&values[..a_basis.len()]) {
        a.add_term(m.clone(), v.clone())?;
    }
    let mut b = Series::zero(n, field);
    for (m, v) in b_basis.iter().zip(&values[a_basis.len()..]) {
        b.add_term(m.clone(), v.clone())?;
    }
    Ok(BezoutSolution { a, b, kernel_dim })
}

/// Chained solve for a product second factor: finds A, B with
/// G·A + H₁H₂·B = F by composing two plain solves.
pub fn solve_chain(
    g: &Series,
    h1: &Series,
    h2: &Series,
    f: &Series,
    delta: &[i64],
    mode: BezoutMode,
) -> Result<BezoutSolution, BezoutError> {
    if f.is_zero() {
        let n = f.n_vars();
        let field = f.field();
        return Ok(BezoutSolution {
            a: Series::zero(n, field),
            b: Series::zero(n, field),
            kernel_dim: 0,
        });
    }
    // a constant second factor degenerates to a plain solve
    if h2.len() == 1 {
        if let Some((e, c)) = h2.terms().next() {
            if e.is_zero() {
                let scaled = h1.scale(c);
                return solve_graded_bezout(&BezoutProblem {
                    g: g.clone(),
                    h: scaled,
                    f: f.clone(),
                    delta: delta.to_vec(),
                    mode,
                });
            }
        }
    }
    // first peel H₁: G·A₁ + H₁·B₁ = F
    let first = solve_graded_bezout(&BezoutProblem {
        g: g.clone(),
        h: h1.clone(),
        f: f.clone(),
        delta: delta.to_vec(),
        mode,
    })?;
    // then split B₁ against H₂: G·A₂ + H₂·B₂ = B₁
    let second = solve_graded_bezout(&BezoutProblem {
        g: g.clone(),
        h: h2.clone(),
        f: first.b.clone(),
        delta: delta.to_vec(),
        mode,
    })?;
    // recombine: F = G·(A₁ + H₁·A₂) + H₁H₂·B₂
    let a = first.a.add(&h1.mul(&second.a)?)?;
    Ok(BezoutSolution {
        a,
        b: second.b,
        kernel_dim: second.kernel_dim,
    })
}

/// Exact Gaussian elimination with deterministic pivoting: columns are
/// scanned left to right, the pivot row is the first with a nonzero entry.
/// Free variables are set to zero. Returns the solution vector and the
/// kernel dimension, or `None` when inconsistent.
fn gaussian_solve(
    mut m: Vec<Vec<FieldElement>>,
    mut rhs: Vec<FieldElement>,
    field: crate::algebra::FieldSpec,
) -> Option<(Vec<FieldElement>, usize)> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivot_in_col: Vec<Option<usize>> = vec![None; cols];
    let mut next_row = 0usize;
    for col in 0..cols {
        let pivot = (next_row..rows).find(|&r| !m[r][col].is_zero());
        let pivot = match pivot {
            None => continue,
            Some(p) => p,
        };
        m.swap(next_row, pivot);
        rhs.swap(next_row, pivot);
        let inv = m[next_row][col].inv().expect("pivot nonzero");
        for c in col..cols {
            m[next_row][c] = m[next_row][c].mul(&inv).expect("same field");
        }
        rhs[next_row] = rhs[next_row].mul(&inv).expect("same field");
        for r in 0..rows {
            if r != next_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..cols {
                    let t = m[next_row][c].mul(&factor).expect("same field");
                    m[r][c] = m[r][c].sub(&t).expect("same field");
                }
                let t = rhs[next_row].mul(&factor).expect("same field");
                rhs[r] = rhs[r].sub(&t).expect("same field");
            }
        }
        pivot_in_col[col] = Some(next_row);
        next_row += 1;
        if next_row == rows {
            break;
        }
    }
    // consistency: zero rows must have zero rhs
    for r in next_row..rows {
        if !rhs[r].is_zero() {
            return None;
        }
    }
    let rank = next_row;
    let mut values = vec![FieldElement::zero(field); cols];
    for col in 0..cols {
        if let Some(r) = pivot_in_col[col] {
            values[col] = rhs[r].clone();
        }
    }
    Some((values, cols - rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;
    use num_rational::BigRational;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn ev(entries: &[u64]) -> ExponentVector {
        ExponentVector(entries.to_vec())
    }

    fn qs(n: i64, d: i64) -> FieldElement {
        FieldElement::Rational(BigRational::new(n.into(), d.into()))
    }

    fn poly(terms: &[(&[u64], i64)]) -> Series {
        Series::from_terms(
            terms[0].0.len(),
            Q,
            terms.iter().map(|(e, c)| {
                (
                    ExponentVector(e.to_vec()),
                    FieldElement::from_integer(Q, *c),
                )
            }),
        )
        .unwrap()
    }

    fn x_minus_y() -> Series {
        poly(&[(&[1, 0], 1), (&[0, 1], -1)])
    }

    fn x_plus_y() -> Series {
        poly(&[(&[1, 0], 1), (&[0, 1], 1)])
    }

    #[test]
    fn canonical_solution_of_the_cubic_target() {
        // (X−Y)·A + (X+Y)·B = Y³ along (2,−2): A = −½Y², B = ½Y²
        let problem = BezoutProblem {
            g: x_minus_y(),
            h: x_plus_y(),
            f: poly(&[(&[0, 3], 1)]),
            delta: vec![2, -2],
            mode: BezoutMode::NoVariableDivides,
        };
        let sol = solve_graded_bezout(&problem).unwrap();
        assert_eq!(sol.a, Series::monomial(ev(&[0, 2]), qs(-1, 2)));
        assert_eq!(sol.b, Series::monomial(ev(&[0, 2]), qs(1, 2)));
        assert_eq!(sol.kernel_dim, 2);
        // substitution check
        let back = problem
            .g
            .mul(&sol.a)
            .unwrap()
            .add(&problem.h.mul(&sol.b).unwrap())
            .unwrap();
        assert_eq!(back, problem.f);
    }

    #[test]
    fn product_target_solves_exactly() {
        let f = x_minus_y().mul(&x_plus_y()).unwrap();
        let problem = BezoutProblem {
            g: x_minus_y(),
            h: x_plus_y(),
            f: f.clone(),
            delta: vec![2, -2],
            mode: BezoutMode::NoVariableDivides,
        };
        let sol = solve_graded_bezout(&problem).unwrap();
        let back = problem
            .g
            .mul(&sol.a)
            .unwrap()
            .add(&problem.h.mul(&sol.b).unwrap())
            .unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn variable_divisibility_is_rejected() {
        // G = X² is divisible by X
        let problem = BezoutProblem {
            g: poly(&[(&[2, 0], 1)]),
            h: poly(&[(&[0, 2], 1)]),
            f: poly(&[(&[3, 1], 1)]),
            delta: vec![2, -2],
            mode: BezoutMode::NoVariableDivides,
        };
        assert!(matches!(
            solve_graded_bezout(&problem),
            Err(BezoutError::VariableDivides(0))
        ));
    }

    #[test]
    fn non_coprime_inputs_are_rejected() {
        // G = X² − Y², H = X + Y share a factor
        let problem = BezoutProblem {
            g: x_minus_y().mul(&x_plus_y()).unwrap(),
            h: x_plus_y(),
            f: poly(&[(&[0, 3], 1)]),
            delta: vec![2, -2],
            mode: BezoutMode::NoVariableDivides,
        };
        assert!(matches!(
            solve_graded_bezout(&problem),
            Err(BezoutError::NotCoprime)
        ));
    }

    #[test]
    fn kernel_matches_slack_fiber() {
        // rank-nullity against dim S_{δ,i} for a few slack indices
        for shift in 0..4i64 {
            let f = Series::monomial(
                ev(&[0, 2 + 2 * shift as u64 + 1]),
                FieldElement::from_integer(Q, 1),
            );
            let problem = BezoutProblem {
                g: x_minus_y(),
                h: x_plus_y(),
                f,
                delta: vec![2, -2],
                mode: BezoutMode::NoVariableDivides,
            };
            let sol = solve_graded_bezout(&problem).unwrap();
            let i = GradedIndex::from_ints(&[2 * shift + 1]);
            let expected = fiber_default(&[2, -2], &i).unwrap().dim();
            assert_eq!(sol.kernel_dim, expected);
        }
    }

    #[test]
    fn monic_mode_base_case() {
        // G = Z, H = X² (a polynomial in the other variable), target X²·Z²
        let g = poly(&[(&[0, 1], 1)]);
        let h = poly(&[(&[2, 0], 1)]);
        let f = poly(&[(&[2, 2], 1)]);
        let problem = BezoutProblem {
            g: g.clone(),
            h: h.clone(),
            f: f.clone(),
            delta: vec![1, -1],
            mode: BezoutMode::MonicInLast,
        };
        let sol = solve_graded_bezout(&problem).unwrap();
        let back = g.mul(&sol.a).unwrap().add(&h.mul(&sol.b).unwrap()).unwrap();
        assert_eq!(back, f);
        // the same G fails the no-variable-divides validation
        let strict = BezoutProblem {
            mode: BezoutMode::NoVariableDivides,
            ..problem
        };
        assert!(matches!(
            solve_graded_bezout(&strict),
            Err(BezoutError::VariableDivides(1))
        ));
    }

    #[test]
    fn chain_solve_substitutes_back() {
        // G·A + (X+Y)²·B = Y⁴
        let g = x_minus_y();
        let h = x_plus_y();
        let f = poly(&[(&[0, 4], 1)]);
        let sol = solve_chain(&g, &h, &h, &f, &[2, -2], BezoutMode::NoVariableDivides).unwrap();
        let hh = h.mul(&h).unwrap();
        let back = g.mul(&sol.a).unwrap().add(&hh.mul(&sol.b).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn chain_with_unit_second_factor_degenerates() {
        let g = x_minus_y();
        let h = x_plus_y();
        let one = Series::one(2, Q);
        let f = poly(&[(&[0, 3], 1)]);
        let chained = solve_chain(&g, &h, &one, &f, &[2, -2], BezoutMode::NoVariableDivides)
            .unwrap();
        let direct = solve_graded_bezout(&BezoutProblem {
            g,
            h,
            f,
            delta: vec![2, -2],
            mode: BezoutMode::NoVariableDivides,
        })
        .unwrap();
        assert_eq!(chained, direct);
    }

    #[test]
    fn chain_with_zero_target() {
        let sol = solve_chain(
            &x_minus_y(),
            &x_plus_y(),
            &x_plus_y(),
            &Series::zero(2, Q),
            &[2, -2],
            BezoutMode::NoVariableDivides,
        )
        .unwrap();
        assert!(sol.a.is_zero() && sol.b.is_zero());
    }

    #[test]
    fn deterministic_bit_for_bit() {
        let problem = BezoutProblem {
            g: x_minus_y(),
            h: x_plus_y(),
            f: poly(&[(&[0, 5], 3), (&[2, 3], 1)]),
            delta: vec![2, -2],
            mode: BezoutMode::NoVariableDivides,
        };
        let s1 = solve_graded_bezout(&problem).unwrap();
        let s2 = solve_graded_bezout(&problem).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn segment_poly_extraction() {
        let g = x_minus_y();
        let seg = segment_poly(&g, &[1, -1]).unwrap();
        assert_eq!(seg.base, ev(&[0, 0]));
        // start at (0,1): coefficients -1 then +1: T - 1
        assert_eq!(seg.poly, UPoly::from_ints(Q, &[-1, 1]));

        let m = poly(&[(&[3, 2], 5)]);
        let seg = segment_poly(&m, &[1, -1]).unwrap();
        assert_eq!(seg.base, ev(&[3, 2]));
        assert_eq!(seg.poly, UPoly::constant(FieldElement::from_integer(Q, 5)));
    }
}
