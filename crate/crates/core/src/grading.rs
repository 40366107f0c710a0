//! The refined grading of the associated graded ring along an edge
//! direction: fibers of the projection, their monomial bases, monoid
//! membership, and decomposition of graded polynomials into components.
//!
//! Directions here are always in permuted coordinates (last entry
//! negative); callers that work with edges in original coordinates permute
//! first and un-permute fiber output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::polyhedron::{project_point, PolyhedronError};
use crate::series::{ExponentVector, Series};

/// Defensive cap on the fiber enumeration; the fibers themselves are
/// finite, this only guards against degenerate inputs.
pub const DEFAULT_FIBER_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GradingError {
    #[error(transparent)]
    Polyhedron(#[from] PolyhedronError),
    #[error("fiber enumeration exceeded the step bound {0}")]
    BoundExceeded(u64),
    #[error("graded index has wrong dimension: expected {expected}, got {got}")]
    WrongIndexDim { expected: usize, got: usize },
}

/// Index of a graded piece: a rational vector in the projection target.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradedIndex(pub Vec<BigRational>);

impl GradedIndex {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        GradedIndex(
            entries
                .iter()
                .map(|&e| BigRational::from_integer(e.into()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        GradedIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        GradedIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl std::fmt::Display for GradedIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A graded piece: the index together with its full monomial basis, the
/// lattice points of one projection fiber, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub index: GradedIndex,
    pub basis: Vec<ExponentVector>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Projection of a lattice point along `delta`, as a graded index.
pub fn graded_index_of(
    point: &ExponentVector,
    delta: &[i64],
) -> Result<GradedIndex, GradingError> {
    Ok(GradedIndex(project_point(point, delta)?))
}

/// All lattice points of ℤⁿ≥0 projecting to `w` along `delta`: the segment
/// of lattice points on the affine line through (w, 0) with direction
/// `delta`, intersected with the positive orthant. Enumerated by scanning
/// admissible last coordinates, which form a finite range because the line
/// meets the orthant in a bounded segment.
pub fn fiber(delta: &[i64], w: &GradedIndex, bound: u64) -> Result<GradedPiece, GradingError> {
    let n = delta.len();
    if n < 2 || delta[n - 1] >= 0 || !delta[..n - 1].iter().any(|&d| d > 0) {
        return Err(GradingError::Polyhedron(PolyhedronError::BadDirection));
    }
    if w.dim() != n - 1 {
        return Err(GradingError::WrongIndexDim {
            expected: n - 1,
            got: w.dim(),
        });
    }
    // points: v_i = w_i + t·delta_i for i < n, v_n = t·delta_n, with t ≤ 0;
    // v ≥ 0 bounds t below: for delta_i > 0 need t ≥ -w_i/delta_i
    let mut t_min: Option<BigRational> = None;
    for (i, &d) in delta[..n - 1].iter().enumerate() {
        if d > 0 {
            let lo = -&w.0[i] / BigRational::from_integer(d.into());
            if t_min.as_ref().map_or(true, |m| &lo > m) {
                t_min = Some(lo);
            }
        }
    }
    let t_min = t_min.expect("admissible direction has a positive entry");
    // v_n = t·delta_n ranges over integers in [0, t_min·delta_n]
    let dn = BigInt::from(delta[n - 1]);
    let vn_max = (t_min * BigRational::from_integer(dn.clone())).floor();
    let vn_max = match vn_max.to_integer().to_i64() {
        Some(v) if v >= 0 => v as u64,
        _ => {
            return Ok(GradedPiece {
                index: w.clone(),
                basis: Vec::new(),
            })
        }
    };
    if vn_max >= bound {
        return Err(GradingError::BoundExceeded(bound));
    }

    let mut basis = Vec::new();
    'scan: for vn in 0..=vn_max {
        let t = BigRational::new(BigInt::from(vn), dn.clone());
        let mut point = Vec::with_capacity(n);
        for (i, &d) in delta[..n - 1].iter().enumerate() {
            let vi = &w.0[i] + &t * BigRational::from_integer(d.into());
            if !vi.is_integer() || vi < BigRational::zero() {
                continue 'scan;
            }
            point.push(vi.to_integer().to_u64().expect("nonnegative integer"));
        }
        point.push(vn);
        basis.push(ExponentVector(point));
    }
    basis.sort();
    Ok(GradedPiece {
        index: w.clone(),
        basis,
    })
}

pub fn fiber_default(delta: &[i64], w: &GradedIndex) -> Result<GradedPiece, GradingError> {
    fiber(delta, w, DEFAULT_FIBER_BOUND)
}

/// Whether some nonnegative lattice point projects to `w`.
pub fn in_monoid(delta: &[i64], w: &GradedIndex) -> Result<bool, GradingError> {
    Ok(!fiber_default(delta, w)?.is_empty())
}

/// Splits a graded polynomial into its components per index: each term is
/// assigned the index of its exponent's projection. Recombining the values
/// reproduces the input.
pub fn decompose(f: &Series, delta: &[i64]) -> Result<BTreeMap<GradedIndex, Series>, GradingError> {
    let mut out: BTreeMap<GradedIndex, Series> = BTreeMap::new();
    for (exp, coeff) in f.terms() {
        let w = graded_index_of(exp, delta)?;
        out.entry(w)
            .or_insert_with(|| Series::zero(f.n_vars(), f.field()))
            .add_term(exp.clone(), coeff.clone())
            .expect("terms come from a consistent series");
    }
    Ok(out)
}

/// The index shared by all terms of a graded (single-component) polynomial;
/// `None` for zero or mixed input.
pub fn homogeneous_index(f: &Series, delta: &[i64]) -> Result<Option<GradedIndex>, GradingError> {
    let mut it = f.terms();
    let first = match it.next() {
        None => return Ok(None),
        Some((e, _)) => graded_index_of(e, delta)?,
    };
    for (e, _) in it {
        if graded_index_of(e, delta)? != first {
            return Ok(None);
        }
    }
    Ok(Some(first))
}

/// Whether the fiber basis contains two monomials with no common variable.
pub fn has_coprime_pair(piece: &GradedPiece) -> bool {
    for (i, a) in piece.basis.iter().enumerate() {
        for b in piece.basis.iter().skip(i + 1) {
            if a.min_with(b).is_zero() {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FieldElement, FieldSpec};

    fn ev(entries: &[u64]) -> ExponentVector {
        ExponentVector(entries.to_vec())
    }

    fn idx_halves(numer_doubled: &[i64]) -> GradedIndex {
        GradedIndex(
            numer_doubled
                .iter()
                .map(|&n| BigRational::new(n.into(), 2.into()))
                .collect(),
        )
    }

    #[test]
    fn fiber_dimensions_from_the_projection_picture() {
        let delta = [3i64, -2];
        let f10 = fiber_default(&delta, &GradedIndex::from_ints(&[10])).unwrap();
        assert_eq!(
            f10.basis,
            vec![ev(&[1, 6]), ev(&[4, 4]), ev(&[7, 2]), ev(&[10, 0])]
        );
        assert_eq!(f10.dim(), 4);

        let f35 = fiber_default(&delta, &idx_halves(&[7])).unwrap();
        assert_eq!(f35.basis, vec![ev(&[2, 1])]);

        let f65 = fiber_default(&delta, &idx_halves(&[13])).unwrap();
        assert_eq!(f65.basis, vec![ev(&[2, 3]), ev(&[5, 1])]);

        let f0 = fiber_default(&delta, &GradedIndex::from_ints(&[0])).unwrap();
        assert_eq!(f0.basis, vec![ev(&[0, 0])]);
    }

    #[test]
    fn monoid_membership() {
        let delta = [3i64, -2];
        assert!(in_monoid(&delta, &idx_halves(&[7])).unwrap());
        // 2v₁ + 3v₂ = 2/3 has no solutions in nonnegative integers
        let third = GradedIndex(vec![BigRational::new(1.into(), 3.into())]);
        assert!(!in_monoid(&delta, &third).unwrap());
        for w in 0..6 {
            assert!(in_monoid(&[1, -1], &GradedIndex::from_ints(&[w])).unwrap());
        }
    }

    #[test]
    fn decompose_examples() {
        let q = FieldSpec::Rationals;
        // X² − Y² along (2,−2): one component at 2
        let f = Series::from_terms(
            2,
            q,
            [
                (ev(&[2, 0]), FieldElement::from_integer(q, 1)),
                (ev(&[0, 2]), FieldElement::from_integer(q, -1)),
            ],
        )
        .unwrap();
        let parts = decompose(&f, &[2, -2]).unwrap();
        assert_eq!(parts.len(), 1);
        assert!(parts.contains_key(&GradedIndex::from_ints(&[2])));

        // XY + Y³ along (1,−2): one component at 3/2
        let g = Series::from_terms(
            2,
            q,
            [
                (ev(&[1, 1]), FieldElement::from_integer(q, 1)),
                (ev(&[0, 3]), FieldElement::from_integer(q, 1)),
            ],
        )
        .unwrap();
        let parts = decompose(&g, &[1, -2]).unwrap();
        assert_eq!(parts.len(), 1);
        assert!(parts.contains_key(&idx_halves(&[3])));
        assert_eq!(
            homogeneous_index(&g, &[1, -2]).unwrap(),
            Some(idx_halves(&[3]))
        );

        // X + Y² along (3,−2): components at 1 and 3
        let h = Series::from_terms(
            2,
            q,
            [
                (ev(&[1, 0]), FieldElement::from_integer(q, 1)),
                (ev(&[0, 2]), FieldElement::from_integer(q, 1)),
            ],
        )
        .unwrap();
        let parts = decompose(&h, &[3, -2]).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.contains_key(&GradedIndex::from_ints(&[1])));
        assert!(parts.contains_key(&GradedIndex::from_ints(&[3])));
        assert_eq!(homogeneous_index(&h, &[3, -2]).unwrap(), None);

        // recombination reproduces the input
        let mut sum = Series::zero(2, q);
        for part in parts.values() {
            sum = sum.add(part).unwrap();
        }
        assert_eq!(sum, h);
    }

    #[test]
    fn dimension_identity_with_coprime_monomials() {
        // when a fiber contains two coprime monomials the dimensions add
        // with defect one
        let delta = [1i64, -1];
        let u = GradedIndex::from_ints(&[2]);
        let fu = fiber_default(&delta, &u).unwrap();
        assert!(has_coprime_pair(&fu));
        for w in 0..8i64 {
            let w = GradedIndex::from_ints(&[w]);
            let fw = fiber_default(&delta, &w).unwrap();
            if fw.is_empty() {
                continue;
            }
            let fuw = fiber_default(&delta, &u.add(&w)).unwrap();
            assert_eq!(fuw.dim(), fu.dim() + fw.dim() - 1);
        }
    }

    #[test]
    fn dimension_identity_fails_without_coprime_pair() {
        // indices 3.5, 6.5, 10 with dims 1, 2, 4: 1 + 2 − 1 ≠ 4, and the
        // middle fiber has no coprime pair
        let delta = [3i64, -2];
        let f35 = fiber_default(&delta, &idx_halves(&[7])).unwrap();
        let f65 = fiber_default(&delta, &idx_halves(&[13])).unwrap();
        let f10 = fiber_default(&delta, &GradedIndex::from_ints(&[10])).unwrap();
        assert_eq!((f35.dim(), f65.dim(), f10.dim()), (1, 2, 4));
        assert_ne!(f35.dim() + f65.dim() - 1, f10.dim());
        assert!(!has_coprime_pair(&f65));
    }

    #[test]
    fn fibers_respect_addition() {
        let delta = [3i64, -2];
        let u = idx_halves(&[7]);
        let w = GradedIndex::from_ints(&[10]);
        let fu = fiber_default(&delta, &u).unwrap();
        let fw = fiber_default(&delta, &w).unwrap();
        let fuw = fiber_default(&delta, &u.add(&w)).unwrap();
        for a in &fu.basis {
            for b in &fw.basis {
                assert!(fuw.basis.contains(&a.add(b)));
            }
        }
    }

    #[test]
    fn empty_fiber_for_unreachable_index() {
        let delta = [3i64, -2];
        let w = GradedIndex(vec![BigRational::new(1.into(), 3.into())]);
        let f = fiber_default(&delta, &w).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn bound_is_enforced() {
        let delta = [1i64, -1];
        let w = GradedIndex::from_ints(&[100]);
        assert!(matches!(
            fiber(&delta, &w, 10),
            Err(GradingError::BoundExceeded(10))
        ));
    }
}
