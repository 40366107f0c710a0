//! The bridge between an edge initial form and a univariate polynomial:
//! the initial form along a compact edge is a monomial times a polynomial
//! in one step variable along the primitive direction. Splitting that
//! polynomial into coprime factors produces the two graded polynomials the
//! lifting loop starts from.

use crate::algebra::{upoly_factor, upoly_gcd, UPoly};
use crate::polyhedron::EdgeFrame;
use crate::series::{ExponentVector, Series};

use super::LiftError;

/// The segment structure of an edge initial form:
/// `in(f) = X^base · Σ_j p_j · X^(j·d⁺ + (k−j)·d⁻)`, with the j = 0 end at
/// the edge's alpha (the end with the larger last coordinate after the
/// recorded permutation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePolynomial {
    pub base: ExponentVector,
    /// Positive part of the primitive direction.
    pub d_plus: ExponentVector,
    /// Negated negative part of the primitive direction; disjoint support
    /// from `d_plus`.
    pub d_minus: ExponentVector,
    /// Lattice length of the edge.
    pub lattice_length: u64,
    /// Segment polynomial of degree exactly `lattice_length` with nonzero
    /// constant term.
    pub poly: UPoly,
}

/// A coprime split of the segment polynomial; the product reproduces it
/// exactly after normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub p1: UPoly,
    pub p2: UPoly,
    pub origin: SplitOrigin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitOrigin {
    Auto,
    User,
}

impl Split {
    pub fn user(p1: UPoly, p2: UPoly) -> Self {
        Split {
            p1,
            p2,
            origin: SplitOrigin::User,
        }
    }
}

/// Normalization mode for a split: plain lifting keeps the first factor as
/// given; the monic variant forces its constant term to one so that the
/// first multivariate factor is monic in the last variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitMode {
    Plain,
    MonicFirst,
}

/// Reads the segment polynomial of `f` along the edge: coefficient j is
/// the coefficient of `f` at `alpha + j·direction`.
pub fn edge_to_univariate(f: &Series, e: &EdgeFrame) -> Result<EdgePolynomial, LiftError> {
    let n = f.n_vars();
    if e.alpha.len() != n {
        return Err(LiftError::InvalidEdge("dimension mismatch".into()));
    }
    let k = e.lattice_length;
    let mut coeffs = Vec::with_capacity(k as usize + 1);
    let mut cursor = Some(e.alpha.clone());
    for j in 0..=k {
        let at = cursor
            .as_ref()
            .ok_or_else(|| LiftError::InvalidEdge("direction leaves the orthant".into()))?;
        coeffs.push(f.coeff(at));
        if j < k {
            cursor = at.offset(&e.direction);
        }
    }
    let poly = UPoly::new(f.field(), coeffs)?;
    if poly.coeff(0).is_zero() || poly.degree() != Some(k as usize) {
        return Err(LiftError::InvalidEdge(
            "edge ends must carry nonzero coefficients".into(),
        ));
    }
    let (d_plus, d_minus) = split_direction(&e.direction);
    Ok(EdgePolynomial {
        base: e.alpha.min_with(&e.beta),
        d_plus,
        d_minus,
        lattice_length: k,
        poly,
    })
}

fn split_direction(direction: &[i64]) -> (ExponentVector, ExponentVector) {
    let plus = ExponentVector(
        direction
            .iter()
            .map(|&d| if d > 0 { d as u64 } else { 0 })
            .collect(),
    );
    let minus = ExponentVector(
        direction
            .iter()
            .map(|&d| if d < 0 { (-d) as u64 } else { 0 })
            .collect(),
    );
    (plus, minus)
}

fn scaled(v: &ExponentVector, s: u64) -> ExponentVector {
    ExponentVector(v.0.iter().map(|&e| e * s).collect())
}

/// Validates a split against the segment polynomial and normalizes it:
/// the product may differ from the segment polynomial by a nonzero
/// constant, which is pushed into the second factor; in monic mode the
/// first factor's constant term is additionally scaled to one.
pub fn normalize_split(
    ep: &EdgePolynomial,
    split: &Split,
    mode: SplitMode,
) -> Result<Split, LiftError> {
    let mut p1 = split.p1.clone();
    let mut p2 = split.p2.clone();
    if p1.degree().map_or(true, |d| d < 1) {
        return Err(LiftError::InvalidSplit(
            "first factor must have degree at least one".into(),
        ));
    }
    let prod = p1.mul(&p2);
    if prod.degree() != ep.poly.degree() {
        return Err(LiftError::InvalidSplit(format!(
            "product degree {:?} does not match segment degree {:?}",
            prod.degree(),
            ep.poly.degree()
        )));
    }
    // constant adjustment: segment = c · p1 · p2
    let c = ep
        .poly
        .leading_coeff()
        .expect("segment polynomial is nonzero")
        .div(prod.leading_coeff().expect("nonzero product"))?;
    p2 = p2.scale(&c);
    if p1.mul(&p2) != ep.poly {
        return Err(LiftError::InvalidSplit(
            "product does not reproduce the segment polynomial up to a constant".into(),
        ));
    }
    if !upoly_gcd(&p1, &p2)?.is_one() {
        return Err(LiftError::InvalidSplit("factors are not coprime".into()));
    }
    if mode == SplitMode::MonicFirst {
        let c0 = p1.coeff(0);
        debug_assert!(!c0.is_zero(), "segment polynomial has nonzero constant term");
        p1 = p1.scale(&c0.inv()?);
        p2 = p2.scale(&c0);
    }
    Ok(Split {
        p1,
        p2,
        origin: split.origin,
    })
}

/// Expands a split back to multivariate graded polynomials:
/// G from the first factor alone (so no variable divides it), H from the
/// second factor together with the base monomial. Their product is the
/// edge initial form.
pub fn univariate_to_edge(ep: &EdgePolynomial, split: &Split) -> (Series, Series) {
    let g = expand_on_segment(&split.p1, &ExponentVector::zero(ep.base.len()), ep);
    let h = expand_on_segment(&split.p2, &ep.base, ep);
    (g, h)
}

fn expand_on_segment(p: &UPoly, base: &ExponentVector, ep: &EdgePolynomial) -> Series {
    let m = p.degree().expect("factors of a nonzero polynomial") as u64;
    let mut out = Series::zero(base.len(), p.field());
    for (j, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let exp = base
            .add(&scaled(&ep.d_plus, j as u64))
            .add(&scaled(&ep.d_minus, m - j as u64));
        out.add_term(exp, c.clone()).expect("consistent ambient");
    }
    out
}

/// The edge initial form reconstructed from the segment data.
pub fn edge_initial_form(ep: &EdgePolynomial) -> Series {
    expand_on_segment(&ep.poly, &ep.base, ep)
}

/// Automatic coprime split: factor the segment polynomial and peel off the
/// power of the smallest irreducible factor (smallest degree, then
/// lexicographic coefficient sequence). `None` when the polynomial is a
/// unit times a single irreducible power, which admits no such split.
pub fn default_split(ep: &EdgePolynomial, mode: SplitMode) -> Result<Option<Split>, LiftError> {
    let fact = upoly_factor(&ep.poly)?;
    if fact.maybe_reducible {
        return Err(LiftError::IncompleteFactorization);
    }
    if fact.factors.len() < 2 {
        return Ok(None);
    }
    let (q, m) = &fact.factors[0];
    let p1 = q.pow(*m);
    let mut p2 = UPoly::constant(fact.unit.clone());
    for (other, e) in &fact.factors[1..] {
        p2 = p2.mul(&other.pow(*e));
    }
    let split = Split {
        p1,
        p2,
        origin: SplitOrigin::Auto,
    };
    normalize_split(ep, &split, mode).map(Some)
}

/// A trivial split peeling the base monomial only: the first factor is the
/// whole segment polynomial, the second the constant one, so the second
/// multivariate factor is the base monomial itself.
pub fn monomial_split(ep: &EdgePolynomial) -> Split {
    Split {
        p1: ep.poly.clone(),
        p2: UPoly::one(ep.poly.field()),
        origin: SplitOrigin::Auto,
    }
}

/// Convenience check used by reports: is the edge initial form a unit
/// times a single irreducible power (no monomial factor, one irreducible)?
pub fn segment_is_irreducible_power(ep: &EdgePolynomial) -> Result<bool, LiftError> {
    let fact = upoly_factor(&ep.poly)?;
    if fact.maybe_reducible {
        return Err(LiftError::IncompleteFactorization);
    }
    Ok(fact.factors.len() == 1)
}

impl std::fmt::Display for EdgePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "x^{} * ({}) along +{} -{}",
            self.base, self.poly, self.d_plus, self.d_minus
        )
    }
}
