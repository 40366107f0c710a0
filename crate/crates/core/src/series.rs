//! Sparse multivariate polynomials / truncated power series with monomial
//! valuations and initial forms.
//!
//! A [`Series`] stores finitely many terms keyed by exponent vector. The same
//! type models elements of the ambient power-series ring, graded polynomials,
//! and the truncated factors produced by lifting; a truncation marker
//! records up to which valuation the terms are authoritative.

use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{FieldElement, FieldSpec};
use thiserror::Error;

/// Exponent vector of a monomial, one nonnegative entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<u64>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise minimum.
    pub fn min_with(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// Signed difference `self - other`.
    pub fn sub_signed(&self, other: &Self) -> Vec<i64> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| *a as i64 - *b as i64)
            .collect()
    }

    /// Translate by a signed vector; `None` if any entry leaves ℤ≥0.
    pub fn offset(&self, step: &[i64]) -> Option<Self> {
        debug_assert_eq!(self.len(), step.len());
        let mut out = Vec::with_capacity(self.len());
        for (a, s) in self.0.iter().zip(step) {
            let v = *a as i64 + s;
            if v < 0 {
                return None;
            }
            out.push(v as u64);
        }
        Some(ExponentVector(out))
    }

    pub fn permute(&self, perm: &[usize]) -> Self {
        ExponentVector(perm.iter().map(|&i| self.0[i]).collect())
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A linear form with nonnegative rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    lambda: Vec<BigRational>,
}

impl LinearForm {
    pub fn new(lambda: Vec<BigRational>) -> Result<Self, SeriesError> {
        if lambda.iter().any(|l| l < &BigRational::zero()) {
            return Err(SeriesError::NegativeFormCoefficient);
        }
        Ok(LinearForm { lambda })
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self, SeriesError> {
        LinearForm::new(
            entries
                .iter()
                .map(|&e| BigRational::from_integer(e.into()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.lambda
    }

    /// All coefficients strictly positive.
    pub fn is_positive(&self) -> bool {
        self.lambda.iter().all(|l| l > &BigRational::zero())
    }

    pub fn apply(&self, v: &ExponentVector) -> BigRational {
        debug_assert_eq!(self.lambda.len(), v.len());
        self.lambda
            .iter()
            .zip(&v.0)
            .map(|(l, &e)| l * BigRational::from_integer(e.into()))
            .sum()
    }

    pub fn apply_signed(&self, v: &[i64]) -> BigRational {
        debug_assert_eq!(self.lambda.len(), v.len());
        self.lambda
            .iter()
            .zip(v)
            .map(|(l, &e)| l * BigRational::from_integer(e.into()))
            .sum()
    }

    pub fn permute(&self, perm: &[usize]) -> Self {
        LinearForm {
            lambda: perm.iter().map(|&i| self.lambda[i].clone()).collect(),
        }
    }
}

/// A valuation value: a rational, or +∞ for the zero series. The infinite
/// value compares greater than every rational, which lets residual-zero
/// termination fall out of ordinary comparisons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(BigRational),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn plus(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialEq<BigRational> for Valuation {
    fn eq(&self, other: &BigRational) -> bool {
        self.finite().map_or(false, |v| v == other)
    }
}

impl PartialOrd<BigRational> for Valuation {
    fn partial_cmp(&self, other: &BigRational) -> Option<std::cmp::Ordering> {
        Some(match self {
            Valuation::Infinite => std::cmp::Ordering::Greater,
            Valuation::Finite(v) => v.cmp(other),
        })
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Truncation marker: terms with L-value above the cutoff are unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub form: LinearForm,
    pub cutoff: BigRational,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("ambient data mismatch: {0}")]
    AmbientMismatch(String),
    #[error("linear form must have nonnegative coefficients")]
    NegativeFormCoefficient,
    #[error("operation requires a positive linear form")]
    FormNotPositive,
    #[error("operation undefined on the zero series")]
    ZeroSeries,
    #[error("exponent vector has wrong length: expected {expected}, got {got}")]
    WrongArity { expected: usize, got: usize },
}

/// Sparse multivariate polynomial / truncated power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    n: usize,
    field: FieldSpec,
    terms: BTreeMap<ExponentVector, FieldElement>,
    truncation: Option<Truncation>,
}

impl Series {
    pub fn zero(n: usize, field: FieldSpec) -> Self {
        Series {
            n,
            field,
            terms: BTreeMap::new(),
            truncation: None,
        }
    }

    pub fn one(n: usize, field: FieldSpec) -> Self {
        Series::monomial(ExponentVector::zero(n), FieldElement::one(field))
    }

    pub fn monomial(exp: ExponentVector, coeff: FieldElement) -> Self {
        let n = exp.len();
        let field = coeff.spec();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Series {
            n,
            field,
            terms,
            truncation: None,
        }
    }

    pub fn from_terms(
        n: usize,
        field: FieldSpec,
        entries: impl IntoIterator<Item = (ExponentVector, FieldElement)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Series::zero(n, field);
        for (exp, coeff) in entries {
            s.add_term(exp, coeff)?;
        }
        Ok(s)
    }

    /// Adds `coeff·x^exp`, merging with any existing term and pruning zeros.
    pub fn add_term(&mut self, exp: ExponentVector, coeff: FieldElement) -> Result<(), SeriesError> {
        if exp.len() != self.n {
            return Err(SeriesError::WrongArity {
                expected: self.n,
                got: exp.len(),
            });
        }
        if coeff.spec() != self.field {
            return Err(SeriesError::AmbientMismatch(format!(
                "coefficient field {} vs series field {}",
                coeff.spec(),
                self.field
            )));
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&exp) {
            None => {
                self.terms.insert(exp, coeff);
            }
            Some(old) => {
                let merged = old.add(&coeff).expect("same field");
                if !merged.is_zero() {
                    self.terms.insert(exp, merged);
                }
            }
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &ExponentVector) -> FieldElement {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(self.field))
    }

    pub fn truncation(&self) -> Option<&Truncation> {
        self.truncation.as_ref()
    }

    pub fn set_truncation(&mut self, t: Option<Truncation>) {
        self.truncation = t;
    }

    /// The set of exponents with nonzero coefficient.
    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.n != other.n {
            return Err(SeriesError::AmbientMismatch(format!(
                "variable counts {} vs {}",
                self.n, other.n
            )));
        }
        if self.field != other.field {
            return Err(SeriesError::AmbientMismatch(format!(
                "fields {} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    /// Monomial valuation: the minimum of L over the support, +∞ for zero.
    pub fn valuation(&self, l: &LinearForm) -> Result<Valuation, SeriesError> {
        if l.len() != self.n {
            return Err(SeriesError::WrongArity {
                expected: self.n,
                got: l.len(),
            });
        }
        if !l.is_positive() {
            return Err(SeriesError::FormNotPositive);
        }
        Ok(self
            .terms
            .keys()
            .map(|e| l.apply(e))
            .min()
            .map_or(Valuation::Infinite, Valuation::Finite))
    }

    /// The initial form: the sub-series of terms attaining the valuation.
    pub fn initial_form(&self, l: &LinearForm) -> Result<Series, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::ZeroSeries);
        }
        let nu = match self.valuation(l)? {
            Valuation::Finite(v) => v,
            Valuation::Infinite => unreachable!("nonzero series has finite valuation"),
        };
        let mut out = Series::zero(self.n, self.field);
        for (e, c) in &self.terms {
            if l.apply(e) == nu {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Series {
        Series {
            n: self.n,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
            truncation: self.truncation.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Series, SeriesError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone())?;
        }
        out.truncation = merge_truncations(&self.truncation, &other.truncation);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Series, SeriesError> {
        self.add(&other.neg())
    }

    /// Exact product; truncation of the result is the weaker of the inputs'
    /// guarantees, each pushed up by the other factor's valuation.
    pub fn mul(&self, other: &Self) -> Result<Series, SeriesError> {
        self.check_compatible(other)?;
        let mut out = Series::zero(self.n, self.field);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1.mul(c2).expect("same field"))?;
            }
        }
        out.truncation = product_truncation(self, other, None)?;
        Ok(out)
    }

    /// Product with all terms of L-value above the cutoff discarded.
    pub fn mul_truncated(
        &self,
        other: &Self,
        l: &LinearForm,
        cutoff: &BigRational,
    ) -> Result<Series, SeriesError> {
        self.check_compatible(other)?;
        if l.len() != self.n {
            return Err(SeriesError::WrongArity {
                expected: self.n,
                got: l.len(),
            });
        }
        let mut out = Series::zero(self.n, self.field);
        for (e1, c1) in &self.terms {
            let v1 = l.apply(e1);
            for (e2, c2) in &other.terms {
                if &(&v1 + l.apply(e2)) > cutoff {
                    continue;
                }
                out.add_term(e1.add(e2), c1.mul(c2).expect("same field"))?;
            }
        }
        out.truncation = product_truncation(
            self,
            other,
            Some(Truncation {
                form: l.clone(),
                cutoff: cutoff.clone(),
            }),
        )?;
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Series {
        if c.is_zero() {
            return Series::zero(self.n, self.field);
        }
        Series {
            n: self.n,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x.mul(c).expect("same field")))
                .collect(),
            truncation: self.truncation.clone(),
        }
    }

    /// Reorders variables: entry i of each new exponent vector is entry
    /// perm[i] of the old one.
    pub fn permute_vars(&self, perm: &[usize]) -> Series {
        debug_assert_eq!(perm.len(), self.n);
        Series {
            n: self.n,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.permute(perm), c.clone()))
                .collect(),
            truncation: self.truncation.as_ref().map(|t| Truncation {
                form: t.form.permute(perm),
                cutoff: t.cutoff.clone(),
            }),
        }
    }

    /// Drops terms with L-value above the cutoff and records the truncation.
    pub fn truncate(&self, l: &LinearForm, cutoff: &BigRational) -> Series {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| &l.apply(e) <= cutoff)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Series {
            n: self.n,
            field: self.field,
            terms,
            truncation: merge_truncations(
                &self.truncation,
                &Some(Truncation {
                    form: l.clone(),
                    cutoff: cutoff.clone(),
                }),
            ),
        }
    }
}

/// The finer (smaller-cutoff) truncation wins; absent markers mean exact.
fn merge_truncations(a: &Option<Truncation>, b: &Option<Truncation>) -> Option<Truncation> {
    match (a, b) {
        (None, None) => None,
        (Some(t), None) | (None, Some(t)) => Some(t.clone()),
        (Some(s), Some(t)) => Some(if s.cutoff <= t.cutoff {
            s.clone()
        } else {
            t.clone()
        }),
    }
}

/// Truncation of a product: each factor's guarantee improves by the other
/// factor's valuation; an explicitly requested cutoff caps the result.
fn product_truncation(
    f: &Series,
    g: &Series,
    requested: Option<Truncation>,
) -> Result<Option<Truncation>, SeriesError> {
    let mut best = requested;
    for (a, b) in [(f, g), (g, f)] {
        if let Some(t) = &a.truncation {
            let shifted = match b.valuation(&t.form) {
                Ok(Valuation::Finite(v)) => Some(Truncation {
                    form: t.form.clone(),
                    cutoff: &t.cutoff + v,
                }),
                Ok(Valuation::Infinite) => None, // product is exactly zero
                Err(_) => Some(t.clone()),       // incomparable form; keep the raw guarantee
            };
            best = merge_truncations(&best, &shifted);
        }
    }
    Ok(best)
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{c}*x^{e}")?;
        }
        Ok(())
    }
}
