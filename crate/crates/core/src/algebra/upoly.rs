//! Univariate polynomials over an exact field.
//!
//! Coefficients are stored by ascending degree with a nonzero leading
//! coefficient (the zero polynomial has an empty coefficient list).

use std::fmt;

use super::field::{FieldElement, FieldSpec};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl UPoly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<FieldElement>) -> Result<Self, AlgebraError> {
        for c in &coeffs {
            if c.spec() != field {
                return Err(AlgebraError::MismatchedFields(field, c.spec()));
            }
        }
        while coeffs.last().map_or(false, FieldElement::is_zero) {
            coeffs.pop();
        }
        Ok(UPoly { field, coeffs })
    }

    pub fn zero(field: FieldSpec) -> Self {
        UPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        UPoly {
            field,
            coeffs: vec![FieldElement::one(field)],
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.spec();
        if c.is_zero() {
            UPoly::zero(field)
        } else {
            UPoly {
                field,
                coeffs: vec![c],
            }
        }
    }

    /// The monomial c·T^k.
    pub fn monomial(c: FieldElement, k: usize) -> Self {
        let field = c.spec();
        if c.is_zero() {
            return UPoly::zero(field);
        }
        let mut coeffs = vec![FieldElement::zero(field); k + 1];
        coeffs[k] = c;
        UPoly { field, coeffs }
    }

    /// Convenience constructor from small integers, lowest degree first.
    pub fn from_ints(field: FieldSpec, ints: &[i64]) -> Self {
        let coeffs = ints
            .iter()
            .map(|&n| FieldElement::from_integer(field, n))
            .collect();
        UPoly::new(field, coeffs).expect("coefficients built in the target field")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(self.field))
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.sub(b))
    }

    fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(&FieldElement, &FieldElement) -> Result<FieldElement, AlgebraError>,
    ) -> Self {
        assert_eq!(self.field, other.field, "operands from different fields");
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(op(&self.coeff(k), &other.coeff(k)).expect("same field"));
        }
        UPoly::new(self.field, coeffs).expect("same field")
    }

    pub fn neg(&self) -> Self {
        UPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(FieldElement::neg).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "operands from different fields");
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(self.field);
        }
        let zero = FieldElement::zero(self.field);
        let mut coeffs = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = a.mul(b).expect("same field");
                coeffs[i + j] = coeffs[i + j].add(&t).expect("same field");
            }
        }
        UPoly::new(self.field, coeffs).expect("same field")
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return UPoly::zero(self.field);
        }
        UPoly {
            field: self.field,
            coeffs: self
                .coeffs
                .iter()
                .map(|a| a.mul(c).expect("same field"))
                .collect(),
        }
    }

    /// Euclidean division: returns (quotient, remainder) with
    /// deg r < deg divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), AlgebraError> {
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let d = divisor.degree().unwrap();
        let lc_inv = divisor.leading_coeff().unwrap().inv()?;
        let mut rem = self.clone();
        let mut quot_coeffs =
            vec![FieldElement::zero(self.field); self.coeffs.len().saturating_sub(d)];
        while let Some(rd) = rem.degree() {
            if rd < d {
                break;
            }
            let factor = rem.leading_coeff().unwrap().mul(&lc_inv)?;
            let shift = rd - d;
            quot_coeffs[shift] = factor.clone();
            let sub = divisor.mul(&UPoly::monomial(factor, shift));
            rem = rem.sub(&sub);
        }
        Ok((UPoly::new(self.field, quot_coeffs)?, rem))
    }

    /// Exact division; errors when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(AlgebraError::InexactDivision);
        }
        Ok(q)
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UPoly::zero(self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| {
                let k = FieldElement::from_integer(self.field, k as i64);
                c.mul(&k).expect("same field")
            })
            .collect();
        UPoly::new(self.field, coeffs).expect("same field")
    }

    pub fn evaluate(&self, x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).and_then(|t| t.add(c)).expect("same field");
        }
        acc
    }

    /// T^k substitution inverse: given f with support only on exponents
    /// divisible by k, returns g with g(T^k) = f.
    pub fn deflate(&self, k: usize) -> Option<Self> {
        assert!(k >= 1);
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % k == 0 {
                coeffs.push(c.clone());
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(UPoly::new(self.field, coeffs).expect("same field"))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = UPoly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Modular exponentiation: self^e mod m.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Result<Self, AlgebraError> {
        let mut base = self.div_rem(m)?.1;
        let mut acc = UPoly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).div_rem(m)?.1;
            }
            base = base.mul(&base).div_rem(m)?.1;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Ascending-degree coefficient comparison, used for deterministic
    /// factor ordering.
    pub fn cmp_coeff_seq(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

/// Monic greatest common divisor. The inputs may not both be zero.
pub fn upoly_gcd(p: &UPoly, q: &UPoly) -> Result<UPoly, AlgebraError> {
    if p.is_zero() && q.is_zero() {
        return Err(AlgebraError::GcdOfZeroPair);
    }
    let mut a = p.clone();
    let mut b = q.clone();
    while !b.is_zero() {
        let r = a.div_rem(&b)?.1;
        a = b;
        b = r;
    }
    Ok(a.monic())
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "T")?,
                1 => write!(f, "{c}*T")?,
                _ if c.is_one() => write!(f, "T^{k}")?,
                _ => write!(f, "{c}*T^{k}")?,
            }
        }
        Ok(())
    }
}
