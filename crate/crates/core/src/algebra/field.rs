//! Exact coefficient fields: the rationals and prime fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

use super::AlgebraError;

/// Identifies the coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// The field of rational numbers with arbitrary-precision integers.
    Rationals,
    /// The prime field with `p` elements, `p` prime.
    PrimeField(u64),
}

impl FieldSpec {
    /// Validates the spec: for a prime field the modulus must be prime
    /// (and small enough for trial division to be cheap).
    pub fn validate(&self) -> Result<(), AlgebraError> {
        match *self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::PrimeField(p) => {
                if p < 2 || p > (1 << 31) {
                    return Err(AlgebraError::InvalidModulus(p));
                }
                if !is_prime_u64(p) {
                    return Err(AlgebraError::InvalidModulus(p));
                }
                Ok(())
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of a [`FieldSpec`] field, stored in canonical form: reduced
/// fraction with positive denominator over the rationals, least nonnegative
/// residue over a prime field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { val: u64, p: u64 },
}

/// The four basic arithmetic operations, for the dispatching entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn zero(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::zero()),
            FieldSpec::PrimeField(p) => FieldElement::Prime { val: 0, p },
        }
    }

    pub fn one(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::one()),
            FieldSpec::PrimeField(p) => FieldElement::Prime { val: 1 % p, p },
        }
    }

    pub fn from_integer(spec: FieldSpec, n: i64) -> Self {
        match spec {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::from_integer(n.into())),
            FieldSpec::PrimeField(p) => FieldElement::Prime {
                // validated moduli fit in i64
                val: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn from_bigint(spec: FieldSpec, n: &BigInt) -> Self {
        match spec {
            FieldSpec::Rationals => {
                FieldElement::Rational(BigRational::from_integer(n.clone()))
            }
            FieldSpec::PrimeField(p) => {
                let m = n.mod_floor_u64(p);
                FieldElement::Prime { val: m, p }
            }
        }
    }

    /// Builds the rational a/b. Fails when b = 0; over a prime field this is
    /// a·b⁻¹ and fails when p | b.
    pub fn from_ratio(spec: FieldSpec, num: &BigInt, den: &BigInt) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        match spec {
            FieldSpec::Rationals => Ok(FieldElement::Rational(BigRational::new(
                num.clone(),
                den.clone(),
            ))),
            FieldSpec::PrimeField(_) => {
                let a = Self::from_bigint(spec, num);
                let b = Self::from_bigint(spec, den);
                a.div(&b)
            }
        }
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Rational(_) => FieldSpec::Rationals,
            FieldElement::Prime { p, .. } => FieldSpec::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Prime { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Prime { val, p } => *val == 1 % p,
        }
    }

    /// Re-canonicalizes in place; a no-op for elements already canonical.
    /// Kept as the anchor for the canonical-form idempotence property.
    pub fn canonicalize(self) -> Self {
        match self {
            FieldElement::Rational(r) => {
                let (n, d) = r.into();
                FieldElement::Rational(BigRational::new(n, d))
            }
            FieldElement::Prime { val, p } => FieldElement::Prime { val: val % p, p },
        }
    }

    fn check_same_field(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.spec() != other.spec() {
            Err(AlgebraError::MismatchedFields(self.spec(), other.spec()))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                FieldElement::Rational(a + b)
            }
            (FieldElement::Prime { val: a, p }, FieldElement::Prime { val: b, .. }) => {
                FieldElement::Prime {
                    val: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                FieldElement::Rational(a - b)
            }
            (FieldElement::Prime { val: a, p }, FieldElement::Prime { val: b, .. }) => {
                FieldElement::Prime {
                    val: ((*a as u128 + (*p - *b) as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                FieldElement::Rational(a * b)
            }
            (FieldElement::Prime { val: a, p }, FieldElement::Prime { val: b, .. }) => {
                FieldElement::Prime {
                    val: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_field(other)?;
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        self.mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Prime { val, p } => FieldElement::Prime {
                val: mod_inverse(*val, *p),
                p: *p,
            },
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Prime { val, p } => FieldElement::Prime {
                val: if *val == 0 { 0 } else { p - val },
                p: *p,
            },
        }
    }

    /// Dispatching entry point over the four basic operations.
    pub fn arith(a: &Self, b: &Self, op: FieldOp) -> Result<Self, AlgebraError> {
        match op {
            FieldOp::Add => a.add(b),
            FieldOp::Sub => a.sub(b),
            FieldOp::Mul => a.mul(b),
            FieldOp::Div => a.div(b),
        }
    }

    /// The rational value, if this element lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Prime { val, .. } => write!(f, "{val}"),
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime and a != 0
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "modulus must be prime and a nonzero");
    s0.rem_euclid(p as i128) as u64
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u64_digits();
        if digits.is_empty() {
            0
        } else {
            digits[0]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldElement::Rational(BigRational::new(n.into(), d.into()))
    }

    fn fp(v: i64, p: u64) -> FieldElement {
        FieldElement::from_integer(FieldSpec::PrimeField(p), v)
    }

    #[test]
    fn rational_addition() {
        let sum = q(1, 2).add(&q(1, 3)).unwrap();
        assert_eq!(sum, q(5, 6));
    }

    #[test]
    fn prime_field_multiplication() {
        let prod = fp(3, 5).mul(&fp(4, 5)).unwrap();
        assert_eq!(prod, fp(2, 5));
    }

    #[test]
    fn fractions_stay_reduced() {
        let half = q(2, 4);
        assert_eq!(half, q(1, 2));
        assert_eq!(half.clone().canonicalize(), half);
    }

    #[test]
    fn canonicalize_is_idempotent() {
        for e in [q(-6, 4), q(0, 7), fp(13, 5), fp(-1, 7)] {
            let once = e.clone().canonicalize();
            assert_eq!(once.clone().canonicalize(), once);
            assert_eq!(once, e);
        }
    }

    #[test]
    fn division_by_zero_is_rejected() {
        assert!(matches!(
            q(1, 2).div(&q(0, 1)),
            Err(AlgebraError::DivisionByZero)
        ));
        assert!(matches!(fp(3, 5).inv(), Ok(_)));
        assert!(matches!(
            fp(0, 5).inv(),
            Err(AlgebraError::DivisionByZero)
        ));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        assert!(matches!(
            q(1, 2).add(&fp(1, 5)),
            Err(AlgebraError::MismatchedFields(..))
        ));
        assert!(matches!(
            fp(1, 5).add(&fp(1, 7)),
            Err(AlgebraError::MismatchedFields(..))
        ));
    }

    #[test]
    fn prime_field_inverses() {
        for p in [2u64, 3, 5, 7, 11] {
            for a in 1..p {
                let e = fp(a as i64, p);
                assert!(e.mul(&e.inv().unwrap()).unwrap().is_one());
            }
        }
    }

    #[test]
    fn modulus_validation() {
        assert!(FieldSpec::PrimeField(5).validate().is_ok());
        assert!(FieldSpec::PrimeField(4).validate().is_err());
        assert!(FieldSpec::PrimeField(1).validate().is_err());
        assert!(FieldSpec::Rationals.validate().is_ok());
    }
}
