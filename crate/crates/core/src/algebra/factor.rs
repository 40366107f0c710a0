//! Square-free decomposition and factorization of univariate polynomials.
//!
//! Over a prime field the factorization is complete (square-free split,
//! distinct-degree split, then equal-degree splitting with a deterministic
//! pseudo-random sequence). Over the rationals the engine extracts rational
//! roots and certifies low-degree remainders; anything it cannot certify is
//! flagged, never silently misreported.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::field::{FieldElement, FieldSpec};
use super::upoly::{upoly_gcd, UPoly};
use super::AlgebraError;

/// Retries of the equal-degree splitting step before giving up; never
/// reached at desk scale.
const SPLIT_RETRY_CAP: u64 = 64;

/// A factorization `unit · Π factor_i ^ multiplicity_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(UPoly, u32)>,
    /// True when some returned factor could not be certified irreducible
    /// (only possible over the rationals).
    pub maybe_reducible: bool,
}

impl Factorization {
    /// Multiplies the factorization back out, for verification.
    pub fn expand(&self) -> UPoly {
        let mut acc = UPoly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }

    /// Number of distinct factors certified irreducible.
    pub fn certified_distinct(&self) -> usize {
        if self.maybe_reducible {
            // the uncertified remainder is always the last entry
            self.factors.len() - 1
        } else {
            self.factors.len()
        }
    }
}

/// Square-free decomposition: pairwise-coprime parts with multiplicities,
/// sorted by multiplicity then coefficient sequence. The weighted product
/// reproduces the input up to the returned unit.
pub fn upoly_squarefree(p: &UPoly) -> Result<(FieldElement, Vec<(UPoly, u32)>), AlgebraError> {
    if p.degree().map_or(true, |d| d < 1) {
        return Err(AlgebraError::ConstantPolynomial);
    }
    let unit = p.leading_coeff().unwrap().clone();
    let monic = p.monic();
    let mut parts = match p.field().characteristic() {
        0 => squarefree_char0(&monic)?,
        _ => squarefree_charp(&monic, 1)?,
    };
    parts.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp_coeff_seq(&b.0)));
    // merge parts that landed on the same multiplicity
    let mut merged: Vec<(UPoly, u32)> = Vec::new();
    for (f, m) in parts {
        match merged.last_mut() {
            Some((g, m0)) if *m0 == m => *g = g.mul(&f),
            _ => merged.push((f, m)),
        }
    }
    Ok((unit, merged))
}

/// Yun's algorithm; characteristic zero only.
fn squarefree_char0(f: &UPoly) -> Result<Vec<(UPoly, u32)>, AlgebraError> {
    let mut out = Vec::new();
    let df = f.derivative();
    let a0 = upoly_gcd(f, &df)?;
    let mut b = f.div_exact(&a0)?;
    let mut c = df.div_exact(&a0)?;
    let mut d = c.sub(&b.derivative());
    let mut i = 1u32;
    while b.degree().map_or(false, |deg| deg >= 1) {
        let a = upoly_gcd(&b, &d)?;
        if a.degree().map_or(false, |deg| deg >= 1) {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a)?;
        c = d.div_exact(&a)?;
        d = c.sub(&b.derivative());
        i += 1;
    }
    Ok(out)
}

/// Characteristic-p square-free decomposition with p-th-root recursion for
/// the T^p-power part.
fn squarefree_charp(f: &UPoly, mult: u32) -> Result<Vec<(UPoly, u32)>, AlgebraError> {
    let p = f.field().characteristic();
    debug_assert!(p > 0);
    let mut out = Vec::new();

    let df = f.derivative();
    if df.is_zero() {
        // f = u(T^p); over the prime field coefficients are their own p-th roots
        let u = f
            .deflate(p as usize)
            .expect("zero derivative forces support on multiples of p");
        return squarefree_charp(&u, mult * p as u32);
    }

    let mut c = upoly_gcd(f, &df)?;
    let mut w = f.div_exact(&c)?;
    let mut i = 1u32;
    while w.degree().map_or(false, |d| d >= 1) {
        let y = upoly_gcd(&w, &c)?;
        let fac = w.div_exact(&y)?;
        if fac.degree().map_or(false, |d| d >= 1) {
            out.push((fac, i * mult));
        }
        w = y;
        c = c.div_exact(&w)?;
        i += 1;
    }
    if c.degree().map_or(false, |d| d >= 1) {
        // leftover perfect p-th power
        let u = c
            .deflate(p as usize)
            .expect("leftover part is a p-th power");
        out.extend(squarefree_charp(&u, mult * p as u32)?);
    }
    Ok(out)
}

/// Factors `p`. Complete over prime fields; over the rationals, rational
/// roots are split off and degree ≤ 3 remainders certified, with
/// `maybe_reducible` marking an uncertified remainder.
pub fn upoly_factor(p: &UPoly) -> Result<Factorization, AlgebraError> {
    if p.degree().map_or(true, |d| d < 1) {
        return Err(AlgebraError::ConstantPolynomial);
    }
    let mut fact = match p.field() {
        FieldSpec::PrimeField(_) => factor_prime_field(p)?,
        FieldSpec::Rationals => factor_rationals(p)?,
    };
    fact.factors
        .sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(a.0.cmp_coeff_seq(&b.0)));
    debug_assert_eq!(fact.expand(), *p);
    Ok(fact)
}

fn factor_prime_field(p: &UPoly) -> Result<Factorization, AlgebraError> {
    let (unit, squarefree) = upoly_squarefree(p)?;
    let mut factors: Vec<(UPoly, u32)> = Vec::new();
    for (part, mult) in squarefree {
        for (d, product) in distinct_degree_split(&part)? {
            for irreducible in equal_degree_split(&product, d)? {
                factors.push((irreducible, mult));
            }
        }
    }
    Ok(Factorization {
        unit,
        factors,
        maybe_reducible: false,
    })
}

/// Splits a monic square-free polynomial into (d, product of all its
/// irreducible factors of degree d) pairs.
fn distinct_degree_split(f: &UPoly) -> Result<Vec<(usize, UPoly)>, AlgebraError> {
    let field = f.field();
    let q = field.characteristic();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let t = UPoly::monomial(FieldElement::one(field), 1);
    // running power T^(q^d) mod f, advanced degree by degree
    let mut tq = t.pow_mod(q, f)?;
    let mut d = 1usize;
    while rest.degree().map_or(false, |deg| deg >= 2 * d) {
        let g = upoly_gcd(&tq.sub(&t), &rest)?;
        if g.degree().map_or(false, |deg| deg >= 1) {
            out.push((d, g.clone()));
            rest = rest.div_exact(&g)?;
        }
        d += 1;
        tq = tq.pow_mod(q, f)?;
    }
    if rest.degree().map_or(false, |deg| deg >= 1) {
        out.push((rest.degree().unwrap(), rest));
    }
    Ok(out)
}

/// Cantor–Zassenhaus equal-degree splitting of a monic square-free product
/// of irreducibles all of degree `d`.
fn equal_degree_split(f: &UPoly, d: usize) -> Result<Vec<UPoly>, AlgebraError> {
    let deg = f.degree().unwrap();
    if deg == d {
        return Ok(vec![f.clone()]);
    }
    let field = f.field();
    let q = field.characteristic();
    let mut rng = SplitMix64::from_poly(f);
    for _ in 0..SPLIT_RETRY_CAP {
        let a = random_poly_below(&mut rng, field, deg);
        if a.degree().map_or(true, |deg| deg < 1) {
            continue;
        }
        let g = upoly_gcd(&a, f)?;
        let candidate = if g.degree().map_or(false, |deg| deg >= 1) {
            g
        } else if q == 2 {
            // trace map: a + a^2 + a^4 + ... + a^(2^(d-1)) mod f
            let mut tr = a.clone();
            let mut pw = a.clone();
            for _ in 1..d {
                pw = pw.mul(&pw).div_rem(f)?.1;
                tr = tr.add(&pw);
            }
            upoly_gcd(&tr, f)?
        } else {
            // a^((q^d - 1)/2) - 1 mod f splits with probability about 1/2
            let e = (pow_u128(q, d as u32) - 1) / 2;
            let b = pow_mod_u128(&a, e, f)?;
            upoly_gcd(&b.sub(&UPoly::one(field)), f)?
        };
        let cdeg = candidate.degree().unwrap_or(0);
        if cdeg >= 1 && cdeg < deg {
            let rest = f.div_exact(&candidate)?;
            let mut out = equal_degree_split(&candidate, d)?;
            out.extend(equal_degree_split(&rest, d)?);
            return Ok(out);
        }
    }
    Err(AlgebraError::SplitRetryCap)
}

fn pow_u128(base: u64, exp: u32) -> u128 {
    (base as u128).pow(exp)
}

fn pow_mod_u128(a: &UPoly, mut e: u128, m: &UPoly) -> Result<UPoly, AlgebraError> {
    let mut base = a.div_rem(m)?.1;
    let mut acc = UPoly::one(a.field());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).div_rem(m)?.1;
        }
        base = base.mul(&base).div_rem(m)?.1;
        e >>= 1;
    }
    Ok(acc)
}

fn random_poly_below(rng: &mut SplitMix64, field: FieldSpec, deg: usize) -> UPoly {
    let p = field.characteristic();
    let coeffs = (0..deg)
        .map(|_| FieldElement::from_integer(field, (rng.next() % p) as i64))
        .collect();
    UPoly::new(field, coeffs).expect("coefficients in field")
}

/// Deterministic pseudo-random sequence seeded from polynomial data so that
/// factorization output is reproducible.
struct SplitMix64(u64);

impl SplitMix64 {
    fn from_poly(f: &UPoly) -> Self {
        let mut h = 0x9e3779b97f4a7c15u64;
        h ^= f.field().characteristic();
        for c in f.coeffs() {
            if let FieldElement::Prime { val, .. } = c {
                h = h.wrapping_mul(0x100000001b3).wrapping_add(*val);
            }
        }
        SplitMix64(h)
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

fn factor_rationals(p: &UPoly) -> Result<Factorization, AlgebraError> {
    let field = p.field();
    let unit = p.leading_coeff().unwrap().clone();
    let mut rest = p.monic();
    let mut factors: Vec<(UPoly, u32)> = Vec::new();

    // split off powers of T
    let mut t_mult = 0u32;
    while rest.coeff(0).is_zero() && rest.degree().map_or(false, |d| d >= 1) {
        rest = rest.div_exact(&UPoly::monomial(FieldElement::one(field), 1))?;
        t_mult += 1;
    }
    if t_mult > 0 {
        factors.push((UPoly::monomial(FieldElement::one(field), 1), t_mult));
    }

    let mut complete_root_search = true;
    if rest.degree().map_or(false, |d| d >= 1) {
        let (roots, complete) = rational_roots(&rest);
        complete_root_search = complete;
        for root in roots {
            let linear = UPoly::new(field, vec![root.neg(), FieldElement::one(field)])?;
            let mut mult = 0u32;
            loop {
                match rest.div_rem(&linear)? {
                    (q, r) if r.is_zero() => {
                        rest = q;
                        mult += 1;
                    }
                    _ => break,
                }
            }
            debug_assert!(mult > 0);
            factors.push((linear, mult));
        }
    }

    let mut maybe_reducible = false;
    if let Some(d) = rest.degree() {
        if d == 2 {
            // the quadratic formula decides reducibility outright
            if let Some((r1, r2)) = quadratic_roots(&rest) {
                push_linear(&mut factors, field, r1);
                push_linear(&mut factors, field, r2);
            } else {
                factors.push((rest, 1));
            }
        } else if d >= 1 {
            // no rational roots remain; degree 3 is then irreducible,
            // provided the root search itself was complete
            let certified = d == 3 && complete_root_search;
            factors.push((rest, 1));
            if !certified {
                maybe_reducible = true;
            }
        }
    }
    Ok(Factorization {
        unit,
        factors,
        maybe_reducible,
    })
}

fn push_linear(factors: &mut Vec<(UPoly, u32)>, field: FieldSpec, root: FieldElement) {
    let linear = UPoly::new(field, vec![root.neg(), FieldElement::one(field)])
        .expect("coefficients in field");
    for (f, m) in factors.iter_mut() {
        if *f == linear {
            *m += 1;
            return;
        }
    }
    factors.push((linear, 1));
}

/// Rational roots of a monic quadratic via the discriminant, or `None`
/// when the discriminant is not a rational square (irreducible case).
fn quadratic_roots(f: &UPoly) -> Option<(FieldElement, FieldElement)> {
    debug_assert_eq!(f.degree(), Some(2));
    let b = f.coeff(1).as_rational().expect("rational field").clone();
    let c = f.coeff(0).as_rational().expect("rational field").clone();
    let disc = &b * &b - num_rational::BigRational::from_integer(4.into()) * &c;
    if disc.is_negative() {
        return None;
    }
    if !is_perfect_square(disc.numer()) || !is_perfect_square(disc.denom()) {
        return None;
    }
    let sqrt = num_rational::BigRational::new(disc.numer().sqrt(), disc.denom().sqrt());
    let two = num_rational::BigRational::from_integer(2.into());
    let r1 = (-&b + &sqrt) / &two;
    let r2 = (-&b - &sqrt) / &two;
    Some((FieldElement::Rational(r1), FieldElement::Rational(r2)))
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &(&s * &s) == n
}

/// All rational roots of a polynomial over ℚ, with a completeness flag:
/// `false` when the divisor enumeration had to give up (huge constant or
/// leading numerators).
fn rational_roots(f: &UPoly) -> (Vec<FieldElement>, bool) {
    // clear denominators: integer polynomial with the same roots
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        let r = c.as_rational().expect("rational field");
        lcm = num_integer::lcm(lcm, r.denom().clone());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    let a0 = ints.first().cloned().unwrap_or_else(BigInt::zero);
    let an = ints.last().cloned().unwrap_or_else(BigInt::one);
    debug_assert!(!a0.is_zero(), "powers of T are split off before root search");

    let (num_divs, num_complete) = divisors(&a0.abs());
    let (den_divs, den_complete) = divisors(&an.abs());
    let mut roots = Vec::new();
    for n in &num_divs {
        for d in &den_divs {
            for sign in [1, -1] {
                let cand = FieldElement::Rational(num_rational::BigRational::new(
                    n * BigInt::from(sign),
                    d.clone(),
                ));
                if f.evaluate(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    (roots, num_complete && den_complete)
}

/// Positive divisors via trial division. The flag is false when a prime
/// factor above the trial bound remains, in which case the list may be
/// incomplete.
fn divisors(n: &BigInt) -> (Vec<BigInt>, bool) {
    const TRIAL_BOUND: u64 = 1_000_000;
    if n.is_zero() {
        return (vec![BigInt::one()], true);
    }
    let mut rest = n.clone();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2u32);
    while &(&d * &d) <= &rest && d <= BigInt::from(TRIAL_BOUND) {
        let mut e = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1u32;
    }
    let mut complete = true;
    if rest > BigInt::one() {
        if rest <= BigInt::from(TRIAL_BOUND) * BigInt::from(TRIAL_BOUND) {
            // remaining cofactor below the square of the bound is prime
            primes.push((rest, 1));
        } else {
            complete = false;
        }
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d0 in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d0 * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    (divs, complete)
}
