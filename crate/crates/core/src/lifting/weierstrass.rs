//! Truncated Weierstraß preparation: a series whose restriction to the
//! last-variable axis has order d splits as unit · (monic degree-d
//! polynomial in the last variable), computed degreewise in the total order
//! of the remaining variables.

use num_rational::BigRational;
use std::collections::BTreeMap;

use crate::algebra::FieldElement;
use crate::polyhedron::EdgeFrame;
use crate::series::{ExponentVector, Series};

use super::bridge::{edge_to_univariate, normalize_split, Split, SplitMode};
use super::lift::lift_monic_with;
use super::{FactorizationResult, LiftError, LiftOptions};

/// Total degree in the non-last variables.
fn x_order(e: &ExponentVector) -> u64 {
    e.0[..e.len() - 1].iter().sum()
}

fn z_degree(e: &ExponentVector) -> u64 {
    e.0[e.len() - 1]
}

/// Splits a series into slices of constant x-order.
fn by_x_order(f: &Series) -> BTreeMap<u64, Series> {
    let mut out: BTreeMap<u64, Series> = BTreeMap::new();
    for (e, c) in f.terms() {
        out.entry(x_order(e))
            .or_insert_with(|| Series::zero(f.n_vars(), f.field()))
            .add_term(e.clone(), c.clone())
            .expect("consistent ambient");
    }
    out
}

/// Keeps the terms with z-degree below `d`.
fn z_below(f: &Series, d: u64) -> Series {
    let mut out = Series::zero(f.n_vars(), f.field());
    for (e, c) in f.terms() {
        if z_degree(e) < d {
            out.add_term(e.clone(), c.clone()).expect("same ambient");
        }
    }
    out
}

/// Divides by z^d; every term must have z-degree at least d.
fn div_z_power(f: &Series, d: u64) -> Result<Series, LiftError> {
    let n = f.n_vars();
    let mut step = vec![0i64; n];
    step[n - 1] = -(d as i64);
    let mut out = Series::zero(n, f.field());
    for (e, c) in f.terms() {
        let shifted = e
            .offset(&step)
            .ok_or_else(|| LiftError::ZOrderMismatch("term below the z-power".into()))?;
        out.add_term(shifted, c.clone()).expect("same ambient");
    }
    Ok(out)
}

/// Weierstraß preparation of `gbar` to x-order `order`: returns (u, ghat)
/// with ghat monic of z-degree `d`, its sub-leading coefficients vanishing
/// on the z-axis, and `gbar ≡ u·ghat` modulo terms of x-order above
/// `order`. The unit u has nonzero constant term.
pub fn weierstrass_prepare(
    gbar: &Series,
    d: u64,
    order: u64,
) -> Result<(Series, Series), LiftError> {
    let n = gbar.n_vars();
    let field = gbar.field();
    if n < 2 {
        return Err(LiftError::ZOrderMismatch(
            "preparation needs at least two variables".into(),
        ));
    }
    let slices = by_x_order(gbar);
    let g0 = match slices.get(&0) {
        Some(s) => s.clone(),
        None => Series::zero(n, field),
    };
    // the z-axis restriction must have order exactly d
    let mut zd = ExponentVector::zero(n);
    zd.0[n - 1] = d;
    if g0.coeff(&zd).is_zero() {
        return Err(LiftError::ZOrderMismatch(format!(
            "no unit coefficient at z^{d} on the z-axis"
        )));
    }
    if g0.terms().any(|(e, _)| z_degree(e) < d) {
        return Err(LiftError::ZOrderMismatch(format!(
            "z-axis restriction has order below {d}"
        )));
    }

    // u0 = g0 / z^d, a unit power series in z with scalar coefficients;
    // its inverse is needed only to z-degree d-1
    let u0 = div_z_power(&g0, d)?;
    let u0_inv_low = invert_z_series(&u0, d)?;

    let mut u_slices: Vec<Series> = vec![u0.clone()];
    let mut r_slices: Vec<Series> = Vec::new(); // r[m-1] = x-order-m slice of ghat - z^d
    for m in 1..=order {
        // rhs_m = gbar_m - Σ_{j=1..m-1} u_{m-j} r_j
        let mut rhs = slices
            .get(&m)
            .cloned()
            .unwrap_or_else(|| Series::zero(n, field));
        for j in 1..m {
            let prod = u_slices[(m - j) as usize].mul(&r_slices[j as usize - 1])?;
            rhs = rhs.sub(&prod)?;
        }
        // r_m = [u0^{-1} · rhs]_{z<d}: the inverse matters only below z^d
        let r_m = z_below(&u0_inv_low.mul(&rhs)?, d);
        // u_m = (rhs - u0·r_m) / z^d
        let u_m = div_z_power(&rhs.sub(&u0.mul(&r_m)?)?, d)?;
        u_slices.push(u_m);
        r_slices.push(r_m);
    }

    let mut unit = Series::zero(n, field);
    for s in &u_slices {
        unit = unit.add(s)?;
    }
    let mut ghat = Series::monomial(zd, FieldElement::one(field));
    for r in &r_slices {
        ghat = ghat.add(r)?;
    }
    Ok((unit, ghat))
}

/// Inverse of a z-power series with scalar coefficients, truncated below
/// z-degree `upto`.
fn invert_z_series(u0: &Series, upto: u64) -> Result<Series, LiftError> {
    let n = u0.n_vars();
    let field = u0.field();
    let coeff_at = |j: u64| {
        let mut e = ExponentVector::zero(n);
        e.0[n - 1] = j;
        u0.coeff(&e)
    };
    let c0 = coeff_at(0);
    if c0.is_zero() {
        return Err(LiftError::ZOrderMismatch("unit has zero constant term".into()));
    }
    let c0_inv = c0.inv()?;
    let mut inv = vec![c0_inv.clone()];
    for j in 1..upto {
        let mut acc = FieldElement::zero(field);
        for i in 1..=j {
            let term = coeff_at(i).mul(&inv[(j - i) as usize]).expect("same field");
            acc = acc.add(&term).expect("same field");
        }
        inv.push(acc.neg().mul(&c0_inv).expect("same field"));
    }
    let mut out = Series::zero(n, field);
    for (j, c) in inv.into_iter().enumerate() {
        let mut e = ExponentVector::zero(n);
        e.0[n - 1] = j as u64;
        out.add_term(e, c)?;
    }
    Ok(out)
}

/// Full monic factorization: lift along a descendant loose edge, then
/// prepare the monic factor and push the unit into the complement. The
/// returned first factor is monic in the last variable.
pub fn factor_weierstrass(
    f: &Series,
    e: &EdgeFrame,
    split: &Split,
    target: &BigRational,
    order: u64,
) -> Result<FactorizationResult, LiftError> {
    factor_weierstrass_with(f, e, split, target, order, &LiftOptions::default())
}

pub fn factor_weierstrass_with(
    f: &Series,
    e: &EdgeFrame,
    split: &Split,
    target: &BigRational,
    order: u64,
    options: &LiftOptions,
) -> Result<FactorizationResult, LiftError> {
    let lifted = lift_monic_with(f, e, split, target, options)?;
    let n = f.n_vars();
    // z-degree of the prepared factor: first-factor steps times the
    // z-drop of one primitive step
    let ep = edge_to_univariate(f, e)?;
    let norm = normalize_split(&ep, split, SplitMode::MonicFirst)?;
    let d = norm.p1.degree().unwrap_or(0) as u64 * e.direction[n - 1].unsigned_abs();

    let (unit, ghat) = weierstrass_prepare(&lifted.g, d, order)?;
    let mut hhat = unit.mul(&lifted.h)?;
    let mut ghat = ghat;
    ghat.set_truncation(None);
    hhat.set_truncation(lifted.h.truncation().cloned());

    let residual_valuation = f.sub(&ghat.mul(&hhat)?)?.valuation(&e.witness)?;
    Ok(FactorizationResult {
        g: ghat,
        h: hhat,
        initial_g: lifted.initial_g,
        initial_h: lifted.initial_h,
        e1: lifted.e1,
        e2: lifted.e2,
        residual_valuation,
        trace: lifted.trace,
        forced_non_loose: lifted.forced_non_loose,
        target: target.clone(),
    })
}
