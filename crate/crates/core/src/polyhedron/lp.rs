//! Exact rational linear-program feasibility by Fourier–Motzkin elimination.
//!
//! Systems are small (a handful of variables, tens of constraints), so the
//! elimination is run exactly over ℚ with redundancy pruning between rounds.
//! Besides feasibility, the solver can return the lexicographically smallest
//! feasible point, which the callers use to canonicalize witness forms.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Relation of a single constraint `Σ coeffs·x REL rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Rel,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn ge(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint {
            coeffs,
            rel: Rel::Ge,
            rhs,
        }
    }

    pub fn eq(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint {
            coeffs,
            rel: Rel::Eq,
            rhs,
        }
    }
}

/// A conjunction of linear constraints over `n_vars` rational unknowns.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    n_vars: usize,
    constraints: Vec<Constraint>,
}

/// Inequality `Σ coeffs·x ≥ rhs` in normalized form (pivot-scaled), used
/// internally during elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Ineq {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
}

impl Ineq {
    /// Scales so that the first nonzero coefficient (or the rhs) has
    /// absolute value one; inequalities are invariant under positive
    /// scaling, so this canonicalizes for deduplication.
    fn normalize(mut self) -> Self {
        let pivot = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .or_else(|| {
                if self.rhs.is_zero() {
                    None
                } else {
                    Some(self.rhs.clone())
                }
            });
        if let Some(p) = pivot {
            let scale = p.abs().recip();
            for c in &mut self.coeffs {
                *c *= &scale;
            }
            self.rhs *= &scale;
        }
        self
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero) && self.rhs <= BigRational::zero()
    }

    fn is_contradiction(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero) && self.rhs > BigRational::zero()
    }
}

impl LinearSystem {
    pub fn new(n_vars: usize) -> Self {
        LinearSystem {
            n_vars,
            constraints: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn push(&mut self, c: Constraint) {
        debug_assert_eq!(c.coeffs.len(), self.n_vars);
        self.constraints.push(c);
    }

    /// Convenience: Σ coeffs·x ≥ rhs with integer data.
    pub fn push_ge_ints(&mut self, coeffs: &[i64], rhs: i64) {
        self.push(Constraint::ge(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
            BigRational::from_integer(rhs.into()),
        ));
    }

    fn to_ineqs(&self) -> Vec<Ineq> {
        let mut out = Vec::new();
        for c in &self.constraints {
            out.push(
                Ineq {
                    coeffs: c.coeffs.clone(),
                    rhs: c.rhs.clone(),
                }
                .normalize(),
            );
            if c.rel == Rel::Eq {
                out.push(
                    Ineq {
                        coeffs: c.coeffs.iter().map(|x| -x).collect(),
                        rhs: -&c.rhs,
                    }
                    .normalize(),
                );
            }
        }
        dedup(out)
    }

    pub fn is_feasible(&self) -> bool {
        self.eliminate_all().is_some()
    }

    /// Runs the full elimination, keeping the intermediate systems. Returns
    /// `None` on infeasibility. After the call, entry k of the result only
    /// involves variables 0..=k.
    fn eliminate_all(&self) -> Option<Vec<Vec<Ineq>>> {
        let mut layers = Vec::with_capacity(self.n_vars.max(1));
        let mut current = self.to_ineqs();
        if current.iter().any(Ineq::is_contradiction) {
            return None;
        }
        layers.push(current.clone());
        for var in (1..self.n_vars).rev() {
            current = eliminate(&current, var);
            if current.iter().any(Ineq::is_contradiction) {
                return None;
            }
            layers.push(current.clone());
        }
        if self.n_vars > 0 {
            let last = layers.last().unwrap();
            if bounds_for(last, 0, &[]).is_none() {
                return None;
            }
        }
        layers.reverse();
        Some(layers)
    }

    /// The lexicographically smallest feasible point, when the feasible
    /// region is nonempty and each coordinate is bounded below once the
    /// previous ones are fixed (true for all systems built here, which
    /// carry `x_i ≥ const` rows). Returns `None` when infeasible.
    pub fn lex_smallest_point(&self) -> Option<Vec<BigRational>> {
        if self.n_vars == 0 {
            return if self.to_ineqs().iter().any(Ineq::is_contradiction) {
                None
            } else {
                Some(Vec::new())
            };
        }
        let layers = self.eliminate_all()?;
        let mut point: Vec<BigRational> = Vec::with_capacity(self.n_vars);
        for var in 0..self.n_vars {
            // layers[var] involves variables 0..=var; earlier ones are fixed
            let (lo, _hi) = bounds_for(&layers[var], var, &point)?;
            let value = lo.expect("witness systems are bounded below in every variable");
            point.push(value);
        }
        Some(point)
    }

    /// Whether a concrete point satisfies every constraint.
    pub fn satisfied_by(&self, point: &[BigRational]) -> bool {
        debug_assert_eq!(point.len(), self.n_vars);
        self.constraints.iter().all(|c| {
            let lhs: BigRational = c.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
            match c.rel {
                Rel::Ge => lhs >= c.rhs,
                Rel::Eq => lhs == c.rhs,
            }
        })
    }
}

/// One Fourier–Motzkin round: removes `var` by combining every positive
/// occurrence with every negative one.
fn eliminate(ineqs: &[Ineq], var: usize) -> Vec<Ineq> {
    let mut zero_rows = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for iq in ineqs {
        let c = &iq.coeffs[var];
        if c.is_zero() {
            zero_rows.push(iq.clone());
        } else if c > &BigRational::zero() {
            pos.push(iq);
        } else {
            neg.push(iq);
        }
    }
    let mut out = zero_rows;
    for p in &pos {
        for n in &neg {
            // scale so the var coefficients cancel: p/p_var - n/n_var
            let pscale = p.coeffs[var].clone().recip();
            let nscale = -n.coeffs[var].clone().recip();
            let coeffs: Vec<BigRational> = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(a, b)| a * &pscale + b * &nscale)
                .collect();
            let rhs = &p.rhs * &pscale + &n.rhs * &nscale;
            let iq = Ineq { coeffs, rhs }.normalize();
            debug_assert!(iq.coeffs[var].is_zero());
            if !iq.is_trivial() {
                out.push(iq);
            }
        }
    }
    dedup(out)
}

fn dedup(mut ineqs: Vec<Ineq>) -> Vec<Ineq> {
    ineqs.sort_by(|a, b| a.coeffs.cmp(&b.coeffs).then_with(|| a.rhs.cmp(&b.rhs)));
    ineqs.dedup();
    ineqs
}

type Bounds = (Option<BigRational>, Option<BigRational>);

/// Lower/upper bounds for `var` in a layer where variables `< var` are
/// already fixed to `fixed` and variables `> var` have been eliminated.
/// Returns `None` when the bounds are contradictory.
fn bounds_for(ineqs: &[Ineq], var: usize, fixed: &[BigRational]) -> Option<Bounds> {
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for iq in ineqs {
        debug_assert!(iq.coeffs.iter().skip(var + 1).all(Zero::is_zero));
        let c = &iq.coeffs[var];
        let partial: BigRational = iq
            .coeffs
            .iter()
            .take(var)
            .zip(fixed)
            .map(|(a, x)| a * x)
            .sum();
        let rest = &iq.rhs - partial;
        if c.is_zero() {
            if rest > BigRational::zero() {
                return None;
            }
            continue;
        }
        let bound = &rest / c;
        if c > &BigRational::zero() {
            if lo.as_ref().map_or(true, |b| bound > *b) {
                lo = Some(bound);
            }
        } else if hi.as_ref().map_or(true, |b| bound < *b) {
            hi = Some(bound);
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return None;
        }
    }
    Some((lo, hi))
}
