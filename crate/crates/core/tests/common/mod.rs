//! Shared helpers for integration tests: deterministic generation of random
//! inputs and brute-force geometric oracles kept independent of the library
//! paths they check.

use num_rational::BigRational;
use num_traits::{One, Zero};

use looseedge::algebra::{FieldElement, FieldSpec};
use looseedge::polyhedron::lp::{Constraint, LinearSystem};
use looseedge::series::{ExponentVector, Series};

/// Small deterministic generator so test inputs are reproducible without
/// pulling in an RNG dependency.
pub struct Rng(pub u64);

impl Rng {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

pub fn ev(entries: &[u64]) -> ExponentVector {
    ExponentVector(entries.to_vec())
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn qelt(n: i64) -> FieldElement {
    FieldElement::from_integer(FieldSpec::Rationals, n)
}

pub fn qfrac(n: i64, d: i64) -> FieldElement {
    FieldElement::Rational(BigRational::new(n.into(), d.into()))
}

/// Builds a rational-coefficient series from integer terms.
pub fn qseries(n: usize, terms: &[(&[u64], i64)]) -> Series {
    Series::from_terms(
        n,
        FieldSpec::Rationals,
        terms
            .iter()
            .map(|(e, c)| (ExponentVector(e.to_vec()), qelt(*c))),
    )
    .unwrap()
}

/// Random support set with entries below `max_exp`.
pub fn random_support(rng: &mut Rng, n: usize, points: usize, max_exp: u64) -> Vec<ExponentVector> {
    let mut out = Vec::with_capacity(points);
    for _ in 0..points {
        out.push(ExponentVector(
            (0..n).map(|_| rng.below(max_exp)).collect(),
        ));
    }
    out.sort();
    out.dedup();
    out
}

/// Random series over a prime field with the given support size.
pub fn random_fp_series(rng: &mut Rng, p: u64, n: usize, points: usize, max_exp: u64) -> Series {
    let field = FieldSpec::PrimeField(p);
    let mut s = Series::zero(n, field);
    for _ in 0..points {
        let exp = ExponentVector((0..n).map(|_| rng.below(max_exp)).collect());
        let coeff = FieldElement::from_integer(field, rng.below(p) as i64);
        s.add_term(exp, coeff).unwrap();
    }
    s
}

/// Membership of an integer point in the convex hull of a point set,
/// decided by exact LP over the barycentric weights.
pub fn in_convex_hull(point: &ExponentVector, hull: &[ExponentVector]) -> bool {
    let n = point.len();
    let k = hull.len();
    if k == 0 {
        return false;
    }
    let mut sys = LinearSystem::new(k);
    for j in 0..k {
        let mut coeffs = vec![0i64; k];
        coeffs[j] = 1;
        sys.push_ge_ints(&coeffs, 0);
    }
    // weights sum to one
    sys.push(Constraint::eq(vec![BigRational::one(); k], BigRational::one()));
    // weighted sum reproduces the point coordinatewise
    for i in 0..n {
        let coeffs: Vec<BigRational> = hull.iter().map(|h| rat(h.0[i] as i64)).collect();
        sys.push(Constraint::eq(coeffs, rat(point.0[i] as i64)));
    }
    sys.is_feasible()
}

/// Brute-force compact-face oracle: enumerates all vertex subsets and keeps
/// those that are the vertex set of a compact face (an equal-value positive
/// form exists that is strictly larger on every generator off the hull of
/// the subset). Returns the subsets together with the affine dimension of
/// their hull.
pub fn brute_force_compact_faces(
    generators: &[ExponentVector],
    vertices: &[ExponentVector],
) -> Vec<(Vec<ExponentVector>, usize)> {
    let n = generators[0].len();
    let v = vertices.len();
    let mut faces = Vec::new();
    for mask in 1u32..(1 << v) {
        let subset: Vec<ExponentVector> = (0..v)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| vertices[i].clone())
            .collect();
        let mut sys = LinearSystem::new(n);
        for i in 0..n {
            let mut coeffs = vec![0i64; n];
            coeffs[i] = 1;
            sys.push_ge_ints(&coeffs, 1);
        }
        let s0 = &subset[0];
        for s in &subset[1..] {
            sys.push(Constraint::eq(
                s.sub_signed(s0)
                    .iter()
                    .map(|&x| rat(x))
                    .collect(),
                BigRational::zero(),
            ));
        }
        for g in generators {
            if subset.contains(g) || in_convex_hull(g, &subset) {
                continue;
            }
            sys.push(Constraint::ge(
                g.sub_signed(s0).iter().map(|&x| rat(x)).collect(),
                BigRational::one(),
            ));
        }
        if sys.is_feasible() {
            faces.push((subset.clone(), affine_dim(&subset)));
        }
    }
    faces
}

/// Affine dimension of a point set via rank of the difference vectors,
/// computed by fraction-free elimination on integers.
pub fn affine_dim(points: &[ExponentVector]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let mut rows: Vec<Vec<i64>> = points[1..].iter().map(|p| p.sub_signed(base)).collect();
    let n = base.len();
    let mut rank = 0;
    for col in 0..n {
        let pivot = (rank..rows.len()).find(|&r| rows[r][col] != 0);
        let pivot = match pivot {
            None => continue,
            Some(p) => p,
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let (a, b) = (rows[rank][col], rows[r][col]);
                for c in 0..n {
                    rows[r][c] = rows[r][c] * a - rows[rank][c] * b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Loose-edge oracle: an edge is loose iff no feasible vertex subset of
/// affine dimension at least two contains both of its ends in its hull.
pub fn brute_force_is_loose(
    generators: &[ExponentVector],
    vertices: &[ExponentVector],
    alpha: &ExponentVector,
    beta: &ExponentVector,
) -> bool {
    for (subset, dim) in brute_force_compact_faces(generators, vertices) {
        if dim >= 2 && in_convex_hull(alpha, &subset) && in_convex_hull(beta, &subset) {
            return false;
        }
    }
    true
}
