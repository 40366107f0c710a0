//! Exact polyhedral geometry of Newton polyhedra: vertex and compact-edge
//! enumeration, loose-edge detection, projection along an edge direction,
//! and the projected-orthant test.
//!
//! All decisions run on exact rational Fourier–Motzkin feasibility. Strict
//! conditions (positivity of a form, points strictly above a face) are
//! encoded as `≥ 1` constraints, which is valid because every system here is
//! positively homogeneous in the unknown form.

pub mod lp;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{ExponentVector, LinearForm, Series};
use lp::{Constraint, LinearSystem};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PolyhedronError {
    #[error("empty generator set")]
    EmptySupport,
    #[error("projection direction violates the sign condition")]
    BadDirection,
    #[error("edge is not an edge of this polyhedron")]
    NotAnEdge,
    #[error("generators have inconsistent dimensions")]
    DimensionMismatch,
}

/// A compact edge of a Newton polyhedron, together with the data the
/// lifting machinery needs: ends, direction, lattice length, a canonical
/// positive witness form, the loose flag, and the coordinate permutation
/// that moves a negative direction entry into the last slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeFrame {
    /// End with the larger last coordinate after the permutation.
    pub alpha: ExponentVector,
    /// End with the smaller last coordinate after the permutation.
    pub beta: ExponentVector,
    /// beta - alpha, in original coordinates.
    pub delta: Vec<i64>,
    /// Primitive direction delta / lattice_length, original coordinates.
    pub direction: Vec<i64>,
    /// Number of primitive lattice steps from alpha to beta.
    pub lattice_length: u64,
    /// Positive integer form with gcd 1, minimal on exactly this edge.
    pub witness: LinearForm,
    pub loose: bool,
    /// Coordinate reordering: permuted entry i is original entry perm[i].
    /// Always a transposition, hence self-inverse.
    pub perm: Vec<usize>,
}

impl EdgeFrame {
    /// The edge direction in permuted coordinates; its last entry is
    /// negative.
    pub fn permuted_delta(&self) -> Vec<i64> {
        self.perm.iter().map(|&i| self.delta[i]).collect()
    }

    pub fn permuted_direction(&self) -> Vec<i64> {
        self.perm.iter().map(|&i| self.direction[i]).collect()
    }

    pub fn perm_is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Descendant: some orientation of the direction is nonnegative except
    /// in the last (original) coordinate, which is negative.
    pub fn is_descendant(&self) -> bool {
        let n = self.delta.len();
        let forward = self.delta[n - 1] < 0 && self.delta[..n - 1].iter().all(|&d| d >= 0);
        let backward = self.delta[n - 1] > 0 && self.delta[..n - 1].iter().all(|&d| d <= 0);
        forward || backward
    }

    /// The common value of the witness form on the edge.
    pub fn level(&self) -> BigRational {
        self.witness.apply(&self.alpha)
    }
}

/// Newton polyhedron of a finite support set: generators, extracted
/// vertices, and compact edges with loose flags.
#[derive(Clone, Debug)]
pub struct NewtonPolyhedron {
    n: usize,
    generators: Vec<ExponentVector>,
    vertices: Vec<ExponentVector>,
    edges: Vec<EdgeFrame>,
}

impl NewtonPolyhedron {
    /// Builds the polyhedron of a support set: vertices, compact edges and
    /// their loose flags.
    pub fn from_support(generators: &[ExponentVector]) -> Result<Self, PolyhedronError> {
        if generators.is_empty() {
            return Err(PolyhedronError::EmptySupport);
        }
        let n = generators[0].len();
        if generators.iter().any(|g| g.len() != n) {
            return Err(PolyhedronError::DimensionMismatch);
        }
        let mut gens = generators.to_vec();
        gens.sort();
        gens.dedup();

        let vertices = newton_vertices_inner(n, &gens);
        let mut np = NewtonPolyhedron {
            n,
            generators: gens,
            vertices,
            edges: Vec::new(),
        };
        np.edges = np.compute_edges();
        let flags: Vec<bool> = np.edges.iter().map(|e| np.edge_is_loose(e)).collect();
        for (e, loose) in np.edges.iter_mut().zip(flags) {
            e.loose = loose;
        }
        Ok(np)
    }

    pub fn from_series(f: &Series) -> Result<Self, PolyhedronError> {
        NewtonPolyhedron::from_support(&f.support())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.generators
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeFrame] {
        &self.edges
    }

    pub fn loose_edges(&self) -> impl Iterator<Item = &EdgeFrame> {
        self.edges.iter().filter(|e| e.loose)
    }

    /// Looks up the stored frame equal to `e` (by ends).
    pub fn find_edge(&self, e: &EdgeFrame) -> Result<&EdgeFrame, PolyhedronError> {
        self.edges
            .iter()
            .find(|own| own.alpha == e.alpha && own.beta == e.beta)
            .ok_or(PolyhedronError::NotAnEdge)
    }

    /// Enumerates compact edges over vertex pairs: the pair (a, b) spans an
    /// edge iff some form λ ≥ 1 (componentwise) takes equal values on a and
    /// b and values larger by ≥ 1 on every generator off the segment.
    fn compute_edges(&self) -> Vec<EdgeFrame> {
        let mut edges = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let a = &self.vertices[i];
                let b = &self.vertices[j];
                if let Some(witness) = self.edge_witness(a, b) {
                    edges.push(make_edge_frame(a, b, witness));
                }
            }
        }
        edges
    }

    fn edge_witness(&self, a: &ExponentVector, b: &ExponentVector) -> Option<LinearForm> {
        let mut sys = LinearSystem::new(self.n);
        for i in 0..self.n {
            let mut coeffs = vec![0i64; self.n];
            coeffs[i] = 1;
            sys.push_ge_ints(&coeffs, 1);
        }
        sys.push(Constraint::eq(
            rationals(&a.sub_signed(b)),
            BigRational::zero(),
        ));
        for g in &self.generators {
            if on_segment(g, a, b) {
                continue;
            }
            sys.push(Constraint::ge(
                rationals(&g.sub_signed(a)),
                BigRational::one(),
            ));
        }
        let point = sys.lex_smallest_point()?;
        Some(canonical_integer_form(&point))
    }

    /// An edge fails to be loose iff some vertex off its segment can be
    /// brought onto a common compact face: the witness system with the extra
    /// equality is then feasible.
    fn edge_is_loose(&self, e: &EdgeFrame) -> bool {
        for gamma in &self.vertices {
            if on_segment(gamma, &e.alpha, &e.beta) {
                continue;
            }
            let mut sys = LinearSystem::new(self.n);
            for i in 0..self.n {
                let mut coeffs = vec![0i64; self.n];
                coeffs[i] = 1;
                sys.push_ge_ints(&coeffs, 1);
            }
            sys.push(Constraint::eq(
                rationals(&e.alpha.sub_signed(&e.beta)),
                BigRational::zero(),
            ));
            sys.push(Constraint::eq(
                rationals(&e.alpha.sub_signed(gamma)),
                BigRational::zero(),
            ));
            for g in &self.generators {
                sys.push(Constraint::ge(
                    rationals(&g.sub_signed(&e.alpha)),
                    BigRational::zero(),
                ));
            }
            if sys.is_feasible() {
                return false;
            }
        }
        true
    }

    /// Public form of the loose test; `e` must be one of this polyhedron's
    /// edges.
    pub fn is_loose(&self, e: &EdgeFrame) -> Result<bool, PolyhedronError> {
        Ok(self.find_edge(e)?.loose)
    }
}

/// The vertices of the polyhedron spanned by a support set: exactly those
/// generators not contained in the hull of the others plus the positive
/// orthant, decided by a separating-form LP.
pub fn newton_vertices(
    generators: &[ExponentVector],
) -> Result<Vec<ExponentVector>, PolyhedronError> {
    if generators.is_empty() {
        return Err(PolyhedronError::EmptySupport);
    }
    let n = generators[0].len();
    if generators.iter().any(|g| g.len() != n) {
        return Err(PolyhedronError::DimensionMismatch);
    }
    let mut gens = generators.to_vec();
    gens.sort();
    gens.dedup();
    Ok(newton_vertices_inner(n, &gens))
}

fn newton_vertices_inner(n: usize, gens: &[ExponentVector]) -> Vec<ExponentVector> {
    gens.iter()
        .filter(|s| {
            // s is a vertex iff some λ ≥ 0 separates: λ·(v - s) ≥ 1 for all
            // other generators v
            let mut sys = LinearSystem::new(n);
            for i in 0..n {
                let mut coeffs = vec![0i64; n];
                coeffs[i] = 1;
                sys.push_ge_ints(&coeffs, 0);
            }
            for v in gens {
                if v == *s {
                    continue;
                }
                sys.push(Constraint::ge(
                    rationals(&v.sub_signed(s)),
                    BigRational::one(),
                ));
            }
            sys.is_feasible()
        })
        .cloned()
        .collect()
}

/// Whether v lies on the closed segment [a, b].
pub fn on_segment(v: &ExponentVector, a: &ExponentVector, b: &ExponentVector) -> bool {
    let dir = b.sub_signed(a);
    let off = v.sub_signed(a);
    let mut t: Option<BigRational> = None;
    for (d, o) in dir.iter().zip(&off) {
        if *d != 0 {
            t = Some(BigRational::new((*o).into(), (*d).into()));
            break;
        }
    }
    let t = match t {
        Some(t) => t,
        None => return off.iter().all(|&o| o == 0), // a == b
    };
    if t < BigRational::zero() || t > BigRational::one() {
        return false;
    }
    dir.iter().zip(&off).all(|(d, o)| {
        BigRational::from_integer((*o).into()) == &t * BigRational::from_integer((*d).into())
    })
}

fn rationals(v: &[i64]) -> Vec<BigRational> {
    v.iter()
        .map(|&x| BigRational::from_integer(x.into()))
        .collect()
}

/// Scales a positive rational point to integer entries with gcd 1.
fn canonical_integer_form(point: &[BigRational]) -> LinearForm {
    let mut lcm = BigInt::one();
    for x in point {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = point
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if !g.is_zero() && !g.is_one() {
        for i in &mut ints {
            *i /= &g;
        }
    }
    LinearForm::new(ints.into_iter().map(BigRational::from_integer).collect())
        .expect("witness entries are positive")
}

fn make_edge_frame(a: &ExponentVector, b: &ExponentVector, witness: LinearForm) -> EdgeFrame {
    let n = a.len();
    let delta_ab = b.sub_signed(a);
    // pivot: the last coordinate if it moves, else the last moving one
    let pivot = if delta_ab[n - 1] != 0 {
        n - 1
    } else {
        (0..n).rev().find(|&i| delta_ab[i] != 0).expect("a != b")
    };
    // orient so the pivot entry of beta - alpha is negative
    let (alpha, beta) = if delta_ab[pivot] < 0 { (a, b) } else { (b, a) };
    let delta = beta.sub_signed(alpha);
    let mut g = 0u64;
    for d in &delta {
        g = g.gcd(&d.unsigned_abs());
    }
    debug_assert!(g >= 1);
    let direction: Vec<i64> = delta.iter().map(|d| d / g as i64).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(pivot, n - 1);
    EdgeFrame {
        alpha: alpha.clone(),
        beta: beta.clone(),
        delta,
        direction,
        lattice_length: g,
        witness,
        loose: false,
        perm,
    }
}

/// Projection of a lattice point along `delta` (already permuted so the
/// last entry of `delta` is negative): drops the last coordinate after
/// sliding along delta to the hyperplane v_n = 0.
pub fn project_point(
    v: &ExponentVector,
    delta: &[i64],
) -> Result<Vec<BigRational>, PolyhedronError> {
    check_direction(delta)?;
    let n = delta.len();
    if v.len() != n {
        return Err(PolyhedronError::DimensionMismatch);
    }
    let dn = BigRational::from_integer(delta[n - 1].into());
    let t = BigRational::from_integer(BigInt::from(v.0[n - 1])) / dn;
    Ok((0..n - 1)
        .map(|i| {
            BigRational::from_integer(BigInt::from(v.0[i]))
                - &t * BigRational::from_integer(delta[i].into())
        })
        .collect())
}

fn check_direction(delta: &[i64]) -> Result<(), PolyhedronError> {
    let n = delta.len();
    if n < 2 || delta[n - 1] >= 0 || !delta[..n - 1].iter().any(|&d| d > 0) {
        return Err(PolyhedronError::BadDirection);
    }
    Ok(())
}

/// Projection of a point set along `delta`: generators of the projected
/// F-subset, with a note when the recession cone is wider than the
/// positive orthant (direction not descendant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectedFSubset {
    pub m: usize,
    pub generators: Vec<Vec<BigRational>>,
    pub delta: Vec<i64>,
    pub recession_note: bool,
}

pub fn project(
    points: &[ExponentVector],
    delta: &[i64],
) -> Result<ProjectedFSubset, PolyhedronError> {
    check_direction(delta)?;
    let n = delta.len();
    let mut generators: Vec<Vec<BigRational>> = points
        .iter()
        .map(|p| project_point(p, delta))
        .collect::<Result<_, _>>()?;
    generators.sort();
    generators.dedup();
    Ok(ProjectedFSubset {
        m: n - 1,
        generators,
        delta: delta.to_vec(),
        recession_note: delta[..n - 1].iter().any(|&d| d < 0),
    })
}

/// The unique minimizing vertex of a projected F-subset, when every
/// generator lies in `w + cone(e_1, …, e_m, δ̄)`; `None` otherwise. The
/// cone is pointed for every admissible direction, so the vertex is unique.
pub fn delta_orthant_vertex(proj: &ProjectedFSubset) -> Option<Vec<BigRational>> {
    let delta_bar = &proj.delta[..proj.m];
    proj.generators
        .iter()
        .find(|w| {
            proj.generators
                .iter()
                .all(|u| in_projected_cone(u, w, delta_bar))
        })
        .cloned()
}

pub fn is_delta_orthant(proj: &ProjectedFSubset) -> bool {
    delta_orthant_vertex(proj).is_some()
}

/// Membership of u - w in cone(e_1, …, e_m, δ̄), as a one-variable exact LP
/// in the δ̄ coefficient.
fn in_projected_cone(u: &[BigRational], w: &[BigRational], delta_bar: &[i64]) -> bool {
    let mut sys = LinearSystem::new(1);
    sys.push_ge_ints(&[1], 0);
    for ((ui, wi), &d) in u.iter().zip(w).zip(delta_bar) {
        // ui - wi - t·d ≥ 0
        sys.push(Constraint::ge(
            vec![BigRational::from_integer((-d).into())],
            wi - ui,
        ));
    }
    sys.is_feasible()
}
