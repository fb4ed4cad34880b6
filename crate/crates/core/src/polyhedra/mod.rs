//! Polyhedra in half-space (H) and generator (V) form, with the double
//! description conversion between them.
//!
//! Conventions:
//! - H-rep: `A x <= b` together with `E x = e`.
//! - V-rep: `conv(vertices) + cone(rays)`. A conic V-rep has no vertices and
//!   an implicit apex at the origin; a non-conic V-rep without vertices is
//!   the empty set.
//! - Every conversion homogenizes (one extra coordinate) so cones and
//!   polytopes share the same DD code path.

mod brute;
mod dd;

pub use brute::{brute_force_vertices, BRUTE_FORCE_MAX_DIM, BRUTE_FORCE_MAX_ROWS};
pub use dd::{dd_cone, ConeGenerators, DdOptions};

use thiserror::Error;

use crate::linalg::{self, Mat};
use crate::scalar::Real;

/// Pivot threshold (relative to the largest entry) for rank decisions.
pub const RANK_TOL: f64 = 1e-10;
/// Membership tolerance for generators against their H-rep.
pub const MEMBERSHIP_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyhedronError {
    #[error("equality constraints have no solution")]
    InconsistentEqualities,
    #[error("double description hit its work limit with {0} generators")]
    IterationLimit(usize),
    #[error("brute-force enumeration is limited to dimension {BRUTE_FORCE_MAX_DIM} and {BRUTE_FORCE_MAX_ROWS} inequalities (got {dim}, {rows})")]
    ScaleLimit { dim: usize, rows: usize },
    #[error("cannot build a facet description of an empty generator set")]
    EmptyInput,
}

/// `{x : A x <= b, E x = e}` in dimension `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct HRep<T> {
    pub ineq: Mat<T>,
    pub ineq_rhs: Vec<T>,
    pub eq: Mat<T>,
    pub eq_rhs: Vec<T>,
    dim: usize,
}

impl<T: Real> HRep<T> {
    pub fn new(ineq: Mat<T>, ineq_rhs: Vec<T>, eq: Mat<T>, eq_rhs: Vec<T>, dim: usize) -> Self {
        assert!(ineq.rows() == 0 || ineq.cols() == dim, "inequality width");
        assert!(eq.rows() == 0 || eq.cols() == dim, "equality width");
        assert_eq!(ineq.rows(), ineq_rhs.len());
        assert_eq!(eq.rows(), eq_rhs.len());
        Self {
            ineq,
            ineq_rhs,
            eq,
            eq_rhs,
            dim,
        }
    }

    /// `{x : A x <= b}`.
    pub fn from_inequalities(ineq: Mat<T>, ineq_rhs: Vec<T>) -> Self {
        let dim = ineq.cols();
        Self::new(ineq, ineq_rhs, Mat::zeros(0, dim), Vec::new(), dim)
    }

    /// The polyhedral cone `{x : A x <= 0}`.
    pub fn cone(ineq: Mat<T>) -> Self {
        let m = ineq.rows();
        Self::from_inequalities(ineq, vec![T::zero(); m])
    }

    pub fn with_equalities(mut self, eq: Mat<T>, eq_rhs: Vec<T>) -> Self {
        assert!(eq.rows() == 0 || eq.cols() == self.dim);
        assert_eq!(eq.rows(), eq_rhs.len());
        self.eq = self.eq.vstack(&eq);
        self.eq_rhs.extend(eq_rhs);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All right-hand sides are zero.
    pub fn is_conic(&self) -> bool {
        self.ineq_rhs
            .iter()
            .chain(&self.eq_rhs)
            .all(|&v| v == T::zero())
    }

    /// Largest constraint violation at `x` (non-positive when feasible).
    pub fn max_violation(&self, x: &[T]) -> T {
        let ineq =
            (0..self.ineq.rows()).map(|i| linalg::dot(self.ineq.row(i), x) - self.ineq_rhs[i]);
        let eq =
            (0..self.eq.rows()).map(|i| (linalg::dot(self.eq.row(i), x) - self.eq_rhs[i]).abs());
        ineq.chain(eq).fold(T::neg_infinity(), T::max)
    }

    /// Largest violation of the homogeneous part by direction `r`.
    pub fn max_ray_violation(&self, r: &[T]) -> T {
        let ineq = (0..self.ineq.rows()).map(|i| linalg::dot(self.ineq.row(i), r));
        let eq = (0..self.eq.rows()).map(|i| linalg::dot(self.eq.row(i), r).abs());
        ineq.chain(eq).fold(T::neg_infinity(), T::max)
    }

    pub fn contains(&self, x: &[T], tol: T) -> bool {
        self.max_violation(x) <= tol
    }
}

/// `conv(vertices) + cone(rays)`, or `cone(rays)` when `conic`.
#[derive(Clone, Debug, PartialEq)]
pub struct VRep<T> {
    pub vertices: Vec<Vec<T>>,
    pub rays: Vec<Vec<T>>,
    pub conic: bool,
    dim: usize,
}

impl<T: Real> VRep<T> {
    pub fn new(vertices: Vec<Vec<T>>, rays: Vec<Vec<T>>, dim: usize) -> Self {
        Self {
            vertices,
            rays,
            conic: false,
            dim,
        }
    }

    pub fn cone(rays: Vec<Vec<T>>, dim: usize) -> Self {
        Self {
            vertices: Vec::new(),
            rays,
            conic: true,
            dim,
        }
    }

    pub fn empty(dim: usize) -> Self {
        Self::new(Vec::new(), Vec::new(), dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        !self.conic && self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }
}

/// `x = particular + basis * y`, mapping reduced coordinates back.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineLift<T> {
    pub particular: Vec<T>,
    pub basis: Mat<T>,
}

impl<T: Real> AffineLift<T> {
    pub fn identity(dim: usize) -> Self {
        Self {
            particular: vec![T::zero(); dim],
            basis: Mat::identity(dim),
        }
    }

    pub fn reduced_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn point(&self, y: &[T]) -> Vec<T> {
        let mut x = self.basis.mul_vec(y);
        for (xi, &p) in x.iter_mut().zip(&self.particular) {
            *xi += p;
        }
        x
    }

    pub fn direction(&self, y: &[T]) -> Vec<T> {
        self.basis.mul_vec(y)
    }

    pub fn lift(&self, v: &VRep<T>) -> VRep<T> {
        let dim = self.particular.len();
        VRep {
            vertices: v.vertices.iter().map(|y| self.point(y)).collect(),
            rays: v
                .rays
                .iter()
                .map(|y| normalize(self.direction(y)))
                .collect(),
            conic: v.conic,
            dim,
        }
    }
}

/// Eliminates the equalities: returns the inequalities restricted to the
/// solution set of `E x = e`, in coordinates of its (orthonormal) null
/// space basis, and the map back to full space.
pub fn reduce_equalities<T: Real>(
    h: &HRep<T>,
) -> Result<(HRep<T>, AffineLift<T>), PolyhedronError> {
    if h.eq.rows() == 0 {
        return Ok((h.clone(), AffineLift::identity(h.dim)));
    }
    let sol = linalg::solve_affine(&h.eq, &h.eq_rhs, T::c(RANK_TOL))
        .ok_or(PolyhedronError::InconsistentEqualities)?;
    let k = sol.basis.cols();
    let ineq = if h.ineq.rows() == 0 {
        Mat::zeros(0, k)
    } else {
        h.ineq.mul_mat(&sol.basis)
    };
    let shift = if h.ineq.rows() == 0 {
        Vec::new()
    } else {
        h.ineq.mul_vec(&sol.particular)
    };
    let rhs: Vec<T> = h
        .ineq_rhs
        .iter()
        .zip(&shift)
        .map(|(&b, &s)| b - s)
        .collect();
    let reduced = HRep::from_inequalities(ineq, rhs);
    let reduced = HRep { dim: k, ..reduced };
    Ok((
        reduced,
        AffineLift {
            particular: sol.particular,
            basis: sol.basis,
        },
    ))
}

/// Generators of `h` by double description, after eliminating equalities.
pub fn dd_hrep_to_vrep<T: Real>(h: &HRep<T>) -> Result<VRep<T>, PolyhedronError> {
    dd_hrep_to_vrep_with(h, &DdOptions::default())
}

pub fn dd_hrep_to_vrep_with<T: Real>(
    h: &HRep<T>,
    opts: &DdOptions,
) -> Result<VRep<T>, PolyhedronError> {
    let conic = h.is_conic();
    let (reduced, lift) = if opts.reduce_equalities {
        reduce_equalities(h)?
    } else {
        (h.clone(), AffineLift::identity(h.dim))
    };
    let v = dd::hrep_to_vrep_inner(&reduced, conic, opts)?;
    Ok(if opts.reduce_equalities && h.eq.rows() > 0 {
        lift.lift(&v)
    } else {
        v
    })
}

/// Facet description of `conv(vertices) + cone(rays)` by double
/// description on the dual cone.
pub fn vrep_to_hrep<T: Real>(v: &VRep<T>) -> Result<HRep<T>, PolyhedronError> {
    dd::vrep_to_hrep_inner(v, &DdOptions::default())
}

pub fn vrep_to_hrep_with<T: Real>(
    v: &VRep<T>,
    opts: &DdOptions,
) -> Result<HRep<T>, PolyhedronError> {
    dd::vrep_to_hrep_inner(v, opts)
}

pub(crate) fn normalize<T: Real>(mut v: Vec<T>) -> Vec<T> {
    let n = linalg::norm(&v);
    if n > T::zero() {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    v
}

/// True when the two point sets coincide up to permutation within `tol`
/// (max-norm).
pub fn same_point_sets<T: Real>(a: &[Vec<T>], b: &[Vec<T>], tol: T) -> bool {
    let close = |p: &Vec<T>, q: &Vec<T>| p.iter().zip(q).all(|(&x, &y)| (x - y).abs() <= tol);
    a.iter().all(|p| b.iter().any(|q| close(p, q)))
        && b.iter().all(|q| a.iter().any(|p| close(p, q)))
}

/// Same as [`same_point_sets`] after normalizing every vector.
pub fn same_direction_sets<T: Real>(a: &[Vec<T>], b: &[Vec<T>], tol: T) -> bool {
    let na: Vec<Vec<T>> = a.iter().cloned().map(normalize).collect();
    let nb: Vec<Vec<T>> = b.iter().cloned().map(normalize).collect();
    same_point_sets(&na, &nb, tol)
}
