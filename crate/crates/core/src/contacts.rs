//! Contact scenes: contact points and surfaces, linearized friction cones,
//! the span form of the contact wrench cone and the grasp matrix.

use thiserror::Error;

use crate::geom::{plane_basis, Mat3, UnitVec3, Vec3};
use crate::linalg::Mat;
use crate::scalar::Real;

/// Tolerance on the orthonormality of contact frames.
pub const FRAME_TOL: f64 = 1e-9;
/// Slack allowed by [`coulomb_check`].
pub const COULOMB_TOL: f64 = 1e-9;
pub const DEFAULT_GRAVITY: [f64; 3] = [0.0, 0.0, -9.81];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContactError {
    #[error("friction coefficient must be positive, got {0}")]
    NonPositiveFriction(f64),
    #[error("surface half-lengths must be positive, got ({0}, {1})")]
    NonPositiveHalfLength(f64, f64),
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("scene has no contacts")]
    NoContacts,
    #[error("contact frame is not a right-handed orthonormal basis")]
    InvalidFrame,
    #[error("friction pyramid needs an even number of sides >= 4, got {0}")]
    InvalidSides(usize),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

/// A point of contact with its frame `(t, b, n)`; `n` points out of the
/// environment, into the robot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactPoint<T> {
    pub position: Vec3<T>,
    pub t: UnitVec3<T>,
    pub b: UnitVec3<T>,
    pub n: UnitVec3<T>,
    pub friction: T,
}

fn check_frame<T: Real>(r: &Mat3<T>) -> Result<(), ContactError> {
    let tol = T::c(FRAME_TOL);
    let c = [r.column(0), r.column(1), r.column(2)];
    for i in 0..3 {
        if !c[i].is_finite() {
            return Err(ContactError::NonFinite("rotation"));
        }
        for j in 0..3 {
            let expected = if i == j { T::one() } else { T::zero() };
            if (c[i].dot(c[j]) - expected).abs() > tol {
                return Err(ContactError::InvalidFrame);
            }
        }
    }
    if (c[0].cross(c[1]) - c[2]).max_abs() > tol {
        return Err(ContactError::InvalidFrame);
    }
    Ok(())
}

fn check_friction<T: Real>(mu: T) -> Result<(), ContactError> {
    if !mu.is_finite() {
        return Err(ContactError::NonFinite("friction"));
    }
    if mu <= T::zero() {
        return Err(ContactError::NonPositiveFriction(mu.to_f64_lossy()));
    }
    Ok(())
}

impl<T: Real> ContactPoint<T> {
    /// Frame taken from the columns of `rotation` (`t`, `b`, `n`).
    pub fn new(position: Vec3<T>, rotation: &Mat3<T>, friction: T) -> Result<Self, ContactError> {
        check_friction(friction)?;
        check_frame(rotation)?;
        if !position.is_finite() {
            return Err(ContactError::NonFinite("position"));
        }
        Ok(Self {
            position,
            t: UnitVec3::new_unchecked(rotation.column(0)),
            b: UnitVec3::new_unchecked(rotation.column(1)),
            n: UnitVec3::new_unchecked(rotation.column(2)),
            friction,
        })
    }

    /// Frame completed from the normal alone.
    pub fn with_normal(
        position: Vec3<T>,
        normal: Vec3<T>,
        friction: T,
    ) -> Result<Self, ContactError> {
        let n = UnitVec3::new(normal).ok_or(ContactError::InvalidFrame)?;
        let (t, b) = plane_basis(n);
        Self::new(
            position,
            &Mat3::from_columns(t.get(), b.get(), n.get()),
            friction,
        )
    }

    pub fn rotation(&self) -> Mat3<T> {
        Mat3::from_columns(self.t.get(), self.b.get(), self.n.get())
    }
}

/// Rectangular contact area centred at `center`, with its frame given by
/// `rotation` (normal = third column) and half-lengths along `t` and `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactSurface<T> {
    pub center: Vec3<T>,
    pub rotation: Mat3<T>,
    pub half_lengths: (T, T),
    pub friction: T,
}

impl<T: Real> ContactSurface<T> {
    pub fn new(
        center: Vec3<T>,
        rotation: Mat3<T>,
        half_lengths: (T, T),
        friction: T,
    ) -> Result<Self, ContactError> {
        check_friction(friction)?;
        check_frame(&rotation)?;
        let (x, y) = half_lengths;
        if !(x > T::zero() && y > T::zero()) {
            return Err(ContactError::NonPositiveHalfLength(
                x.to_f64_lossy(),
                y.to_f64_lossy(),
            ));
        }
        if !center.is_finite() {
            return Err(ContactError::NonFinite("position"));
        }
        Ok(Self {
            center,
            rotation,
            half_lengths,
            friction,
        })
    }
}

/// The four corners of the surface, each with the surface frame.
pub fn surface_to_points<T: Real>(s: &ContactSurface<T>) -> [ContactPoint<T>; 4] {
    let (x, y) = s.half_lengths;
    let corner = |sx: T, sy: T| {
        let local = Vec3::new(sx * x, sy * y, T::zero());
        ContactPoint {
            position: s.center + s.rotation.mul_vec(local),
            t: UnitVec3::new_unchecked(s.rotation.column(0)),
            b: UnitVec3::new_unchecked(s.rotation.column(1)),
            n: UnitVec3::new_unchecked(s.rotation.column(2)),
            friction: s.friction,
        }
    };
    let (o, m) = (T::one(), -T::one());
    [corner(o, o), corner(m, o), corner(m, m), corner(o, m)]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Contact<T> {
    Point(ContactPoint<T>),
    Surface(ContactSurface<T>),
}

/// Contacts plus the robot's mass, centre of mass and gravity.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactScene<T> {
    pub contacts: Vec<Contact<T>>,
    pub mass: T,
    pub com: Vec3<T>,
    pub gravity: Vec3<T>,
    pub pyramid_sides: usize,
}

impl<T: Real> ContactScene<T> {
    pub fn new(contacts: Vec<Contact<T>>, mass: T, com: Vec3<T>) -> Result<Self, ContactError> {
        if contacts.is_empty() {
            return Err(ContactError::NoContacts);
        }
        if !mass.is_finite() || !com.is_finite() {
            return Err(ContactError::NonFinite("mass or com"));
        }
        if mass <= T::zero() {
            return Err(ContactError::NonPositiveMass(mass.to_f64_lossy()));
        }
        Ok(Self {
            contacts,
            mass,
            com,
            gravity: Vec3::new(
                T::c(DEFAULT_GRAVITY[0]),
                T::c(DEFAULT_GRAVITY[1]),
                T::c(DEFAULT_GRAVITY[2]),
            ),
            pyramid_sides: 4,
        })
    }

    pub fn with_gravity(mut self, g: Vec3<T>) -> Result<Self, ContactError> {
        if !g.is_finite() {
            return Err(ContactError::NonFinite("gravity"));
        }
        self.gravity = g;
        Ok(self)
    }

    pub fn with_pyramid_sides(mut self, k: usize) -> Result<Self, ContactError> {
        check_sides(k)?;
        self.pyramid_sides = k;
        Ok(self)
    }

    /// Every contact point, surfaces expanded into their corners.
    pub fn points(&self) -> Vec<ContactPoint<T>> {
        let mut out = Vec::new();
        for c in &self.contacts {
            match c {
                Contact::Point(p) => out.push(*p),
                Contact::Surface(s) => out.extend(surface_to_points(s)),
            }
        }
        out
    }

    /// `|g|`.
    pub fn gravity_norm(&self) -> T {
        self.gravity.norm()
    }

    /// `m |g|`, the weight.
    pub fn weight(&self) -> T {
        self.mass * self.gravity_norm()
    }
}

fn check_sides(k: usize) -> Result<(), ContactError> {
    if k < 4 || k % 2 != 0 {
        return Err(ContactError::InvalidSides(k));
    }
    Ok(())
}

/// Edges of the inner four-sided friction pyramid:
/// `n ± mu/sqrt(2) t ± mu/sqrt(2) b`, in counter-clockwise order about `n`.
pub fn linearize_friction<T: Real>(c: &ContactPoint<T>) -> [Vec3<T>; 4] {
    let r = pyramid_rays(c, 4);
    [r[0], r[1], r[2], r[3]]
}

/// Edges of a `k`-sided pyramid inscribed in the friction cone:
/// `n + mu (cos a_j t + sin a_j b)` with `a_j = pi/k + 2 pi j/k`.
pub fn linearize_friction_k<T: Real>(
    c: &ContactPoint<T>,
    k: usize,
) -> Result<Vec<Vec3<T>>, ContactError> {
    check_sides(k)?;
    Ok(pyramid_rays(c, k))
}

fn pyramid_rays<T: Real>(c: &ContactPoint<T>, k: usize) -> Vec<Vec3<T>> {
    let kk = T::c(k as f64);
    (0..k)
        .map(|j| {
            let a = T::PI() / kk + T::two() * T::PI() * T::c(j as f64) / kk;
            c.n.get() + (c.t.get() * a.cos() + c.b.get() * a.sin()) * c.friction
        })
        .collect()
}

/// Rows `F` of the face description `F f <= 0` of the same pyramid (unit
/// outward normals of consecutive edge pairs).
pub fn friction_inequalities<T: Real>(
    c: &ContactPoint<T>,
    k: usize,
) -> Result<Vec<Vec3<T>>, ContactError> {
    let rays = linearize_friction_k(c, k)?;
    Ok((0..k)
        .map(|j| {
            let f = rays[(j + 1) % k].cross(rays[j]);
            f.normalized().unwrap_or(f)
        })
        .collect())
}

/// `|f - (f . n) n| <= mu (f . n)` up to [`COULOMB_TOL`] (scaled by `|f|`).
pub fn coulomb_check<T: Real>(c: &ContactPoint<T>, f: Vec3<T>) -> bool {
    let n = c.n.get();
    let fn_ = f.dot(n);
    let ft = (f - n * fn_).norm();
    ft <= c.friction * fn_ + T::c(COULOMB_TOL) * f.norm().max(T::one())
}

/// One generator of the contact wrench cone: a force and its moment about
/// the reference point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WrenchGenerator<T> {
    pub force: Vec3<T>,
    pub moment: Vec3<T>,
    /// Index into [`ContactScene::points`].
    pub source: usize,
    /// `n . force` for the plane normal last applied with
    /// [`WrenchGeneratorSet::with_pressures`]; zero until then.
    pub pressure: T,
}

/// Wrench generators about a common reference point.
#[derive(Clone, Debug, PartialEq)]
pub struct WrenchGeneratorSet<T> {
    pub reference: Vec3<T>,
    pub generators: Vec<WrenchGenerator<T>>,
}

impl<T: Real> WrenchGeneratorSet<T> {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Fills in the virtual pressure of each generator for the normal `n`.
    pub fn with_pressures(mut self, n: UnitVec3<T>) -> Self {
        for g in self.generators.iter_mut() {
            g.pressure = g.force.dot(n.get());
        }
        self
    }

    /// Generators as 6D vectors `(f, tau)`.
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.generators
            .iter()
            .map(|g| {
                vec![
                    g.force.x, g.force.y, g.force.z, g.moment.x, g.moment.y, g.moment.z,
                ]
            })
            .collect()
    }
}

/// Generators `(f_ij, (p_i - O) x f_ij)` over every contact point and
/// pyramid edge, flattened into one list.
pub fn cwc_span<T: Real>(scene: &ContactScene<T>, o: Vec3<T>) -> WrenchGeneratorSet<T> {
    let mut generators = Vec::new();
    for (i, p) in scene.points().iter().enumerate() {
        for f in pyramid_rays(p, scene.pyramid_sides) {
            generators.push(WrenchGenerator {
                force: f,
                moment: (p.position - o).cross(f),
                source: i,
                pressure: T::zero(),
            });
        }
    }
    WrenchGeneratorSet {
        reference: o,
        generators,
    }
}

/// `6 x 3N` matrix mapping stacked contact forces to the net wrench
/// `(f, tau_O)` about `o`.
pub fn grasp_matrix<T: Real>(points: &[ContactPoint<T>], o: Vec3<T>) -> Mat<T> {
    let mut g = Mat::zeros(6, 3 * points.len());
    for (i, p) in points.iter().enumerate() {
        let r = p.position - o;
        // Skew matrix of r: r x f.
        let skew = [
            [T::zero(), -r.z, r.y],
            [r.z, T::zero(), -r.x],
            [-r.y, r.x, T::zero()],
        ];
        for a in 0..3 {
            g[(a, 3 * i + a)] = T::one();
            for b in 0..3 {
                g[(3 + a, 3 * i + b)] = skew[a][b];
            }
        }
    }
    g
}
