//! Planar and spatial geometry: vectors, virtual planes with explicit bases,
//! convex polygons, polygonal cones and dual cones of force generators.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::polyhedra::{self, HRep};
use crate::scalar::Real;
use crate::solvers::{solve_lp, LpProblem, LpStatus};

/// Absolute coordinate tolerance (meters) for dedup and collinearity.
pub const GEOM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    /// Counter-clockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero()).then(|| self / n)
    }

    #[inline]
    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Real> Vec3<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn e_x() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn e_y() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn e_z() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn from_slice(s: &[T]) -> Self {
        Self::new(s[0], s[1], s[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero() && n.is_finite()).then(|| self / n)
    }

    #[inline]
    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn max_abs(self) -> T {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

macro_rules! impl_vec_ops {
    ($t:ident, $($f:ident),+) => {
        impl<T: Real> Add for $t<T> {
            type Output = Self;
            #[inline]
            fn add(self, o: Self) -> Self { Self { $($f: self.$f + o.$f),+ } }
        }
        impl<T: Real> Sub for $t<T> {
            type Output = Self;
            #[inline]
            fn sub(self, o: Self) -> Self { Self { $($f: self.$f - o.$f),+ } }
        }
        impl<T: Real> Neg for $t<T> {
            type Output = Self;
            #[inline]
            fn neg(self) -> Self { Self { $($f: -self.$f),+ } }
        }
        impl<T: Real> Mul<T> for $t<T> {
            type Output = Self;
            #[inline]
            fn mul(self, s: T) -> Self { Self { $($f: self.$f * s),+ } }
        }
        impl<T: Real> Div<T> for $t<T> {
            type Output = Self;
            #[inline]
            fn div(self, s: T) -> Self { Self { $($f: self.$f / s),+ } }
        }
        impl<T: Real> AddAssign for $t<T> {
            #[inline]
            fn add_assign(&mut self, o: Self) { $(self.$f += o.$f;)+ }
        }
        impl<T: Real> SubAssign for $t<T> {
            #[inline]
            fn sub_assign(&mut self, o: Self) { $(self.$f -= o.$f;)+ }
        }
    };
}

impl_vec_ops!(Vec2, x, y);
impl_vec_ops!(Vec3, x, y, z);

/// Unit-norm direction (norm 1 within 1e-12).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVec3<T>(Vec3<T>);

impl<T: Real> UnitVec3<T> {
    /// Normalizes `v`; `None` for zero or non-finite input.
    pub fn new(v: Vec3<T>) -> Option<Self> {
        v.normalized().map(Self)
    }

    /// Wraps `v` as-is. The caller guarantees `|v| = 1`.
    pub fn new_unchecked(v: Vec3<T>) -> Self {
        Self(v)
    }

    pub fn e_z() -> Self {
        Self(Vec3::e_z())
    }

    #[inline]
    pub fn get(self) -> Vec3<T> {
        self.0
    }
}

impl<T: Real> Neg for UnitVec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// 3x3 matrix, row-major. Used for rotations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Real> Mat3<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self {
            m: [[o, z, z], [z, o, z], [z, z, o]],
        }
    }

    pub fn from_columns(c0: Vec3<T>, c1: Vec3<T>, c2: Vec3<T>) -> Self {
        Self {
            m: [[c0.x, c1.x, c2.x], [c0.y, c1.y, c2.y], [c0.z, c1.z, c2.z]],
        }
    }

    pub fn column(&self, j: usize) -> Vec3<T> {
        Vec3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    pub fn mul_vec(&self, v: Vec3<T>) -> Vec3<T> {
        let r = |i: usize| self.m[i][0] * v.x + self.m[i][1] * v.y + self.m[i][2] * v.z;
        Vec3::new(r(0), r(1), r(2))
    }

    pub fn mul_mat(&self, o: &Self) -> Self {
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        Self { m }
    }

    /// Rotation from a unit quaternion `(w, x, y, z)`; the quaternion is
    /// normalized first.
    pub fn from_quaternion(w: T, x: T, y: T, z: T) -> Option<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !(n > T::zero()) || !n.is_finite() {
            return None;
        }
        let (w, x, y, z) = (w / n, x / n, y / n, z / n);
        let two = T::two();
        let o = T::one();
        Some(Self {
            m: [
                [
                    o - two * (y * y + z * z),
                    two * (x * y - w * z),
                    two * (x * z + w * y),
                ],
                [
                    two * (x * y + w * z),
                    o - two * (x * x + z * z),
                    two * (y * z - w * x),
                ],
                [
                    two * (x * z - w * y),
                    two * (y * z + w * x),
                    o - two * (x * x + y * y),
                ],
            ],
        })
    }

    /// Rotation of `angle` radians about `axis` (Rodrigues).
    pub fn from_axis_angle(axis: Vec3<T>, angle: T) -> Option<Self> {
        let a = axis.normalized()?;
        let h = angle * T::half();
        let s = h.sin();
        Self::from_quaternion(h.cos(), a.x * s, a.y * s, a.z * s)
    }
}

/// Orthonormal in-plane basis `(t, b)` for the normal `n`, with `(t, b, n)`
/// right-handed. `t` is built from the world axis least aligned with `n`
/// (first axis on ties), so the result is deterministic.
pub fn plane_basis<T: Real>(n: UnitVec3<T>) -> (UnitVec3<T>, UnitVec3<T>) {
    let n = n.get();
    let axes = [Vec3::e_x(), Vec3::e_y(), Vec3::e_z()];
    let mut best = 0;
    for (i, a) in axes.iter().enumerate() {
        if a.dot(n).abs() < axes[best].dot(n).abs() {
            best = i;
        }
    }
    let e = axes[best];
    let t = (e - n * e.dot(n))
        .normalized()
        .expect("axis not parallel to n");
    let b = n.cross(t);
    (UnitVec3(t), UnitVec3(b))
}

/// The plane `{p : n . p = offset}` together with a fixed in-plane basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VirtualPlane<T> {
    normal: UnitVec3<T>,
    offset: T,
    t: UnitVec3<T>,
    b: UnitVec3<T>,
}

impl<T: Real> VirtualPlane<T> {
    pub fn new(normal: UnitVec3<T>, offset: T) -> Self {
        let (t, b) = plane_basis(normal);
        Self {
            normal,
            offset,
            t,
            b,
        }
    }

    /// Horizontal plane at altitude `z`.
    pub fn horizontal(z: T) -> Self {
        Self::new(UnitVec3::e_z(), z)
    }

    #[inline]
    pub fn normal(&self) -> Vec3<T> {
        self.normal.get()
    }

    pub fn unit_normal(&self) -> UnitVec3<T> {
        self.normal
    }

    /// The plane coordinate `d_Z`.
    #[inline]
    pub fn offset(&self) -> T {
        self.offset
    }

    pub fn basis(&self) -> (Vec3<T>, Vec3<T>) {
        (self.t.get(), self.b.get())
    }

    /// Point of the plane closest to the world origin.
    pub fn origin(&self) -> Vec3<T> {
        self.normal() * self.offset
    }

    /// Same normal, another offset.
    pub fn with_offset(&self, offset: T) -> Self {
        Self { offset, ..*self }
    }

    /// Coordinate of `p` along the normal.
    #[inline]
    pub fn height_of(&self, p: Vec3<T>) -> T {
        self.normal().dot(p)
    }

    /// In-plane coordinates of `p` (the normal component is dropped).
    pub fn to_plane(&self, p: Vec3<T>) -> Vec2<T> {
        Vec2::new(self.t.get().dot(p), self.b.get().dot(p))
    }

    /// World point of the plane with in-plane coordinates `q`.
    pub fn lift(&self, q: Vec2<T>) -> Vec3<T> {
        self.origin() + self.t.get() * q.x + self.b.get() * q.y
    }

    /// World direction for an in-plane direction.
    pub fn lift_dir(&self, q: Vec2<T>) -> Vec3<T> {
        self.t.get() * q.x + self.b.get() * q.y
    }
}

/// Shape of a possibly degenerate convex polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonKind {
    Empty,
    Point,
    Segment,
    Polygon,
}

/// Convex polygon, vertices counter-clockwise, no three consecutive
/// vertices collinear. One or two vertices encode a point or segment.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon2<T> {
    vertices: Vec<Vec2<T>>,
}

impl<T: Real> Polygon2<T> {
    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
        }
    }

    /// Hull of the given points.
    pub fn from_points(points: &[Vec2<T>]) -> Self {
        convex_hull_2d(points)
    }

    pub fn vertices(&self) -> &[Vec2<T>] {
        &self.vertices
    }

    pub fn kind(&self) -> PolygonKind {
        match self.vertices.len() {
            0 => PolygonKind::Empty,
            1 => PolygonKind::Point,
            2 => PolygonKind::Segment,
            _ => PolygonKind::Polygon,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> T {
        let n = self.vertices.len();
        if n < 3 {
            return T::zero();
        }
        let s: T = (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum();
        s * T::half()
    }

    /// Area centroid (vertex mean for degenerate shapes).
    pub fn centroid(&self) -> Vec2<T> {
        let n = self.vertices.len();
        let a = self.area();
        if n < 3 || a <= T::zero() {
            let s = self.vertices.iter().fold(Vec2::zero(), |s, &v| s + v);
            return s / T::from_usize(n.max(1)).unwrap();
        }
        let mut c = Vec2::zero();
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            c += (p + q) * p.cross(q);
        }
        c / (T::c(6.0) * a)
    }

    /// Outward unit normals and offsets `(u, h)` with `u . x <= h`.
    pub fn halfplanes(&self) -> Vec<Halfplane2<T>> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        match n {
            0 | 1 => {}
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                if let Some(d) = (b - a).normalized() {
                    let u = Vec2::new(d.y, -d.x);
                    out.push(Halfplane2::new(u, u.dot(a)));
                    out.push(Halfplane2::new(-u, -u.dot(a)));
                }
            }
            _ => {
                for i in 0..n {
                    let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                    if let Some(d) = (b - a).normalized() {
                        let u = Vec2::new(d.y, -d.x);
                        out.push(Halfplane2::new(u, u.dot(a)));
                    }
                }
            }
        }
        out
    }

    /// Support function `max_{v} u . v`.
    pub fn support(&self, u: Vec2<T>) -> T {
        self.vertices
            .iter()
            .map(|v| u.dot(*v))
            .fold(T::neg_infinity(), T::max)
    }

    /// Euclidean distance from `p` to the polygon (zero inside).
    pub fn distance(&self, p: Vec2<T>) -> T {
        match self.vertices.len() {
            0 => T::infinity(),
            1 => p.dist(self.vertices[0]),
            2 => seg_dist(p, self.vertices[0], self.vertices[1]),
            n => {
                let inside = (0..n).all(|i| {
                    let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                    (b - a).cross(p - a) >= T::zero()
                });
                if inside {
                    return T::zero();
                }
                (0..n)
                    .map(|i| seg_dist(p, self.vertices[i], self.vertices[(i + 1) % n]))
                    .fold(T::infinity(), T::min)
            }
        }
    }

    /// Signed distance to the boundary: negative inside.
    pub fn signed_distance(&self, p: Vec2<T>) -> T {
        if self.vertices.len() < 3 {
            return self.distance(p);
        }
        let d = self.distance(p);
        if d > T::zero() {
            return d;
        }
        -self
            .halfplanes()
            .iter()
            .map(|h| h.offset - h.normal.dot(p))
            .fold(T::infinity(), T::min)
    }

    pub fn contains(&self, p: Vec2<T>, tol: T) -> bool {
        self.distance(p) <= tol
    }

    /// Hausdorff distance between two convex polygons.
    pub fn hausdorff(&self, other: &Self) -> T {
        let a = self
            .vertices
            .iter()
            .map(|&v| other.distance(v))
            .fold(T::zero(), T::max);
        let b = other
            .vertices
            .iter()
            .map(|&v| self.distance(v))
            .fold(T::zero(), T::max);
        a.max(b)
    }

    /// Intersection with the halfplane `u . x <= h` (Sutherland-Hodgman).
    pub fn clip(&self, hp: &Halfplane2<T>) -> Self {
        let n = self.vertices.len();
        if n == 0 {
            return self.clone();
        }
        let inside = |p: Vec2<T>| hp.normal.dot(p) <= hp.offset;
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let (pi, qi) = (inside(p), inside(q));
            if pi {
                out.push(p);
            }
            if pi != qi {
                let dp = hp.normal.dot(p) - hp.offset;
                let dq = hp.normal.dot(q) - hp.offset;
                let t = dp / (dp - dq);
                out.push(p + (q - p) * t);
            }
        }
        convex_hull_2d(&out)
    }

    /// Axis-aligned square `[-r, r]^2` around `center`.
    pub fn square(center: Vec2<T>, r: T) -> Self {
        Self {
            vertices: vec![
                center + Vec2::new(-r, -r),
                center + Vec2::new(r, -r),
                center + Vec2::new(r, r),
                center + Vec2::new(-r, r),
            ],
        }
    }
}

fn seg_dist<T: Real>(p: Vec2<T>, a: Vec2<T>, b: Vec2<T>) -> T {
    let ab = b - a;
    let l2 = ab.dot(ab);
    if l2 <= T::zero() {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / l2).max(T::zero()).min(T::one());
    p.dist(a + ab * t)
}

/// Closed halfplane `normal . x <= offset` with unit normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Halfplane2<T> {
    pub normal: Vec2<T>,
    pub offset: T,
}

impl<T: Real> Halfplane2<T> {
    pub fn new(normal: Vec2<T>, offset: T) -> Self {
        Self { normal, offset }
    }

    pub fn slack(&self, p: Vec2<T>) -> T {
        self.offset - self.normal.dot(p)
    }
}

fn lex_cmp<T: Real>(a: &Vec2<T>, b: &Vec2<T>) -> Ordering {
    a.x.partial_cmp(&b.x)
        .unwrap_or(Ordering::Equal)
        .then(a.y.partial_cmp(&b.y).unwrap_or(Ordering::Equal))
}

/// Minimal counter-clockwise convex hull (monotone chain). Points closer
/// than [`GEOM_TOL`] are merged and vertices within [`GEOM_TOL`] of the line
/// through their neighbours are dropped. One or two distinct points give a
/// point or segment; no input gives the empty polygon.
pub fn convex_hull_2d<T: Real>(points: &[Vec2<T>]) -> Polygon2<T> {
    let tol = T::c(GEOM_TOL);
    let mut pts: Vec<Vec2<T>> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(lex_cmp);
    let mut uniq: Vec<Vec2<T>> = Vec::with_capacity(pts.len());
    for p in pts {
        if !uniq.iter().rev().take(8).any(|q| q.dist(p) <= tol) {
            uniq.push(p);
        }
    }
    if uniq.len() <= 1 {
        return Polygon2 { vertices: uniq };
    }
    // Exact chain first; near-collinear vertices are removed afterwards so
    // that tolerance decisions never depend on the sweep order.
    let turns_left = |o: Vec2<T>, a: Vec2<T>, b: Vec2<T>| (a - o).cross(b - o) > T::zero();
    let mut lower: Vec<Vec2<T>> = Vec::new();
    for &p in &uniq {
        while lower.len() >= 2 && !turns_left(lower[lower.len() - 2], lower[lower.len() - 1], p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Vec2<T>> = Vec::new();
    for &p in uniq.iter().rev() {
        while upper.len() >= 2 && !turns_left(upper[upper.len() - 2], upper[upper.len() - 1], p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let mut verts = lower;
    loop {
        let n = verts.len();
        if n <= 2 {
            break;
        }
        let flat = (0..n).find(|&i| {
            let (prev, cur, next) = (verts[(i + n - 1) % n], verts[i], verts[(i + 1) % n]);
            let base = next - prev;
            let len = base.norm();
            len <= tol || (cur - prev).cross(base).abs() <= tol * len
        });
        match flat {
            Some(i) => {
                verts.remove(i);
            }
            None => break,
        }
    }
    if verts.len() == 2 && verts[0].dist(verts[1]) <= tol {
        verts.pop();
    }
    Polygon2 { vertices: verts }
}

/// `{p - q : p in P, q in Q}` as the hull of pairwise vertex differences.
pub fn minkowski_difference<T: Real>(p: &Polygon2<T>, q: &Polygon2<T>) -> Polygon2<T> {
    let diffs: Vec<Vec2<T>> = p
        .vertices()
        .iter()
        .flat_map(|&a| q.vertices().iter().map(move |&b| a - b))
        .collect();
    convex_hull_2d(&diffs)
}

/// How the ray set of a [`Cone2`] positively spans the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RaySpan {
    /// No rays: the cone is its apex polygon.
    None,
    /// A pointed cone (angle below pi), possibly a single ray.
    Pointed,
    /// A full line through the origin.
    Line,
    /// A closed half-plane.
    HalfPlane,
    /// The rays positively span the whole plane.
    WholePlane,
}

/// `apex + cone(rays)`: a convex polygon extended by a recession cone.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone2<T> {
    apex: Polygon2<T>,
    rays: Vec<Vec2<T>>,
}

impl<T: Real> Cone2<T> {
    /// Rays are normalized; zero rays are dropped and directions closer than
    /// 1e-9 rad merged.
    pub fn new(apex: Polygon2<T>, rays: &[Vec2<T>]) -> Self {
        let tol = T::c(GEOM_TOL);
        let mut uniq: Vec<Vec2<T>> = Vec::new();
        for r in rays {
            if r.norm() <= tol {
                continue;
            }
            let u = r.normalized().unwrap();
            if !uniq
                .iter()
                .any(|q| q.cross(u).abs() <= tol && q.dot(u) > T::zero())
            {
                uniq.push(u);
            }
        }
        let mut rays = uniq;
        rays.sort_by(|a, b| {
            a.y.atan2(a.x)
                .partial_cmp(&b.y.atan2(b.x))
                .unwrap_or(Ordering::Equal)
        });
        Self { apex, rays }
    }

    pub fn apex(&self) -> &Polygon2<T> {
        &self.apex
    }

    pub fn rays(&self) -> &[Vec2<T>] {
        &self.rays
    }

    fn polar_candidates(&self) -> Vec<Vec2<T>> {
        let tol = T::c(GEOM_TOL);
        let mut cands: Vec<Vec2<T>> = self.apex.halfplanes().iter().map(|h| h.normal).collect();
        for r in &self.rays {
            cands.push(r.perp());
            cands.push(-r.perp());
        }
        let mut out: Vec<Vec2<T>> = Vec::new();
        for u in cands {
            if self.rays.iter().all(|r| u.dot(*r) <= tol) && !out.iter().any(|q| q.dist(u) <= tol) {
                out.push(u);
            }
        }
        out
    }

    pub fn span(&self) -> RaySpan {
        if self.rays.is_empty() {
            return RaySpan::None;
        }
        let tol = T::c(GEOM_TOL);
        let mut polar: Vec<Vec2<T>> = Vec::new();
        for u in self.rays.iter().flat_map(|r| [r.perp(), -r.perp()]) {
            if self.rays.iter().all(|r| u.dot(*r) <= tol) && !polar.iter().any(|q| q.dist(u) <= tol)
            {
                polar.push(u);
            }
        }
        let has_opposite = |v: &[Vec2<T>]| {
            v.iter()
                .any(|a| v.iter().any(|b| a.dot(*b) < tol - T::one()))
        };
        match polar.len() {
            0 => RaySpan::WholePlane,
            1 => RaySpan::HalfPlane,
            _ if has_opposite(&self.rays) => RaySpan::Line,
            _ => RaySpan::Pointed,
        }
    }

    /// Facet description `u . x <= h`. Empty when the set is the whole
    /// plane.
    pub fn halfplanes(&self) -> Vec<Halfplane2<T>> {
        if self.apex.is_empty() {
            return Vec::new();
        }
        self.polar_candidates()
            .into_iter()
            .map(|u| Halfplane2::new(u, self.apex.support(u)))
            .collect()
    }

    pub fn is_whole_plane(&self) -> bool {
        !self.apex.is_empty() && self.span() == RaySpan::WholePlane
    }

    pub fn contains(&self, p: Vec2<T>, tol: T) -> bool {
        if self.rays.is_empty() {
            return self.apex.contains(p, tol);
        }
        self.halfplanes().iter().all(|h| h.slack(p) >= -tol)
    }

    /// Signed distance to the boundary (negative inside). Exact inside;
    /// outside it is the largest facet violation, a lower bound.
    pub fn signed_distance(&self, p: Vec2<T>) -> T {
        if self.rays.is_empty() {
            return self.apex.signed_distance(p);
        }
        let hs = self.halfplanes();
        if hs.is_empty() {
            return T::neg_infinity();
        }
        hs.iter()
            .map(|h| -h.slack(p))
            .fold(T::neg_infinity(), T::max)
    }

    /// The part of the cone inside `window`.
    pub fn clip_to(&self, window: &Polygon2<T>) -> Polygon2<T> {
        if self.rays.is_empty() {
            let mut out = window.clone();
            for h in self.apex.halfplanes() {
                out = out.clip(&h);
            }
            return out;
        }
        self.halfplanes()
            .iter()
            .fold(window.clone(), |acc, h| acc.clip(h))
    }
}

/// Result of [`dual_cone`].
#[derive(Clone, Debug)]
pub struct DualCone<T> {
    /// `{y : -f_i . y <= 0}` for every generator.
    pub hrep: HRep<T>,
    /// Direction with `min_i n . f_i / |f_i| > 0`, when one exists.
    pub witness: Option<UnitVec3<T>>,
    /// True when the dual cone is `{0}`, i.e. the generators positively
    /// span the whole space.
    pub trivial: bool,
}

/// Dual cone `{y : y . f_i >= 0 for all i}` of the generators `f_i`.
pub fn dual_cone<T: Real>(rays: &[Vec3<T>]) -> DualCone<T> {
    let rows: Vec<Vec<T>> = rays.iter().map(|r| vec![-r.x, -r.y, -r.z]).collect();
    let hrep = HRep::cone(crate::linalg::Mat::from_rows(&rows));
    let witness = max_margin_direction(rays).map(|(n, _)| n);
    let trivial = witness.is_none()
        && match polyhedra::dd_hrep_to_vrep(&hrep) {
            Ok(v) => v.rays.is_empty(),
            Err(_) => false,
        };
    DualCone {
        hrep,
        witness,
        trivial,
    }
}

/// Maximizes `min_i n . f_i / |f_i|` over the unit cube (a linear proxy for
/// the unit sphere) and returns the normalized maximizer with its margin,
/// when the margin is positive.
pub(crate) fn max_margin_direction<T: Real>(rays: &[Vec3<T>]) -> Option<(UnitVec3<T>, T)> {
    let units: Vec<Vec3<T>> = rays.iter().filter_map(|r| r.normalized()).collect();
    if units.is_empty() {
        return None;
    }
    // Variables (n_x, n_y, n_z, t); maximize t.
    let mut lp = LpProblem::new(vec![T::zero(), T::zero(), T::zero(), -T::one()]);
    for u in &units {
        lp.add_le(vec![-u.x, -u.y, -u.z, T::one()], T::zero());
    }
    for j in 0..3 {
        lp.set_bounds(j, Some(-T::one()), Some(T::one()));
    }
    lp.set_bounds(3, None, Some(T::one()));
    match solve_lp(&lp) {
        Ok(LpStatus::Optimal { x, .. }) => {
            let n = Vec3::new(x[0], x[1], x[2]);
            let n = UnitVec3::new(n)?;
            let margin = units
                .iter()
                .map(|u| u.dot(n.get()))
                .fold(T::infinity(), T::min);
            (margin > T::c(GEOM_TOL)).then_some((n, margin))
        }
        _ => None,
    }
}
