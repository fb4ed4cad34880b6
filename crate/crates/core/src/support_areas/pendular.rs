//! Areas obtained by projecting the polytope of valid contact forces under
//! extra equality constraints: the static-equilibrium polygon and the
//! pendular support area.

use crate::contacts::{friction_inequalities, grasp_matrix, ContactPoint, ContactScene};
use crate::geom::{convex_hull_2d, Cone2, Polygon2, RaySpan, Vec2, Vec3, VirtualPlane, GEOM_TOL};
use crate::linalg::{self, Mat};
use crate::polyhedra::{self, DdOptions, HRep};
use crate::scalar::Real;
use crate::solvers::{solve_lp, LpProblem, LpStatus};

use super::{AreaError, SupportArea, SupportShape, MIN_PLANE_SEPARATION};

/// `F f_all <= 0` over the stacked forces, one block per contact point.
fn friction_rows<T: Real>(points: &[ContactPoint<T>], sides: usize) -> Result<Mat<T>, AreaError> {
    let n = 3 * points.len();
    let mut rows = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for f in friction_inequalities(p, sides)? {
            let mut r = vec![T::zero(); n];
            r[3 * i] = f.x;
            r[3 * i + 1] = f.y;
            r[3 * i + 2] = f.z;
            rows.push(r);
        }
    }
    Ok(Mat::from_rows(&rows))
}

fn require_vertical<T: Real>(plane: &VirtualPlane<T>) -> Result<(), AreaError> {
    if (plane.normal() - Vec3::e_z()).max_abs() > T::c(GEOM_TOL) {
        return Err(AreaError::UnsupportedNormal);
    }
    Ok(())
}

/// Linear constraints of the pendulum mode on the stacked forces, plus the
/// data needed to map forces to ZMPs: `p_Z = p_G + s f`.
struct LpmSystem<T> {
    points: Vec<ContactPoint<T>>,
    friction: Mat<T>,
    eq: Mat<T>,
    eq_rhs: Vec<T>,
    grasp: Mat<T>,
    scale: T,
}

impl<T: Real> LpmSystem<T> {
    fn new(scene: &ContactScene<T>, plane: &VirtualPlane<T>) -> Result<Self, AreaError> {
        require_vertical(plane)?;
        let sep = plane.offset() - scene.com.z;
        if sep.abs() < T::c(MIN_PLANE_SEPARATION) {
            return Err(AreaError::DegeneratePlane(sep.to_f64_lossy()));
        }
        let points = scene.points();
        let friction = friction_rows(&points, scene.pyramid_sides)?;
        let grasp = grasp_matrix(&points, Vec3::zero());
        let mg = scene.weight();
        let g = scene.com;
        let skew = [
            [T::zero(), -g.z, g.y],
            [g.z, T::zero(), -g.x],
            [-g.y, g.x, T::zero()],
        ];
        // n . f = m g, and tau_G = tau_O - p_G x f = 0.
        let cols = grasp.cols();
        let mut eq = vec![grasp.row(2).to_vec()];
        for a in 0..3 {
            let mut r = grasp.row(3 + a).to_vec();
            for (b, sk) in skew[a].iter().enumerate() {
                linalg::axpy(-*sk, grasp.row(b), &mut r);
            }
            eq.push(r);
        }
        debug_assert!(eq.iter().all(|r| r.len() == cols));
        Ok(Self {
            points,
            friction,
            eq: Mat::from_rows(&eq),
            eq_rhs: vec![mg, T::zero(), T::zero(), T::zero()],
            grasp,
            scale: sep / mg,
        })
    }

    fn force(&self, f_all: &[T]) -> Vec3<T> {
        let f = |r: usize| linalg::dot(self.grasp.row(r), f_all);
        Vec3::new(f(0), f(1), f(2))
    }

    fn zmp(&self, com: Vec3<T>, f_all: &[T]) -> Vec2<T> {
        let f = self.force(f_all);
        Vec2::new(com.x + self.scale * f.x, com.y + self.scale * f.y)
    }

    fn hrep(&self) -> HRep<T> {
        let m = self.friction.rows();
        HRep::from_inequalities(self.friction.clone(), vec![T::zero(); m])
            .with_equalities(self.eq.clone(), self.eq_rhs.clone())
    }

    fn lp(&self, c: Vec<T>) -> LpProblem<T> {
        let mut lp = LpProblem::new(c);
        for i in 0..self.friction.rows() {
            lp.add_le(self.friction.row(i).to_vec(), T::zero());
        }
        for i in 0..self.eq.rows() {
            lp.add_eq(self.eq.row(i).to_vec(), self.eq_rhs[i]);
        }
        lp
    }
}

/// Pendular support area by double description of the valid-force
/// polytope. Requires a horizontal plane.
pub fn pendular_support_area_dd<T: Real>(
    scene: &ContactScene<T>,
    plane: &VirtualPlane<T>,
) -> Result<SupportArea<T>, AreaError> {
    pendular_support_area_dd_with(scene, plane, &DdOptions::default())
}

/// [`pendular_support_area_dd`] with explicit work limits.
pub fn pendular_support_area_dd_with<T: Real>(
    scene: &ContactScene<T>,
    plane: &VirtualPlane<T>,
    opts: &DdOptions,
) -> Result<SupportArea<T>, AreaError> {
    let sys = LpmSystem::new(scene, plane)?;
    let v = polyhedra::dd_hrep_to_vrep_with(&sys.hrep(), opts)?;
    if v.is_empty() {
        return Err(AreaError::EmptyArea);
    }
    let pts: Vec<Vec2<T>> = v.vertices.iter().map(|f| sys.zmp(scene.com, f)).collect();
    let tol = T::c(1e-9);
    let rays: Vec<Vec2<T>> = v
        .rays
        .iter()
        .filter_map(|r| {
            let f = sys.force(r);
            let d = Vec2::new(sys.scale * f.x, sys.scale * f.y);
            (d.norm() > tol * (T::one() + sys.scale.abs())).then_some(d)
        })
        .collect();
    let hull = convex_hull_2d(&pts);
    let shape = if rays.is_empty() {
        SupportShape::Polygon(hull)
    } else {
        let cone = Cone2::new(hull, &rays);
        if cone.span() == RaySpan::WholePlane {
            SupportShape::WholePlane
        } else {
            SupportShape::Cone(cone)
        }
    };
    Ok(SupportArea {
        plane: *plane,
        shape,
    })
}

/// Stacked forces realizing a ZMP under the pendulum constraints.
#[derive(Clone, Debug, PartialEq)]
pub enum LpmFeasibility<T> {
    /// One force per contact point, in [`ContactScene::points`] order.
    Feasible(Vec<Vec3<T>>),
    Infeasible,
}

impl<T> LpmFeasibility<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpmFeasibility::Feasible(_))
    }
}

/// Whether `z` (plane coordinates) is a ZMP achievable by valid contact
/// forces under the pendulum constraints.
pub fn zmp_lpm_feasible<T: Real>(
    scene: &ContactScene<T>,
    plane: &VirtualPlane<T>,
    z: Vec2<T>,
) -> Result<LpmFeasibility<T>, AreaError> {
    let sys = LpmSystem::new(scene, plane)?;
    let n = sys.grasp.cols();
    let mut lp = sys.lp(vec![T::zero(); n]);
    // s f_x = z_x - G_x, s f_y = z_y - G_y.
    let rx: Vec<T> = sys.grasp.row(0).iter().map(|&v| v * sys.scale).collect();
    let ry: Vec<T> = sys.grasp.row(1).iter().map(|&v| v * sys.scale).collect();
    lp.add_eq(rx, z.x - scene.com.x);
    lp.add_eq(ry, z.y - scene.com.y);
    Ok(match solve_lp(&lp)? {
        LpStatus::Optimal { x, .. } => LpmFeasibility::Feasible(
            (0..sys.points.len())
                .map(|i| Vec3::new(x[3 * i], x[3 * i + 1], x[3 * i + 2]))
                .collect(),
        ),
        _ => LpmFeasibility::Infeasible,
    })
}

/// Parameters of the ray-shooting projection.
#[derive(Clone, Debug)]
pub struct RayShootOptions {
    pub initial_directions: usize,
    /// Edges are split while the support point lies farther than this
    /// beyond them (metres).
    pub tolerance: f64,
    pub max_depth: usize,
}

impl Default for RayShootOptions {
    fn default() -> Self {
        Self {
            initial_directions: 8,
            tolerance: 1e-4,
            max_depth: 12,
        }
    }
}

/// Pendular support area by support-function evaluation: one LP per
/// direction, starting from evenly spaced directions and refining edges
/// recursively. Fails on unbounded areas.
pub fn pendular_support_area_rayshoot<T: Real>(
    scene: &ContactScene<T>,
    plane: &VirtualPlane<T>,
    opts: &RayShootOptions,
) -> Result<Polygon2<T>, AreaError> {
    let sys = LpmSystem::new(scene, plane)?;
    let support = |u: Vec2<T>| -> Result<Vec2<T>, AreaError> {
        let c: Vec<T> = sys
            .grasp
            .row(0)
            .iter()
            .zip(sys.grasp.row(1))
            .map(|(&gx, &gy)| -sys.scale * (u.x * gx + u.y * gy))
            .collect();
        match solve_lp(&sys.lp(c))? {
            LpStatus::Optimal { x, .. } => Ok(sys.zmp(scene.com, &x)),
            LpStatus::Infeasible => Err(AreaError::EmptyArea),
            LpStatus::Unbounded => Err(AreaError::UnboundedDirection(
                u.x.to_f64_lossy(),
                u.y.to_f64_lossy(),
            )),
        }
    };

    let k = opts.initial_directions.max(3);
    let mut pts = Vec::with_capacity(k);
    for i in 0..k {
        let a = T::two() * T::PI() * T::c(i as f64) / T::c(k as f64);
        pts.push(support(Vec2::new(a.cos(), a.sin()))?);
    }
    let initial = convex_hull_2d(&pts);
    let ring = initial.vertices().to_vec();
    let tol = T::c(opts.tolerance);
    let mut out = ring.clone();
    if ring.len() >= 2 {
        for i in 0..ring.len() {
            let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
            refine(&support, a, b, 0, opts.max_depth, tol, &mut out)?;
        }
    }
    Ok(convex_hull_2d(&out))
}

fn refine<T: Real>(
    support: &impl Fn(Vec2<T>) -> Result<Vec2<T>, AreaError>,
    a: Vec2<T>,
    b: Vec2<T>,
    depth: usize,
    max_depth: usize,
    tol: T,
    out: &mut Vec<Vec2<T>>,
) -> Result<(), AreaError> {
    if depth >= max_depth {
        return Ok(());
    }
    let e = b - a;
    let Some(u) = Vec2::new(e.y, -e.x).normalized() else {
        return Ok(());
    };
    let z = support(u)?;
    if u.dot(z - a) > tol {
        out.push(z);
        refine(support, a, z, depth + 1, max_depth, tol, out)?;
        refine(support, z, b, depth + 1, max_depth, tol, out)?;
    }
    Ok(())
}

/// Horizontal COM positions for which static equilibrium is possible.
/// Gravity must be vertical.
pub fn static_equilibrium_polygon<T: Real>(
    scene: &ContactScene<T>,
) -> Result<Polygon2<T>, AreaError> {
    let g = scene.gravity;
    if g.x.abs() > T::c(GEOM_TOL) * g.norm()
        || g.y.abs() > T::c(GEOM_TOL) * g.norm()
        || !(g.z < T::zero())
    {
        return Err(AreaError::UnsupportedNormal);
    }
    let points = scene.points();
    let friction = friction_rows(&points, scene.pyramid_sides)?;
    let grasp = grasp_matrix(&points, Vec3::zero());
    let m = scene.mass;
    // f = -m g, n . tau_O = 0.
    let eq = Mat::from_rows(&[
        grasp.row(0).to_vec(),
        grasp.row(1).to_vec(),
        grasp.row(2).to_vec(),
        grasp.row(5).to_vec(),
    ]);
    let rhs = vec![-m * g.x, -m * g.y, -m * g.z, T::zero()];
    let rows = friction.rows();
    let h = HRep::from_inequalities(friction, vec![T::zero(); rows]).with_equalities(eq, rhs);
    let v = polyhedra::dd_hrep_to_vrep(&h)?;
    if v.is_empty() {
        return Err(AreaError::EmptyPolygon);
    }
    let mg = scene.weight();
    // p_G = (n / mg) x tau_O + z_G n, horizontal part (-tau_y, tau_x) / mg.
    let map = |w: &[T]| {
        let tx = linalg::dot(grasp.row(3), w);
        let ty = linalg::dot(grasp.row(4), w);
        Vec2::new(-ty / mg, tx / mg)
    };
    for r in &v.rays {
        let d = map(r);
        if d.norm() > T::c(1e-9) {
            return Err(AreaError::UnboundedDirection(
                d.x.to_f64_lossy(),
                d.y.to_f64_lossy(),
            ));
        }
    }
    let pts: Vec<Vec2<T>> = v.vertices.iter().map(|w| map(w)).collect();
    Ok(convex_hull_2d(&pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contacts::{Contact, ContactSurface};
    use crate::geom::Mat3;

    fn v(x: f64, y: f64, z: f64) -> Vec3<f64> {
        Vec3::new(x, y, z)
    }

    fn single_point(mu: f64, com: Vec3<f64>) -> ContactScene<f64> {
        let c = ContactPoint::with_normal(v(0.0, 0.0, 0.0), v(0.0, 0.0, 1.0), mu).unwrap();
        ContactScene::new(vec![Contact::Point(c)], 10.0, com).unwrap()
    }

    #[test]
    fn static_polygon_of_single_surface_is_rectangle() {
        let s = ContactSurface::new(v(0.2, -0.1, 0.0), Mat3::identity(), (0.1, 0.05), 0.6).unwrap();
        let scene = ContactScene::new(vec![Contact::Surface(s)], 40.0, v(0.2, -0.1, 0.8)).unwrap();
        let poly = static_equilibrium_polygon(&scene).unwrap();
        let expected = convex_hull_2d(&[
            Vec2::new(0.3, -0.05),
            Vec2::new(0.1, -0.05),
            Vec2::new(0.1, -0.15),
            Vec2::new(0.3, -0.15),
        ]);
        assert!(poly.hausdorff(&expected) < 1e-9, "{poly:?}");
    }

    #[test]
    fn point_contact_area_contains_com_projection() {
        let scene = single_point(0.5, v(0.0, 0.0, 0.8));
        let plane = VirtualPlane::horizontal(1.2);
        let area = pendular_support_area_dd(&scene, &plane).unwrap();
        assert!(area.contains(Vec2::new(0.0, 0.0), 1e-9));
        assert!(zmp_lpm_feasible(&scene, &plane, Vec2::new(0.0, 0.0))
            .unwrap()
            .is_feasible());
    }

    #[test]
    fn point_contact_below_com_collapses_to_contact() {
        // With a single point contact and tau_G = 0 the force is along GC,
        // so the ZMP on the contact plane is the contact point.
        let scene = single_point(0.5, v(0.1, 0.0, 0.8));
        let plane = VirtualPlane::horizontal(0.0);
        let area = pendular_support_area_dd(&scene, &plane).unwrap();
        let p = area.polygon().unwrap();
        assert!(p.vertices().iter().all(|q| q.norm() < 1e-9), "{p:?}");
    }

    #[test]
    fn rayshoot_matches_dd_on_rectangle_foot() {
        let s = ContactSurface::new(v(0.0, 0.0, 0.0), Mat3::identity(), (0.12, 0.06), 0.5).unwrap();
        let scene = ContactScene::new(vec![Contact::Surface(s)], 40.0, v(0.02, 0.01, 0.8)).unwrap();
        let plane = VirtualPlane::horizontal(0.0);
        let dd = pendular_support_area_dd(&scene, &plane).unwrap();
        let rs =
            pendular_support_area_rayshoot(&scene, &plane, &RayShootOptions::default()).unwrap();
        assert!(dd.polygon().unwrap().hausdorff(&rs) < 1e-3);
    }

    #[test]
    fn rejects_tilted_and_degenerate_planes() {
        let scene = single_point(0.5, v(0.0, 0.0, 0.8));
        let tilted = VirtualPlane::new(crate::geom::UnitVec3::new(v(0.1, 0.0, 1.0)).unwrap(), 0.0);
        assert_eq!(
            pendular_support_area_dd(&scene, &tilted).unwrap_err(),
            AreaError::UnsupportedNormal
        );
        assert!(matches!(
            pendular_support_area_dd(&scene, &VirtualPlane::horizontal(0.8)),
            Err(AreaError::DegeneratePlane(_))
        ));
    }
}
