//! ZMP support areas: the full area from friction-cone geometry, its
//! polyhedral counterpart, the static-equilibrium polygon, the pendular area
//! and the n-MP support volume.

mod nmp;
mod pendular;

pub use nmp::{nmp_point, nmp_support_volume, screw_moment, NmpShape, NmpVolume};
pub use pendular::{
    pendular_support_area_dd, pendular_support_area_dd_with, pendular_support_area_rayshoot,
    static_equilibrium_polygon, zmp_lpm_feasible, LpmFeasibility, RayShootOptions,
};

use thiserror::Error;

use crate::contacts::{cwc_span, ContactError, ContactScene, WrenchGeneratorSet};
use crate::geom::{
    convex_hull_2d, dual_cone, max_margin_direction, minkowski_difference, Cone2, Polygon2,
    RaySpan, UnitVec3, Vec2, Vec3, VirtualPlane, GEOM_TOL,
};
use crate::linalg::Mat;
use crate::polyhedra::{self, PolyhedronError, VRep};
use crate::scalar::Real;
use crate::solvers::LpError;

/// Smallest `|n . f|` accepted for a ZMP or an area vertex.
pub const PRESSURE_TOL: f64 = 1e-9;
/// Smallest `|d_Z - d_G|` accepted by the pendular constructions.
pub const MIN_PLANE_SEPARATION: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AreaError {
    #[error("resultant force is parallel to the plane (n.f = {0:e}): no ZMP")]
    ZmpSingularity(f64),
    #[error("generator {index} has zero virtual pressure for this plane normal")]
    NormalDegenerate { index: usize },
    #[error("virtual pressures have mixed signs: the area is not a polygon")]
    MixedPressures,
    #[error("no static equilibrium exists for this contact set")]
    EmptyPolygon,
    #[error("no ZMP satisfies the pendulum constraints on this plane")]
    EmptyArea,
    #[error("plane is {0:e} m from the centre of mass; the pendulum is degenerate")]
    DegeneratePlane(f64),
    #[error("only the upward vertical plane normal is supported here")]
    UnsupportedNormal,
    #[error("support function is unbounded along ({0}, {1})")]
    UnboundedDirection(f64, f64),
    #[error(transparent)]
    Contact(#[from] ContactError),
    #[error(transparent)]
    Polyhedron(#[from] PolyhedronError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Shape of a support area, in plane coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum SupportShape<T> {
    Polygon(Polygon2<T>),
    /// Union of two cones. `touching` flags the degenerate case where the
    /// positive and negative pressure polygons meet without overlapping.
    TwoCones {
        plus: Cone2<T>,
        minus: Cone2<T>,
        touching: bool,
    },
    /// A single (possibly unbounded) cone, as produced by the pendular
    /// construction when contact forces admit rays.
    Cone(Cone2<T>),
    WholePlane,
}

impl<T: Real> SupportShape<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            SupportShape::Polygon(_) => "polygon",
            SupportShape::TwoCones { .. } => "two_cones",
            SupportShape::Cone(_) => "cone",
            SupportShape::WholePlane => "whole_plane",
        }
    }

    pub fn contains(&self, p: Vec2<T>, tol: T) -> bool {
        match self {
            SupportShape::Polygon(poly) => poly.contains(p, tol),
            SupportShape::TwoCones { plus, minus, .. } => {
                plus.contains(p, tol) || minus.contains(p, tol)
            }
            SupportShape::Cone(c) => c.contains(p, tol),
            SupportShape::WholePlane => true,
        }
    }

    pub fn polygon(&self) -> Option<&Polygon2<T>> {
        match self {
            SupportShape::Polygon(p) => Some(p),
            _ => None,
        }
    }

    /// Negative inside. For cones outside points get a lower bound.
    pub fn signed_distance(&self, p: Vec2<T>) -> T {
        match self {
            SupportShape::Polygon(poly) => poly.signed_distance(p),
            SupportShape::TwoCones { plus, minus, .. } => {
                plus.signed_distance(p).min(minus.signed_distance(p))
            }
            SupportShape::Cone(c) => c.signed_distance(p),
            SupportShape::WholePlane => T::neg_infinity(),
        }
    }
}

/// A support area on its virtual plane.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportArea<T> {
    pub plane: VirtualPlane<T>,
    pub shape: SupportShape<T>,
}

impl<T: Real> SupportArea<T> {
    pub fn contains(&self, p: Vec2<T>, tol: T) -> bool {
        self.shape.contains(p, tol)
    }

    pub fn polygon(&self) -> Option<&Polygon2<T>> {
        self.shape.polygon()
    }

    /// Polygon vertices lifted to world coordinates.
    pub fn world_vertices(&self) -> Vec<Vec3<T>> {
        self.polygon()
            .map(|p| p.vertices().iter().map(|&q| self.plane.lift(q)).collect())
            .unwrap_or_default()
    }
}

/// Intersection of one friction-cone edge with the virtual plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaVertex<T> {
    pub point: Vec2<T>,
    pub world: Vec3<T>,
    pub pressure: T,
    pub generator: usize,
}

/// ZMP on `plane` of the wrench `(f, tau_O)` taken about the world origin.
pub fn zmp_from_wrench<T: Real>(
    f: Vec3<T>,
    tau: Vec3<T>,
    plane: &VirtualPlane<T>,
) -> Result<Vec2<T>, AreaError> {
    zmp_from_wrench_at(f, tau, Vec3::zero(), plane).map(|p| plane.to_plane(p))
}

/// World ZMP on `plane` of the wrench `(f, tau_O)` taken about `o`:
/// `Z = O + (n x tau_O + (d_Z - n.O) f) / (n.f)`.
pub fn zmp_from_wrench_at<T: Real>(
    f: Vec3<T>,
    tau: Vec3<T>,
    o: Vec3<T>,
    plane: &VirtualPlane<T>,
) -> Result<Vec3<T>, AreaError> {
    let n = plane.normal();
    let p = n.dot(f);
    if p.abs() < T::c(PRESSURE_TOL) {
        return Err(AreaError::ZmpSingularity(p.to_f64_lossy()));
    }
    let h = plane.offset() - n.dot(o);
    Ok(o + (n.cross(tau) + f * h) / p)
}

/// One vertex per generator, with its virtual pressure.
pub fn area_vertices<T: Real>(
    gens: &WrenchGeneratorSet<T>,
    plane: &VirtualPlane<T>,
) -> Result<Vec<AreaVertex<T>>, AreaError> {
    gens.generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let world = zmp_from_wrench_at(g.force, g.moment, gens.reference, plane)
                .map_err(|_| AreaError::NormalDegenerate { index: i })?;
            Ok(AreaVertex {
                point: plane.to_plane(world),
                world,
                pressure: plane.normal().dot(g.force),
                generator: i,
            })
        })
        .collect()
}

/// Builds the support shape from signed vertices: a polygon when all
/// pressures agree, otherwise two cones or the whole plane.
pub(crate) fn shape_from_signed_points<T: Real>(points: &[(Vec2<T>, T)]) -> SupportShape<T> {
    let plus: Vec<Vec2<T>> = points
        .iter()
        .filter(|p| p.1 > T::zero())
        .map(|p| p.0)
        .collect();
    let minus: Vec<Vec2<T>> = points
        .iter()
        .filter(|p| p.1 < T::zero())
        .map(|p| p.0)
        .collect();
    if minus.is_empty() {
        return SupportShape::Polygon(convex_hull_2d(&plus));
    }
    if plus.is_empty() {
        return SupportShape::Polygon(convex_hull_2d(&minus));
    }
    let pp = convex_hull_2d(&plus);
    let pm = convex_hull_2d(&minus);
    let d = minkowski_difference(&pp, &pm);
    let rays: Vec<Vec2<T>> = d.vertices().to_vec();
    let neg: Vec<Vec2<T>> = rays.iter().map(|&r| -r).collect();
    let c_plus = Cone2::new(pp, &rays);
    let c_minus = Cone2::new(pm, &neg);
    if c_plus.span() == RaySpan::WholePlane {
        return SupportShape::WholePlane;
    }
    let tol = T::c(GEOM_TOL);
    let touching = d.distance(Vec2::zero()) <= tol;
    SupportShape::TwoCones {
        plus: c_plus,
        minus: c_minus,
        touching,
    }
}

/// Full ZMP support area of the scene on `plane`.
pub fn full_support_area<T: Real>(
    scene: &ContactScene<T>,
    plane: &VirtualPlane<T>,
) -> Result<SupportArea<T>, AreaError> {
    full_support_area_at(scene, plane, plane.origin())
}

/// Same as [`full_support_area`] with moments taken about `o`.
pub fn full_support_area_at<T: Real>(
    scene: &ContactScene<T>,
    plane: &VirtualPlane<T>,
    o: Vec3<T>,
) -> Result<SupportArea<T>, AreaError> {
    let verts = area_vertices(&cwc_span(scene, o), plane)?;
    let signed: Vec<(Vec2<T>, T)> = verts.iter().map(|v| (v.point, v.pressure)).collect();
    Ok(SupportArea {
        plane: *plane,
        shape: shape_from_signed_points(&signed),
    })
}

/// Outcome of [`choose_polygonal_normal`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormalChoice<T> {
    /// Every generator has positive pressure for this normal.
    Normal(UnitVec3<T>),
    /// The force generators positively span space: no normal works.
    ForceSpanning,
    /// The generators lie in a closed half-space but span its boundary
    /// plane, so every admissible normal leaves some pressure at zero.
    Degenerate(UnitVec3<T>),
}

/// Plane normal maximizing the smallest normalized virtual pressure, for
/// which the full area is a polygon.
pub fn choose_polygonal_normal<T: Real>(scene: &ContactScene<T>) -> NormalChoice<T> {
    let forces: Vec<Vec3<T>> = cwc_span(scene, Vec3::zero())
        .generators
        .iter()
        .map(|g| g.force)
        .collect();
    if let Some((n, _)) = max_margin_direction(&forces) {
        return NormalChoice::Normal(n);
    }
    let dual = dual_cone(&forces);
    if dual.trivial {
        return NormalChoice::ForceSpanning;
    }
    match polyhedra::dd_hrep_to_vrep(&dual.hrep) {
        Ok(v) => v
            .rays
            .iter()
            .find_map(|r| UnitVec3::new(Vec3::from_slice(r)))
            .map(NormalChoice::Degenerate)
            .unwrap_or(NormalChoice::ForceSpanning),
        Err(_) => NormalChoice::ForceSpanning,
    }
}

/// Polygonal full area obtained the polyhedral way: facets of the 6D
/// contact wrench cone, sliced at unit pressure, enumerated and mapped
/// through the ZMP formula.
pub fn cwc_projection_area<T: Real>(
    scene: &ContactScene<T>,
    plane: &VirtualPlane<T>,
) -> Result<Polygon2<T>, AreaError> {
    let o = plane.origin();
    let gens = cwc_span(scene, o).with_pressures(plane.unit_normal());
    let sign = if gens
        .generators
        .iter()
        .all(|g| g.pressure > T::c(PRESSURE_TOL))
    {
        T::one()
    } else if gens
        .generators
        .iter()
        .all(|g| g.pressure < -T::c(PRESSURE_TOL))
    {
        -T::one()
    } else {
        return Err(AreaError::MixedPressures);
    };
    let cone = polyhedra::vrep_to_hrep(&VRep::cone(gens.to_rows(), 6))?;
    let n = plane.normal();
    let slice = Mat::from_rows(&[vec![
        sign * n.x,
        sign * n.y,
        sign * n.z,
        T::zero(),
        T::zero(),
        T::zero(),
    ]]);
    let h = cone.with_equalities(slice, vec![T::one()]);
    let v = polyhedra::dd_hrep_to_vrep(&h)?;
    let pts: Vec<Vec2<T>> = v
        .vertices
        .iter()
        .map(|w| {
            let f = Vec3::new(w[0], w[1], w[2]);
            let tau = Vec3::new(w[3], w[4], w[5]);
            zmp_from_wrench_at(f, tau, o, plane).map(|p| plane.to_plane(p))
        })
        .collect::<Result<_, _>>()?;
    Ok(convex_hull_2d(&pts))
}
