//! n-moment points: the ZMP extended with the moment along `n` as a third
//! coordinate, and the corresponding 3D support volume.

use crate::contacts::{cwc_span, ContactScene};
use crate::geom::{convex_hull_2d, Cone2, RaySpan, Vec2, Vec3, VirtualPlane};
use crate::polyhedra::{self, HRep, VRep};
use crate::scalar::Real;

use super::{AreaError, SupportShape, PRESSURE_TOL};

/// `M = O + (n x tau_O + (n . tau_O) n) / (n . f)`.
pub fn nmp_point<T: Real>(
    f: Vec3<T>,
    tau: Vec3<T>,
    o: Vec3<T>,
    n: Vec3<T>,
) -> Result<Vec3<T>, AreaError> {
    let p = n.dot(f);
    if p.abs() < T::c(PRESSURE_TOL) {
        return Err(AreaError::ZmpSingularity(p.to_f64_lossy()));
    }
    Ok(o + (n.cross(tau) + n * n.dot(tau)) / p)
}

/// Moment about `o` recovered from the n-MP `m` and the pressure `n . f`:
/// `tau_O = OM x (n.f) n + (n . OM)(n.f) n`.
pub fn screw_moment<T: Real>(m: Vec3<T>, o: Vec3<T>, n: Vec3<T>, pressure: T) -> Vec3<T> {
    let om = m - o;
    om.cross(n * pressure) + n * (n.dot(om) * pressure)
}

#[derive(Clone, Debug, PartialEq)]
pub enum NmpShape<T> {
    /// Convex hull of the n-MPs, with its facets.
    Hull {
        vrep: VRep<T>,
        hrep: HRep<T>,
    },
    /// `P+ + cone(D)` and `P- + cone(-D)`, as generator sets.
    TwoCones {
        plus: VRep<T>,
        minus: VRep<T>,
    },
    WholeSpace,
}

/// Support volume of n-moment points on a virtual plane.
#[derive(Clone, Debug, PartialEq)]
pub struct NmpVolume<T> {
    pub plane: VirtualPlane<T>,
    /// One n-MP per wrench generator, with its virtual pressure.
    pub vertices: Vec<(Vec3<T>, T)>,
    pub shape: NmpShape<T>,
}

fn to_vec<T: Real>(p: Vec3<T>) -> Vec<T> {
    vec![p.x, p.y, p.z]
}

/// Extreme points of a finite 3D point set.
fn extreme_points<T: Real>(pts: &[Vec3<T>]) -> Result<(VRep<T>, HRep<T>), AreaError> {
    let v = VRep::new(pts.iter().map(|&p| to_vec(p)).collect(), Vec::new(), 3);
    let h = polyhedra::vrep_to_hrep(&v)?;
    let ext = polyhedra::dd_hrep_to_vrep(&h)?;
    Ok((ext, h))
}

pub fn nmp_support_volume<T: Real>(
    scene: &ContactScene<T>,
    plane: &VirtualPlane<T>,
) -> Result<NmpVolume<T>, AreaError> {
    let o = plane.origin();
    let n = plane.normal();
    let gens = cwc_span(scene, o);
    let vertices: Vec<(Vec3<T>, T)> = gens
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            nmp_point(g.force, g.moment, o, n)
                .map(|m| (m, n.dot(g.force)))
                .map_err(|_| AreaError::NormalDegenerate { index: i })
        })
        .collect::<Result<_, _>>()?;

    let plus: Vec<Vec3<T>> = vertices
        .iter()
        .filter(|v| v.1 > T::zero())
        .map(|v| v.0)
        .collect();
    let minus: Vec<Vec3<T>> = vertices
        .iter()
        .filter(|v| v.1 < T::zero())
        .map(|v| v.0)
        .collect();
    let shape = if plus.is_empty() || minus.is_empty() {
        let pts = if minus.is_empty() { &plus } else { &minus };
        let (vrep, hrep) = extreme_points(pts)?;
        NmpShape::Hull { vrep, hrep }
    } else {
        let (pp, _) = extreme_points(&plus)?;
        let (pm, _) = extreme_points(&minus)?;
        let diffs: Vec<Vec3<T>> = pp
            .vertices
            .iter()
            .flat_map(|a| {
                pm.vertices
                    .iter()
                    .map(move |b| Vec3::from_slice(a) - Vec3::from_slice(b))
            })
            .collect();
        let (d, dh) = extreme_points(&diffs)?;
        // 0 strictly inside D: the cones fill space.
        let interior = dh.eq.rows() == 0 && dh.ineq_rhs.iter().all(|&b| b > T::c(1e-9));
        if interior {
            NmpShape::WholeSpace
        } else {
            let neg: Vec<Vec<T>> = d
                .vertices
                .iter()
                .map(|r| r.iter().map(|&x| -x).collect())
                .collect();
            NmpShape::TwoCones {
                plus: VRep::new(pp.vertices, d.vertices.clone(), 3),
                minus: VRep::new(pm.vertices, neg, 3),
            }
        }
    };
    Ok(NmpVolume {
        plane: *plane,
        vertices,
        shape,
    })
}

impl<T: Real> NmpVolume<T> {
    /// Projection along `n` onto the virtual plane.
    pub fn project(&self) -> SupportShape<T> {
        let proj = |p: &[T]| self.plane.to_plane(Vec3::from_slice(p));
        let cone = |v: &VRep<T>| {
            let apex: Vec<Vec2<T>> = v.vertices.iter().map(|p| proj(p)).collect();
            let rays: Vec<Vec2<T>> = v.rays.iter().map(|r| proj(r)).collect();
            Cone2::new(convex_hull_2d(&apex), &rays)
        };
        match &self.shape {
            NmpShape::Hull { vrep, .. } => {
                let pts: Vec<Vec2<T>> = vrep.vertices.iter().map(|p| proj(p)).collect();
                SupportShape::Polygon(convex_hull_2d(&pts))
            }
            NmpShape::TwoCones { plus, minus } => {
                let (cp, cm) = (cone(plus), cone(minus));
                if cp.span() == RaySpan::WholePlane {
                    SupportShape::WholePlane
                } else {
                    SupportShape::TwoCones {
                        plus: cp,
                        minus: cm,
                        touching: false,
                    }
                }
            }
            NmpShape::WholeSpace => SupportShape::WholePlane,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contacts::{Contact, ContactPoint};
    use crate::support_areas::{area_vertices, full_support_area};

    fn v(x: f64, y: f64, z: f64) -> Vec3<f64> {
        Vec3::new(x, y, z)
    }

    #[test]
    fn screw_roundtrip() {
        let n = v(0.0, 0.0, 1.0);
        let o = v(0.3, -0.2, 0.5);
        let f = v(1.0, -2.0, 30.0);
        let tau = v(4.0, 0.5, -2.5);
        let m = nmp_point(f, tau, o, n).unwrap();
        let back = screw_moment(m, o, n, n.dot(f));
        assert!((back - tau).norm() < 1e-12);
    }

    #[test]
    fn projection_recovers_area_vertices() {
        let c1 = ContactPoint::with_normal(v(0.0, 0.1, 0.0), v(0.0, 0.0, 1.0), 0.5).unwrap();
        let c2 = ContactPoint::with_normal(v(0.4, -0.1, 0.2), v(-0.3, 0.0, 1.0), 0.5).unwrap();
        let scene = ContactScene::new(
            vec![Contact::Point(c1), Contact::Point(c2)],
            30.0,
            v(0.2, 0.0, 0.8),
        )
        .unwrap();
        let plane = VirtualPlane::horizontal(0.1);
        let vol = nmp_support_volume(&scene, &plane).unwrap();
        let zs = area_vertices(&cwc_span(&scene, plane.origin()), &plane).unwrap();
        for ((m, _), z) in vol.vertices.iter().zip(&zs) {
            assert!((plane.to_plane(*m) - z.point).norm() < 1e-12);
        }
        let full = full_support_area(&scene, &plane).unwrap();
        let proj = vol.project();
        assert!(proj.polygon().unwrap().hausdorff(full.polygon().unwrap()) < 1e-9);
    }
}
