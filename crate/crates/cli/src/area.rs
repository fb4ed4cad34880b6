//! The `area` command.

use std::time::Instant;

use zmp_core::contacts::cwc_span;
use zmp_core::geom::VirtualPlane;
use zmp_core::support_areas::{
    area_vertices, cwc_projection_area, full_support_area, nmp_support_volume,
    pendular_support_area_dd, pendular_support_area_rayshoot, static_equilibrium_polygon,
    NmpShape, RayShootOptions, SupportShape,
};

use crate::error::CliError;
use crate::report::{Algorithm, AreaKind, AreaReport, Point, VolumePart, VolumeReport};
use crate::scene_file::LoadedScene;

fn unsupported(kind: AreaKind, algo: Algorithm) -> CliError {
    CliError::Usage(format!(
        "algorithm {algo:?} is not available for the {kind:?} area"
    ))
}

/// Computes an area report. `timing` adds the computation time in
/// microseconds, which makes the report nondeterministic.
pub fn compute_area(
    s: &LoadedScene,
    kind: AreaKind,
    algo: Option<Algorithm>,
    timing: bool,
) -> Result<AreaReport, CliError> {
    let algo = algo.unwrap_or(kind.default_algorithm());
    let plane = s.plane;
    let start = Instant::now();
    let mut r = AreaReport::new(&s.name, kind, algo, &plane);
    match (kind, algo) {
        (AreaKind::Full, Algorithm::Geometric) => {
            let area = full_support_area(&s.scene, &plane)?;
            r.set_shape(&plane, &area.shape);
            let verts = area_vertices(&cwc_span(&s.scene, plane.origin()), &plane)?;
            r.generators = verts.iter().map(|v| Point::at(&plane, v.point)).collect();
            r.pressures = verts.iter().map(|v| v.pressure).collect();
        }
        (AreaKind::Full, Algorithm::Dd) => {
            let poly = cwc_projection_area(&s.scene, &plane)?;
            r.set_shape(&plane, &SupportShape::Polygon(poly));
        }
        (AreaKind::Pendular, Algorithm::Dd) => {
            let area = pendular_support_area_dd(&s.scene, &plane)?;
            r.set_shape(&plane, &area.shape);
        }
        (AreaKind::Pendular, Algorithm::Rayshoot) => {
            let poly =
                pendular_support_area_rayshoot(&s.scene, &plane, &RayShootOptions::default())?;
            r.set_shape(&plane, &SupportShape::Polygon(poly));
        }
        (AreaKind::Static, Algorithm::Dd) => {
            // Horizontal COM positions, drawn at the COM height.
            let poly = static_equilibrium_polygon(&s.scene)?;
            let at_com = VirtualPlane::horizontal(s.scene.com.z);
            r = AreaReport::new(&s.name, kind, algo, &at_com);
            r.set_shape(&at_com, &SupportShape::Polygon(poly));
        }
        (AreaKind::Nmp, Algorithm::Geometric) => {
            let vol = nmp_support_volume(&s.scene, &plane)?;
            r.set_shape(&plane, &vol.project());
            let arr = |p: &[f64]| [p[0], p[1], p[2]];
            let part = |role: &str, v: &zmp_core::polyhedra::VRep<f64>| VolumePart {
                role: role.to_string(),
                vertices: v.vertices.iter().map(|p| arr(p)).collect(),
                rays: v.rays.iter().map(|p| arr(p)).collect(),
            };
            let (shape, parts) = match &vol.shape {
                NmpShape::Hull { vrep, .. } => ("hull", vec![part("hull", vrep)]),
                NmpShape::TwoCones { plus, minus } => {
                    ("two_cones", vec![part("plus", plus), part("minus", minus)])
                }
                NmpShape::WholeSpace => ("whole_space", Vec::new()),
            };
            r.volume = Some(VolumeReport {
                shape: shape.to_string(),
                points: vol.vertices.iter().map(|(p, _)| [p.x, p.y, p.z]).collect(),
                parts,
            });
            r.pressures = vol.vertices.iter().map(|(_, w)| *w).collect();
        }
        _ => return Err(unsupported(kind, algo)),
    }
    if timing {
        r.timing_us = Some(start.elapsed().as_micros() as u64);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene_file::bundled;

    #[test]
    fn fig2_polygon_with_positive_pressures() {
        let r = compute_area(&bundled("fig2").unwrap(), AreaKind::Full, None, false).unwrap();
        assert_eq!(r.shape, "polygon");
        assert!(!r.pressures.is_empty());
        assert!(r.pressures.iter().all(|&p| p > 0.0));
        assert_eq!(r.generators.len(), r.pressures.len());
    }

    #[test]
    fn fig4_whole_plane() {
        let r = compute_area(&bundled("fig4").unwrap(), AreaKind::Full, None, false).unwrap();
        assert_eq!(r.shape, "whole_plane");
        assert!(r.pieces.is_empty());
    }

    #[test]
    fn geometric_and_dd_agree_on_fig2() {
        let s = bundled("fig2").unwrap();
        let g = compute_area(&s, AreaKind::Full, Some(Algorithm::Geometric), false).unwrap();
        let d = compute_area(&s, AreaKind::Full, Some(Algorithm::Dd), false).unwrap();
        assert!(g.polygon().unwrap().hausdorff(&d.polygon().unwrap()) < 1e-6);
    }

    #[test]
    fn unsupported_combination_is_a_usage_error() {
        let s = bundled("bench1").unwrap();
        let e = compute_area(&s, AreaKind::Full, Some(Algorithm::Rayshoot), false).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn report_roundtrip_is_byte_identical() {
        let s = bundled("fig3").unwrap();
        for kind in [AreaKind::Full, AreaKind::Nmp] {
            let r = compute_area(&s, kind, None, true).unwrap();
            let text = r.to_json();
            let back = AreaReport::from_json(&text).unwrap();
            assert_eq!(back, r);
            assert_eq!(back.to_json(), text);
        }
    }
}
