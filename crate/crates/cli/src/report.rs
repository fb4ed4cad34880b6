//! Serializable results of the `area` command.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use zmp_core::geom::{Cone2, Polygon2, Vec2, Vec3, VirtualPlane};
use zmp_core::support_areas::SupportShape;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AreaKind {
    Full,
    Pendular,
    Static,
    Nmp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Geometric,
    Dd,
    Rayshoot,
}

impl AreaKind {
    pub fn default_algorithm(self) -> Algorithm {
        match self {
            AreaKind::Full | AreaKind::Nmp => Algorithm::Geometric,
            AreaKind::Pendular | AreaKind::Static => Algorithm::Dd,
        }
    }
}

/// A point given both in plane coordinates and in the world frame. For
/// rays both are directions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub plane: [f64; 2],
    pub world: [f64; 3],
}

impl Point {
    pub fn at(plane: &VirtualPlane<f64>, q: Vec2<f64>) -> Self {
        let w = plane.lift(q);
        Self {
            plane: [q.x, q.y],
            world: [w.x, w.y, w.z],
        }
    }

    pub fn direction(plane: &VirtualPlane<f64>, q: Vec2<f64>) -> Self {
        let w = plane.lift_dir(q);
        Self {
            plane: [q.x, q.y],
            world: [w.x, w.y, w.z],
        }
    }

    pub fn xy(&self) -> Vec2<f64> {
        Vec2::new(self.plane[0], self.plane[1])
    }
}

/// A polygon (no rays) or a polygonal cone `conv(vertices) + cone(rays)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    /// `polygon`, `cone`, `plus` or `minus`.
    pub role: String,
    pub vertices: Vec<Point>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rays: Vec<Point>,
}

impl Piece {
    fn polygon(role: &str, plane: &VirtualPlane<f64>, p: &Polygon2<f64>) -> Self {
        Self {
            role: role.to_string(),
            vertices: p.vertices().iter().map(|&q| Point::at(plane, q)).collect(),
            rays: Vec::new(),
        }
    }

    fn cone(role: &str, plane: &VirtualPlane<f64>, c: &Cone2<f64>) -> Self {
        Self {
            role: role.to_string(),
            vertices: c.apex().vertices().iter().map(|&q| Point::at(plane, q)).collect(),
            rays: c.rays().iter().map(|&r| Point::direction(plane, r)).collect(),
        }
    }

    pub fn to_cone(&self) -> Cone2<f64> {
        let apex: Vec<Vec2<f64>> = self.vertices.iter().map(Point::xy).collect();
        let rays: Vec<Vec2<f64>> = self.rays.iter().map(Point::xy).collect();
        Cone2::new(zmp_core::geom::convex_hull_2d(&apex), &rays)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneReport {
    pub normal: [f64; 3],
    pub d_z: f64,
    /// In-plane basis vectors `t` and `b` in the world frame.
    pub t: [f64; 3],
    pub b: [f64; 3],
}

fn arr(v: Vec3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

impl PlaneReport {
    pub fn new(plane: &VirtualPlane<f64>) -> Self {
        let (t, b) = plane.basis();
        Self {
            normal: arr(plane.normal()),
            d_z: plane.offset(),
            t: arr(t),
            b: arr(b),
        }
    }
}

/// One cone part of an n-MP volume, in the world frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumePart {
    pub role: String,
    pub vertices: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rays: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeReport {
    /// `hull`, `two_cones` or `whole_space`.
    pub shape: String,
    /// One n-MP per wrench generator.
    pub points: Vec<[f64; 3]>,
    pub parts: Vec<VolumePart>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreaReport {
    pub scene: String,
    pub kind: AreaKind,
    pub algorithm: Algorithm,
    /// `polygon`, `two_cones`, `cone` or `whole_plane`.
    pub shape: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub touching: Option<bool>,
    pub plane: PlaneReport,
    pub pieces: Vec<Piece>,
    /// Intersections of the friction-cone edges with the plane, one per
    /// wrench generator, and their virtual pressures.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Point>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pressures: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<VolumeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<u64>,
}

impl AreaReport {
    pub fn new(scene: &str, kind: AreaKind, algorithm: Algorithm, plane: &VirtualPlane<f64>) -> Self {
        Self {
            scene: scene.to_string(),
            kind,
            algorithm,
            shape: String::new(),
            touching: None,
            plane: PlaneReport::new(plane),
            pieces: Vec::new(),
            generators: Vec::new(),
            pressures: Vec::new(),
            volume: None,
            timing_us: None,
        }
    }

    pub fn set_shape(&mut self, plane: &VirtualPlane<f64>, shape: &SupportShape<f64>) {
        self.shape = shape.kind().to_string();
        self.pieces = match shape {
            SupportShape::Polygon(p) => vec![Piece::polygon("polygon", plane, p)],
            SupportShape::TwoCones {
                plus,
                minus,
                touching,
            } => {
                self.touching = Some(*touching);
                vec![Piece::cone("plus", plane, plus), Piece::cone("minus", plane, minus)]
            }
            SupportShape::Cone(c) => vec![Piece::cone("cone", plane, c)],
            SupportShape::WholePlane => Vec::new(),
        };
    }

    /// Polygon of a `polygon` report.
    pub fn polygon(&self) -> Option<Polygon2<f64>> {
        (self.shape == "polygon").then(|| {
            let pts: Vec<Vec2<f64>> = self.pieces[0].vertices.iter().map(Point::xy).collect();
            Polygon2::from_points(&pts)
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
