//! JSON scene files.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use zmp_core::contacts::{Contact, ContactError, ContactPoint, ContactScene, ContactSurface};
use zmp_core::geom::{Mat3, UnitVec3, Vec3, VirtualPlane};

/// Largest accepted deviation of a quaternion norm from one.
pub const QUATERNION_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed scene: {0}")]
    Json(#[from] serde_json::Error),
    #[error("contact {index}: quaternion norm {norm} is not within {QUATERNION_TOL} of 1")]
    Quaternion { index: usize, norm: f64 },
    #[error("contact {index}: surfaces need half_lengths")]
    MissingHalfLengths { index: usize },
    #[error("contact {index}: points take no half_lengths")]
    UnexpectedHalfLengths { index: usize },
    #[error("plane normal must be a nonzero finite vector")]
    PlaneNormal,
    #[error("plane offset must be finite")]
    PlaneOffset,
    #[error("contact {index}: {source}")]
    BadContact { index: usize, source: ContactError },
    #[error(transparent)]
    Contact(#[from] ContactError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContactKind {
    Point,
    Surface,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactSpec {
    #[serde(rename = "type")]
    pub kind: ContactKind,
    pub position: [f64; 3],
    /// Unit quaternion `(w, x, y, z)`; the rotated z axis is the normal.
    pub rotation: [f64; 4],
    pub friction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_lengths: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneSpec {
    pub normal: [f64; 3],
    pub d_z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub contacts: Vec<ContactSpec>,
    pub mass_kg: f64,
    pub com: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gravity: Option<[f64; 3]>,
    pub plane: PlaneSpec,
}

/// A validated scene ready for computation.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedScene {
    pub name: String,
    pub scene: ContactScene<f64>,
    pub plane: VirtualPlane<f64>,
}

fn v3(a: [f64; 3]) -> Vec3<f64> {
    Vec3::new(a[0], a[1], a[2])
}

fn rotation(index: usize, q: [f64; 4]) -> Result<Mat3<f64>, SceneError> {
    let norm = q.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > QUATERNION_TOL {
        return Err(SceneError::Quaternion { index, norm });
    }
    Mat3::from_quaternion(q[0], q[1], q[2], q[3]).ok_or(SceneError::Quaternion { index, norm })
}

impl SceneFile {
    pub fn parse(text: &str) -> Result<Self, SceneError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self, name: &str) -> Result<LoadedScene, SceneError> {
        let mut contacts = Vec::with_capacity(self.contacts.len());
        for (index, c) in self.contacts.iter().enumerate() {
            let rot = rotation(index, c.rotation)?;
            let bad = |source| SceneError::BadContact { index, source };
            let contact = match (c.kind, c.half_lengths) {
                (ContactKind::Point, None) => {
                    Contact::Point(ContactPoint::new(v3(c.position), &rot, c.friction).map_err(bad)?)
                }
                (ContactKind::Point, Some(_)) => {
                    return Err(SceneError::UnexpectedHalfLengths { index })
                }
                (ContactKind::Surface, Some([hx, hy])) => Contact::Surface(
                    ContactSurface::new(v3(c.position), rot, (hx, hy), c.friction).map_err(bad)?,
                ),
                (ContactKind::Surface, None) => {
                    return Err(SceneError::MissingHalfLengths { index })
                }
            };
            contacts.push(contact);
        }
        let mut scene = ContactScene::new(contacts, self.mass_kg, v3(self.com))?;
        if let Some(g) = self.gravity {
            scene = scene.with_gravity(v3(g))?;
        }
        let n = v3(self.plane.normal);
        let unit = n
            .is_finite()
            .then(|| UnitVec3::new(n))
            .flatten()
            .ok_or(SceneError::PlaneNormal)?;
        if !self.plane.d_z.is_finite() {
            return Err(SceneError::PlaneOffset);
        }
        Ok(LoadedScene {
            name: name.to_string(),
            scene,
            plane: VirtualPlane::new(unit, self.plane.d_z),
        })
    }
}

/// Scene files shipped with the binary.
pub const BUNDLED: [(&str, &str); 8] = [
    ("fig2", include_str!("../scenes/fig2.json")),
    ("fig3", include_str!("../scenes/fig3.json")),
    ("fig4", include_str!("../scenes/fig4.json")),
    ("fig5", include_str!("../scenes/fig5.json")),
    ("table3", include_str!("../scenes/table3.json")),
    ("bench1", include_str!("../scenes/bench1.json")),
    ("bench2", include_str!("../scenes/bench2.json")),
    ("bench3", include_str!("../scenes/bench3.json")),
];

pub fn bundled(name: &str) -> Option<LoadedScene> {
    let key = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED
        .iter()
        .find(|(n, _)| *n == key)
        .map(|(n, text)| SceneFile::parse(text).and_then(|f| f.build(n)).expect("bundled scene is valid"))
}

/// Loads `arg` from disk, falling back to a bundled scene of that name.
pub fn load(arg: &str) -> Result<LoadedScene, SceneError> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(s) = bundled(arg) {
            return Ok(s);
        }
    }
    let text = std::fs::read_to_string(path).map_err(|source| SceneError::Io {
        path: arg.to_string(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_string());
    SceneFile::parse(&text)?.build(&name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use zmp_core::scenes;

    #[test]
    fn bundled_scenes_match_builders() {
        for name in scenes::NAMES {
            let file = bundled(name).unwrap();
            let built = scenes::by_name(name).unwrap();
            assert_eq!(file.plane, built.plane, "{name}");
            let (a, b) = (file.scene.points(), built.scene.points());
            assert_eq!(a.len(), b.len());
            for (p, q) in a.iter().zip(&b) {
                assert!((p.position - q.position).max_abs() < 1e-12, "{name}");
                assert!((p.n.get() - q.n.get()).max_abs() < 1e-12, "{name}");
                assert!((p.t.get() - q.t.get()).max_abs() < 1e-12, "{name}");
                assert_eq!(p.friction, q.friction);
            }
            assert_eq!(file.scene.mass, built.scene.mass);
            assert_eq!(file.scene.com, built.scene.com);
            assert_eq!(file.scene.gravity, built.scene.gravity);
        }
    }

    fn minimal(rotation: [f64; 4]) -> String {
        format!(
            r#"{{"contacts":[{{"type":"point","position":[0,0,0],"rotation":{rotation:?},"friction":0.5}}],
               "mass_kg":10,"com":[0,0,1],"plane":{{"normal":[0,0,1],"d_z":0}}}}"#
        )
    }

    #[test]
    fn quaternions_are_checked_then_normalized() {
        let s = SceneFile::parse(&minimal([1.0 + 5e-7, 0.0, 0.0, 0.0])).unwrap();
        let loaded = s.build("q").unwrap();
        assert_eq!(loaded.scene.points()[0].n.get(), Vec3::e_z());
        let s = SceneFile::parse(&minimal([1.1, 0.0, 0.0, 0.0])).unwrap();
        assert!(matches!(s.build("q"), Err(SceneError::Quaternion { index: 0, .. })));
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(SceneFile::parse("{}"), Err(SceneError::Json(_))));
        let extra = minimal([1.0, 0.0, 0.0, 0.0]).replace("\"mass_kg\"", "\"colour\":1,\"mass_kg\"");
        assert!(SceneFile::parse(&extra).is_err());
        let surf = minimal([1.0, 0.0, 0.0, 0.0]).replace("point", "surface");
        assert!(matches!(
            SceneFile::parse(&surf).unwrap().build("s"),
            Err(SceneError::MissingHalfLengths { index: 0 })
        ));
        let mu = minimal([1.0, 0.0, 0.0, 0.0]).replace("0.5", "-0.5");
        assert!(matches!(
            SceneFile::parse(&mu).unwrap().build("s"),
            Err(SceneError::BadContact { index: 0, .. })
        ));
    }

    #[test]
    fn file_roundtrip() {
        for (_, text) in BUNDLED {
            let f = SceneFile::parse(text).unwrap();
            let again = SceneFile::parse(&serde_json::to_string(&f).unwrap()).unwrap();
            assert_eq!(f, again);
        }
    }
}
