//! Zero-tilting moment point (ZMP) support areas for multi-contact
//! locomotion, linear pendulum trajectories and the polyhedral tooling
//! behind them.
//!
//! Every numeric routine is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

pub mod contacts;
pub mod geom;
pub mod linalg;
pub mod pendulum;
pub mod polyhedra;
pub mod scalar;
pub mod scenes;
pub mod solvers;
pub mod support_areas;

pub use scalar::Real;

pub type Vec2 = geom::Vec2<f64>;
pub type Vec3 = geom::Vec3<f64>;
pub type UnitVec3 = geom::UnitVec3<f64>;
pub type Mat3 = geom::Mat3<f64>;
pub type Polygon2 = geom::Polygon2<f64>;
pub type Cone2 = geom::Cone2<f64>;
pub type VirtualPlane = geom::VirtualPlane<f64>;
pub type HRep = polyhedra::HRep<f64>;
pub type VRep = polyhedra::VRep<f64>;
