//! Reference contact configurations and a seeded random scene generator.
//!
//! Dimensions not given by the figures they mimic (foot size, tilts, mass)
//! are arbitrary but fixed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contacts::{Contact, ContactPoint, ContactScene, ContactSurface};
use crate::geom::{Mat3, Vec3, VirtualPlane};

/// Environment variable fixing the seed of randomized scenes.
pub const SEED_ENV: &str = "ZMP_AREAS_SEED";
pub const DEFAULT_SEED: u64 = 42;

pub const FOOT_HALF_LENGTHS: (f64, f64) = (0.11, 0.065);
pub const HAND_HALF_LENGTHS: (f64, f64) = (0.04, 0.04);
pub const MASS: f64 = 39.0;
pub const FRICTION: f64 = 0.5;

/// A scene together with the plane its figure uses.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedScene {
    pub name: &'static str,
    pub scene: ContactScene<f64>,
    pub plane: VirtualPlane<f64>,
}

fn v(x: f64, y: f64, z: f64) -> Vec3<f64> {
    Vec3::new(x, y, z)
}

fn surface(center: Vec3<f64>, rot: Mat3<f64>, half: (f64, f64), mu: f64) -> Contact<f64> {
    Contact::Surface(ContactSurface::new(center, rot, half, mu).expect("valid surface"))
}

fn tilt(axis: Vec3<f64>, deg: f64) -> Mat3<f64> {
    Mat3::from_axis_angle(axis, deg.to_radians()).expect("nonzero axis")
}

fn foot(x: f64, y: f64, z: f64) -> Contact<f64> {
    surface(v(x, y, z), Mat3::identity(), FOOT_HALF_LENGTHS, FRICTION)
}

fn scene(contacts: Vec<Contact<f64>>, com: Vec3<f64>) -> ContactScene<f64> {
    ContactScene::new(contacts, MASS, com).expect("valid scene")
}

/// Three tilted surfaces, all pressures positive on the ground plane.
pub fn fig2() -> NamedScene {
    let contacts = vec![
        surface(
            v(0.0, 0.15, 0.0),
            tilt(v(1.0, 0.0, 0.0), 10.0),
            FOOT_HALF_LENGTHS,
            FRICTION,
        ),
        surface(
            v(0.1, -0.2, 0.05),
            tilt(v(1.0, 0.0, 0.0), -15.0),
            FOOT_HALF_LENGTHS,
            FRICTION,
        ),
        surface(
            v(0.45, 0.0, 0.6),
            tilt(v(0.0, 1.0, 0.0), -30.0),
            HAND_HALF_LENGTHS,
            FRICTION,
        ),
    ];
    NamedScene {
        name: "fig2",
        scene: scene(contacts, v(0.1, 0.0, 0.8)),
        plane: VirtualPlane::horizontal(0.0),
    }
}

/// Two feet and a wall contact 50 cm forward, 90 cm up; plane on the floor.
pub fn fig3() -> NamedScene {
    let wall = Mat3::from_columns(v(0.0, 1.0, 0.0), v(0.0, 0.0, -1.0), v(-1.0, 0.0, 0.0));
    let contacts = vec![
        foot(0.0, 0.1, 0.0),
        foot(0.0, -0.1, 0.0),
        surface(v(0.5, 0.0, 0.9), wall, HAND_HALF_LENGTHS, FRICTION),
    ];
    NamedScene {
        name: "fig3",
        scene: scene(contacts, v(0.1, 0.0, 0.8)),
        plane: VirtualPlane::horizontal(0.0),
    }
}

/// Two feet and a hand pushing on a ceiling one meter above; plane halfway.
pub fn fig4() -> NamedScene {
    let ceiling = Mat3::from_columns(v(1.0, 0.0, 0.0), v(0.0, -1.0, 0.0), v(0.0, 0.0, -1.0));
    let contacts = vec![
        foot(0.0, 0.1, 0.0),
        foot(0.0, -0.1, 0.0),
        surface(v(0.0, 0.0, 1.0), ceiling, HAND_HALF_LENGTHS, FRICTION),
    ];
    NamedScene {
        name: "fig4",
        scene: scene(contacts, v(0.0, 0.0, 0.7)),
        plane: VirtualPlane::horizontal(0.5),
    }
}

/// Half-lengths of the fig5 feet. With shorter feet the toe and heel edges
/// shared by both feet stay reachable: a ZMP at distance `a` ahead of the
/// COM needs `a / 0.5 <= mu / sqrt(2)`, i.e. `a <= 0.177` m.
pub const LONG_FOOT_HALF_LENGTHS: (f64, f64) = (0.2, 0.065);

/// Legs stretched: feet one meter apart, COM 50 cm up, friction 0.5.
pub fn fig5() -> NamedScene {
    let long = |y: f64| surface(v(0.0, y, 0.0), Mat3::identity(), LONG_FOOT_HALF_LENGTHS, FRICTION);
    let contacts = vec![long(0.5), long(-0.5)];
    NamedScene {
        name: "fig5",
        scene: scene(contacts, v(0.0, 0.0, 0.5)),
        plane: VirtualPlane::horizontal(0.0),
    }
}

/// Flat double support, feet 60 cm apart, with the plane one meter above
/// the COM.
pub fn table3() -> NamedScene {
    let contacts = vec![foot(0.0, 0.3, 0.0), foot(0.0, -0.3, 0.0)];
    NamedScene {
        name: "table3",
        scene: scene(contacts, v(0.0, 0.0, 0.8)),
        plane: VirtualPlane::horizontal(1.8),
    }
}

/// Benchmark scenes with one, two and three surface contacts.
pub fn bench(contacts: usize) -> Option<NamedScene> {
    let (name, cs, com) = match contacts {
        1 => ("bench1", vec![foot(0.0, 0.0, 0.0)], v(0.02, 0.01, 0.8)),
        2 => (
            "bench2",
            vec![
                foot(0.0, 0.1, 0.0),
                surface(
                    v(0.2, -0.12, 0.08),
                    tilt(v(1.0, 0.0, 0.0), -12.0),
                    FOOT_HALF_LENGTHS,
                    FRICTION,
                ),
            ],
            v(0.08, 0.0, 0.8),
        ),
        3 => (
            "bench3",
            vec![
                foot(0.0, 0.1, 0.0),
                surface(
                    v(0.2, -0.12, 0.08),
                    tilt(v(1.0, 0.0, 0.0), -12.0),
                    FOOT_HALF_LENGTHS,
                    FRICTION,
                ),
                surface(
                    v(0.5, 0.25, 1.0),
                    tilt(v(0.0, 1.0, 0.0), -40.0),
                    HAND_HALF_LENGTHS,
                    FRICTION,
                ),
            ],
            v(0.12, 0.05, 0.8),
        ),
        _ => return None,
    };
    Some(NamedScene {
        name,
        scene: scene(cs, com),
        plane: VirtualPlane::horizontal(1.8),
    })
}

pub fn by_name(name: &str) -> Option<NamedScene> {
    match name {
        "fig2" => Some(fig2()),
        "fig3" => Some(fig3()),
        "fig4" => Some(fig4()),
        "fig5" => Some(fig5()),
        "table3" => Some(table3()),
        "bench1" => bench(1),
        "bench2" => bench(2),
        "bench3" => bench(3),
        _ => None,
    }
}

pub const NAMES: [&str; 8] = [
    "fig2", "fig3", "fig4", "fig5", "table3", "bench1", "bench2", "bench3",
];

/// Seed from [`SEED_ENV`], or [`DEFAULT_SEED`] when unset or unparsable.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Random scene with `contacts` point or surface contacts near the floor,
/// tilted by at most 25 degrees, and the COM 0.8 m above their centroid.
pub fn random_scene(rng: &mut impl Rng, contacts: usize) -> ContactScene<f64> {
    let mut cs = Vec::with_capacity(contacts);
    let mut centroid = Vec3::zero();
    for _ in 0..contacts {
        let c = v(
            rng.gen_range(-0.4..0.4),
            rng.gen_range(-0.4..0.4),
            rng.gen_range(0.0..0.3),
        );
        centroid = centroid + c;
        let axis = v(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.0);
        let rot = if axis.norm() < 1e-3 {
            Mat3::identity()
        } else {
            tilt(axis, rng.gen_range(0.0..25.0))
        };
        let mu = rng.gen_range(0.3..0.9);
        if rng.gen_bool(0.5) {
            let half = (rng.gen_range(0.03..0.12), rng.gen_range(0.03..0.12));
            cs.push(surface(c, rot, half, mu));
        } else {
            cs.push(Contact::Point(
                ContactPoint::new(c, &rot, mu).expect("valid point"),
            ));
        }
    }
    let centroid = centroid / contacts.max(1) as f64;
    scene(cs, v(centroid.x, centroid.y, centroid.z + 0.8))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
