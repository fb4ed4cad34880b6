//! The `traj` command: LPM trajectory, COM integration and per-sample
//! feasibility verdicts.

use serde::{Deserialize, Serialize};
use zmp_core::geom::{UnitVec3, Vec3, VirtualPlane};
use zmp_core::pendulum::{
    generate_trajectory, integrate_com, plan_stance_transition, PendulumKind, StanceOptions,
    TrajProblem,
};
use zmp_core::support_areas::zmp_lpm_feasible;

use crate::error::CliError;
use crate::scene_file::LoadedScene;

#[derive(Clone, Debug, PartialEq)]
pub struct TrajArgs {
    pub p0: [f64; 3],
    pub p1: [f64; 3],
    pub steps: usize,
    pub dt: f64,
    /// Fixed plane offset. When absent the plane is moved away from the
    /// COM, starting at the scene's plane, until the pendular areas at both
    /// endpoints contain the ZMP segment.
    pub d_z: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Samples {
    pub t: Vec<f64>,
    pub com: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajReport {
    pub scene: String,
    pub p0: [f64; 3],
    pub p1: [f64; 3],
    pub steps: usize,
    pub dt: f64,
    pub normal: [f64; 3],
    pub d_z: f64,
    /// Plane offsets tried by the plane search; empty with a fixed plane.
    pub planes_tried: Vec<f64>,
    /// `inverted` or `non_inverted`.
    pub mode: String,
    pub omega: f64,
    pub objective: f64,
    pub gamma: Vec<f64>,
    pub eta: Vec<f64>,
    pub eta_dot: Vec<f64>,
    /// COM at the step boundaries, `K + 1` entries.
    pub com: Vec<[f64; 3]>,
    /// ZMP held during each step, `K` entries.
    pub zmp: Vec<[f64; 3]>,
    /// LP verdict for each step with the COM at its start.
    pub feasible: Vec<bool>,
    pub first_infeasible: Option<usize>,
    /// Damped RK4 integration of the COM under the ZMP commands.
    pub samples: Samples,
}

impl TrajReport {
    pub fn plane(&self) -> VirtualPlane<f64> {
        let n = self.normal;
        VirtualPlane::new(
            UnitVec3::new(Vec3::new(n[0], n[1], n[2])).unwrap_or(UnitVec3::e_z()),
            self.d_z,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn arr(v: Vec3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

fn vec3(a: [f64; 3]) -> Vec3<f64> {
    Vec3::new(a[0], a[1], a[2])
}

pub fn run_traj(s: &LoadedScene, a: &TrajArgs) -> Result<TrajReport, CliError> {
    let (p0, p1) = (vec3(a.p0), vec3(a.p1));
    let (problem, planes_tried) = match a.d_z {
        Some(d_z) => {
            let plane = s.plane.with_offset(d_z);
            let g = s.scene.gravity_norm();
            (TrajProblem::new(p0, p1, a.steps, a.dt, plane, g), Vec::new())
        }
        None => {
            let opts = StanceOptions {
                steps: a.steps,
                dt: a.dt,
                ..StanceOptions::default()
            };
            let plan = plan_stance_transition(&s.scene, &s.scene, p0, p1, s.plane.offset(), &opts)?;
            (plan.problem, plan.tried)
        }
    };
    let plane = problem.plane;
    let sol = generate_trajectory(&problem)?;
    let mode = problem.mode()?;
    let samples = integrate_com(&sol, &mode, sol.damping);

    let mut feasible = Vec::with_capacity(sol.zmp.len());
    for (g, z) in sol.com.iter().zip(&sol.zmp) {
        let mut sc = s.scene.clone();
        sc.com = *g;
        feasible.push(zmp_lpm_feasible(&sc, &plane, plane.to_plane(*z))?.is_feasible());
    }
    Ok(TrajReport {
        scene: s.name.clone(),
        p0: a.p0,
        p1: a.p1,
        steps: a.steps,
        dt: a.dt,
        normal: arr(plane.normal()),
        d_z: plane.offset(),
        planes_tried,
        mode: match mode.kind {
            PendulumKind::Inverted => "inverted",
            PendulumKind::NonInverted => "non_inverted",
        }
        .to_string(),
        omega: mode.omega,
        objective: sol.objective,
        first_infeasible: feasible.iter().position(|f| !f),
        feasible,
        gamma: sol.gamma.clone(),
        eta: sol.eta.clone(),
        eta_dot: sol.eta_dot.clone(),
        com: sol.com.iter().map(|&p| arr(p)).collect(),
        zmp: sol.zmp.iter().map(|&p| arr(p)).collect(),
        samples: Samples {
            t: samples.t.clone(),
            com: samples.pos.iter().map(|&p| arr(p)).collect(),
        },
    })
}
