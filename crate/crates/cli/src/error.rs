use serde::Serialize;
use thiserror::Error;
use zmp_core::pendulum::PendulumError;
use zmp_core::polyhedra::PolyhedronError;
use zmp_core::support_areas::AreaError;

use crate::scene_file::SceneError;

/// Exit code for unreadable or invalid input.
pub const EXIT_SCHEMA: i32 = 2;
/// Exit code for failed computations.
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Area(#[from] AreaError),
    #[error(transparent)]
    Pendulum(#[from] PendulumError),
    #[error("ZMP of sample {index} is not feasible under the pendulum constraints")]
    InfeasibleSample { index: usize },
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: i32,
    kind: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample: Option<usize>,
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: ErrorBody<'a>,
}

fn area_kind(e: &AreaError) -> &'static str {
    match e {
        AreaError::ZmpSingularity(_) => "zmp_singularity",
        AreaError::NormalDegenerate { .. } => "normal_degenerate",
        AreaError::MixedPressures => "mixed_pressures",
        AreaError::EmptyPolygon => "empty_polygon",
        AreaError::EmptyArea => "empty_area",
        AreaError::DegeneratePlane(_) => "degenerate_plane",
        AreaError::UnsupportedNormal => "unsupported_normal",
        AreaError::UnboundedDirection(..) => "unbounded_direction",
        AreaError::Contact(_) => "contact",
        AreaError::Polyhedron(PolyhedronError::IterationLimit(_)) => "iteration_limit",
        AreaError::Polyhedron(_) => "polyhedron",
        AreaError::Lp(_) => "lp",
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scene(_) | CliError::Usage(_) | CliError::Output { .. } => EXIT_SCHEMA,
            _ => EXIT_COMPUTE,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Scene(SceneError::Io { .. }) => "io",
            CliError::Scene(_) => "schema",
            CliError::Usage(_) => "usage",
            CliError::Output { .. } => "io",
            CliError::Area(e) | CliError::Pendulum(PendulumError::Area(e)) => area_kind(e),
            CliError::Pendulum(PendulumError::Infeasible) => "infeasible",
            CliError::Pendulum(PendulumError::NoFeasiblePlane { .. }) => "no_feasible_plane",
            CliError::Pendulum(PendulumError::InvalidProblem(_)) => "invalid_problem",
            CliError::Pendulum(_) => "pendulum",
            CliError::InfeasibleSample { .. } => "infeasible_sample",
        }
    }

    pub fn to_json(&self) -> String {
        let sample = match self {
            CliError::InfeasibleSample { index } => Some(*index),
            _ => None,
        };
        serde_json::to_string(&ErrorJson {
            error: ErrorBody {
                code: self.exit_code(),
                kind: self.kind(),
                message: self.to_string(),
                sample,
            },
        })
        .expect("error JSON serializes")
    }
}
