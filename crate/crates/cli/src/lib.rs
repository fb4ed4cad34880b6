//! Library behind the `zmp-areas` binary: scene files, reports, SVG output
//! and the `area`, `traj` and `bench` commands.

pub mod app;
pub mod area;
pub mod bench;
pub mod error;
pub mod report;
pub mod scene_file;
pub mod svg;
pub mod traj;

pub use app::run;
pub use error::CliError;
