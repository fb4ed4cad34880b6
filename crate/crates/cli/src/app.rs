//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use zmp_core::polyhedra::DdOptions;

use crate::area::compute_area;
use crate::bench::{run_bench, BenchOptions, METHODS};
use crate::error::{CliError, EXIT_SCHEMA};
use crate::report::{Algorithm, AreaKind};
use crate::scene_file::{self, LoadedScene};
use crate::svg;
use crate::traj::{run_traj, TrajArgs};

#[derive(Parser, Debug)]
#[command(name = "zmp-areas", version, about = "ZMP support areas and pendulum trajectories for multi-contact stances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute a support area and print its report as JSON.
    Area {
        /// Scene file, or the name of a bundled scene (fig2, fig3, fig4,
        /// fig5, table3, bench1, bench2, bench3).
        scene: String,
        #[arg(long, value_enum, default_value = "full")]
        kind: AreaKind,
        /// Defaults to geometric for full and nmp, dd otherwise.
        #[arg(long, value_enum)]
        algo: Option<Algorithm>,
        #[arg(long, value_name = "PATH")]
        svg: Option<String>,
        /// Include the computation time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Generate a pendulum-mode COM/ZMP trajectory between two COM
    /// positions at the same height.
    Traj {
        scene: String,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        p0: [f64; 3],
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        p1: [f64; 3],
        /// Number of steps.
        #[arg(long = "K", default_value_t = 100)]
        steps: usize,
        /// Step duration in seconds.
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        /// Fixed plane offset. By default the plane starts at the scene's
        /// and moves away from the COM until both pendular areas contain
        /// the ZMP segment.
        #[arg(long, allow_hyphen_values = true)]
        dz: Option<f64>,
        #[arg(long, value_name = "PATH")]
        svg: Option<String>,
    },
    /// Time the four area computations on a set of scenes.
    Bench {
        /// Scenes forming the columns; bench1 bench2 bench3 by default.
        scenes: Vec<String>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
        /// Candidate-pair limit of the pendular double description.
        #[arg(long, default_value_t = DdOptions::default().max_pairs)]
        dd_max_pairs: u64,
        /// Comma-separated rows to time; all four by default.
        #[arg(long, value_delimiter = ',', value_parser = clap::builder::PossibleValuesParser::new(METHODS))]
        methods: Vec<String>,
    },
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        let v: f64 = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
        *o = v;
        if !v.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
    }
    Ok(out)
}

fn write_file(path: &str, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Output {
        path: path.to_string(),
        source,
    })
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Area {
            scene,
            kind,
            algo,
            svg: svg_path,
            timing,
        } => {
            let s = scene_file::load(&scene)?;
            let report = compute_area(&s, kind, algo, timing)?;
            if let Some(p) = svg_path {
                write_file(&p, &svg::area_svg(&s, &report))?;
            }
            emit(&report.to_json());
            Ok(())
        }
        Command::Traj {
            scene,
            p0,
            p1,
            steps,
            dt,
            dz,
            svg: svg_path,
        } => {
            let s = scene_file::load(&scene)?;
            let args = TrajArgs {
                p0,
                p1,
                steps,
                dt,
                d_z: dz,
            };
            let report = run_traj(&s, &args)?;
            if let Some(p) = svg_path {
                write_file(&p, &svg::traj_svg(&s, &report))?;
            }
            emit(&report.to_json());
            match report.first_infeasible {
                Some(index) => Err(CliError::InfeasibleSample { index }),
                None => Ok(()),
            }
        }
        Command::Bench {
            scenes,
            repeats,
            format,
            dd_max_pairs,
            methods,
        } => {
            let names = if scenes.is_empty() {
                vec!["bench1".to_string(), "bench2".into(), "bench3".into()]
            } else {
                scenes
            };
            let loaded = names
                .iter()
                .map(|n| scene_file::load(n))
                .collect::<Result<Vec<LoadedScene>, _>>()?;
            let opts = BenchOptions {
                repeats,
                dd: DdOptions {
                    max_pairs: dd_max_pairs,
                    ..DdOptions::default()
                },
                methods: if methods.is_empty() {
                    METHODS.to_vec()
                } else {
                    METHODS
                        .into_iter()
                        .filter(|m| methods.iter().any(|x| x == m))
                        .collect()
                },
            };
            let table = run_bench(&loaded, &opts);
            emit(&match format {
                TableFormat::Json => table.to_json(),
                TableFormat::Csv => table.to_csv(),
            });
            Ok(())
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return 0;
            }
            eprintln!("{}", CliError::Usage(e.kind().to_string()).to_json());
            return EXIT_SCHEMA;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
