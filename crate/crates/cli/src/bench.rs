//! The `bench` command: timing table of the four area computations.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use zmp_core::polyhedra::{DdOptions, PolyhedronError};
use zmp_core::support_areas::{
    cwc_projection_area, full_support_area, pendular_support_area_dd_with,
    pendular_support_area_rayshoot, AreaError, RayShootOptions,
};

use crate::scene_file::LoadedScene;

/// Rows of the table, in order.
pub const METHODS: [&str; 4] = [
    "full_geometric",
    "cwc_projection",
    "pendular_dd",
    "pendular_rayshoot",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Cell {
    Ok { mean_ms: f64, std_ms: f64 },
    IterationLimit,
    Error { kind: String, message: String },
}

impl Cell {
    pub fn mean_ms(&self) -> Option<f64> {
        match self {
            Cell::Ok { mean_ms, .. } => Some(*mean_ms),
            _ => None,
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Ok { mean_ms, std_ms } => format!("{mean_ms:.3} ± {std_ms:.3}"),
            Cell::IterationLimit => "iteration_limit".to_string(),
            Cell::Error { kind, .. } => format!("error:{kind}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub method: String,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub unit: String,
    pub repeats: usize,
    pub columns: Vec<String>,
    pub contacts: Vec<usize>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub repeats: usize,
    /// Work limit of the pendular double description.
    pub dd: DdOptions,
    /// Rows to time, a subset of [`METHODS`].
    pub methods: Vec<&'static str>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            repeats: 3,
            dd: DdOptions::default(),
            methods: METHODS.to_vec(),
        }
    }
}

fn cell_error(e: AreaError) -> Cell {
    match e {
        AreaError::Polyhedron(PolyhedronError::IterationLimit(_)) => Cell::IterationLimit,
        e => Cell::Error {
            kind: crate::error::CliError::Area(e.clone()).kind().to_string(),
            message: e.to_string(),
        },
    }
}

fn time_cell(repeats: usize, mut f: impl FnMut() -> Result<(), AreaError>) -> Cell {
    let mut ms = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        if let Err(e) = f() {
            return cell_error(e);
        }
        ms.push(start.elapsed().as_secs_f64() * 1e3);
    }
    let n = ms.len() as f64;
    let mean = ms.iter().sum::<f64>() / n;
    let var = if ms.len() > 1 {
        ms.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Cell::Ok {
        mean_ms: mean,
        std_ms: var.sqrt(),
    }
}

pub fn run_bench(scenes: &[LoadedScene], opts: &BenchOptions) -> BenchTable {
    let mut table = BenchTable {
        unit: "ms".to_string(),
        repeats: opts.repeats,
        columns: scenes.iter().map(|s| s.name.clone()).collect(),
        contacts: scenes.iter().map(|s| s.scene.contacts.len()).collect(),
        rows: Vec::new(),
    };
    if opts.repeats == 0 {
        return table;
    }
    for &method in &opts.methods {
        let cells = scenes
            .iter()
            .map(|s| {
                let (sc, pl) = (&s.scene, &s.plane);
                time_cell(opts.repeats, || match method {
                    "full_geometric" => full_support_area(sc, pl).map(drop),
                    "cwc_projection" => cwc_projection_area(sc, pl).map(drop),
                    "pendular_dd" => pendular_support_area_dd_with(sc, pl, &opts.dd).map(drop),
                    _ => pendular_support_area_rayshoot(sc, pl, &RayShootOptions::default()).map(drop),
                })
            })
            .collect();
        table.rows.push(Row {
            method: method.to_string(),
            cells,
        });
    }
    table
}

impl BenchTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("method");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.method);
            for c in &r.cells {
                out.push(',');
                out.push_str(&c.text());
            }
            out.push('\n');
        }
        out
    }
}
