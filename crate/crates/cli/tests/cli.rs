use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zmp-areas"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    let line = text.lines().rev().find(|l| l.starts_with('{')).expect("JSON error line");
    serde_json::from_str(line).expect("stderr is JSON")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("zmp-areas-{}-{name}", std::process::id()))
}

#[test]
fn area_reports_polygon() {
    let o = run(&["area", "fig2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["shape"], "polygon");
    assert_eq!(r["kind"], "full");
    assert!(r["pieces"][0]["vertices"].as_array().unwrap().len() >= 3);
    assert!(r.get("timing_us").is_none());
}

#[test]
fn force_spanning_scene_is_whole_plane() {
    let o = run(&["area", "fig4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["shape"], "whole_plane");
}

#[test]
fn bad_input_exits_with_2() {
    for args in [
        &["area", "no-such-scene"][..],
        &["area", "fig2", "--kind", "sideways"],
        &["traj", "table3", "--p0", "0,0", "--p1", "0,0,0.8"],
        &["area", "fig2", "--kind", "static", "--algo", "geometric"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr_json(&o)["error"]["code"], 2, "{args:?}");
    }
}

#[test]
fn malformed_scene_file_exits_with_2() {
    let path = temp_path("bad.json");
    std::fs::write(&path, r#"{"contacts": [], "mass_kg": 39.0, "bogus": 1}"#).unwrap();
    let o = run(&["area", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["kind"], "schema");
}

#[test]
fn unbounded_pendular_area_exits_with_3() {
    let o = run(&["area", "fig3", "--kind", "pendular", "--algo", "rayshoot"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"]["kind"], "unbounded_direction");
}

#[test]
fn svg_output_is_deterministic() {
    let (a, b) = (temp_path("a.svg"), temp_path("b.svg"));
    for p in [&a, &b] {
        let o = run(&["area", "fig3", "--svg", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (sa, sb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_file(&a).ok();
    std::fs::remove_file(&b).ok();
    assert_eq!(sa, sb);
    assert!(sa.starts_with(b"<svg"));
}

#[test]
fn traj_segment_is_feasible() {
    let o = run(&["traj", "table3", "--p0", "0,-0.15,0.8", "--p1", "0,0.15,0.8"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["gamma"].as_array().unwrap().len(), 100);
    assert!(r["feasible"].as_array().unwrap().iter().all(|f| f == true));
    assert!(r["first_infeasible"].is_null());
}

#[test]
fn infeasible_traj_names_the_sample() {
    let o = run(&["traj", "table3", "--p0", "0,0,0.8", "--p1", "1.5,0,0.8", "--dz", "1.8"]);
    assert_eq!(o.status.code(), Some(3));
    let report = stdout_json(&o);
    let err = stderr_json(&o);
    assert_eq!(err["error"]["kind"], "infeasible_sample");
    assert_eq!(err["error"]["sample"], report["first_infeasible"]);
}

#[test]
fn unreachable_segment_has_no_plane() {
    let o = run(&["traj", "table3", "--p0", "2,0,0.8", "--p1", "2.3,0,0.8"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"]["kind"], "no_feasible_plane");
    assert!(o.stdout.is_empty());
}

#[test]
fn bench_with_no_repeats_is_empty() {
    let o = run(&["bench", "--repeats", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout_json(&o);
    assert_eq!(t["rows"].as_array().unwrap().len(), 0);
    assert_eq!(t["columns"].as_array().unwrap().len(), 3);
}

#[test]
fn bench_csv_selected_rows() {
    let o = run(&["bench", "bench1", "--repeats", "1", "--format", "csv", "--methods", "full_geometric,cwc_projection"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "method,bench1");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("full_geometric,"));
}
