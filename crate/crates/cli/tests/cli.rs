//! End-to-end tests of the binary: exit codes, artifact schemas, and
//! rerun determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exflat"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("missing {name}: {e}"))
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, name)).unwrap()
}

/// Parses a boundary-style CSV, checking the pinned header.
fn boundary_rows(text: &str) -> Vec<[f64; 4]> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,re_F,im_F,u"));
    lines
        .map(|l| {
            let cols: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            assert_eq!(cols.len(), 4);
            [cols[0], cols[1], cols[2], cols[3]]
        })
        .collect()
}

const TWO_ANCHORS: &str = r#"{
  "spectrum": {"anchors_deg": [0, 180], "weights": [0.5, 0.5]},
  "grid": {"radial": 4, "angular": 8, "rmax": 0.8},
  "outputs": {"formats": ["csv", "json", "svg"]},
  "seed": 3
}"#;

const THREE_ANCHORS: &str = r#"{
  "spectrum": {"anchors_deg": [0, 120, 240], "weights": [1, 1, 1]},
  "grid": {"radial": 8, "angular": 16, "rmax": 0.9},
  "outputs": {"formats": ["json"]}
}"#;

const COMPARE_CFG: &str = r#"{
  "spectrum": {"anchors_deg": [0, 180], "weights": [0.5, 0.5]},
  "grid": {"radial": 4, "angular": 16, "rmax": 0.8},
  "outputs": {"formats": ["json"]}
}"#;

#[test]
fn generate_writes_deterministic_artifacts() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_cfg(tmp.path(), "run.json", TWO_ANCHORS);
    let out_a = tmp.path().join("a");
    let out_b = tmp.path().join("b");

    let first = run(&[
        "generate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_a.to_str().unwrap(),
    ]);
    assert_eq!(code(&first), 0, "stderr: {}", stderr(&first));

    let files = [
        "boundary_arc_0.csv",
        "boundary_arc_1.csv",
        "grid.csv",
        "boundary.svg",
        "generate.json",
    ];
    for name in files {
        assert!(out_a.join(name).is_file(), "missing {name}");
    }
    for name in ["boundary_arc_0.csv", "boundary_arc_1.csv"] {
        let rows = boundary_rows(&read(&out_a, name));
        assert_eq!(rows.len(), 16 * 8);
        for row in &rows {
            assert!(row[3].abs() <= 1e-10, "{name}: roof residual {}", row[3]);
        }
    }
    let grid = read(&out_a, "grid.csv");
    assert!(grid.starts_with("r,phi,re_z,im_z,re_F,im_F,u\n"));
    assert_eq!(grid.lines().count(), 1 + 4 * 8);

    let second = run(&[
        "generate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_b.to_str().unwrap(),
    ]);
    assert_eq!(code(&second), 0);
    for name in files {
        assert_eq!(
            fs::read(out_a.join(name)).unwrap(),
            fs::read(out_b.join(name)).unwrap(),
            "rerun differs in {name}"
        );
    }

    let manifest = json(&out_a, "generate.json");
    assert_eq!(manifest["arcs"], 2);
    assert_eq!(manifest["samples_per_arc"], 16 * 8);
    assert_eq!(manifest["seed"], 3);

    let out_c = tmp.path().join("c");
    let seeded = run(&[
        "generate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_c.to_str().unwrap(),
        "--seed",
        "7",
    ]);
    assert_eq!(code(&seeded), 0);
    assert_eq!(json(&out_c, "generate.json")["seed"], 7);
}

#[test]
fn verify_symmetric_family_passes() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_cfg(tmp.path(), "run.json", THREE_ANCHORS);
    let dir = tmp.path().join("out");
    let out = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let report = json(&dir, "report.json");
    assert_eq!(report["pass"], true);
    let records = report["records"].as_array().unwrap();
    assert!(records.len() >= 5, "only {} records", records.len());
    assert!(records.iter().all(|r| r["pass"] == true));
    assert!(records
        .iter()
        .any(|r| r["name"].as_str().unwrap().contains("neumann")));
}

#[test]
fn verify_exit_reflects_failing_records() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_cfg(
        tmp.path(),
        "run.json",
        r#"{
          "spectrum": {"anchors_deg": [0, 180], "weights": [1, 2]},
          "grid": {"radial": 4, "angular": 8, "rmax": 0.9},
          "tolerances": {"unimodularity": 1e-30},
          "outputs": {"formats": ["json"]}
        }"#,
    );
    let dir = tmp.path().join("out");
    let out = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1, "stderr: {}", stderr(&out));
    let report = json(&dir, "report.json");
    assert_eq!(report["pass"], false);
    assert!(report["records"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["pass"] == false));
}

#[test]
fn invalid_configurations_exit_2() {
    let tmp = TempDir::new().unwrap();
    let cases: &[(&str, &str)] = &[
        (
            r#"{"spectrum":{"anchors_deg":[0,0],"weights":[1,1]}}"#,
            "DuplicateAnchors",
        ),
        (
            r#"{"spectrum":{"anchors_deg":[0],"weights":[1]},"grid":{"rmax":1.5}}"#,
            "rmax",
        ),
        (r#"{"spectrum":{"anchors_deg":[0],"weights":[1]},"grd":{}}"#, "grd"),
        (
            r#"{"spectrum":{"anchors_deg":[0],"anchors":[[1,0]],"weights":[1]}}"#,
            "mutually exclusive",
        ),
        (
            r#"{"spectrum":{"anchors":[[0.5,0]],"weights":[1]}}"#,
            "AnchorOffCircle",
        ),
        (
            r#"{"spectrum":{"anchors_deg":[0,180],"weights":[1,-1]}}"#,
            "NonpositiveWeight",
        ),
        (r#"{"spectrum":{"weights":[1]}}"#, "anchors"),
        (r#"not json"#, "schema error"),
        (
            r#"{"spectrum":{"anchors_deg":[0],"weights":[1]},"outputs":{"formats":["pdf"]}}"#,
            "pdf",
        ),
    ];
    for (i, (text, needle)) in cases.iter().enumerate() {
        let path = write_cfg(tmp.path(), &format!("bad_{i}.json"), text);
        let out = run(&["verify", "--config", path.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "case {i}: {}", stderr(&out));
        assert!(
            stderr(&out).contains(needle),
            "case {i} lacks {needle:?}: {}",
            stderr(&out)
        );
    }

    let missing = tmp.path().join("nope.json");
    let out = run(&["verify", "--config", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let usage = run(&["frobnicate"]);
    assert_eq!(code(&usage), 2);
}

#[test]
fn boundary_band_roots_exit_3() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_cfg(
        tmp.path(),
        "run.json",
        r#"{"spectrum":{"anchors_deg":[0,180],"weights":[1,1e-17]}}"#,
    );
    let out = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("RootNearBoundary"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn compare_fits_the_two_anchor_surface() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_cfg(tmp.path(), "run.json", COMPARE_CFG);
    let dir = tmp.path().join("out");
    let out = run(&[
        "compare",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let cmp = json(&dir, "compare.json");
    let residual = cmp["residual"].as_f64().unwrap();
    assert!(residual < 1e-4, "residual {residual}");
    assert!(cmp["reflection"].is_boolean());
    assert!(cmp["rotation_scale"]["re"].is_number());
    assert!(cmp["translation"]["im"].is_number());
}

#[test]
fn compare_rejects_other_anchor_counts() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_cfg(tmp.path(), "run.json", THREE_ANCHORS);
    let out = run(&["compare", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("exactly 2 anchors"), "{}", stderr(&out));
}

#[test]
fn ends_report_simple_pole_openings() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_cfg(tmp.path(), "run.json", COMPARE_CFG);
    let dir = tmp.path().join("out");
    let out = run(&[
        "ends",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let ends = json(&dir, "ends.json");
    let list = ends["ends"].as_array().unwrap();
    assert_eq!(list.len(), 2);
    for e in list {
        let theta = e["theta"].as_f64().unwrap();
        assert!(
            (theta - std::f64::consts::PI).abs() < 1e-3,
            "opening angle {theta}"
        );
        for tau in ["tau_minus", "tau_plus"] {
            let re = e[tau]["re"].as_f64().unwrap();
            let im = e[tau]["im"].as_f64().unwrap();
            assert!((re.hypot(im) - 1.0).abs() < 1e-6);
        }
    }
}

#[test]
fn catalogue_exports_reference_data() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_cfg(
        tmp.path(),
        "run.json",
        r#"{
          "spectrum": {"anchors_deg": [0], "weights": [1]},
          "outputs": {"formats": ["csv", "json", "svg"]}
        }"#,
    );
    let dir = tmp.path().join("out");
    let out = run(&[
        "catalogue",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let upper = boundary_rows(&read(&dir, "hairpin_upper.csv"));
    let lower = boundary_rows(&read(&dir, "hairpin_lower.csv"));
    assert_eq!(upper.len(), 801);
    assert_eq!(lower.len(), 801);
    for row in upper.iter().chain(&lower) {
        assert!(row[3].abs() <= 1e-10, "roof residual {}", row[3]);
    }
    let apex = 0.5 * std::f64::consts::PI + 1.0;
    assert!(upper[400][0].abs() < 1e-15);
    assert!(upper[400][1].abs() < 1e-12);
    assert!((upper[400][2] - apex).abs() < 1e-12);
    assert!((lower[400][2] + apex).abs() < 1e-12);

    assert!(read(&dir, "hairpin.svg").starts_with("<svg"));

    let patho = json(&dir, "pathological.json");
    let bessel_j0_at_1 = 0.7651976865579666;
    let period_im = std::f64::consts::TAU * bessel_j0_at_1;
    assert!((patho["period"]["im"].as_f64().unwrap() - period_im).abs() < 1e-8);
    assert!(patho["period"]["re"].as_f64().unwrap().abs() < 1e-10);
    assert!(patho["periodicity_residual"].as_f64().unwrap() < 1e-8);

    let roofs = json(&dir, "trivial_roofs.json");
    let domains = roofs["domains"].as_array().unwrap();
    assert_eq!(domains.len(), 3);
    let disk = domains
        .iter()
        .find(|d| d["kind"] == "exterior_disk_2d")
        .unwrap();
    let s = disk["samples"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["point"][0] == -2.0)
        .unwrap();
    assert!((s["u"].as_f64().unwrap() - 2.0_f64.ln()).abs() < 1e-12);
}
