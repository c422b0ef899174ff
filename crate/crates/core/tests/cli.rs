// SPDX-License-Identifier: Apache-2.0
//! The `cdgl` binary: exit codes, output formats and batch files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn cdgl(args: &[&str]) -> Output {
    cdgl_with_env(args, &[])
}

fn cdgl_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cdgl"));
    cmd.args(args).env_remove("CDGL_RESOURCE_LIMIT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn model(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(name).display().to_string()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("cdgl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn help_exits_zero() {
    let o = cdgl(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("baut"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(cdgl(&["bogus"]).status.code(), Some(1));
    let o = cdgl(&["homology", "sphere(2)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("--range"));
}

#[test]
fn canonical_output_is_byte_identical() {
    let args = ["pi-map", "sphere(3)", "--range", "1..4", "--truncate", "4", "--word-cap", "3", "--format", "canonical"];
    let (a, b) = (cdgl(&args), cdgl(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["results"]["routes_agree"], true);
    assert_eq!(v["stable"], true);
}

#[test]
fn table_output_reports_status_and_time() {
    let o = cdgl(&["baut", "sphere(3)", "--range", "1..6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("cdgl baut"), "{text}");
    assert!(text.contains("status: OK") && text.contains("stable: yes") && text.contains("time: "), "{text}");
}

#[test]
fn shipped_models_check() {
    for name in ["circle.cdgl", "interval.cdgl", "spheres.cdgl", "wedge3.cdgl"] {
        let o = cdgl(&["check", &model(name), "--format", "canonical"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["results"]["verdict"], "PASS");
    }
}

#[test]
fn file_diagnostics_carry_positions() {
    let path = scratch("bad.cdgl", "model S {\n  gen x : 2\n  d x = [x,y]\n}\n");
    let o = cdgl(&["check", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(&format!("{path}:3:12: error: unknown generator y")), "{}", stdout(&o));
}

#[test]
fn resource_limit_exits_two() {
    let o = cdgl_with_env(&["homology", "wedge(1,1,1)", "--range", "0..0", "--truncate", "7"], &[("CDGL_RESOURCE_LIMIT", "100")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("status: RESOURCE-LIMIT"), "{}", stdout(&o));
}

#[test]
fn witness_from_a_file() {
    let o = cdgl(&["witness", &model("circle.cdgl"), "--homotopy", "H", "--format", "canonical"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"]["holds"], true);
    assert_eq!(v["results"]["stable_at_poly_cap_plus_one"], true);
}

#[test]
fn batch_keeps_order_and_takes_the_worst_exit_code() {
    let path = scratch("tasks.txt", "# comment\ncdgl h0 sphere(3)\nbch wedge(1,1) --expr u --expr v\nhomology sphere(2)\n");
    let o = cdgl(&["batch", &path, "--format", "canonical"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let h0 = text.find("cdgl h0").unwrap();
    let bch = text.find("cdgl bch").unwrap();
    let hom = text.find("cdgl homology").unwrap();
    assert!(h0 < bch && bch < hom, "{text}");
}
