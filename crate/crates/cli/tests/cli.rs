use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use squeezed_cli::output::{read_csv, Table};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squeezed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn table(args: &[&str]) -> Table {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    read_csv(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["thresholds"]), 0);
    assert_eq!(code(&["evolve", "--bogus"]), 1);
    assert_eq!(code(&["evolve", "--N", "-1"]), 1);
    assert_eq!(code(&["evolve", "--N", "1", "--Mabs", "2"]), 1);
    assert_eq!(code(&["evolve", "--init", "x"]), 1);
    assert_eq!(code(&["evolve", "--rel-tol", "0"]), 1);
    assert_eq!(code(&["fig2", "--format", "svg", "--points", "0"]), 1);
    assert_eq!(code(&["fig1", "--N", "1"]), 1);
    assert_eq!(code(&["steady", "--format", "svg"]), 1);
    assert_eq!(code(&["--config", "/nonexistent/squeezed.cfg", "thresholds"]), 1);
    // Domain errors.
    assert_eq!(code(&["fig1", "--gamma-hat", "1"]), 2);
    assert_eq!(code(&["thresholds", "--gamma-hat", "0.5"]), 2);
    assert_eq!(code(&["decompose", "--N", "1", "--min-uncertainty", "--delta", "0.8", "--fidelity", "0.1"]), 2);
    // Non-convergence.
    assert_eq!(code(&["steady", "--N", "1", "--Mabs", "1", "--gamma-hat", "0.5", "--t-max", "0.5"]), 3);
}

#[test]
fn evolve_from_ground_approaches_squeezed_state() {
    let t = table(&[
        "evolve", "--N", "1", "--Mabs", "1.4142135623730951", "--gamma-hat", "1", "--init", "g", "--t", "30", "--samples", "30",
    ]);
    assert_eq!(t.header, ["t", "rho_ee", "rho_ss", "rho_aa", "rho_gg", "re_rho_eg", "im_rho_eg", "concurrence", "fidelity"]);
    assert_eq!(t.rows.len(), 31);
    assert_eq!(t.meta[0], "squeezed-cli 0.1.0");
    assert_eq!(t.meta[1], "command = evolve");
    let c = t.column("concurrence").unwrap();
    assert_eq!(c[0], 0.0);
    assert!((c[30] - 0.942809).abs() < 1e-3, "{}", c[30]);
    assert!(t.column("fidelity").unwrap().iter().all(|f| f.abs() < 1e-12));
}

#[test]
fn antisymmetric_state_is_frozen_in_dicke_limit() {
    let t = table(&["evolve", "--N", "2", "--min-uncertainty", "--gamma-hat", "1", "--omega-dd", "0.7", "--delta", "0.3", "--init", "a", "--t", "5", "--samples", "10"]);
    for row in &t.rows {
        assert_eq!(&row[1..], &t.rows[0][1..]);
    }
    assert_eq!(t.column("fidelity").unwrap()[10], 1.0);
    assert!((t.column("concurrence").unwrap()[10] - 1.0).abs() < 1e-12);
}

#[test]
fn steady_matches_closed_form() {
    for args in [
        &["steady", "--N", "1", "--Mabs", "1", "--gamma-hat", "0.85", "--init", "e"][..],
        &["steady", "--N", "0.5", "--min-uncertainty", "--gamma-hat", "1", "--delta", "0.4", "--init", "product(+,bloch:1.0:0.3)"],
    ] {
        let t = table(args);
        let row = &t.rows[0];
        assert_eq!(t.column("converged").unwrap()[0], 1.0);
        assert!(t.column("max_abs_diff").unwrap()[0] < 1e-6, "{row:?}");
        let (c, closed) = (t.column("concurrence").unwrap()[0], t.column("closed_form_concurrence").unwrap()[0]);
        assert!((c - closed).abs() < 1e-6);
    }
}

#[test]
fn figure_output_matches_snapshots() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots");
    for fig in ["fig1", "fig2", "fig3"] {
        let out = run(&[fig]);
        assert!(out.status.success());
        let stored = std::fs::read_to_string(dir.join(format!("{fig}.csv"))).unwrap();
        let (got, want) = (read_csv(&String::from_utf8(out.stdout).unwrap()).unwrap(), read_csv(&stored).unwrap());
        assert_eq!(got.header, want.header);
        assert_eq!(got.meta, want.meta);
        assert_eq!(got.rows.len(), want.rows.len());
        for (a, b) in got.rows.iter().flatten().zip(want.rows.iter().flatten()) {
            assert!((a - b).abs() <= 1e-12, "{fig}: {a} vs {b}");
        }
    }
}

#[test]
fn scan_options() {
    let t = table(&["fig3", "--deltas", "0,-1.5", "--n-min", "1", "--n-max", "2", "--points", "3"]);
    assert_eq!(t.header, ["N", "C(delta=0)", "C(delta=-1.5)"]);
    assert_eq!(t.column("N").unwrap(), vec![1.0, 1.5, 2.0]);
    let t = table(&["fig1", "--delta", "0.25", "--points", "5"]);
    assert_eq!(t.header, ["N", "C(delta=0.25)"]);
    let t = table(&["fig2", "--N", "2", "--delta", "0", "--points", "11"]);
    let c = t.column("C").unwrap();
    assert_eq!(c.len(), 11);
    assert_eq!(c[10], 1.0);
}

#[test]
fn config_file_and_flag_precedence() {
    let cfg = scratch("precedence.cfg");
    std::fs::write(&cfg, "# run setup\nN = 2\nmin-uncertainty = true\ngamma-hat = 1\ndelta = 0.8\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = run(&["--config", cfg, "thresholds", "--N", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("N = 1.0, Mabs = 1.4142135623730951"), "{text}");
    assert!(text.contains("delta = 0.8"));
    assert!(text.contains("F1,0.14312957956"), "{text}");

    let bad = scratch("bad.cfg");
    std::fs::write(&bad, "N = 1\nfoo = 2\n").unwrap();
    let out = run(&["--config", bad.to_str().unwrap(), "thresholds"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.cfg:2: unknown key `foo`"));
}

#[test]
fn svg_and_file_output() {
    let path = scratch("fig1.svg");
    let _ = std::fs::remove_file(&path);
    assert_eq!(code(&["fig1", "--format", "svg", "--out", path.to_str().unwrap()]), 0);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 3);
}

#[test]
fn json_initial_state() {
    let path = scratch("rho_a.json");
    let h = 0.5;
    std::fs::write(
        &path,
        format!(r#"{{"basis": "canonical", "re": [[0,0,0,0],[0,{h},-{h},0],[0,-{h},{h},0],[0,0,0,0]]}}"#),
    )
    .unwrap();
    let init = path.to_str().unwrap();
    let t = table(&["evolve", "--gamma-hat", "1", "--init", init, "--t", "1", "--samples", "2"]);
    assert!((t.column("fidelity").unwrap()[2] - 1.0).abs() < 1e-12);
}

#[test]
fn decompose_report() {
    let path = scratch("decompose.csv");
    let out = run(&["decompose", "--N", "1", "--min-uncertainty", "--fidelity", "0.3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("antisymmetric weight p = 0.3"), "{text}");
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.contains("\nkey,value\n"));
    assert!(csv.contains("\nq,0.7"), "{csv}");
}
