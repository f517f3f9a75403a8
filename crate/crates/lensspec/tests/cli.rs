//! End-to-end checks of the command-line surface.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lensspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn isospectral_command() {
    let out = run(&["isospectral", "L(11;1,2,3)", "L(11;1,2,4)"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("true"));
    assert!(text.contains("cutoff 76"));
    assert!(!text.contains("HEURISTIC"));
}

#[test]
fn isometric_command() {
    let out = run(&["isometric", "L(7;1,2)", "L(7;1,4)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "true");

    let out = run(&["isometric", "L(11;1,2,3)", "L(11;1,2,4)"]);
    assert_eq!(stdout(&out).trim(), "false");
}

#[test]
fn malformed_lens_literal_exits_2() {
    let out = run(&["isometric", "L(7;1,2", "L(7;1,4)"]);
    assert_eq!(out.status.code(), Some(2));
    // boolean answers never travel through exit codes; parse failures do
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed lens literal"));
}

#[test]
fn cutoff_override_stamps_heuristic() {
    let out = run(&[
        "isospectral",
        "L(11;1,2,3)",
        "L(11;1,2,4)",
        "--cutoff-override",
        "5",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("HEURISTIC"));
}

#[test]
fn spectrum_json_envelope() {
    let out = run(&["spectrum", "L(2;1,1)", "--max-k", "3", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "spectrum");
    assert_eq!(v["result"]["mults"][2], "9");
    assert_eq!(v["config"]["output_format"], "Json");
}

#[test]
fn density_csv_row() {
    // q <= 10 admits no isospectral pair, so everything is spectrally unique
    let out = run(&["density", "3", "10", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,x,non_unique,total,density"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("3,10,0,"));
    assert!(row.ends_with(",1.00000"));

    // the first pair enters at q = 11
    let out = run(&["density", "3", "11", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.lines().nth(1).unwrap().starts_with("3,11,2,"));
}

#[test]
fn search_and_enumerate() {
    let out = run(&["search", "3", "11"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("family: [1 2 3] [1 2 4]"));

    let out = run(&["enumerate", "2", "7"]);
    let text = stdout(&out);
    assert!(text.contains("1 1\n"));
    assert!(text.contains("1 2\n"));
    assert!(text.contains("classes: 2"));
}

#[test]
fn k0_and_eigen_equiv() {
    let out = run(&["k0", "L(11;1,2,3)"]);
    assert_eq!(stdout(&out).trim(), "3");
    let out = run(&["k0", "L(2;1,1)"]);
    assert_eq!(stdout(&out).trim(), "none");
    let out = run(&["eigen-equiv", "L(6;1,2,3)", "L(5;1,1,2)"]);
    assert!(stdout(&out).starts_with("true"));
}

#[test]
fn extend_command() {
    let out = run(&["extend", "L(11;1,2,3)", "1"]);
    assert_eq!(stdout(&out).trim(), "L(11;1,2,3,1,2,3,4,5)");
}

#[test]
fn tower_commands() {
    let out = run(&["tower", "build", "11", "1", "12", "1,2,8", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("level 1: t_j 12 q 1452"));

    let out = run(&[
        "tower", "verify", "11", "1", "12", "1,2,8", "1", "--full-depth", "0",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("all checks passed"));
}

#[test]
fn dd_check_command() {
    let out = run(&["dd-check", "11", "1", "1,2,8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("useful true"));
    assert!(text.contains("isospectral true"));
    assert!(text.contains("isometric false"));
    assert!(text.contains("consistent true"));
}

#[test]
fn orbifold_commands() {
    let out = run(&["orbifold", "gassmann", "5"]);
    let text = stdout(&out);
    assert!(text.contains("almost_conjugate true"));
    assert!(text.contains("slices_agree_k50 true"));
    assert!(text.contains("fixed_coordinate_dim 2 / 0"));

    let out = run(&["orbifold", "unique", "5", "2", "50"]);
    assert_eq!(stdout(&out).trim(), "true");

    let dir = std::env::temp_dir().join(format!("lensspec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("group.txt");
    std::fs::write(&file, "# quarter turn in two planes\n(2 -1 | 4 -3)\n").unwrap();
    let out = run(&["orbifold", "spectrum", file.to_str().unwrap(), "3"]);
    let text = stdout(&out);
    assert!(text.contains("order 4"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn finite_part_and_example54() {
    let out = run(&["finite-part", "2", "3/10"]);
    let text = stdout(&out);
    assert!(text.contains("q 6"));
    assert!(text.contains("N 2471"));

    let out = run(&["example54", "10"]);
    let text = stdout(&out);
    assert!(text.contains("q 12"));
    assert!(text.contains("isospectral false"));
}

#[test]
fn output_is_stable_across_job_counts() {
    let a = run(&["search", "3", "13", "--jobs", "1"]);
    let b = run(&["search", "3", "13", "--jobs", "4"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn version_names_the_cutoff() {
    let out = run(&["--version"]);
    assert!(stdout(&out).contains("q*(n*(n-1)+1) - 1"));
}
