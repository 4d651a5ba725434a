use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eulersum"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eulersum-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn a_numbers_as_csv() {
    let out = bin().args(["a", "--max-n", "3", "--format", "csv"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,A_n\n1,1/2\n2,7/24\n3,1/16\n");
}

#[test]
fn negative_h_table() {
    let out = bin()
        .args(["a", "--negative-h", "--max-m", "2", "--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "s,h(s)\n-2,1/24\n-4,-1/80\n");
}

#[test]
fn h_and_f_values() {
    let out = bin().args(["h", "2", "--prec", "25", "--format", "csv"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2.40411380631918857079947"), "{text}");

    let out = bin()
        .args(["F", "-2", "--regime", "circle", "--prec", "25", "--format", "json"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"F(s)\": \"1.25e-1\""), "{text}");
}

#[test]
fn errors_exit_with_code_two() {
    let out = bin().args(["h", "0", "--prec", "20"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("pole"));
    let out = bin().args(["verify", "all", "--prec", "20", "--tol-exp", "30"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_then_report_round_trip() {
    let dir = scratch("report");
    let last = dir.join("last.json");
    let out_path = dir.join("out.csv");
    let status = bin()
        .args(["verify", "cor1", "--prec", "30", "--tol-exp", "18", "--max-m", "2"])
        .arg("--last-run")
        .arg(&last)
        .arg("--format")
        .arg("csv")
        .arg("--out")
        .arg(&out_path)
        .status()
        .unwrap();
    assert!(status.success());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert!(written.starts_with("identity_id,inputs,lhs,rhs,abs_diff,tolerance,passed\n"));

    let out = bin()
        .args(["report", "--format", "csv"])
        .arg("--last-run")
        .arg(&last)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), written);
    std::fs::remove_dir_all(dir).ok();
}
