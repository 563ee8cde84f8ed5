//! End-to-end checks of the `subolink` binary: flags, exit codes, and
//! output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subolink"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn default_run_emits_one_row() {
    let out = run(&[]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("# subolink "));
    assert!(text.contains("# generator = chacha12/splitmix64\n"));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 2, "header plus one row:\n{text}");
    assert!(data[0].starts_with("u,elevation_deg,d_k,"));
    assert!(data[1].ends_with(",true"));
}

#[test]
fn sweep_flags_control_the_grid() {
    let out = run(&["--sweep-u", "0.14:0.22:3", "--sweep-dk", "50e3:200e3:2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows = text.lines().filter(|l| !l.starts_with('#')).skip(1).count();
    assert_eq!(rows, 6);
    assert!(run(&["--sweep-u", "0.3:0.1:5"]).status.code() == Some(2));
    assert!(run(&["--sweep-u", "nonsense"]).status.code() == Some(2));
}

#[test]
fn mc_check_adds_columns() {
    let out = run(&["--mc-check", "200", "--seed", "11"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.ends_with("E_I_mc_W,E_I_mc_stderr_W"));
    assert!(text.contains("# seed = 11\n"));
}

#[test]
fn overlap_table_mode() {
    let out = run(&["--overlap-table"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("orbit,d_m,f_pl,overlap_gain,product\n"));
    assert!(text.contains("# shell 0 "));
}

#[test]
fn config_file_and_out_flag() {
    let dir = std::env::temp_dir().join(format!("subolink-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "eps_qos = 1e-8\nelevation_deg = 80\n").unwrap();
    let out_path = dir.join("result.csv");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    // cos(80 deg) ~ 0.1736 echoed in the row.
    let row = text.lines().filter(|l| !l.starts_with('#')).nth(1).unwrap();
    let u: f64 = row.split(',').next().unwrap().parse().unwrap();
    assert!((u - 80f64.to_radians().cos()).abs() < 1e-12);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes_for_bad_inputs() {
    // Validation error in the config: exit 2.
    let dir = std::env::temp_dir().join(format!("subolink-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "eps_qos = 1.5\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eps_qos"));
    // Missing file: exit 3.
    let missing: PathBuf = dir.join("nope.cfg");
    let out = run(&["--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["--sweep-u", "0.14:0.2:2", "--mc-check", "150", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
