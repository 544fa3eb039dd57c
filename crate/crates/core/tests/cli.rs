use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_pwm-steady");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const LCLR: &str = r#"{
    "circuit": {"kind": "lclr", "L": 100e-6, "C": 50e-6, "L1": 300e-6, "R": 1.0},
    "excitation": {"type": "spwm", "N": 11, "m": 0.9, "f": 60.0, "V_o": 100.0},
    "output": {"grid": 512}
}"#;

#[test]
fn solve_writes_waveform_and_summary() {
    let dir = TempDir::new().unwrap();
    let config = write(dir.path(), "c.json", LCLR);
    let out = dir.path().join("w.csv");
    let result = run(&["solve", "--config", &config, "--out", out.to_str().unwrap()]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let summary = String::from_utf8(result.stdout).unwrap();
    assert!(summary.contains("THD_percent:"));
    assert!(summary.contains("peak_ripple:"));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,v_s,output,i,i_1,v_C");
    assert_eq!(lines.len(), 513);
    assert!(!csv.contains('\r'));
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(fields[2], fields[4]);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let config = write(dir.path(), "c.json", LCLR);
    let a = run(&["solve", "--config", &config, "--nmax", "101"]);
    let b = run(&["solve", "--config", &config, "--nmax", "101"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}

#[test]
fn malformed_config_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("w.csv");
    for (name, text) in [
        ("truncated.json", "{\"circuit\": "),
        ("negative.json", &LCLR.replace("\"R\": 1.0", "\"R\": -1.0")),
        ("unknown.json", &LCLR.replace("lclr", "rlc")),
    ] {
        let config = write(dir.path(), name, text);
        let result = run(&["solve", "--config", &config, "--out", out.to_str().unwrap()]);
        assert_eq!(result.status.code(), Some(2), "{name}");
        assert!(!out.exists(), "{name}");
    }
    let missing = run(&["solve", "--config", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn repeated_roots_exit_3() {
    // R = sqrt(L / C) / 2 gives a double root
    let dir = TempDir::new().unwrap();
    let config = write(
        dir.path(),
        "c.json",
        r#"{"circuit": {"kind": "lrc", "L": 1.0, "R": 0.5, "C": 1.0},
            "excitation": {"type": "spwm", "N": 3, "f": 60.0, "V_o": 10.0}}"#,
    );
    let result = run(&["solve", "--config", &config]);
    assert_eq!(result.status.code(), Some(3));
    assert!(result.stdout.is_empty());
}

#[test]
fn verify_reports_oracle_deviation() {
    let dir = TempDir::new().unwrap();
    let config = write(dir.path(), "c.json", LCLR);
    let out = dir.path().join("w.csv");
    let result = run(&["verify", "--config", &config, "--out", out.to_str().unwrap()]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let summary = String::from_utf8(result.stdout).unwrap();
    let line = summary.lines().find(|l| l.starts_with("oracle_deviation:")).unwrap();
    let deviation: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(deviation <= 1e-5);
}

#[test]
fn spwm_lists_instants() {
    let result = run(&["spwm", "--n", "11", "--m", "0.9"]);
    assert!(result.status.success());
    let text = String::from_utf8(result.stdout).unwrap();
    let instants: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(instants.len(), 22);
    assert!(instants.windows(2).all(|w| w[0] < w[1]));
    assert!(instants[0] > 0.0 && instants[21] < 1.0 / 120.0);

    let empty = run(&["spwm", "--n", "11", "--m", "0"]);
    assert!(empty.status.success());
    assert!(empty.stdout.is_empty());

    assert_eq!(run(&["spwm", "--m", "1.5"]).status.code(), Some(2));
}

#[test]
fn spwm_instants_round_trip_through_file() {
    let dir = TempDir::new().unwrap();
    let instants = run(&["spwm", "--n", "11", "--m", "0.9", "--f", "60", "--vo", "100"]).stdout;
    let instants_path = dir.path().join("instants.txt");
    fs::write(&instants_path, &instants).unwrap();
    let from_file = write(
        dir.path(),
        "file.json",
        &format!(
            r#"{{"circuit": {{"kind": "lclr", "L": 100e-6, "C": 50e-6, "L1": 300e-6, "R": 1.0}},
                "excitation": {{"type": "instants", "f": 60.0, "V_o": 100.0, "instants_file": {:?}}},
                "output": {{"grid": 512}}}}"#,
            instants_path.to_str().unwrap()
        ),
    );
    let generated = write(dir.path(), "spwm.json", LCLR);
    let a = run(&["solve", "--config", &from_file]);
    let b = run(&["solve", "--config", &generated]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_rows_follow_input() {
    let dir = TempDir::new().unwrap();
    let with_pairs = LCLR.replace(
        "\"output\": {\"grid\": 512}",
        "\"sweep\": {\"pairs\": [[30e-6, 20e-6], [50e-6, 5e-6], [30e-6, 20e-6]]}",
    );
    let config = write(dir.path(), "s.json", &with_pairs);
    let result = run(&["sweep", "--config", &config]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let text = String::from_utf8(result.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "L_uH,C_uF,THD_percent,peak_ripple,status");
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], lines[3]);
    assert!(lines[2].starts_with("5.0000000000000000e1,5.0000000000000000e0,"));

    let empty = write(dir.path(), "e.json", &LCLR.replace("\"output\": {\"grid\": 512}", "\"sweep\": {\"pairs\": []}"));
    let result = run(&["sweep", "--config", &empty]);
    assert!(result.status.success());
    assert_eq!(String::from_utf8(result.stdout).unwrap(), "L_uH,C_uF,THD_percent,peak_ripple,status\n");
}

#[test]
fn oracle_flag_on_lr_load() {
    let dir = TempDir::new().unwrap();
    let config = write(
        dir.path(),
        "lr.json",
        r#"{"circuit": {"kind": "lr", "R": 1.0, "L": 300e-6},
            "excitation": {"type": "spwm", "N": 11, "m": 0.9, "f": 60.0, "V_o": 100.0}}"#,
    );
    let out = dir.path().join("w.csv");
    let result = run(&["solve", "--config", &config, "--oracle", "--out", out.to_str().unwrap()]);
    assert!(result.status.success());
    let summary = String::from_utf8(result.stdout).unwrap();
    let line = summary.lines().find(|l| l.starts_with("oracle_deviation:")).unwrap();
    let deviation: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(deviation <= 1e-6, "{deviation}");
    let csv = fs::read_to_string(out).unwrap();
    // LR has only the inductor current
    assert!(csv.lines().nth(1).unwrap().ends_with(",,"));
}
