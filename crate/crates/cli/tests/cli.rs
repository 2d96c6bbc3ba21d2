use std::path::Path;
use std::process::{Command, Output};

fn pdrx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdrx")).args(args).output().unwrap()
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.json");
    std::fs::write(
        &path,
        r#"{
  "signal": "bpsk",
  "mean_photons": 0.5,
  "sigma_grid": {"start": 0.0, "stop": 1.0, "steps": 5},
  "receivers": [
    {"kind": "helstrom"},
    {"kind": "accinfo"},
    {"kind": "atomic"},
    {"kind": "pnr", "resolution": 1}
  ],
  "seed": 3
}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sweep_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let csv = dir.path().join("out/rows.csv");
    let json = dir.path().join("out/rows.json");
    let out = pdrx(&["sweep", "--config", &cfg, "--out", csv.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("sigma,p_helstrom,p_atomic_opt,i_atomic_opt,i_accessible,p_pnr_m1,i_pnr_m1"));
    assert_eq!(lines.count(), 5);
    let json = std::fs::read_to_string(&json).unwrap();
    assert_eq!(json.matches("\"sigma\":").count(), 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("5 rows"));
}

#[test]
fn sweep_to_stdout_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let a = pdrx(&["sweep", "--config", &cfg, "--out", "-"]);
    let b = pdrx(&["sweep", "--config", &cfg, "--out", "-"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = pdrx(&["sweep", "--config", &cfg, "--out", "-", "--seed", "4"]);
    assert!(c.status.success());
}

#[test]
fn point_prints_json_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = pdrx(&["point", "--config", &cfg, "--sigma", "0.4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"sigma\": 0.4"));
    assert!(text.contains("\"p_helstrom\""));
}

#[test]
fn crossings_between_columns() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    std::fs::write(&csv, "sigma,a,b\n0,0,1\n1,2,1\n2,3,1\n").unwrap();
    let run = |a: &str, b: &str| {
        let out = pdrx(&["crossings", "--csv", csv.to_str().unwrap(), "--a", a, "--b", b]);
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("a", "b"), "0.500000\n");
    assert_eq!(run("b", "b"), "none\n");
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"signal": "bpsk", "mean_photons": -1}"#).unwrap();
    let out = pdrx(&["sweep", "--config", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let cfg = small_config(dir.path());
    let out = pdrx(&["point", "--config", &cfg, "--sigma", "-1"]);
    assert!(!out.status.success());

    let out = pdrx(&["sweep", "--config", &cfg, "--cutoff", "3", "--out", "-"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}
