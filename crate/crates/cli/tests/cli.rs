//! End-to-end runs of the `zollspec` binary.

use std::path::Path;
use std::process::{Command, Output};

const ZETA2: &str = r#"{
  "potential": [
    {"px": 2, "py": 0, "pz": 0, "re": 1.0, "im": 0.0},
    {"px": 1, "py": 1, "pz": 0, "re": 0.0, "im": 2.0},
    {"px": 0, "py": 2, "pz": 0, "re": -1.0, "im": 0.0}
  ],
  "lmax": 12,
  "resolution": {"nx": 6, "ny": 4},
  "k_list": [3, 7],
  "samples": 200
}"#;

const FREE: &str =
    r#"{"potential": [], "lmax": 6, "k_list": [0, 2, 5], "samples": 200, "n_angles": 16}"#;

fn zollspec(dir: &Path, command: &str, config: &str, extra: &[&str]) -> Output {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_zollspec"))
        .arg(command)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .env("ZOLLSPEC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn spectrum_of_zeta_squared_is_laplace_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let out = zollspec(dir.path(), "spectrum", ZETA2, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("out/spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("re,im,cluster,residual"));
    let mut counts = vec![0usize; 13];
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let re: f64 = f[0].parse().unwrap();
        let im: f64 = f[1].parse().unwrap();
        assert_eq!(im, 0.0);
        let l = (0..=12)
            .find(|l| (re - (l * (l + 1)) as f64).abs() < 1e-10)
            .expect("eigenvalue is some l(l+1)");
        assert_eq!(f[2], l.to_string());
        counts[l] += 1;
    }
    assert_eq!(counts, (0..=12).map(|l| 2 * l + 1).collect::<Vec<_>>());
}

#[test]
fn numrange_of_free_operator_is_a_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = zollspec(dir.path(), "numrange", FREE, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for k in [0, 2, 5] {
        let csv =
            std::fs::read_to_string(dir.path().join(format!("out/numrange_k{k}.csv"))).unwrap();
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert!(!rows.is_empty());
        for row in rows {
            let f: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
            assert_eq!(f, vec![-0.25, 0.0], "k = {k}");
        }
    }
    assert!(dir.path().join("out/numrange.svg").exists());
}

#[test]
fn every_data_command_writes_its_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let expected = [
        ("spectrum", vec!["spectrum.csv"]),
        ("pspec", vec!["pspec_grid.csv", "pspec.svg"]),
        (
            "numrange",
            vec!["numrange_k3.csv", "numrange_k7.csv", "numrange.svg"],
        ),
        ("radon", vec!["radon_samples.csv"]),
        ("bracket", vec!["bracket_reports.csv"]),
        ("quasimode", vec!["quasimode_decay.csv"]),
    ];
    for (command, files) in expected {
        let out = zollspec(dir.path(), command, ZETA2, &["--threads", "1"]);
        assert_eq!(out.status.code(), Some(0), "{command}: {}", stderr(&out));
        for f in files {
            assert!(
                dir.path().join("out").join(f).exists(),
                "{command} did not write {f}"
            );
        }
    }
    let svg = std::fs::read_to_string(dir.path().join("out/pspec.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for command in ["spectrum", "pspec", "quasimode"] {
        let oa = zollspec(a.path(), command, ZETA2, &["--threads", "1"]);
        let ob = zollspec(b.path(), command, ZETA2, &["--threads", "3"]);
        assert!(oa.status.success() && ob.status.success());
    }
    for entry in std::fs::read_dir(a.path().join("out")).unwrap() {
        let name = entry.unwrap().file_name();
        let x = std::fs::read(a.path().join("out").join(&name)).unwrap();
        let y = std::fs::read(b.path().join("out").join(&name)).unwrap();
        assert_eq!(x, y, "{name:?} differs");
    }
}

#[test]
fn config_errors_exit_with_two_and_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = ZETA2.replace("\"lmax\": 12", "\"lmax\": 12, \"lmx\": 3");
    let out = zollspec(dir.path(), "spectrum", &unknown, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("lmx"), "{}", stderr(&out));

    let low = ZETA2.replace("\"lmax\": 12", "\"lmax\": 1");
    let out = zollspec(dir.path(), "spectrum", &low, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("lmax below potential degree"));

    let negative = ZETA2.replace(
        "\"samples\": 200",
        "\"samples\": 200, \"eps_list\": [-1e-2]",
    );
    let out = zollspec(dir.path(), "pspec", &negative, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("eps_list"));

    let out = zollspec(dir.path(), "spectrum", "{\n  \"lmax\": 4,\n  ]", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn numerical_failure_exits_with_three_and_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    // cluster 11 is beyond the trusted band 12 - 2 = 10
    let cfg = ZETA2.replace("\"k_list\": [3, 7]", "\"k_list\": [3, 11]");
    let out = zollspec(dir.path(), "quasimode", &cfg, &[]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("trusted band"));
    assert!(!dir.path().join("out/quasimode_decay.csv").exists());
}

#[test]
fn unwritable_output_removes_partial_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    std::fs::write(&cfg, ZETA2).unwrap();
    // "out/spectrum.csv"-style writes fail when the target name is a directory
    let out_dir = dir.path().join("out");
    std::fs::create_dir_all(out_dir.join("pspec_grid.csv")).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_zollspec"))
        .args(["pspec", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(
        !out_dir.join("pspec.svg").exists(),
        "partial artifact left behind"
    );
}
