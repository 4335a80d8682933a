//! End-to-end runs of the subcommands against temporary configs.

use std::fs;
use std::path::{Path, PathBuf};

use lhsys::cli::{run, Command, Invocation, CSV_HEADER};
use lhsys::Error;

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn invoke(command: Command, config: &Path, out: &Path) -> lhsys::Result<i32> {
    run(&Invocation {
        command,
        config_path: config.to_path_buf(),
        out_dir: Some(out.to_path_buf()),
        cross_check: false,
        seed: None,
        tol: None,
    })
}

const MINIMAL_B2: &str = r#"
schema_version = 1
algebra = "b2"
chart = "epidemic"

[coefficients]
rho0 = "1"
b = "1"

[run]
t0 = 0.0
t1 = 5.0

[[initial]]
q = 0.66667
p = 3.0
"#;

#[test]
fn simulate_writes_the_documented_header_and_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), MINIMAL_B2);
    let code = invoke(Command::Simulate, &config, dir.path()).unwrap();
    assert_eq!(code, 0);
    let csv = fs::read_to_string(dir.path().join("simulate.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    assert_eq!(lines.count(), 200);
    // every row carries 7 numeric fields
    for line in csv.lines().skip(1) {
        let fields: Vec<_> = line.split(',').collect();
        assert_eq!(fields.len(), 7);
        for f in fields {
            f.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn simulate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), MINIMAL_B2);
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    invoke(Command::Simulate, &config, &out1).unwrap();
    invoke(Command::Simulate, &config, &out2).unwrap();
    let a = fs::read(out1.join("simulate.csv")).unwrap();
    let b = fs::read(out2.join("simulate.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn exact_rejects_the_two_photon_algebra() {
    let text = r#"
schema_version = 1
algebra = "h6"
chart = "cartesian"

[coefficients]
rho0 = "0.1"
b4 = 1.0
b5 = -1.0

[run]
t0 = 0.0
t1 = 1.0

[[initial]]
x = 1.0
y = 0.0
"#;
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), text);
    match invoke(Command::Exact, &config, dir.path()) {
        Err(Error::Unsupported(msg)) => {
            assert!(msg.contains("b2 and h4"), "{msg}");
        }
        other => panic!("expected unsupported, got {other:?}"),
    }
}

#[test]
fn exact_matches_simulate_for_the_book_system() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), MINIMAL_B2);
    invoke(Command::Exact, &config, dir.path()).unwrap();
    invoke(Command::Simulate, &config, dir.path()).unwrap();
    let exact = fs::read_to_string(dir.path().join("exact.csv")).unwrap();
    let sim = fs::read_to_string(dir.path().join("simulate.csv")).unwrap();
    for (le, ls) in exact.lines().skip(1).zip(sim.lines().skip(1)) {
        let pe: Vec<f64> = le.split(',').map(|v| v.parse().unwrap()).collect();
        let ps: Vec<f64> = ls.split(',').map(|v| v.parse().unwrap()).collect();
        for (a, b) in pe.iter().zip(&ps) {
            assert!((a - b).abs() < 1e-6 * b.abs().max(1.0), "{le} vs {ls}");
        }
    }
}

#[test]
fn forbidden_coefficient_is_reported_with_its_path() {
    let text = MINIMAL_B2.replace("b = \"1\"", "b = \"1\"\nb4 = 0.5");
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &text);
    match invoke(Command::Simulate, &config, dir.path()) {
        Err(Error::Config { path, .. }) => assert_eq!(path, "coefficients.b4"),
        other => panic!("expected config error, got {other:?}"),
    }
}

const H4_SUPERPOSE: &str = r#"
schema_version = 1
algebra = "h4"
chart = "cartesian"

[coefficients]
rho0 = "0.2*sin(t)"
b1 = "0.3*cos(t)"
b2 = "0.4"

[run]
t0 = 0.0
t1 = 4.0
samples = 81

[[initial]]   # anchor: the withheld general solution
x = 1.1
y = -0.4

[[initial]]   # first particular
x = 0.3
y = 0.8

[[initial]]   # second particular
x = -0.7
y = -1.2
"#;

#[test]
fn superpose_reconstructs_and_reports_the_error_column() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), H4_SUPERPOSE);
    invoke(Command::Superpose, &config, dir.path()).unwrap();
    let csv = fs::read_to_string(dir.path().join("superpose.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,x,y,q,p,mean_rho,variance,reconstruction_error"
    );
    let mut rows = 0;
    for line in lines {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(fields.len(), 8);
        assert!(fields[7] < 1e-6, "reconstruction error too large: {line}");
        rows += 1;
    }
    assert_eq!(rows, 81);
}

const H6_CONSTANTS: &str = r#"
schema_version = 1
algebra = "h6"
chart = "cartesian"

[coefficients]
rho0 = "0.1*cos(t)"
b1 = "0.2*exp(-0.5*t)"
b2 = "0.3*sin(t)"
b4 = "1 + 0.1*sin(t)"
b5 = "-1 + 0.1*cos(t)"

[run]
t0 = 0.0
t1 = 5.0
samples = 51

[[initial]]
x = 1.0
y = 0.5

[[initial]]
x = 0.2
y = -0.9

[[initial]]
x = -0.8
y = 0.3

[[initial]]
x = 0.6
y = 1.2
"#;

#[test]
fn constants_tracks_invariant_drift() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), H6_CONSTANTS);
    invoke(Command::Constants, &config, dir.path()).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("constants.json")).unwrap())
            .unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["algebra"], "h6");
    let constants = json["constants"].as_array().unwrap();
    assert_eq!(constants.len(), 4); // four signed triple products
    for c in constants {
        assert!(c["relative_drift"].as_f64().unwrap() < 1e-6);
        assert_eq!(c["values"].as_array().unwrap().len(), 51);
    }
    assert!(json["extracted"]["usable"].as_bool().unwrap());
}

#[test]
fn convert_emits_both_charts_for_each_state() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), H4_SUPERPOSE);
    invoke(Command::Convert, &config, dir.path()).unwrap();
    let csv = fs::read_to_string(dir.path().join("convert.csv")).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 4); // header + three states
    let fields: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    // x = 1.1, y = -0.4 and its epidemic image
    assert_eq!(fields[1], 1.1);
    assert_eq!(fields[2], -0.4);
    let d = 1.1f64 * 1.1 * 0.4 * 0.4 - 1.0;
    assert!((fields[3] - 1.1 * 1.1 * (-0.4) / d).abs() < 1e-12);
    assert!((fields[4] - d / 1.1).abs() < 1e-12);
}

#[test]
fn tol_flag_must_be_positive() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), MINIMAL_B2);
    let r = run(&Invocation {
        command: Command::Simulate,
        config_path: config,
        out_dir: Some(dir.path().to_path_buf()),
        cross_check: false,
        seed: None,
        tol: Some(-1.0),
    });
    assert!(matches!(r, Err(Error::Config { .. })));
}

#[test]
fn missing_config_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let r = invoke(
        Command::Simulate,
        &dir.path().join("nope.toml"),
        dir.path(),
    );
    assert!(matches!(r, Err(Error::Io { .. })));
}

#[test]
fn run_aborts_when_a_row_cannot_be_expressed_in_both_charts() {
    // x(t) = -0.5 + t meets the pole x = 0 of the inverse chart change at
    // t = 0.5, which the 5-point grid samples exactly
    let text = r#"
schema_version = 1
algebra = "h4"
chart = "cartesian"

[coefficients]
rho0 = 0.0
b1 = 1.0
b2 = 0.0

[run]
t0 = 0.0
t1 = 2.0
samples = 5

[[initial]]
x = -0.5
y = 0.7
"#;
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), text);
    match invoke(Command::Simulate, &config, dir.path()) {
        Err(Error::Unsupported(msg)) => {
            assert!(msg.contains("leaves the regular domain at t ="), "{msg}");
        }
        other => panic!("expected abort, got {other:?}"),
    }
}

#[test]
fn book_superposition_goes_through_the_oscillator_rule() {
    let text = r#"
schema_version = 1
algebra = "b2"
chart = "cartesian"

[coefficients]
rho0 = "0.2*sin(t)"
b = "0.4"

[run]
t0 = 0.0
t1 = 4.0
samples = 41

[[initial]]
x = 1.1
y = -0.4

[[initial]]
x = 0.3
y = 0.8

[[initial]]
x = -0.7
y = -1.2
"#;
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), text);
    invoke(Command::Superpose, &config, dir.path()).unwrap();
    let csv = fs::read_to_string(dir.path().join("superpose.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let err: f64 = line.split(',').next_back().unwrap().parse().unwrap();
        assert!(err < 1e-6, "{line}");
    }
}

#[test]
fn binary_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), MINIMAL_B2);
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_lhsys"))
        .args(["simulate", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    assert!(dir.path().join("simulate.csv").exists());

    // module errors surface on stderr with a nonzero code
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_lhsys"))
        .args(["simulate", "--config", "does-not-exist.toml"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("error:"));
}
