#![allow(clippy::neg_cmp_op_on_partial_ord)]
use std::path::Path;
use std::process::{Command, Output};

fn zpbox(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zpbox"));
    cmd.args(args).env_remove("ZPBOX_THREADS");
    if let Some(n) = threads {
        cmd.env("ZPBOX_THREADS", n);
    }
    cmd.output().expect("failed to launch zpbox")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn header(csv: &str) -> &str {
    csv.lines().next().unwrap()
}

fn json_number(json: &str, key: &str) -> Option<f64> {
    let line = json
        .lines()
        .find(|l| l.trim_start().starts_with(&format!("\"{key}\"")))?;
    line.split_once(':')?
        .1
        .trim()
        .trim_end_matches(',')
        .parse()
        .ok()
}

#[test]
fn csv_headers() {
    let cases: [(&[&str], &str); 5] = [
        (
            &["spectrum", "--levels", "3"],
            "n,energy,wall_force,collision_freq,quantum_size",
        ),
        (
            &["thermal", "--K", "2", "--t-grid", "0,1"],
            "t,ell,alpha,mean_force,p1,p2",
        ),
        (
            &["dynamics", "--K", "2", "--n-periods", "1"],
            "t,eta,v,E_particle,E_strain,E_kinetic,E_total",
        ),
        (
            &["sweep", "--k-grid", "1,2"],
            "K,ell,strain,binding_exact,binding_first_order,K_prime",
        ),
        (
            &["spectrum", "--ell", "2", "--levels", "1"],
            "n,energy,wall_force,collision_freq,quantum_size",
        ),
    ];
    for (args, expected) in cases {
        let out = zpbox(args, None);
        assert!(out.status.success(), "{args:?}");
        assert_eq!(header(&stdout(&out)), expected, "{args:?}");
        // Without --out the summary goes to stderr.
        assert!(String::from_utf8_lossy(&out.stderr).contains("\"command\""));
    }
}

#[test]
fn spectrum_rows() {
    let out = zpbox(&["spectrum", "--levels", "2"], None);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    let cols: Vec<f64> = rows[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cols, vec![2.0, 4.0, 8.0, 2.0 / std::f64::consts::PI, 0.5]);
}

#[test]
fn equilibrium_summary_on_stdout() {
    let out = zpbox(&["equilibrium", "--K", "100"], None);
    assert!(out.status.success());
    let json = stdout(&out);
    let ell = json_number(&json, "ell").unwrap();
    assert!((ell - 1.0189071539780985).abs() < 1e-15);
    assert!(json_number(&json, "residual").unwrap() < 1e-12);
    assert!(json.contains("\"alpha\": null"));
}

#[test]
fn physical_parameters() {
    let out = zpbox(
        &[
            "equilibrium",
            "--particle-mass",
            "9.1093837015e-31",
            "--box-size",
            "1e-9",
            "--spring-stiffness",
            "0.12049334804475138",
        ],
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json = stdout(&out);
    let k = json_number(&json, "K").unwrap();
    assert!((k - 2.0).abs() < 1e-12, "{k}");
    assert!(json_number(&json, "temperature_scale_K").unwrap() > 4000.0);
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# stiff box\nK = 100\nlevels = 4\n").unwrap();
    let cfg = cfg.to_string_lossy().into_owned();

    let out = zpbox(&["spectrum", "--config", &cfg], None);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 5);

    let out = zpbox(&["spectrum", "--config", &cfg, "--levels", "2"], None);
    assert_eq!(stdout(&out).lines().count(), 3);

    std::fs::write(dir.path().join("bad.cfg"), "K = 1\nK = 2\n").unwrap();
    let bad = dir.path().join("bad.cfg").to_string_lossy().into_owned();
    assert_eq!(
        zpbox(&["equilibrium", "--config", &bad], None)
            .status
            .code(),
        Some(2)
    );

    std::fs::write(dir.path().join("unknown.cfg"), "stiffnes = 1\n").unwrap();
    let unknown = dir
        .path()
        .join("unknown.cfg")
        .to_string_lossy()
        .into_owned();
    assert_eq!(
        zpbox(&["equilibrium", "--config", &unknown], None)
            .status
            .code(),
        Some(2)
    );

    let missing = dir
        .path()
        .join("missing.cfg")
        .to_string_lossy()
        .into_owned();
    assert_eq!(
        zpbox(&["equilibrium", "--config", &missing], None)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn scenario_echo_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("a");
    let out_s = out_dir.to_string_lossy().into_owned();
    let out = zpbox(
        &[
            "thermal", "--K", "2", "--t-grid", "0:1:0.5", "--t", "0.5", "--out", &out_s,
        ],
        None,
    );
    assert!(out.status.success());
    let summary = std::fs::read_to_string(out_dir.join("summary.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&summary).unwrap();
    let echo = value["scenario"].as_str().unwrap();

    let cfg = dir.path().join("echo.cfg");
    std::fs::write(&cfg, echo).unwrap();
    let csv_before = std::fs::read(out_dir.join("thermal.csv")).unwrap();
    let cfg_s = cfg.to_string_lossy().into_owned();
    let again = zpbox(&["thermal", "--config", &cfg_s], None);
    assert!(
        again.status.success(),
        "{}",
        String::from_utf8_lossy(&again.stderr)
    );
    assert_eq!(
        std::fs::read(out_dir.join("thermal.csv")).unwrap(),
        csv_before
    );
    assert_eq!(
        std::fs::read_to_string(out_dir.join("summary.json")).unwrap(),
        summary
    );
}

#[test]
fn summary_lists_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_s = dir.path().join("o").to_string_lossy().into_owned();
    let out = zpbox(&["sweep", "--k-grid", "1,10", "--out", &out_s], None);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let outputs: Vec<&str> = value["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(outputs.len(), 2);
    assert!(outputs[0].ends_with("sweep.csv") && Path::new(outputs[0]).exists());
    assert!(outputs[1].ends_with("summary.json"));
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let args = ["sweep", "--k-grid", "0.01:10:0.37"];
    let one = zpbox(&args, Some("1"));
    let many = zpbox(&args, Some("4"));
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(stdout(&one).lines().count(), 29);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = zpbox(&["sweep", "--k-grid", "1,2"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rest_dynamics_is_constant() {
    let out = zpbox(
        &["dynamics", "--K", "2", "--y0", "0", "--n-periods", "2"],
        None,
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2001);
    for row in &rows {
        assert_eq!(&row[1..], &rows[0][1..]);
    }
}

#[test]
fn usage_errors() {
    for args in [
        &["equilibrium"][..],
        &["equilibrium", "--mu", "10"],
        &["equilibrium", "--K", "-1"],
        &["equilibrium", "--particle-mass", "1e-30"],
        &["dynamics", "--K", "2", "--y0", "1.5"],
        &["thermal", "--K", "2", "--t-grid", "1,0"],
        &["spectrum", "--levels", "0"],
        &[],
    ] {
        let out = zpbox(args, None);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn help_succeeds() {
    let out = zpbox(&["--help"], None);
    assert!(out.status.success());
    let text = stdout(&out);
    for cmd in ["spectrum", "equilibrium", "thermal", "dynamics", "sweep"] {
        assert!(text.contains(cmd), "{cmd}");
    }
}

#[test]
fn numerical_failure_exits_1_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("collapse");
    let out_s = out_dir.to_string_lossy().into_owned();
    let out = zpbox(
        &[
            "dynamics",
            "--K",
            "2",
            "--y0",
            "0.9",
            "--dt-factor",
            "1.5",
            "--out",
            &out_s,
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("collapse"));
    assert!(!out_dir.exists());
}
