use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corput-lab"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn verify_passing_suite_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version":1,"suite":"mixture","seed":5,"cases":8}"#,
    );
    let out = dir.path().join("out");
    let o = lab(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("mixture: PASS"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("mixture.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["cases"].as_array().unwrap().len(), 8);
    let csv = std::fs::read_to_string(out.join("mixture_cases.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
}

#[test]
fn verify_failing_suite_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"version":1,"suite":"vdc_1d","tolerances":{"stability":1.0}}"#,
    );
    let out = dir.path().join("out");
    let o = lab(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("vdc_1d: FAIL"));
    assert!(out.join("vdc_1d.json").exists());
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write_config(dir.path(), r#"{"version":1,"suite":"krug","unknown":1}"#);
    assert_eq!(
        code(&lab(&[
            "verify",
            "--config",
            &cfg,
            "--out",
            out.to_str().unwrap()
        ])),
        2
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        code(&lab(&[
            "verify",
            "--config",
            missing.to_str().unwrap(),
            "--out",
            "x"
        ])),
        2
    );
    assert_eq!(code(&lab(&["frobnicate"])), 2);
    let o = lab(&["oscint", "--f", "x1^^2", "--measure", "piecewise [0,1] [1]"]);
    assert_eq!(code(&o), 2);
    let o = lab(&[
        "modulus",
        "--density",
        "piecewise [0,1] [1]",
        "--eps",
        "-0.1",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn oscint_csv_matches_closed_form() {
    // ∫₀¹ e^{itx} dx = (e^{it} − 1)/(it).
    let o = lab(&[
        "oscint",
        "--f",
        "x1",
        "--measure",
        "piecewise [0,1] [1]",
        "--t-min",
        "1",
        "--t-max",
        "50",
        "--points",
        "6",
        "--method",
        "exact",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,re,im,abs,err"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    for r in rows {
        let t = r[0];
        let (re, im) = (t.sin() / t, (1.0 - t.cos()) / t);
        assert!(
            (r[1] - re).abs() < 1e-10 && (r[2] - im).abs() < 1e-10,
            "t={t}"
        );
    }
}

#[test]
fn pushforward_is_seeded_and_exact_mode_works() {
    let args = [
        "pushforward",
        "--f",
        "x1*x2",
        "--measure",
        r#"{"type":"box","intervals":[[0,1],[0,1]]}"#,
        "--mc-count",
        "10000",
        "--bins",
        "32",
        "--seed",
        "3",
    ];
    let a = lab(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, lab(&args).stdout);
    let o = lab(&[
        "pushforward",
        "--f",
        "x1^2",
        "--measure",
        "piecewise [0,1] [1]",
        "--exact",
        "--bins",
        "16",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn modulus_and_sublevel() {
    let o = lab(&[
        "modulus",
        "--density",
        "piecewise [0,1] [1]",
        "--eps",
        "0.1,0.2",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    // The indicator of [0,1] has ω(ε) = 2ε.
    assert!((row[1] - 0.2).abs() < 1e-12);
    let o = lab(&[
        "sublevel",
        "--f",
        "0.5*x1^2",
        "--measure",
        "piecewise [0,1] [1]",
        "--eps",
        "0.001,0.01",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with("true")));
}
