use corput_core::harness::{fit_constant, run_suite, ExperimentConfig, Suite, Verdict};
use corput_core::Error;

fn quick(suite: Suite, cases: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(suite).with_seed(17);
    cfg.cases = Some(cases);
    cfg
}

#[test]
fn identical_configs_give_identical_bytes() {
    for (suite, cases) in [
        (Suite::Mixture, 10),
        (Suite::TEquiv, 5),
        (Suite::DividedDiff, 12),
    ] {
        let a = run_suite(&quick(suite, cases)).unwrap();
        let b = run_suite(&quick(suite, cases)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.cases_csv(), b.cases_csv());
    }
    // Monte Carlo suites are seeded too.
    let mut cfg = ExperimentConfig::new(Suite::CwRatio);
    cfg.mc_count = Some(20_000);
    let a = run_suite(&cfg).unwrap().to_json();
    assert_eq!(a, run_suite(&cfg).unwrap().to_json());
}

#[test]
fn different_seeds_change_the_cases() {
    let a = run_suite(&quick(Suite::Mixture, 5)).unwrap();
    let b = run_suite(&quick(Suite::Mixture, 5).with_seed(18)).unwrap();
    assert_ne!(a.to_json(), b.to_json());
}

#[test]
fn report_schema() {
    let r = run_suite(&quick(Suite::Quantile4e, 6)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    for key in ["suite", "cases", "verdict", "constants", "seed", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["suite"], "quantile_4e");
    assert_eq!(v["cases"].as_array().unwrap().len(), 6);
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.passed(), r.cases.iter().all(|c| c.pass));
}

#[test]
fn report_files_are_written() {
    let dir = std::env::temp_dir().join(format!("corput-report-{}", std::process::id()));
    let r = run_suite(&quick(Suite::TMeas, 4)).unwrap();
    let paths = r.write_to(&dir).unwrap();
    assert!(paths.iter().any(|p| p.ends_with("t_meas.json")));
    assert!(paths.iter().any(|p| p.ends_with("t_meas_cases.csv")));
    let text = std::fs::read_to_string(dir.join("t_meas.json")).unwrap();
    assert_eq!(text, r.to_json());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_schema_is_strict() {
    let ok = ExperimentConfig::from_json(r#"{"version":1,"suite":"krug","seed":3}"#).unwrap();
    assert_eq!((ok.suite, ok.seed), (Suite::Krug, 3));
    for bad in [
        r#"{"version":1,"suite":"krug","colour":"red"}"#,
        r#"{"version":2,"suite":"krug"}"#,
        r#"{"version":1,"suite":"nope"}"#,
        r#"{"version":1,"suite":"krug","tolerances":{"slakc":0.1}}"#,
        r#"{"version":1,"suite":"main_reg","family":{"dims":[],"degrees":[2],"count":1}}"#,
        r#"{"version":1,"suite":"krug""#,
    ] {
        assert!(
            matches!(ExperimentConfig::from_json(bad), Err(Error::Config(_))),
            "{bad}"
        );
    }
}

#[test]
fn fitted_constants() {
    let s: Vec<(f64, f64)> = [1e-4, 1e-3, 1e-2]
        .iter()
        .map(|e: &f64| (2.0 * e.sqrt(), e.sqrt()))
        .collect();
    assert!((fit_constant(&s).unwrap().value - 2.0).abs() < 1e-12);
    assert_eq!(fit_constant(&[(3.0, 2.0)]).unwrap().value, 1.5);
    let f = fit_constant(&[(1.0, 1.0), (9.0, 1.0), (2.0, 1.0)]).unwrap();
    assert_eq!(f.index, 1);
    assert!(fit_constant(&[]).is_err());
}
