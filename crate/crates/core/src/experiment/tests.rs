use std::f64::consts::PI;

use super::*;

fn polynomial() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(FieldConfig::builtin("polynomial").unwrap(), [0.0, 0.0]);
    cfg.sweep = Sweep {
        h_max: 0.1,
        h_min: 0.02,
        count: 4,
    };
    cfg
}

#[test]
fn configs_parse_from_toml() {
    let cfg = ExperimentConfig::from_toml(
        r#"
base_point = ["pi/3", "-pi/2"]
degree_cap = 24
rule = { kind = "adaptive" }
sweep = { h_max = 0.1, h_min = 0.003, count = 8 }

[field]
builtin = "oscillating"
"#,
    )
    .unwrap();
    assert_eq!(cfg.field, FieldConfig::Oscillating);
    assert_eq!(cfg.base_point, [PI / 3.0, -PI / 2.0]);
    assert_eq!(cfg.rule, RuleConfig::Adaptive { m: None });
    assert_eq!(cfg.order, DEFAULT_ORDER);

    let cfg = ExperimentConfig::from_toml(
        r#"
base_point = "0,0"
[field]
builtin = "polynomial"
b = "0.5i"
"#,
    )
    .unwrap();
    match cfg.field {
        FieldConfig::Polynomial { a, b, .. } => {
            assert_eq!(a, Complex64::new(1.0, 0.0));
            assert_eq!(b, Complex64::new(0.0, 0.5));
        }
        f => panic!("{f:?}"),
    }
    assert_eq!(cfg.sweep, Sweep::default());
}

#[test]
fn configs_round_trip_through_toml() {
    let mut cfg = polynomial();
    cfg.gauge = Some(Poly::new([([1, 1], Complex64::new(0.3, 0.0))]));
    cfg.delta = Some(0.2);
    let text = toml::to_string(&cfg).unwrap();
    assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
}

#[test]
fn bad_configs_are_config_errors() {
    let bad = ExperimentConfig::from_toml("base_point = [0, 0]\n[field]\nbuiltin = \"nope\"\n").unwrap_err();
    assert_eq!(bad.exit_code(), 2);
    let mut cfg = polynomial();
    cfg.sweep.h_min = 0.2;
    assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
    let mut cfg = polynomial();
    cfg.sweep.count = 3;
    assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
    let mut cfg = polynomial();
    cfg.degree_cap = 10;
    assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    let mut cfg = polynomial();
    cfg.rule = RuleConfig::Fixed { n: 9 };
    assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
}

#[test]
fn sweeps_are_geometric() {
    let hs = Sweep::default().values();
    assert_eq!(hs.len(), 8);
    assert!((hs[0] - 0.1).abs() < 1e-15 && (hs[7] - 0.003).abs() < 1e-15);
    let q: Vec<f64> = hs.windows(2).map(|w| w[1] / w[0]).collect();
    assert!(q.iter().all(|r| (r - q[0]).abs() < 1e-12));
}

#[test]
fn points_outside_gamma_are_rejected_with_diagnostics() {
    let cfg = ExperimentConfig::new(FieldConfig::Oscillating, [PI / 2.0, -PI / 2.0]);
    let err = run(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("d_zbar B"), "{err}");

    let cfg = ExperimentConfig::new(FieldConfig::Oscillating, [PI / 3.0, 0.3]);
    let err = run(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("Im A"), "{err}");
}

#[test]
fn polynomial_run_produces_all_artifacts() {
    let cfg = polynomial();
    let a = run(&cfg).unwrap();
    assert!(a.gamma.in_gamma && a.gamma.det2 > 0.0);
    assert!((a.solution.mu - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    assert!(a.solution.identities.all_pass());
    assert_eq!(a.reports.len(), 4);
    assert!(a.reports.windows(2).all(|w| w[0].h > w[1].h));
    assert!(a.power_fit.is_none(), "four points over less than a decade cannot be fitted");

    let dir = std::env::temp_dir().join(format!("cmag-experiment-{}", std::process::id()));
    write_artifacts(&dir, &a).unwrap();
    for f in ["gamma.json", "wkb.json", "bound_fit.json", "residuals.csv", "residuals.json", "summary.json"] {
        assert!(dir.join(f).exists(), "{f}");
    }
    let csv = std::fs::read_to_string(dir.join("residuals.csv")).unwrap();
    assert!(csv.starts_with("# cmag-wkb v1\n"));
    assert_eq!(csv.lines().count(), 2 + 4);
    let again = residual_csv(&run(&cfg).unwrap().reports);
    assert_eq!(csv, again);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn gamma_csv_lists_failures() {
    let p = Potential::Oscillating;
    let reports = crate::fieldmodel::gamma_scan(&p, &Region::square(PI), 5);
    let csv = gamma_csv(&reports);
    assert!(csv.starts_with(GAMMA_CSV_HEADER));
    assert_eq!(csv.lines().count(), 2 + 25);
}
