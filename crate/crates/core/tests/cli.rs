use std::path::Path;
use std::process::{Command, Output};

fn cmag(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmag-wkb"))
        .args(args)
        .env("CMAG_WKB_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("cmag-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn polynomial_run(out: &Path, threads: &str) -> Output {
    cmag(
        &[
            "run", "--builtin", "polynomial", "--a", "1", "--b", "i", "--c", "1", "--x0", "0,0", "--N", "1", "--h",
            "0.1:0.01:5", "--out", out.to_str().unwrap(),
        ],
        threads,
    )
}

#[test]
fn runs_are_deterministic() {
    let (a, b) = (scratch("a"), scratch("b"));
    for dir in [&a, &b] {
        let out = polynomial_run(dir, "3");
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for file in ["residuals.csv", "residuals.json", "gamma.json", "wkb.json", "bound_fit.json", "summary.json"] {
        let x = std::fs::read(a.join(file)).unwrap();
        let y = std::fs::read(b.join(file)).unwrap();
        assert!(x == y, "{file} differs between runs");
    }
    let csv = std::fs::read_to_string(a.join("residuals.csv")).unwrap();
    assert!(csv.starts_with("# cmag-wkb v1\n"));
    assert_eq!(csv.lines().count(), 2 + 5);
    // The written config reproduces the run.
    let c = scratch("c");
    let cfg = a.join("config.toml");
    let out = cmag(&["run", "--config", cfg.to_str().unwrap(), "--out", c.to_str().unwrap()], "3");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(c.join("residuals.csv")).unwrap(), csv.as_bytes());
    for dir in [a, b, c] {
        std::fs::remove_dir_all(dir).unwrap();
    }
}

#[test]
fn exit_codes_follow_the_failure_kind() {
    let out = cmag(&["run", "--builtin", "oscillating", "--x0", "pi/2,-pi/2"], "1");
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d_zbar B vanishes"));

    let out = cmag(&["run", "--builtin", "polynomial", "--x0", "0,0", "--h", "0.1:0.2:8"], "1");
    assert_eq!(out.status.code(), Some(2));

    let out = cmag(&["run", "--builtin", "polynomial", "--x0", "0,0", "--cap", "12"], "1");
    assert_eq!(out.status.code(), Some(2));

    let out = cmag(&["run", "--builtin", "nothing", "--x0", "0,0"], "1");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wrapper_subcommands_emit_tables() {
    let out = cmag(&["gamma-scan", "--builtin", "oscillating", "--points", "33"], "2");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# cmag-wkb v1\n"));
    assert_eq!(text.lines().count(), 2 + 33 * 33);

    let out = cmag(&["check-conditions", "--builtin", "miller_simon", "--c", "1+i", "--alpha", "1"], "2");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("C1,") || l.starts_with("C2,")).all(|l| l.contains(",true,")));

    let out = cmag(&["bound-fit", "--builtin", "polynomial", "--x0", "0,0", "--order", "4"], "2");
    assert!(out.status.success());
    let fit: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(fit["per_j_norms"].as_array().unwrap().len(), 5);
}
