//! End-to-end runs of the `walk-extrap` binary.

use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;
use walk_extrap::evaluation::build_v_discrete_dtrw;
use walk_extrap::inner_products::FunctionSpec;
use walk_extrap::oracle_sim::discrete_v;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walk-extrap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn rw_cosine_matches_closed_form() {
    let a = PI.to_string();
    let r = json(&[
        "--walk",
        "rw",
        "--n",
        "2",
        "--a",
        &a,
        "--b",
        "4",
        "--function",
        "builtin:cos",
    ]);
    assert_eq!(r["schema"], 1);
    let p = 0.5 + 3.0 / PI.powi(3);
    assert!((r["p_star"].as_f64().unwrap() - p).abs() < 1e-12);
    let mt = -1.0 + (3.0 * (4.0 - PI) / PI.powi(3)) * -2.0;
    assert!((r["m_tilde"].as_f64().unwrap() - mt).abs() < 1e-12);
    assert_eq!(r["v_coefficients_w"].as_array().unwrap().len(), 3);
    assert!(!r["brackets"].as_array().unwrap().is_empty());
    assert_eq!(r["discrete_model"], false);
}

#[test]
fn ctqw_identity_reproduces_b() {
    let r = json(&[
        "--walk",
        "ctqw",
        "--n",
        "2",
        "--a",
        "1",
        "--b",
        "2",
        "--function",
        "builtin:identity",
    ]);
    assert_eq!(r["p_star"].as_f64(), Some(0.0));
    assert_eq!(r["m"].as_f64(), Some(2.0));
    assert_eq!(r["m_tilde"].as_f64(), Some(2.0));
}

#[test]
fn dtrw_from_csv_agrees_with_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.csv");
    let mut body = String::from("x,y\n");
    let pts: Vec<(f64, f64)> = (0..=20)
        .map(|i| (i as f64 * 0.5, (i as f64 * 0.3).sin() + 0.1 * i as f64))
        .collect();
    for (x, y) in &pts {
        body.push_str(&format!("{x},{y}\n"));
    }
    std::fs::write(&path, body).unwrap();
    let func = format!("csv:{}", path.display());
    let r = json(&[
        "--walk",
        "dtrw-z",
        "--n",
        "2",
        "--a",
        "10",
        "--b",
        "12",
        "--function",
        &func,
    ]);
    assert_eq!(r["discrete_model"], true);
    let f = FunctionSpec::sampled(pts).unwrap();
    let v = build_v_discrete_dtrw(&f, 10).unwrap();
    let p = r["p_star"].as_f64().unwrap();
    let w = 1.0 - 2.0 * p;
    assert!((v.eval(w) - discrete_v(&f, 10, p).unwrap()).abs() < 1e-10 * v.eval(w).abs());
    for c in r["candidates"].as_array().unwrap() {
        let q = c["p"].as_f64().unwrap();
        assert!(discrete_v(&f, 10, p).unwrap() <= discrete_v(&f, 10, q).unwrap() + 1e-9);
    }
}

#[test]
fn csv_table_can_be_truncated_and_defaults_a() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    std::fs::write(&path, "x,y\n0,1\n1,0.5\n2,0.25\n3,0.125\n").unwrap();
    let func = format!("csv:{}", path.display());
    let full = json(&["--walk", "ctqw", "--b", "4", "--function", &func]);
    assert_eq!(full["a"].as_f64(), Some(3.0));
    assert_eq!(full["f_at_a"].as_f64(), Some(0.125));
    let cut = json(&["--walk", "ctqw", "--a", "2.5", "--b", "4", "--function", &func]);
    assert_eq!(cut["f_at_a"].as_f64(), Some(0.1875));
}

#[test]
fn curve_and_formats() {
    let base = [
        "--walk",
        "dtqw",
        "--r",
        "0.6",
        "--n",
        "4",
        "--a",
        "2",
        "--b",
        "3",
        "--function",
        "builtin:poly:0,1,-0.2",
    ];
    let r = json(&[&base[..], &["--emit-v-curve", "5"]].concat());
    assert_eq!(r["r"].as_f64(), Some(0.6));
    assert_eq!(r["v_curve"].as_array().unwrap().len(), 5);

    let out = run(&[&base[..], &["--emit-v-curve", "5", "--format", "csv"]].concat());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("p,v\n0,"));
    assert_eq!(text.lines().count(), 6);

    let out = run(&[&base[..], &["--format", "text"]].concat());
    assert!(String::from_utf8(out.stdout).unwrap().contains("discriminant"));
}

#[test]
fn out_flag_writes_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = [
        "--walk",
        "rw",
        "--n",
        "4",
        "--a",
        "3",
        "--b",
        "5",
        "--function",
        "builtin:cos",
    ];
    let stdout = run(&args).stdout;
    let out = run(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn invalid_configs_exit_with_2() {
    let bad: [&[&str]; 7] = [
        &[
            "--walk",
            "rw",
            "--n",
            "3",
            "--a",
            "1",
            "--b",
            "2",
            "--function",
            "builtin:cos",
        ],
        &["--walk", "rw", "--a", "2", "--b", "1", "--function", "builtin:cos"],
        &[
            "--walk",
            "ctqw",
            "--r",
            "0.5",
            "--a",
            "1",
            "--b",
            "2",
            "--function",
            "builtin:cos",
        ],
        &[
            "--walk",
            "dtqw",
            "--r",
            "1.5",
            "--a",
            "1",
            "--b",
            "2",
            "--function",
            "builtin:cos",
        ],
        &["--walk", "rw", "--a", "1", "--b", "2", "--function", "builtin:tan"],
        &[
            "--walk",
            "dtrw-z",
            "--a",
            "2.5",
            "--b",
            "4",
            "--function",
            "builtin:cos",
        ],
        &[
            "--walk",
            "rw",
            "--a",
            "1",
            "--b",
            "2",
            "--function",
            "csv:/nonexistent/file.csv",
        ],
    ];
    for args in bad {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("invalid configuration"));
    }
}

#[test]
fn csv_header_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "t,value\n0,1\n1,2\n2,3\n").unwrap();
    let out = run(&[
        "--walk",
        "rw",
        "--b",
        "4",
        "--function",
        &format!("csv:{}", path.display()),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn log_env_does_not_change_stdout() {
    let args = [
        "--walk",
        "ctqw",
        "--n",
        "2",
        "--a",
        "1",
        "--b",
        "2",
        "--function",
        "builtin:cos",
    ];
    let quiet = run(&args);
    let loud = Command::new(env!("CARGO_BIN_EXE_walk-extrap"))
        .args(args)
        .env("WALK_EXTRAP_LOG", "debug")
        .output()
        .unwrap();
    assert_eq!(quiet.stdout, loud.stdout);
    assert!(!loud.stderr.is_empty());
}
