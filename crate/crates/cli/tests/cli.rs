use std::path::PathBuf;
use std::process::{Command, Output};

fn mmin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmin"))
        .args(args)
        .env_remove("MMIN_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mmin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn column(text: &str, method: &str) -> Vec<String> {
    text.lines()
        .filter(|l| l.split_whitespace().next() == Some(method))
        .map(|l| l.split_whitespace().nth(3).unwrap().to_string())
        .collect()
}

#[test]
fn report_ex1_gamma_column() {
    let o = mmin(&["report", "ex1", "--t-max", "10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(
        column(&text, "gamma_t"),
        [
            "0.7905", "0.8328", "0.8569", "0.8659", "0.8708", "0.8737", "0.8749", "0.8754",
            "0.8757", "0.8759"
        ]
    );
    assert!(text.contains("tau: 0.8873"));
    assert!(text.contains("n/a (requires strict diagonal dominance)"));
}

#[test]
fn report_ex2_gamma_tilde_column() {
    let o = mmin(&["report", "ex2", "--t-max", "10"]);
    assert!(o.status.success());
    assert_eq!(
        column(&stdout(&o), "gamma_tilde_t"),
        [
            "0.6288", "0.8192", "0.9302", "0.9968", "1.0337", "1.0533", "1.0649", "1.0718",
            "1.0760", "1.0785"
        ]
    );
}

#[test]
fn oracle_ex3() {
    let o = mmin(&["oracle", "ex3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1.0000\n");
    let o = mmin(&["oracle", "ex3", "--tol", "1e-10", "--digits", "8"]);
    assert_eq!(stdout(&o), "1.00000000\n");
}

#[test]
fn tolerance_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_mmin"))
        .args(["oracle", "ex1"])
        .env("MMIN_TOL", "1e-9")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0.8873\n");
    let o = Command::new(env!("CARGO_BIN_EXE_mmin"))
        .args(["oracle", "ex1"])
        .env("MMIN_TOL", "tiny")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("MMIN_TOL"));
}

#[test]
fn classify_prints_key_values() {
    let o = mmin(&["classify", "ex1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("is_sdd: false"));
    assert!(text.contains("is_m_matrix: true"));
    assert!(text.contains("is_wcdd: false"));
}

#[test]
fn bounds_csv_has_header_and_full_precision() {
    let o = mmin(&[
        "bounds",
        "ex1",
        "--t-max",
        "3",
        "--methods",
        "gamma_t,wang_sun",
        "--format",
        "csv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("method,kind,t,value,applicable,reason"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("wang_sun,lower,,0.722"));
    let gamma1: f64 = rows[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!((gamma1 - 0.7905).abs() < 5e-5);
    assert!(rows[1].split(',').nth(3).unwrap().len() > 8);
}

#[test]
fn bounds_json_shape() {
    let o = mmin(&[
        "bounds",
        "ex2",
        "--t-max",
        "2",
        "--methods",
        "omega_tilde_t",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["matrix_id"], "ex2");
    assert_eq!(v["t_max"], 2);
    assert!(v["tau"].as_f64().unwrap() > 1.0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row["method"], "omega_tilde_t");
        assert_eq!(row["kind"], "lower");
        assert_eq!(row["t"], k + 1);
        assert_eq!(row["applicable"], true);
        assert!(row["value"].is_f64());
        assert!(row["reason"].is_null());
    }
}

#[test]
fn generate_round_trips_through_files() {
    for ext in ["txt", "csv", "json"] {
        let path = scratch(&format!("g.{ext}"));
        let p = path.to_str().unwrap();
        let o = mmin(&["generate", "--n", "6", "--seed", "5", "--out", p]);
        assert!(o.status.success(), "{}", stderr(&o));
        let o = mmin(&["classify", p]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).contains("is_sdd: true"));
    }
    let path = scratch("ds.json");
    let p = path.to_str().unwrap();
    let o = mmin(&[
        "generate",
        "--n",
        "5",
        "--seed",
        "3",
        "--ds-inverse",
        "--strength",
        "2",
        "--out",
        p,
    ]);
    assert!(o.status.success());
    assert!(mmin(&["report", p, "--t-max", "2"]).status.success());
}

#[test]
fn verify_small_suite() {
    let o = mmin(&["verify", "--trials", "12", "--t-max", "3", "--seed", "7"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("trials: 15"));
    assert!(text.contains("failures: 0"));
}

#[test]
fn usage_errors_exit_two() {
    let o = mmin(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!stderr(&o).is_empty());
    assert!(stdout(&o).is_empty());
    let o = mmin(&["report", "ex1", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mmin(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two() {
    let path = scratch("bad.csv");
    std::fs::write(&path, "1,2,3\n4,5\n").unwrap();
    let o = mmin(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 1"), "{}", stderr(&o));

    let o = mmin(&["report", "/nonexistent/matrix.txt"]);
    assert_eq!(o.status.code(), Some(2));

    let o = mmin(&["bounds", "ex1", "--methods", "nope"]);
    assert_eq!(o.status.code(), Some(2));

    // positive off-diagonal: not an M-matrix
    let path = scratch("notm.txt");
    std::fs::write(&path, "2\n1 1\n0 1\n").unwrap();
    let o = mmin(&["oracle", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_on_non_m_matrix_marks_every_row() {
    let path = scratch("notm2.txt");
    std::fs::write(&path, "2\n1 1\n0 1\n").unwrap();
    let o = mmin(&["report", path.to_str().unwrap(), "--t-max", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("tau: n/a"));
    assert!(text
        .lines()
        .skip(5)
        .all(|l| l.contains("n/a (matrix is not a nonsingular M-matrix)")));
}

#[test]
fn singular_matrix_exits_three() {
    let path = scratch("sing.txt");
    std::fs::write(&path, "2\n1 -1\n-1 1\n").unwrap();
    let o = mmin(&["oracle", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("singular"), "{}", stderr(&o));
    // the table still renders, with nothing certified
    let o = mmin(&["report", path.to_str().unwrap(), "--t-max", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("tau: n/a"));
}
