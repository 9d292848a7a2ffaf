use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pareto-kit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn nondom_on_three_points() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "pts.csv", "y1,y2\n1,2\n2,1\n2,2\n");
    let out = run(&["nondom", "--input", s(&pts)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["nondominated"], serde_json::json!([0, 1]));
    assert_eq!(
        v["nondominated_points"],
        serde_json::json!([["1", "2"], ["2", "1"]])
    );
}

#[test]
fn reduce_reports_the_strict_witness() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        &dir,
        "inst.json",
        r#"{"objectives":[["1","0"],["0","1"],["1","1"]]}"#,
    );
    let out = run(&["reduce", "--input", s(&inst)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["strict_witnesses"], serde_json::json!(["x3"]));
    assert_eq!(v["equality_e"], Value::Bool(false));
}

#[test]
fn non_pointed_cone_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "pts.csv", "y1,y2\n1,2\n2,1\n");
    let cone = write(
        &dir,
        "cone.json",
        r#"{"generators":[["1","0"],["-1","0"]]}"#,
    );
    let out = run(&["stability", "--input", s(&pts), "--cone", s(&cone)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cone not pointed"));
}

#[test]
fn stability_certificate_json() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "pts.csv", "y1,y2\n1,2\n2,1\n2,2\n");
    let out = run(&["stability", "--input", s(&pts)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cone"], Value::Null);
    assert_eq!(v["assignments"][2], serde_json::json!({"from": 2, "to": 0}));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["nondom"]).status.code(), Some(2));
    let bad = write(&dir, "bad.csv", "y1,y2\n1,banana\n");
    assert_eq!(run(&["nondom", "--input", s(&bad)]).status.code(), Some(2));
    assert_eq!(
        run(&["nondom", "--input", "/nonexistent.csv"])
            .status
            .code(),
        Some(2)
    );
    let pts = write(&dir, "pts.csv", "y1,y2\n1,2\n");
    let out = bin()
        .args(["nondom", "--input", s(&pts)])
        .env("PARETO_KIT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_point_set_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.csv", "y1,y2\n");
    let out = run(&["stability", "--input", s(&empty)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty point set"));
}

#[test]
fn hull_queries() {
    let dir = TempDir::new().unwrap();
    let hull = write(
        &dir,
        "hull.json",
        r#"{"generators":[["0","1"],["1","0"],["1","1"]]}"#,
    );
    let out = run(&[
        "hull",
        "--input",
        s(&hull),
        "--query",
        "1/2,1/2",
        "--query",
        "1,1",
        "--query",
        "5,5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["properly_nondominated"], Value::Bool(true));
    assert_eq!(v[1]["weakly_nondominated"], Value::Bool(false));
    assert_eq!(v[2]["member"], Value::Bool(false));
}

#[test]
fn hull_reducibility_mode() {
    let dir = TempDir::new().unwrap();
    let hull = write(
        &dir,
        "hull.json",
        r#"{"generators":[["0","1"],["1","0"],["1","1"]]}"#,
    );
    let out = run(&[
        "reduce",
        "--mode",
        "hull",
        "--input",
        s(&hull),
        "--query",
        "1,0",
        "--query",
        "1/2,1/2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["witness"], serde_json::json!([1]));
    assert_eq!(v[1]["witness"], serde_json::json!([0, 1]));
}

#[test]
fn polyhedron_pair() {
    let dir = TempDir::new().unwrap();
    let diag = write(&dir, "diag.json", r#"{"A":[["-1","-1"]],"b":["0"]}"#);
    let v = json(&run(&["poly", "--input", s(&diag), "--query", "0,0"]));
    assert_eq!(v["equivalence"]["y_n_nonempty"], Value::Bool(true));
    assert_eq!(v["redundancy"]["polyhedron_bounded"], Value::Bool(false));
    let half = write(&dir, "half.json", r#"{"A":[["0","-1"]],"b":["0"]}"#);
    let v = json(&run(&["poly", "--input", s(&half)]));
    assert_eq!(
        v["equivalence"]["negative_direction"],
        serde_json::json!(["-1", "0"])
    );
    assert_eq!(v["equivalence"]["externally_stable"], Value::Bool(false));
}

#[test]
fn connect_writes_tsv() {
    let dir = TempDir::new().unwrap();
    let hull = write(
        &dir,
        "hull.json",
        r#"{"generators":[["0","10"],["10","0"]]}"#,
    );
    let tsv = dir.path().join("front.tsv");
    let out = run(&[
        "connect",
        "--input",
        s(&hull),
        "--grid",
        "4",
        "--epsilon",
        "1",
        "--tsv",
        s(&tsv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["component_count"], 2);
    assert_eq!(
        std::fs::read_to_string(&tsv).unwrap(),
        "y1\ty2\tcomponent\n10\t0\t0\n0\t10\t1\n"
    );
    let bad = run(&["connect", "--input", s(&hull), "--epsilon", "-1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn generated_files_feed_the_analyses() {
    let dir = TempDir::new().unwrap();
    for (mode, cmd) in [
        ("finite", "nondom"),
        ("instance", "reduce"),
        ("poly", "poly"),
        ("hull", "connect"),
    ] {
        let path = dir.path().join(format!(
            "{mode}.{}",
            if mode == "finite" { "csv" } else { "json" }
        ));
        let g = run(&[
            "gen",
            "--mode",
            mode,
            "--dim",
            "3",
            "--size",
            "6",
            "--seed",
            "5",
            "--output",
            s(&path),
        ]);
        assert_eq!(g.status.code(), Some(0), "gen {mode}");
        let out = run(&[cmd, "--input", s(&path)]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{cmd} on {mode}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert_eq!(
        run(&["gen", "--mode", "finite", "--dim", "9"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["gen", "--mode", "poly", "--family", "blob"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gen_is_deterministic() {
    let a = run(&[
        "gen", "--mode", "poly", "--dim", "4", "--size", "7", "--seed", "9",
    ]);
    let b = run(&[
        "gen", "--mode", "poly", "--dim", "4", "--size", "7", "--seed", "9",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "gen", "--mode", "poly", "--dim", "4", "--size", "7", "--seed", "10",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn in_process_run_matches_binary() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "pts.csv", "y1,y2\n1,2\n2,1\n2,2\n");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = pareto_kit_cli::run(
        ["pareto-kit", "proper", "--input", s(&pts)],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(out, run(&["proper", "--input", s(&pts)]).stdout);
}
