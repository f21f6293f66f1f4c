use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ect")).args(args).env_remove("ECT_MAX_ORACLE_NODES").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn field<'a>(report: &'a str, key: &str) -> &'a str {
    report.lines().find_map(|l| l.strip_prefix(key).map(str::trim)).unwrap()
}

const SQUARE: &str = "ect 1 4 4\nv 5/1 0 0\nv 3/1 1 0\nv 7/1 1 1\nv 2/1 0 1\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n";

#[test]
fn square_costs_two() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "c4.ect");
    fs::write(&inst, SQUARE).unwrap();
    let out = ect(&["solve", s(&inst)]);
    assert_eq!(code(&out), 0);
    let report = String::from_utf8(out.stdout).unwrap();
    assert_eq!(field(&report, "cost"), "2");
    assert_eq!(field(&report, "solution"), "3");
}

#[test]
fn grid_solve_verify_and_tamper() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "grid.ect");
    let rep = path(&dir, "grid.rep");
    assert_eq!(code(&ect(&["gen", "grid", "10", "10", "--seed", "1", "-o", s(&inst)])), 0);
    assert_eq!(code(&ect(&["solve", s(&inst), "-o", s(&rep), "--seed-check"])), 0);
    let report = fs::read_to_string(&rep).unwrap();
    let ratio: Vec<i64> = field(&report, "ratio").split('/').map(|x| x.parse().unwrap()).collect();
    assert!(ratio[0] * 7 <= 47 * ratio[1]);
    assert!(report.contains("verdict ok deterministic"));
    assert_eq!(code(&ect(&["verify", s(&inst), s(&rep)])), 0);

    let tampered = report
        .lines()
        .map(|l| match l.strip_prefix("ineq ") {
            Some(rest) => {
                let mut t: Vec<String> = rest.split(' ').map(String::from).collect();
                t[2] = "1000".into();
                format!("ineq {}", t.join(" "))
            }
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n");
    let bad = path(&dir, "bad.rep");
    fs::write(&bad, tampered).unwrap();
    assert_eq!(code(&ect(&["verify", s(&inst), s(&bad)])), 5);
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "ring.ect");
    assert_eq!(code(&ect(&["gen", "pentagon-ring", "4", "--epsilon", "1/10", "-o", s(&inst)])), 0);
    let a = ect(&["solve", s(&inst)]);
    let b = ect(&["solve", s(&inst)]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_header_exits_two() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "bad.ect");
    fs::write(&inst, "ect 9 1 0\nv 1/1 0 0\n").unwrap();
    assert_eq!(code(&ect(&["solve", s(&inst)])), 2);
    assert_eq!(code(&ect(&["solve", s(&path(&dir, "missing.ect"))])), 2);
}

#[test]
fn exact_respects_size_guard() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "c4.ect");
    fs::write(&inst, SQUARE).unwrap();
    let out = ect(&["exact", s(&inst)]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("optimum 2\n"));
    let guarded = Command::new(env!("CARGO_BIN_EXE_ect"))
        .args(["exact", s(&inst)])
        .env("ECT_MAX_ORACLE_NODES", "3")
        .output()
        .unwrap();
    assert_eq!(code(&guarded), 4);
}

#[test]
fn iteration_cap_is_a_solver_failure() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "grid.ect");
    assert_eq!(code(&ect(&["gen", "grid", "4", "4", "-o", s(&inst)])), 0);
    assert_eq!(code(&ect(&["solve", s(&inst), "--max-iters", "1"])), 3);
}

#[test]
fn bench_table_has_one_row_per_instance() {
    let out = ect(&["bench", "--corpus", "30"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = text.lines().skip(1).filter(|l| !l.starts_with("rows ")).count();
    assert_eq!(rows, 30);
    let max: Vec<i64> = text.lines().last().unwrap().rsplit(' ').next().unwrap().split('/').map(|x| x.parse().unwrap()).collect();
    let (num, den) = (max[0], *max.get(1).unwrap_or(&1));
    assert!(num * 7 <= 47 * den);
}

#[test]
fn generated_instances_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["gen", "grid-subgraph", "5", "4", "--keep", "70", "--costs", "unit"],
        vec!["gen", "handle-chain", "3"],
        vec!["gen", "tessellation", "3"],
    ] {
        let out = ect(&args);
        assert_eq!(code(&out), 0, "{args:?}");
        let inst = path(&dir, "x.ect");
        fs::write(&inst, &out.stdout).unwrap();
        let rep = path(&dir, "x.rep");
        assert_eq!(code(&ect(&["solve", s(&inst), "-o", s(&rep)])), 0, "{args:?}");
        assert_eq!(code(&ect(&["verify", s(&inst), s(&rep)])), 0, "{args:?}");
    }
    assert_eq!(code(&ect(&["gen", "handle-chain", "2"])), 2);
}
