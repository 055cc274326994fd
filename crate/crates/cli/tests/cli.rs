use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use hexslide_core::puzzlegraph::bfs::count_components_with;
use hexslide_core::{BoardSpec, Budget, Cell, Configuration, SlideMove};
use serde_json::{json, Value};

fn hexslide(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexslide"))
        .args(args)
        .env_remove("HEXSLIDE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(p).unwrap()
}

fn csv_row(args: &[&str]) -> Vec<String> {
    let mut full = vec!["analyze"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--format", "csv"]);
    let o = hexslide(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "board",
            "h",
            "components",
            "component_size",
            "depth_lower",
            "depth_upper"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    rows[0].iter().map(String::from).collect()
}

#[test]
fn analyze_examples() {
    let f2 = csv_row(&["--shape", "flower", "--m", "2", "--holes", "3"]);
    assert_eq!((f2[2].as_str(), f2[3].as_str()), ("6", "132"));
    let t3 = csv_row(&["--shape", "triangle", "--m", "3", "--holes", "2"]);
    assert_eq!((t3[2].as_str(), t3[3].as_str()), ("24", "9"));
    let p24 = csv_row(&[
        "--shape",
        "parallelogram",
        "--m1",
        "2",
        "--m2",
        "4",
        "--holes",
        "2",
    ]);
    assert_eq!((p24[0].as_str(), p24[2].as_str()), ("P(2,4)", "720"));
    let board = Arc::new(BoardSpec::parallelogram(2, 4).unwrap());
    assert_eq!(
        count_components_with(&board, 2, Budget::default()).unwrap(),
        720
    );
}

#[test]
fn analyze_json_records_provenance() {
    let o = hexslide(&[
        "analyze",
        "--shape",
        "parallelogram",
        "--m1",
        "2",
        "--m2",
        "4",
        "--holes",
        "2",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["provenance"], "formula");
    let o = hexslide(&["analyze", "--shape", "triangle", "--m", "3", "--holes", "3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        (v["components"].as_u64(), v["provenance"].as_str()),
        (Some(6), Some("bfs"))
    );
    assert_eq!(
        v["gods_bounds"]["upper"].as_u64(),
        v["depth"].as_u64().map(|d| 2 * d)
    );
    assert!(v["start"].is_object());
}

#[test]
fn outputs_match_golden_files() {
    let cases: [(&[&str], &str); 4] = [
        (
            &["analyze", "--shape", "flower", "--m", "2", "--holes", "3"],
            "analyze_flower2_h3.json",
        ),
        (
            &[
                "analyze", "--shape", "triangle", "--m", "3", "--holes", "2", "--format", "text",
            ],
            "analyze_triangle3_h2.txt",
        ),
        (
            &[
                "analyze",
                "--shape",
                "parallelogram",
                "--m1",
                "2",
                "--m2",
                "4",
                "--holes",
                "2",
                "--format",
                "csv",
            ],
            "analyze_parallelogram2x4_h2.csv",
        ),
        (
            &["verify", "--suite", "paper-tables"],
            "verify_paper_tables.txt",
        ),
    ];
    for (args, file) in cases {
        let first = stdout(&hexslide(args));
        assert_eq!(first, golden(file), "{file}");
        assert_eq!(stdout(&hexslide(args)), first, "{file} is not repeatable");
    }
}

#[test]
fn explicit_boards_are_accepted() {
    let o = hexslide(&[
        "analyze",
        "--shape",
        "explicit",
        "--cells",
        "0,0;0,1;1,0",
        "--holes",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().nth(1).unwrap().contains(",2,1,3,"));
}

#[test]
fn analyze_exit_codes() {
    let bad = [
        vec!["analyze", "--shape", "hexagon", "--m", "2", "--holes", "2"],
        vec!["analyze", "--shape", "triangle", "--holes", "2"],
        vec!["analyze", "--shape", "triangle", "--m", "3"],
        vec!["analyze", "--shape", "triangle", "--m", "3", "--holes", "6"],
        vec![
            "analyze", "--shape", "triangle", "--m", "3", "--holes", "2", "--format", "xml",
        ],
        vec![
            "analyze", "--shape", "explicit", "--cells", "0,0;x", "--holes", "1",
        ],
    ];
    for args in bad {
        assert_eq!(code(&hexslide(&args)), 2, "{args:?}");
    }
    let o = hexslide(&[
        "analyze", "--shape", "flower", "--m", "3", "--holes", "3", "--budget", "1000",
    ]);
    assert_eq!(code(&o), 3);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["partial"], true);
}

#[test]
fn budget_env_var_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_hexslide"))
        .args(["analyze", "--shape", "triangle", "--m", "4", "--holes", "3"])
        .env("HEXSLIDE_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn verify_passes_and_reports_totals() {
    let o = hexslide(&["verify", "--suite", "paper-tables", "--threads", "1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert!(
        text.contains("PASS table-1 F(2) h=4: components 1 (expected 1), size 210 (expected 210)")
    );
    assert!(text
        .contains("PASS table-2 T(4) h=2: components 8064 (expected 8064), size 90 (expected 90)"));
    assert!(text.contains("SKIP table-3 T(4) h=3"));
    assert_eq!(text.matches("note: run on F(2)").count(), 3);
    assert!(text.trim_end().ends_with("16 passed, 0 failed, 4 skipped"));
    assert_eq!(code(&hexslide(&["verify", "--suite", "other-tables"])), 2);
}

struct SolveFiles {
    dir: tempfile::TempDir,
}

impl SolveFiles {
    fn new(board: &Value) -> SolveFiles {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("b.json"), board.to_string()).unwrap();
        SolveFiles { dir }
    }

    fn write(&self, name: &str, c: &Configuration) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, serde_json::to_string(c).unwrap()).unwrap();
        p
    }

    fn solve(&self, start: &Configuration, target: &Configuration, extra: &[&str]) -> Output {
        let s = self.write("s.json", start);
        let t = self.write("t.json", target);
        let b = self.dir.path().join("b.json");
        let mut args = vec![
            "solve",
            "--board",
            b.to_str().unwrap(),
            "--start",
            s.to_str().unwrap(),
            "--target",
            t.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        hexslide(&args)
    }
}

#[test]
fn solve_transposed_tiles_on_trimmed_parallelogram() {
    let board = Arc::new(BoardSpec::trimmed_parallelogram(3, 4).unwrap());
    let files = SolveFiles::new(&json!({"family": "trimmed-parallelogram", "m1": 3, "m2": 4}));
    let target = Configuration::default_start(board, 2).unwrap();
    let start = target
        .swap_cells(
            target.position_of(7).unwrap(),
            target.position_of(8).unwrap(),
        )
        .unwrap();
    let o = files.solve(&start, &target, &["--emit-moves"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["decision"], "unsolvable");
    assert!(v.get("moves").is_none());
}

#[test]
fn solve_identical_configurations() {
    let board = Arc::new(BoardSpec::triangle(3).unwrap());
    let files = SolveFiles::new(&json!({"family": "triangle", "m": 3}));
    let c = Configuration::default_start(board, 2).unwrap();
    let v: Value = serde_json::from_str(&stdout(&files.solve(&c, &c, &["--emit-moves"]))).unwrap();
    assert_eq!(v["decision"], "solvable");
    assert_eq!(v["moves"], json!([]));
}

#[test]
fn solve_adjacent_swap_on_maximal_parallelogram() {
    let board = Arc::new(BoardSpec::parallelogram(3, 3).unwrap());
    let files = SolveFiles::new(&json!({"family": "parallelogram", "m1": 3, "m2": 3}));
    let target = Configuration::default_start(board, 3).unwrap();
    let start = target.swap_cells(Cell::new(0, 0), Cell::new(1, 0)).unwrap();
    let o = files.solve(&start, &target, &["--emit-moves"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["decision"], "solvable");
    let moves: Vec<SlideMove> = serde_json::from_value(v["moves"].clone()).unwrap();
    assert!(!moves.is_empty());
    assert_eq!(start.apply_all(&moves).unwrap(), target);
}

#[test]
fn solve_rejects_malformed_input() {
    let board = Arc::new(BoardSpec::triangle(3).unwrap());
    let files = SolveFiles::new(&json!({"family": "triangle", "m": 3}));
    let c = Configuration::default_start(board, 2).unwrap();
    let s = files.write("s.json", &c);
    let b = files.dir.path().join("b.json");
    let garbage = files.dir.path().join("bad.json");
    std::fs::write(&garbage, "{\"cells\": [[0, 0, 1]]}").unwrap();
    let other = files.write(
        "other.json",
        &Configuration::default_start(Arc::new(BoardSpec::flower(2).unwrap()), 2).unwrap(),
    );
    for t in [&garbage, &other, &files.dir.path().join("missing.json")] {
        let o = hexslide(&[
            "solve",
            "--board",
            b.to_str().unwrap(),
            "--start",
            s.to_str().unwrap(),
            "--target",
            t.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 2, "{}", t.display());
    }
}

#[test]
fn solve_unknown_verdict_exits_3() {
    let t4: Vec<Value> = BoardSpec::triangle(4)
        .unwrap()
        .cells()
        .iter()
        .map(|c| json!([c.q, c.r]))
        .collect();
    let board =
        Arc::new(BoardSpec::explicit(BoardSpec::triangle(4).unwrap().cells().to_vec()).unwrap());
    let files = SolveFiles::new(&json!({"family": "explicit", "cells": t4}));
    let target = Configuration::default_start(board, 3).unwrap();
    let start = target
        .swap_cells(
            target.position_of(1).unwrap(),
            target.position_of(2).unwrap(),
        )
        .unwrap();
    let o = files.solve(&start, &target, &["--budget", "1000"]);
    assert_eq!(code(&o), 3);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["decision"], "unknown");
}

fn export(args: &[&str]) -> (Output, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.dot");
    let mut full = vec!["export-graph"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let o = hexslide(&full);
    let dot = std::fs::read_to_string(&out).unwrap_or_default();
    (o, dot)
}

#[test]
fn export_graph_examples() {
    let (o, dot) = export(&["--shape", "triangle", "--m", "2", "--holes", "2"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        (v["nodes"].as_u64(), v["edges"].as_u64()),
        (Some(3), Some(3))
    );
    assert_eq!(dot.matches("[label=").count(), 3);
    assert_eq!(dot.matches(" -- ").count(), 3);

    let (o, dot) = export(&["--shape", "triangle", "--m", "3", "--holes", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(dot.matches("[label=").count(), 9);
}

#[test]
fn export_graph_refusals() {
    let (o, dot) = export(&["--shape", "triangle", "--m", "2", "--holes", "0"]);
    assert_eq!(code(&o), 2);
    assert!(dot.is_empty());
    let (o, _) = export(&["--shape", "flower", "--m", "2", "--holes", "1"]);
    assert_eq!(code(&o), 2);
    let (o, dot) = export(&[
        "--shape", "flower", "--m", "2", "--holes", "2", "--limit", "10",
    ]);
    assert_eq!(code(&o), 3);
    assert!(dot.is_empty());
    let o = hexslide(&[
        "export-graph",
        "--shape",
        "triangle",
        "--m",
        "2",
        "--holes",
        "2",
        "--out",
        "/nonexistent/dir/g.dot",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn derive_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let o = hexslide(&[
        "derive",
        "--shape",
        "parallelogram",
        "--m1",
        "3",
        "--m2",
        "4",
        "--holes",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = hexslide(&["check", "--derivation", path.to_str().unwrap()]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, r#"{"valid":true}"#));

    let mut d: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    d["base_cases"][0]["components"] = json!(2);
    std::fs::write(&path, d.to_string()).unwrap();
    let o = hexslide(&["check", "--derivation", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(
        serde_json::from_str::<Value>(&stdout(&o)).unwrap()["valid"],
        false
    );

    let o = hexslide(&["derive", "--shape", "triangle", "--m", "3", "--holes", "1"]);
    assert_eq!(code(&o), 1);
}
