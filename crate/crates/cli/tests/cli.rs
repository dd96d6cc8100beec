use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use kronpath::{load_graph_file, parse_grammar};
use kronpath_oracles::{cfl_reach_oracle, to_cnf};
use tempfile::TempDir;

const FIG1: &str = "0 a 1\n1 a 0\n1 b 1\n";
const G1: &str = "S -> a S b | a b\n";

fn kronpath(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kronpath"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.txt"), FIG1).unwrap();
    fs::write(dir.path().join("g1.cfg"), G1).unwrap();
    let out = kronpath(dir.path(), &["index", "g.txt", "g1.cfg", "-o", "g.kpi"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    dir
}

#[test]
fn index_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.txt"), FIG1).unwrap();
    fs::write(dir.path().join("g1.cfg"), G1).unwrap();
    let out = kronpath(dir.path(), &["index", "g.txt", "g1.cfg", "-o", "g.kpi"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "vertices\t2\nstates\t4\niterations\t3\nS\t2\n");
    assert!(dir.path().join("g.kpi").exists());
}

#[test]
fn reach_lists_sorted_pairs() {
    let dir = fixture();
    let out = kronpath(dir.path(), &["reach", "g.kpi", "S"]);
    assert_eq!(stdout(&out), "0 1\n1 1\n");
}

#[test]
fn paths_shortest_first() {
    let dir = fixture();
    let out = kronpath(dir.path(), &["paths", "g.kpi", "1", "1", "S", "--max-word-len", "4"]);
    assert_eq!(stdout(&out), "1 -a-> 0 -a-> 1 -b-> 1 -b-> 1\n");
    let out = kronpath(dir.path(), &["paths", "g.kpi", "1", "1", "S", "--max-word-len", "8"]);
    let lines: Vec<_> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1].matches("-a->").count(), 4);
}

#[test]
fn unreachable_pair_is_empty() {
    let dir = fixture();
    let out = kronpath(dir.path(), &["paths", "g.kpi", "0", "0", "S"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn exit_codes() {
    let dir = fixture();
    assert_eq!(kronpath(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(kronpath(dir.path(), &["reach"]).status.code(), Some(1));
    assert_eq!(kronpath(dir.path(), &["reach", "g.kpi", "T"]).status.code(), Some(2));
    assert_eq!(kronpath(dir.path(), &["paths", "g.kpi", "7", "0", "S"]).status.code(), Some(2));
    fs::write(dir.path().join("bad.cfg"), "S -> a (\n").unwrap();
    assert_eq!(
        kronpath(dir.path(), &["index", "g.txt", "bad.cfg", "-o", "x.kpi"]).status.code(),
        Some(2)
    );
    fs::write(dir.path().join("bad.kpi"), "kronpath-index 99\n").unwrap();
    assert_eq!(kronpath(dir.path(), &["reach", "bad.kpi", "S"]).status.code(), Some(2));
    assert_eq!(kronpath(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn empty_graph_has_no_pairs() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e.txt"), "# nothing\n").unwrap();
    let out = kronpath(dir.path(), &["index", "e.txt", "--grammar", "g1", "-o", "e.kpi"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("S\t0\n"));
    assert!(stdout(&kronpath(dir.path(), &["reach", "e.kpi", "S"])).is_empty());
}

#[test]
fn regex_query() {
    let dir = fixture();
    fs::write(dir.path().join("q.re"), "a b*\n").unwrap();
    let out = kronpath(dir.path(), &["index", "g.txt", "q.re", "--regex", "--start", "Q", "-o", "q.kpi"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&kronpath(dir.path(), &["reach", "q.kpi", "Q"])), "0 1\n1 0\n");
}

#[test]
fn bench_rows_and_skips() {
    let dir = fixture();
    let out = kronpath(
        dir.path(),
        &["bench-rpq", "g.txt", "--templates", "Q2,Q4^2,Q16", "--per-template", "3", "--runs", "2", "--jobs", "2"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["graph", "query", "run_mean_s", "pairs"]);
    assert_eq!(rows.len(), 1 + 2 * 3);
    let names: Vec<&str> = rows[1..].iter().map(|r| r[1]).collect();
    assert_eq!(names, ["Q2#0", "Q2#1", "Q2#2", "Q4^2#0", "Q4^2#1", "Q4^2#2"]);
    for r in &rows[1..] {
        assert_eq!(r[0], "g");
        assert!(r[2].parse::<f64>().unwrap() >= 0.0);
    }
    // labels ranked a (2 edges) then b: Q2#0 is `a b*`, Q2#1 is `b a*`
    assert_eq!(rows[1][3], "2");
    assert_eq!(rows[2][3], "2");
    assert!(String::from_utf8_lossy(&out.stderr).contains("Q16"));
    assert_eq!(
        kronpath(dir.path(), &["bench-rpq", "g.txt", "--templates", "Q99"]).status.code(),
        Some(1)
    );
}

#[test]
fn generate_and_stats_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["generate", "--edges", "300", "--labels", "3", "--seed", "11"];
    let a = stdout(&kronpath(dir.path(), &args));
    assert_eq!(a, stdout(&kronpath(dir.path(), &args)));
    assert_eq!(a.lines().count(), 300);
    fs::write(dir.path().join("r.txt"), &a).unwrap();
    let stats = stdout(&kronpath(dir.path(), &["stats", "r.txt"]));
    let first = stats.lines().nth(1).unwrap();
    assert!(first.starts_with("l0\t"));
    let inv = stdout(&kronpath(dir.path(), &["stats", "r.txt", "--add-inverse"]));
    assert!(inv.contains("l0_r\t"));
}

#[test]
fn random_instances_match_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let grammar = "S -> a S b | S S | a b\n";
    fs::write(dir.path().join("d.cfg"), grammar).unwrap();
    let cnf = to_cnf(&parse_grammar(grammar).unwrap());
    for seed in 0..10 {
        let graph = dir.path().join(format!("r{seed}.txt"));
        let seed = seed.to_string();
        let out = kronpath(
            dir.path(),
            &["generate", "--edges", "15", "--vertices", "6", "--label-names", "a,b", "--seed", &seed],
        );
        fs::write(&graph, out.stdout).unwrap();
        let g = graph.to_str().unwrap();
        let out = kronpath(dir.path(), &["index", g, "d.cfg", "-o", "r.kpi"]);
        assert_eq!(out.status.code(), Some(0));
        let reported: usize = stdout(&out)
            .lines()
            .find_map(|l| l.strip_prefix("S\t"))
            .unwrap()
            .parse()
            .unwrap();
        let expected = cfl_reach_oracle(&cnf, &load_graph_file(&graph, false).unwrap());
        let expected = expected.get("S").map_or(0, |s| s.len());
        assert_eq!(reported, expected);
        let listed = stdout(&kronpath(dir.path(), &["reach", "r.kpi", "S"])).lines().count();
        assert_eq!(listed, expected);
    }
}
