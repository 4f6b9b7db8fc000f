use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ifvs_core::gen;
use ifvs_core::io::{emit_graph, parse_graph};
use ifvs_core::{check_solution, VertexSet};
use rand::Rng;

fn ifvs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifvs")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn put(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const K3: &str = "p ifvs 3 3\ne 1 2\ne 2 3\ne 1 3\n";
const K4: &str = "p ifvs 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";

#[test]
fn solve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = put(dir.path(), "k3.gr", K3);
    let k4 = put(dir.path(), "k4.gr", K4);
    assert_eq!(code(&ifvs(&["solve", "--input", s(&k3), "--k", "1"])), 0);
    assert_eq!(code(&ifvs(&["solve", "--input", s(&k3), "--k", "0"])), 1);
    assert_eq!(code(&ifvs(&["solve", "--input", s(&k4), "--k", "4"])), 1);
    let bad = put(dir.path(), "bad.gr", "p ifvs 2 1\ne 1 3\n");
    let out = ifvs(&["solve", "--input", s(&bad), "--k", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&ifvs(&["solve", "--input", s(&dir.path().join("missing")), "--k", "1"])), 2);
}

#[test]
fn json_golden() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = put(dir.path(), "k4.gr", K4);
    let out = ifvs(&["solve", "--input", s(&k4), "--k", "1", "--json"]);
    assert_eq!(
        stdout(&out).trim(),
        r#"{"status":"no","solution":[],"size":0,"stats":{"loops_forced":0,"fvs_size":0,"guesses_tried":0,"guesses_skipped":0,"branch_nodes":0,"leaves":0,"live_leaves":0,"base_cases":0,"max_mu":0,"fib_bound":0,"vector_violations":0}}"#
    );
    let path = put(dir.path(), "path.gr", "p ifvs 3 2\ne 1 2\ne 2 3\n");
    let out = ifvs(&["solve", "--input", s(&path), "--k", "0", "--json"]);
    assert_eq!(
        stdout(&out).trim(),
        r#"{"status":"yes","solution":[],"size":0,"stats":{"loops_forced":0,"fvs_size":0,"guesses_tried":1,"guesses_skipped":0,"branch_nodes":1,"leaves":1,"live_leaves":1,"base_cases":1,"max_mu":0,"fib_bound":1,"vector_violations":0}}"#
    );
}

#[test]
fn gen_solve_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("p.gr");
    assert_eq!(code(&ifvs(&["gen", "--kind", "planted", "--n", "30", "--k", "5", "--seed", "4", "--out", s(&g)])), 0);
    let out = ifvs(&["solve", "--input", s(&g), "--minimize"]);
    assert_eq!(code(&out), 0);
    let sol = put(dir.path(), "sol.txt", &stdout(&out));
    assert_eq!(code(&ifvs(&["verify", "--input", s(&g), "--solution", s(&sol), "--k", "5"])), 0);
    let json = put(dir.path(), "sol.json", &stdout(&ifvs(&["solve", "--input", s(&g), "--json"])));
    assert_eq!(code(&ifvs(&["verify", "--input", s(&g), "--solution", s(&json), "--k", "5"])), 0);
    assert_eq!(code(&ifvs(&["verify", "--input", s(&g), "--solution", s(&json), "--k", "0"])), 1);
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["random", "planted", "subdivided", "base-case", "gadget"] {
        let a = dir.path().join(format!("{kind}-a"));
        let b = dir.path().join(format!("{kind}-b"));
        for p in [&a, &b] {
            let out = ifvs(&["gen", "--kind", kind, "--n", "1", "--k", "1", "--seed", "9", "--out", s(p)]);
            let out = if code(&out) == 0 {
                out
            } else {
                ifvs(&["gen", "--kind", kind, "--n", "12", "--k", "3", "--seed", "9", "--out", s(p)])
            };
            assert_eq!(code(&out), 0, "{kind}");
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{kind}");
    }
    let out = ifvs(&["gen", "--kind", "gadget", "--n", "7", "--seed", "0", "--out", s(&dir.path().join("x"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn threads_do_not_change_the_answer() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5 {
        let g = dir.path().join(format!("g{seed}.gr"));
        ifvs(&["gen", "--kind", "planted", "--n", "40", "--k", "6", "--seed", &seed.to_string(), "--out", s(&g)]);
        let one = stdout(&ifvs(&["solve", "--input", s(&g), "--minimize", "--json", "--threads", "1"]));
        let four = stdout(&ifvs(&["solve", "--input", s(&g), "--minimize", "--json", "--threads", "4"]));
        let sol = |t: &str| t.split(r#""size""#).next().unwrap().to_string();
        assert_eq!(sol(&one), sol(&four));
    }
}

#[test]
fn trace_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("p.gr");
    ifvs(&["gen", "--kind", "planted", "--n", "30", "--k", "6", "--seed", "2", "--out", s(&g)]);
    let t = dir.path().join("t.jsonl");
    assert_eq!(code(&ifvs(&["solve", "--input", s(&g), "--trace", s(&t)])), 0);
    let text = fs::read_to_string(&t).unwrap();
    assert!(!text.is_empty());
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("guess").is_some() && v["tree"].get("root").is_some());
    }
}

#[test]
fn disjoint_input_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("g.dis");
    ifvs(&["gen", "--kind", "gadget", "--n", "1", "--seed", "0", "--out", s(&d)]);
    let solved = ifvs(&["solve", "--input", s(&d), "--json"]);
    let oracle = ifvs(&["oracle", "--input", s(&d), "--json"]);
    assert_eq!(code(&solved), code(&oracle));
    let size = |t: &str| serde_json::from_str::<serde_json::Value>(t).unwrap()["size"].clone();
    assert_eq!(size(&stdout(&solved)), size(&stdout(&oracle)));
    assert_eq!(code(&ifvs(&["solve", "--input", s(&d), "--k", "0"])), 1);

    let big = put(dir.path(), "big.gr", &emit_graph(&ifvs_core::MultiGraph::with_vertices(30), &[]));
    assert_eq!(code(&ifvs(&["oracle", "--input", s(&big), "--k", "1"])), 2);
}

#[test]
fn verify_matches_check_solution() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = gen::rng(21);
    for round in 0..40 {
        let g = gen::random_multigraph(7, 10, &mut rng).unwrap();
        let gp = put(dir.path(), "g.gr", &emit_graph(&g, &[]));
        let set: VertexSet = (0..7).filter(|_| rng.gen_bool(0.35)).collect();
        let k = rng.gen_range(0..=4);
        let ids: Vec<String> = set.iter().map(|v| (v + 1).to_string()).collect();
        let sp = put(dir.path(), "s.txt", &ids.join(" "));
        let out = ifvs(&["verify", "--input", s(&gp), "--solution", s(&sp), "--k", &k.to_string()]);
        let want = if check_solution(&parse_graph(&emit_graph(&g, &[])).unwrap(), &set, k) { 0 } else { 1 };
        assert_eq!(code(&out), want, "round {round}");
    }
}

#[test]
fn bench_csv() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite");
    fs::create_dir(&suite).unwrap();
    for k in [3, 5] {
        let p = suite.join(format!("p{k}.gr"));
        ifvs(&["gen", "--kind", "planted", "--n", "25", "--k", &k.to_string(), "--seed", "1", "--out", s(&p)]);
    }
    let csv = dir.path().join("out.csv");
    assert_eq!(code(&ifvs(&["bench", "--suite", s(&suite), "--out", s(&csv)])), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance,n,m,k,fvs_size,mu0,branch_nodes,leaves,fib_bound,time_ms,status"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("p3.gr,25,") && rows[0].ends_with(",yes"));
}
