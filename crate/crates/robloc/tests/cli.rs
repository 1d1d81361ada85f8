use std::path::{Path, PathBuf};

use robloc::cli::{run, Run};
use robloc::io::{graph_json, parse_strategy_graph, parse_table};
use robloc::{EXIT_BUDGET, EXIT_INVALID, EXIT_OK, EXIT_VIOLATION};
use robloc_core::corpus;
use tempfile::TempDir;

fn write_graph(dir: &Path, name: &str, g: &robloc_core::Graph) -> String {
    let p = dir.join(name);
    std::fs::write(&p, graph_json(g)).unwrap();
    p.to_str().unwrap().to_string()
}

fn robloc(args: &[&str]) -> Run {
    run(std::iter::once("robloc").chain(args.iter().copied()))
}

struct Fixture {
    dir: TempDir,
    g5: String,
    k3: String,
    one: String,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let g5 = write_graph(dir.path(), "g5.json", &corpus::figure_graph());
    let k3 = write_graph(dir.path(), "k3.json", &corpus::complete(3));
    let one = write_graph(dir.path(), "one.json", &corpus::single_vertex());
    Fixture { dir, g5, k3, one }
}

impl Fixture {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

#[test]
fn params_on_small_graphs() {
    let f = fixture();
    let r = robloc(&["params", "--graph", &f.g5]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert_eq!(
        r.stdout,
        "vertices: 5\nedges: 4\nlocalization number: 1 (capture time 2)\nsubdivision number: 1 (capture time 2)\n"
    );
    let r = robloc(&["params", "--graph", &f.k3, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["localization_number"]["value"], 2);
    assert_eq!(v["subdivision_number"]["value"], 3);
}

#[test]
fn tiny_budget_is_reported() {
    let f = fixture();
    let r = robloc(&["params", "--graph", &f.g5, "--budget", "1"]);
    assert_eq!(r.code, EXIT_BUDGET);
    assert!(r.stdout.contains("budget exceeded"));
}

#[test]
fn malformed_graph_names_the_line() {
    let f = fixture();
    let bad = f.path("bad.json");
    std::fs::write(&bad, "{\n  \"vertices\": [\"a\"],\n  \"edges\": [[\"a\"]]\n}\n").unwrap();
    let r = robloc(&["params", "--graph", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_INVALID);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    let missing = f.path("missing.json");
    assert_eq!(robloc(&["params", "--graph", missing.to_str().unwrap()]).code, EXIT_INVALID);
}

#[test]
fn usage_errors_are_invalid_input() {
    let f = fixture();
    let r = robloc(&["translate", "--graph", &f.g5, "--direction", "sideways"]);
    assert_eq!(r.code, EXIT_INVALID);
    assert_eq!(robloc(&["params", "--graph", &f.g5, "--budget", "0"]).code, EXIT_INVALID);
    assert_eq!(robloc(&["--help"]).code, EXIT_OK);
}

#[test]
fn strategy_graph_dot_has_four_way_root() {
    let f = fixture();
    let r = robloc(&["strategy-graph", "--graph", &f.g5]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout.matches("n0 -> ").count(), 4);
    assert!(r.stdout.contains("label=\"{B,D,E}\""));
}

#[test]
fn single_vertex_dot() {
    let f = fixture();
    let r = robloc(&["strategy-graph", "--graph", &f.one]);
    assert_eq!(r.stdout, "digraph strategy {\n  node [shape=ellipse];\n  n0 [label=\"{a}\", shape=box];\n}\n");
}

#[test]
fn strategy_graph_and_table_files_round_trip() {
    let f = fixture();
    let json = f.path("h.json");
    let table = f.path("t.json");
    let r = robloc(&[
        "strategy-graph",
        "--graph",
        &f.g5,
        "--format",
        "json",
        "--out",
        json.to_str().unwrap(),
        "--save-table",
        table.to_str().unwrap(),
    ]);
    assert_eq!((r.code, r.stdout.as_str()), (EXIT_OK, ""));
    let g = corpus::figure_graph();
    let text = std::fs::read_to_string(&json).unwrap();
    let h = parse_strategy_graph(&g, &text).unwrap();
    assert_eq!(robloc::io::strategy_graph_json(&g, &h), text);
    let t = parse_table(&g, &std::fs::read_to_string(&table).unwrap()).unwrap();
    assert_eq!(robloc::io::table_json(&g, &t), std::fs::read_to_string(&table).unwrap());

    // replaying the saved table gives the same graph
    let again = robloc(&["strategy-graph", "--graph", &f.g5, "--format", "json", "--table", table.to_str().unwrap()]);
    assert_eq!(again.stdout, text);
}

#[test]
fn reduced_strategy_graph_carries_levels() {
    let f = fixture();
    let r = robloc(&["strategy-graph", "--graph", &f.g5, "--eta", "2", "--format", "json"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["stride_len"], 2);
    assert_eq!(v["nodes"][0]["level"], 0);
}

#[test]
fn losing_arena_shows_cycle() {
    let f = fixture();
    let r = robloc(&["strategy-graph", "--graph", &f.k3]);
    assert_eq!(r.code, EXIT_INVALID);
    assert!(r.stderr.contains("repeats: {a,b,c} -> {a,b,c}"), "{}", r.stderr);
    let r = robloc(&["strategy-graph", "--graph", &f.k3, "--allow-divergent", "--format", "json"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("\"cop_winning\": false"));
}

#[test]
fn translations_on_figure_graph() {
    let f = fixture();
    let r = robloc(&["translate", "--graph", &f.g5, "--direction", "cop-to-subs", "--m", "2"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stdout);
    assert!(r.stdout.ends_with("containment violations: 0\nverdict: located\n"));
    let r = robloc(&["translate", "--graph", &f.g5, "--direction", "subs-to-cop", "--eta", "1", "--format", "json"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stdout);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["located"], true);
    assert_eq!(v["probe_bound"], "576");
    assert!(v["max_probes"].as_u64().unwrap() <= 576);
    assert_eq!(v["traces"].as_array().unwrap().len(), 5);
}

#[test]
fn scripted_translation_trace() {
    let f = fixture();
    let r = robloc(&[
        "translate", "--graph", &f.g5, "--direction", "cop-to-subs", "--walk", "D,B~D:1,B", "--format", "json",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let trace = &v["traces"][0];
    assert_eq!(trace["walk"], serde_json::json!(["D", "B~D:1", "B"]));
    let last = trace["rounds"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(trace["outcome"]["located"]["round"], last["round"]);
}

#[test]
fn coarse_subdivision_is_rejected() {
    let f = fixture();
    let r = robloc(&["translate", "--graph", &f.k3, "--direction", "cop-to-subs", "--m", "3"]);
    assert_eq!(r.code, EXIT_INVALID);
    assert!(r.stderr.contains("m >= 2 * cops"));
}

#[test]
fn simulate_reports_rounds() {
    let f = fixture();
    let r = robloc(&["simulate", "--graph", &f.g5, "--walk", "D,B,A"]);
    assert_eq!(r.stdout, "cops: 1\nrobber: scripted\nbranches: 1\nbranch 0: [C](3) [D](1) => B in round 2\n");
    // one round is below the capture time: the solver stops, a fixed table runs out of rounds
    let r = robloc(&["simulate", "--graph", &f.g5, "--max-rounds", "1"]);
    assert_eq!(r.code, EXIT_BUDGET);
    let table = f.path("t.json");
    robloc(&["strategy-graph", "--graph", &f.g5, "--save-table", table.to_str().unwrap()]);
    let r = robloc(&["simulate", "--graph", &f.g5, "--max-rounds", "1", "--table", table.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_VIOLATION);
    assert!(r.stdout.contains("=> undecided"));
    let r = robloc(&["simulate", "--graph", &f.g5, "--walk", "D,A"]);
    assert_eq!(r.code, EXIT_INVALID);
}

#[test]
fn verify_passes_on_small_graphs() {
    let f = fixture();
    for g in [&f.g5, &f.k3, &f.one] {
        let r = robloc(&["verify", "--graph", g, "--threads", "2"]);
        assert_eq!(r.code, EXIT_OK, "{}", r.stdout);
        assert!(!r.stdout.contains("FAIL"));
    }
}
