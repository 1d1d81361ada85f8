//! One PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use robloc::checks::{self, Check};
use robloc::io::graph_json;
use robloc_core::{corpus, decide_localizable, Budget, Graph, StrategyGraph, SubdividedGraph, Verdict};

const FIGURE_LIMIT: Duration = Duration::from_secs(1);
const CORPUS_LIMIT: Duration = Duration::from_secs(60);
const WALK_TAIL: u32 = 300;
const MAX_ROUNDS: u32 = 64;

struct Criterion {
    id: u32,
    name: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: u32, name: &'static str) -> Self {
        Criterion { id, name, failures: Vec::new(), notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, g: &Graph, c: &Check) {
        if c.skipped.is_none() && !c.passed() {
            self.failures.push(format!("{} on {}: {}", c.name, describe(g), c.line()));
        }
    }

    fn report(&self, elapsed: Duration) -> bool {
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("{status} criterion {}: {} [{:.2}s]", self.id, self.name, elapsed.as_secs_f64());
        if !self.notes.is_empty() {
            line.push_str(&format!(" ({})", self.notes.join("; ")));
        }
        println!("{line}");
        for f in self.failures.iter().take(5) {
            println!("    {f}");
        }
        self.failures.is_empty()
    }
}

fn describe(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|&(u, v)| format!("{}{}", g.name(u), g.name(v))).collect();
    format!("n={} [{}]", g.len(), edges.join(" "))
}

fn budget() -> Budget {
    Budget::default()
}

fn figure_reproduction() -> Criterion {
    let mut c = Criterion::new(1, "five-vertex tree: one cop, capture time 2, four-way root branching");
    let started = Instant::now();
    let g = corpus::figure_graph();
    let (capt, table) = match decide_localizable(&g, 1, budget()) {
        Ok(Verdict::Winning { capture_time, strategy }) => (capture_time, strategy),
        other => {
            c.require(false, || format!("solver: {other:?}"));
            return c;
        }
    };
    c.require(capt == 2, || format!("capture time {capt}"));
    let h = match StrategyGraph::build(&table, &g, 16) {
        Ok(b) => b.graph().cloned(),
        Err(e) => {
            c.require(false, || e.to_string());
            return c;
        }
    };
    let Some(h) = h else {
        c.require(false, || "strategy graph diverges".into());
        return c;
    };
    let root = h.node(h.root());
    let kids: Vec<(String, String)> = root
        .children
        .iter()
        .map(|(_, id)| {
            let n = h.node(*id);
            (g.canonical_string(&n.refined), g.canonical_string(&n.state.extended))
        })
        .collect();
    let want: Vec<(String, String)> = [("C", "C"), ("A", "A"), ("B", "B"), ("D,E", "B,D,E")]
        .iter()
        .map(|&(r, x)| (r.to_string(), x.to_string()))
        .collect();
    c.require(kids == want, || format!("root branches {kids:?}"));
    c.require(h.capture_time() == 2, || format!("tree depth {}", h.capture_time()));
    let took = started.elapsed();
    c.require(took < FIGURE_LIMIT, || format!("took {took:?}"));
    c
}

fn equivalence(graphs: &[Graph]) -> Criterion {
    let mut c = Criterion::new(2, "solver verdict equals strategy-graph finiteness, k in {1,2}");
    let started = Instant::now();
    let mut cases = 0;
    for g in graphs {
        for k in 1..=2 {
            let check = checks::equivalence(g, k, budget());
            c.require(check.skipped.is_none(), || format!("{} skipped on {}", check.name, describe(g)));
            c.absorb(g, &check);
            cases += 1;
        }
    }
    let took = started.elapsed();
    c.require(took < CORPUS_LIMIT, || format!("took {took:?}"));
    c.notes.push(format!("{cases} arenas"));
    c
}

fn deduce_oracle(graphs: &[Graph]) -> Criterion {
    let mut c = Criterion::new(3, "distance deduction matches breadth-first distances, m in {2,3,4}");
    let mut cases = 0;
    for g in graphs {
        for m in 2..=4 {
            let check = checks::deduce_oracle(g, m);
            cases += check.cases;
            c.absorb(g, &check);
        }
    }
    c.notes.push(format!("{cases} cases"));
    c
}

fn subdivision_end_to_end(graphs: &[Graph]) -> Criterion {
    let mut c = Criterion::new(4, "cop strategy on the 2k-subdivision locates every walk of up to 6m moves");
    let (mut run, mut walks) = (0, 0u64);
    for g in graphs {
        let check = checks::subdivision_translation(g, 2, WALK_TAIL, budget());
        if check.skipped.is_some() {
            continue;
        }
        run += 1;
        walks += check.cases;
        c.absorb(g, &check);
    }
    c.require(run > 0, || "no graph qualified".into());
    c.notes.push(format!("{run} graphs, {walks} walks"));
    c
}

fn round_deduction(graphs: &[Graph]) -> Criterion {
    let mut c = Criterion::new(5, "per-round deductions match breadth-first distances, eta in 1..=4");
    let mut cases = 0;
    for g in graphs {
        for eta in 1..=4 {
            let check = checks::round_deduction_oracle(g, eta);
            cases += check.cases;
            c.absorb(g, &check);
        }
    }
    c.notes.push(format!("{cases} cases"));
    c
}

fn small_eta(g: &Graph) -> Option<u32> {
    (1..=3).find(|&m| {
        let sg = SubdividedGraph::new(g, m).expect("m >= 1");
        matches!(decide_localizable(sg.graph(), 1, budget()), Ok(Verdict::Winning { .. }))
    })
}

fn cop_end_to_end(graphs: &[(Graph, u32)]) -> (Criterion, Criterion) {
    let mut located = Criterion::new(6, "translated multi-cop procedure locates within ceil(capt/eta)+1 strides");
    let mut monitor = Criterion::new(7, "probes per round within bound; hypotheses at most double, flat on changed readings");
    let mut worst_gap = i64::MIN;
    for (g, eta) in graphs {
        for mock in [false, true] {
            match checks::cop_run(g, *eta, budget(), MAX_ROUNDS, mock) {
                Ok(r) => {
                    located.require(r.located_in_time() && r.containment_failures == 0, || {
                        format!("{} eta={eta} mock={mock}: {r:?}", describe(g))
                    });
                    monitor.require(r.monitor_clean(), || format!("{} eta={eta} mock={mock}: {r:?}", describe(g)));
                    if let Some(w) = r.worst_stride {
                        worst_gap = worst_gap.max(w as i64 - r.stride_limit as i64);
                    }
                }
                Err(e) => {
                    located.require(false, || format!("{} eta={eta}: {e}", describe(g)));
                    monitor.require(false, || format!("{} eta={eta}: {e}", describe(g)));
                }
            }
        }
    }
    located.notes.push(format!("{} graphs, both detection modes, worst stride minus limit {worst_gap}", graphs.len()));
    monitor.notes.push(format!("{} graphs", graphs.len()));
    (located, monitor)
}

fn cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_robloc")).args(args).output().expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn determinism(dir: &Path) -> Criterion {
    let mut c = Criterion::new(8, "every command is byte-identical across runs and thread counts");
    let g5 = dir.join("g5.json");
    let k3 = dir.join("k3.json");
    std::fs::write(&g5, graph_json(&corpus::figure_graph())).expect("write");
    std::fs::write(&k3, graph_json(&corpus::complete(3))).expect("write");
    let (g5, k3) = (g5.to_str().expect("utf-8 path"), k3.to_str().expect("utf-8 path"));
    let commands: Vec<Vec<&str>> = vec![
        vec!["params", "--graph", g5],
        vec!["params", "--graph", k3, "--format", "json"],
        vec!["strategy-graph", "--graph", g5],
        vec!["strategy-graph", "--graph", g5, "--format", "json"],
        vec!["strategy-graph", "--graph", g5, "--eta", "2", "--format", "json"],
        vec!["strategy-graph", "--graph", k3, "--allow-divergent"],
        vec!["translate", "--graph", g5, "--direction", "cop-to-subs", "--m", "2", "--format", "json"],
        vec!["translate", "--graph", k3, "--direction", "subs-to-cop", "--format", "json"],
        vec!["simulate", "--graph", g5, "--format", "json"],
        vec!["simulate", "--graph", g5, "--walk", "D,B,A"],
        vec!["verify", "--graph", g5, "--format", "json"],
    ];
    for args in &commands {
        let mut outputs = Vec::new();
        for threads in ["1", "1", "4", "4"] {
            let mut a = args.clone();
            a.extend(["--threads", threads]);
            outputs.push(cli(&a));
        }
        c.require(outputs[0].1 == 0, || format!("`{}` exited {}", args.join(" "), outputs[0].1));
        c.require(!outputs[0].0.is_empty(), || format!("`{}` printed nothing", args.join(" ")));
        c.require(outputs.iter().all(|o| *o == outputs[0]), || format!("`{}` output varies", args.join(" ")));
    }
    c.notes.push(format!("{} commands x 4 runs", commands.len()));
    c
}

fn main() {
    let graphs = corpus::connected_graphs(5);
    let dir = tempfile::tempdir().expect("temp dir");
    let mut all = true;

    let mut timed = |f: &mut dyn FnMut() -> Vec<Criterion>| {
        let started = Instant::now();
        let cs = f();
        let took = started.elapsed();
        for c in cs {
            all &= c.report(took);
        }
    };
    timed(&mut || vec![figure_reproduction()]);
    timed(&mut || vec![equivalence(&graphs)]);
    timed(&mut || vec![deduce_oracle(&graphs)]);
    timed(&mut || vec![subdivision_end_to_end(&graphs)]);
    timed(&mut || vec![round_deduction(&graphs)]);
    let with_eta: Vec<(Graph, u32)> = graphs.iter().filter_map(|g| small_eta(g).map(|e| (g.clone(), e))).collect();
    timed(&mut || {
        let (a, b) = cop_end_to_end(&with_eta);
        vec![a, b]
    });
    timed(&mut || vec![determinism(dir.path())]);

    if !all {
        std::process::exit(1);
    }
}
