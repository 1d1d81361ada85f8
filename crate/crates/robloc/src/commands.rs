//! One function per subcommand. Each returns the text it would print.

use std::fmt::Write as _;

use rayon::prelude::*;
use robloc_core::cop_translation::{probe_count_bound, CopError, CopRound, CopTrace, CopTranslation, ProbeBound};
use robloc_core::solver::{candidate_strategy, SolverError};
use robloc_core::strategy_graph::Node;
use robloc_core::subs_translation::{SubsError, SubsGame, SubsRound, SubsTrace};
use robloc_core::{
    decide_localizable, play, Budget, Construction, Divergence, Graph, Outcome, ResidueClass, RestrictedRobberRules,
    RobberModel, Stage, StrategyGraph, StrategyTable, SubdividedGraph, Verdict,
};
use serde::Serialize;

use crate::checks::{self, max_degree, Check};
use crate::io::{self, name_list, outcome_file, to_json, trace_file, OutcomeFile, TraceFile};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    CopToSubs,
    SubsToCop,
}

/// Everything a command may read; unused fields are ignored.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub graph: Graph,
    pub cops: Option<usize>,
    pub m: Option<u32>,
    pub eta: Option<u32>,
    pub budget: Budget,
    pub depth: u32,
    pub max_rounds: u32,
    pub format: Format,
    pub threads: usize,
    /// Strategy table file contents.
    pub table: Option<String>,
    pub allow_divergent: bool,
    pub walk: Option<Vec<String>>,
}

impl RunConfig {
    pub fn new(graph: Graph) -> Self {
        RunConfig {
            graph,
            cops: None,
            m: None,
            eta: None,
            budget: Budget::default(),
            depth: 64,
            max_rounds: 64,
            format: Format::Text,
            threads: 1,
            table: None,
            allow_divergent: false,
            walk: None,
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool, Error> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads.max(1))
            .build()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))
    }

    fn walk_on(&self, arena: &Graph) -> Result<Option<Vec<usize>>, Error> {
        let Some(names) = &self.walk else { return Ok(None) };
        let walk = names
            .iter()
            .map(|s| arena.vertex(s).ok_or_else(|| Error::Invalid(format!("walk vertex `{s}` is not in the arena"))))
            .collect::<Result<Vec<_>, _>>()?;
        if walk.is_empty() {
            return Err(Error::Invalid("walk is empty".into()));
        }
        Ok(Some(walk))
    }
}

/// Text printed by a command and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub body: String,
    pub code: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, code: 0 }
    }

    fn with(body: String, success: bool) -> Self {
        Output { body, code: if success { 0 } else { crate::EXIT_VIOLATION } }
    }
}

fn solver_error(e: SolverError) -> Error {
    match e {
        SolverError::BudgetExceeded(n) => Error::Budget(format!("solver stopped after {n} states")),
        SolverError::NotFound(max) => Error::Budget(format!("no parameter up to {max} wins")),
        other => Error::Invalid(other.to_string()),
    }
}

enum Search {
    Found { param: u32, capt: u32 },
    Budget { param: u32, states: usize },
    Exhausted,
}

/// Smallest parameter in `1..=max` accepted by `decide`, evaluated in
/// ordered batches of `threads` candidates.
fn search(
    pool: &rayon::ThreadPool,
    threads: usize,
    max: u32,
    decide: impl Fn(u32) -> Result<Verdict, SolverError> + Sync,
) -> Result<Search, Error> {
    let mut next = 1;
    while next <= max {
        let hi = max.min(next + threads.max(1) as u32 - 1);
        let verdicts: Vec<_> = pool.install(|| (next..=hi).into_par_iter().map(|p| (p, decide(p))).collect());
        for (param, v) in verdicts {
            match v.map_err(solver_error)? {
                Verdict::Winning { capture_time, .. } => return Ok(Search::Found { param, capt: capture_time }),
                Verdict::BudgetExceeded { states_explored } => {
                    return Ok(Search::Budget { param, states: states_explored })
                }
                Verdict::NotWinning => {}
            }
        }
        next = hi + 1;
    }
    Ok(Search::Exhausted)
}

#[derive(Serialize)]
struct ParamEntry {
    value: Option<u32>,
    capture_time: Option<u32>,
    status: &'static str,
}

impl ParamEntry {
    fn of(s: &Search) -> ParamEntry {
        match *s {
            Search::Found { param, capt } => ParamEntry { value: Some(param), capture_time: Some(capt), status: "decided" },
            Search::Budget { .. } => ParamEntry { value: None, capture_time: None, status: "budget_exceeded" },
            Search::Exhausted => ParamEntry { value: None, capture_time: None, status: "not_found" },
        }
    }

    fn text(&self, name: &str, out: &mut String, s: &Search) {
        match s {
            Search::Found { param, capt } => {
                let _ = writeln!(out, "{name}: {param} (capture time {capt})");
            }
            Search::Budget { param, states } => {
                let _ = writeln!(out, "{name}: unknown (budget exceeded at {param} after {states} states)");
            }
            Search::Exhausted => {
                let _ = writeln!(out, "{name}: not found in search range");
            }
        }
    }
}

#[derive(Serialize)]
struct ParamsReport {
    vertices: usize,
    edges: usize,
    localization_number: ParamEntry,
    subdivision_number: ParamEntry,
}

/// Localization number, subdivision number and both capture times.
pub fn params(cfg: &RunConfig) -> Result<Output, Error> {
    let g = &cfg.graph;
    let pool = cfg.pool()?;
    let n = g.len() as u32;
    let k_max = cfg.cops.map_or(n.max(1), |k| k as u32);
    let m_max = cfg.m.unwrap_or(n.max(1));
    let budget = cfg.budget;
    let zeta = search(&pool, cfg.threads, k_max, |k| decide_localizable(g, k as usize, budget))?;
    let eta = search(&pool, cfg.threads, m_max, |m| {
        let sg = SubdividedGraph::new(g, m)?;
        decide_localizable(sg.graph(), 1, budget)
    })?;
    let decided = matches!(zeta, Search::Found { .. }) && matches!(eta, Search::Found { .. });
    let report = ParamsReport {
        vertices: g.len(),
        edges: g.edges().len(),
        localization_number: ParamEntry::of(&zeta),
        subdivision_number: ParamEntry::of(&eta),
    };
    let body = match cfg.format {
        Format::Json => to_json(&report),
        _ => {
            let mut out = format!("vertices: {}\nedges: {}\n", report.vertices, report.edges);
            report.localization_number.text("localization number", &mut out, &zeta);
            report.subdivision_number.text("subdivision number", &mut out, &eta);
            out
        }
    };
    Ok(Output { body, code: if decided { 0 } else { crate::EXIT_BUDGET } })
}

/// The table from `--table` or the solver; falls back to the greedy
/// candidate when no strategy wins so divergence can be shown.
fn strategy_for(cfg: &RunConfig, arena: &Graph, k: usize) -> Result<(StrategyTable, bool), Error> {
    if let Some(text) = &cfg.table {
        return Ok((io::parse_table(arena, text)?, true));
    }
    match decide_localizable(arena, k, cfg.budget).map_err(solver_error)? {
        Verdict::Winning { strategy, .. } => Ok((strategy, true)),
        Verdict::NotWinning => {
            Ok((candidate_strategy(arena, k, cfg.budget.max_states).map_err(solver_error)?, false))
        }
        Verdict::BudgetExceeded { states_explored } => {
            Err(Error::Budget(format!("solver stopped after {states_explored} states")))
        }
    }
}

fn winning_strategy(cfg: &RunConfig, arena: &Graph, k: usize) -> Result<StrategyTable, Error> {
    match strategy_for(cfg, arena, k)? {
        (t, true) => Ok(t),
        (_, false) => Err(Error::Invalid(format!("{k} cop(s) cannot locate the robber on this graph"))),
    }
}

fn cycle_text(arena: &Graph, path: &[robloc_core::VertexSet]) -> String {
    path.iter().map(|s| name_list(arena, s)).collect::<Vec<_>>().join(" -> ")
}

#[derive(Serialize)]
struct DivergentReport {
    cop_winning: bool,
    repeated_states: Vec<Vec<String>>,
}

/// Builds and prints the strategy graph of the solved or supplied table.
///
/// With `--eta` the arena is `G^{1/eta}` and the graph is reduced to the
/// restricted robber; with `--m` the arena is `G^{1/m}` unreduced. Also
/// returns the strategy table as JSON.
pub fn strategy_graph(cfg: &RunConfig) -> Result<(Output, String), Error> {
    let sub = cfg.eta.or(cfg.m);
    let sg = sub.map(|m| SubdividedGraph::new(&cfg.graph, m)).transpose().map_err(|e| Error::Invalid(e.to_string()))?;
    let arena = sg.as_ref().map_or(&cfg.graph, |s| s.graph());
    let k = cfg.cops.unwrap_or(1);
    let (table, _) = strategy_for(cfg, arena, k)?;
    let table_text = io::table_json(arena, &table);
    let construction = StrategyGraph::build(&table, arena, cfg.depth).map_err(|e| Error::Invalid(e.to_string()))?;
    let mut h = match construction {
        Construction::Finite(h) => h,
        Construction::Divergent(Divergence::Cycle(path)) => {
            if !cfg.allow_divergent {
                return Err(Error::Invalid(format!(
                    "strategy is not cop-winning; the robber set repeats: {}",
                    cycle_text(arena, &path)
                )));
            }
            let body = match cfg.format {
                Format::Json => to_json(&DivergentReport {
                    cop_winning: false,
                    repeated_states: path
                        .iter()
                        .map(|s| s.iter().map(|v| arena.name(v).to_string()).collect())
                        .collect(),
                }),
                Format::Dot | Format::Text => {
                    format!("cop winning: no\nrepeated states: {}\n", cycle_text(arena, &path))
                }
            };
            return Ok((Output::ok(body), table_text));
        }
        Construction::Divergent(Divergence::Budget { depth, nodes }) => {
            return Err(Error::Budget(format!("strategy graph cut at depth {depth} with {nodes} nodes")))
        }
    };
    if let (Some(eta), Some(sg)) = (cfg.eta, &sg) {
        h = h.reduce_restricted(sg, &RestrictedRobberRules::new(eta)).map_err(|e| Error::Invalid(e.to_string()))?;
    }
    let body = match cfg.format {
        Format::Dot => h.export_dot(arena),
        Format::Json => io::strategy_graph_json(arena, &h),
        Format::Text => strategy_graph_text(arena, &h),
    };
    Ok((Output::ok(body), table_text))
}

fn strategy_graph_text(arena: &Graph, h: &StrategyGraph) -> String {
    let root: &Node = h.node(h.root());
    let mut out = format!("nodes: {}\nleaves: {}\ncapture time: {}\n", h.len(), h.leaves().count(), h.capture_time());
    if let Some(p) = &root.probes {
        let probes: Vec<&str> = p.0.iter().map(|&v| arena.name(v)).collect();
        let _ = writeln!(out, "root probes: {}", probes.join(","));
    }
    let _ = writeln!(out, "root branches: {}", root.children.len());
    for (a, c) in &root.children {
        let n = h.node(*c);
        let _ = writeln!(out, "  {} -> {} extended {}", io::label(a), name_list(arena, &n.refined), name_list(arena, &n.state.extended));
    }
    out
}

fn residue_name(r: ResidueClass) -> &'static str {
    match r {
        ResidueClass::AtBranch => "branch",
        ResidueClass::AtMidpointZone => "midpoint_zone",
        ResidueClass::Other => "other",
    }
}

fn stage_number(s: Stage) -> u8 {
    match s {
        Stage::Stage1 => 1,
        Stage::Stage2 => 2,
        Stage::Stage3 => 3,
    }
}

#[derive(Serialize)]
struct SubsRoundFile {
    round: u32,
    stage: u8,
    stride: u32,
    probe: String,
    answer: u32,
    residue: &'static str,
    refined: Vec<String>,
    cop_set: Option<Vec<String>>,
    contained: Option<bool>,
}

#[derive(Serialize)]
struct SubsTraceFile {
    walk: Vec<String>,
    rounds: Vec<SubsRoundFile>,
    outcome: OutcomeFile,
}

fn subs_trace_file(sg: &SubdividedGraph, walk: &[usize], t: &SubsTrace) -> SubsTraceFile {
    let s = sg.graph();
    let g = sg.base();
    let names = |set: &robloc_core::VertexSet, on: &Graph| set.iter().map(|v| on.name(v).to_string()).collect();
    SubsTraceFile {
        walk: walk.iter().map(|&v| s.name(v).to_string()).collect(),
        rounds: t
            .rounds
            .iter()
            .map(|r: &SubsRound| SubsRoundFile {
                round: r.round,
                stage: stage_number(r.stage),
                stride: r.stride,
                probe: s.name(r.probe).to_string(),
                answer: r.answer,
                residue: residue_name(r.residue),
                refined: names(&r.refined, s),
                cop_set: r.cop_set.as_ref().map(|c| names(c, g)),
                contained: r.contained,
            })
            .collect(),
        outcome: outcome_file(s, t.outcome),
    }
}

#[derive(Serialize)]
struct CopToSubsReport {
    direction: &'static str,
    cops: usize,
    m: u32,
    adversarial_worst_round: Option<u32>,
    adversarial_branches: usize,
    adversarial_violations: usize,
    walk_steps: u32,
    walks: String,
    walks_worst_round: u32,
    walks_undecided: String,
    walks_violations: usize,
    located: bool,
    violations: usize,
    traces: Vec<SubsTraceFile>,
}

#[derive(Serialize)]
struct CopRoundFile {
    round: u32,
    probes: Vec<String>,
    answers: Vec<u32>,
    refined: Vec<String>,
    hypotheses_before: usize,
    hypotheses_after: usize,
    diff: bool,
    terminated: usize,
    contained: bool,
    located: bool,
}

#[derive(Serialize)]
struct CopTraceFile {
    walk: Vec<String>,
    rounds: Vec<CopRoundFile>,
    outcome: OutcomeFile,
}

fn cop_trace_file(g: &Graph, walk: &[usize], t: &CopTrace) -> CopTraceFile {
    CopTraceFile {
        walk: walk.iter().map(|&v| g.name(v).to_string()).collect(),
        rounds: t
            .rounds
            .iter()
            .map(|r: &CopRound| CopRoundFile {
                round: r.round,
                probes: r.plan.iter().map(|&v| g.name(v).to_string()).collect(),
                answers: r.answers.clone(),
                refined: r.refined.iter().map(|v| g.name(v).to_string()).collect(),
                hypotheses_before: r.phi_before,
                hypotheses_after: r.phi_after,
                diff: r.diff,
                terminated: r.terminated,
                contained: r.contained,
                located: r.located,
            })
            .collect(),
        outcome: outcome_file(g, t.outcome),
    }
}

#[derive(Serialize)]
struct SubsToCopReport {
    direction: &'static str,
    eta: u32,
    capture_time: u32,
    stride_limit: u32,
    worst_round: Option<u32>,
    branches: usize,
    max_probes: usize,
    probe_bound: Option<String>,
    max_hypotheses: usize,
    containment_failures: usize,
    growth_failures: usize,
    diff_growth_failures: usize,
    located: bool,
    violations: usize,
    traces: Vec<CopTraceFile>,
}

fn subs_error(e: SubsError) -> Error {
    match e {
        SubsError::SubdivisionTooCoarse { m, cops } => Error::Invalid(format!(
            "m = {m} is too small for {cops} cop(s): the translation needs m >= 2 * cops = {}",
            2 * cops
        )),
        other => Error::Invalid(other.to_string()),
    }
}

fn cop_error(e: CopError) -> Error {
    match e {
        CopError::Solver(s) => solver_error(s),
        CopError::NotWinning(eta) => {
            Error::Invalid(format!("one cop cannot locate the robber on the {eta}-subdivision"))
        }
        other => Error::Invalid(other.to_string()),
    }
}

/// Runs one of the two strategy translations against every adversarial
/// branch and against scripted robbers.
pub fn translate(cfg: &RunConfig, direction: Direction) -> Result<Output, Error> {
    match direction {
        Direction::CopToSubs => cop_to_subs(cfg),
        Direction::SubsToCop => subs_to_cop(cfg),
    }
}

fn smallest_cops(cfg: &RunConfig) -> Result<usize, Error> {
    let g = &cfg.graph;
    let pool = cfg.pool()?;
    let budget = cfg.budget;
    match search(&pool, cfg.threads, g.len().max(1) as u32, |k| decide_localizable(g, k as usize, budget))? {
        Search::Found { param, .. } => Ok(param as usize),
        Search::Budget { param, states } => {
            Err(Error::Budget(format!("solver stopped at {param} cops after {states} states")))
        }
        Search::Exhausted => Err(Error::Budget("no cop count wins".into())),
    }
}

fn cop_to_subs(cfg: &RunConfig) -> Result<Output, Error> {
    let g = &cfg.graph;
    let k = match cfg.cops {
        Some(k) => k,
        None => smallest_cops(cfg)?,
    };
    let table = winning_strategy(cfg, g, k)?;
    let m = cfg.m.unwrap_or(2 * k as u32);
    let game = SubsGame::new(&table, g, m).map_err(subs_error)?;
    let sg = game.subdivided();
    let walks: Vec<Vec<usize>> = match cfg.walk_on(sg.graph())? {
        Some(w) => vec![w],
        None => (0..g.len()).map(|v| vec![sg.branch(v)]).collect(),
    };
    let steps = 6 * m;
    let pool = cfg.pool()?;
    let (adv, (walk_report, traces)) = pool.install(|| {
        rayon::join(
            || game.play_adversarial(cfg.max_rounds),
            || {
                rayon::join(
                    || game.check_walks(steps, cfg.max_rounds),
                    || walks.par_iter().map(|w| game.play_scripted(w, cfg.max_rounds)).collect::<Vec<_>>(),
                )
            },
        )
    });
    let adv = adv.map_err(subs_error)?;
    let walk_report = walk_report.map_err(subs_error)?;
    let traces = traces.into_iter().collect::<Result<Vec<_>, _>>().map_err(subs_error)?;
    let trace_violations: usize = traces.iter().map(SubsTrace::violations).sum();
    let traces_located = traces.iter().all(|t| t.outcome != Outcome::Undecided);
    let located = adv.worst.is_some() && walk_report.undecided == 0 && traces_located;
    let violations = adv.violations + walk_report.violations + trace_violations;
    let report = CopToSubsReport {
        direction: "cop-to-subs",
        cops: k,
        m,
        adversarial_worst_round: adv.worst,
        adversarial_branches: adv.branches,
        adversarial_violations: adv.violations,
        walk_steps: steps,
        walks: walk_report.walks.to_string(),
        walks_worst_round: walk_report.worst_round,
        walks_undecided: walk_report.undecided.to_string(),
        walks_violations: walk_report.violations,
        located,
        violations,
        traces: walks.iter().zip(&traces).map(|(w, t)| subs_trace_file(sg, w, t)).collect(),
    };
    let body = match cfg.format {
        Format::Json => to_json(&report),
        _ => {
            let mut out = format!("direction: cop-to-subs\ncops: {k}\nm: {m}\n");
            let _ = match adv.worst {
                Some(w) => writeln!(out, "adversarial: located by round {w} over {} branches", adv.branches),
                None => writeln!(out, "adversarial: undecided within {} rounds", cfg.max_rounds),
            };
            let _ = writeln!(
                out,
                "walks of up to {steps} moves: {} located, worst round {}, {} undecided",
                walk_report.walks, walk_report.worst_round, walk_report.undecided
            );
            for (w, t) in walks.iter().zip(&traces) {
                let start = sg.graph().name(w[0]);
                let _ = match t.outcome {
                    Outcome::Located { round, .. } => writeln!(out, "robber from {start}: located in round {round}"),
                    Outcome::Undecided => writeln!(out, "robber from {start}: undecided"),
                };
            }
            let _ = writeln!(out, "containment violations: {violations}");
            let _ = writeln!(out, "verdict: {}", if located && violations == 0 { "located" } else { "failed" });
            out
        }
    };
    Ok(Output::with(body, located && violations == 0))
}

fn smallest_eta(cfg: &RunConfig) -> Result<u32, Error> {
    let g = &cfg.graph;
    let pool = cfg.pool()?;
    let budget = cfg.budget;
    let found = search(&pool, cfg.threads, g.len().max(1) as u32, |m| {
        let sg = SubdividedGraph::new(g, m)?;
        decide_localizable(sg.graph(), 1, budget)
    })?;
    match found {
        Search::Found { param, .. } => Ok(param),
        Search::Budget { param, states } => {
            Err(Error::Budget(format!("solver stopped at m = {param} after {states} states")))
        }
        Search::Exhausted => Err(Error::Budget("no subdivision is one-cop localizable in range".into())),
    }
}

fn subs_to_cop(cfg: &RunConfig) -> Result<Output, Error> {
    let g = &cfg.graph;
    let eta = match cfg.eta {
        Some(e) => e,
        None => smallest_eta(cfg)?,
    };
    let (t, capt) = CopTranslation::prepare(g, eta, cfg.budget).map_err(cop_error)?;
    let walks: Vec<Vec<usize>> = match cfg.walk_on(g)? {
        Some(w) => vec![w],
        None => (0..g.len()).map(|v| vec![v]).collect(),
    };
    let pool = cfg.pool()?;
    let (report, traces) = pool.install(|| {
        rayon::join(
            || t.play_adversarial(cfg.max_rounds),
            || walks.par_iter().map(|w| t.play_scripted(w, cfg.max_rounds)).collect::<Vec<_>>(),
        )
    });
    let report = report.map_err(cop_error)?;
    let traces = traces.into_iter().collect::<Result<Vec<_>, _>>().map_err(cop_error)?;
    let mut monitor = report.monitor.clone();
    for (_, m) in &traces {
        monitor.max_probes = monitor.max_probes.max(m.max_probes);
        monitor.max_phi = monitor.max_phi.max(m.max_phi);
        monitor.containment_failures += m.containment_failures;
        monitor.growth_failures += m.growth_failures;
        monitor.diff_growth_failures += m.diff_growth_failures;
    }
    let bound = probe_count_bound(capt, eta, max_degree(g));
    let limit = capt.div_ceil(eta) + 1;
    let located = report.worst.is_some_and(|w| w <= limit)
        && traces.iter().all(|(tr, _)| matches!(tr.outcome, Outcome::Located { round, .. } if round <= limit));
    let violations = monitor.violations() + usize::from(!bound.admits(monitor.max_probes));
    let bound_text = match bound {
        ProbeBound::Finite(b) => Some(b.to_string()),
        ProbeBound::Saturated => None,
    };
    let file = SubsToCopReport {
        direction: "subs-to-cop",
        eta,
        capture_time: capt,
        stride_limit: limit,
        worst_round: report.worst,
        branches: report.branches,
        max_probes: monitor.max_probes,
        probe_bound: bound_text.clone(),
        max_hypotheses: monitor.max_phi,
        containment_failures: monitor.containment_failures,
        growth_failures: monitor.growth_failures,
        diff_growth_failures: monitor.diff_growth_failures,
        located,
        violations,
        traces: walks.iter().zip(&traces).map(|(w, (tr, _))| cop_trace_file(g, w, tr)).collect(),
    };
    let body = match cfg.format {
        Format::Json => to_json(&file),
        _ => {
            let mut out = format!("direction: subs-to-cop\neta: {eta}\ncapture time: {capt}\nstride limit: {limit}\n");
            let _ = match report.worst {
                Some(w) => writeln!(out, "adversarial: located by round {w} over {} branches", report.branches),
                None => writeln!(out, "adversarial: undecided within {} rounds", cfg.max_rounds),
            };
            let _ = writeln!(
                out,
                "probes per round: {} (bound {})",
                monitor.max_probes,
                bound_text.as_deref().unwrap_or("saturated")
            );
            let _ = writeln!(out, "hypotheses: at most {}", monitor.max_phi);
            let _ = writeln!(
                out,
                "monitor failures: containment {}, growth {}, growth on diff {}",
                monitor.containment_failures, monitor.growth_failures, monitor.diff_growth_failures
            );
            let _ = writeln!(out, "verdict: {}", if located && violations == 0 { "located" } else { "failed" });
            out
        }
    };
    Ok(Output::with(body, located && violations == 0))
}

#[derive(Serialize)]
struct SimulateReport {
    cops: usize,
    robber: &'static str,
    outcome: OutcomeFile,
    branches: Vec<TraceFile>,
}

/// Plays the solved or supplied strategy against a scripted or adversarial robber.
pub fn simulate(cfg: &RunConfig) -> Result<Output, Error> {
    let sg = cfg.m.map(|m| SubdividedGraph::new(&cfg.graph, m)).transpose().map_err(|e| Error::Invalid(e.to_string()))?;
    let arena = sg.as_ref().map_or(&cfg.graph, |s| s.graph());
    let k = cfg.cops.unwrap_or(1);
    let table = winning_strategy(cfg, arena, k)?;
    let walk = cfg.walk_on(arena)?;
    let robber = match &walk {
        Some(w) => RobberModel::Scripted(w.clone()),
        None => RobberModel::Adversarial,
    };
    let playout = play(&table, arena, &robber, cfg.max_rounds).map_err(|e| Error::Invalid(e.to_string()))?;
    let outcome = playout.outcome();
    let report = SimulateReport {
        cops: k,
        robber: if walk.is_some() { "scripted" } else { "adversarial" },
        outcome: outcome_file(arena, outcome),
        branches: playout.branches.iter().map(|t| trace_file(arena, t)).collect(),
    };
    let body = match cfg.format {
        Format::Json => to_json(&report),
        _ => {
            let mut out = format!("cops: {k}\nrobber: {}\nbranches: {}\n", report.robber, playout.branches.len());
            for (i, b) in playout.branches.iter().enumerate() {
                let _ = write!(out, "branch {i}:");
                for r in &b.rounds {
                    let probes: Vec<&str> = r.probes.0.iter().map(|&v| arena.name(v)).collect();
                    let _ = write!(out, " [{}]{}", probes.join(","), io::label(&r.answers));
                }
                let _ = match b.outcome {
                    Outcome::Located { round, vertex } => {
                        writeln!(out, " => {} in round {round}", arena.name(vertex))
                    }
                    Outcome::Undecided => writeln!(out, " => undecided"),
                };
            }
            out
        }
    };
    Ok(Output::with(body, outcome != Outcome::Undecided))
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    checks: Vec<Check>,
}

type Job<'a> = Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>;

/// Runs the brute-force suites on one graph.
pub fn verify(cfg: &RunConfig) -> Result<Output, Error> {
    let g = &cfg.graph;
    let budget = cfg.budget;
    let rounds = cfg.max_rounds;
    let m_max = cfg.m.unwrap_or(4).max(2);
    let eta_max = cfg.eta.unwrap_or(3).max(1);
    let max_cops = cfg.cops.unwrap_or(2).max(1);
    let mut jobs: Vec<Job> = Vec::new();
    for m in 1..=m_max {
        jobs.push(Box::new(move || vec![checks::subdivision_invariants(g, m)]));
    }
    for m in 2..=m_max {
        jobs.push(Box::new(move || vec![checks::deduce_oracle(g, m)]));
    }
    for eta in 1..=eta_max {
        jobs.push(Box::new(move || vec![checks::round_deduction_oracle(g, eta)]));
    }
    for k in 1..=max_cops {
        jobs.push(Box::new(move || vec![checks::equivalence(g, k, budget)]));
    }
    jobs.push(Box::new(move || vec![checks::subdivision_translation(g, max_cops, rounds, budget)]));
    jobs.push(Box::new(move || {
        let search = (1..=eta_max).find_map(|m| {
            let sg = SubdividedGraph::new(g, m).ok()?;
            match decide_localizable(sg.graph(), 1, budget) {
                Ok(Verdict::NotWinning) => None,
                Ok(Verdict::Winning { .. }) => Some(Ok(m)),
                Ok(Verdict::BudgetExceeded { .. }) | Err(_) => Some(Err(m)),
            }
        });
        match search {
            Some(Ok(eta)) => checks::cop_translation(g, eta, budget, rounds),
            Some(Err(m)) => vec![Check::skip("subdivision-to-cop translation", format!("solver budget exceeded at m = {m}"))],
            None => vec![Check::skip("subdivision-to-cop translation", format!("subdivision number above {eta_max}"))],
        }
    }));
    let pool = cfg.pool()?;
    let results: Vec<Check> = pool.install(|| jobs.par_iter().map(|j| j()).collect::<Vec<_>>()).concat();
    let passed = results.iter().all(Check::passed);
    let body = match cfg.format {
        Format::Json => to_json(&VerifyReport { passed, checks: results }),
        _ => {
            let mut out = String::new();
            for c in &results {
                let _ = writeln!(out, "{}", c.line());
            }
            let _ = writeln!(out, "verdict: {}", if passed { "pass" } else { "fail" });
            out
        }
    };
    Ok(Output::with(body, passed))
}
