//! JSON file formats for graphs, strategy tables, strategy graphs and traces.

use std::collections::BTreeMap;

use robloc_core::game::Trace;
use robloc_core::strategy_graph::{answer_label, Node};
use robloc_core::{
    AnswerVector, GameState, Graph, Outcome, ProbeSet, Stage, StrategyGraph, StrategyTable, VertexSet,
};
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

pub fn graph_to_file(g: &Graph) -> GraphFile {
    GraphFile {
        vertices: g.names().to_vec(),
        edges: g.edges().iter().map(|&(u, v)| (g.name(u).to_string(), g.name(v).to_string())).collect(),
    }
}

pub fn graph_from_file(f: &GraphFile) -> Result<Graph, Error> {
    Graph::new(f.vertices.clone(), &f.edges).map_err(|e| Error::Invalid(format!("graph: {e}")))
}

pub fn parse_graph(text: &str) -> Result<Graph, Error> {
    let f: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph file: {e}")))?;
    graph_from_file(&f)
}

pub fn graph_json(g: &Graph) -> String {
    to_json(&graph_to_file(g))
}

fn names(g: &Graph, set: &VertexSet) -> Vec<String> {
    set.iter().map(|v| g.name(v).to_string()).collect()
}

fn lookup(g: &Graph, name: &str) -> Result<usize, Error> {
    g.vertex(name).ok_or_else(|| Error::Invalid(format!("unknown vertex `{name}`")))
}

fn set_of(g: &Graph, list: &[String]) -> Result<VertexSet, Error> {
    g.set_from_names(list).map_err(|e| Error::Invalid(e.to_string()))
}

/// Keys are canonical set strings, values are probe names in cop order.
pub fn table_json(g: &Graph, t: &StrategyTable) -> String {
    let map: BTreeMap<String, Vec<String>> = t
        .iter()
        .map(|(set, probes)| (g.canonical_string(set), probes.0.iter().map(|&p| g.name(p).to_string()).collect()))
        .collect();
    to_json(&map)
}

pub fn parse_table(g: &Graph, text: &str) -> Result<StrategyTable, Error> {
    let map: BTreeMap<String, Vec<String>> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("strategy table: {e}")))?;
    let mut t = StrategyTable::new();
    for (key, probes) in map {
        let members: Vec<String> =
            if key.is_empty() { Vec::new() } else { key.split(',').map(str::to_string).collect() };
        let set = set_of(g, &members)?;
        let probes = probes.iter().map(|p| lookup(g, p)).collect::<Result<Vec<_>, _>>()?;
        if t.insert(set, ProbeSet(probes)).is_some() {
            return Err(Error::Invalid(format!("strategy table lists `{key}` twice")));
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeFile {
    id: usize,
    round: u32,
    extended: Vec<String>,
    refined: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stage: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stride: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    round_index: Option<u32>,
    probes: Option<Vec<String>>,
    children: Vec<EdgeFile>,
    parent: Option<usize>,
    leaf: bool,
    depth: u32,
    level: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    answer: Vec<u32>,
    node: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StrategyGraphFile {
    stride_len: Option<u32>,
    nodes: Vec<NodeFile>,
}

fn stage_code(s: Stage) -> u8 {
    match s {
        Stage::Stage1 => 1,
        Stage::Stage2 => 2,
        Stage::Stage3 => 3,
    }
}

fn stage_of(c: u8) -> Result<Stage, Error> {
    match c {
        1 => Ok(Stage::Stage1),
        2 => Ok(Stage::Stage2),
        3 => Ok(Stage::Stage3),
        _ => Err(Error::Invalid(format!("stage {c} out of range"))),
    }
}

pub fn strategy_graph_json(arena: &Graph, h: &StrategyGraph) -> String {
    let nodes = h
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, n)| NodeFile {
            id,
            round: n.state.round,
            extended: names(arena, &n.state.extended),
            refined: names(arena, &n.refined),
            stage: n.state.stage.map(stage_code),
            stride: n.state.stride,
            round_index: n.state.round_index,
            probes: n.probes.as_ref().map(|p| p.0.iter().map(|&v| arena.name(v).to_string()).collect()),
            children: n.children.iter().map(|(a, c)| EdgeFile { answer: a.0.clone(), node: *c }).collect(),
            parent: n.parent,
            leaf: n.leaf,
            depth: n.depth,
            level: n.level,
        })
        .collect();
    to_json(&StrategyGraphFile { stride_len: h.stride_len(), nodes })
}

pub fn parse_strategy_graph(arena: &Graph, text: &str) -> Result<StrategyGraph, Error> {
    let f: StrategyGraphFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("strategy graph: {e}")))?;
    let mut nodes = Vec::with_capacity(f.nodes.len());
    for (i, n) in f.nodes.into_iter().enumerate() {
        if n.id != i {
            return Err(Error::Invalid(format!("node {i} is labelled {}", n.id)));
        }
        let probes = match n.probes {
            Some(p) => Some(ProbeSet(p.iter().map(|v| lookup(arena, v)).collect::<Result<_, _>>()?)),
            None => None,
        };
        nodes.push(Node {
            state: GameState {
                extended: set_of(arena, &n.extended)?,
                round: n.round,
                stage: n.stage.map(stage_of).transpose()?,
                stride: n.stride,
                round_index: n.round_index,
            },
            refined: set_of(arena, &n.refined)?,
            probes,
            children: n.children.into_iter().map(|e| (AnswerVector(e.answer), e.node)).collect(),
            parent: n.parent,
            leaf: n.leaf,
            depth: n.depth,
            level: n.level,
        });
    }
    StrategyGraph::from_parts(nodes, f.stride_len).map_err(|e| Error::Invalid(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundFile {
    pub round: u32,
    pub extended: Vec<String>,
    pub probes: Vec<String>,
    pub answers: Vec<u32>,
    pub refined: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeFile {
    Located { round: u32, vertex: String },
    Undecided,
}

pub fn outcome_file(g: &Graph, o: Outcome) -> OutcomeFile {
    match o {
        Outcome::Located { round, vertex } => OutcomeFile::Located { round, vertex: g.name(vertex).to_string() },
        Outcome::Undecided => OutcomeFile::Undecided,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceFile {
    pub rounds: Vec<RoundFile>,
    pub outcome: OutcomeFile,
}

pub fn trace_file(g: &Graph, t: &Trace) -> TraceFile {
    TraceFile {
        rounds: t
            .rounds
            .iter()
            .map(|r| RoundFile {
                round: r.state.round + 1,
                extended: names(g, &r.state.extended),
                probes: r.probes.0.iter().map(|&p| g.name(p).to_string()).collect(),
                answers: r.answers.0.clone(),
                refined: names(g, &r.refined),
            })
            .collect(),
        outcome: outcome_file(g, t.outcome),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory values serialize");
    s.push('\n');
    s
}

/// `(0,1)`-style label used in text output.
pub fn label(a: &AnswerVector) -> String {
    answer_label(a)
}

pub fn name_list(g: &Graph, set: &VertexSet) -> String {
    format!("{{{}}}", g.canonical_string(set))
}
