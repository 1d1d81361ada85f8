//! Cop strategy graphs: the tree of states a deterministic strategy visits.
//!
//! The graph is finite exactly when the strategy wins. Construction is
//! breadth-first; a state repeating on its own root path is a witness that
//! the strategy can be kept busy forever.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::game::{expand, partition_answers, AnswerVector, GameError, GameState, ProbeSet};
use crate::graph::Graph;
use crate::set::VertexSet;
use crate::subdivision::SubdividedGraph;
use crate::table::StrategyTable;

/// Hard cap on tree size, independent of the depth budget.
pub const MAX_NODES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    /// `state.extended` is the set probed at this node; for a leaf it is the
    /// located singleton.
    pub state: GameState,
    /// Robber set after the parent's probe; the full vertex set at the root.
    pub refined: VertexSet,
    pub probes: Option<ProbeSet>,
    pub children: Vec<(AnswerVector, usize)>,
    pub parent: Option<usize>,
    pub leaf: bool,
    pub depth: u32,
    /// Stride level, assigned only in restricted graphs.
    pub level: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyGraph {
    nodes: Vec<Node>,
    stride_len: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Divergence {
    /// Extended sets from the root to a state equal to one of its ancestors.
    Cycle(Vec<VertexSet>),
    Budget { depth: u32, nodes: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Finite(StrategyGraph),
    Divergent(Divergence),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopWinning {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyGraphError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("rules use {rules} rounds per stride but the arena is subdivided with m = {arena}")]
    StrideMismatch { rules: u32, arena: u32 },
    #[error("strategy graph has no stride levels")]
    NoLevels,
    #[error("node {0} does not exist")]
    UnknownNode(usize),
    #[error("malformed strategy graph: {0}")]
    Malformed(String),
}

/// Which robber walks the restricted subdivision game admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RestrictedRobberRules {
    pub eta: u32,
    pub start_at_branch: bool,
    pub end_on_branch: bool,
    pub no_backtracking: bool,
    pub restricted_stays: bool,
}

impl RestrictedRobberRules {
    pub fn new(eta: u32) -> Self {
        RestrictedRobberRules {
            eta,
            start_at_branch: true,
            end_on_branch: true,
            no_backtracking: true,
            restricted_stays: true,
        }
    }

    /// Positions the robber may occupy when round `round` is probed.
    pub fn allowed(&self, sg: &SubdividedGraph, round: u32) -> VertexSet {
        let g = sg.graph();
        let mut out = g.empty_set();
        let eta = self.eta;
        if round <= 1 {
            for x in 0..g.len() {
                if !self.start_at_branch || sg.is_branch(x) {
                    out.insert(x);
                }
            }
            return out;
        }
        let j = round_index(round, eta);
        let relaxed = !self.no_backtracking || !self.restricted_stays;
        for x in 0..g.len() {
            let ok = if !self.end_on_branch {
                true
            } else {
                let (_, _, da, db) = sg.thread_position(x);
                if sg.is_branch(x) {
                    true
                } else if j == eta {
                    false
                } else {
                    da == j || da == eta - j || (relaxed && da.min(db) <= j.min(eta - j))
                }
            };
            if ok {
                out.insert(x);
            }
        }
        out
    }
}

/// Stride level of a probing round: round 1 is level 0, then blocks of `eta`.
pub fn stride_level(round: u32, eta: u32) -> u32 {
    if round <= 1 {
        0
    } else {
        (round - 1).div_ceil(eta)
    }
}

/// Position of a probing round inside its stride, `1..=eta`; 0 for round 1.
pub fn round_index(round: u32, eta: u32) -> u32 {
    if round <= 1 {
        0
    } else {
        (round - 1) - (stride_level(round, eta) - 1) * eta
    }
}

impl StrategyGraph {
    /// Expands `strategy` from the full vertex set, breadth first.
    pub fn build(strategy: &StrategyTable, arena: &Graph, depth_budget: u32) -> Result<Construction, GameError> {
        let all = arena.all_vertices();
        let root_leaf = all.len() == 1;
        let mut nodes = vec![Node {
            state: GameState::with_set(all.clone(), 0),
            refined: all,
            probes: None,
            children: Vec::new(),
            parent: None,
            leaf: root_leaf,
            depth: 0,
            level: None,
        }];
        let mut queue = VecDeque::from([0usize]);
        let mut truncated = false;
        while let Some(id) = queue.pop_front() {
            if nodes[id].leaf {
                continue;
            }
            if nodes[id].depth >= depth_budget || nodes.len() >= MAX_NODES {
                truncated = true;
                continue;
            }
            let x = nodes[id].state.extended.clone();
            let probes = strategy.get(&x).ok_or_else(|| GameError::UndefinedStrategy(arena.canonical_string(&x)))?;
            if probes.is_empty() {
                return Err(GameError::EmptyProbeSet(arena.canonical_string(&x)));
            }
            let depth = nodes[id].depth + 1;
            let mut children = Vec::new();
            for (answer, part) in partition_answers(arena, &x, &probes.0) {
                let leaf = part.len() == 1;
                let extended = if leaf { part.clone() } else { expand(arena, &part) };
                if !leaf {
                    if let Some(path) = root_path_cycle(&nodes, id, &extended) {
                        return Ok(Construction::Divergent(Divergence::Cycle(path)));
                    }
                }
                let child = nodes.len();
                nodes.push(Node {
                    state: GameState::with_set(extended, depth),
                    refined: part,
                    probes: None,
                    children: Vec::new(),
                    parent: Some(id),
                    leaf,
                    depth,
                    level: None,
                });
                children.push((answer, child));
                queue.push_back(child);
            }
            nodes[id].probes = Some(probes.clone());
            nodes[id].children = children;
        }
        if truncated {
            let depth = nodes.iter().map(|n| n.depth).max().unwrap_or(0);
            return Ok(Construction::Divergent(Divergence::Budget { depth, nodes: nodes.len() }));
        }
        Ok(Construction::Finite(StrategyGraph { nodes, stride_len: None }))
    }

    /// Assembles a graph from stored nodes, checking the tree shape.
    pub fn from_parts(nodes: Vec<Node>, stride_len: Option<u32>) -> Result<StrategyGraph, StrategyGraphError> {
        let bad = |s: &str| Err(StrategyGraphError::Malformed(s.into()));
        if nodes.is_empty() {
            return bad("no nodes");
        }
        if nodes[0].parent.is_some() || nodes[0].depth != 0 {
            return bad("node 0 is not a root");
        }
        for (id, n) in nodes.iter().enumerate() {
            if n.leaf != n.children.is_empty() || n.leaf != n.probes.is_none() {
                return bad("leaf flag disagrees with children");
            }
            for w in n.children.windows(2) {
                if w[0].0 >= w[1].0 {
                    return bad("answer vectors out of order");
                }
            }
            for &(_, c) in &n.children {
                if c >= nodes.len() || c <= id || nodes[c].parent != Some(id) || nodes[c].depth != n.depth + 1 {
                    return bad("child link");
                }
            }
        }
        Ok(StrategyGraph { nodes, stride_len })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn stride_len(&self) -> Option<u32> {
        self.stride_len
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].leaf)
    }

    /// Rounds until every branch is located: the deepest leaf.
    pub fn capture_time(&self) -> u32 {
        self.leaves().map(|i| self.nodes[i].depth).max().unwrap_or(0)
    }

    /// The child reached from `id` under `answer`, if that branch exists.
    pub fn child(&self, id: usize, answer: &AnswerVector) -> Option<usize> {
        let kids = &self.nodes[id].children;
        kids.binary_search_by(|(a, _)| a.cmp(answer)).ok().map(|i| kids[i].1)
    }

    /// Restricts every node to the positions the rules allow at its round.
    ///
    /// Branches whose robber set becomes empty are dropped; branches that
    /// shrink to one position become leaves. Stride levels are assigned.
    pub fn reduce_restricted(&self, sg: &SubdividedGraph, rules: &RestrictedRobberRules) -> Result<StrategyGraph, StrategyGraphError> {
        if rules.eta != sg.m() || rules.eta == 0 {
            return Err(StrategyGraphError::StrideMismatch { rules: rules.eta, arena: sg.m() });
        }
        let g = sg.graph();
        if self.nodes[0].state.extended.universe() != g.len() {
            return Err(StrategyGraphError::Malformed("graph was built on a different arena".into()));
        }
        let eta = rules.eta;
        let max_round = self.nodes.iter().map(|n| n.depth + 1).max().unwrap_or(1);
        let allowed: Vec<VertexSet> = (0..=max_round).map(|r| rules.allowed(sg, r)).collect();

        let root = &self.nodes[0];
        let root_set = root.state.extended.intersection(&allowed[1]);
        let mut out = vec![Node {
            state: tag(GameState::with_set(root_set.clone(), 0), eta),
            refined: root.refined.intersection(&allowed[1]),
            probes: None,
            children: Vec::new(),
            parent: None,
            leaf: root_set.len() <= 1,
            depth: 0,
            level: Some(0),
        }];
        // (old id, new id)
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        while let Some((old, new)) = queue.pop_front() {
            if out[new].leaf {
                continue;
            }
            let src = &self.nodes[old];
            let x = out[new].state.extended.clone();
            let mut children = Vec::new();
            for (answer, oc) in &src.children {
                let part = self.nodes[*oc].refined.intersection(&x);
                if part.is_empty() {
                    continue;
                }
                let depth = out[new].depth + 1;
                let leaf = part.len() == 1 || self.nodes[*oc].leaf;
                let extended = if leaf { part.clone() } else { expand(g, &part).intersection(&allowed[depth as usize + 1]) };
                let level = if leaf { stride_level(depth, eta) } else { stride_level(depth + 1, eta) };
                let id = out.len();
                out.push(Node {
                    state: tag(GameState::with_set(extended, depth), eta),
                    refined: part,
                    probes: None,
                    children: Vec::new(),
                    parent: Some(new),
                    leaf,
                    depth,
                    level: Some(level),
                });
                children.push((answer.clone(), id));
                if !leaf {
                    queue.push_back((*oc, id));
                }
            }
            out[new].probes = src.probes.clone();
            out[new].children = children;
            if out[new].children.is_empty() {
                // Every branch was pruned: no admissible robber reaches this node.
                out[new].leaf = true;
                out[new].probes = None;
            }
        }
        Ok(StrategyGraph { nodes: out, stride_len: Some(eta) })
    }

    /// Nodes below `id` (inclusive) lying on the given stride levels, in id order.
    pub fn subtree(&self, id: usize, levels: &[u32]) -> Result<Vec<usize>, StrategyGraphError> {
        if self.stride_len.is_none() {
            return Err(StrategyGraphError::NoLevels);
        }
        if id >= self.nodes.len() {
            return Err(StrategyGraphError::UnknownNode(id));
        }
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            let level = node.level.ok_or(StrategyGraphError::NoLevels)?;
            if levels.contains(&level) {
                out.push(n);
            }
            let max_level = levels.iter().copied().max().unwrap_or(0);
            if level <= max_level {
                stack.extend(node.children.iter().map(|&(_, c)| c));
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Graphviz rendering; identical graphs give identical text.
    pub fn export_dot(&self, arena: &Graph) -> String {
        let mut s = String::from("digraph strategy {\n  node [shape=ellipse];\n");
        for (id, n) in self.nodes.iter().enumerate() {
            let label = arena.canonical_string(&n.state.extended);
            let _ = write!(s, "  n{id} [label=\"{{{label}}}\"");
            if n.leaf {
                s.push_str(", shape=box");
            }
            if let Some(p) = &n.probes {
                let names: Vec<&str> = p.0.iter().map(|&v| arena.name(v)).collect();
                let _ = write!(s, ", tooltip=\"probe {}\"", names.join(","));
            }
            s.push_str("];\n");
        }
        for (id, n) in self.nodes.iter().enumerate() {
            for (a, c) in &n.children {
                let _ = writeln!(s, "  n{id} -> n{c} [label=\"{}\"];", answer_label(a));
            }
        }
        s.push_str("}\n");
        s
    }
}

fn tag(mut state: GameState, eta: u32) -> GameState {
    let round = state.round + 1;
    state.stride = Some(stride_level(round, eta));
    state.round_index = Some(round_index(round, eta));
    state
}

pub fn answer_label(a: &AnswerVector) -> String {
    let parts: Vec<String> = a.0.iter().map(|d| format!("{d}")).collect();
    format!("({})", parts.join(","))
}

fn root_path_cycle(nodes: &[Node], from: usize, x: &VertexSet) -> Option<Vec<VertexSet>> {
    let mut path = Vec::new();
    let mut cur = Some(from);
    let mut hit = false;
    while let Some(id) = cur {
        path.push(nodes[id].state.extended.clone());
        hit |= &nodes[id].state.extended == x;
        cur = nodes[id].parent;
    }
    if !hit {
        return None;
    }
    path.reverse();
    path.push(x.clone());
    Some(path)
}

impl Construction {
    /// Finite means winning; a repeated state means losing; a budget cut is inconclusive.
    pub fn is_cop_winning(&self) -> CopWinning {
        match self {
            Construction::Finite(_) => CopWinning::Yes,
            Construction::Divergent(Divergence::Cycle(_)) => CopWinning::No,
            Construction::Divergent(Divergence::Budget { .. }) => CopWinning::Unknown,
        }
    }

    pub fn graph(&self) -> Option<&StrategyGraph> {
        match self {
            Construction::Finite(h) => Some(h),
            Construction::Divergent(_) => None,
        }
    }
}
