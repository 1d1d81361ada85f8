//! One round of the robber locating game: probe, refine, expand.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Graph;
use crate::set::VertexSet;
use crate::table::StrategyTable;

/// Stage tag used by the subdivision-game strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Stage1,
    Stage2,
    Stage3,
}

/// What a deterministic cop strategy may read.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GameState {
    /// Positions the robber may occupy when the next probes are sent.
    pub extended: VertexSet,
    pub round: u32,
    pub stage: Option<Stage>,
    pub stride: Option<u32>,
    pub round_index: Option<u32>,
}

impl GameState {
    pub fn initial(arena: &Graph) -> GameState {
        GameState::with_set(arena.all_vertices(), 0)
    }

    pub fn with_set(extended: VertexSet, round: u32) -> GameState {
        GameState { extended, round, stage: None, stride: None, round_index: None }
    }
}

/// Vertices probed simultaneously, one per cop. Repeats are allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProbeSet(pub Vec<usize>);

impl ProbeSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn answers_for(&self, arena: &Graph, robber: usize) -> AnswerVector {
        AnswerVector(self.0.iter().map(|&p| arena.dist(p, robber)).collect())
    }
}

/// Distances returned for a [`ProbeSet`], position by position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnswerVector(pub Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RobberModel {
    /// No commitment: every consistent answer is explored.
    Adversarial,
    /// A fixed walk; the robber stays on the last vertex once it runs out.
    Scripted(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("strategy has no entry for robber set {{{0}}}")]
    UndefinedStrategy(String),
    #[error("strategy for {{{0}}} has no probes")]
    EmptyProbeSet(String),
    #[error("scripted walk is empty")]
    EmptyWalk,
    #[error("scripted walk leaves the arena or jumps at step {0}")]
    InvalidWalk(usize),
}

/// Positions of `x` consistent with every probe answer.
pub fn refine(arena: &Graph, x: &VertexSet, probes: &[usize], answers: &[u32]) -> VertexSet {
    debug_assert_eq!(probes.len(), answers.len());
    let mut out = arena.empty_set();
    for v in x {
        if probes.iter().zip(answers).all(|(&p, &a)| arena.dist(p, v) == a) {
            out.insert(v);
        }
    }
    out
}

/// Splits `x` by the answer vector each position would produce.
///
/// Parts are non-empty, disjoint, cover `x`, and are sorted by answer vector.
pub fn partition_answers(arena: &Graph, x: &VertexSet, probes: &[usize]) -> Vec<(AnswerVector, VertexSet)> {
    let mut parts: Vec<(AnswerVector, VertexSet)> = Vec::new();
    for v in x {
        let key: Vec<u32> = probes.iter().map(|&p| arena.dist(p, v)).collect();
        match parts.binary_search_by(|(a, _)| a.0.cmp(&key)) {
            Ok(i) => {
                parts[i].1.insert(v);
            }
            Err(i) => parts.insert(i, (AnswerVector(key), VertexSet::singleton(arena.len(), v))),
        }
    }
    parts
}

/// Closed neighbourhood of a robber set: where the robber can be after moving.
pub fn expand(arena: &Graph, r: &VertexSet) -> VertexSet {
    let mut out = arena.empty_set();
    for v in r {
        out.union_with(arena.closed_neighborhood(v));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub state: GameState,
    pub probes: ProbeSet,
    pub answers: AnswerVector,
    pub refined: VertexSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Located { round: u32, vertex: usize },
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub rounds: Vec<RoundRecord>,
    pub outcome: Outcome,
}

/// All branches of a playout; a scripted robber yields exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Playout {
    pub branches: Vec<Trace>,
}

impl Playout {
    /// `Located` with the latest round over all branches, when all of them locate.
    pub fn outcome(&self) -> Outcome {
        let mut worst: Option<(u32, usize)> = None;
        for b in &self.branches {
            match b.outcome {
                Outcome::Undecided => return Outcome::Undecided,
                Outcome::Located { round, vertex } => {
                    if worst.is_none_or(|(r, _)| round > r) {
                        worst = Some((round, vertex));
                    }
                }
            }
        }
        match worst {
            Some((round, vertex)) => Outcome::Located { round, vertex },
            None => Outcome::Undecided,
        }
    }
}

/// Plays `strategy` on `arena` for at most `max_rounds` probing rounds.
pub fn play(
    strategy: &StrategyTable,
    arena: &Graph,
    robber: &RobberModel,
    max_rounds: u32,
) -> Result<Playout, GameError> {
    let initial = GameState::initial(arena);
    if let Some(v) = initial.extended.single() {
        let located = Trace { rounds: Vec::new(), outcome: Outcome::Located { round: 0, vertex: v } };
        return Ok(Playout { branches: vec![located] });
    }
    match robber {
        RobberModel::Scripted(walk) => {
            validate_walk(arena, walk)?;
            let mut state = initial;
            let mut rounds = Vec::new();
            loop {
                if state.round >= max_rounds {
                    return Ok(Playout { branches: vec![Trace { rounds, outcome: Outcome::Undecided }] });
                }
                let probes = lookup(strategy, arena, &state.extended)?;
                let position = walk[(state.round as usize).min(walk.len() - 1)];
                let answers = probes.answers_for(arena, position);
                let refined = refine(arena, &state.extended, &probes.0, &answers.0);
                let next_round = state.round + 1;
                let next = expand(arena, &refined);
                let located = refined.single();
                rounds.push(RoundRecord { state, probes, answers, refined });
                if let Some(vertex) = located {
                    let outcome = Outcome::Located { round: next_round, vertex };
                    return Ok(Playout { branches: vec![Trace { rounds, outcome }] });
                }
                state = GameState::with_set(next, next_round);
            }
        }
        RobberModel::Adversarial => {
            let mut branches = Vec::new();
            explore(strategy, arena, initial, Vec::new(), max_rounds, &mut branches)?;
            Ok(Playout { branches })
        }
    }
}

fn explore(
    strategy: &StrategyTable,
    arena: &Graph,
    state: GameState,
    prefix: Vec<RoundRecord>,
    max_rounds: u32,
    out: &mut Vec<Trace>,
) -> Result<(), GameError> {
    if state.round >= max_rounds {
        out.push(Trace { rounds: prefix, outcome: Outcome::Undecided });
        return Ok(());
    }
    let probes = lookup(strategy, arena, &state.extended)?;
    let round = state.round + 1;
    for (answers, refined) in partition_answers(arena, &state.extended, &probes.0) {
        let mut rounds = prefix.clone();
        let next = expand(arena, &refined);
        let located = refined.single();
        rounds.push(RoundRecord { state: state.clone(), probes: probes.clone(), answers, refined });
        match located {
            Some(vertex) => out.push(Trace { rounds, outcome: Outcome::Located { round, vertex } }),
            None => explore(strategy, arena, GameState::with_set(next, round), rounds, max_rounds, out)?,
        }
    }
    Ok(())
}

fn lookup(strategy: &StrategyTable, arena: &Graph, x: &VertexSet) -> Result<ProbeSet, GameError> {
    let probes = strategy.get(x).ok_or_else(|| GameError::UndefinedStrategy(arena.canonical_string(x)))?;
    if probes.is_empty() {
        return Err(GameError::EmptyProbeSet(arena.canonical_string(x)));
    }
    Ok(probes.clone())
}

pub(crate) fn validate_walk(arena: &Graph, walk: &[usize]) -> Result<(), GameError> {
    if walk.is_empty() {
        return Err(GameError::EmptyWalk);
    }
    if walk[0] >= arena.len() {
        return Err(GameError::InvalidWalk(0));
    }
    for (i, w) in walk.windows(2).enumerate() {
        if w[1] >= arena.len() || arena.dist(w[0], w[1]) > 1 {
            return Err(GameError::InvalidWalk(i + 1));
        }
    }
    Ok(())
}
