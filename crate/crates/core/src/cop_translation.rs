//! Several cops on `G` replaying a one-cop strategy graph for `G^{1/eta}`.
//!
//! The one-cop game is played against a mock robber that walks a whole
//! thread per stride, so one round on `G` covers `eta` rounds on the
//! subdivision. The cops on `G` probe thread ends; from the distances of
//! the robber's previous and current positions to those ends they compute
//! what every probe of the subdivided game would have answered. When no
//! distance changed the robber may have stayed or moved, and both readings
//! are kept as separate hypotheses.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::game::{expand, partition_answers, refine, validate_walk, AnswerVector, GameError, Outcome, RobberModel};
use crate::graph::Graph;
use crate::set::VertexSet;
use crate::solver::{decide_localizable, Budget, SolverError, Verdict};
use crate::strategy_graph::{Construction, RestrictedRobberRules, StrategyGraph, StrategyGraphError};
use crate::subdivision::{SubdividedGraph, SubdivisionError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CopError {
    #[error("no stored distance for thread end {0} in round {1}")]
    MissingResult(usize, u32),
    #[error("no subdivision state survives round {0} but the robber is not located")]
    StatesExhausted(u32),
    #[error("strategy graph has stride length {graph:?}, expected {eta}")]
    NotReduced { graph: Option<u32>, eta: u32 },
    #[error("one cop cannot locate the robber on the subdivision with m = {0}")]
    NotWinning(u32),
    #[error("strategy graph for the subdivision is not finite")]
    Divergent,
    #[error(transparent)]
    Graph(#[from] StrategyGraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Distances from the robber's previous (`u`) and current (`v`) base
/// positions to the two thread ends `a`, `b` of a probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResultEntry {
    pub ua: u32,
    pub ub: u32,
    pub va: u32,
    pub vb: u32,
}

/// Where a probe of `G^{1/eta}` sits on its thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThreadGeometry {
    pub a: usize,
    pub b: usize,
    pub da: u32,
    pub db: u32,
    pub eta: u32,
}

impl ThreadGeometry {
    pub fn of(sg: &SubdividedGraph, p: usize) -> ThreadGeometry {
        let (a, b, da, db) = sg.thread_position(p);
        ThreadGeometry { a, b, da, db, eta: sg.m() }
    }
}

/// Distance from a robber `j` steps along the thread from `u` to `v` to the probe.
///
/// Routes leave the robber's thread through `u` or `v` and enter the probe's
/// thread through `a` or `b`; when both threads coincide the robber may
/// also walk straight to the probe.
pub fn deduce_round_moves(e: ResultEntry, j: u32, g: ThreadGeometry) -> u32 {
    let eta = g.eta;
    let mut best = (j + eta * e.ua + g.da)
        .min(j + eta * e.ub + g.db)
        .min(eta - j + eta * e.va + g.da)
        .min(eta - j + eta * e.vb + g.db);
    if g.a != g.b {
        if e.ua == 0 && e.vb == 0 {
            best = best.min(j.abs_diff(g.da));
        }
        if e.ub == 0 && e.va == 0 {
            best = best.min(j.abs_diff(g.db));
        }
    }
    best
}

/// Distance from a robber resting on branch vertex `u` to the probe.
pub fn deduce_round_stays(e: ResultEntry, g: ThreadGeometry) -> u32 {
    (g.eta * e.ua + g.da).min(g.eta * e.ub + g.db)
}

/// `ceil(2^(capt/eta)) * 16^eta * delta^(2 eta)`, saturating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProbeBound {
    Finite(u128),
    Saturated,
}

impl ProbeBound {
    pub fn admits(&self, probes: usize) -> bool {
        match self {
            ProbeBound::Finite(b) => (probes as u128) <= *b,
            ProbeBound::Saturated => true,
        }
    }
}

pub fn probe_count_bound(capt: u32, eta: u32, delta: u32) -> ProbeBound {
    let eta = eta.max(1);
    let Some(target) = 1u128.checked_shl(capt).filter(|_| capt < 127) else {
        return ProbeBound::Saturated;
    };
    // smallest n with n^eta >= 2^capt
    let (mut lo, mut hi) = (1u128, target.max(1));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match mid.checked_pow(eta) {
            Some(p) if p < target => lo = mid + 1,
            _ => hi = mid,
        }
    }
    let growth = 16u128.checked_pow(eta);
    let spread = (delta as u128).checked_pow(2 * eta);
    match (growth, spread) {
        (Some(a), Some(b)) => lo.checked_mul(a).and_then(|x| x.checked_mul(b)).map_or(ProbeBound::Saturated, ProbeBound::Finite),
        _ => ProbeBound::Saturated,
    }
}

/// Result of replaying one hypothesis through a stride.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrideStep {
    Reached(usize),
    Terminated(usize),
    Dead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reading {
    Moves,
    Stays,
}

/// Distances observed in two consecutive rounds, keyed by base vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct ResultStore {
    pub prev: BTreeMap<usize, u32>,
    pub cur: BTreeMap<usize, u32>,
}

impl ResultStore {
    pub fn entry(&self, a: usize, b: usize, round: u32) -> Result<ResultEntry, CopError> {
        let get = |m: &BTreeMap<usize, u32>, x: usize| m.get(&x).copied().ok_or(CopError::MissingResult(x, round));
        Ok(ResultEntry { ua: get(&self.prev, a)?, ub: get(&self.prev, b)?, va: get(&self.cur, a)?, vb: get(&self.cur, b)? })
    }

    /// Some vertex measured in both rounds changed its distance.
    pub fn diff(&self) -> bool {
        self.cur.iter().any(|(x, d)| self.prev.get(x).is_some_and(|p| p != d))
    }
}

/// The reduced strategy graph and its arena, ready to drive the cops on `G`.
#[derive(Debug, Clone)]
pub struct CopTranslation {
    sg: SubdividedGraph,
    h: StrategyGraph,
    mock_only: bool,
}

/// Cop-side memory between rounds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CopState {
    pub round: u32,
    /// Extended robber set on `G`.
    pub extended: VertexSet,
    /// Hypotheses: nodes of the strategy graph, distinct by robber set.
    pub phi: Vec<usize>,
    pub store: ResultStore,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopRound {
    pub round: u32,
    pub plan: Vec<usize>,
    pub answers: Vec<u32>,
    pub refined: VertexSet,
    pub phi_before: usize,
    pub phi_after: usize,
    pub diff: bool,
    pub terminated: usize,
    /// Every refined position is the end vertex of some surviving hypothesis.
    pub contained: bool,
    pub located: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopTrace {
    pub rounds: Vec<CopRound>,
    pub outcome: Outcome,
}

/// Checks collected over one or many plays.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Monitor {
    pub max_probes: usize,
    pub max_phi: usize,
    pub containment_failures: usize,
    /// Strides where the hypothesis count more than doubled.
    pub growth_failures: usize,
    /// Strides with a changed distance where the hypothesis count grew.
    pub diff_growth_failures: usize,
}

impl Monitor {
    fn record(&mut self, r: &CopRound) {
        self.max_probes = self.max_probes.max(r.plan.len());
        self.max_phi = self.max_phi.max(r.phi_after).max(r.phi_before);
        self.containment_failures += usize::from(!r.contained);
        if r.round > 0 {
            self.growth_failures += usize::from(r.phi_after > 2 * r.phi_before);
            self.diff_growth_failures += usize::from(r.diff && r.phi_after > r.phi_before);
        }
    }

    fn merge(&mut self, o: &Monitor) {
        self.max_probes = self.max_probes.max(o.max_probes);
        self.max_phi = self.max_phi.max(o.max_phi);
        self.containment_failures += o.containment_failures;
        self.growth_failures += o.growth_failures;
        self.diff_growth_failures += o.diff_growth_failures;
    }

    pub fn violations(&self) -> usize {
        self.containment_failures + self.growth_failures + self.diff_growth_failures
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopReport {
    /// Latest round any branch is located in; `None` if some branch is not.
    pub worst: Option<u32>,
    pub branches: usize,
    pub monitor: Monitor,
}

impl CopTranslation {
    /// Wraps a strategy graph already reduced under the restricted rules.
    pub fn new(sg: SubdividedGraph, h: StrategyGraph) -> Result<CopTranslation, CopError> {
        if h.stride_len() != Some(sg.m()) {
            return Err(CopError::NotReduced { graph: h.stride_len(), eta: sg.m() });
        }
        Ok(CopTranslation { sg, h, mock_only: false })
    }

    /// Counts a win only once every hypothesis has terminated in the
    /// subdivided game, ignoring what the probes on `G` already pin down.
    /// Exercises the deduction rules on every round of the game.
    pub fn mock_only(mut self, on: bool) -> CopTranslation {
        self.mock_only = on;
        self
    }

    /// Solves the one-cop game on `g^{1/eta}`, builds its strategy graph and
    /// reduces it. Also returns the one-cop capture time.
    pub fn prepare(g: &Graph, eta: u32, budget: Budget) -> Result<(CopTranslation, u32), CopError> {
        let sg = SubdividedGraph::new(g, eta)?;
        let (capt, strategy) = match decide_localizable(sg.graph(), 1, budget)? {
            Verdict::Winning { capture_time, strategy } => (capture_time, strategy),
            Verdict::NotWinning => return Err(CopError::NotWinning(eta)),
            Verdict::BudgetExceeded { states_explored } => {
                return Err(SolverError::BudgetExceeded(states_explored).into())
            }
        };
        let h = match StrategyGraph::build(&strategy, sg.graph(), budget.max_rounds.max(capt) + 1)? {
            Construction::Finite(h) => h,
            Construction::Divergent(_) => return Err(CopError::Divergent),
        };
        let reduced = h.reduce_restricted(&sg, &RestrictedRobberRules::new(eta))?;
        Ok((CopTranslation::new(sg, reduced)?, capt))
    }

    pub fn graph(&self) -> &StrategyGraph {
        &self.h
    }

    pub fn subdivided(&self) -> &SubdividedGraph {
        &self.sg
    }

    pub fn initial(&self) -> CopState {
        CopState { round: 0, extended: self.sg.base().all_vertices(), phi: alloc::vec![self.h.root()], store: ResultStore::default() }
    }

    /// Base vertices probed in the coming round.
    pub fn probe_plan(&self, phi: &[usize], round: u32) -> Result<Vec<usize>, CopError> {
        let levels = if round == 0 { [0, 1] } else { [round, round + 1] };
        let mut plan = BTreeSet::new();
        for &node in phi {
            for id in self.h.subtree(node, &levels)? {
                let n = self.h.node(id);
                match &n.probes {
                    Some(p) => p.0.iter().for_each(|&q| plan.extend(self.sg.corr_end(q))),
                    None => n.refined.iter().for_each(|x| plan.extend(self.sg.corr_end(x))),
                }
            }
        }
        Ok(plan.into_iter().collect())
    }

    fn answer_at(&self, node: usize, store: &ResultStore, round: u32, read: impl Fn(ResultEntry, ThreadGeometry) -> u32) -> Result<AnswerVector, CopError> {
        let probes = self.h.node(node).probes.as_ref().expect("internal node");
        let mut out = Vec::with_capacity(probes.len());
        for &q in &probes.0 {
            let geo = ThreadGeometry::of(&self.sg, q);
            out.push(read(store.entry(geo.a, geo.b, round)?, geo));
        }
        Ok(AnswerVector(out))
    }

    /// Replays one hypothesis through the `eta` rounds of a stride.
    pub fn advance(&self, node: usize, store: &ResultStore, round: u32, reading: Reading) -> Result<StrideStep, CopError> {
        let mut cur = node;
        for j in 1..=self.sg.m() {
            if self.h.node(cur).leaf {
                return Ok(StrideStep::Terminated(cur));
            }
            let answer = match reading {
                Reading::Moves => self.answer_at(cur, store, round, |e, g| deduce_round_moves(e, j, g))?,
                Reading::Stays => self.answer_at(cur, store, round, deduce_round_stays)?,
            };
            match self.h.child(cur, &answer) {
                Some(c) => cur = c,
                None => return Ok(StrideStep::Dead),
            }
        }
        if self.h.node(cur).leaf {
            return Ok(StrideStep::Terminated(cur));
        }
        Ok(StrideStep::Reached(cur))
    }

    /// Both readings when nothing changed, otherwise only the moving one.
    pub fn deduce_and_update(&self, node: usize, store: &ResultStore, round: u32) -> Result<Vec<StrideStep>, CopError> {
        let mut out = alloc::vec![self.advance(node, store, round, Reading::Moves)?];
        if !store.diff() {
            out.push(self.advance(node, store, round, Reading::Stays)?);
        }
        Ok(out)
    }

    /// One round on `G`: probe the plan, read `answers`, update hypotheses.
    pub fn step(&self, state: &CopState, plan: &[usize], answers: &[u32]) -> Result<(CopState, CopRound), CopError> {
        let g = self.sg.base();
        let refined = refine(g, &state.extended, plan, answers);
        let mut store = ResultStore { prev: state.store.cur.clone(), cur: plan.iter().copied().zip(answers.iter().copied()).collect() };
        let diff = store.diff();
        let mut next: Vec<usize> = Vec::new();
        let mut seen: BTreeSet<&VertexSet> = BTreeSet::new();
        let mut terminated = Vec::new();
        let mut push = |id: usize, next: &mut Vec<usize>| {
            if seen.insert(&self.h.node(id).state.extended) {
                next.push(id);
            }
        };

        if state.round == 0 {
            // The mock robber starts on a branch vertex and waits for the root probe.
            store.prev = store.cur.clone();
            let root = state.phi[0];
            if self.h.node(root).leaf {
                terminated.push(root);
            } else {
                let answer = self.answer_at(root, &store, 0, deduce_round_stays)?;
                match self.h.child(root, &answer) {
                    Some(c) if self.h.node(c).leaf => terminated.push(c),
                    Some(c) => push(c, &mut next),
                    None => {}
                }
            }
        } else {
            for &node in &state.phi {
                for step in self.deduce_and_update(node, &store, state.round)? {
                    match step {
                        StrideStep::Reached(c) => push(c, &mut next),
                        StrideStep::Terminated(c) => terminated.push(c),
                        StrideStep::Dead => {}
                    }
                }
            }
        }

        let mut ends = g.empty_set();
        for &id in &next {
            for x in self.h.node(id).refined.iter().filter(|&x| self.sg.is_branch(x)) {
                ends.insert(self.sg.base_of(x).expect("branch"));
            }
        }
        for &id in &terminated {
            for x in self.h.node(id).refined.iter() {
                self.sg.corr_end(x).into_iter().for_each(|v| {
                    ends.insert(v);
                });
            }
        }
        let located = if self.mock_only { next.is_empty() && !terminated.is_empty() } else { refined.len() <= 1 };
        let contained = refined.len() <= 1 && !self.mock_only || refined.is_subset(&ends);
        let rec = CopRound {
            round: state.round,
            plan: plan.to_vec(),
            answers: answers.to_vec(),
            refined: refined.clone(),
            phi_before: state.phi.len(),
            phi_after: next.len(),
            diff: diff && state.round > 0,
            terminated: terminated.len(),
            contained,
            located,
        };
        if !located && next.is_empty() && refined.len() > 1 {
            return Err(CopError::StatesExhausted(state.round));
        }
        let new_state = CopState { round: state.round + 1, extended: expand(g, &refined), phi: next, store };
        Ok((new_state, rec))
    }

    /// Plays against a scripted walk on `G`.
    pub fn play_scripted(&self, walk: &[usize], max_rounds: u32) -> Result<(CopTrace, Monitor), CopError> {
        let g = self.sg.base();
        validate_walk(g, walk)?;
        let mut state = self.initial();
        let mut rounds = Vec::new();
        let mut monitor = Monitor::default();
        if let Some(vertex) = state.extended.single() {
            return Ok((CopTrace { rounds, outcome: Outcome::Located { round: 0, vertex } }, monitor));
        }
        while state.round <= max_rounds {
            let pos = walk[(state.round as usize).min(walk.len() - 1)];
            let plan = self.probe_plan(&state.phi, state.round)?;
            let answers: Vec<u32> = plan.iter().map(|&p| g.dist(p, pos)).collect();
            let (next, rec) = self.step(&state, &plan, &answers)?;
            monitor.record(&rec);
            let located = rec.located.then_some(pos);
            let round = rec.round;
            rounds.push(rec);
            if let Some(vertex) = located {
                return Ok((CopTrace { rounds, outcome: Outcome::Located { round, vertex } }, monitor));
            }
            state = next;
        }
        Ok((CopTrace { rounds, outcome: Outcome::Undecided }, monitor))
    }

    /// Explores every answer pattern the robber can force on `G`.
    pub fn play_adversarial(&self, max_rounds: u32) -> Result<CopReport, CopError> {
        let initial = self.initial();
        if initial.extended.len() == 1 {
            return Ok(CopReport { worst: Some(0), branches: 1, monitor: Monitor::default() });
        }
        self.adversary(initial, max_rounds)
    }

    fn adversary(&self, state: CopState, max_rounds: u32) -> Result<CopReport, CopError> {
        let g = self.sg.base();
        if state.round > max_rounds {
            return Ok(CopReport { worst: None, branches: 1, monitor: Monitor::default() });
        }
        let plan = self.probe_plan(&state.phi, state.round)?;
        let mut out = CopReport { worst: Some(state.round), branches: 0, monitor: Monitor::default() };
        for (answers, _) in partition_answers(g, &state.extended, &plan) {
            let (next, rec) = self.step(&state, &plan, &answers.0)?;
            out.monitor.record(&rec);
            if rec.located {
                out.branches += 1;
                continue;
            }
            let sub = self.adversary(next, max_rounds)?;
            out.branches += sub.branches;
            out.monitor.merge(&sub.monitor);
            out.worst = match (out.worst, sub.worst) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
        }
        Ok(out)
    }
}

/// Drives the translation for a given robber model.
pub fn run_multicop_game(
    translation: &CopTranslation,
    robber: &RobberModel,
    max_rounds: u32,
) -> Result<CopOutcome, CopError> {
    match robber {
        RobberModel::Scripted(walk) => {
            let (trace, monitor) = translation.play_scripted(walk, max_rounds)?;
            Ok(CopOutcome::Scripted { trace, monitor })
        }
        RobberModel::Adversarial => Ok(CopOutcome::Adversarial(translation.play_adversarial(max_rounds)?)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CopOutcome {
    Scripted { trace: CopTrace, monitor: Monitor },
    Adversarial(CopReport),
}
