//! One cop on `G^{1/m}` playing a `k`-cop strategy for `G`.
//!
//! The cop probes branch vertices only. A probe answer's residue modulo `m`
//! tells whether the robber sits on a branch vertex, in the midpoint zone of
//! a thread, or strictly nearer one endpoint. Between two visits to the
//! midpoint zone the robber's nearest branch vertex is fixed; that vertex is
//! the position of a mirrored robber in the `k`-cop game, and rounded probe
//! answers are fed to the `k`-cop strategy as its own answers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::game::{expand, partition_answers, refine, validate_walk, GameError, GameState, Outcome, RobberModel, Stage};
use crate::graph::Graph;
use crate::set::VertexSet;
use crate::subdivision::{residue_class, ResidueClass, SubdividedGraph, SubdivisionError};
use crate::table::StrategyTable;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubsError {
    #[error("answer {d} is equidistant from both thread ends for m = {m}")]
    MidpointTie { d: u32, m: u32 },
    #[error("m = {m} is below twice the cop count ({cops})")]
    SubdivisionTooCoarse { m: u32, cops: usize },
    #[error("the cop strategy does not win from the full vertex set")]
    NotWinning,
    #[error("block probing needs stage 2, tracker is in {0:?}")]
    WrongStage(Stage),
    #[error("block restarted more than {0} times")]
    RestartBound(u32),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Base-graph distance read off a branch-probe answer: `d / m` rounded.
///
/// Equals the distance from the probe's base vertex to the robber's nearest
/// thread end whenever that end is unique.
pub fn deduce_distance(d: u32, m: u32) -> Result<u32, SubsError> {
    if m == 0 {
        return Err(SubdivisionError::ZeroParameter(0).into());
    }
    let r = d % m;
    if 2 * r == m {
        return Err(SubsError::MidpointTie { d, m });
    }
    Ok(if 2 * r > m { d / m + 1 } else { d / m })
}

/// True when rounding went up, i.e. the shortest path leaves through the far end.
pub fn rounds_up(d: u32, m: u32) -> bool {
    2 * (d % m) > m
}

/// One block of cop probes being replayed on branch vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockProgress {
    /// Base-graph vertices, in the order the cop strategy lists them.
    pub probes: Vec<usize>,
    pub pos: usize,
    pub deduced: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockStep {
    Pending,
    Complete(Vec<u32>),
    Restart,
}

impl BlockProgress {
    pub fn new(probes: Vec<usize>) -> Self {
        BlockProgress { probes, pos: 0, deduced: Vec::new() }
    }

    pub fn current(&self) -> Option<usize> {
        self.probes.get(self.pos).copied()
    }

    pub fn is_complete(&self) -> bool {
        self.pos >= self.probes.len()
    }

    fn restart(&mut self) {
        self.pos = 0;
        self.deduced.clear();
    }

    /// Records the answer to the current probe.
    pub fn observe(&mut self, d: u32, m: u32) -> Result<BlockStep, SubsError> {
        if residue_class(d, m)? == ResidueClass::AtMidpointZone {
            self.restart();
            return Ok(BlockStep::Restart);
        }
        self.deduced.push(deduce_distance(d, m)?);
        self.pos += 1;
        if self.is_complete() {
            Ok(BlockStep::Complete(self.deduced.clone()))
        } else {
            Ok(BlockStep::Pending)
        }
    }
}

/// Cop-side state of the subdivision game.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StrideTracker {
    pub stride: u32,
    pub stage: Stage,
    /// Mirrored `k`-cop game state; `extended` is its extended robber set.
    pub cop_state: GameState,
    pub block: BlockProgress,
    /// Robber set of the mirrored game, narrowed during the current window.
    pub run: Option<VertexSet>,
    /// Extended robber set of the subdivision game itself.
    pub subs_set: VertexSet,
    sweep: usize,
    zone_run: u32,
}

impl StrideTracker {
    /// Pending cop probes for this stride.
    pub fn pending(&self) -> &[usize] {
        &self.block.probes[self.block.pos.min(self.block.probes.len())..]
    }
}

/// Everything fixed for a run: arena, cop strategy and its depths, sweep order.
#[derive(Debug, Clone)]
pub struct SubsGame {
    sg: SubdividedGraph,
    table: StrategyTable,
    depths: BTreeMap<VertexSet, u32>,
    sweep: Vec<usize>,
}

/// What one round looked like from both games.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsRound {
    pub round: u32,
    pub stage: Stage,
    pub stride: u32,
    pub probe: usize,
    pub answer: u32,
    pub residue: ResidueClass,
    /// Subdivision robber set after the probe.
    pub refined: VertexSet,
    /// Mirrored robber set after the probe, in the base graph.
    pub cop_set: Option<VertexSet>,
    /// Whether every refined position has a nearest branch vertex in `cop_set`.
    pub contained: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsTrace {
    pub rounds: Vec<SubsRound>,
    pub outcome: Outcome,
}

impl SubsTrace {
    pub fn violations(&self) -> usize {
        self.rounds.iter().filter(|r| r.contained == Some(false)).count()
    }
}

impl SubsGame {
    /// Prepares `a_cop` for play on `g^{1/m}`; requires `m >= 2k`.
    pub fn new(a_cop: &StrategyTable, g: &Graph, m: u32) -> Result<SubsGame, SubsError> {
        let cops = a_cop.cops().max(1);
        if (m as usize) < 2 * cops {
            return Err(SubsError::SubdivisionTooCoarse { m, cops });
        }
        let sg = SubdividedGraph::new(g, m)?;
        let depths = a_cop.depths(g);
        if g.len() > 1 && !depths.contains_key(&g.all_vertices()) {
            return Err(SubsError::NotWinning);
        }
        Ok(SubsGame { sweep: sweep_order(g), sg, table: a_cop.clone(), depths })
    }

    pub fn subdivided(&self) -> &SubdividedGraph {
        &self.sg
    }

    pub fn tracker(&self) -> StrideTracker {
        let g = self.sg.base();
        let all = g.all_vertices();
        StrideTracker {
            stride: 0,
            stage: Stage::Stage1,
            block: BlockProgress::new(self.block_for(&all)),
            cop_state: GameState::with_set(all, 0),
            run: None,
            subs_set: self.sg.graph().all_vertices(),
            sweep: 0,
            zone_run: 0,
        }
    }

    fn block_for(&self, x: &VertexSet) -> Vec<usize> {
        match self.table.covering(x, &self.depths) {
            Some((_, p)) => p.0.clone(),
            None => Vec::new(),
        }
    }

    fn sweep_turn(&self, t: &StrideTracker) -> bool {
        t.stage != Stage::Stage2 || (t.zone_run > 0 && t.zone_run.is_multiple_of(2)) || t.block.current().is_none()
    }

    /// Branch vertex probed next.
    pub fn next_probe(&self, t: &StrideTracker) -> usize {
        match (self.sweep_turn(t), t.block.current()) {
            (false, Some(p)) => self.sg.branch(p),
            _ => self.sg.branch(self.sweep[t.sweep % self.sweep.len()]),
        }
    }

    /// Applies the answer `d` to probe `p`; returns the round record without
    /// the round number. The robber has not moved yet.
    pub fn observe(&self, t: &mut StrideTracker, p: usize, d: u32) -> Result<SubsRound, SubsError> {
        let g = self.sg.base();
        let m = self.sg.m();
        let block_turn = !self.sweep_turn(t) && t.block.current().map(|b| self.sg.branch(b)) == Some(p);
        if !block_turn {
            t.sweep += 1;
        }
        let refined = refine(self.sg.graph(), &t.subs_set, &[p], &[d]);
        let residue = residue_class(d, m)?;
        let mut contained = None;

        if t.stage == Stage::Stage1 && residue == ResidueClass::AtBranch {
            t.stage = Stage::Stage2;
            t.cop_state = GameState::with_set(g.all_vertices(), 0);
            t.run = None;
            t.block = BlockProgress::new(self.block_for(&g.all_vertices()));
            t.zone_run = 0;
        }

        if t.stage == Stage::Stage2 {
            let base_p = self.sg.base_of(p).expect("branch probe");
            if residue == ResidueClass::AtMidpointZone {
                if t.run.is_some() {
                    self.commit(t);
                }
                t.zone_run += 1;
                t.block.restart();
            } else {
                t.zone_run = 0;
                let dd = deduce_distance(d, m)?;
                let from = t.run.take().unwrap_or_else(|| t.cop_state.extended.clone());
                let mut run = refine(g, &from, &[base_p], &[dd]);
                if block_turn {
                    t.block.deduced.push(dd);
                    t.block.pos += 1;
                }
                let ok = refined.iter().all(|x| self.sg.vicinity(x).iter().any(|&b| run.contains(b)));
                contained = Some(ok && !run.is_empty());
                if run.is_empty() {
                    run = g.all_vertices();
                }
                let single = run.len() == 1;
                t.run = Some(run);
                if single {
                    t.stage = Stage::Stage3;
                } else if t.block.is_complete() {
                    self.commit(t);
                }
            }
        }

        let cop_set = match t.stage {
            Stage::Stage1 => None,
            _ => Some(t.run.clone().unwrap_or_else(|| t.cop_state.extended.clone())),
        };
        let round = SubsRound {
            round: 0,
            stage: t.stage,
            stride: t.stride,
            probe: p,
            answer: d,
            residue,
            refined: refined.clone(),
            cop_set,
            contained,
        };
        t.subs_set = refined;
        Ok(round)
    }

    fn commit(&self, t: &mut StrideTracker) {
        let g = self.sg.base();
        if let Some(run) = t.run.take() {
            let x = expand(g, &run);
            t.stride += 1;
            t.block = BlockProgress::new(self.block_for(&x));
            t.cop_state = GameState::with_set(x, t.stride);
        }
    }

    /// The robber's move: the extended set grows to its closed neighbourhood.
    pub fn robber_moves(&self, t: &mut StrideTracker) {
        t.subs_set = expand(self.sg.graph(), &t.subs_set);
    }

    /// Plays against a scripted robber walk on `G^{1/m}`.
    pub fn play_scripted(&self, walk: &[usize], max_rounds: u32) -> Result<SubsTrace, SubsError> {
        let arena = self.sg.graph();
        validate_walk(arena, walk)?;
        let mut t = self.tracker();
        let mut rounds = Vec::new();
        if let Some(v) = t.subs_set.single() {
            return Ok(SubsTrace { rounds, outcome: Outcome::Located { round: 0, vertex: v } });
        }
        for round in 1..=max_rounds {
            let pos = walk[(round as usize - 1).min(walk.len() - 1)];
            let p = self.next_probe(&t);
            let mut rec = self.observe(&mut t, p, arena.dist(p, pos))?;
            rec.round = round;
            let located = rec.refined.single();
            rounds.push(rec);
            if let Some(vertex) = located {
                return Ok(SubsTrace { rounds, outcome: Outcome::Located { round, vertex } });
            }
            self.robber_moves(&mut t);
        }
        Ok(SubsTrace { rounds, outcome: Outcome::Undecided })
    }

    /// Explores every answer the robber can force, up to `max_rounds`.
    ///
    /// Returns the worst location round, or `None` when some branch is
    /// still undecided at the horizon.
    pub fn play_adversarial(&self, max_rounds: u32) -> Result<AdversarialReport, SubsError> {
        let t = self.tracker();
        if t.subs_set.len() == 1 {
            return Ok(AdversarialReport { worst: Some(0), branches: 1, violations: 0 });
        }
        let mut memo = BTreeMap::new();
        self.adversary(&t, max_rounds, &mut memo)
    }

    fn adversary(
        &self,
        t: &StrideTracker,
        left: u32,
        memo: &mut BTreeMap<(StrideTracker, u32), AdversarialReport>,
    ) -> Result<AdversarialReport, SubsError> {
        if left == 0 {
            return Ok(AdversarialReport { worst: None, branches: 1, violations: 0 });
        }
        if let Some(r) = memo.get(&(t.clone(), left)) {
            return Ok(r.clone());
        }
        let arena = self.sg.graph();
        let p = self.next_probe(t);
        let mut out = AdversarialReport { worst: Some(0), branches: 0, violations: 0 };
        for (answer, _) in partition_answers(arena, &t.subs_set, &[p]) {
            let mut next = t.clone();
            let rec = self.observe(&mut next, p, answer.0[0])?;
            out.violations += usize::from(rec.contained == Some(false));
            if rec.refined.len() == 1 {
                out.branches += 1;
                out.worst = out.worst.map(|w| w.max(1));
                continue;
            }
            self.robber_moves(&mut next);
            let sub = self.adversary(&next, left - 1, memo)?;
            out.branches = out.branches.saturating_add(sub.branches);
            out.violations += sub.violations;
            out.worst = match (out.worst, sub.worst) {
                (Some(a), Some(b)) => Some(a.max(b + 1)),
                _ => None,
            };
        }
        memo.insert((t.clone(), left), out.clone());
        Ok(out)
    }

    /// Runs every robber walk of `steps` moves from every start vertex; after
    /// the walk the robber stands still for up to `tail` more rounds.
    pub fn check_walks(&self, steps: u32, tail: u32) -> Result<WalkReport, SubsError> {
        let arena = self.sg.graph();
        let mut memo = BTreeMap::new();
        let mut report = WalkReport::default();
        let t = self.tracker();
        for start in 0..arena.len() {
            if t.subs_set.len() == 1 {
                report.walks = report.walks.saturating_add(1);
                continue;
            }
            let r = self.walk(&t, start, steps, tail, &mut memo)?;
            report.merge(&r, 0);
        }
        Ok(report)
    }

    fn walk(
        &self,
        t: &StrideTracker,
        pos: usize,
        steps: u32,
        tail: u32,
        memo: &mut BTreeMap<(StrideTracker, usize, u32), WalkReport>,
    ) -> Result<WalkReport, SubsError> {
        let key = (t.clone(), pos, steps);
        if let Some(r) = memo.get(&key) {
            return Ok(r.clone());
        }
        let arena = self.sg.graph();
        let mut next = t.clone();
        let p = self.next_probe(&next);
        let rec = self.observe(&mut next, p, arena.dist(p, pos))?;
        let mut out = WalkReport { violations: usize::from(rec.contained == Some(false)), ..WalkReport::default() };
        if rec.refined.len() == 1 {
            out.walks = 1;
            out.worst_round = 1;
        } else if steps == 0 {
            let r = self.stand_still(next, pos, tail)?;
            out.merge(&r, 1);
        } else {
            self.robber_moves(&mut next);
            let moves = core::iter::once(pos).chain(arena.neighbors(pos).iter().copied());
            for q in moves.collect::<Vec<_>>() {
                let r = self.walk(&next, q, steps - 1, tail, memo)?;
                out.merge(&r, 1);
            }
        }
        memo.insert(key, out.clone());
        Ok(out)
    }

    fn stand_still(&self, mut t: StrideTracker, pos: usize, tail: u32) -> Result<WalkReport, SubsError> {
        let arena = self.sg.graph();
        let mut out = WalkReport { walks: 1, ..WalkReport::default() };
        for r in 1..=tail {
            self.robber_moves(&mut t);
            let p = self.next_probe(&t);
            let rec = self.observe(&mut t, p, arena.dist(p, pos))?;
            out.violations += usize::from(rec.contained == Some(false));
            if rec.refined.len() == 1 {
                out.worst_round = r;
                return Ok(out);
            }
        }
        out.undecided = 1;
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversarialReport {
    pub worst: Option<u32>,
    pub branches: usize,
    pub violations: usize,
}

/// Aggregate over a family of robber walks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WalkReport {
    /// Distinct walks, counted up to the round each one is located.
    pub walks: u128,
    pub worst_round: u32,
    pub undecided: u128,
    pub violations: usize,
}

impl WalkReport {
    fn merge(&mut self, other: &WalkReport, shift: u32) {
        self.walks = self.walks.saturating_add(other.walks);
        self.undecided = self.undecided.saturating_add(other.undecided);
        self.violations += other.violations;
        self.worst_round = self.worst_round.max(other.worst_round + shift);
    }
}

/// Branch vertices in thread order: both ends of each base edge, edges
/// ordered by endpoint names.
pub fn sweep_order(g: &Graph) -> Vec<usize> {
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| if g.name(u) <= g.name(v) { (u, v) } else { (v, u) })
        .collect();
    edges.sort_by(|a, b| (g.name(a.0), g.name(a.1)).cmp(&(g.name(b.0), g.name(b.1))));
    let mut out: Vec<usize> = edges.into_iter().flat_map(|(u, v)| [u, v]).collect();
    if out.is_empty() {
        out.push(0);
    }
    out
}

/// Replays the pending block through `exec`, which probes a branch vertex
/// of the subdivided arena and returns the answer.
///
/// A midpoint-zone answer aborts the block; the caller decides when to
/// start it again.
pub fn strategic_probe(
    tracker: &mut StrideTracker,
    sg: &SubdividedGraph,
    mut exec: impl FnMut(usize) -> u32,
) -> Result<Option<Vec<u32>>, SubsError> {
    if tracker.stage != Stage::Stage2 {
        return Err(SubsError::WrongStage(tracker.stage));
    }
    while let Some(p) = tracker.block.current() {
        let d = exec(sg.branch(p));
        match tracker.block.observe(d, sg.m())? {
            BlockStep::Pending => {}
            BlockStep::Complete(deduced) => return Ok(Some(deduced)),
            BlockStep::Restart => return Ok(None),
        }
    }
    Ok(Some(tracker.block.deduced.clone()))
}

/// [`strategic_probe`] repeated until a block completes, at most `bound` times.
pub fn strategic_probe_bounded(
    tracker: &mut StrideTracker,
    sg: &SubdividedGraph,
    mut exec: impl FnMut(usize) -> u32,
    bound: u32,
) -> Result<Vec<u32>, SubsError> {
    for _ in 0..=bound {
        if let Some(d) = strategic_probe(tracker, sg, &mut exec)? {
            return Ok(d);
        }
    }
    Err(SubsError::RestartBound(bound))
}

/// Plays `a_cop` translated to `g^{1/m}`; a scripted walk lives on `g^{1/m}`.
pub fn run_subdivision_game(
    a_cop: &StrategyTable,
    g: &Graph,
    m: u32,
    robber: &RobberModel,
    max_rounds: u32,
) -> Result<SubsOutcome, SubsError> {
    let game = SubsGame::new(a_cop, g, m)?;
    match robber {
        RobberModel::Scripted(walk) => Ok(SubsOutcome::Scripted(game.play_scripted(walk, max_rounds)?)),
        RobberModel::Adversarial => Ok(SubsOutcome::Adversarial(game.play_adversarial(max_rounds)?)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsOutcome {
    Scripted(SubsTrace),
    Adversarial(AdversarialReport),
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::corpus;
    use crate::solver::{extract_strategy, Budget};

    #[test]
    fn deduce_examples() {
        let g = corpus::figure_graph();
        let sg = SubdividedGraph::new(&g, 3).unwrap();
        let v = |s| g.vertex(s).unwrap();
        let c = sg.branch(v("C"));
        let near_a = sg.vertex_on(v("A"), v("B"), 1).unwrap();
        let near_b = sg.vertex_on(v("B"), v("A"), 1).unwrap();
        assert_eq!(sg.graph().dist(c, near_a), 4);
        assert_eq!(deduce_distance(4, 3), Ok(1));
        assert_eq!(sg.graph().dist(c, near_b), 5);
        assert_eq!(deduce_distance(5, 3), Ok(2));
        assert!(rounds_up(5, 3));
        assert_eq!(deduce_distance(0, 4), Ok(0));
        assert_eq!(deduce_distance(6, 4), Err(SubsError::MidpointTie { d: 6, m: 4 }));
    }

    #[test]
    fn block_restarts_on_midpoint() {
        let mut b = BlockProgress::new(vec![0, 1]);
        assert_eq!(b.observe(4, 2), Ok(BlockStep::Pending));
        assert_eq!(b.observe(3, 2), Ok(BlockStep::Restart));
        assert_eq!(b.pos, 0);
        assert_eq!(b.observe(2, 2), Ok(BlockStep::Pending));
        assert_eq!(b.observe(0, 2), Ok(BlockStep::Complete(vec![1, 0])));
    }

    #[test]
    fn coarse_subdivision_is_rejected() {
        let g = corpus::complete(3);
        let t = extract_strategy(&g, 2, Budget::default()).unwrap();
        assert_eq!(SubsGame::new(&t, &g, 3).unwrap_err(), SubsError::SubdivisionTooCoarse { m: 3, cops: 2 });
        assert!(SubsGame::new(&t, &g, 4).is_ok());
    }

    #[test]
    fn robber_on_one_thread_is_located_in_stage_one() {
        let g = corpus::figure_graph();
        let t = extract_strategy(&g, 1, Budget::default()).unwrap();
        let game = SubsGame::new(&t, &g, 2).unwrap();
        let sg = game.subdivided();
        let mid = sg.vertex_on(g.vertex("A").unwrap(), g.vertex("B").unwrap(), 1).unwrap();
        let trace = game.play_scripted(&[mid], 50).unwrap();
        assert!(matches!(trace.outcome, Outcome::Located { vertex, .. } if vertex == mid));
        assert!(trace.rounds.iter().all(|r| r.stage == Stage::Stage1));
    }

    #[test]
    fn walking_robber_is_located() {
        let g = corpus::figure_graph();
        let t = extract_strategy(&g, 1, Budget::default()).unwrap();
        let game = SubsGame::new(&t, &g, 2).unwrap();
        let sg = game.subdivided();
        let v = |s| g.vertex(s).unwrap();
        let ab = sg.vertex_on(v("A"), v("B"), 1).unwrap();
        let bd = sg.vertex_on(v("B"), v("D"), 1).unwrap();
        let walk = vec![v("A"), ab, v("B"), bd, v("D")];
        let trace = game.play_scripted(&walk, 100).unwrap();
        let Outcome::Located { round, vertex } = trace.outcome else { panic!("undecided") };
        assert_eq!(vertex, walk[(round as usize - 1).min(walk.len() - 1)]);
        assert_eq!(trace.violations(), 0);
    }

    #[test]
    fn strategic_probe_reports_restarts() {
        let g = corpus::figure_graph();
        let t = extract_strategy(&g, 1, Budget::default()).unwrap();
        let game = SubsGame::new(&t, &g, 2).unwrap();
        let sg = game.subdivided().clone();
        let mut tr = game.tracker();
        assert_eq!(strategic_probe(&mut tr, &sg, |_| 0), Err(SubsError::WrongStage(Stage::Stage1)));
        tr.stage = Stage::Stage2;
        assert_eq!(strategic_probe(&mut tr, &sg, |_| 3), Ok(None));
        assert_eq!(strategic_probe(&mut tr, &sg, |_| 4), Ok(Some(vec![2])));
        let mut answers = [1u32, 1, 2].into_iter();
        tr.block.restart();
        assert_eq!(strategic_probe_bounded(&mut tr, &sg, |_| answers.next().unwrap(), 2), Ok(vec![1]));
    }

    #[test]
    fn figure_graph_walks_have_no_violations() {
        let g = corpus::figure_graph();
        let t = extract_strategy(&g, 1, Budget::default()).unwrap();
        let game = SubsGame::new(&t, &g, 2).unwrap();
        let r = game.check_walks(12, 200).unwrap();
        assert_eq!(r.undecided, 0);
        assert_eq!(r.violations, 0);
        assert!(r.walks > 0);
    }
}
