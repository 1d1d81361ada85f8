//! Exact localizability by least fixpoint over extended robber sets.
//!
//! The solver first closes the set of reachable extended robber sets under
//! every probe choice, then labels sets in passes: a set gets label `t` in
//! pass `t` when some probe sends every non-singleton answer part to a set
//! already labelled below `t`. Labels are therefore minimal capture times.
//! A pass that labels nothing closes the fixpoint; an unlabelled root means
//! no cop strategy can win.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::game::{expand, partition_answers, ProbeSet};
use crate::graph::Graph;
use crate::set::VertexSet;
use crate::subdivision::{SubdividedGraph, SubdivisionError};
use crate::table::StrategyTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Cap on distinct extended robber sets.
    pub max_states: usize,
    /// Cap on the capture time searched for.
    pub max_rounds: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_states: 200_000, max_rounds: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Winning { capture_time: u32, strategy: StrategyTable },
    NotWinning,
    BudgetExceeded { states_explored: usize },
}

impl Verdict {
    pub fn is_winning(&self) -> bool {
        matches!(self, Verdict::Winning { .. })
    }

    pub fn capture_time(&self) -> Option<u32> {
        match self {
            Verdict::Winning { capture_time, .. } => Some(*capture_time),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("cop count must be at least 1")]
    NoCops,
    #[error("search budget exhausted after {0} robber sets")]
    BudgetExceeded(usize),
    #[error("no winning strategy with at most {0}")]
    NotFound(u32),
    #[error("arena is not localizable with {0} cop(s)")]
    NotWinning(usize),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
}

/// All k-multisets of vertices in lexicographic order.
pub fn probe_candidates(n: usize, k: usize) -> Vec<ProbeSet> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<ProbeSet>) {
        if cur.len() == k {
            out.push(ProbeSet(cur.clone()));
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(n, k, v, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// The closed game graph over extended robber sets.
struct Closure {
    states: Vec<VertexSet>,
    /// `children[s][c]` lists the non-singleton successors of state `s` under candidate `c`.
    children: Vec<Vec<Vec<u32>>>,
}

fn close(arena: &Graph, candidates: &[ProbeSet], max_states: usize) -> Result<Closure, usize> {
    let mut index: BTreeMap<VertexSet, u32> = BTreeMap::new();
    let root = arena.all_vertices();
    index.insert(root.clone(), 0);
    let mut states = vec![root];
    let mut children = Vec::new();
    let mut s = 0;
    while s < states.len() {
        let x = states[s].clone();
        let mut per_probe = Vec::with_capacity(candidates.len());
        for probes in candidates {
            let mut kids = Vec::new();
            for (_, part) in partition_answers(arena, &x, &probes.0) {
                if part.len() < 2 {
                    continue;
                }
                let child = expand(arena, &part);
                let id = match index.get(&child) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= max_states {
                            return Err(states.len());
                        }
                        let id = states.len() as u32;
                        index.insert(child.clone(), id);
                        states.push(child);
                        id
                    }
                };
                kids.push(id);
            }
            per_probe.push(kids);
        }
        children.push(per_probe);
        s += 1;
    }
    Ok(Closure { states, children })
}

/// Labels from the least fixpoint; `u32::MAX` marks unlabelled states.
fn label(closure: &Closure, max_rounds: u32) -> Result<(Vec<u32>, Vec<u32>), usize> {
    let n = closure.states.len();
    let mut labels = vec![u32::MAX; n];
    let mut best = vec![u32::MAX; n];
    let mut t = 0;
    while labels[0] == u32::MAX {
        t += 1;
        if t > max_rounds {
            return Err(n);
        }
        let mut fresh = Vec::new();
        for s in 0..n {
            if labels[s] != u32::MAX {
                continue;
            }
            let found = closure.children[s].iter().position(|kids| kids.iter().all(|&c| labels[c as usize] < t));
            if let Some(c) = found {
                fresh.push((s, c as u32));
            }
        }
        if fresh.is_empty() {
            break;
        }
        for (s, c) in fresh {
            labels[s] = t;
            best[s] = c;
        }
    }
    Ok((labels, best))
}

/// Decides whether `k` cops can locate the robber on `arena`.
pub fn decide_localizable(arena: &Graph, k: usize, budget: Budget) -> Result<Verdict, SolverError> {
    if k == 0 {
        return Err(SolverError::NoCops);
    }
    if arena.len() == 1 {
        return Ok(Verdict::Winning { capture_time: 0, strategy: StrategyTable::new() });
    }
    let candidates = probe_candidates(arena.len(), k);
    let closure = match close(arena, &candidates, budget.max_states) {
        Ok(c) => c,
        Err(states_explored) => return Ok(Verdict::BudgetExceeded { states_explored }),
    };
    let (labels, best) = match label(&closure, budget.max_rounds) {
        Ok(l) => l,
        Err(states_explored) => return Ok(Verdict::BudgetExceeded { states_explored }),
    };
    if labels[0] == u32::MAX {
        return Ok(Verdict::NotWinning);
    }

    // Materialise the table along the strategy's own play from the root.
    let mut strategy = StrategyTable::new();
    let mut stack = vec![0u32];
    while let Some(s) = stack.pop() {
        let x = &closure.states[s as usize];
        if strategy.get(x).is_some() {
            continue;
        }
        let c = best[s as usize] as usize;
        strategy.insert(x.clone(), candidates[c].clone());
        stack.extend(closure.children[s as usize][c].iter().rev());
    }
    Ok(Verdict::Winning { capture_time: labels[0], strategy })
}

/// Optimal strategy table; rejects arenas that are not winning.
pub fn extract_strategy(arena: &Graph, k: usize, budget: Budget) -> Result<StrategyTable, SolverError> {
    match decide_localizable(arena, k, budget)? {
        Verdict::Winning { strategy, .. } => Ok(strategy),
        Verdict::NotWinning => Err(SolverError::NotWinning(k)),
        Verdict::BudgetExceeded { states_explored } => Err(SolverError::BudgetExceeded(states_explored)),
    }
}

/// A heuristic strategy for arenas where no winning one exists: every
/// reachable state probes the candidate with the smallest largest part.
pub fn candidate_strategy(arena: &Graph, k: usize, max_states: usize) -> Result<StrategyTable, SolverError> {
    if k == 0 {
        return Err(SolverError::NoCops);
    }
    let mut table = StrategyTable::new();
    if arena.len() == 1 {
        return Ok(table);
    }
    let candidates = probe_candidates(arena.len(), k);
    let mut stack = vec![arena.all_vertices()];
    while let Some(x) = stack.pop() {
        if table.get(&x).is_some() {
            continue;
        }
        if table.len() >= max_states {
            return Err(SolverError::BudgetExceeded(table.len()));
        }
        let choice = candidates
            .iter()
            .min_by_key(|p| partition_answers(arena, &x, &p.0).iter().map(|(_, s)| s.len()).max())
            .expect("at least one candidate")
            .clone();
        for (_, part) in partition_answers(arena, &x, &choice.0).into_iter().rev() {
            if part.len() > 1 {
                stack.push(expand(arena, &part));
            }
        }
        table.insert(x, choice);
    }
    Ok(table)
}

/// Smallest `k <= k_max` with a winning verdict, and its capture time.
pub fn localization_number(g: &Graph, k_max: usize, budget: Budget) -> Result<(usize, u32), SolverError> {
    if g.len() == 1 {
        return Ok((1, 0));
    }
    for k in 1..=k_max {
        match decide_localizable(g, k, budget)? {
            Verdict::Winning { capture_time, .. } => return Ok((k, capture_time)),
            Verdict::NotWinning => {}
            Verdict::BudgetExceeded { states_explored } => return Err(SolverError::BudgetExceeded(states_explored)),
        }
    }
    Err(SolverError::NotFound(k_max as u32))
}

/// Smallest `m <= m_max` such that one cop locates the robber on `G^{1/m}`,
/// with the capture time measured in rounds of `G^{1/m}`.
pub fn subdivision_number(g: &Graph, m_max: u32, budget: Budget) -> Result<(u32, u32), SolverError> {
    for m in 1..=m_max {
        let sg = SubdividedGraph::new(g, m)?;
        match decide_localizable(sg.graph(), 1, budget)? {
            Verdict::Winning { capture_time, .. } => return Ok((m, capture_time)),
            Verdict::NotWinning => {}
            Verdict::BudgetExceeded { states_explored } => return Err(SolverError::BudgetExceeded(states_explored)),
        }
    }
    Err(SolverError::NotFound(m_max))
}
