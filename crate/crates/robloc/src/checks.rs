//! Brute-force verification suites. Every expected value comes from
//! breadth-first distances on the actual subdivided graph.

use robloc_core::cop_translation::{
    deduce_round_moves, deduce_round_stays, probe_count_bound, CopError, CopTranslation, ProbeBound, ResultEntry,
    ThreadGeometry,
};
use robloc_core::solver::{candidate_strategy, SolverError};
use robloc_core::subs_translation::{deduce_distance, rounds_up, SubsGame};
use robloc_core::{
    decide_localizable, localization_number, residue_class, Budget, CopWinning, Graph, ResidueClass, StrategyGraph,
    SubdividedGraph, VertexClass, Verdict,
};
use serde::Serialize;

/// Outcome of one suite on one input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), cases: 0, failures: 0, first_failure: None, skipped: None }
    }

    pub fn skip(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check { skipped: Some(why.into()), ..Check::new(name) }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn line(&self) -> String {
        match (&self.skipped, &self.first_failure) {
            (Some(why), _) => format!("SKIP {} ({why})", self.name),
            (None, None) => format!("PASS {} ({} cases)", self.name, self.cases),
            (None, Some(f)) => format!("FAIL {} ({} of {} cases; first: {f})", self.name, self.failures, self.cases),
        }
    }
}

/// Distance scaling, thread sums, vicinity/classify agreement and residue
/// classes on `g^{1/m}`.
pub fn subdivision_invariants(g: &Graph, m: u32) -> Check {
    let mut c = Check::new(format!("subdivision invariants m={m}"));
    let sg = match SubdividedGraph::new(g, m) {
        Ok(sg) => sg,
        Err(e) => {
            c.expect(false, || e.to_string());
            return c;
        }
    };
    let s = sg.graph();
    let n = g.len();
    for u in 0..n {
        for v in 0..n {
            let (bu, bv) = (sg.branch(u), sg.branch(v));
            c.expect(s.dist(bu, bv) == m * g.dist(u, v), || format!("branch distance {}-{}", g.name(u), g.name(v)));
        }
    }
    for x in 0..s.len() {
        let (a, b, da, db) = sg.thread_position(x);
        let (ba, bb) = (sg.branch(a), sg.branch(b));
        c.expect(s.dist(x, ba) == da && s.dist(x, bb) == db, || format!("thread offsets of {}", s.name(x)));
        if !sg.is_branch(x) {
            c.expect(s.dist(x, ba) + s.dist(x, bb) == m, || format!("thread sum at {}", s.name(x)));
        }
        let class = sg.classify(x);
        c.expect((sg.vicinity(x).len() == 2) == (class == VertexClass::Midpoint), || {
            format!("vicinity of {}", s.name(x))
        });
        if m < 2 {
            continue;
        }
        let expected = match class {
            VertexClass::Branch => ResidueClass::AtBranch,
            VertexClass::Midpoint | VertexClass::NearMidpoint => ResidueClass::AtMidpointZone,
            VertexClass::InnerOther => ResidueClass::Other,
        };
        for p in 0..n {
            let d = s.dist(sg.branch(p), x);
            c.expect(residue_class(d, m).ok() == Some(expected), || {
                format!("residue of {} seen from {}", s.name(x), g.name(p))
            });
        }
    }
    c
}

/// Base distance to the nearest endpoint recovered from a subdivision reading.
pub fn deduce_oracle(g: &Graph, m: u32) -> Check {
    let mut c = Check::new(format!("distance deduction m={m}"));
    let sg = match SubdividedGraph::new(g, m) {
        Ok(sg) => sg,
        Err(e) => {
            c.expect(false, || e.to_string());
            return c;
        }
    };
    let s = sg.graph();
    for p in 0..g.len() {
        let bp = sg.branch(p);
        for x in 0..s.len() {
            if sg.classify(x) == VertexClass::Midpoint {
                continue;
            }
            let near = sg.vicinity(x)[0];
            let d = s.dist(bp, x);
            let got = deduce_distance(d, m).ok();
            c.expect(got == Some(g.dist(p, near)), || {
                format!("probe {} robber {}: {got:?} vs {}", g.name(p), s.name(x), g.dist(p, near))
            });
            if rounds_up(d, m) {
                let (a, b, _, _) = sg.thread_position(x);
                let far = if a == near { b } else { a };
                let d1 = s.dist(bp, sg.branch(near));
                let d2 = s.dist(bp, sg.branch(far));
                c.expect(d1 == d2 + m, || format!("round-up witness probe {} robber {}", g.name(p), s.name(x)));
            }
        }
    }
    c
}

/// Per-round distances of a mock robber on `g^{1/eta}` rebuilt from base
/// distances, for every probe, every directed edge and every step.
pub fn round_deduction_oracle(g: &Graph, eta: u32) -> Check {
    let mut c = Check::new(format!("per-round deduction eta={eta}"));
    let sg = match SubdividedGraph::new(g, eta) {
        Ok(sg) => sg,
        Err(e) => {
            c.expect(false, || e.to_string());
            return c;
        }
    };
    let s = sg.graph();
    for p in 0..s.len() {
        let geo = ThreadGeometry::of(&sg, p);
        for u in 0..g.len() {
            let (ua, ub) = (g.dist(u, geo.a), g.dist(u, geo.b));
            let stays = ResultEntry { ua, ub, va: ua, vb: ub };
            c.expect(deduce_round_stays(stays, geo) == s.dist(p, sg.branch(u)), || {
                format!("stays at {} probe {}", g.name(u), s.name(p))
            });
            for &v in g.neighbors(u) {
                let e = ResultEntry {
                    ua: g.dist(u, geo.a),
                    ub: g.dist(u, geo.b),
                    va: g.dist(v, geo.a),
                    vb: g.dist(v, geo.b),
                };
                for j in 1..=eta {
                    let Some(x) = sg.vertex_on(u, v, j) else {
                        c.expect(false, || format!("no vertex {j} along {}-{}", g.name(u), g.name(v)));
                        continue;
                    };
                    let got = deduce_round_moves(e, j, geo);
                    let want = s.dist(p, x);
                    c.expect(got == want, || {
                        format!("move {}->{} step {j} probe {}: {got} vs {want}", g.name(u), g.name(v), s.name(p))
                    });
                }
            }
        }
    }
    c
}

/// Solver verdict against finiteness of the strategy graph built from the
/// extracted strategy, or from the greedy candidate when no strategy wins.
pub fn equivalence(g: &Graph, k: usize, budget: Budget) -> Check {
    let mut c = Check::new(format!("verdict vs strategy graph k={k}"));
    let depth = budget.max_rounds.saturating_add(1);
    let (winning, table) = match decide_localizable(g, k, budget) {
        Ok(Verdict::Winning { strategy, .. }) => (true, strategy),
        Ok(Verdict::NotWinning) => match candidate_strategy(g, k, budget.max_states) {
            Ok(t) => (false, t),
            Err(e) => return Check::skip(c.name, e.to_string()),
        },
        Ok(Verdict::BudgetExceeded { states_explored }) => {
            return Check::skip(c.name, format!("budget exceeded after {states_explored} states"))
        }
        Err(e) => return Check::skip(c.name, e.to_string()),
    };
    match StrategyGraph::build(&table, g, depth) {
        Ok(h) => {
            let got = h.is_cop_winning();
            let want = if winning { CopWinning::Yes } else { CopWinning::No };
            c.expect(got == want, || format!("solver says {winning}, strategy graph says {got:?}"));
        }
        Err(e) => c.expect(false, || e.to_string()),
    }
    c
}

/// Cop strategy on `g` translated to `g^{1/2k}`: every walk of at most `6m`
/// moves is located and every strategic block is contained.
pub fn subdivision_translation(g: &Graph, max_cops: usize, tail: u32, budget: Budget) -> Check {
    let name = "cop-to-subdivision translation";
    let (k, _) = match localization_number(g, max_cops, budget) {
        Ok(z) => z,
        Err(SolverError::NotFound(_)) => return Check::skip(name, format!("more than {max_cops} cops needed")),
        Err(e) => return Check::skip(name, e.to_string()),
    };
    let m = 2 * k as u32;
    let mut c = Check::new(format!("{name} k={k} m={m}"));
    let table = match decide_localizable(g, k, budget) {
        Ok(Verdict::Winning { strategy, .. }) => strategy,
        other => return Check::skip(c.name, format!("{other:?}")),
    };
    let game = match SubsGame::new(&table, g, m) {
        Ok(game) => game,
        Err(e) => {
            c.expect(false, || e.to_string());
            return c;
        }
    };
    match game.check_walks(6 * m, tail) {
        Ok(r) => {
            c.cases = r.walks.min(u64::MAX as u128) as u64;
            c.failures = (r.undecided + r.violations as u128).min(u64::MAX as u128) as u64;
            if c.failures > 0 {
                c.first_failure = Some(format!("{} undecided walks, {} containment violations", r.undecided, r.violations));
            }
        }
        Err(e) => c.expect(false, || e.to_string()),
    }
    c
}

/// Measurements from one run of the subdivision-to-cop translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CopRun {
    pub eta: u32,
    pub capture_time: u32,
    pub stride_limit: u32,
    pub worst_stride: Option<u32>,
    pub branches: usize,
    pub max_probes: usize,
    pub probe_bound: Option<u128>,
    pub max_hypotheses: usize,
    pub containment_failures: usize,
    pub growth_failures: usize,
    pub diff_growth_failures: usize,
}

impl CopRun {
    pub fn located_in_time(&self) -> bool {
        self.worst_stride.is_some_and(|w| w <= self.stride_limit)
    }

    pub fn within_bound(&self) -> bool {
        self.probe_bound.is_none_or(|b| self.max_probes as u128 <= b)
    }

    pub fn monitor_clean(&self) -> bool {
        self.within_bound() && self.growth_failures == 0 && self.diff_growth_failures == 0
    }
}

pub fn max_degree(g: &Graph) -> u32 {
    (0..g.len()).map(|v| g.neighbors(v).len() as u32).max().unwrap_or(0)
}

/// Runs the translation adversarially; `mock_only` switches located
/// detection to the hypotheses alone.
pub fn cop_run(g: &Graph, eta: u32, budget: Budget, max_rounds: u32, mock_only: bool) -> Result<CopRun, CopError> {
    let (t, capt) = CopTranslation::prepare(g, eta, budget)?;
    let t = t.mock_only(mock_only);
    let report = t.play_adversarial(max_rounds)?;
    let probe_bound = match probe_count_bound(capt, eta, max_degree(g)) {
        ProbeBound::Finite(b) => Some(b),
        ProbeBound::Saturated => None,
    };
    Ok(CopRun {
        eta,
        capture_time: capt,
        stride_limit: capt.div_ceil(eta) + 1,
        worst_stride: report.worst,
        branches: report.branches,
        max_probes: report.monitor.max_probes,
        probe_bound,
        max_hypotheses: report.monitor.max_phi,
        containment_failures: report.monitor.containment_failures,
        growth_failures: report.monitor.growth_failures,
        diff_growth_failures: report.monitor.diff_growth_failures,
    })
}

/// Location and monitor checks for both detection modes at the given `eta`.
pub fn cop_translation(g: &Graph, eta: u32, budget: Budget, max_rounds: u32) -> Vec<Check> {
    let mut located = Check::new(format!("subdivision-to-cop location eta={eta}"));
    let mut monitor = Check::new(format!("probe and hypothesis monitor eta={eta}"));
    for mock in [false, true] {
        match cop_run(g, eta, budget, max_rounds, mock) {
            Ok(r) => {
                located.expect(r.located_in_time() && r.containment_failures == 0, || {
                    format!("mock={mock}: worst stride {:?}, limit {}", r.worst_stride, r.stride_limit)
                });
                monitor.expect(r.monitor_clean(), || {
                    format!(
                        "mock={mock}: probes {} bound {:?}, growth {}, diff growth {}",
                        r.max_probes, r.probe_bound, r.growth_failures, r.diff_growth_failures
                    )
                });
            }
            Err(e) => {
                located.expect(false, || e.to_string());
                monitor.expect(false, || e.to_string());
            }
        }
    }
    vec![located, monitor]
}

#[cfg(test)]
mod tests {
    use super::*;
    use robloc_core::corpus;

    #[test]
    fn oracles_pass_on_small_graphs() {
        for g in [corpus::figure_graph(), corpus::complete(3), corpus::cycle(4)] {
            for m in 1..=4 {
                assert!(subdivision_invariants(&g, m).passed());
                assert!(round_deduction_oracle(&g, m).passed());
            }
            for m in 2..=4 {
                let c = deduce_oracle(&g, m);
                assert!(c.passed() && c.cases > 0, "{}", c.line());
            }
        }
    }

    #[test]
    fn check_lines() {
        let mut c = Check::new("x");
        c.expect(true, String::new);
        assert_eq!(c.line(), "PASS x (1 cases)");
        c.expect(false, || "boom".into());
        assert_eq!(c.line(), "FAIL x (1 of 2 cases; first: boom)");
        assert_eq!(Check::skip("y", "too big").line(), "SKIP y (too big)");
    }

    #[test]
    fn figure_translation_runs_clean() {
        let g = corpus::figure_graph();
        let r = cop_run(&g, 1, Budget::default(), 16, false).unwrap();
        assert!(r.located_in_time() && r.monitor_clean(), "{r:?}");
        assert!(subdivision_translation(&g, 2, 64, Budget::default()).passed());
    }
}
