//! The reduced strategy graph against every robber walk the restricted
//! rules admit, and against the graph it was reduced from.

use robloc_core::strategy_graph::stride_level;
use robloc_core::{
    corpus, decide_localizable, partition_answers, Budget, Construction, Graph, RestrictedRobberRules, StrategyGraph,
    SubdividedGraph, Verdict,
};

fn reduced(g: &Graph, eta: u32) -> Option<(SubdividedGraph, StrategyGraph, StrategyGraph)> {
    let sg = SubdividedGraph::new(g, eta).unwrap();
    let Verdict::Winning { strategy, capture_time } = decide_localizable(sg.graph(), 1, Budget::default()).unwrap()
    else {
        return None;
    };
    let h = match StrategyGraph::build(&strategy, sg.graph(), capture_time + 1).unwrap() {
        Construction::Finite(h) => h,
        other => panic!("winning strategy diverged: {other:?}"),
    };
    let r = h.reduce_restricted(&sg, &RestrictedRobberRules::new(eta)).unwrap();
    Some((sg, h, r))
}

/// Position at round `round` of a robber whose branch visits are `stops`.
fn position(sg: &SubdividedGraph, stops: &[usize], round: u32) -> usize {
    let eta = sg.m();
    if round <= 1 {
        return sg.branch(stops[0]);
    }
    let level = stride_level(round, eta) as usize;
    let j = (round - 1) - (level as u32 - 1) * eta;
    let (from, to) = (stops[level - 1], stops[level]);
    if from == to {
        sg.branch(from)
    } else {
        sg.vertex_on(from, to, j).unwrap()
    }
}

struct Walker<'a> {
    sg: &'a SubdividedGraph,
    h: &'a StrategyGraph,
    walks: usize,
}

impl Walker<'_> {
    fn follow(&mut self, node: usize, stops: &mut Vec<usize>) {
        let n = self.h.node(node);
        let round = n.depth + 1;
        if stride_level(round, self.sg.m()) as usize >= stops.len() {
            let last = *stops.last().unwrap();
            let base = self.sg.base();
            let next: Vec<usize> = std::iter::once(last).chain(base.neighbors(last).iter().copied()).collect();
            for v in next {
                stops.push(v);
                self.follow(node, stops);
                stops.pop();
            }
            return;
        }
        let pos = position(self.sg, stops, round);
        assert!(n.state.extended.contains(pos), "round {round}: robber outside the probed set");
        let probes = n.probes.as_ref().expect("inner node has probes");
        let answer = probes.answers_for(self.sg.graph(), pos);
        let child = self.h.child(node, &answer).expect("admissible walk lost by pruning");
        let c = self.h.node(child);
        assert!(c.refined.contains(pos));
        if c.leaf {
            assert_eq!(c.refined.single(), Some(pos));
            self.walks += 1;
        } else {
            self.follow(child, stops);
        }
    }
}

#[test]
fn pruning_keeps_every_admissible_walk() {
    let mut checked = 0;
    for g in corpus::connected_graphs(4).iter().chain([corpus::figure_graph(), corpus::cycle(5)].iter()) {
        for eta in 1..=3 {
            let Some((sg, _, r)) = reduced(g, eta) else { continue };
            if r.node(r.root()).leaf {
                continue;
            }
            let mut w = Walker { sg: &sg, h: &r, walks: 0 };
            for start in 0..g.len() {
                w.follow(r.root(), &mut vec![start]);
            }
            assert!(w.walks >= g.len());
            checked += 1;
        }
    }
    assert!(checked > 10, "only {checked} arenas");
}

#[test]
fn reduction_never_enlarges_a_node() {
    for g in corpus::connected_graphs(4) {
        for eta in 1..=3 {
            let Some((_, h, r)) = reduced(&g, eta) else { continue };
            // pair each reduced node with the original node reached by the same answers
            let mut stack = vec![(r.root(), h.root())];
            while let Some((rn, hn)) = stack.pop() {
                let (a, b) = (r.node(rn), h.node(hn));
                assert!(a.refined.is_subset(&b.refined));
                assert!(a.state.extended.is_subset(&b.state.extended));
                assert!(a.leaf || a.probes == b.probes);
                for (answer, c) in &a.children {
                    stack.push((*c, h.child(hn, answer).expect("reduced edge exists in the original")));
                }
            }
        }
    }
}

#[test]
fn edges_are_exactly_the_answer_partition() {
    for g in corpus::connected_graphs(5) {
        let Verdict::Winning { strategy, capture_time } = decide_localizable(&g, 2, Budget::default()).unwrap() else {
            continue;
        };
        let h = StrategyGraph::build(&strategy, &g, capture_time + 1).unwrap().graph().unwrap().clone();
        assert_eq!(h.capture_time(), capture_time);
        for n in h.nodes().iter().filter(|n| !n.leaf) {
            let parts = partition_answers(&g, &n.state.extended, &n.probes.as_ref().unwrap().0);
            let edges: Vec<_> = n.children.iter().map(|(a, c)| (a.clone(), h.node(*c).refined.clone())).collect();
            assert_eq!(edges, parts);
        }
    }
}

#[test]
fn subtree_stays_below_and_on_requested_levels() {
    let g = corpus::cycle(4);
    let (_, _, r) = reduced(&g, 2).expect("the 4-cycle is located on its 2-subdivision");
    for id in 0..r.len() {
        for levels in [vec![0], vec![1, 2], vec![0, 1, 2, 3]] {
            for s in r.subtree(id, &levels).unwrap() {
                assert!(levels.contains(&r.node(s).level.unwrap()));
                let mut cur = Some(s);
                while cur.is_some_and(|c| c != id) {
                    cur = r.node(cur.unwrap()).parent;
                }
                assert_eq!(cur, Some(id), "node {s} is not below {id}");
            }
        }
    }
}
