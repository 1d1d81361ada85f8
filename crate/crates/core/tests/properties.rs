use proptest::prelude::*;
use proptest::sample::select;
use robloc_core::cop_translation::{deduce_round_moves, ResultEntry, ThreadGeometry};
use robloc_core::subs_translation::{deduce_distance, rounds_up};
use robloc_core::{
    corpus, decide_localizable, play, residue_class, Budget, Graph, Outcome, ResidueClass, RobberModel,
    SubdividedGraph, VertexClass, Verdict,
};

fn corpus_and_m(max_m: u32) -> impl Strategy<Value = (Graph, u32)> {
    (select(corpus::connected_graphs(5)), 1..=max_m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn branch_distances_scale((g, m) in corpus_and_m(5)) {
        let sg = SubdividedGraph::new(&g, m).unwrap();
        for u in 0..g.len() {
            for v in 0..g.len() {
                prop_assert_eq!(sg.graph().dist(sg.branch(u), sg.branch(v)), m * g.dist(u, v));
            }
        }
    }

    #[test]
    fn inner_vertices_split_their_thread((g, m) in corpus_and_m(5)) {
        let sg = SubdividedGraph::new(&g, m).unwrap();
        let s = sg.graph();
        for x in (0..s.len()).filter(|&x| !sg.is_branch(x)) {
            let ends = sg.corr_end(x);
            prop_assert_eq!(ends.len(), 2);
            prop_assert_eq!(s.dist(x, sg.branch(ends[0])) + s.dist(x, sg.branch(ends[1])), m);
        }
    }

    #[test]
    fn vicinity_and_classify_agree((g, m) in corpus_and_m(6)) {
        let sg = SubdividedGraph::new(&g, m).unwrap();
        let s = sg.graph();
        for x in 0..s.len() {
            let vic = sg.vicinity(x);
            prop_assert_eq!(vic.len() == 2, sg.classify(x) == VertexClass::Midpoint);
            let nearest = (0..g.len()).map(|b| s.dist(x, sg.branch(b))).min().unwrap();
            for b in vic {
                prop_assert_eq!(s.dist(x, sg.branch(b)), nearest);
            }
        }
    }

    #[test]
    fn residue_reveals_the_offset_class((g, m) in corpus_and_m(6)) {
        prop_assume!(m >= 2);
        let sg = SubdividedGraph::new(&g, m).unwrap();
        let s = sg.graph();
        for x in 0..s.len() {
            let want = match sg.classify(x) {
                VertexClass::Branch => ResidueClass::AtBranch,
                VertexClass::Midpoint | VertexClass::NearMidpoint => ResidueClass::AtMidpointZone,
                VertexClass::InnerOther => ResidueClass::Other,
            };
            for p in 0..g.len() {
                prop_assert_eq!(residue_class(s.dist(sg.branch(p), x), m).unwrap(), want);
            }
        }
    }

    #[test]
    fn deduced_distance_is_to_the_nearest_end((g, m) in corpus_and_m(6)) {
        prop_assume!(m >= 2);
        let sg = SubdividedGraph::new(&g, m).unwrap();
        let s = sg.graph();
        for x in (0..s.len()).filter(|&x| sg.classify(x) != VertexClass::Midpoint) {
            let near = sg.vicinity(x)[0];
            for p in 0..g.len() {
                let d = s.dist(sg.branch(p), x);
                prop_assert_eq!(deduce_distance(d, m).unwrap(), g.dist(p, near));
                if rounds_up(d, m) {
                    let far = sg.corr_end(x).into_iter().find(|&e| e != near).unwrap();
                    prop_assert_eq!(s.dist(sg.branch(p), sg.branch(near)), s.dist(sg.branch(p), sg.branch(far)) + m);
                }
            }
        }
    }

    #[test]
    fn mock_robber_distances_match((g, eta) in corpus_and_m(4), pick in any::<prop::sample::Index>()) {
        prop_assume!(!g.edges().is_empty());
        let sg = SubdividedGraph::new(&g, eta).unwrap();
        let s = sg.graph();
        let (u, v) = g.edges()[pick.index(g.edges().len())];
        for (u, v) in [(u, v), (v, u)] {
            for p in 0..s.len() {
                let geo = ThreadGeometry::of(&sg, p);
                let e = ResultEntry { ua: g.dist(u, geo.a), ub: g.dist(u, geo.b), va: g.dist(v, geo.a), vb: g.dist(v, geo.b) };
                for j in 1..=eta {
                    prop_assert_eq!(deduce_round_moves(e, j, geo), s.dist(p, sg.vertex_on(u, v, j).unwrap()));
                }
            }
        }
    }
}

fn walk_strategy() -> impl Strategy<Value = (Graph, Vec<usize>)> {
    select(corpus::connected_graphs(5)).prop_flat_map(|g| {
        let n = g.len();
        (Just(g), 0..n, prop::collection::vec(any::<prop::sample::Index>(), 0..12))
            .prop_map(|(g, start, steps)| {
                let mut walk = vec![start];
                for s in steps {
                    let at = *walk.last().unwrap();
                    let moves: Vec<usize> = std::iter::once(at).chain(g.neighbors(at).iter().copied()).collect();
                    walk.push(moves[s.index(moves.len())]);
                }
                (g, walk)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn winning_strategies_locate_scripted_walks((g, walk) in walk_strategy(), k in 1usize..=2) {
        let Verdict::Winning { capture_time, strategy } = decide_localizable(&g, k, Budget::default()).unwrap() else {
            return Ok(());
        };
        let playout = play(&strategy, &g, &RobberModel::Scripted(walk.clone()), capture_time).unwrap();
        let trace = &playout.branches[0];
        match trace.outcome {
            Outcome::Located { round, vertex } => {
                prop_assert!(round <= capture_time);
                let at = walk[(round as usize).saturating_sub(1).min(walk.len() - 1)];
                prop_assert_eq!(vertex, at);
            }
            Outcome::Undecided => prop_assert!(false, "undecided within the capture time"),
        }
        for (i, r) in trace.rounds.iter().enumerate() {
            prop_assert!(r.refined.contains(walk[i.min(walk.len() - 1)]));
        }
    }
}

#[test]
fn capture_time_is_minimal_and_tight() {
    for g in corpus::connected_graphs(5) {
        for k in 1..=2 {
            let Verdict::Winning { capture_time, strategy } = decide_localizable(&g, k, Budget::default()).unwrap()
            else {
                continue;
            };
            if capture_time == 0 {
                continue;
            }
            let short = Budget { max_rounds: capture_time - 1, ..Budget::default() };
            assert!(!decide_localizable(&g, k, short).unwrap().is_winning());
            let adv = play(&strategy, &g, &RobberModel::Adversarial, capture_time).unwrap();
            let Outcome::Located { round, .. } = adv.outcome() else { panic!("adversary escapes") };
            assert_eq!(round, capture_time);
        }
    }
}

#[test]
fn more_cops_never_slower() {
    for g in corpus::connected_graphs(5) {
        let capt = |k| decide_localizable(&g, k, Budget::default()).unwrap().capture_time();
        let (one, two, three) = (capt(1), capt(2), capt(3));
        if let (Some(a), Some(b)) = (one, two) {
            assert!(b <= a);
        }
        if let (Some(a), Some(b)) = (two, three) {
            assert!(b <= a);
        }
        assert!(one.is_none() || two.is_some());
    }
}
