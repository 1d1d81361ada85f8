//! Robber locating game: exact solvers, cop strategy graphs, and strategy
//! translations between a graph and its subdivisions.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cop_translation;
pub mod corpus;
pub mod game;
pub mod graph;
pub mod set;
pub mod solver;
pub mod strategy_graph;
pub mod subdivision;
pub mod subs_translation;
pub mod table;

pub use game::{
    expand, partition_answers, play, refine, AnswerVector, GameError, GameState, Outcome, Playout, ProbeSet,
    RobberModel, RoundRecord, Stage, Trace,
};
pub use graph::{Graph, GraphError};
pub use set::VertexSet;
pub use solver::{decide_localizable, extract_strategy, localization_number, subdivision_number, Budget, Verdict};
pub use subdivision::{residue_class, ResidueClass, SubdividedGraph, SubdivisionError, Thread, VertexClass, VertexKind};
pub use table::StrategyTable;
pub use strategy_graph::{
    Construction, CopWinning, Divergence, RestrictedRobberRules, StrategyGraph, StrategyGraphError,
};
pub use subs_translation::{deduce_distance, run_subdivision_game, SubsError, SubsGame};
pub use cop_translation::{
    deduce_round_moves, deduce_round_stays, probe_count_bound, run_multicop_game, CopError, CopTranslation, ProbeBound,
};
