//! Exact analysis of the Sign Game: two players alternately assign `+1` or
//! `-1` to the vertices of a simple graph, every edge scores the product of
//! its endpoints, and player P wants the final total positive while player N
//! wants it negative.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`], [`family`] and [`graph6`] build the boards.
//! * [`game`] holds the rules (moves, banking, final score, outcome).
//! * [`solver`] evaluates positions exactly, either by memoized minimax over
//!   the full assignment or by a counts-only dynamic program for complete and
//!   complete multipartite graphs.
//! * [`reductions`] implements score-preserving board simplifications and a
//!   brute-force completion-equivalence checker.
//! * [`strategies`] runs fixed mirroring policies against a best-responding
//!   opponent.
//! * [`verification`] sweeps families of boards and compares solver output
//!   with the known closed-form outcomes.

pub mod family;
pub mod game;
pub mod graph;
pub mod graph6;
pub mod reductions;
pub mod solver;
pub mod strategies;
pub mod verification;

pub use family::{build_family, disjoint_union, parse_family_spec, FamilySpec, SpecError};
pub use game::{
    new_game, outcome_from_score, score, Cell, GameConfig, GameError, GameState, Move, Outcome,
    Role, Sign, Transcript,
};
pub use graph::{Graph, GraphError};
pub use solver::{solve, solve_counts, solve_family, SolveError, SolveOptions, SolveResult};
