//! Exact perfect-play evaluation.
//!
//! Values are always final scores seen from P's side: P maximizes, N
//! minimizes. Because a win is any positive score and a loss any negative
//! one, the sign of the minimax score is the game-theoretic outcome.
//!
//! * [`Solver`] runs memoized minimax over full assignments of an arbitrary
//!   graph.
//! * [`CountsSolver`] collapses complete and complete multipartite graphs to
//!   per-part `(plus, minus)` counts, which scales to hundreds of vertices.
//! * [`solve_outcome`] is an independent three-valued (win/draw/loss) search
//!   used to cross-check that score minimax realises the outcome order.

mod counts;
mod lattice;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{build_family, FamilySpec, SpecError};
use crate::game::{outcome_from_score, GameConfig, GameError, GameState, Move, Outcome, Role};

pub use counts::{multipartite_completion_score, solve_counts, CountsOptions, CountsSolver};
pub use lattice::solve_outcome;
pub use search::Solver;

/// Default cap on unassigned vertices for the general solver.
pub const DEFAULT_BUDGET: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{unassigned} unassigned vertices exceed the solver budget of {budget}")]
    BudgetExceeded { unassigned: usize, budget: usize },
    #[error("counts table would need {states} states, above the limit of {limit}")]
    StateLimit { states: u128, limit: u128 },
    #[error("the counts solver supports 1 to 4 parts of size >= 1, got {0:?}")]
    UnsupportedParts(Vec<usize>),
    #[error("count {count} out of range for part {part} of size {size}")]
    CountOutOfRange {
        part: usize,
        count: usize,
        size: usize,
    },
    #[error("position is not a descendant of the solver's root: {0}")]
    NotDescendant(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Largest number of unassigned vertices accepted.
    pub budget: usize,
    /// Share memo entries between a state and its global sign flip. Only
    /// applies when the root has no assigned vertices.
    pub canonicalize_flips: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: DEFAULT_BUDGET,
            canonicalize_flips: true,
        }
    }
}

impl SolveOptions {
    pub fn with_budget(budget: usize) -> Self {
        SolveOptions {
            budget,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Final score under optimal play, P's perspective.
    pub value: i64,
    pub outcome: Outcome,
    /// Absent when the game is over.
    pub best_move: Option<Move>,
    pub nodes_expanded: u64,
    pub memo_hits: u64,
}

impl SolveResult {
    pub(crate) fn new(value: i64, best_move: Option<Move>, nodes: u64, hits: u64) -> Self {
        SolveResult {
            value,
            outcome: outcome_from_score(value),
            best_move,
            nodes_expanded: nodes,
            memo_hits: hits,
        }
    }
}

/// Solves a game state with the player to move derived from its history.
///
/// Ties between equally good moves go to the lowest vertex, then to Plus.
pub fn solve(state: &GameState, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    if state.is_over() {
        return Ok(SolveResult::new(state.banked_score(), None, 0, 0));
    }
    let to_move = state.player_to_move()?;
    let mut solver = Solver::new(state.graph(), state.cells(), to_move, opts)?;
    solver.solve_root()
}

/// The tie-break-canonical line of best moves to the end of the game.
pub fn principal_variation(
    state: &GameState,
    opts: &SolveOptions,
) -> Result<Vec<Move>, SolveError> {
    if state.is_over() {
        return Ok(Vec::new());
    }
    let to_move = state.player_to_move()?;
    let mut solver = Solver::new(state.graph(), state.cells(), to_move, opts)?;
    solver.principal_variation(state.cells())
}

/// Which solver produced a [`FamilySolve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    General,
    Counts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySolve {
    #[serde(flatten)]
    pub result: SolveResult,
    pub method: SolveMethod,
}

/// Solves a fresh board built from `spec`. Boards over `budget` that are
/// complete or complete multipartite (up to 4 parts) go to the counts
/// solver; anything else over budget is an error.
pub fn solve_family(
    spec: &FamilySpec,
    first_role: Role,
    budget: usize,
) -> Result<FamilySolve, FamilySolveError> {
    let graph = build_family(spec)?;
    if graph.vertex_count() > budget {
        if let Some(parts) = spec.part_sizes().filter(|p| p.len() <= 4) {
            let result = solve_counts(&parts, first_role, &CountsOptions::default())?;
            return Ok(FamilySolve {
                result,
                method: SolveMethod::Counts,
            });
        }
    }
    let state = GameState::new(graph, GameConfig::new(first_role));
    let result = solve(&state, &SolveOptions::with_budget(budget))?;
    Ok(FamilySolve {
        result,
        method: SolveMethod::General,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilySolveError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}
