//! Rules of the game: moves, banking, turn order, final score and outcome.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{build_family, FamilySpec, SpecError};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// A vertex is either unassigned (`None`) or carries a sign.
pub type Cell = Option<Sign>;

/// Formats cells as a compact string such as `+-.+`.
pub fn cells_to_string(cells: &[Cell]) -> String {
    cells.iter().map(|c| c.map_or('.', Sign::symbol)).collect()
}

/// Parses the format produced by [`cells_to_string`]; `.`, `_` and `?` mark
/// unassigned vertices.
pub fn cells_from_str(text: &str) -> Option<Vec<Cell>> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '.' | '_' | '?' => Some(None),
            c => Sign::from_symbol(c).map(Some),
        })
        .collect()
}

/// P wants a positive final score, N a negative one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    P,
    N,
}

impl Role {
    pub fn other(self) -> Role {
        match self {
            Role::P => Role::N,
            Role::N => Role::P,
        }
    }

    /// The outcome in which this role wins.
    pub fn wins(self) -> Outcome {
        match self {
            Role::P => Outcome::PWins,
            Role::N => Outcome::NWins,
        }
    }

    /// The role credited with a banked delta: positive deltas go to P,
    /// negative ones to N, zero to nobody.
    pub fn credited_with(delta: i64) -> Option<Role> {
        match delta.signum() {
            1 => Some(Role::P),
            -1 => Some(Role::N),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::P => "P",
            Role::N => "N",
        })
    }
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P" | "p" => Ok(Role::P),
            "N" | "n" => Ok(Role::N),
            _ => Err(format!("expected P or N, got `{s}`")),
        }
    }
}

/// Which role moves first; the other role is Player 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    pub first_role: Role,
}

impl GameConfig {
    pub fn new(first_role: Role) -> Self {
        GameConfig { first_role }
    }

    pub fn second_role(self) -> Role {
        self.first_role.other()
    }

    /// The role to act after `moves_made` moves.
    pub fn role_after(self, moves_made: usize) -> Role {
        if moves_made.is_multiple_of(2) {
            self.first_role
        } else {
            self.first_role.other()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    #[serde(rename = "v")]
    pub vertex: usize,
    pub sign: Sign,
}

impl Move {
    pub fn new(vertex: usize, sign: Sign) -> Self {
        Move { vertex, sign }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.vertex, self.sign.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "P")]
    PWins,
    #[serde(rename = "N")]
    NWins,
    #[serde(rename = "draw")]
    Draw,
}

impl Outcome {
    pub fn winner(self) -> Option<Role> {
        match self {
            Outcome::PWins => Some(Role::P),
            Outcome::NWins => Some(Role::N),
            Outcome::Draw => None,
        }
    }

    /// Rank in P's preference order: N wins < draw < P wins.
    pub fn rank(self) -> i8 {
        match self {
            Outcome::NWins => -1,
            Outcome::Draw => 0,
            Outcome::PWins => 1,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Outcome::PWins => "Player P wins",
            Outcome::NWins => "Player N wins",
            Outcome::Draw => "draw",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

pub fn outcome_from_score(s: i64) -> Outcome {
    match s.signum() {
        1 => Outcome::PWins,
        -1 => Outcome::NWins,
        _ => Outcome::Draw,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("the game is over; no player to move")]
    GameOver,
    #[error("vertex {vertex} is already assigned")]
    Occupied { vertex: usize },
    #[error("vertex {vertex} does not exist (graph has {vertex_count} vertices)")]
    OutOfRange { vertex: usize, vertex_count: usize },
    #[error("vertex {vertex} is unassigned; the game is incomplete")]
    Incomplete { vertex: usize },
    #[error("expected {expected} cells, got {got}")]
    CellCount { expected: usize, got: usize },
}

/// Sum of edge products over a complete assignment.
pub fn score(graph: &Graph, cells: &[Cell]) -> Result<i64, GameError> {
    if cells.len() != graph.vertex_count() {
        return Err(GameError::CellCount {
            expected: graph.vertex_count(),
            got: cells.len(),
        });
    }
    if let Some(vertex) = cells.iter().position(Option::is_none) {
        return Err(GameError::Incomplete { vertex });
    }
    Ok(completed_score(graph, cells))
}

/// Sum of edge products over edges whose endpoints are both assigned.
pub fn completed_score(graph: &Graph, cells: &[Cell]) -> i64 {
    graph
        .edges()
        .iter()
        .filter_map(|&(a, b)| Some(cells[a]?.value() * cells[b]?.value()))
        .sum()
}

/// The points banked by assigning `sign` to `vertex` given the current cells.
pub fn banked_delta(graph: &Graph, cells: &[Cell], vertex: usize, sign: Sign) -> i64 {
    sign.value()
        * graph
            .neighbors(vertex)
            .iter()
            .filter_map(|&u| cells[u].map(Sign::value))
            .sum::<i64>()
}

/// A game in progress. The turn is derived from the number of moves made and
/// the configured first role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    graph: Arc<Graph>,
    config: GameConfig,
    cells: Vec<Cell>,
    banked_score: i64,
    history: Vec<Move>,
}

pub fn new_game(graph: impl Into<Arc<Graph>>, config: GameConfig) -> GameState {
    GameState::new(graph, config)
}

impl GameState {
    pub fn new(graph: impl Into<Arc<Graph>>, config: GameConfig) -> Self {
        let graph = graph.into();
        let n = graph.vertex_count();
        GameState {
            graph,
            config,
            cells: vec![None; n],
            banked_score: 0,
            history: Vec::new(),
        }
    }

    /// Replays `moves` from a fresh board.
    pub fn from_moves(
        graph: impl Into<Arc<Graph>>,
        config: GameConfig,
        moves: &[Move],
    ) -> Result<Self, GameError> {
        let mut state = GameState::new(graph, config);
        for &mv in moves {
            state.play(mv)?;
        }
        Ok(state)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn config(&self) -> GameConfig {
        self.config
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn banked_score(&self) -> i64 {
        self.banked_score
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn moves_made(&self) -> usize {
        self.history.len()
    }

    pub fn is_over(&self) -> bool {
        self.history.len() == self.graph.vertex_count()
    }

    pub fn player_to_move(&self) -> Result<Role, GameError> {
        if self.is_over() {
            return Err(GameError::GameOver);
        }
        Ok(self.config.role_after(self.history.len()))
    }

    /// Unassigned vertices in ascending order, Plus before Minus.
    pub fn legal_moves(&self) -> Vec<Move> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_none())
            .flat_map(|(v, _)| Sign::BOTH.map(|s| Move::new(v, s)))
            .collect()
    }

    fn check(&self, mv: Move) -> Result<(), GameError> {
        let n = self.graph.vertex_count();
        if mv.vertex >= n {
            return Err(GameError::OutOfRange {
                vertex: mv.vertex,
                vertex_count: n,
            });
        }
        if self.cells[mv.vertex].is_some() {
            return Err(GameError::Occupied { vertex: mv.vertex });
        }
        Ok(())
    }

    /// Applies a move in place and returns the points it banked.
    pub fn play(&mut self, mv: Move) -> Result<i64, GameError> {
        self.check(mv)?;
        let delta = banked_delta(&self.graph, &self.cells, mv.vertex, mv.sign);
        self.cells[mv.vertex] = Some(mv.sign);
        self.banked_score += delta;
        self.history.push(mv);
        Ok(delta)
    }

    /// Exactly reverses the last [`play`](Self::play).
    pub fn undo(&mut self) -> Option<(Move, i64)> {
        let mv = self.history.pop()?;
        self.cells[mv.vertex] = None;
        let delta = banked_delta(&self.graph, &self.cells, mv.vertex, mv.sign);
        self.banked_score -= delta;
        Some((mv, delta))
    }

    /// Persistent form of [`play`](Self::play).
    pub fn apply_move(&self, mv: Move) -> Result<(GameState, i64), GameError> {
        let mut next = self.clone();
        let delta = next.play(mv)?;
        Ok((next, delta))
    }

    /// Edges with both endpoints assigned, with their scores.
    pub fn completed_edges(&self) -> Vec<((usize, usize), i64)> {
        self.graph
            .edges()
            .iter()
            .filter_map(|&(a, b)| Some(((a, b), self.cells[a]?.value() * self.cells[b]?.value())))
            .collect()
    }

    /// Edges completed by the move onto `vertex`, assuming it was the last
    /// move played.
    pub fn edges_completed_by(&self, vertex: usize) -> Vec<((usize, usize), i64)> {
        let Some(sign) = self.cells[vertex] else {
            return Vec::new();
        };
        self.graph
            .neighbors(vertex)
            .iter()
            .filter_map(|&u| {
                let other = self.cells[u]?;
                Some(((vertex.min(u), vertex.max(u)), sign.value() * other.value()))
            })
            .collect()
    }

    /// Recomputes the banked score from scratch.
    pub fn recomputed_banked_score(&self) -> i64 {
        completed_score(&self.graph, &self.cells)
    }

    pub fn final_score(&self) -> Result<i64, GameError> {
        score(&self.graph, &self.cells)
    }

    /// `None` until the game is over.
    pub fn outcome(&self) -> Option<Outcome> {
        self.is_over()
            .then(|| outcome_from_score(self.banked_score))
    }
}

/// Serialized record of a game: the board spec, who moved first, and the
/// moves in order. `final_score` and `outcome` are filled in for finished
/// games.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub graph: FamilySpec,
    pub first_role: Role,
    pub moves: Vec<Move>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_score: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
}

#[derive(Debug, Error)]
pub enum TranscriptError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("move {index}: {source}")]
    Move { index: usize, source: GameError },
    #[error("recorded final score {recorded} but replay gives {replayed}")]
    ScoreMismatch { recorded: i64, replayed: i64 },
    #[error("recorded outcome {recorded:?} but replay gives {replayed:?}")]
    OutcomeMismatch {
        recorded: Option<Outcome>,
        replayed: Option<Outcome>,
    },
}

impl Transcript {
    pub fn from_state(spec: FamilySpec, state: &GameState) -> Self {
        Transcript {
            graph: spec,
            first_role: state.config().first_role,
            moves: state.history().to_vec(),
            final_score: state.is_over().then(|| state.banked_score()),
            outcome: state.outcome(),
        }
    }

    /// Rebuilds the game and checks any recorded result against it.
    pub fn replay(&self) -> Result<GameState, TranscriptError> {
        let graph = build_family(&self.graph)?;
        let mut state = GameState::new(graph, GameConfig::new(self.first_role));
        for (index, &mv) in self.moves.iter().enumerate() {
            state
                .play(mv)
                .map_err(|source| TranscriptError::Move { index, source })?;
        }
        if let Some(recorded) = self.final_score {
            if !state.is_over() || recorded != state.banked_score() {
                return Err(TranscriptError::ScoreMismatch {
                    recorded,
                    replayed: state.banked_score(),
                });
            }
        }
        if self.outcome.is_some() && self.outcome != state.outcome() {
            return Err(TranscriptError::OutcomeMismatch {
                recorded: self.outcome,
                replayed: state.outcome(),
            });
        }
        Ok(state)
    }
}
