//! Deterministic mirroring policies and their exact evaluation against a
//! best-responding opponent.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{build_family, FamilySpec};
use crate::game::{GameConfig, GameError, GameState, Move, Role, Sign};
use crate::graph::Graph;
use crate::solver::{solve, SolveError, SolveOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrategyKind {
    /// Answer on the lowest free vertex with the opposite of the opponent's
    /// last sign.
    #[serde(rename = "mirror-opposite")]
    MirrorOppositeSign,
    /// Answer on the lowest free vertex with the opponent's last sign.
    #[serde(rename = "mirror-same")]
    MirrorSameSign,
    /// Answer in the other part with the opposite sign.
    #[serde(rename = "bipartite-cross")]
    BipartiteCrossMirror,
    /// Answer in the same part with the opposite sign; once that part is
    /// full, switch to the other part.
    #[serde(rename = "bipartite-same-part")]
    BipartiteSamePartMirror,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::MirrorOppositeSign,
        StrategyKind::MirrorSameSign,
        StrategyKind::BipartiteCrossMirror,
        StrategyKind::BipartiteSamePartMirror,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::MirrorOppositeSign => "mirror-opposite",
            StrategyKind::MirrorSameSign => "mirror-same",
            StrategyKind::BipartiteCrossMirror => "bipartite-cross",
            StrategyKind::BipartiteSamePartMirror => "bipartite-same-part",
        }
    }

    pub fn needs_parts(self) -> bool {
        matches!(
            self,
            StrategyKind::BipartiteCrossMirror | StrategyKind::BipartiteSamePartMirror
        )
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown strategy `{s}` (expected one of {})",
                    StrategyKind::ALL.map(StrategyKind::name).join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("{0} needs the two part sizes of a complete bipartite board")]
    PartsRequired(StrategyKind),
    #[error("the board is not the complete bipartite graph with parts {0:?}")]
    PartsMismatch(Vec<usize>),
    #[error("no vertex satisfies the {0} rule")]
    NoVertex(StrategyKind),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

fn check_parts(graph: &Graph, parts: &[usize]) -> Result<(), StrategyError> {
    let matches = parts.len() == 2
        && build_family(&FamilySpec::CompleteMultipartite(parts.to_vec()))
            .is_ok_and(|g| &g == graph);
    if matches {
        Ok(())
    } else {
        Err(StrategyError::PartsMismatch(parts.to_vec()))
    }
}

/// The move `kind` prescribes for the player to act.
///
/// On an empty board there is nothing to mirror: the policy opens on the
/// lowest vertex with its own sign (Minus for N, Plus for P). Free choices
/// inside a rule always take the lowest-index vertex.
pub fn strategy_move(
    state: &GameState,
    kind: StrategyKind,
    parts: Option<&[usize]>,
) -> Result<Move, StrategyError> {
    let me = state.player_to_move()?;
    let parts = match (kind.needs_parts(), parts) {
        (true, None) => return Err(StrategyError::PartsRequired(kind)),
        (true, Some(p)) => {
            check_parts(state.graph(), p)?;
            Some(p)
        }
        (false, _) => None,
    };
    let cells = state.cells();
    let lowest_in = |range: std::ops::Range<usize>| range.into_iter().find(|&v| cells[v].is_none());
    let everything = 0..cells.len();

    let Some(&last) = state.history().last() else {
        let sign = if me == Role::N {
            Sign::Minus
        } else {
            Sign::Plus
        };
        return lowest_in(everything)
            .map(|v| Move::new(v, sign))
            .ok_or(StrategyError::NoVertex(kind));
    };

    let part_range = |part: usize| {
        let p = parts.expect("checked above");
        let start: usize = p[..part].iter().sum();
        start..start + p[part]
    };
    let part_of = |v: usize| usize::from(v >= parts.expect("checked above")[0]);

    let chosen = match kind {
        StrategyKind::MirrorOppositeSign => {
            lowest_in(everything).map(|v| Move::new(v, last.sign.flip()))
        }
        StrategyKind::MirrorSameSign => lowest_in(everything).map(|v| Move::new(v, last.sign)),
        StrategyKind::BipartiteCrossMirror => {
            let here = part_of(last.vertex);
            // A full opposite part leaves only same-part answers.
            lowest_in(part_range(1 - here))
                .or_else(|| lowest_in(part_range(here)))
                .map(|v| Move::new(v, last.sign.flip()))
        }
        StrategyKind::BipartiteSamePartMirror => {
            let here = part_of(last.vertex);
            match lowest_in(part_range(here)) {
                Some(v) => Some(Move::new(v, last.sign.flip())),
                None => {
                    let sign = match me {
                        Role::P => last.sign,
                        Role::N => last.sign.flip(),
                    };
                    lowest_in(part_range(1 - here)).map(|v| Move::new(v, sign))
                }
            }
        }
    };
    chosen.ok_or(StrategyError::NoVertex(kind))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyEvalReport {
    pub kind: StrategyKind,
    pub operated_role: Role,
    /// Worst case over all opponent play, P's perspective.
    pub guaranteed_value: i64,
    /// The opponent's best line against the policy (both sides' moves).
    pub witness_line: Vec<Move>,
    pub nodes: u64,
    /// Perfect-play value of the same board, for comparison.
    pub optimal_value: i64,
}

impl StrategyEvalReport {
    /// A fixed policy can never beat perfect play for its own side.
    pub fn respects_optimum(&self) -> bool {
        match self.operated_role {
            Role::N => self.guaranteed_value >= self.optimal_value,
            Role::P => self.guaranteed_value <= self.optimal_value,
        }
    }
}

/// Exact value of `kind` played by `operated_role` on a fresh board, with the
/// opponent minimaxing against it. Opponent ties go to the lowest vertex,
/// then Plus.
pub fn evaluate_strategy(
    graph: &Graph,
    config: GameConfig,
    kind: StrategyKind,
    operated_role: Role,
    parts: Option<&[usize]>,
    opts: &SolveOptions,
) -> Result<StrategyEvalReport, StrategyError> {
    if kind.needs_parts() {
        check_parts(graph, parts.ok_or(StrategyError::PartsRequired(kind))?)?;
    }
    let state = GameState::new(graph.clone(), config);
    let optimal_value = solve(&state, opts)?.value;
    let mut eval = Evaluator {
        kind,
        operated: operated_role,
        parts,
        memo: HashMap::new(),
        nodes: 0,
    };
    let mut state = state;
    let guaranteed_value = eval.value(&mut state)?;
    let witness_line = eval.witness(&mut state)?;
    Ok(StrategyEvalReport {
        kind,
        operated_role,
        guaranteed_value,
        witness_line,
        nodes: eval.nodes,
        optimal_value,
    })
}

struct Evaluator<'a> {
    kind: StrategyKind,
    operated: Role,
    parts: Option<&'a [usize]>,
    // The policy only looks at the cells and the last move.
    memo: HashMap<(Vec<Option<Sign>>, Option<Move>), i64>,
    nodes: u64,
}

impl Evaluator<'_> {
    fn value(&mut self, state: &mut GameState) -> Result<i64, StrategyError> {
        if state.is_over() {
            return Ok(state.banked_score());
        }
        let key = (state.cells().to_vec(), state.history().last().copied());
        if let Some(&v) = self.memo.get(&key) {
            // Stored as the score still to come.
            return Ok(state.banked_score() + v);
        }
        self.nodes += 1;
        let to_move = state.player_to_move()?;
        let result = if to_move == self.operated {
            let mv = strategy_move(state, self.kind, self.parts)?;
            state.play(mv)?;
            let v = self.value(state);
            state.undo();
            v?
        } else {
            let mut best: Option<i64> = None;
            for mv in state.legal_moves() {
                state.play(mv)?;
                let v = self.value(state);
                state.undo();
                let v = v?;
                best = Some(match (best, to_move) {
                    (None, _) => v,
                    (Some(b), Role::P) => b.max(v),
                    (Some(b), Role::N) => b.min(v),
                });
            }
            best.expect("game not over")
        };
        self.memo.insert(key, result - state.banked_score());
        Ok(result)
    }

    fn witness(&mut self, state: &mut GameState) -> Result<Vec<Move>, StrategyError> {
        let mut line = Vec::new();
        let mut cur = state.clone();
        while !cur.is_over() {
            let to_move = cur.player_to_move()?;
            let mv = if to_move == self.operated {
                strategy_move(&cur, self.kind, self.parts)?
            } else {
                let target = self.value(&mut cur)?;
                let mut found = None;
                for mv in cur.legal_moves() {
                    cur.play(mv)?;
                    let v = self.value(&mut cur);
                    cur.undo();
                    if v? == target {
                        found = Some(mv);
                        break;
                    }
                }
                found.expect("some move attains the node value")
            };
            cur.play(mv)?;
            line.push(mv);
        }
        Ok(line)
    }
}
