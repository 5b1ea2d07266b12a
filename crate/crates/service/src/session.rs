use serde::{Deserialize, Serialize};

use signgame_core::game::GameConfig;
use signgame_core::solver::Solver;
use signgame_core::{
    build_family, FamilySpec, GameError, GameState, Move, Outcome, Role, SolveOptions,
};

use crate::error::ApiError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    Cycle,
    Bipartite,
    Star,
    Path,
    Generic,
}

impl Layout {
    pub fn for_spec(spec: &FamilySpec) -> Layout {
        match spec {
            FamilySpec::Cycle(_) | FamilySpec::Complete(_) => Layout::Cycle,
            FamilySpec::CompleteMultipartite(p) if p.len() == 2 => Layout::Bipartite,
            FamilySpec::Star(_) | FamilySpec::StarForest(_) => Layout::Star,
            FamilySpec::Path(_) => Layout::Path,
            _ => Layout::Generic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphView {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeScore {
    pub edge: [usize; 2],
    pub score: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub by: Role,
    #[serde(rename = "move")]
    pub mv: Move,
    /// Points banked by this move.
    pub delta: i64,
    /// Edges completed by this move.
    pub completed_edges: Vec<EdgeScore>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    InProgress,
    Finished,
}

/// The state view returned by every game endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateView {
    pub id: String,
    pub spec: String,
    pub graph: GraphView,
    pub cells: Vec<Option<String>>,
    /// `"P"`, `"N"` or `"none"` once the game is over.
    pub to_move: String,
    pub banked_score: i64,
    pub completed_edges: Vec<EdgeScore>,
    pub status: Status,
    pub outcome: Option<Outcome>,
    pub human_role: Role,
    pub first_role: Role,
    pub layout: Layout,
    pub moves: Vec<Move>,
    pub last_move: Option<MoveRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HintView {
    pub best_move: Option<Move>,
    /// Final score under optimal play from here, P's perspective.
    pub value: i64,
    /// The same value from the human's side (positive is good for them).
    pub value_for_human: i64,
    pub outcome_with_optimal_play: Outcome,
}

fn edge_scores(list: Vec<((usize, usize), i64)>) -> Vec<EdgeScore> {
    list.into_iter()
        .map(|((a, b), score)| EdgeScore {
            edge: [a, b],
            score,
        })
        .collect()
}

/// A live game between a human and the exact engine.
#[derive(Clone)]
pub struct Session {
    id: String,
    spec: FamilySpec,
    human_role: Role,
    state: GameState,
    budget: usize,
    last: Option<MoveRecord>,
    // Rooted at the empty board, built on first use and dropped at the end.
    engine: Option<Solver>,
}

impl Session {
    /// A fresh session, without the engine's opening move.
    pub fn new(
        id: String,
        spec: FamilySpec,
        first_role: Role,
        human_role: Role,
        budget: usize,
    ) -> Result<Session, ApiError> {
        let graph = build_family(&spec).map_err(|e| ApiError::bad_spec(e.to_string()))?;
        if graph.vertex_count() > budget {
            return Err(ApiError::too_large(format!(
                "{spec} has {} vertices; the exact engine plays at most {budget}",
                graph.vertex_count()
            )));
        }
        Ok(Session {
            id,
            spec,
            human_role,
            state: GameState::new(graph, GameConfig::new(first_role)),
            budget,
            last: None,
            engine: None,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn human_role(&self) -> Role {
        self.human_role
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn engine_to_move(&self) -> bool {
        self.state
            .player_to_move()
            .is_ok_and(|r| r != self.human_role)
    }

    fn apply(&mut self, mv: Move) -> Result<MoveRecord, ApiError> {
        let by = self
            .state
            .player_to_move()
            .map_err(|_| ApiError::game_over())?;
        let delta = self.state.play(mv).map_err(|e| match e {
            GameError::Occupied { vertex } => ApiError::occupied(vertex),
            GameError::OutOfRange {
                vertex,
                vertex_count,
            } => ApiError::bad_vertex(vertex, vertex_count),
            GameError::GameOver => ApiError::game_over(),
            other => ApiError::internal(other.to_string()),
        })?;
        let record = MoveRecord {
            by,
            mv,
            delta,
            completed_edges: edge_scores(self.state.edges_completed_by(mv.vertex)),
        };
        if self.state.is_over() {
            self.engine = None;
        }
        self.last = Some(record.clone());
        Ok(record)
    }

    /// Replays a stored move without turn checks against the human role.
    pub fn replay_move(&mut self, mv: Move) -> Result<MoveRecord, ApiError> {
        self.apply(mv)
    }

    pub fn human_move(&mut self, mv: Move) -> Result<MoveRecord, ApiError> {
        let n = self.state.graph().vertex_count();
        let to_move = self
            .state
            .player_to_move()
            .map_err(|_| ApiError::game_over())?;
        if mv.vertex >= n {
            return Err(ApiError::bad_vertex(mv.vertex, n));
        }
        if to_move != self.human_role {
            return Err(ApiError::not_your_turn());
        }
        self.apply(mv)
    }

    fn engine(&mut self) -> Result<&mut Solver, ApiError> {
        if self.engine.is_none() {
            let graph = self.state.graph();
            let empty = vec![None; graph.vertex_count()];
            let solver = Solver::new(
                graph,
                &empty,
                self.state.config().first_role,
                &SolveOptions::with_budget(self.budget),
            )
            .map_err(|e| ApiError::too_large(e.to_string()))?;
            self.engine = Some(solver);
        }
        Ok(self.engine.as_mut().expect("just built"))
    }

    /// Plays the solver's tie-broken best move.
    pub fn engine_move(&mut self) -> Result<MoveRecord, ApiError> {
        if self.state.is_over() {
            return Err(ApiError::game_over());
        }
        if !self.engine_to_move() {
            return Err(ApiError::not_engine_turn());
        }
        let cells = self.state.cells().to_vec();
        let (mv, _) = self
            .engine()?
            .best_move(&cells)
            .map_err(|e| ApiError::internal(e.to_string()))?
            .ok_or_else(ApiError::game_over)?;
        self.apply(mv)
    }

    pub fn hint(&mut self) -> Result<HintView, ApiError> {
        if self.state.is_over() {
            return Err(ApiError::game_over());
        }
        let cells = self.state.cells().to_vec();
        let engine = self.engine()?;
        let value = engine
            .value_of(&cells)
            .map_err(|e| ApiError::internal(e.to_string()))?;
        let best = engine
            .best_move(&cells)
            .map_err(|e| ApiError::internal(e.to_string()))?;
        Ok(HintView {
            best_move: best.map(|(m, _)| m),
            value,
            value_for_human: match self.human_role {
                Role::P => value,
                Role::N => -value,
            },
            outcome_with_optimal_play: signgame_core::outcome_from_score(value),
        })
    }

    pub fn view(&self) -> StateView {
        let graph = self.state.graph();
        StateView {
            id: self.id.clone(),
            spec: self.spec.to_string(),
            graph: GraphView {
                n: graph.vertex_count(),
                edges: graph.edges().iter().map(|&(a, b)| [a, b]).collect(),
            },
            cells: self
                .state
                .cells()
                .iter()
                .map(|c| c.map(|s| s.symbol().to_string()))
                .collect(),
            to_move: self
                .state
                .player_to_move()
                .map_or_else(|_| "none".to_string(), |r| r.to_string()),
            banked_score: self.state.banked_score(),
            completed_edges: edge_scores(self.state.completed_edges()),
            status: if self.state.is_over() {
                Status::Finished
            } else {
                Status::InProgress
            },
            outcome: self.state.outcome(),
            human_role: self.human_role,
            first_role: self.state.config().first_role,
            layout: Layout::for_spec(&self.spec),
            moves: self.state.history().to_vec(),
            last_move: self.last.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use signgame_core::Sign;

    fn session(spec: FamilySpec, first: Role, human: Role) -> Session {
        Session::new("t".into(), spec, first, human, 14).unwrap()
    }

    #[test]
    fn rejects_large_boards() {
        let e = Session::new("t".into(), FamilySpec::Complete(99), Role::P, Role::P, 14)
            .err()
            .unwrap();
        assert_eq!(e.code, "too_large");
    }

    #[test]
    fn error_order() {
        let mut s = session(FamilySpec::Star(2), Role::P, Role::P);
        assert_eq!(
            s.human_move(Move::new(7, Sign::Plus)).unwrap_err().code,
            "bad_vertex"
        );
        assert_eq!(s.engine_move().unwrap_err().code, "not_engine_turn");
        let r = s.human_move(Move::new(1, Sign::Plus)).unwrap();
        assert_eq!((r.by, r.delta), (Role::P, 0));
        assert_eq!(
            s.human_move(Move::new(2, Sign::Plus)).unwrap_err().code,
            "not_your_turn"
        );
        s.engine_move().unwrap();
        assert_eq!(
            s.human_move(Move::new(1, Sign::Minus)).unwrap_err().code,
            "occupied"
        );
    }

    #[test]
    fn finished_game_rejects_everything() {
        let mut s = session(FamilySpec::Complete(2), Role::P, Role::P);
        s.human_move(Move::new(0, Sign::Plus)).unwrap();
        let r = s.engine_move().unwrap();
        assert_eq!(
            r.completed_edges,
            vec![EdgeScore {
                edge: [0, 1],
                score: -1
            }]
        );
        let v = s.view();
        assert_eq!(
            (v.status, v.outcome, v.to_move.as_str()),
            (Status::Finished, Some(Outcome::NWins), "none")
        );
        assert_eq!(
            s.human_move(Move::new(1, Sign::Plus)).unwrap_err().code,
            "game_over"
        );
        assert_eq!(s.engine_move().unwrap_err().code, "game_over");
        assert_eq!(s.hint().unwrap_err().code, "game_over");
    }

    #[test]
    fn hints() {
        let mut s = session(FamilySpec::Complete(4), Role::N, Role::N);
        let h = s.hint().unwrap();
        assert_eq!((h.value, h.outcome_with_optimal_play), (0, Outcome::Draw));
        assert_eq!(s.hint().unwrap(), h);

        let mut s = session(FamilySpec::Complete(2), Role::N, Role::P);
        s.engine_move().unwrap();
        let h = s.hint().unwrap();
        assert_eq!((h.value, h.value_for_human), (1, 1));
    }

    #[test]
    fn layouts() {
        assert_eq!(Layout::for_spec(&FamilySpec::Cycle(5)), Layout::Cycle);
        assert_eq!(
            Layout::for_spec(&FamilySpec::CompleteMultipartite(vec![2, 3])),
            Layout::Bipartite
        );
        assert_eq!(
            Layout::for_spec(&FamilySpec::CompleteMultipartite(vec![1, 2, 3])),
            Layout::Generic
        );
        assert_eq!(Layout::for_spec(&FamilySpec::Star(3)), Layout::Star);
        assert_eq!(Layout::for_spec(&FamilySpec::Path(3)), Layout::Path);
    }
}
