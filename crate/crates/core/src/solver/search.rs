use crate::game::{completed_score, Cell, Move, Role, Sign};
use crate::graph::Graph;

use super::{SolveError, SolveOptions, SolveResult};

const UNKNOWN: i16 = i16::MIN;

/// Memoized minimax rooted at one position.
///
/// The memo covers every position reachable from the root: each
/// root-unassigned vertex is a base-3 digit (0 unassigned, 1 plus, 2 minus)
/// of a dense table index, and the stored value is the score still to be
/// banked from that position on. The global sign flip of a digit string is
/// tracked alongside it so that a fresh root can key each state by the
/// smaller of the two indices.
#[derive(Clone)]
pub struct Solver {
    graph: Graph,
    root: Vec<Cell>,
    root_to_move: Role,
    free: Vec<usize>,
    slot_of: Vec<Option<usize>>,
    pow3: Vec<usize>,
    canonical: bool,
    table: Vec<i16>,
    cells: Vec<i8>,
    nodes: u64,
    hits: u64,
}

impl Solver {
    pub fn new(
        graph: &Graph,
        cells: &[Cell],
        to_move: Role,
        opts: &SolveOptions,
    ) -> Result<Self, SolveError> {
        if cells.len() != graph.vertex_count() {
            return Err(crate::game::GameError::CellCount {
                expected: graph.vertex_count(),
                got: cells.len(),
            }
            .into());
        }
        let free: Vec<usize> = (0..cells.len()).filter(|&v| cells[v].is_none()).collect();
        if free.len() > opts.budget {
            return Err(SolveError::BudgetExceeded {
                unassigned: free.len(),
                budget: opts.budget,
            });
        }
        // Remaining score is bounded by the edges touching free vertices.
        let touching = graph
            .edges()
            .iter()
            .filter(|&&(a, b)| cells[a].is_none() || cells[b].is_none())
            .count();
        if touching > i16::MAX as usize {
            return Err(SolveError::BudgetExceeded {
                unassigned: free.len(),
                budget: opts.budget,
            });
        }
        let mut slot_of = vec![None; cells.len()];
        for (slot, &v) in free.iter().enumerate() {
            slot_of[v] = Some(slot);
        }
        let pow3: Vec<usize> = (0..free.len()).map(|i| 3usize.pow(i as u32)).collect();
        let size = 3usize.pow(free.len() as u32);
        Ok(Solver {
            graph: graph.clone(),
            root: cells.to_vec(),
            root_to_move: to_move,
            canonical: opts.canonicalize_flips && free.len() == cells.len(),
            slot_of,
            pow3,
            free,
            table: vec![UNKNOWN; size],
            cells: cells
                .iter()
                .map(|c| c.map_or(0, |s| s.value() as i8))
                .collect(),
            nodes: 0,
            hits: 0,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `(nodes expanded, memo hits)` so far.
    pub fn stats(&self) -> (u64, u64) {
        (self.nodes, self.hits)
    }

    /// Value and tie-broken best move of the root.
    pub fn solve_root(&mut self) -> Result<SolveResult, SolveError> {
        let root = self.root.clone();
        let value = self.value_of(&root)?;
        let best = self.best_move(&root)?;
        let (nodes, hits) = self.stats();
        Ok(SolveResult::new(value, best.map(|(m, _)| m), nodes, hits))
    }

    fn locate(&self, cells: &[Cell]) -> Result<(usize, usize, usize), SolveError> {
        if cells.len() != self.root.len() {
            return Err(SolveError::NotDescendant("cell count differs".into()));
        }
        let mut index = 0;
        let mut flip = 0;
        let mut placed = 0;
        for (v, (&c, &r)) in cells.iter().zip(&self.root).enumerate() {
            match (self.slot_of[v], c) {
                (None, c) if c != r => {
                    return Err(SolveError::NotDescendant(format!(
                        "vertex {v} differs from the root"
                    )))
                }
                (None, _) => {}
                (Some(_), None) => {}
                (Some(slot), Some(s)) => {
                    let (d, f) = match s {
                        Sign::Plus => (1, 2),
                        Sign::Minus => (2, 1),
                    };
                    index += d * self.pow3[slot];
                    flip += f * self.pow3[slot];
                    placed += 1;
                }
            }
        }
        Ok((index, flip, placed))
    }

    /// Player to act at a descendant of the root.
    pub fn to_move_at(&self, cells: &[Cell]) -> Result<Role, SolveError> {
        let (_, _, placed) = self.locate(cells)?;
        Ok(self.role_after(placed))
    }

    fn role_after(&self, placed: usize) -> Role {
        if placed.is_multiple_of(2) {
            self.root_to_move
        } else {
            self.root_to_move.other()
        }
    }

    /// Final score under optimal play from a descendant of the root
    /// (including points already banked).
    pub fn value_of(&mut self, cells: &[Cell]) -> Result<i64, SolveError> {
        let (index, flip, placed) = self.locate(cells)?;
        for (slot, c) in self.cells.iter_mut().zip(cells) {
            *slot = c.map_or(0, |s| s.value() as i8);
        }
        let future = self.future(index, flip, placed);
        Ok(completed_score(&self.graph, cells) + i64::from(future))
    }

    /// The first optimal move in (vertex, Plus-before-Minus) order, with its
    /// value. `None` at the end of the game.
    pub fn best_move(&mut self, cells: &[Cell]) -> Result<Option<(Move, i64)>, SolveError> {
        let maximizing = self.to_move_at(cells)? == Role::P;
        let mut child = cells.to_vec();
        let mut best: Option<(Move, i64)> = None;
        for &v in &self.free.clone() {
            if cells[v].is_some() {
                continue;
            }
            for sign in Sign::BOTH {
                child[v] = Some(sign);
                let val = self.value_of(&child)?;
                child[v] = None;
                let better = match best {
                    None => true,
                    Some((_, b)) => {
                        if maximizing {
                            val > b
                        } else {
                            val < b
                        }
                    }
                };
                if better {
                    best = Some((Move::new(v, sign), val));
                }
            }
        }
        Ok(best)
    }

    /// Best moves from `cells` to the end of the game.
    pub fn principal_variation(&mut self, cells: &[Cell]) -> Result<Vec<Move>, SolveError> {
        let mut cur = cells.to_vec();
        let mut line = Vec::new();
        while let Some((mv, _)) = self.best_move(&cur)? {
            cur[mv.vertex] = Some(mv.sign);
            line.push(mv);
        }
        Ok(line)
    }

    fn future(&mut self, index: usize, flip: usize, placed: usize) -> i32 {
        if placed == self.free.len() {
            return 0;
        }
        let key = if self.canonical {
            index.min(flip)
        } else {
            index
        };
        let cached = self.table[key];
        if cached != UNKNOWN {
            self.hits += 1;
            return i32::from(cached);
        }
        self.nodes += 1;
        let maximizing = self.role_after(placed) == Role::P;
        let mut best = if maximizing { i32::MIN } else { i32::MAX };
        for slot in 0..self.free.len() {
            let v = self.free[slot];
            if self.cells[v] != 0 {
                continue;
            }
            let around: i32 = self
                .graph
                .neighbors(v)
                .iter()
                .map(|&u| i32::from(self.cells[u]))
                .sum();
            let p = self.pow3[slot];
            for (sign, d, f) in [(1i8, 1, 2), (-1i8, 2, 1)] {
                self.cells[v] = sign;
                let val =
                    i32::from(sign) * around + self.future(index + d * p, flip + f * p, placed + 1);
                if maximizing {
                    best = best.max(val);
                } else {
                    best = best.min(val);
                }
            }
            self.cells[v] = 0;
        }
        self.table[key] = best as i16;
        best
    }
}
