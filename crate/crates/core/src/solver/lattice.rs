use std::collections::HashMap;

use crate::game::{outcome_from_score, score, Cell, Outcome, Role, Sign};
use crate::graph::Graph;

use super::SolveError;

/// Win/draw/loss minimax: every leaf is mapped to its outcome and the inner
/// nodes only compare outcomes (P prefers PWins > Draw > NWins). Memo keys
/// pack two bits per vertex. Intended for small boards (at most 32
/// vertices and `budget` unassigned ones).
pub fn solve_outcome(
    graph: &Graph,
    cells: &[Cell],
    to_move: Role,
    budget: usize,
) -> Result<Outcome, SolveError> {
    let free = cells.iter().filter(|c| c.is_none()).count();
    if free > budget || cells.len() > 32 {
        return Err(SolveError::BudgetExceeded {
            unassigned: free,
            budget,
        });
    }
    let mut memo = HashMap::new();
    let mut cells = cells.to_vec();
    Ok(search(graph, &mut cells, to_move, &mut memo))
}

fn pack(cells: &[Cell]) -> u64 {
    cells.iter().enumerate().fold(0, |acc, (v, c)| {
        let bits = match c {
            None => 0u64,
            Some(Sign::Plus) => 1,
            Some(Sign::Minus) => 2,
        };
        acc | (bits << (2 * v))
    })
}

fn search(
    graph: &Graph,
    cells: &mut Vec<Cell>,
    to_move: Role,
    memo: &mut HashMap<u64, Outcome>,
) -> Outcome {
    if cells.iter().all(Option::is_some) {
        return outcome_from_score(score(graph, cells).expect("complete"));
    }
    let key = pack(cells);
    if let Some(&o) = memo.get(&key) {
        return o;
    }
    let mut best: Option<Outcome> = None;
    for v in 0..cells.len() {
        if cells[v].is_some() {
            continue;
        }
        for s in Sign::BOTH {
            cells[v] = Some(s);
            let o = search(graph, cells, to_move.other(), memo);
            cells[v] = None;
            best = Some(match best {
                None => o,
                Some(b) => {
                    let prefer_new = match to_move {
                        Role::P => o.rank() > b.rank(),
                        Role::N => o.rank() < b.rank(),
                    };
                    if prefer_new {
                        o
                    } else {
                        b
                    }
                }
            });
        }
    }
    let best = best.expect("at least one free vertex");
    memo.insert(key, best);
    best
}
