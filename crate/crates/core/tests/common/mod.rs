#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use signgame_core::reductions::{
    cancel_bipartite_pair, cancel_opposite_leaves, open_cycle, split_path_at_assigned, Position,
    Reduction,
};
use signgame_core::solver::Solver;
use signgame_core::{build_family, Cell, FamilySpec, Role, Sign, SolveOptions};

pub const RULES: [&str; 4] = ["star-leaves", "path-split", "cycle-open", "bipartite-pair"];

fn random_sign(rng: &mut StdRng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn sprinkle(rng: &mut StdRng, cells: &mut [Cell], p: f64) {
    for c in cells.iter_mut() {
        if c.is_none() && rng.gen_bool(p) {
            *c = Some(random_sign(rng));
        }
    }
}

fn position(spec: FamilySpec, cells: Vec<Cell>) -> Position {
    Position::new(build_family(&spec).unwrap(), cells).unwrap()
}

/// A random applicable instance of reduction `rule` (index into [`RULES`]),
/// with at most 12 unassigned vertices.
pub fn random_reduction(rng: &mut StdRng, rule: usize) -> (Position, Reduction) {
    match rule {
        0 => {
            let k = rng.gen_range(2..=12);
            let mut cells = vec![None; k + 1];
            let a = rng.gen_range(1..=k);
            let mut b = rng.gen_range(1..=k);
            while b == a {
                b = rng.gen_range(1..=k);
            }
            let s = random_sign(rng);
            cells[a] = Some(s);
            cells[b] = Some(s.flip());
            sprinkle(rng, &mut cells, 0.3);
            let pos = position(FamilySpec::Star(k), cells);
            let red = cancel_opposite_leaves(&pos, a, b).unwrap();
            (pos, red)
        }
        1 => {
            let n = rng.gen_range(3..=13);
            let i = rng.gen_range(1..n - 1);
            let mut cells = vec![None; n];
            cells[i] = Some(random_sign(rng));
            sprinkle(rng, &mut cells, 0.25);
            let pos = position(FamilySpec::Path(n), cells);
            let red = split_path_at_assigned(&pos, i).unwrap();
            (pos, red)
        }
        2 => {
            let n = rng.gen_range(3..=13);
            let v = rng.gen_range(0..n);
            let mut cells = vec![None; n];
            cells[v] = Some(random_sign(rng));
            sprinkle(rng, &mut cells, 0.25);
            let pos = position(FamilySpec::Cycle(n), cells);
            let red = open_cycle(&pos, v).unwrap();
            (pos, red)
        }
        _ => {
            let parts = loop {
                let m = rng.gen_range(1..=7);
                let n = rng.gen_range(1..=7);
                if m.max(n) >= 2 && m + n <= 14 {
                    break vec![m, n];
                }
            };
            let part = if parts[0] >= 2 && (parts[1] < 2 || rng.gen_bool(0.5)) {
                0
            } else {
                1
            };
            let start = if part == 0 { 0 } else { parts[0] };
            let size = parts[part];
            let u = start + rng.gen_range(0..size);
            let mut v = start + rng.gen_range(0..size);
            while v == u {
                v = start + rng.gen_range(0..size);
            }
            let total = parts[0] + parts[1];
            let mut cells = vec![None; total];
            let s = random_sign(rng);
            cells[u] = Some(s);
            cells[v] = Some(s.flip());
            sprinkle(rng, &mut cells, 0.2);
            let pos = position(FamilySpec::CompleteMultipartite(parts.clone()), cells);
            let (red, _) = cancel_bipartite_pair(&pos, &parts, u, v).unwrap();
            (pos, red)
        }
    }
}

/// Exact value (including points already on the board) with `to_move` to
/// act.
pub fn position_value(pos: &Position, to_move: Role) -> i64 {
    let mut solver =
        Solver::new(&pos.graph, &pos.cells, to_move, &SolveOptions::default()).unwrap();
    solver.value_of(&pos.cells).unwrap()
}

pub fn flipped(cells: &[Cell]) -> Vec<Cell> {
    cells.iter().map(|c| c.map(Sign::flip)).collect()
}
