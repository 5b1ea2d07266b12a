use crate::game::{Move, Role, Sign};

use super::{SolveError, SolveResult};

const UNKNOWN: i32 = i32::MIN;

fn pairs(x: i64) -> i64 {
    if x < 2 {
        0
    } else {
        x * (x - 1) / 2
    }
}

/// Final score of a complete or complete multipartite graph from the number
/// of Plus vertices in each part.
///
/// One part of size `n` with `a` pluses and `b = n - a` minuses gives
/// `C(a,2) + C(b,2) - ab`. Two or more parts give
/// `sum_{i<j} (2a_i - n_i)(2a_j - n_j)`.
pub fn multipartite_completion_score(
    part_sizes: &[usize],
    plus_counts: &[usize],
) -> Result<i64, SolveError> {
    if part_sizes.is_empty() || part_sizes.len() != plus_counts.len() {
        return Err(SolveError::UnsupportedParts(part_sizes.to_vec()));
    }
    for (part, (&size, &count)) in part_sizes.iter().zip(plus_counts).enumerate() {
        if count > size {
            return Err(SolveError::CountOutOfRange { part, count, size });
        }
    }
    Ok(completion_score(
        part_sizes,
        plus_counts.iter().map(|&a| a as i64),
    ))
}

fn completion_score(part_sizes: &[usize], plus: impl Iterator<Item = i64>) -> i64 {
    if let [n] = part_sizes {
        let a = plus.take(1).sum::<i64>();
        let b = *n as i64 - a;
        return pairs(a) + pairs(b) - a * b;
    }
    // sum_{i<j} x_i x_j = ((sum x)^2 - sum x^2) / 2
    let (sum, squares) = part_sizes
        .iter()
        .zip(plus)
        .map(|(&n, a)| 2 * a - n as i64)
        .fold((0, 0), |(s, q), x| (s + x, q + x * x));
    (sum * sum - squares) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountsOptions {
    /// Largest dense table (in entries) the solver will allocate.
    pub state_limit: u128,
}

impl Default for CountsOptions {
    fn default() -> Self {
        CountsOptions {
            state_limit: 20_000_000,
        }
    }
}

/// Minimax over per-part `(plus, minus)` counts.
///
/// Every vertex of a part has the same neighbourhood outside the part, so a
/// position is determined up to automorphism by how many of each sign every
/// part holds. Concrete moves are reported on the lowest unassigned vertex of
/// the chosen part, assuming each part is filled in index order.
pub struct CountsSolver {
    parts: Vec<usize>,
    offsets: Vec<usize>,
    radix: Vec<usize>,
    first_role: Role,
    table: Vec<i32>,
    counts: Vec<(usize, usize)>,
    nodes: u64,
    hits: u64,
}

impl CountsSolver {
    pub fn new(
        part_sizes: &[usize],
        first_role: Role,
        opts: &CountsOptions,
    ) -> Result<Self, SolveError> {
        if part_sizes.is_empty() || part_sizes.len() > 4 || part_sizes.contains(&0) {
            return Err(SolveError::UnsupportedParts(part_sizes.to_vec()));
        }
        let states: u128 = part_sizes
            .iter()
            .map(|&n| (n as u128 + 1) * (n as u128 + 1))
            .product();
        if states > opts.state_limit {
            return Err(SolveError::StateLimit {
                states,
                limit: opts.state_limit,
            });
        }
        let mut radix = Vec::with_capacity(part_sizes.len());
        let mut acc = 1;
        for &n in part_sizes {
            radix.push(acc);
            acc *= (n + 1) * (n + 1);
        }
        let offsets = part_sizes
            .iter()
            .scan(0, |off, &n| {
                let here = *off;
                *off += n;
                Some(here)
            })
            .collect();
        Ok(CountsSolver {
            parts: part_sizes.to_vec(),
            offsets,
            radix,
            first_role,
            table: vec![UNKNOWN; states as usize],
            counts: vec![(0, 0); part_sizes.len()],
            nodes: 0,
            hits: 0,
        })
    }

    fn digit(&self, part: usize, (plus, minus): (usize, usize)) -> usize {
        (plus * (self.parts[part] + 1) + minus) * self.radix[part]
    }

    fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Value (P's perspective) of the position with the given per-part
    /// counts.
    pub fn value_at(&mut self, counts: &[(usize, usize)]) -> Result<i64, SolveError> {
        if counts.len() != self.parts.len() {
            return Err(SolveError::UnsupportedParts(self.parts.clone()));
        }
        for (part, (&(p, m), &size)) in counts.iter().zip(&self.parts).enumerate() {
            if p + m > size {
                return Err(SolveError::CountOutOfRange {
                    part,
                    count: p + m,
                    size,
                });
            }
        }
        self.counts.copy_from_slice(counts);
        let index = (0..counts.len()).map(|i| self.digit(i, counts[i])).sum();
        let assigned = counts.iter().map(|&(p, m)| p + m).sum();
        Ok(i64::from(self.value(index, assigned)))
    }

    fn value(&mut self, index: usize, assigned: usize) -> i32 {
        if assigned == self.total() {
            let score = completion_score(&self.parts, self.counts.iter().map(|&(p, _)| p as i64));
            return score as i32;
        }
        let cached = self.table[index];
        if cached != UNKNOWN {
            self.hits += 1;
            return cached;
        }
        self.nodes += 1;
        let maximizing = self.role_after(assigned) == Role::P;
        let mut best = if maximizing { i32::MIN } else { i32::MAX };
        for part in 0..self.parts.len() {
            let (p, m) = self.counts[part];
            if p + m == self.parts[part] {
                continue;
            }
            let base = index - self.digit(part, (p, m));
            for next in [(p + 1, m), (p, m + 1)] {
                self.counts[part] = next;
                let val = self.value(base + self.digit(part, next), assigned + 1);
                best = if maximizing {
                    best.max(val)
                } else {
                    best.min(val)
                };
            }
            self.counts[part] = (p, m);
        }
        self.table[index] = best;
        best
    }

    fn role_after(&self, assigned: usize) -> Role {
        if assigned.is_multiple_of(2) {
            self.first_role
        } else {
            self.first_role.other()
        }
    }

    /// Solves the empty board. The best move is the first optimal one in
    /// (part, Plus-before-Minus) order, played on the part's lowest vertex.
    pub fn solve_fresh(&mut self) -> Result<SolveResult, SolveError> {
        let zero = vec![(0, 0); self.parts.len()];
        let value = self.value_at(&zero)?;
        let maximizing = self.first_role == Role::P;
        let mut best: Option<(Move, i64)> = None;
        for part in 0..self.parts.len() {
            for (sign, counts) in [(Sign::Plus, (1, 0)), (Sign::Minus, (0, 1))] {
                let mut child = zero.clone();
                child[part] = counts;
                let val = self.value_at(&child)?;
                let better = best.is_none_or(|(_, b)| if maximizing { val > b } else { val < b });
                if better {
                    best = Some((Move::new(self.offsets[part], sign), val));
                }
            }
        }
        debug_assert_eq!(best.map(|(_, v)| v), Some(value));
        Ok(SolveResult::new(
            value,
            best.map(|(m, _)| m),
            self.nodes,
            self.hits,
        ))
    }
}

/// Solves a fresh complete (one part) or complete multipartite board.
pub fn solve_counts(
    part_sizes: &[usize],
    first_role: Role,
    opts: &CountsOptions,
) -> Result<SolveResult, SolveError> {
    CountsSolver::new(part_sizes, first_role, opts)?.solve_fresh()
}
