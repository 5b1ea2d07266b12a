use std::time::Instant;

use crate::family::{build_family, FamilySpec};
use crate::game::{Cell, GameConfig, GameState, Move, Role, Sign};
use crate::graph::Graph;
use crate::solver::multipartite_completion_score;

use super::VerificationReport;

fn choose2(x: i64) -> i64 {
    x * (x - 1) / 2
}

fn cells_of(mask: u32, n: usize) -> Vec<Cell> {
    (0..n)
        .map(|v| {
            Some(if mask >> v & 1 == 1 {
                Sign::Plus
            } else {
                Sign::Minus
            })
        })
        .collect()
}

/// Score obtained by actually playing the assignment in vertex order, so
/// the banking path of the engine is exercised rather than the edge sum.
fn played_score(graph: &Graph, cells: &[Cell]) -> i64 {
    let mut state = GameState::new(graph.clone(), GameConfig::new(Role::P));
    for (v, c) in cells.iter().enumerate() {
        state
            .play(Move::new(v, c.expect("complete assignment")))
            .expect("legal");
    }
    state.final_score().expect("finished")
}

/// Every complete assignment of `K_n` for `2 <= n <= n_max` against
/// `C(a,2) + C(b,2) - ab`, and against `(r^2 - r)/2 - b` with `r = a - b`
/// after relabelling so that `a >= b`.
pub fn verify_formula_complete(n_max: usize) -> VerificationReport {
    assert!(n_max <= 16, "sweep is exhaustive over 2^n assignments");
    let started = Instant::now();
    let mut report = VerificationReport::new("complete-formula");
    for n in 2..=n_max {
        let g = build_family(&FamilySpec::Complete(n)).expect("valid");
        for mask in 0u32..1 << n {
            let cells = cells_of(mask, n);
            let engine = played_score(&g, &cells);
            let a = i64::from(mask.count_ones());
            let b = n as i64 - a;
            let formula = choose2(a) + choose2(b) - a * b;
            let counted = multipartite_completion_score(&[n], &[a as usize]).expect("in range");
            let (hi, lo) = (a.max(b), a.min(b));
            let r = hi - lo;
            let identity = (r * r - r) / 2 - lo;
            report.cases_checked += 1;
            if engine != formula || counted != formula || identity != formula {
                report.fail(
                    format!("K{n} a={a} b={b}"),
                    format!("{formula}"),
                    format!("engine {engine}, counts {counted}, identity {identity}"),
                );
            }
        }
    }
    report.finish(started)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultipartiteBounds {
    /// Largest side of the `K_{m,n}` boards.
    pub bipartite_max: usize,
    /// Largest part of the `K_{l,m,n}` boards.
    pub tripartite_max: usize,
}

impl Default for MultipartiteBounds {
    fn default() -> Self {
        MultipartiteBounds {
            bipartite_max: 5,
            tripartite_max: 3,
        }
    }
}

/// Every complete assignment of every `K_{m,n}` and `K_{l,m,n}` in bounds:
/// bipartite boards against `(2a - m)(2b - n)`, and all of them against the
/// pairwise-product sum.
pub fn verify_formula_multipartite(bounds: MultipartiteBounds) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new("multipartite-formula");
    let mut shapes: Vec<Vec<usize>> = Vec::new();
    for m in 1..=bounds.bipartite_max {
        for n in 1..=bounds.bipartite_max {
            shapes.push(vec![m, n]);
        }
    }
    let t = bounds.tripartite_max;
    for l in 1..=t {
        for m in 1..=t {
            for n in 1..=t {
                shapes.push(vec![l, m, n]);
            }
        }
    }
    for parts in shapes {
        let total: usize = parts.iter().sum();
        let g = build_family(&FamilySpec::CompleteMultipartite(parts.clone())).expect("valid");
        for mask in 0u32..1 << total {
            let cells = cells_of(mask, total);
            let engine = played_score(&g, &cells);
            let mut plus = Vec::with_capacity(parts.len());
            let mut start = 0;
            for &size in &parts {
                plus.push(((mask >> start) & ((1 << size) - 1)).count_ones() as usize);
                start += size;
            }
            let centered: Vec<i64> = parts
                .iter()
                .zip(&plus)
                .map(|(&size, &a)| 2 * a as i64 - size as i64)
                .collect();
            let mut pairwise = 0;
            for i in 0..centered.len() {
                for j in i + 1..centered.len() {
                    pairwise += centered[i] * centered[j];
                }
            }
            let counted = multipartite_completion_score(&parts, &plus).expect("in range");
            report.cases_checked += 1;
            if engine != pairwise || counted != pairwise {
                report.fail(
                    format!("K{} plus={plus:?}", join(&parts)),
                    format!("{pairwise}"),
                    format!("engine {engine}, counts {counted}"),
                );
            }
        }
    }
    report.finish(started)
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_sweep_counts() {
        let r = verify_formula_complete(10);
        assert!(r.passed(), "{r}");
        assert_eq!(r.cases_checked, (2..=10).map(|n| 1u64 << n).sum::<u64>());
    }

    #[test]
    fn known_values() {
        assert_eq!(choose2(2) + choose2(2) - 4, -2);
        let g = build_family(&FamilySpec::Complete(2)).unwrap();
        assert_eq!(played_score(&g, &cells_of(0b11, 2)), 1);
        let k22 = build_family(&FamilySpec::CompleteMultipartite(vec![2, 2])).unwrap();
        // One plus in the first part zeroes its factor.
        for second in 0..4u32 {
            assert_eq!(played_score(&k22, &cells_of(0b01 | second << 2, 4)), 0);
        }
        let k15 = build_family(&FamilySpec::CompleteMultipartite(vec![1, 5])).unwrap();
        assert_eq!(played_score(&k15, &cells_of(0b111111, 6)), 5);
    }

    #[test]
    fn multipartite_sweep() {
        let r = verify_formula_multipartite(MultipartiteBounds {
            bipartite_max: 3,
            tripartite_max: 2,
        });
        assert!(r.passed(), "{r}");
    }
}
