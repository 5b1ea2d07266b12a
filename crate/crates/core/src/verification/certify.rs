use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::family::{build_family, FamilySpec};
use crate::game::{GameConfig, Role};
use crate::solver::SolveOptions;
use crate::strategies::{evaluate_strategy, StrategyKind};

use super::VerificationReport;

/// What a policy is claimed to secure for its side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    /// A strict win for the role.
    Win(Role),
    /// At least a draw for the role.
    NoLoss(Role),
}

impl Bound {
    pub fn holds(self, value: i64) -> bool {
        match self {
            Bound::Win(Role::P) => value > 0,
            Bound::Win(Role::N) => value < 0,
            Bound::NoLoss(Role::P) => value >= 0,
            Bound::NoLoss(Role::N) => value <= 0,
        }
    }

    pub fn describe(self) -> String {
        match self {
            Bound::Win(Role::P) => "value >= 1".into(),
            Bound::Win(Role::N) => "value <= -1".into(),
            Bound::NoLoss(Role::P) => "value >= 0".into(),
            Bound::NoLoss(Role::N) => "value <= 0".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub spec: FamilySpec,
    pub first_role: Role,
    pub kind: StrategyKind,
    pub operated_role: Role,
    pub bound: Bound,
}

impl Certification {
    fn instance(&self) -> String {
        format!(
            "{} first={} {} by {}",
            self.spec, self.first_role, self.kind, self.operated_role
        )
    }
}

/// The policy claims, on boards with at most `max_vertices` vertices
/// (capped at 8).
pub fn certifications(max_vertices: usize) -> Vec<Certification> {
    let top = max_vertices.min(8);
    let mut out = Vec::new();
    // Opposite-sign mirroring wins K_n for N, except K_4 when N moves first.
    for n in 3..=top {
        for first in [Role::P, Role::N] {
            if first == Role::N && n == 4 {
                continue;
            }
            out.push(Certification {
                spec: FamilySpec::Complete(n),
                first_role: first,
                kind: StrategyKind::MirrorOppositeSign,
                operated_role: Role::N,
                bound: Bound::Win(Role::N),
            });
        }
    }
    if top >= 4 {
        out.push(Certification {
            spec: FamilySpec::Complete(4),
            first_role: Role::N,
            kind: StrategyKind::MirrorSameSign,
            operated_role: Role::P,
            bound: Bound::NoLoss(Role::P),
        });
    }
    // Cross-part mirroring by N as the second mover holds P to a draw when
    // a side is even.
    for m in 1..top {
        for n in 1..=top - m {
            if m % 2 == 1 && n % 2 == 1 {
                continue;
            }
            out.push(Certification {
                spec: FamilySpec::CompleteMultipartite(vec![m, n]),
                first_role: Role::P,
                kind: StrategyKind::BipartiteCrossMirror,
                operated_role: Role::N,
                bound: Bound::NoLoss(Role::N),
            });
        }
    }
    // Same-part mirroring wins K_{3,3} for whoever moves second.
    if top >= 6 {
        for first in [Role::P, Role::N] {
            out.push(Certification {
                spec: FamilySpec::CompleteMultipartite(vec![3, 3]),
                first_role: first,
                kind: StrategyKind::BipartiteSamePartMirror,
                operated_role: first.other(),
                bound: Bound::Win(first.other()),
            });
        }
    }
    out
}

/// Evaluates every certification exactly. A failed bound means this
/// lowest-index instantiation of the policy does not achieve the claim; a
/// policy beating the solver's optimum means the evaluator is broken.
pub fn verify_strategies(max_vertices: usize) -> VerificationReport {
    let started = Instant::now();
    let certs = certifications(max_vertices);
    let results: Vec<_> = certs
        .par_iter()
        .map(|c| {
            let graph = build_family(&c.spec).expect("valid spec");
            let parts = c.spec.part_sizes();
            let parts = if c.kind.needs_parts() {
                parts.as_deref()
            } else {
                None
            };
            evaluate_strategy(
                &graph,
                GameConfig::new(c.first_role),
                c.kind,
                c.operated_role,
                parts,
                &SolveOptions::default(),
            )
        })
        .collect();
    let mut report = VerificationReport::new("strategies");
    for (c, r) in certs.iter().zip(results) {
        report.cases_checked += 1;
        match r {
            Err(e) => report.fail(c.instance(), c.bound.describe(), format!("error: {e}")),
            Ok(r) if !r.respects_optimum() => report.fail(
                c.instance(),
                format!("no better than optimal value {}", r.optimal_value),
                format!("guaranteed value {}", r.guaranteed_value),
            ),
            Ok(r) if !c.bound.holds(r.guaranteed_value) => report.fail(
                c.instance(),
                c.bound.describe(),
                format!(
                    "instantiation failed: guaranteed value {}",
                    r.guaranteed_value
                ),
            ),
            Ok(_) => {}
        }
    }
    report.finish(started)
}
