use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::family::{build_family, FamilySpec};
use crate::game::{
    cells_from_str, cells_to_string, score, GameConfig, GameState, Move, Role, Sign,
};
use crate::solver::{solve, SolveOptions};

use super::VerificationReport;

/// One equivalence class of complete `P_5` assignments under reversal and
/// global sign flip.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct P5Class {
    /// Lexicographically smallest member, written with `+` and `-`.
    pub representative: String,
    pub members: Vec<String>,
    pub score: i64,
}

fn flip(s: &str) -> String {
    s.chars()
        .map(|c| if c == '+' { '-' } else { '+' })
        .collect()
}

fn canonical(s: &str) -> String {
    let r: String = s.chars().rev().collect();
    [flip(s), flip(&r), r, s.to_string()]
        .into_iter()
        .min()
        .expect("non-empty")
}

/// All 32 assignments grouped into classes, sorted by representative.
pub fn p5_classes() -> Vec<P5Class> {
    let g = build_family(&FamilySpec::Path(5)).expect("valid");
    let mut by_rep: BTreeMap<String, P5Class> = BTreeMap::new();
    for mask in 0u32..32 {
        let cells: Vec<_> = (0..5)
            .map(|v| {
                Some(if mask >> v & 1 == 0 {
                    Sign::Plus
                } else {
                    Sign::Minus
                })
            })
            .collect();
        let text = cells_to_string(&cells);
        let s = score(&g, &cells).expect("complete");
        let rep = canonical(&text);
        let class = by_rep.entry(rep.clone()).or_insert_with(|| P5Class {
            representative: rep,
            members: Vec::new(),
            score: s,
        });
        assert_eq!(class.score, s, "reversal and flip preserve the score");
        class.members.push(text);
    }
    by_rep.into_values().collect()
}

const POSITIVE: [&str; 3] = ["+++++", "++++-", "+++--"];
const NEGATIVE: [&str; 3] = ["++-+-", "+-++-", "+-+-+"];

/// The classification of `P_5` assignments, and the opening claims: after
/// both ends are signed in the first two moves, opposite end signs let the
/// first mover win for their own role, while equal end signs let the second
/// mover stop that. Both role configurations are checked separately.
pub fn verify_p5_lemma() -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new("p5");
    let classes = p5_classes();

    let reps = |list: &[&str]| {
        let mut v: Vec<String> = list.iter().map(|s| canonical(s)).collect();
        v.sort();
        v
    };
    let pick = |pred: fn(i64) -> bool| {
        classes
            .iter()
            .filter(|c| pred(c.score))
            .map(|c| c.representative.clone())
            .collect::<Vec<_>>()
    };
    for (label, want, got) in [
        ("positive classes", reps(&POSITIVE), pick(|s| s > 0)),
        ("negative classes", reps(&NEGATIVE), pick(|s| s < 0)),
    ] {
        report.cases_checked += 1;
        if want != got {
            report.fail(label, format!("{want:?}"), format!("{got:?}"));
        }
    }
    for pattern in POSITIVE.iter().chain(&NEGATIVE) {
        report.cases_checked += 1;
        let cells = cells_from_str(pattern).expect("pattern");
        let g = build_family(&FamilySpec::Path(5)).expect("valid");
        let s = score(&g, &cells).expect("complete");
        let positive = POSITIVE.contains(pattern);
        if (positive && s <= 0) || (!positive && s >= 0) {
            report.fail(
                *pattern,
                if positive { "> 0" } else { "< 0" },
                format!("{s}"),
            );
        }
    }
    let zero = classes.iter().filter(|c| c.score == 0).count();
    report.cases_checked += 1;
    if zero + 6 != classes.len() {
        report.fail(
            "remaining classes",
            "all score 0",
            format!("{zero} of {} zero", classes.len() - 6),
        );
    }

    let g = build_family(&FamilySpec::Path(5)).expect("valid");
    for first in [Role::P, Role::N] {
        let mut summary = BTreeMap::new();
        for (a, b) in [(0, 4), (4, 0)] {
            for sa in Sign::BOTH {
                for sb in Sign::BOTH {
                    let moves = [Move::new(a, sa), Move::new(b, sb)];
                    let state = GameState::from_moves(g.clone(), GameConfig::new(first), &moves)
                        .expect("legal");
                    let value = solve(&state, &SolveOptions::default())
                        .expect("small")
                        .value;
                    let got = crate::game::outcome_from_score(value);
                    let opposite = sa != sb;
                    let ok = if opposite {
                        got == first.wins()
                    } else {
                        got != first.wins()
                    };
                    report.cases_checked += 1;
                    let instance = format!(
                        "P5 first={first} v{}={} v{}={}",
                        a + 1,
                        sa.symbol(),
                        b + 1,
                        sb.symbol()
                    );
                    if !ok {
                        let want = if opposite {
                            first.wins().describe().to_string()
                        } else {
                            format!("not {}", first.wins().describe())
                        };
                        report.fail(
                            instance,
                            want,
                            format!("{} (value {value})", got.describe()),
                        );
                    }
                    summary
                        .entry(if opposite {
                            "opposite ends"
                        } else {
                            "equal ends"
                        })
                        .or_insert_with(Vec::new)
                        .push(value);
                }
            }
        }
        for (kind, values) in summary {
            report.findings.push(format!(
                "first={first}, {kind}: values after optimal play {values:?}"
            ));
        }
    }
    report.finish(started)
}
