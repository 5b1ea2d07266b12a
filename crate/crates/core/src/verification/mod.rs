//! Sweeps that check the engine and the solvers against the known results
//! for each graph family.
//!
//! Every sweep returns a [`VerificationReport`]; a report passes when it has
//! no failures. Claims are encoded as data in [`expected_outcome`], separately
//! from the checking loops. Outcome sweeps take an [`Evaluator`] so tests can
//! substitute a deliberately broken one and confirm the sweep notices.

mod certify;
mod conjecture;
mod expected;
mod formulas;
mod p5;

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{build_family, FamilySpec};
use crate::game::{outcome_from_score, GameConfig, GameState, Role};
use crate::solver::{solve, solve_counts, CountsOptions, SolveError, SolveOptions, DEFAULT_BUDGET};

pub use certify::{certifications, verify_strategies, Bound, Certification};
pub use conjecture::{explore_conjecture, ConjectureRow, ConjectureTable};
pub use expected::{conjecture_case, expected_outcome, ConjectureCase, ExpectedOutcome};
pub use formulas::{verify_formula_complete, verify_formula_multipartite, MultipartiteBounds};
pub use p5::{p5_classes, verify_p5_lemma, P5Class};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub instance: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    #[serde(rename = "cases")]
    pub cases_checked: u64,
    pub failures: Vec<Failure>,
    /// Instances not checked (over budget or without a known result).
    #[serde(default)]
    pub skipped: Vec<String>,
    /// Non-fatal observations, such as conjecture mismatches.
    #[serde(default)]
    pub findings: Vec<String>,
    #[serde(default)]
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn new(theorem: impl Into<String>) -> Self {
        VerificationReport {
            theorem: theorem.into(),
            cases_checked: 0,
            failures: Vec::new(),
            skipped: Vec::new(),
            findings: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fail(
        &mut self,
        instance: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
    ) {
        self.failures.push(Failure {
            instance: instance.into(),
            expected: expected.into(),
            got: got.into(),
        });
    }

    pub fn elapsed(&self) -> Duration {
        Duration::from_millis(self.elapsed_ms)
    }

    pub(crate) fn finish(mut self, started: Instant) -> Self {
        self.elapsed_ms = started.elapsed().as_millis() as u64;
        self
    }

    /// Same report with timing zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<22} {:>8} cases  {:>4} failures  {:>3} skipped  {:>7} ms  {}",
            self.theorem,
            self.cases_checked,
            self.failures.len(),
            self.skipped.len(),
            self.elapsed_ms,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for x in &self.failures {
            writeln!(
                f,
                "    FAIL {}: expected {}, got {}",
                x.instance, x.expected, x.got
            )?;
        }
        for s in &self.findings {
            writeln!(f, "    note {s}")?;
        }
        Ok(())
    }
}

/// Exact value (P's perspective) of a fresh board.
pub trait Evaluator: Sync {
    fn value(&self, spec: &FamilySpec, first_role: Role) -> Result<i64, SolveError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Counts solver for complete/multipartite boards over the budget,
    /// general solver otherwise.
    Auto,
    General,
    Counts,
}

#[derive(Debug, Clone, Copy)]
pub struct ExactEvaluator {
    pub method: Method,
    pub budget: usize,
    pub counts: CountsOptions,
}

impl ExactEvaluator {
    pub fn new(method: Method) -> Self {
        ExactEvaluator {
            method,
            budget: DEFAULT_BUDGET,
            counts: CountsOptions::default(),
        }
    }
}

impl Default for ExactEvaluator {
    fn default() -> Self {
        ExactEvaluator::new(Method::Auto)
    }
}

impl Evaluator for ExactEvaluator {
    fn value(&self, spec: &FamilySpec, first_role: Role) -> Result<i64, SolveError> {
        let counts = match self.method {
            Method::General => false,
            Method::Counts => true,
            Method::Auto => spec.part_sizes().is_some() && spec.vertex_count() > self.budget,
        };
        if counts {
            let parts = spec
                .part_sizes()
                .ok_or_else(|| SolveError::UnsupportedParts(Vec::new()))?;
            return Ok(solve_counts(&parts, first_role, &self.counts)?.value);
        }
        let graph = build_family(spec).map_err(|e| SolveError::NotDescendant(e.to_string()))?;
        let state = GameState::new(graph, GameConfig::new(first_role));
        Ok(solve(&state, &SolveOptions::with_budget(self.budget))?.value)
    }
}

/// Mutation used to show the sweeps are not vacuous: negates every value.
pub struct SignFlipped<E>(pub E);

impl<E: Evaluator> Evaluator for SignFlipped<E> {
    fn value(&self, spec: &FamilySpec, first_role: Role) -> Result<i64, SolveError> {
        self.0.value(spec, first_role).map(|v| -v)
    }
}

enum Checked {
    Pass,
    Fail(Failure),
    Finding(String),
    Skip(String),
}

/// Compares the sign of the exact value with [`expected_outcome`] for every
/// spec under both first roles.
pub fn verify_outcomes(
    theorem: &str,
    specs: &[FamilySpec],
    eval: &dyn Evaluator,
) -> VerificationReport {
    let started = Instant::now();
    let cases: Vec<(&FamilySpec, Role)> = specs
        .iter()
        .flat_map(|s| [(s, Role::P), (s, Role::N)])
        .collect();
    let checked: Vec<Checked> = cases
        .par_iter()
        .map(|&(spec, role)| check_outcome(spec, role, eval))
        .collect();
    let mut report = VerificationReport::new(theorem);
    for c in checked {
        match c {
            Checked::Pass => report.cases_checked += 1,
            Checked::Fail(f) => {
                report.cases_checked += 1;
                report.failures.push(f);
            }
            Checked::Finding(s) => {
                report.cases_checked += 1;
                report.findings.push(s);
            }
            Checked::Skip(s) => report.skipped.push(s),
        }
    }
    report.finish(started)
}

fn check_outcome(spec: &FamilySpec, role: Role, eval: &dyn Evaluator) -> Checked {
    let instance = format!("{spec} first={role}");
    let claim = expected_outcome(spec, role);
    let Some(want) = claim.resolve(role) else {
        return Checked::Skip(format!("{instance}: no known result"));
    };
    let value = match eval.value(spec, role) {
        Ok(v) => v,
        Err(e) => return Checked::Skip(format!("{instance}: {e}")),
    };
    let got = outcome_from_score(value);
    if got == want {
        Checked::Pass
    } else if claim.is_conjecture() {
        Checked::Finding(format!(
            "{instance}: claimed {}, solver gives {} (value {value})",
            want.describe(),
            got.describe()
        ))
    } else {
        Checked::Fail(Failure {
            instance,
            expected: want.describe().to_string(),
            got: format!("{} (value {value})", got.describe()),
        })
    }
}

pub fn complete_specs(range: std::ops::RangeInclusive<usize>) -> Vec<FamilySpec> {
    range.map(FamilySpec::Complete).collect()
}

pub fn star_specs(range: std::ops::RangeInclusive<usize>) -> Vec<FamilySpec> {
    range.map(FamilySpec::Star).collect()
}

pub fn path_specs(range: std::ops::RangeInclusive<usize>) -> Vec<FamilySpec> {
    range.map(FamilySpec::Path).collect()
}

pub fn cycle_specs(range: std::ops::RangeInclusive<usize>) -> Vec<FamilySpec> {
    range.map(FamilySpec::Cycle).collect()
}

/// All `K_{m,n}` with `m, n >= 1`, `m, n <= side_max` and `m + n <= total_max`.
pub fn bipartite_specs(side_max: usize, total_max: usize) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for m in 1..=side_max {
        for n in 1..=side_max {
            if m + n <= total_max {
                out.push(FamilySpec::CompleteMultipartite(vec![m, n]));
            }
        }
    }
    out
}

/// Every multiset of leaf counts (listed in non-increasing order) with at
/// most `max_components` stars and at most `max_vertices` vertices in total.
pub fn star_forest_specs(max_components: usize, max_vertices: usize) -> Vec<FamilySpec> {
    fn extend(
        current: &mut Vec<usize>,
        cap: usize,
        room: usize,
        max_components: usize,
        out: &mut Vec<FamilySpec>,
    ) {
        if !current.is_empty() {
            out.push(FamilySpec::StarForest(current.clone()));
        }
        if current.len() == max_components {
            return;
        }
        // A star with l leaves takes l + 1 vertices.
        for leaves in (1..=cap.min(room.saturating_sub(1))).rev() {
            current.push(leaves);
            extend(current, leaves, room - leaves - 1, max_components, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(
        &mut Vec::new(),
        max_vertices,
        max_vertices,
        max_components,
        &mut out,
    );
    out.sort_by(|a, b| (a.vertex_count(), a.to_string()).cmp(&(b.vertex_count(), b.to_string())));
    out
}

/// Exact values of paths: zero for odd length, and a one-point win for the
/// second mover for even length.
pub fn verify_path_exact(n_max: usize) -> VerificationReport {
    verify_path_exact_with(n_max, &ExactEvaluator::new(Method::General))
}

pub fn verify_path_exact_with(n_max: usize, eval: &dyn Evaluator) -> VerificationReport {
    let started = Instant::now();
    let cases: Vec<(usize, Role)> = (2..=n_max)
        .flat_map(|n| [(n, Role::P), (n, Role::N)])
        .collect();
    let results: Vec<_> = cases
        .par_iter()
        .map(|&(n, role)| (n, role, eval.value(&FamilySpec::Path(n), role)))
        .collect();
    let mut report = VerificationReport::new("paths-exact");
    for (n, role, value) in results {
        let instance = format!("P{n} first={role}");
        let value = match value {
            Ok(v) => v,
            Err(e) => {
                report.skipped.push(format!("{instance}: {e}"));
                continue;
            }
        };
        report.cases_checked += 1;
        let want = if n % 2 == 1 {
            0
        } else {
            match role.other() {
                Role::P => 1,
                Role::N => -1,
            }
        };
        if value != want {
            report.fail(instance, format!("value {want}"), format!("value {value}"));
        }
    }
    report.finish(started)
}

/// Suite names accepted by [`run_suite`], in run order.
pub const SUITES: [&str; 11] = [
    "complete-formula",
    "multipartite-formula",
    "complete",
    "stars",
    "star-forests",
    "bipartite",
    "paths",
    "cycles",
    "p5",
    "strategies",
    "conjecture",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{0}` (expected all or one of: {list})", list = SUITES.join(", "))]
pub struct UnknownSuite(pub String);

/// Runs one named suite (or `all`). `max` caps the vertex count of
/// instances handed to the general solver and the formula sweeps; the
/// counts-solver ranges are unaffected.
pub fn run_suite(name: &str, max: Option<usize>) -> Result<Vec<VerificationReport>, UnknownSuite> {
    if name == "all" {
        return Ok(SUITES
            .iter()
            .flat_map(|s| run_suite(s, max).expect("known suite"))
            .collect());
    }
    let cap = |default: usize| max.map_or(default, |m| m.min(default));
    let general = ExactEvaluator::new(Method::General);
    let counts = ExactEvaluator::new(Method::Counts);
    let reports = match name {
        "complete-formula" => vec![verify_formula_complete(cap(10))],
        "multipartite-formula" => vec![verify_formula_multipartite(MultipartiteBounds {
            bipartite_max: cap(5),
            tripartite_max: cap(3),
        })],
        "complete" => vec![
            verify_outcomes("complete", &complete_specs(2..=cap(10)), &general),
            verify_outcomes("complete-counts", &complete_specs(2..=300), &counts),
        ],
        "stars" => vec![verify_outcomes(
            "stars",
            &star_specs(1..=cap(13) - 1),
            &general,
        )],
        "star-forests" => vec![verify_outcomes(
            "star-forests",
            &star_forest_specs(4, cap(13)),
            &general,
        )],
        "bipartite" => vec![
            verify_outcomes("bipartite", &bipartite_specs(cap(12), cap(12)), &general),
            verify_outcomes("bipartite-counts", &bipartite_specs(30, 60), &counts),
        ],
        "paths" => vec![
            verify_outcomes("paths", &path_specs(2..=cap(14)), &general),
            verify_path_exact(cap(14)),
        ],
        "cycles" => vec![verify_outcomes(
            "cycles",
            &cycle_specs(3..=cap(14)),
            &general,
        )],
        "p5" => vec![verify_p5_lemma()],
        "strategies" => vec![verify_strategies(cap(8))],
        "conjecture" => vec![explore_conjecture(10).to_report()],
        other => return Err(UnknownSuite(other.to_string())),
    };
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Outcome;

    #[test]
    fn star_forest_enumeration() {
        let all = star_forest_specs(4, 13);
        assert!(all.contains(&FamilySpec::StarForest(vec![12])));
        assert!(all.contains(&FamilySpec::StarForest(vec![2, 2, 2, 1])));
        assert!(!all.contains(&FamilySpec::StarForest(vec![1, 1, 1, 1, 1])));
        for s in &all {
            let FamilySpec::StarForest(l) = s else {
                panic!()
            };
            assert!(l.len() <= 4 && s.vertex_count() <= 13);
            assert!(l.windows(2).all(|w| w[0] >= w[1]));
        }
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
        // Partitions of v - c into c positive parts, for c <= 4, v <= 13.
        assert_eq!(all.len(), 91);
    }

    #[test]
    fn star_forests_cover_all_cases() {
        let mut seen = std::collections::BTreeSet::new();
        for s in star_forest_specs(4, 13) {
            seen.insert(format!("{:?}", expected_outcome(&s, Role::P)));
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn small_outcome_sweep_passes() {
        let specs = [complete_specs(2..=6), star_specs(1..=5), cycle_specs(3..=7)].concat();
        let r = verify_outcomes("mixed", &specs, &ExactEvaluator::default());
        assert!(r.passed(), "{r}");
        assert_eq!(r.cases_checked, 2 * specs.len() as u64);
    }

    #[test]
    fn mutation_is_detected() {
        let r = verify_outcomes(
            "complete",
            &complete_specs(2..=6),
            &SignFlipped(ExactEvaluator::default()),
        );
        assert!(!r.passed());
    }

    #[test]
    fn unknown_specs_are_skipped() {
        let r = verify_outcomes(
            "g6",
            &[FamilySpec::Arbitrary("A_".into())],
            &ExactEvaluator::default(),
        );
        assert_eq!(r.cases_checked, 0);
        assert_eq!(r.skipped.len(), 2);
    }

    #[test]
    fn budget_errors_are_skipped() {
        let eval = ExactEvaluator {
            budget: 4,
            ..ExactEvaluator::new(Method::General)
        };
        let r = verify_outcomes("cycles", &cycle_specs(5..=5), &eval);
        assert!(r.passed());
        assert_eq!((r.cases_checked, r.skipped.len()), (0, 2));
    }

    #[test]
    fn path_examples() {
        let general = ExactEvaluator::new(Method::General);
        assert_eq!(general.value(&FamilySpec::Path(4), Role::P), Ok(-1));
        assert_eq!(general.value(&FamilySpec::Path(4), Role::N), Ok(1));
        assert_eq!(general.value(&FamilySpec::Path(7), Role::P), Ok(0));
        assert_eq!(general.value(&FamilySpec::Path(7), Role::N), Ok(0));
        assert!(verify_path_exact(9).passed());
    }

    #[test]
    fn evaluators_agree_on_overlap() {
        let general = ExactEvaluator::new(Method::General);
        let counts = ExactEvaluator::new(Method::Counts);
        for spec in [complete_specs(2..=7), bipartite_specs(4, 7)].concat() {
            for role in [Role::P, Role::N] {
                assert_eq!(
                    general.value(&spec, role),
                    counts.value(&spec, role),
                    "{spec}"
                );
            }
        }
        assert!(counts.value(&FamilySpec::Path(3), Role::P).is_err());
    }

    #[test]
    fn report_json_shape() {
        let mut r = VerificationReport::new("demo");
        r.cases_checked = 3;
        r.fail(
            "K2 first=P",
            Outcome::NWins.describe(),
            "Player P wins (value 1)",
        );
        let j = r.to_json();
        assert_eq!(j["theorem"], "demo");
        assert_eq!(j["cases"], 3);
        assert_eq!(j["failures"][0]["instance"], "K2 first=P");
        assert!(!r.passed());
        assert!(r.to_string().contains("FAIL"));
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", None), Err(UnknownSuite(_))));
    }
}
