//! Exit criteria for the primary build. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use signgame_core::reductions::check_completion_equivalence;
use signgame_core::solver::{solve_outcome, CountsOptions, CountsSolver, Solver};
use signgame_core::verification::{
    bipartite_specs, complete_specs, cycle_specs, explore_conjecture, path_specs,
    star_forest_specs, star_specs, verify_formula_complete, verify_formula_multipartite,
    verify_outcomes, verify_p5_lemma, verify_path_exact, verify_strategies, Evaluator,
    ExactEvaluator, Method, MultipartiteBounds, SignFlipped, VerificationReport,
};
use signgame_core::{
    build_family, outcome_from_score, Cell, FamilySpec, GameConfig, GameState, Role, Sign,
    SolveOptions,
};

const FORMULA_LIMIT: Duration = Duration::from_secs(10);
const CONJECTURE_LIMIT: Duration = Duration::from_secs(60);
const REDUCTION_APPLICATIONS: usize = 500;
const REDUCTION_SOLVE_MAX_FREE: usize = 8;
const FLIP_STATES: usize = 1000;
const SEED: u64 = 0x5167_6e47;

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_reports(reports: &[VerificationReport]) -> Outcome {
    let ok = reports
        .iter()
        .all(|r| r.passed() && r.cases_checked > 0 && r.skipped.is_empty());
    let mut detail: Vec<String> = reports
        .iter()
        .map(|r| {
            format!(
                "{}: {} cases, {} failures, {} skipped",
                r.theorem,
                r.cases_checked,
                r.failures.len(),
                r.skipped.len()
            )
        })
        .collect();
    for r in reports {
        for f in &r.failures {
            detail.push(format!(
                "  {}: expected {}, got {}",
                f.instance, f.expected, f.got
            ));
        }
        for s in &r.skipped {
            detail.push(format!("  skipped {s}"));
        }
    }
    Outcome {
        ok,
        detail: detail.join("\n"),
    }
}

fn within(out: Outcome, started: Instant, limit: Duration) -> Outcome {
    let took = started.elapsed();
    if took <= limit {
        out
    } else {
        Outcome {
            ok: false,
            detail: format!("{}\n  took {took:?}, limit {limit:?}", out.detail),
        }
    }
}

fn general() -> ExactEvaluator {
    ExactEvaluator::new(Method::General)
}

fn counts() -> ExactEvaluator {
    ExactEvaluator::new(Method::Counts)
}

fn formula_complete() -> Outcome {
    let t = Instant::now();
    let r = verify_formula_complete(10);
    let expected_cases: u64 = (2..=10).map(|n| 1u64 << n).sum();
    let mut out = from_reports(std::slice::from_ref(&r));
    if r.cases_checked != expected_cases {
        out.ok = false;
        out.detail += &format!("\n  expected {expected_cases} assignments");
    }
    within(out, t, FORMULA_LIMIT)
}

fn formula_multipartite() -> Outcome {
    let t = Instant::now();
    let r = verify_formula_multipartite(MultipartiteBounds {
        bipartite_max: 5,
        tripartite_max: 3,
    });
    within(from_reports(&[r]), t, FORMULA_LIMIT)
}

fn complete_outcomes() -> Outcome {
    from_reports(&[
        verify_outcomes("complete", &complete_specs(2..=10), &general()),
        verify_outcomes("complete-counts", &complete_specs(2..=300), &counts()),
    ])
}

fn star_outcomes() -> Outcome {
    from_reports(&[verify_outcomes("stars", &star_specs(1..=12), &general())])
}

fn star_forest_outcomes() -> Outcome {
    from_reports(&[verify_outcomes(
        "star-forests",
        &star_forest_specs(4, 13),
        &general(),
    )])
}

fn bipartite_outcomes() -> Outcome {
    from_reports(&[
        verify_outcomes("bipartite", &bipartite_specs(12, 12), &general()),
        verify_outcomes("bipartite-counts", &bipartite_specs(30, 60), &counts()),
    ])
}

fn path_outcomes() -> Outcome {
    from_reports(&[
        verify_outcomes("paths", &path_specs(2..=14), &general()),
        verify_path_exact(14),
    ])
}

fn cycle_outcomes() -> Outcome {
    let specs = cycle_specs(3..=14);
    let mut out = from_reports(&[verify_outcomes("cycles", &specs, &general())]);
    for k in 0..4 {
        let hits = (3..=14).filter(|n| n % 4 == k).count();
        if hits < 3 {
            out.ok = false;
            out.detail += &format!("\n  residue {k} covered {hits} times");
        }
    }
    out
}

fn p5_lemma() -> Outcome {
    let r = verify_p5_lemma();
    let mut out = from_reports(std::slice::from_ref(&r));
    for f in &r.findings {
        out.detail += &format!("\n  {f}");
    }
    out
}

fn strategy_certifications() -> Outcome {
    from_reports(&[verify_strategies(8)])
}

fn reduction_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut problems = Vec::new();
    let mut solved = 0;
    let mut per_rule = [0usize; 4];
    for i in 0..REDUCTION_APPLICATIONS {
        let rule = i % 4;
        let (orig, red) = common::random_reduction(&mut rng, rule);
        per_rule[rule] += 1;
        let free = orig.unassigned().len();
        assert!(free <= 12);
        let corr = red.correspondence(&orig);
        let report = check_completion_equivalence(&orig, &red.position, &corr).unwrap();
        if !report.equivalent {
            problems.push(format!(
                "{} #{i}: {:?}",
                common::RULES[rule],
                report.first_mismatch
            ));
        }
        if free <= REDUCTION_SOLVE_MAX_FREE {
            for role in [Role::P, Role::N] {
                let a = common::position_value(&orig, role);
                let b = common::position_value(&red.position, role);
                solved += 1;
                if a != b {
                    problems.push(format!(
                        "{} #{i} to_move={role}: original {a}, reduced {b}",
                        common::RULES[rule]
                    ));
                }
            }
        }
    }
    Outcome {
        ok: problems.is_empty() && solved > 0,
        detail: format!(
            "{REDUCTION_APPLICATIONS} applications {per_rule:?}, {solved} solver comparisons{}",
            problems
                .iter()
                .map(|p| format!("\n  {p}"))
                .collect::<String>()
        ),
    }
}

fn family_instances(max_vertices: usize) -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    specs.extend(complete_specs(2..=max_vertices));
    specs.extend(star_specs(1..=max_vertices - 1));
    specs.extend(star_forest_specs(4, max_vertices));
    specs.extend(bipartite_specs(max_vertices, max_vertices));
    for l in 1..max_vertices {
        for m in l..max_vertices {
            for n in m..max_vertices {
                if l + m + n <= max_vertices {
                    specs.push(FamilySpec::CompleteMultipartite(vec![l, m, n]));
                }
            }
        }
    }
    specs.extend(path_specs(2..=max_vertices));
    specs.extend(cycle_specs(3..=max_vertices));
    specs
}

fn solver_consistency() -> Outcome {
    let mut problems = Vec::new();
    let mut rng = StdRng::seed_from_u64(SEED ^ 1);
    let plain = SolveOptions {
        canonicalize_flips: false,
        ..SolveOptions::default()
    };

    // Negating every sign leaves every edge product, and so the value, unchanged.
    let pool = family_instances(10);
    let mut i = 0;
    while i < FLIP_STATES {
        let spec = &pool[rng.gen_range(0..pool.len())];
        let g = build_family(spec).unwrap();
        let cells: Vec<Cell> = (0..g.vertex_count())
            .map(|_| match rng.gen_range(0..3) {
                0 => Some(Sign::Plus),
                1 => Some(Sign::Minus),
                _ => None,
            })
            .collect();
        let role = if rng.gen_bool(0.5) { Role::P } else { Role::N };
        if cells.iter().all(Option::is_some) {
            continue;
        }
        i += 1;
        let a = Solver::new(&g, &cells, role, &plain)
            .unwrap()
            .value_of(&cells)
            .unwrap();
        let fl = common::flipped(&cells);
        let b = Solver::new(&g, &fl, role, &plain)
            .unwrap()
            .value_of(&fl)
            .unwrap();
        if a != b {
            problems.push(format!("flip #{i} {spec} {cells:?}: {a} vs {b}"));
        }
    }

    // Counts solver against the general solver, fresh and mid-game.
    let mut overlap = complete_specs(2..=12);
    overlap.extend(bipartite_specs(11, 12));
    for l in 1..=4 {
        for m in 1..=4 {
            for n in 1..=4 {
                overlap.push(FamilySpec::CompleteMultipartite(vec![l, m, n]));
            }
        }
    }
    for spec in &overlap {
        for role in [Role::P, Role::N] {
            let (a, b) = (general().value(spec, role), counts().value(spec, role));
            if a != b {
                problems.push(format!("counts {spec} first={role}: {a:?} vs {b:?}"));
            }
        }
        let parts = spec.part_sizes().unwrap();
        let g = build_family(spec).unwrap();
        let mut cs = CountsSolver::new(&parts, Role::P, &CountsOptions::default()).unwrap();
        for _ in 0..4 {
            let mut counts = Vec::new();
            let mut cells = Vec::new();
            for &size in &parts {
                let placed = rng.gen_range(0..=size);
                let plus = rng.gen_range(0..=placed);
                counts.push((plus, placed - plus));
                cells.extend(std::iter::repeat_n(Some(Sign::Plus), plus));
                cells.extend(std::iter::repeat_n(Some(Sign::Minus), placed - plus));
                cells.extend(std::iter::repeat_n(None, size - placed));
            }
            let placed: usize = counts.iter().map(|&(p, m)| p + m).sum();
            let role = GameConfig::new(Role::P).role_after(placed);
            let a = cs.value_at(&counts).unwrap();
            let b = if cells.iter().all(Option::is_some) {
                signgame_core::score(&g, &cells).unwrap()
            } else {
                Solver::new(&g, &cells, role, &plain)
                    .unwrap()
                    .value_of(&cells)
                    .unwrap()
            };
            if a != b {
                problems.push(format!("counts {spec} at {counts:?}: {a} vs {b}"));
            }
        }
    }

    // The win/draw/loss search agrees with the sign of the score search.
    let small = family_instances(8);
    let mut lattice_cases = 0;
    for spec in &small {
        let g = build_family(spec).unwrap();
        for role in [Role::P, Role::N] {
            let state = GameState::new(g.clone(), GameConfig::new(role));
            let value = signgame_core::solve(&state, &SolveOptions::default())
                .unwrap()
                .value;
            let lat = solve_outcome(&g, state.cells(), role, 16).unwrap();
            lattice_cases += 1;
            if lat != outcome_from_score(value) {
                problems.push(format!(
                    "lattice {spec} first={role}: {lat:?} vs value {value}"
                ));
            }
        }
    }

    // A sign-flipped evaluator must break every outcome sweep.
    let flipped = SignFlipped(general());
    let flipped_counts = SignFlipped(counts());
    let sweeps: Vec<(&str, Vec<FamilySpec>, &dyn Evaluator)> = vec![
        ("complete", complete_specs(2..=10), &flipped),
        ("complete-counts", complete_specs(2..=300), &flipped_counts),
        ("stars", star_specs(1..=12), &flipped),
        ("star-forests", star_forest_specs(4, 10), &flipped),
        ("bipartite", bipartite_specs(12, 12), &flipped),
        ("bipartite-counts", bipartite_specs(30, 60), &flipped_counts),
        ("paths", path_specs(2..=14), &flipped),
        ("cycles", cycle_specs(3..=14), &flipped),
    ];
    let mut mutation = Vec::new();
    for (name, specs, eval) in sweeps {
        let r = verify_outcomes(name, &specs, eval);
        mutation.push(format!("{name}={}", r.failures.len()));
        if r.failures.is_empty() {
            problems.push(format!("mutation survived sweep {name}"));
        }
    }
    let flip_bad = verify_path_exact_flipped();
    mutation.push(format!("paths-exact={flip_bad}"));
    if flip_bad == 0 {
        problems.push("mutation survived sweep paths-exact".into());
    }

    Outcome {
        ok: problems.is_empty(),
        detail: format!(
            "{FLIP_STATES} flip states, {} counts overlaps, {lattice_cases} lattice cases, mutation failures [{}]{}",
            overlap.len(),
            mutation.join(" "),
            problems.iter().map(|p| format!("\n  {p}")).collect::<String>()
        ),
    }
}

fn verify_path_exact_flipped() -> usize {
    signgame_core::verification::verify_path_exact_with(14, &SignFlipped(general()))
        .failures
        .len()
}

fn conjecture() -> Outcome {
    let t = Instant::now();
    let table = explore_conjecture(10);
    let report = table.to_report();
    let triples = (1..=10usize)
        .flat_map(|l| (1..=10usize).flat_map(move |m| (1..=10usize).map(move |n| (l, m, n))))
        .filter(|(l, m, n)| l + m + n <= 10)
        .count();
    let complete = table.rows.len() == 2 * triples && table.verdicts.len() == 3;
    let mut detail = format!("{} rows", table.rows.len());
    for f in &report.findings {
        detail += &format!("\n  {f}");
    }
    within(
        Outcome {
            ok: complete && report.passed(),
            detail,
        },
        t,
        CONJECTURE_LIMIT,
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("complete-graph score formula", formula_complete),
        ("multipartite score formula", formula_multipartite),
        ("complete-graph outcomes", complete_outcomes),
        ("star outcomes", star_outcomes),
        ("star-forest outcomes", star_forest_outcomes),
        ("complete bipartite outcomes", bipartite_outcomes),
        ("path values", path_outcomes),
        ("cycle outcomes", cycle_outcomes),
        ("five-vertex path facts", p5_lemma),
        ("mirroring strategy certifications", strategy_certifications),
        ("reduction equivalence", reduction_equivalence),
        ("solver self-consistency", solver_consistency),
        ("tripartite exploration", conjecture),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let status = if out.ok { "PASS" } else { "FAIL" };
        println!("[{status}] {:>2}. {name} ({:.2?})", i + 1, t.elapsed());
        for line in out.detail.lines() {
            println!("      {line}");
        }
        if !out.ok {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2?}",
        criteria.len() - failed,
        total.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
