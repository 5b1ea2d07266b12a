//! `signgame`: solve, verify, reduce, evaluate strategies, play, and serve.
//!
//! Exit codes: 0 success, 1 verification failure or abandoned game, 2 usage
//! error, 3 solver budget exceeded.

mod play;

use std::fmt;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use signgame_core::graph6::{encode_graph6, parse_graph6};
use signgame_core::reductions::{
    cancel_bipartite_pair, cancel_opposite_leaves, check_completion_equivalence, open_cycle,
    split_path_at_assigned, EquivalenceReport, Position, Reduction, ReductionError,
    EQUIVALENCE_BUDGET,
};
use signgame_core::solver::{FamilySolveError, SolveMethod};
use signgame_core::strategies::{evaluate_strategy, StrategyError, StrategyKind};
use signgame_core::verification::{explore_conjecture, run_suite};
use signgame_core::{
    build_family, game, solve, solve_family, FamilySpec, GameConfig, GameState, Graph, Move,
    Outcome, Role, SolveError, SolveOptions, SolveResult, Transcript,
};

const DEFAULT_BUDGET: usize = 14;
// 3^20 two-byte memo entries is already about 7 GB.
const MAX_BUDGET: usize = 20;

fn parse_budget(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(b) if (1..=MAX_BUDGET).contains(&b) => Ok(b),
        _ => Err(format!("expected an integer in 1..={MAX_BUDGET}")),
    }
}

#[derive(Parser)]
#[command(
    name = "signgame",
    version,
    about = "Exact analysis and play of the Sign Game"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a fresh board, or the position reached by a transcript.
    Solve {
        #[arg(
            long,
            required_unless_present = "from_transcript",
            conflicts_with = "from_transcript"
        )]
        graph: Option<FamilySpec>,
        #[arg(long, required_unless_present = "from_transcript")]
        first: Option<Role>,
        #[arg(long)]
        from_transcript: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = parse_budget)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run verification suites against the exact solvers.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Cap on vertex counts for general-solver and formula sweeps.
        #[arg(long)]
        max: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Apply a reduction rule to a partial assignment and check it.
    Reduce {
        #[arg(long)]
        graph: FamilySpec,
        /// Cells such as `+.-..` (`.` is unassigned).
        #[arg(long)]
        cells: String,
        #[arg(long)]
        rule: Rule,
        /// One vertex (split-path, open-cycle) or two (cancel-leaves, cancel-pair).
        #[arg(long, value_delimiter = ',', required = true)]
        vertices: Vec<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Exact worst case of a mirroring policy.
    Strategy {
        #[arg(long)]
        graph: FamilySpec,
        #[arg(long)]
        first: Role,
        #[arg(long)]
        kind: StrategyKind,
        /// The role that follows the policy.
        #[arg(long)]
        role: Role,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = parse_budget)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate complete tripartite outcomes against the three-case rule.
    Conjecture {
        /// Largest total vertex count l+m+n.
        #[arg(long, default_value_t = 10)]
        max: usize,
        #[arg(long)]
        json: bool,
    },
    /// Build, encode or decode boards.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// Play against the engine on standard input.
    Play {
        #[arg(long)]
        graph: FamilySpec,
        #[arg(long)]
        first: Role,
        #[arg(long, default_value = "P")]
        human: Role,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = parse_budget)]
        budget: usize,
        /// Write the move transcript here when the session ends.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Run the HTTP game service.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = parse_budget)]
        budget: usize,
        /// Directory for per-game JSON-lines logs, replayed on start-up.
        #[arg(long)]
        persist: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphAction {
    /// Print the vertices, edges and graph6 form of a family board.
    Build {
        #[arg(long)]
        graph: FamilySpec,
        #[arg(long)]
        json: bool,
    },
    /// Print the graph6 string of a family board.
    Encode {
        #[arg(long)]
        graph: FamilySpec,
    },
    /// Print the edges of a graph6 string.
    Decode {
        graph6: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    CancelLeaves,
    SplitPath,
    OpenCycle,
    CancelPair,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Budget(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Budget(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::BudgetExceeded { .. } | SolveError::StateLimit { .. } => {
                CliError::Budget(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<StrategyError> for CliError {
    fn from(e: StrategyError) -> Self {
        match e {
            StrategyError::Solve(e) => e.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn print_json(value: &impl Serialize) {
    println!(
        "{}",
        serde_json::to_string(value).expect("output serializes")
    );
}

#[derive(Serialize)]
struct SolveOutput {
    graph: FamilySpec,
    first_role: Role,
    moves_made: usize,
    banked_score: i64,
    outcome: Outcome,
    value: i64,
    best_move: Option<Move>,
    nodes_expanded: u64,
    memo_hits: u64,
    method: SolveMethod,
}

impl SolveOutput {
    fn new(graph: FamilySpec, state: &GameState, result: SolveResult, method: SolveMethod) -> Self {
        SolveOutput {
            graph,
            first_role: state.config().first_role,
            moves_made: state.moves_made(),
            banked_score: state.banked_score(),
            outcome: result.outcome,
            value: result.value,
            best_move: result.best_move,
            nodes_expanded: result.nodes_expanded,
            memo_hits: result.memo_hits,
            method,
        }
    }
}

impl fmt::Display for SolveOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph {}, first {}", self.graph, self.first_role)?;
        if self.moves_made > 0 {
            writeln!(
                f,
                "after {} moves, banked {}",
                self.moves_made, self.banked_score
            )?;
        }
        writeln!(f, "value {} ({})", self.value, self.outcome.describe())?;
        match self.best_move {
            Some(m) => writeln!(f, "best move {m}")?,
            None => writeln!(f, "best move none (game over)")?,
        }
        write!(
            f,
            "nodes {}, memo hits {}, {} solver",
            self.nodes_expanded,
            self.memo_hits,
            match self.method {
                SolveMethod::General => "general",
                SolveMethod::Counts => "counts",
            }
        )
    }
}

fn solve_fresh(spec: FamilySpec, first: Role, budget: usize) -> Result<SolveOutput, CliError> {
    let solved = solve_family(&spec, first, budget).map_err(|e| match e {
        FamilySolveError::Spec(e) => usage(e),
        FamilySolveError::Solve(e) => e.into(),
    })?;
    let state = GameState::new(build_family(&spec).map_err(usage)?, GameConfig::new(first));
    Ok(SolveOutput::new(spec, &state, solved.result, solved.method))
}

fn solve_transcript(path: &PathBuf, budget: usize) -> Result<SolveOutput, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    let transcript: Transcript = serde_json::from_str(&text)
        .map_err(|e| usage(format!("parsing {}: {e}", path.display())))?;
    let state = transcript.replay().map_err(usage)?;
    let result = match state.final_score() {
        Ok(score) => SolveResult {
            value: score,
            outcome: game::outcome_from_score(score),
            best_move: None,
            nodes_expanded: 0,
            memo_hits: 0,
        },
        Err(_) => solve(&state, &SolveOptions::with_budget(budget))?,
    };
    Ok(SolveOutput::new(
        transcript.graph,
        &state,
        result,
        SolveMethod::General,
    ))
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: bool,
    reports: Vec<signgame_core::verification::VerificationReport>,
}

fn verify(suite: &str, max: Option<usize>, json: bool) -> Result<ExitCode, CliError> {
    let reports = run_suite(suite, max).map_err(usage)?;
    let passed = reports.iter().all(|r| r.passed());
    if json {
        print_json(&VerifyOutput { passed, reports });
    } else {
        for r in &reports {
            print!("{r}");
        }
        let ok = reports.iter().filter(|r| r.passed()).count();
        println!("{ok}/{} reports passed", reports.len());
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct BoardView {
    n: usize,
    edges: Vec<(usize, usize)>,
    graph6: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    cells: Option<String>,
}

impl BoardView {
    fn new(g: &Graph, cells: Option<&[game::Cell]>) -> Self {
        BoardView {
            n: g.vertex_count(),
            edges: g.edges().to_vec(),
            graph6: encode_graph6(g),
            cells: cells.map(game::cells_to_string),
        }
    }
}

impl fmt::Display for BoardView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vertices, {} edges, graph6 {}",
            self.n,
            self.edges.len(),
            self.graph6
        )?;
        if let Some(c) = &self.cells {
            write!(f, ", cells {c}")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct ReduceOutput {
    original: BoardView,
    reduced: BoardView,
    index_map: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    part_sizes: Option<Vec<usize>>,
    /// Absent when the board has too many unassigned vertices to enumerate.
    equivalence: Option<EquivalenceReport>,
}

fn reduce(
    spec: &FamilySpec,
    cells: &str,
    rule: Rule,
    vs: &[usize],
) -> Result<ReduceOutput, CliError> {
    let graph = build_family(spec).map_err(usage)?;
    let cells = game::cells_from_str(cells)
        .ok_or_else(|| usage(format!("cannot parse cells `{cells}`; use +, - and .")))?;
    let pos = Position::new(graph, cells)?;
    let wanted = match rule {
        Rule::SplitPath | Rule::OpenCycle => 1,
        Rule::CancelLeaves | Rule::CancelPair => 2,
    };
    if vs.len() != wanted {
        return Err(usage(format!(
            "this rule takes {wanted} vertices, got {}",
            vs.len()
        )));
    }
    let mut part_sizes = None;
    let red: Reduction = match rule {
        Rule::CancelLeaves => cancel_opposite_leaves(&pos, vs[0], vs[1])?,
        Rule::SplitPath => split_path_at_assigned(&pos, vs[0])?,
        Rule::OpenCycle => open_cycle(&pos, vs[0])?,
        Rule::CancelPair => {
            let parts = spec
                .part_sizes()
                .ok_or_else(|| usage(format!("{spec} is not complete multipartite")))?;
            let (red, parts) = cancel_bipartite_pair(&pos, &parts, vs[0], vs[1])?;
            part_sizes = Some(parts);
            red
        }
    };
    let equivalence = if pos.unassigned().len() <= EQUIVALENCE_BUDGET {
        Some(check_completion_equivalence(
            &pos,
            &red.position,
            &red.correspondence(&pos),
        )?)
    } else {
        None
    };
    Ok(ReduceOutput {
        original: BoardView::new(&pos.graph, Some(&pos.cells)),
        reduced: BoardView::new(&red.position.graph, Some(&red.position.cells)),
        index_map: red.index_map,
        part_sizes,
        equivalence,
    })
}

fn strategy(
    spec: &FamilySpec,
    first: Role,
    kind: StrategyKind,
    role: Role,
    budget: usize,
    json: bool,
) -> Result<(), CliError> {
    let graph = build_family(spec).map_err(usage)?;
    let parts = spec.part_sizes();
    let parts = if kind.needs_parts() {
        parts.as_deref()
    } else {
        None
    };
    let report = evaluate_strategy(
        &graph,
        GameConfig::new(first),
        kind,
        role,
        parts,
        &SolveOptions::with_budget(budget),
    )?;
    if json {
        print_json(&report);
    } else {
        println!("{kind} operated by {role} on {spec}, first {first}");
        println!("guaranteed value {}", report.guaranteed_value);
        println!("optimal value {}", report.optimal_value);
        let line: Vec<String> = report.witness_line.iter().map(Move::to_string).collect();
        println!("witness line {}", line.join(" "));
        println!("nodes {}", report.nodes);
    }
    Ok(())
}

fn graph_action(action: GraphAction) -> Result<(), CliError> {
    match action {
        GraphAction::Build { graph, json } => {
            let g = build_family(&graph).map_err(usage)?;
            let view = BoardView::new(&g, None);
            if json {
                print_json(&view);
            } else {
                println!("{graph}: {view}");
                for (a, b) in &view.edges {
                    println!("{a} {b}");
                }
            }
        }
        GraphAction::Encode { graph } => {
            let g = build_family(&graph).map_err(usage)?;
            println!("{}", encode_graph6(&g));
        }
        GraphAction::Decode { graph6, json } => {
            let g = parse_graph6(&graph6).map_err(usage)?;
            let view = BoardView::new(&g, None);
            if json {
                print_json(&view);
            } else {
                println!("{view}");
                for (a, b) in &view.edges {
                    println!("{a} {b}");
                }
            }
        }
    }
    Ok(())
}

fn serve(
    host: std::net::IpAddr,
    port: u16,
    budget: usize,
    persist: Option<PathBuf>,
) -> Result<(), CliError> {
    tracing_subscriber::fmt().with_target(false).init();
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Runtime(e.to_string()))?;
    let config = signgame_service::ServiceConfig { budget, persist };
    runtime
        .block_on(signgame_service::serve(SocketAddr::new(host, port), config))
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Solve {
            graph,
            first,
            from_transcript,
            budget,
            json,
        } => {
            let out = match (from_transcript, graph, first) {
                (Some(path), _, _) => solve_transcript(&path, budget)?,
                (None, Some(spec), Some(first)) => solve_fresh(spec, first, budget)?,
                _ => {
                    return Err(usage(
                        "solve needs --graph and --first, or --from-transcript",
                    ))
                }
            };
            if json {
                print_json(&out);
            } else {
                println!("{out}");
            }
        }
        Command::Verify { suite, max, json } => return verify(&suite, max, json),
        Command::Reduce {
            graph,
            cells,
            rule,
            vertices,
            json,
        } => {
            let out = reduce(&graph, &cells, rule, &vertices)?;
            if json {
                print_json(&out);
            } else {
                println!("original {}", out.original);
                println!("reduced  {}", out.reduced);
                if let Some(p) = &out.part_sizes {
                    println!("part sizes {p:?}");
                }
                match &out.equivalence {
                    Some(r) if r.equivalent => {
                        println!("equivalent over {} completions", r.completions_checked)
                    }
                    Some(r) => println!(
                        "NOT equivalent: {} of {} completions differ, first {:?}",
                        r.mismatches, r.completions_checked, r.first_mismatch
                    ),
                    None => println!("too many unassigned vertices to check completions"),
                }
            }
            if out.equivalence.as_ref().is_some_and(|r| !r.equivalent) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Strategy {
            graph,
            first,
            kind,
            role,
            budget,
            json,
        } => strategy(&graph, first, kind, role, budget, json)?,
        Command::Conjecture { max, json } => {
            let table = explore_conjecture(max);
            if json {
                print_json(&table);
            } else {
                print!("{table}");
            }
            if table.inconsistencies().next().is_some() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Graph { action } => graph_action(action)?,
        Command::Play {
            graph,
            first,
            human,
            budget,
            save,
        } => return play::run(graph, first, human, budget, save.as_deref()),
        Command::Serve {
            host,
            port,
            budget,
            persist,
        } => serve(host, port, budget, persist)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
