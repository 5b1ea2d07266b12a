//! Line-oriented game against the engine.
//!
//! Each input line is a move such as `3+` or `3 -`, or one of `hint`,
//! `board`, `help` and `quit`. The engine replies immediately.

use std::io::{self, BufRead, Write};
use std::path::Path;
use std::process::ExitCode;

use signgame_core::{game, FamilySpec, Move, Role, Sign, Transcript};
use signgame_service::{MoveRecord, Session};

use crate::CliError;

const HELP: &str = "moves: <vertex><sign>, e.g. 3+ or 3 -; commands: hint, board, help, quit";

fn parse_move(line: &str) -> Option<Move> {
    let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
    let sign = Sign::from_symbol(compact.chars().last()?)?;
    let vertex = compact[..compact.len() - 1].parse().ok()?;
    Some(Move::new(vertex, sign))
}

fn describe(r: &MoveRecord, who: &str) -> String {
    let mut text = format!("{who} {} ({:+})", r.mv, r.delta);
    for e in &r.completed_edges {
        text.push_str(&format!(" [{}-{}: {:+}]", e.edge[0], e.edge[1], e.score));
    }
    text
}

fn board(s: &Session) -> String {
    let state = s.state();
    let turn = match state.player_to_move() {
        Ok(r) if r == s.human_role() => format!("{r} (you)"),
        Ok(r) => format!("{r} (engine)"),
        Err(_) => "none".to_string(),
    };
    format!(
        "cells {}  banked {}  to move {turn}",
        game::cells_to_string(state.cells()),
        state.banked_score()
    )
}

pub fn run(
    spec: FamilySpec,
    first: Role,
    human: Role,
    budget: usize,
    save: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let mut s =
        Session::new("cli".into(), spec.clone(), first, human, budget).map_err(|e| {
            match e.code {
                "too_large" => CliError::Budget(e.message),
                _ => CliError::Usage(e.message),
            }
        })?;
    let g = s.state().graph();
    let edges: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    println!(
        "{spec}: {} vertices, edges {}",
        g.vertex_count(),
        edges.join(" ")
    );
    println!("you are {human}, {first} moves first; {HELP}");

    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    while !s.state().is_over() {
        if s.engine_to_move() {
            let r = s.engine_move().map_err(|e| CliError::Runtime(e.message))?;
            println!("{}", describe(&r, "engine"));
            continue;
        }
        println!("{}", board(&s));
        print!("> ");
        io::stdout().flush().ok();
        let Some(line) = lines.next() else { break };
        let line = line.map_err(|e| CliError::Runtime(e.to_string()))?;
        match line.trim() {
            "" => {}
            "help" => println!("{HELP}"),
            "board" => {}
            "quit" => break,
            "hint" => match s.hint() {
                Ok(h) => println!(
                    "best {} value {} ({} for you) {}",
                    h.best_move.map_or("-".to_string(), |m| m.to_string()),
                    h.value,
                    h.value_for_human,
                    h.outcome_with_optimal_play.describe()
                ),
                Err(e) => eprintln!("{}", e.message),
            },
            text => match parse_move(text) {
                Some(mv) => match s.human_move(mv) {
                    Ok(r) => println!("{}", describe(&r, "you")),
                    Err(e) => eprintln!("{}", e.message),
                },
                None => eprintln!("cannot parse `{text}`; {HELP}"),
            },
        }
    }

    if let Some(path) = save {
        let transcript = Transcript::from_state(spec, s.state());
        let text = serde_json::to_string_pretty(&transcript).expect("transcript serializes");
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))?;
    }
    println!("{}", board(&s));
    let Some(outcome) = s.state().outcome() else {
        println!("game abandoned after {} moves", s.state().moves_made());
        return Ok(ExitCode::from(1));
    };
    let verdict = match outcome.winner() {
        Some(r) if r == human => "you win",
        Some(_) => "the engine wins",
        None => "draw",
    };
    println!(
        "final score {}: {} ({verdict})",
        s.state().banked_score(),
        outcome.describe()
    );
    Ok(ExitCode::SUCCESS)
}
