//! Session registry with an optional append-only log per session.
//!
//! With persistence on, each session gets `<dir>/<id>.jsonl`: one `create`
//! event followed by one `move` event per applied move (human or engine).
//! On start-up every log is replayed; a torn final line is ignored.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use serde::{Deserialize, Serialize};
use signgame_core::{FamilySpec, Move, Role};

use crate::session::Session;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "lowercase")]
pub enum Event {
    Create {
        id: String,
        graph: FamilySpec,
        first_role: Role,
        human_role: Role,
    },
    Move {
        by: Role,
        #[serde(flatten)]
        mv: Move,
    },
}

pub type SharedSession = Arc<Mutex<Session>>;

pub struct SessionStore {
    sessions: RwLock<HashMap<String, SharedSession>>,
    persist: Option<PathBuf>,
    budget: usize,
}

impl SessionStore {
    pub fn in_memory(budget: usize) -> Self {
        SessionStore {
            sessions: RwLock::default(),
            persist: None,
            budget,
        }
    }

    /// Opens (creating if needed) a log directory and restores its sessions.
    pub fn persistent(dir: impl Into<PathBuf>, budget: usize) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("jsonl") {
                continue;
            }
            match restore(&path, budget) {
                Ok(s) => {
                    sessions.insert(s.id().to_string(), Arc::new(Mutex::new(s)));
                }
                Err(e) => tracing::warn!("skipping {}: {e}", path.display()),
            }
        }
        tracing::info!(
            "restored {} sessions from {}",
            sessions.len(),
            dir.display()
        );
        Ok(SessionStore {
            sessions: RwLock::new(sessions),
            persist: Some(dir),
            budget,
        })
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("registry lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, id: &str) -> Option<SharedSession> {
        self.sessions
            .read()
            .expect("registry lock")
            .get(id)
            .cloned()
    }

    /// Registers a session and logs its creation plus any moves already made.
    pub fn insert(&self, session: Session) -> io::Result<SharedSession> {
        if let Some(path) = self.log_path(session.id()) {
            let mut file = File::create(path)?;
            let state = session.state();
            let create = Event::Create {
                id: session.id().to_string(),
                graph: session.spec().clone(),
                first_role: state.config().first_role,
                human_role: session.human_role(),
            };
            writeln!(file, "{}", serde_json::to_string(&create)?)?;
            for (i, &mv) in state.history().iter().enumerate() {
                let by = state.config().role_after(i);
                writeln!(file, "{}", serde_json::to_string(&Event::Move { by, mv })?)?;
            }
        }
        let id = session.id().to_string();
        let shared = Arc::new(Mutex::new(session));
        self.sessions
            .write()
            .expect("registry lock")
            .insert(id, shared.clone());
        Ok(shared)
    }

    pub fn record_move(&self, id: &str, by: Role, mv: Move) -> io::Result<()> {
        let Some(path) = self.log_path(id) else {
            return Ok(());
        };
        let mut file = OpenOptions::new().append(true).open(path)?;
        writeln!(file, "{}", serde_json::to_string(&Event::Move { by, mv })?)
    }

    fn log_path(&self, id: &str) -> Option<PathBuf> {
        self.persist.as_ref().map(|d| d.join(format!("{id}.jsonl")))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RestoreError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Bad { line: usize, message: String },
}

/// Rebuilds a session from its log.
pub fn restore(path: &Path, budget: usize) -> Result<Session, RestoreError> {
    let lines: Vec<String> = BufReader::new(File::open(path)?)
        .lines()
        .collect::<Result<_, _>>()?;
    let bad = |line: usize, message: String| RestoreError::Bad { line, message };
    let mut session: Option<Session> = None;
    for (i, text) in lines.iter().enumerate() {
        if text.trim().is_empty() {
            continue;
        }
        let event: Event = match serde_json::from_str(text) {
            Ok(e) => e,
            Err(_) if i + 1 == lines.len() && session.is_some() => break,
            Err(e) => return Err(bad(i + 1, e.to_string())),
        };
        match (event, session.as_mut()) {
            (
                Event::Create {
                    id,
                    graph,
                    first_role,
                    human_role,
                },
                None,
            ) => {
                let s = Session::new(id, graph, first_role, human_role, budget)
                    .map_err(|e| bad(i + 1, e.message))?;
                session = Some(s);
            }
            (Event::Move { by, mv }, Some(s)) => {
                let record = s.replay_move(mv).map_err(|e| bad(i + 1, e.message))?;
                if record.by != by {
                    return Err(bad(
                        i + 1,
                        format!("logged mover {by}, replay says {}", record.by),
                    ));
                }
            }
            (Event::Create { .. }, Some(_)) => {
                return Err(bad(i + 1, "second create event".into()))
            }
            (Event::Move { .. }, None) => return Err(bad(i + 1, "move before create".into())),
        }
    }
    session.ok_or_else(|| bad(0, "empty log".into()))
}
