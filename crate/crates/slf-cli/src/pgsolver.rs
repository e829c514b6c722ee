//! PGSolver-compatible text format for parity games.
//!
//! `parity <max-id>;` header, then one line per vertex:
//! `<id> <priority> <owner> <succ>,<succ>,... ["name"];` with owner 0 for
//! the even player.

use slf_core::parity::{Owner, ParityGame};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PgParseError {
    #[error("line {line}: {message}")]
    Bad { line: usize, message: String },
    #[error("{0}")]
    Game(String),
}

pub fn parse_pgsolver(text: &str) -> Result<ParityGame, PgParseError> {
    let mut max_id = 0usize;
    let mut rows: Vec<(usize, u32, Owner, Vec<usize>)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("parity") {
            continue;
        }
        let line = line.trim_end_matches(';');
        // drop an optional quoted name
        let line = match line.find('"') {
            Some(i) => line[..i].trim(),
            None => line,
        };
        let mut parts = line.split_whitespace();
        let mut next = |what: &str| {
            parts.next().ok_or(PgParseError::Bad {
                line: ln + 1,
                message: format!("missing {what}"),
            })
        };
        let id: usize = next("vertex id")?.parse().map_err(|_| PgParseError::Bad {
            line: ln + 1,
            message: "bad vertex id".into(),
        })?;
        let priority: u32 = next("priority")?.parse().map_err(|_| PgParseError::Bad {
            line: ln + 1,
            message: "bad priority".into(),
        })?;
        let owner: u8 = next("owner")?.parse().map_err(|_| PgParseError::Bad {
            line: ln + 1,
            message: "bad owner".into(),
        })?;
        let owner = if owner == 0 { Owner::Even } else { Owner::Odd };
        let succs_text = next("successors")?;
        let succs: Vec<usize> = succs_text
            .split(',')
            .map(|s| {
                s.trim().parse().map_err(|_| PgParseError::Bad {
                    line: ln + 1,
                    message: format!("bad successor `{s}`"),
                })
            })
            .collect::<Result<_, _>>()?;
        max_id = max_id.max(id);
        rows.push((id, priority, owner, succs));
    }
    let n = max_id + 1;
    let mut owner = vec![Owner::Even; n];
    let mut priority = vec![0u32; n];
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, p, o, succs) in rows {
        owner[id] = o;
        priority[id] = p;
        edges[id] = succs;
    }
    ParityGame::new(owner, priority, edges).map_err(|e| PgParseError::Game(e.to_string()))
}

pub fn to_pgsolver(g: &ParityGame) -> String {
    let mut out = format!("parity {};\n", g.n_vertices().saturating_sub(1));
    for v in 0..g.n_vertices() {
        let owner = match g.owner[v] {
            Owner::Even => 0,
            Owner::Odd => 1,
        };
        let succs: Vec<String> = g.edges[v].iter().map(|u| u.to_string()).collect();
        out.push_str(&format!("{v} {} {owner} {};\n", g.priority[v], succs.join(",")));
    }
    out
}
