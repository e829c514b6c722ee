//! JSON file formats for game structures and Kripke structures.
//!
//! Rationals are written as `"n/d"` strings; plain JSON numbers are also
//! accepted and converted exactly from their decimal literal (the parser
//! keeps the digits, no float round-trip).

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;
use slf_core::game::{StructureError, Wcgs};
use slf_core::kripke::Wks;
use slf_core::rat::Rat;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational `{0}`")]
    BadRational(String),
    #[error("{0}")]
    Structure(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<StructureError> for LoadError {
    fn from(e: StructureError) -> LoadError {
        LoadError::Structure(e.to_string())
    }
}

#[derive(Deserialize)]
struct StateEntry {
    id: String,
    #[serde(default)]
    label: BTreeMap<String, Value>,
}

#[derive(Deserialize)]
struct WcgsFile {
    agents: Vec<String>,
    actions: Vec<String>,
    states: Vec<StateEntry>,
    initial: String,
    /// `transitions[state][joint]` with the joint action as a comma-separated
    /// list in agent order.
    transitions: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Deserialize)]
struct WksFile {
    states: Vec<StateEntry>,
    initial: String,
    edges: Vec<(String, String)>,
}

/// Exact conversion of a JSON value to a rational in [0,1].
pub fn rat_from_value(v: &Value) -> Result<Rat, LoadError> {
    match v {
        Value::String(s) => rat_from_str(s),
        Value::Number(n) => rat_from_str(&n.to_string()),
        other => Err(LoadError::BadRational(other.to_string())),
    }
}

pub fn rat_from_str(s: &str) -> Result<Rat, LoadError> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| LoadError::BadRational(s.into()))?;
        let d: u64 = d.trim().parse().map_err(|_| LoadError::BadRational(s.into()))?;
        return Rat::new(n, d).ok_or_else(|| LoadError::BadRational(s.into()));
    }
    Rat::from_decimal_str(s).ok_or_else(|| LoadError::BadRational(s.into()))
}

fn collect_atoms(states: &[StateEntry]) -> Vec<String> {
    let mut atoms: Vec<String> = states
        .iter()
        .flat_map(|s| s.label.keys().cloned())
        .collect();
    atoms.sort();
    atoms.dedup();
    atoms
}

fn labels_for(states: &[StateEntry], atoms: &[String]) -> Result<Vec<Vec<Rat>>, LoadError> {
    let mut out = Vec::with_capacity(states.len());
    for s in states {
        let mut row = Vec::with_capacity(atoms.len());
        for a in atoms {
            row.push(match s.label.get(a) {
                Some(v) => rat_from_value(v)?,
                None => Rat::ZERO,
            });
        }
        out.push(row);
    }
    Ok(out)
}

pub fn wcgs_from_json(text: &str) -> Result<Wcgs, LoadError> {
    let file: WcgsFile = serde_json::from_str(text)?;
    let atoms = collect_atoms(&file.states);
    let labels = labels_for(&file.states, &atoms)?;
    let names: Vec<String> = file.states.iter().map(|s| s.id.clone()).collect();
    let mut transitions = alloc_btree();
    for (src, row) in &file.transitions {
        for (joint, dst) in row {
            let parts: Vec<String> = joint.split(',').map(|p| p.trim().to_string()).collect();
            transitions.insert((src.clone(), parts), dst.clone());
        }
    }
    Ok(Wcgs::build(
        atoms,
        file.agents,
        file.actions,
        names,
        &file.initial,
        labels,
        &transitions,
    )?)
}

fn alloc_btree() -> BTreeMap<(String, Vec<String>), String> {
    BTreeMap::new()
}

pub fn wks_from_json(text: &str) -> Result<Wks, LoadError> {
    let file: WksFile = serde_json::from_str(text)?;
    let atoms = collect_atoms(&file.states);
    let labels = labels_for(&file.states, &atoms)?;
    let names: Vec<String> = file.states.iter().map(|s| s.id.clone()).collect();
    Ok(Wks::build(atoms, names, &file.initial, &file.edges, labels)?)
}

/// Serializes a Kripke structure back to the file schema.
pub fn wks_to_json(k: &Wks) -> Value {
    let states: Vec<Value> = (0..k.n_states())
        .map(|v| {
            let label: BTreeMap<String, String> = k
                .atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (a.clone(), k.labels[v][i].to_string()))
                .collect();
            serde_json::json!({ "id": k.state_names[v], "label": label })
        })
        .collect();
    let edges: Vec<Value> = (0..k.n_states())
        .flat_map(|v| {
            k.edges[v].iter().map(move |t| {
                serde_json::json!([k.state_names[v], k.state_names[t.0 as usize]])
            })
        })
        .collect();
    serde_json::json!({
        "states": states,
        "initial": k.state_names[k.initial.0 as usize],
        "edges": edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wcgs_round() {
        let text = r#"{
            "agents": ["a1"],
            "actions": ["go"],
            "states": [{"id": "s", "label": {"p": "1/3"}}],
            "initial": "s",
            "transitions": {"s": {"go": "s"}}
        }"#;
        let g = wcgs_from_json(text).unwrap();
        assert_eq!(g.n_states(), 1);
        assert_eq!(
            g.label(slf_core::game::StateId(0), "p"),
            Some(Rat::new(1, 3).unwrap())
        );
    }

    #[test]
    fn decimal_numbers_are_exact() {
        let text = r#"{
            "agents": ["a1"],
            "actions": ["go"],
            "states": [{"id": "s", "label": {"p": 0.3}}],
            "initial": "s",
            "transitions": {"s": {"go": "s"}}
        }"#;
        let g = wcgs_from_json(text).unwrap();
        assert_eq!(
            g.label(slf_core::game::StateId(0), "p"),
            Some(Rat::new(3, 10).unwrap())
        );
    }

    #[test]
    fn missing_joint_action_reports() {
        let text = r#"{
            "agents": ["a1"],
            "actions": ["go", "stay"],
            "states": [{"id": "s", "label": {}}],
            "initial": "s",
            "transitions": {"s": {"go": "s"}}
        }"#;
        let e = wcgs_from_json(text).unwrap_err();
        assert!(e.to_string().contains("missing transition"));
    }

    #[test]
    fn wks_round() {
        let text = r#"{
            "states": [{"id": "s", "label": {"p": 1}}, {"id": "t", "label": {}}],
            "initial": "s",
            "edges": [["s", "t"], ["t", "t"]]
        }"#;
        let k = wks_from_json(text).unwrap();
        assert_eq!(k.n_states(), 2);
        let back = wks_to_json(&k);
        let again = wks_from_json(&back.to_string()).unwrap();
        assert_eq!(again.n_states(), 2);
    }
}
