//! DOT exports for structures, automata and parity games.

use std::fmt::Write as _;

use slf_core::game::Wcgs;
use slf_core::kripke::Wks;
use slf_core::parity::{Owner, ParityGame};
use slf_core::word::{Dpw, Ngbw};

pub fn wcgs_dot(g: &Wcgs) -> String {
    let mut out = String::from("digraph wcgs {\n  rankdir=LR;\n");
    for v in g.states() {
        let labels: Vec<String> = g
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| format!("{a}={}", g.label_row(v)[i]))
            .collect();
        let shape = if v == g.initial { "doublecircle" } else { "circle" };
        let _ = writeln!(
            out,
            "  \"{}\" [shape={shape} label=\"{}\\n{}\"];",
            g.state_names[v.0 as usize],
            g.state_names[v.0 as usize],
            labels.join(",")
        );
    }
    for v in g.states() {
        for code in g.joint_codes() {
            let joint = g.decode_joint(code);
            let t = g.step(v, code);
            let action: Vec<&str> =
                joint.iter().map(|a| g.actions[a.0 as usize].as_str()).collect();
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                g.state_names[v.0 as usize],
                g.state_names[t.0 as usize],
                action.join(",")
            );
        }
    }
    out.push_str("}\n");
    out
}

pub fn wks_dot(k: &Wks) -> String {
    let mut out = String::from("digraph wks {\n  rankdir=LR;\n");
    for v in 0..k.n_states() {
        let labels: Vec<String> = k
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| format!("{a}={}", k.labels[v][i]))
            .collect();
        let shape = if v == k.initial.0 as usize { "doublecircle" } else { "circle" };
        let _ = writeln!(
            out,
            "  \"{}\" [shape={shape} label=\"{}\\n{}\"];",
            k.state_names[v],
            k.state_names[v],
            labels.join(",")
        );
    }
    for v in 0..k.n_states() {
        for t in &k.edges[v] {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", k.state_names[v], k.state_names[t.0 as usize]);
        }
    }
    out.push_str("}\n");
    out
}

pub fn parity_game_dot(g: &ParityGame, winner: Option<&[Owner]>) -> String {
    let mut out = String::from("digraph pg {\n");
    for v in 0..g.n_vertices() {
        let shape = match g.owner[v] {
            Owner::Even => "ellipse",
            Owner::Odd => "box",
        };
        let color = match winner.map(|w| w[v]) {
            Some(Owner::Even) => ", style=filled, fillcolor=palegreen",
            Some(Owner::Odd) => ", style=filled, fillcolor=lightpink",
            None => "",
        };
        let _ = writeln!(
            out,
            "  n{v} [shape={shape} label=\"{v}:{}\"{color}];",
            g.priority[v]
        );
    }
    for v in 0..g.n_vertices() {
        for &u in &g.edges[v] {
            let _ = writeln!(out, "  n{v} -> n{u};");
        }
    }
    out.push_str("}\n");
    out
}

fn letter_label(atoms: &[String], letter: &[slf_core::rat::Rat]) -> String {
    atoms
        .iter()
        .zip(letter)
        .map(|(a, v)| format!("{a}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn ngbw_dot(a: &Ngbw) -> String {
    let mut out = String::from("digraph ngbw {\n  rankdir=LR;\n");
    for q in 0..a.n_states {
        let sets: Vec<String> = a
            .accept
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(&q))
            .map(|(i, _)| format!("F{i}"))
            .collect();
        let init = if a.initial.contains(&q) { " color=blue" } else { "" };
        let _ = writeln!(out, "  q{q} [label=\"q{q} {}\"{init}];", sets.join(" "));
    }
    for q in 0..a.n_states {
        for (li, succs) in a.trans[q].iter().enumerate() {
            for &t in succs {
                let _ = writeln!(
                    out,
                    "  q{q} -> q{t} [label=\"{}\"];",
                    letter_label(&a.alphabet.atoms, &a.alphabet.letters[li])
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn dpw_dot(a: &Dpw) -> String {
    let mut out = String::from("digraph dpw {\n  rankdir=LR;\n");
    for q in 0..a.n_states {
        let init = if a.initial == q { " color=blue" } else { "" };
        let _ = writeln!(out, "  q{q} [label=\"q{q}:{}\"{init}];", a.priority[q]);
    }
    for q in 0..a.n_states {
        for (li, &t) in a.trans[q].iter().enumerate() {
            let _ = writeln!(
                out,
                "  q{q} -> q{t} [label=\"{}\"];",
                letter_label(&a.alphabet.atoms, &a.alphabet.letters[li])
            );
        }
    }
    out.push_str("}\n");
    out
}
