//! Shared generators for the integration and acceptance suites: seeded,
//! dependency-free randomness so every run is reproducible.

#![allow(dead_code)]

use std::collections::BTreeMap;

use slf_core::formula::{Ltl, Path, SlState};
use slf_core::func;
use slf_core::game::Wcgs;
use slf_core::kripke::Wks;
use slf_core::lasso::LassoWord;
use slf_core::rat::Rat;
use slf_core::values::ValueSet;
use slf_core::word::WordAlphabet;

pub fn splitmix(seed: &mut u64) -> u64 {
    *seed = seed.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *seed;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

pub fn pick(seed: &mut u64, n: usize) -> usize {
    (splitmix(seed) as usize) % n
}

pub fn r(n: u64, d: u64) -> Rat {
    Rat::new(n, d).unwrap()
}

/// Random total game with Boolean weights on `atoms`.
pub fn random_boolean_wcgs(
    seed: &mut u64,
    n_states: usize,
    n_agents: usize,
    n_actions: usize,
    atoms: &[&str],
) -> Wcgs {
    let agents: Vec<String> = (0..n_agents).map(|i| format!("a{}", i + 1)).collect();
    let actions: Vec<String> = (0..n_actions).map(|i| format!("m{i}")).collect();
    let states: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let mut transitions: BTreeMap<(String, Vec<String>), String> = BTreeMap::new();
    let n_joint = n_actions.pow(n_agents as u32);
    for s in 0..n_states {
        for code in 0..n_joint {
            let mut joint = Vec::with_capacity(n_agents);
            let mut c = code;
            for _ in 0..n_agents {
                joint.push(actions[c % n_actions].clone());
                c /= n_actions;
            }
            let dst = pick(seed, n_states);
            transitions.insert((states[s].clone(), joint), states[dst].clone());
        }
    }
    let labels: Vec<Vec<Rat>> = (0..n_states)
        .map(|_| {
            atoms
                .iter()
                .map(|_| if splitmix(seed) % 2 == 0 { Rat::ZERO } else { Rat::ONE })
                .collect()
        })
        .collect();
    Wcgs::build(
        atoms.iter().map(|a| a.to_string()).collect(),
        agents,
        actions,
        states,
        "s0",
        labels,
        &transitions,
    )
    .expect("generated game is total")
}

/// Random left-total Kripke structure with weights drawn from `base`.
pub fn random_wks(seed: &mut u64, n_states: usize, atoms: &[&str], base: &[Rat]) -> Wks {
    let states: Vec<String> = (0..n_states).map(|i| format!("k{i}")).collect();
    let mut edges = Vec::new();
    for s in 0..n_states {
        let mut any = false;
        for t in 0..n_states {
            if splitmix(seed) % 100 < 40 {
                edges.push((states[s].clone(), states[t].clone()));
                any = true;
            }
        }
        if !any {
            edges.push((states[s].clone(), states[pick(seed, n_states)].clone()));
        }
    }
    let labels: Vec<Vec<Rat>> = (0..n_states)
        .map(|_| atoms.iter().map(|_| base[pick(seed, base.len())]).collect())
        .collect();
    Wks::build(
        atoms.iter().map(|a| a.to_string()).collect(),
        states,
        "k0",
        &edges,
        labels,
    )
    .expect("generated structure is left-total")
}

/// Random X-bounded Boolean path body over the atoms: X nesting ≤ `depth`,
/// connectives min/max/neg only.
pub fn random_x_body(seed: &mut u64, atoms: &[&str], depth: usize, size: usize) -> Path<SlState> {
    if size == 0 || (depth == 0 && splitmix(seed) % 2 == 0) {
        return Path::State(Box::new(SlState::atom(atoms[pick(seed, atoms.len())])));
    }
    match pick(seed, if depth > 0 { 4 } else { 3 }) {
        0 => Path::State(Box::new(SlState::atom(atoms[pick(seed, atoms.len())]))),
        1 => Path::Func(
            func::neg1(),
            vec![random_x_body(seed, atoms, depth, size - 1)],
        ),
        2 => Path::Func(
            if splitmix(seed) % 2 == 0 { func::and2() } else { func::or2() },
            vec![
                random_x_body(seed, atoms, depth, size / 2),
                random_x_body(seed, atoms, depth, size / 2),
            ],
        ),
        _ => Path::Next(Box::new(random_x_body(seed, atoms, depth - 1, size - 1))),
    }
}

/// Random closed one-goal sentence: quantifier prefix over 1–2 variables,
/// a total binding prefix, and an X-bounded Boolean goal.
pub fn random_closed_sl1g(seed: &mut u64, game: &Wcgs, x_depth: usize) -> SlState {
    let atoms: Vec<&str> = game.atoms.iter().map(|a| a.as_str()).collect();
    let body = random_x_body(seed, &atoms, x_depth, 4);
    let body = slf_core::formula::normalize_sl_path(body);
    let n_vars = 1 + pick(seed, 2.min(game.n_agents()));
    let vars: Vec<String> = (0..n_vars).map(|i| format!("v{i}")).collect();
    let mut f = SlState::all(body);
    // bind every agent to some quantified variable
    for (i, agent) in game.agents.iter().enumerate().rev() {
        let var = &vars[i % n_vars];
        f = SlState::bind(agent.clone(), var.clone(), f);
    }
    for var in vars.iter().rev() {
        f = if splitmix(seed) % 2 == 0 {
            SlState::exists(var.clone(), f)
        } else {
            SlState::forall(var.clone(), f)
        };
    }
    f
}

/// Random LTL formula of at most `size` nodes over the atoms.
pub fn random_ltl(seed: &mut u64, atoms: &[&str], size: usize) -> Ltl {
    if size <= 1 {
        return Ltl::Atom(atoms[pick(seed, atoms.len())].to_string());
    }
    match pick(seed, 5) {
        0 => Ltl::Atom(atoms[pick(seed, atoms.len())].to_string()),
        1 => Ltl::neg(random_ltl(seed, atoms, size - 1)),
        2 => Ltl::next(random_ltl(seed, atoms, size - 1)),
        3 => Ltl::until(
            random_ltl(seed, atoms, size / 2),
            random_ltl(seed, atoms, size / 2),
        ),
        _ => Ltl::Func(
            if splitmix(seed) % 2 == 0 { func::and2() } else { func::or2() },
            vec![
                random_ltl(seed, atoms, size / 2),
                random_ltl(seed, atoms, size / 2),
            ],
        ),
    }
}

/// Random lasso over the letters of an alphabet.
pub fn random_lasso(seed: &mut u64, alphabet: &WordAlphabet, max_len: usize) -> LassoWord {
    let plen = pick(seed, max_len);
    let clen = 1 + pick(seed, max_len);
    let mut mk = |seed: &mut u64| -> Vec<Rat> {
        alphabet.letters[pick(seed, alphabet.n_letters())].clone()
    };
    LassoWord::new(
        alphabet.atoms.clone(),
        (0..plen).map(|_| mk(seed)).collect(),
        (0..clen).map(|_| mk(seed)).collect(),
    )
}

pub fn boolean_word_alphabet(atoms: &[&str]) -> WordAlphabet {
    WordAlphabet::new(
        atoms.iter().map(|a| a.to_string()).collect(),
        atoms.iter().map(|_| ValueSet::boolean()).collect(),
        &slf_core::limits::Limits::default(),
    )
    .unwrap()
}
