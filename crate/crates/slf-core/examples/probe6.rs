use std::collections::BTreeMap;
use slf_core::formula::{Path, SlState};
use slf_core::game::Wcgs;
use slf_core::limits::Limits;
use slf_core::rat::Rat;
use slf_core::translate::check_redux;

fn splitmix(seed: &mut u64) -> u64 {
    *seed = seed.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *seed;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}
fn pick(seed: &mut u64, n: usize) -> usize { (splitmix(seed) as usize) % n }

fn random_x_body(seed: &mut u64, atoms: &[&str], depth: usize, size: usize) -> Path<SlState> {
    if size == 0 || (depth == 0 && splitmix(seed) % 2 == 0) {
        return Path::State(Box::new(SlState::atom(atoms[pick(seed, atoms.len())])));
    }
    match pick(seed, if depth > 0 { 4 } else { 3 }) {
        0 => Path::State(Box::new(SlState::atom(atoms[pick(seed, atoms.len())]))),
        1 => Path::Func(slf_core::func::neg1(), vec![random_x_body(seed, atoms, depth, size - 1)]),
        2 => Path::Func(
            if splitmix(seed) % 2 == 0 { slf_core::func::and2() } else { slf_core::func::or2() },
            vec![random_x_body(seed, atoms, depth, size / 2), random_x_body(seed, atoms, depth, size / 2)],
        ),
        _ => Path::Next(Box::new(random_x_body(seed, atoms, depth - 1, size - 1))),
    }
}

fn narrow_wcgs(seed: &mut u64, n_states: usize, n_agents: usize, n_actions: usize, atoms: &[&str]) -> Wcgs {
    let agents: Vec<String> = (0..n_agents).map(|i| format!("a{}", i + 1)).collect();
    let actions: Vec<String> = (0..n_actions).map(|i| format!("m{i}")).collect();
    let states: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let mut transitions = BTreeMap::new();
    let n_joint = n_actions.pow(n_agents as u32);
    for s in 0..n_states {
        let t1 = pick(seed, n_states);
        let t2 = pick(seed, n_states);
        for code in 0..n_joint {
            let mut joint = Vec::with_capacity(n_agents);
            let mut c = code;
            for _ in 0..n_agents { joint.push(actions[c % n_actions].clone()); c /= n_actions; }
            let dst = if splitmix(seed) % 2 == 0 { t1 } else { t2 };
            transitions.insert((states[s].clone(), joint), states[dst].clone());
        }
    }
    let labels: Vec<Vec<Rat>> = (0..n_states)
        .map(|_| atoms.iter().map(|_| if splitmix(seed) % 2 == 0 { Rat::ZERO } else { Rat::ONE }).collect())
        .collect();
    Wcgs::build(atoms.iter().map(|a| a.to_string()).collect(), agents, actions, states, "s0", labels, &transitions).unwrap()
}

fn narrow_sl_formula(seed: &mut u64, game: &Wcgs, n_quant: usize) -> SlState {
    let atoms: Vec<&str> = game.atoms.iter().map(|a| a.as_str()).collect();
    let inner = random_x_body(seed, &atoms, 1, 3);
    let body = slf_core::formula::normalize_sl_path(Path::Next(Box::new(Path::State(Box::new(
        SlState::atom(atoms[pick(seed, atoms.len())]),
    )))));
    let goal = if splitmix(seed) % 2 == 0 { slf_core::formula::normalize_sl_path(inner) } else { body };
    let vars: Vec<String> = (0..n_quant).map(|i| format!("v{i}")).collect();
    let mut f = SlState::all(goal);
    for (i, agent) in game.agents.iter().enumerate().rev() {
        f = SlState::bind(agent.clone(), vars[i % n_quant].clone(), f);
    }
    for var in vars.iter().rev() {
        f = if splitmix(seed) % 2 == 0 { SlState::exists(var.clone(), f) } else { SlState::forall(var.clone(), f) };
    }
    f
}

fn main() {
    let mut seed = 0xC6u64;
    for pair in 0..100 {
        let huge = Limits { max_enumeration: u64::MAX, ..Limits::default() };
        let _ = &huge;
        let two_agents = pick(&mut seed, 4) == 0;
        let g = if two_agents { narrow_wcgs(&mut seed, 3, 2, 2, &["p", "q"]) } else { narrow_wcgs(&mut seed, 3, 1, 2, &["p", "q"]) };
        let n_quant = if two_agents { 1 } else { 1 + pick(&mut seed, 2) };
        let f = narrow_sl_formula(&mut seed, &g, n_quant);
        let t0 = std::time::Instant::now();
        let limits = if pair == 93 { Limits { max_enumeration: 2_000_000_000, ..Limits::default() } } else { Limits::default() };
        match check_redux(&g, &f, 1, &limits) {
            Ok(rep) => {
                if !rep.all_equal() { println!("pair {pair}: MISMATCH on {f}"); return; }
                if t0.elapsed().as_millis() > 500 { println!("pair {pair}: slow {:?} {f}", t0.elapsed()); }
                if pair == 93 { println!("pair 93 finished in {:?}", t0.elapsed()); }
            }
            Err(e) => { println!("pair {pair}: ERR {e} ({f}) two_agents={two_agents}"); return; }
        }
    }
    println!("all ok");
}
