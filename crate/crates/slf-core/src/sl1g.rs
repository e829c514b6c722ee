//! Exact model checking for the one-goal fragment: a closed quantifier
//! prefix and a total binding prefix ahead of a single temporal goal.
//!
//! The decision procedure builds, per candidate value v, the word automaton
//! for "goal value ≥ v", determinizes it, takes the product with the game,
//! and solves the resulting concurrent multi-player parity game by
//! sequentializing each round in quantifier order — later agents observe the
//! earlier agents' current-round actions, which realizes the dependence of
//! later-quantified strategies on earlier-quantified ones. The satisfaction
//! value is the largest v for which the existential team wins; the sets of
//! winning thresholds are downward closed. Inner sentences are eliminated
//! first by recursion on the sentence nesting depth, their per-state values
//! entering the game as fresh weighted atoms.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::{Ltl, Path, SlState};
use crate::func::{FuncKind, FuncSpec};
use crate::game::{ActId, AgentId, StateId, Wcgs};
use crate::lasso::EvalError;
use crate::limits::{CapExceeded, Limits};
use crate::parity::{self, Owner, ParityGame};
use crate::predicate::Predicate;
use crate::rat::Rat;
use crate::safra;
use crate::values::{ltl_value_set_map, ValueSet};
use crate::word::{ltl_to_nbw, WordAlphabet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quant {
    Exists,
    Forall,
}

/// An ordered quantifier prefix over strategy variables.
pub type QuantPrefix = Vec<(Quant, String)>;

/// A binding prefix covering each agent exactly once: agent → variable.
pub type BindPrefix = Vec<(String, String)>;

/// A sentence of the one-goal fragment.
#[derive(Clone, Debug, PartialEq)]
pub struct Sentence {
    pub prefix: QuantPrefix,
    pub bindings: BindPrefix,
    pub goal: Goal,
}

/// Goal formulas: an LTL skeleton whose leaves are atoms or nested sentences.
#[derive(Clone, Debug, PartialEq)]
pub enum Goal {
    Atom(String),
    Sentence(Box<Sentence>),
    Next(Box<Goal>),
    Until(Box<Goal>, Box<Goal>),
    Func(alloc::sync::Arc<FuncSpec>, Vec<Goal>),
}

#[derive(Clone, Debug)]
pub enum Sl1gError {
    NotOneGoal(String),
    OpenCombination(String),
    Cap(CapExceeded),
    Eval(EvalError),
}

impl From<CapExceeded> for Sl1gError {
    fn from(e: CapExceeded) -> Sl1gError {
        Sl1gError::Cap(e)
    }
}

impl From<EvalError> for Sl1gError {
    fn from(e: EvalError) -> Sl1gError {
        Sl1gError::Eval(e)
    }
}

impl core::fmt::Display for Sl1gError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Sl1gError::NotOneGoal(m) => write!(f, "not a one-goal formula: {m}"),
            Sl1gError::OpenCombination(m) => write!(f, "open quantifier/binding combination: {m}"),
            Sl1gError::Cap(e) => write!(f, "{e}"),
            Sl1gError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl Goal {
    /// Sentence nesting depth of a goal: the depth of its deepest sentence.
    pub fn sentence_depth(&self) -> usize {
        match self {
            Goal::Atom(_) => 0,
            Goal::Sentence(s) => s.sentence_depth(),
            Goal::Next(g) => g.sentence_depth(),
            Goal::Until(a, b) => a.sentence_depth().max(b.sentence_depth()),
            Goal::Func(_, args) => args.iter().map(Goal::sentence_depth).max().unwrap_or(0),
        }
    }

    fn has_temporal(&self) -> bool {
        match self {
            Goal::Atom(_) | Goal::Sentence(_) => false,
            Goal::Next(_) | Goal::Until(_, _) => true,
            Goal::Func(_, args) => args.iter().any(Goal::has_temporal),
        }
    }
}

impl Sentence {
    pub fn sentence_depth(&self) -> usize {
        self.goal.sentence_depth() + 1
    }
}

/// Converts a closed SL state formula into the one-goal shape, recognizing
/// desugared universal quantifiers ¬⟪x⟫¬.
pub fn sentence_from_sl(f: &SlState, game: &Wcgs) -> Result<Sentence, Sl1gError> {
    match goal_from_sl(f, game)? {
        Goal::Sentence(s) => Ok(*s),
        other => {
            // a quantifier-free state formula is a degenerate sentence with
            // empty prefixes, useful only when it has no temporal operator
            if other.has_temporal() {
                Err(Sl1gError::NotOneGoal(
                    "temporal operators must sit under a quantifier/binding block".into(),
                ))
            } else {
                Ok(Sentence { prefix: Vec::new(), bindings: Vec::new(), goal: other })
            }
        }
    }
}

/// Converts an SL state formula into a goal (atom, sentence, or function
/// combination of those).
pub fn goal_from_sl(f: &SlState, game: &Wcgs) -> Result<Goal, Sl1gError> {
    match f {
        SlState::Atom(p) => Ok(Goal::Atom(p.clone())),
        SlState::Exists(_, _) => Ok(Goal::Sentence(Box::new(parse_block(f, game)?))),
        SlState::Func(spec, args) => {
            // ¬⟪x⟫¬φ starts a block with a universal quantifier
            if matches!(spec.kind, FuncKind::Neg) {
                if let SlState::Exists(_, _) = &args[0] {
                    return Ok(Goal::Sentence(Box::new(parse_block(f, game)?)));
                }
            }
            let parts = args
                .iter()
                .map(|a| goal_from_sl(a, game))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Goal::Func(spec.clone(), parts))
        }
        SlState::Bind(_, _, _) | SlState::All(_) => Err(Sl1gError::NotOneGoal(
            "bindings must immediately follow a quantifier prefix".into(),
        )),
    }
}

/// Parses ⟪x⟫/¬⟪x⟫¬ chains, then bindings, then `A ψ` (or a bare state
/// formula when all agents are bound and the goal is temporal-free).
fn parse_block(f: &SlState, game: &Wcgs) -> Result<Sentence, Sl1gError> {
    let mut prefix: QuantPrefix = Vec::new();
    let mut cur = f;
    loop {
        match cur {
            SlState::Exists(x, body) => {
                prefix.push((Quant::Exists, x.clone()));
                cur = body;
            }
            SlState::Func(spec, args) if matches!(spec.kind, FuncKind::Neg) => {
                // ¬⟪x⟫¬φ
                if let SlState::Exists(x, inner) = &args[0] {
                    if let SlState::Func(spec2, args2) = inner.as_ref() {
                        if matches!(spec2.kind, FuncKind::Neg) {
                            prefix.push((Quant::Forall, x.clone()));
                            cur = &args2[0];
                            continue;
                        }
                    }
                }
                break;
            }
            _ => break,
        }
    }
    let mut bindings: BindPrefix = Vec::new();
    while let SlState::Bind(agent, var, body) = cur {
        bindings.push((agent.clone(), var.clone()));
        cur = body;
    }
    // validity: every agent bound exactly once, every bound variable quantified
    let mut seen: Vec<&String> = bindings.iter().map(|(a, _)| a).collect();
    seen.sort();
    seen.dedup();
    if seen.len() != game.n_agents() || bindings.len() != game.n_agents() {
        return Err(Sl1gError::NotOneGoal(
            "the binding prefix must cover every agent exactly once".into(),
        ));
    }
    for (_, var) in &bindings {
        if !prefix.iter().any(|(_, x)| x == var) {
            return Err(Sl1gError::OpenCombination(alloc::format!(
                "variable `{var}` is bound but not quantified"
            )));
        }
    }
    let goal = match cur {
        SlState::All(psi) => goal_from_path(psi, game)?,
        other => goal_from_sl(other, game)?,
    };
    Ok(Sentence { prefix, bindings, goal })
}

fn goal_from_path(p: &Path<SlState>, game: &Wcgs) -> Result<Goal, Sl1gError> {
    Ok(match p {
        Path::State(s) => goal_from_sl(s, game)?,
        Path::Next(q) => Goal::Next(Box::new(goal_from_path(q, game)?)),
        Path::Until(a, b) => Goal::Until(
            Box::new(goal_from_path(a, game)?),
            Box::new(goal_from_path(b, game)?),
        ),
        Path::Func(spec, args) => Goal::Func(
            spec.clone(),
            args.iter()
                .map(|a| goal_from_path(a, game))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    })
}

/// Inserts single-purpose dummy variables so quantifiers strictly alternate
/// starting existentially. Dummies quantify variables no agent is bound to,
/// so the value is unchanged.
pub fn normalize_prefix(prefix: &QuantPrefix) -> QuantPrefix {
    let mut out: QuantPrefix = Vec::new();
    let mut fresh = 0usize;
    let mut expect = Quant::Exists;
    for (q, x) in prefix {
        while *q != expect {
            out.push((expect, alloc::format!("@dummy{fresh}")));
            fresh += 1;
            expect = flip(expect);
        }
        out.push((*q, x.clone()));
        expect = flip(expect);
    }
    if out.is_empty() {
        out.push((Quant::Exists, alloc::format!("@dummy{fresh}")));
    }
    return out;

    fn flip(q: Quant) -> Quant {
        match q {
            Quant::Exists => Quant::Forall,
            Quant::Forall => Quant::Exists,
        }
    }
}

/// A concurrent multi-player parity game: the product of a game structure
/// with a deterministic parity word automaton. Agents are ordered by the
/// quantifier prefix; even indices are existential.
#[derive(Clone, Debug)]
pub struct Cmpg {
    /// Quantifier per agent index (strictly alternating after normalization).
    pub agents: Vec<Quant>,
    /// For each agent, the game agents it controls (dummies control none).
    pub controls: Vec<Vec<AgentId>>,
    pub n_actions: usize,
    /// States are (game state, automaton state) pairs.
    pub states: Vec<(StateId, usize)>,
    pub initial: usize,
    pub priority: Vec<u32>,
    /// `trans[state][joint_code]` with joint codes over the CMPG agents.
    pub trans: Vec<Vec<usize>>,
}

/// Witness strategy for the first (existential) agent: memory is the
/// deterministic automaton state, updated by the observed game state.
#[derive(Clone, Debug)]
pub struct WitnessStrategy {
    pub variable: String,
    /// `memory_update[q][game_state] -> q'`.
    pub memory_update: Vec<Vec<usize>>,
    /// `output[q][game_state] -> action`, for states where it is defined.
    pub output: Vec<Vec<Option<ActId>>>,
    pub initial_memory: usize,
}

/// Builds the product of the game with a deterministic parity automaton over
/// the game's label alphabet. `letter_of[v]` maps states to letter indices.
pub fn build_cmpg(
    game: &Wcgs,
    prefix: &QuantPrefix,
    bindings: &BindPrefix,
    dpw_trans: &[Vec<usize>],
    dpw_priority: &[u32],
    dpw_initial: usize,
    letter_of: &[usize],
    limits: &Limits,
) -> Result<Cmpg, Sl1gError> {
    let agents: Vec<Quant> = prefix.iter().map(|(q, _)| *q).collect();
    let mut controls: Vec<Vec<AgentId>> = alloc::vec![Vec::new(); prefix.len()];
    for (agent, var) in bindings {
        let aid = game
            .agent_id(agent)
            .ok_or_else(|| Sl1gError::NotOneGoal(alloc::format!("unknown agent `{agent}`")))?;
        let k = prefix
            .iter()
            .position(|(_, x)| x == var)
            .ok_or_else(|| Sl1gError::OpenCombination(alloc::format!("unquantified `{var}`")))?;
        controls[k].push(aid);
    }
    let n_states = game.n_states() * dpw_trans.len();
    if n_states > limits.max_game_vertices {
        return Err(Sl1gError::Cap(CapExceeded {
            site: "product game states".into(),
            limit: limits.max_game_vertices as u64,
        }));
    }
    let mut states = Vec::with_capacity(n_states);
    let mut index: BTreeMap<(StateId, usize), usize> = BTreeMap::new();
    for v in game.states() {
        for q in 0..dpw_trans.len() {
            index.insert((v, q), states.len());
            states.push((v, q));
        }
    }
    let n_cmpg_joint = game.n_actions().checked_pow(prefix.len() as u32).ok_or_else(|| {
        Sl1gError::Cap(CapExceeded { site: "joint actions".into(), limit: u64::MAX })
    })?;
    let mut trans = Vec::with_capacity(states.len());
    for &(v, q) in &states {
        let q2 = dpw_trans[q][letter_of[v.0 as usize]];
        let mut row = Vec::with_capacity(n_cmpg_joint);
        for code in 0..n_cmpg_joint {
            // decode the CMPG joint action, then project onto game agents
            let mut c = code;
            let mut per_agent = alloc::vec![0usize; prefix.len()];
            for i in (0..prefix.len()).rev() {
                per_agent[i] = c % game.n_actions();
                c /= game.n_actions();
            }
            let mut joint = alloc::vec![ActId(0); game.n_agents()];
            for (k, ctl) in controls.iter().enumerate() {
                for &aid in ctl {
                    joint[aid.0 as usize] = ActId(per_agent[k] as u32);
                }
            }
            let v2 = game.step_joint(v, &joint);
            row.push(index[&(v2, q2)]);
        }
        trans.push(row);
    }
    let priority = states.iter().map(|&(_, q)| dpw_priority[q]).collect();
    Ok(Cmpg {
        agents,
        controls,
        n_actions: game.n_actions(),
        states,
        initial: index[&(game.initial, dpw_initial)],
        priority,
        trans,
    })
}

/// Round-sequentializes the CMPG into a turn-based parity game: within one
/// round the agents move in quantifier order, later agents seeing the
/// choices already made.
pub fn cmpg_to_parity_game(cmpg: &Cmpg, limits: &Limits) -> Result<(ParityGame, Vec<usize>), Sl1gError> {
    let k = cmpg.agents.len();
    let acts = cmpg.n_actions;
    // stage vertices per state: 1 + acts + acts^2 + …
    let mut stage_offsets = alloc::vec![0usize; k + 1];
    let mut total_per_state = 0usize;
    for j in 0..=k {
        stage_offsets[j] = total_per_state;
        if j < k {
            total_per_state += acts.pow(j as u32);
        }
    }
    let per_state = total_per_state;
    let n_vertices = cmpg.states.len() * per_state;
    if n_vertices > limits.max_game_vertices {
        return Err(Sl1gError::Cap(CapExceeded {
            site: "sequentialized game vertices".into(),
            limit: limits.max_game_vertices as u64,
        }));
    }
    // vertex id: state * per_state + stage_offset[j] + partial-action code
    let vid = |s: usize, j: usize, partial: usize| s * per_state + stage_offsets[j] + partial;
    let mut owner = Vec::with_capacity(n_vertices);
    let mut priority = Vec::with_capacity(n_vertices);
    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(n_vertices);
    for s in 0..cmpg.states.len() {
        for j in 0..k {
            for partial in 0..acts.pow(j as u32) {
                let _ = vid(s, j, partial);
                owner.push(match cmpg.agents[j] {
                    Quant::Exists => Owner::Even,
                    Quant::Forall => Owner::Odd,
                });
                // only the round-start vertex carries the state's priority
                priority.push(if j == 0 && partial == 0 { cmpg.priority[s] } else { 0 });
                let mut succ = Vec::with_capacity(acts);
                for a in 0..acts {
                    let next_partial = partial * acts + a;
                    if j + 1 < k {
                        succ.push(vid(s, j + 1, next_partial));
                    } else {
                        succ.push(cmpg.trans[s][next_partial] * per_state);
                    }
                }
                edges.push(succ);
            }
        }
    }
    let game = ParityGame::new(owner, priority, edges)
        .map_err(|e| Sl1gError::NotOneGoal(alloc::format!("{e}")))?;
    let state_vertex: Vec<usize> = (0..cmpg.states.len()).map(|s| s * per_state).collect();
    Ok((game, state_vertex))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Team {
    Existential,
    Universal,
}

/// Decides the winner of the CMPG and extracts the witness for agent 0.
pub fn solve_cmpg(
    cmpg: &Cmpg,
    limits: &Limits,
) -> Result<(Team, Option<WitnessStrategy>), Sl1gError> {
    let (game, state_vertex) = cmpg_to_parity_game(cmpg, limits)?;
    let sol = parity::solve(&game);
    if sol.winner[state_vertex[cmpg.initial]] == Owner::Odd {
        return Ok((Team::Universal, None));
    }
    let prefix: QuantPrefix = cmpg.agents.iter().map(|&q| (q, String::new())).collect();
    let witness = extract_witness(cmpg, &game, &sol, &state_vertex, &prefix);
    Ok((Team::Existential, witness))
}

/// Result of checking a one-goal sentence.
#[derive(Clone, Debug)]
pub struct Sl1gResult {
    pub value: Rat,
    pub witness: Option<WitnessStrategy>,
    /// (game states, automaton states) of the largest product built.
    pub telemetry: Vec<(usize, usize)>,
}

/// Computes the exact satisfaction value of a closed one-goal formula at
/// every state of the game; entry `v.0` is the value at state `v`.
pub fn check_sl1g_all_states(
    game: &Wcgs,
    sentence: &Sentence,
    limits: &Limits,
) -> Result<Vec<Sl1gResult>, Sl1gError> {
    // eliminate inner sentences bottom-up: their per-state values become
    // fresh weighted atoms in an extended game
    let mut extended = game.clone();
    let mut goal = sentence.goal.clone();
    loop {
        let mut replaced = false;
        goal = eliminate_one_sentence(goal, &mut extended, &mut replaced, limits)?;
        if !replaced {
            break;
        }
    }
    // goal is now sentence-free: an LTL formula over the extended atoms
    let ltl = goal_to_ltl(&goal)?;
    check_flat_sentence(&extended, &sentence.prefix, &sentence.bindings, &ltl, limits)
}

/// Value of the sentence at the initial state.
pub fn check_sl1g(game: &Wcgs, sentence: &Sentence, limits: &Limits) -> Result<Sl1gResult, Sl1gError> {
    let all = check_sl1g_all_states(game, sentence, limits)?;
    Ok(all[game.initial.0 as usize].clone())
}

/// Replaces the first innermost sentence of the goal by a fresh weighted
/// atom via the per-state disjunction gadget ⋁_v (p_v ∧ p_φ).
fn eliminate_one_sentence(
    goal: Goal,
    extended: &mut Wcgs,
    replaced: &mut bool,
    limits: &Limits,
) -> Result<Goal, Sl1gError> {
    if *replaced {
        return Ok(goal);
    }
    Ok(match goal {
        Goal::Sentence(s) => {
            // innermost-first
            let inner = Sentence {
                prefix: s.prefix.clone(),
                bindings: s.bindings.clone(),
                goal: eliminate_one_sentence(s.goal.clone(), extended, replaced, limits)?,
            };
            if *replaced {
                return Ok(Goal::Sentence(Box::new(inner)));
            }
            *replaced = true;
            let values = check_sl1g_all_states(extended, &inner, limits)?;
            let atom = fresh_atom(extended, "val");
            let state_atoms = ensure_state_atoms(extended);
            extended.atoms.push(atom.clone());
            for v in 0..extended.state_names.len() {
                let val = values[v].value;
                extended.labels[v].push(val);
            }
            // Φ = ⋁_v (p_v ∧ p_φ): pointwise equal to the fresh atom itself
            let mut options = Vec::new();
            for sa in &state_atoms {
                options.push(Goal::Func(
                    crate::func::and2(),
                    alloc::vec![Goal::Atom(sa.clone()), Goal::Atom(atom.clone())],
                ));
            }
            match options.len() {
                1 => options.pop().expect("one"),
                n => Goal::Func(crate::func::max_n(n), options),
            }
        }
        Goal::Atom(p) => Goal::Atom(p),
        Goal::Next(g) => {
            Goal::Next(Box::new(eliminate_one_sentence(*g, extended, replaced, limits)?))
        }
        Goal::Until(a, b) => {
            let a2 = eliminate_one_sentence(*a, extended, replaced, limits)?;
            let b2 = eliminate_one_sentence(*b, extended, replaced, limits)?;
            Goal::Until(Box::new(a2), Box::new(b2))
        }
        Goal::Func(spec, args) => {
            let mut out = Vec::with_capacity(args.len());
            for a in args {
                out.push(eliminate_one_sentence(a, extended, replaced, limits)?);
            }
            Goal::Func(spec, out)
        }
    })
}

fn fresh_atom(game: &Wcgs, base: &str) -> String {
    let mut cand = alloc::format!("@{base}{}", game.atoms.len());
    while game.atoms.contains(&cand) {
        cand.push('\'');
    }
    cand
}

/// Fresh Boolean atoms marking each state, added once to the extended game.
fn ensure_state_atoms(game: &mut Wcgs) -> Vec<String> {
    let marker = game
        .state_names
        .iter()
        .map(|n| alloc::format!("@at_{n}"))
        .collect::<Vec<_>>();
    if game.atoms.contains(&marker[0]) {
        return marker;
    }
    for (i, m) in marker.iter().enumerate() {
        game.atoms.push(m.clone());
        for v in 0..game.state_names.len() {
            game.labels[v].push(if v == i { Rat::ONE } else { Rat::ZERO });
        }
    }
    marker
}

fn goal_to_ltl(goal: &Goal) -> Result<Ltl, Sl1gError> {
    Ok(match goal {
        Goal::Atom(p) => Ltl::Atom(p.clone()),
        Goal::Sentence(_) => {
            return Err(Sl1gError::NotOneGoal("inner sentence not eliminated".into()))
        }
        Goal::Next(g) => Ltl::next(goal_to_ltl(g)?),
        Goal::Until(a, b) => Ltl::until(goal_to_ltl(a)?, goal_to_ltl(b)?),
        Goal::Func(spec, args) => Ltl::Func(
            spec.clone(),
            args.iter().map(goal_to_ltl).collect::<Result<Vec<_>, _>>()?,
        ),
    })
}

/// Decides a sentence whose goal is a plain LTL formula, at every state.
fn check_flat_sentence(
    game: &Wcgs,
    prefix: &QuantPrefix,
    bindings: &BindPrefix,
    ltl: &Ltl,
    limits: &Limits,
) -> Result<Vec<Sl1gResult>, Sl1gError> {
    let prefix = normalize_prefix(prefix);
    // alphabet: one letter per distinct restriction of the labels to the
    // goal's atoms
    let atoms: Vec<String> = ltl.atoms().into_iter().collect();
    let atom_sets: Vec<ValueSet> = atoms
        .iter()
        .map(|a| {
            let idx = game.atoms.iter().position(|x| x == a);
            match idx {
                Some(i) => ValueSet::base_from(game.labels.iter().map(|row| row[i])),
                None => ValueSet::boolean(),
            }
        })
        .collect();
    let alphabet = WordAlphabet::new(atoms.clone(), atom_sets, limits)?;
    let letter_of: Vec<usize> = game
        .states()
        .map(|v| {
            let letter: Vec<Rat> = atoms
                .iter()
                .map(|a| game.label(v, a).unwrap_or(Rat::ZERO))
                .collect();
            alphabet.letter_index(&letter).expect("state letter in alphabet")
        })
        .collect();
    // candidate values, descending; 0 always wins
    let sets: BTreeMap<String, ValueSet> = atoms
        .iter()
        .zip(alphabet.atom_values.iter())
        .map(|(a, s)| (a.clone(), s.clone()))
        .collect();
    let candidates = ltl_value_set_map(ltl, &sets).map_err(|e| {
        Sl1gError::Eval(EvalError::Func(e))
    })?;
    let n_states = game.n_states();
    let mut results: Vec<Option<Sl1gResult>> = alloc::vec![None; n_states];
    let mut telemetry: Vec<(usize, usize)> = Vec::new();
    for v in candidates.iter().rev() {
        if results.iter().all(|r| r.is_some()) {
            break;
        }
        if v.is_zero() {
            break;
        }
        let nbw = ltl_to_nbw(ltl, &alphabet, &Predicate::at_least(*v), limits)?;
        let dpw = safra::determinize(&nbw, limits)?;
        telemetry.push((game.n_states(), dpw.n_states));
        let cmpg = build_cmpg(
            game,
            &prefix,
            bindings,
            &dpw.trans,
            &dpw.priority,
            dpw.initial,
            &letter_of,
            limits,
        )?;
        // one parity-game solution answers the question at every state
        let (pg, state_vertex) = cmpg_to_parity_game(&cmpg, limits)?;
        let sol = parity::solve(&pg);
        for s in game.states() {
            let si = s.0 as usize;
            if results[si].is_some() {
                continue;
            }
            let cmpg_state = cmpg
                .states
                .iter()
                .position(|&(gv, q)| gv == s && q == dpw.initial)
                .expect("product state exists");
            if sol.winner[state_vertex[cmpg_state]] == Owner::Even {
                // largest winning threshold reached at this state
                let witness = extract_witness(&cmpg, &pg, &sol, &state_vertex, &prefix);
                results[si] = Some(Sl1gResult {
                    value: *v,
                    witness,
                    telemetry: telemetry.clone(),
                });
            }
        }
    }
    Ok(results
        .into_iter()
        .map(|r| {
            r.unwrap_or(Sl1gResult { value: Rat::ZERO, witness: None, telemetry: telemetry.clone() })
        })
        .collect())
}

fn extract_witness(
    cmpg: &Cmpg,
    pg: &ParityGame,
    sol: &parity::Solution,
    state_vertex: &[usize],
    prefix: &QuantPrefix,
) -> Option<WitnessStrategy> {
    if !matches!(cmpg.agents.first(), Some(Quant::Exists)) {
        return None;
    }
    let n_game_states = cmpg.states.iter().map(|&(v, _)| v.0 as usize + 1).max()?;
    let n_q = cmpg.states.iter().map(|&(_, q)| q + 1).max().unwrap_or(1);
    let mut memory_update = alloc::vec![alloc::vec![0usize; n_game_states]; n_q];
    let mut output = alloc::vec![alloc::vec![None; n_game_states]; n_q];
    for (s, &(v, q)) in cmpg.states.iter().enumerate() {
        let q2 = cmpg.states[cmpg.trans[s][0]].1;
        memory_update[q][v.0 as usize] = q2;
        let vtx = state_vertex[s];
        if sol.winner[vtx] == Owner::Even {
            if let Some(succ) = sol.strategy[vtx] {
                let a = pg.edges[vtx].iter().position(|&u| u == succ)?;
                output[q][v.0 as usize] = Some(ActId(a as u32));
            }
        }
    }
    Some(WitnessStrategy {
        variable: prefix.first().map(|(_, x)| x.clone()).unwrap_or_default(),
        memory_update,
        output,
        initial_memory: cmpg.states[cmpg.initial].1,
    })
}

/// Equilibrium verdict for a memoryless strategy profile.
#[derive(Clone, Debug)]
pub struct NeReport {
    /// 1 iff no agent can improve by a unilateral deviation.
    pub is_equilibrium: bool,
    /// Per agent: the optimal value reachable by deviating alone.
    pub best_responses: Vec<Rat>,
    /// Per agent: the value of its goal under the profile.
    pub current_values: Vec<Rat>,
    /// The maximal deviation benefit max_i max{0, best_i − current_i}.
    pub max_gain: Rat,
}

/// Checks a memoryless profile against one goal per agent: each
/// best-response query fixes the other agents' strategies inside the
/// structure and becomes a single-agent one-goal sentence.
pub fn check_ne_profile(
    game: &Wcgs,
    profile: &[Vec<ActId>],
    goals: &[Ltl],
    limits: &Limits,
) -> Result<NeReport, Sl1gError> {
    assert_eq!(profile.len(), game.n_agents());
    assert_eq!(goals.len(), game.n_agents());
    // the unique play of the profile, as a lasso over the game atoms
    let lasso = profile_lasso(game, profile, game.initial);
    let mut current_values = Vec::with_capacity(goals.len());
    for goal in goals {
        current_values.push(crate::lasso::eval_ltl_lasso(goal, &lasso, 0)?);
    }
    let mut best_responses = Vec::with_capacity(goals.len());
    for i in 0..game.n_agents() {
        let dev_game = deviation_game(game, profile, i);
        let sentence = Sentence {
            prefix: alloc::vec![(Quant::Exists, String::from("y"))],
            bindings: alloc::vec![(dev_game.agents[0].clone(), String::from("y"))],
            goal: ltl_as_goal(&goals[i]),
        };
        best_responses.push(check_sl1g(&dev_game, &sentence, limits)?.value);
    }
    let mut max_gain = Rat::ZERO;
    let mut is_equilibrium = true;
    for (b, u) in best_responses.iter().zip(&current_values) {
        if b > u {
            is_equilibrium = false;
        }
        max_gain = max_gain.max(b.diff(u));
    }
    Ok(NeReport { is_equilibrium, best_responses, current_values, max_gain })
}

fn ltl_as_goal(f: &Ltl) -> Goal {
    match f {
        Ltl::Atom(p) => Goal::Atom(p.clone()),
        Ltl::Next(q) => Goal::Next(Box::new(ltl_as_goal(q))),
        Ltl::Until(a, b) => Goal::Until(Box::new(ltl_as_goal(a)), Box::new(ltl_as_goal(b))),
        Ltl::Func(spec, args) => Goal::Func(spec.clone(), args.iter().map(ltl_as_goal).collect()),
    }
}

/// The unique play of a total memoryless profile, as a lasso word labelled
/// with the game's atoms.
pub fn profile_lasso(game: &Wcgs, profile: &[Vec<ActId>], start: StateId) -> crate::lasso::LassoWord {
    let mut seen: BTreeMap<StateId, usize> = BTreeMap::new();
    let mut states = Vec::new();
    let mut cur = start;
    let split = loop {
        if let Some(&i) = seen.get(&cur) {
            break i;
        }
        seen.insert(cur, states.len());
        states.push(cur);
        let joint: Vec<ActId> =
            profile.iter().map(|per_state| per_state[cur.0 as usize]).collect();
        cur = game.step_joint(cur, &joint);
    };
    crate::lasso::LassoWord::new(
        game.atoms.clone(),
        states[..split].iter().map(|&s| game.label_row(s).to_vec()).collect(),
        states[split..].iter().map(|&s| game.label_row(s).to_vec()).collect(),
    )
}

/// Restriction of the game to a single deviating agent; the others play the
/// profile, read off the current state.
fn deviation_game(game: &Wcgs, profile: &[Vec<ActId>], deviator: usize) -> Wcgs {
    let mut transitions = BTreeMap::new();
    for v in game.states() {
        for a in 0..game.n_actions() {
            let mut joint: Vec<ActId> =
                profile.iter().map(|per_state| per_state[v.0 as usize]).collect();
            joint[deviator] = ActId(a as u32);
            let dst = game.step_joint(v, &joint);
            transitions.insert(
                (
                    game.state_names[v.0 as usize].clone(),
                    alloc::vec![game.actions[a].clone()],
                ),
                game.state_names[dst.0 as usize].clone(),
            );
        }
    }
    Wcgs::build(
        game.atoms.clone(),
        alloc::vec![game.agents[deviator].clone()],
        game.actions.clone(),
        game.state_names.clone(),
        &game.state_names[game.initial.0 as usize],
        game.labels.clone(),
        &transitions,
    )
    .expect("restriction of a total game is total")
}
