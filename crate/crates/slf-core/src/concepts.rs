//! Builders for the standard solution-concept formulas: Nash equilibria and
//! their quantitative distance, secure equilibria, weak/strong rational
//! synthesis, core equilibria, and the synthesis prefixes.
//!
//! Each builder returns the formula with the profile variables free; the
//! caller decides how to quantify them.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::{Path, SlPath, SlState};
use crate::func;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Concept {
    /// All agents play a best response: value 1 iff the profile is a NE.
    Ne,
    /// Maximal benefit any agent can get from a selfish deviation.
    NeBar,
    /// Secure equilibrium for two agents.
    Se,
    /// Weak rational synthesis: system objective ∧ environment NE.
    WRs,
    /// Strong rational synthesis: objective against the worst environment NE.
    SRs,
    /// Core equilibrium: no coalition has a beneficial deviation.
    Core,
    /// Controller-vs-environment synthesis ⟪x⟫⟦y⟧(c,x)(e,y) A ψ.
    Synt,
    /// Multi-component synthesis with alternating quantifiers.
    SyntMulti,
}

#[derive(Clone, Debug)]
pub struct ConceptParams {
    pub agents: Vec<String>,
    /// One goal per agent (NE/NEbar/SE/Core), system-then-components
    /// (WRs/SRs), or a single goal (Synt/SyntMulti).
    pub goals: Vec<SlPath>,
    /// Profile variable names, one per agent.
    pub profile_vars: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConceptError(pub String);

impl core::fmt::Display for ConceptError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "bad solution-concept parameters: {}", self.0)
    }
}

fn conj(mut args: Vec<SlState>) -> SlState {
    match args.len() {
        0 => SlState::Func(func::const_one(), Vec::new()),
        1 => args.pop().expect("one element"),
        n => SlState::Func(func::min_n(n), args),
    }
}

fn disj(mut args: Vec<SlState>) -> SlState {
    match args.len() {
        0 => SlState::Func(func::const_rat(crate::rat::Rat::ZERO), Vec::new()),
        1 => args.pop().expect("one element"),
        n => SlState::Func(func::max_n(n), args),
    }
}

fn bind_all(pairs: &[(String, String)], body: SlState) -> SlState {
    pairs
        .iter()
        .rev()
        .fold(body, |acc, (a, x)| SlState::bind(a.clone(), x.clone(), acc))
}

fn a_goal(goal: &SlPath) -> SlState {
    SlState::all(goal.clone())
}

pub fn build_solution_concept(
    concept: Concept,
    params: &ConceptParams,
) -> Result<SlState, ConceptError> {
    let n = params.agents.len();
    match concept {
        Concept::Ne => {
            check(n >= 1 && params.goals.len() == n && params.profile_vars.len() == n, "NE needs one goal and one profile variable per agent")?;
            let profile: Vec<(String, String)> = params
                .agents
                .iter()
                .cloned()
                .zip(params.profile_vars.iter().cloned())
                .collect();
            // ⋀_i ⟪y_i⟫ ((a_i, y_i) A φ_i) ⪯ A φ_i
            let mut conjuncts = Vec::new();
            for (i, (agent, goal)) in params.agents.iter().zip(params.goals.iter()).enumerate() {
                let yi = format!("y{i}");
                let best = SlState::exists(
                    yi.clone(),
                    SlState::bind(agent.clone(), yi, a_goal(goal)),
                );
                conjuncts.push(SlState::Func(
                    func::leq2(),
                    alloc::vec![best, a_goal(goal)],
                ));
            }
            Ok(bind_all(&profile, conj(conjuncts)))
        }
        Concept::NeBar => {
            check(n >= 1 && params.goals.len() == n && params.profile_vars.len() == n, "NEbar needs one goal and one profile variable per agent")?;
            let profile: Vec<(String, String)> = params
                .agents
                .iter()
                .cloned()
                .zip(params.profile_vars.iter().cloned())
                .collect();
            // ⟪y⟫ bindings ⋁_i diff((a_i, y) A φ_i, A φ_i)
            let mut disjuncts = Vec::new();
            for (agent, goal) in params.agents.iter().zip(params.goals.iter()) {
                let deviated = SlState::bind(agent.clone(), "y", a_goal(goal));
                disjuncts.push(SlState::Func(
                    func::diff2(),
                    alloc::vec![deviated, a_goal(goal)],
                ));
            }
            Ok(SlState::exists("y", bind_all(&profile, disj(disjuncts))))
        }
        Concept::Se => {
            check(n == 2 && params.goals.len() == 2 && params.profile_vars.len() == 2, "SE is defined for exactly two agents")?;
            let profile: Vec<(String, String)> = params
                .agents
                .iter()
                .cloned()
                .zip(params.profile_vars.iter().cloned())
                .collect();
            let mut conjuncts = Vec::new();
            for i in 0..2 {
                let agent = params.agents[i].clone();
                let dev1 = SlState::bind(agent.clone(), "y", a_goal(&params.goals[0]));
                let dev2 = SlState::bind(agent.clone(), "y", a_goal(&params.goals[1]));
                conjuncts.push(SlState::exists(
                    "y",
                    SlState::Func(
                        func::lexleq((i + 1) as u8),
                        alloc::vec![dev1, dev2, a_goal(&params.goals[0]), a_goal(&params.goals[1])],
                    ),
                ));
            }
            Ok(bind_all(&profile, conj(conjuncts)))
        }
        Concept::WRs => {
            check(n >= 2 && params.goals.len() == n && params.profile_vars.len() == n, "weak RS needs the system agent plus at least one component")?;
            let profile: Vec<(String, String)> = params
                .agents
                .iter()
                .cloned()
                .zip(params.profile_vars.iter().cloned())
                .collect();
            let ne = build_solution_concept(
                Concept::Ne,
                &ConceptParams {
                    agents: params.agents[1..].to_vec(),
                    goals: params.goals[1..].to_vec(),
                    profile_vars: params.profile_vars[1..].to_vec(),
                },
            )?;
            let body = SlState::Func(func::and2(), alloc::vec![a_goal(&params.goals[0]), ne]);
            Ok(bind_all(&profile, body))
        }
        Concept::SRs => {
            check(n >= 2 && params.goals.len() == n && params.profile_vars.len() == n, "strong RS needs the system agent plus at least one component")?;
            let profile: Vec<(String, String)> = params
                .agents
                .iter()
                .cloned()
                .zip(params.profile_vars.iter().cloned())
                .collect();
            let ne = build_solution_concept(
                Concept::Ne,
                &ConceptParams {
                    agents: params.agents[1..].to_vec(),
                    goals: params.goals[1..].to_vec(),
                    profile_vars: params.profile_vars[1..].to_vec(),
                },
            )?;
            let body = SlState::Func(
                func::or2(),
                alloc::vec![SlState::neg(ne), a_goal(&params.goals[0])],
            );
            let bound = bind_all(&profile, body);
            // components' strategies are universally quantified
            Ok(params.profile_vars[1..]
                .iter()
                .rev()
                .fold(bound, |acc, x| SlState::forall(x.clone(), acc)))
        }
        Concept::Core => {
            check(n >= 1 && params.goals.len() == n && params.profile_vars.len() == n, "core needs one goal and one profile variable per agent")?;
            let mut coalition_conjuncts = Vec::new();
            for mask in 0..(1u32 << n) {
                let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                let outsiders: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
                let dev_profile: Vec<(String, String)> = params
                    .agents
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (a.clone(), format!("y{i}")))
                    .collect();
                let orig_profile: Vec<(String, String)> = params
                    .agents
                    .iter()
                    .cloned()
                    .zip(params.profile_vars.iter().cloned())
                    .collect();
                let inner = conj(
                    members
                        .iter()
                        .map(|&i| {
                            SlState::Func(
                                func::leq2(),
                                alloc::vec![
                                    bind_all(&dev_profile, a_goal(&params.goals[i])),
                                    bind_all(&orig_profile, a_goal(&params.goals[i])),
                                ],
                            )
                        })
                        .collect(),
                );
                // members deviate universally, outsiders respond existentially
                let mut quantified = inner;
                for &j in outsiders.iter().rev() {
                    quantified = SlState::exists(format!("y{j}"), quantified);
                }
                for &i in members.iter().rev() {
                    quantified = SlState::forall(format!("y{i}"), quantified);
                }
                coalition_conjuncts.push(quantified);
            }
            Ok(conj(coalition_conjuncts))
        }
        Concept::Synt => {
            check(n == 2 && params.goals.len() == 1 && params.profile_vars.len() == 2, "synthesis needs a controller, an environment and one goal")?;
            let (c, e) = (params.agents[0].clone(), params.agents[1].clone());
            let (x, y) = (params.profile_vars[0].clone(), params.profile_vars[1].clone());
            Ok(SlState::exists(
                x.clone(),
                SlState::forall(
                    y.clone(),
                    SlState::bind(c, x, SlState::bind(e, y, SlState::all(params.goals[0].clone()))),
                ),
            ))
        }
        Concept::SyntMulti => {
            check(n >= 2 && n % 2 == 0 && params.goals.len() == 1 && params.profile_vars.len() == n, "multi-component synthesis needs controller/environment pairs and one goal")?;
            let half = n / 2;
            let mut body = SlState::all(params.goals[0].clone());
            // bindings (c_1,x_1)(e_1,y_1)…, innermost last
            let mut pairs = Vec::new();
            for i in 0..half {
                pairs.push((params.agents[i].clone(), params.profile_vars[i].clone()));
                pairs.push((params.agents[half + i].clone(), params.profile_vars[half + i].clone()));
            }
            body = bind_all(&pairs, body);
            // ⟪x_1⟫⟦y_1⟧ ⋯ ⟪x_n⟫⟦y_n⟧
            for i in (0..half).rev() {
                body = SlState::forall(params.profile_vars[half + i].clone(), body);
                body = SlState::exists(params.profile_vars[i].clone(), body);
            }
            Ok(body)
        }
    }
}

fn check(ok: bool, msg: &str) -> Result<(), ConceptError> {
    if ok {
        Ok(())
    } else {
        Err(ConceptError(String::from(msg)))
    }
}

/// The rescue/spy formulas from the drone setting, with the distance already
/// provided as an atomic proposition by the structure author.
pub fn drone_rescue(carrier: &str, guard: &str, dist_atom: &str, safe_atom: &str) -> SlState {
    let goal: SlPath = Path::Until(
        Box::new(Path::State(Box::new(SlState::atom(dist_atom)))),
        Box::new(Path::State(Box::new(SlState::atom(safe_atom)))),
    );
    SlState::exists(
        "x",
        SlState::exists(
            "y",
            SlState::bind(carrier, "x", SlState::bind(guard, "y", SlState::all(goal))),
        ),
    )
}

/// Spy variant: the guard sees the villain's strategy before choosing.
pub fn drone_spy(
    carrier: &str,
    guard: &str,
    villain: &str,
    dist_atom: &str,
    safe_atom: &str,
) -> SlState {
    let goal: SlPath = Path::Until(
        Box::new(Path::State(Box::new(SlState::atom(dist_atom)))),
        Box::new(Path::State(Box::new(SlState::atom(safe_atom)))),
    );
    SlState::exists(
        "x",
        SlState::forall(
            "z",
            SlState::exists(
                "y",
                SlState::bind(
                    carrier,
                    "x",
                    SlState::bind(guard, "y", SlState::bind(villain, "z", SlState::all(goal))),
                ),
            ),
        ),
    )
}
