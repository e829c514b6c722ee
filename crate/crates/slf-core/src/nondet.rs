//! Alternation removal and Boolean-atom projection for parity tree automata.
//!
//! A nondeterministic run annotates every node with the set of alternating
//! states active there plus one resolved choice per state; along each branch
//! this induces a DAG of states, and the run is accepting iff every infinite
//! path of every such DAG satisfies the parity condition. The construction
//! guesses the annotations and checks the per-branch condition with a
//! deterministic automaton: the Büchi automaton for "some DAG path has an
//! odd dominant priority" is determinized and complemented. Positional
//! determinacy of the acceptance game makes the guessed annotations complete.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::limits::{CapExceeded, Limits};
use crate::safra::{NbwSource, SafraDet};
use crate::tree::{Apt, Move, Npt, Pbf, TreeAlphabet, Upt};

/// Level-to-level transition relation of the run DAG along one branch.
type EdgeLetter = Vec<(u32, u32)>;

/// NBW over edge letters accepting exactly the sequences containing an
/// infinite path with odd dominant priority.
struct BadPathNbw<'a> {
    apt: &'a Apt,
    odd_priorities: Vec<u32>,
}

impl<'a> BadPathNbw<'a> {
    fn new(apt: &'a Apt) -> BadPathNbw<'a> {
        let odd_priorities: Vec<u32> = {
            let set: BTreeSet<u32> =
                apt.priority.iter().copied().filter(|p| p % 2 == 1).collect();
            set.into_iter().collect()
        };
        BadPathNbw { apt, odd_priorities }
    }

    fn n(&self) -> usize {
        self.apt.n_states
    }

    // phase-1 states are plain automaton states; phase-2 states commit to a
    // dominant odd priority
    fn phase2_id(&self, q: u32, d_idx: usize) -> u32 {
        (self.n() + (q as usize) * self.odd_priorities.len() + d_idx) as u32
    }
}

impl<'a> NbwSource for BadPathNbw<'a> {
    type Letter = EdgeLetter;

    fn initial_states(&self) -> Vec<u32> {
        alloc::vec![self.apt.initial as u32]
    }

    fn successors(&self, state: u32, letter: &EdgeLetter) -> Vec<u32> {
        let n = self.n() as u32;
        let mut out = Vec::new();
        if state < n {
            let q = state;
            for &(src, dst) in letter {
                if src != q {
                    continue;
                }
                out.push(dst);
                for (di, &d) in self.odd_priorities.iter().enumerate() {
                    if self.apt.priority[dst as usize] <= d {
                        out.push(self.phase2_id(dst, di));
                    }
                }
            }
        } else {
            let rest = (state - n) as usize;
            let q = (rest / self.odd_priorities.len()) as u32;
            let di = rest % self.odd_priorities.len();
            let d = self.odd_priorities[di];
            for &(src, dst) in letter {
                if src == q && self.apt.priority[dst as usize] <= d {
                    out.push(self.phase2_id(dst, di));
                }
            }
        }
        out
    }

    fn is_accepting(&self, state: u32) -> bool {
        let n = self.n() as u32;
        if state < n {
            return false;
        }
        let rest = (state - n) as usize;
        let q = rest / self.odd_priorities.len();
        let di = rest % self.odd_priorities.len();
        self.apt.priority[q] == self.odd_priorities[di]
    }

    fn state_bound(&self) -> usize {
        self.n() * (1 + self.odd_priorities.len())
    }
}

/// One resolved choice at a node: the per-child state sets and DAG edges.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Routed {
    per_child: Vec<(BTreeSet<u32>, EdgeLetter)>,
}

/// Enumerates Eve's resolved choices for the active set `s` on a letter with
/// `arity` children, given each state's minimal transition models. Distinct
/// routed outcomes are deduplicated on the fly; the cap bounds the number of
/// distinct partial choices, not the raw enumeration.
fn enumerate_choices(
    s: &BTreeSet<u32>,
    arity: usize,
    models_of: &dyn Fn(u32) -> Vec<BTreeSet<Move>>,
    cap: usize,
) -> Result<Vec<Routed>, CapExceeded> {
    // per-state routed alternatives, each already normalized
    let mut acc: BTreeSet<Routed> = BTreeSet::new();
    acc.insert(Routed { per_child: alloc::vec![(BTreeSet::new(), Vec::new()); arity] });
    for &q in s {
        let models = models_of(q);
        if models.is_empty() {
            return Ok(Vec::new());
        }
        // expand this state's models into normalized per-child deltas
        let mut deltas: BTreeSet<Routed> = BTreeSet::new();
        for model in &models {
            let dias: Vec<u32> = model
                .iter()
                .filter_map(|m| match m {
                    Move::SomeChild(t) => Some(*t as u32),
                    _ => None,
                })
                .collect();
            let mut routings: Vec<Vec<usize>> = alloc::vec![Vec::new()];
            for _ in &dias {
                let mut grown = Vec::with_capacity(routings.len() * arity);
                for r in &routings {
                    for j in 0..arity {
                        let mut r2 = r.clone();
                        r2.push(j);
                        grown.push(r2);
                    }
                }
                routings = grown;
                if routings.len() > cap {
                    return Err(CapExceeded {
                        site: "alternation removal choices".into(),
                        limit: cap as u64,
                    });
                }
            }
            for routing in routings {
                let mut delta = Routed {
                    per_child: alloc::vec![(BTreeSet::new(), Vec::new()); arity],
                };
                let mut ok = true;
                for m in model.iter() {
                    match m {
                        Move::AllChildren(t) => {
                            for j in 0..arity {
                                delta.per_child[j].0.insert(*t as u32);
                                delta.per_child[j].1.push((q, *t as u32));
                            }
                        }
                        Move::Directed(j, t) => {
                            if *j >= arity {
                                ok = false;
                                break;
                            }
                            delta.per_child[*j].0.insert(*t as u32);
                            delta.per_child[*j].1.push((q, *t as u32));
                        }
                        Move::SomeChild(_) => {}
                    }
                }
                if !ok {
                    continue;
                }
                for (k, t) in dias.iter().enumerate() {
                    let j = routing[k];
                    delta.per_child[j].0.insert(*t);
                    delta.per_child[j].1.push((q, *t));
                }
                for (_, e) in &mut delta.per_child {
                    e.sort_unstable();
                    e.dedup();
                }
                deltas.insert(delta);
            }
        }
        let mut next: BTreeSet<Routed> = BTreeSet::new();
        for base in &acc {
            for delta in &deltas {
                let mut merged = base.clone();
                for j in 0..arity {
                    merged.per_child[j].0.extend(delta.per_child[j].0.iter().copied());
                    merged.per_child[j].1.extend(delta.per_child[j].1.iter().copied());
                    merged.per_child[j].1.sort_unstable();
                    merged.per_child[j].1.dedup();
                }
                next.insert(merged);
                if next.len() > cap {
                    return Err(CapExceeded {
                        site: "alternation removal choices".into(),
                        limit: cap as u64,
                    });
                }
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().collect())
}

/// Removes alternation, producing a language-equal nondeterministic
/// automaton whose transitions assign one state per child.
pub fn nondeterminize(apt: &Apt, limits: &Limits) -> Result<Npt, CapExceeded> {
    let bad = BadPathNbw::new(apt);
    let mut det = SafraDet::new(&bad);
    let det_init = det.initial(limits)?;

    type NState = (BTreeSet<u32>, usize);
    let mut states: Vec<NState> = Vec::new();
    let mut index: BTreeMap<NState, usize> = BTreeMap::new();
    let intern = |st: NState,
                  states: &mut Vec<NState>,
                  index: &mut BTreeMap<NState, usize>|
     -> Result<usize, CapExceeded> {
        if let Some(&i) = index.get(&st) {
            return Ok(i);
        }
        if states.len() >= limits.max_automaton_states {
            return Err(CapExceeded {
                site: "alternation removal states".into(),
                limit: limits.max_automaton_states as u64,
            });
        }
        states.push(st.clone());
        index.insert(st, states.len() - 1);
        Ok(states.len() - 1)
    };

    let mut init_set = BTreeSet::new();
    init_set.insert(apt.initial as u32);
    let init = intern((init_set, det_init), &mut states, &mut index)?;

    // minimal models, memoized per (state, letter)
    let mut model_cache: BTreeMap<(u32, usize), Vec<BTreeSet<Move>>> = BTreeMap::new();
    for q in 0..apt.n_states {
        for li in 0..apt.alphabet.n_letters() {
            model_cache.insert((q as u32, li), apt.trans[q][li].min_models());
        }
    }

    let n_letters = apt.alphabet.n_letters();
    let mut trans: Vec<Vec<Pbf>> = Vec::new();
    let mut expanded = 0usize;
    while expanded < states.len() {
        let s = expanded;
        expanded += 1;
        let (set, c) = states[s].clone();
        let mut row = Vec::with_capacity(n_letters);
        for li in 0..n_letters {
            let arity = apt.alphabet.letters[li].arity;
            let choices = enumerate_choices(
                &set,
                arity,
                &|q| model_cache.get(&(q, li)).cloned().unwrap_or_default(),
                limits.max_automaton_states.max(8192),
            )?;
            let mut seen_targets: BTreeSet<Vec<usize>> = BTreeSet::new();
            let mut disjuncts: Vec<Pbf> = Vec::new();
            for choice in choices {
                let mut targets = Vec::with_capacity(arity);
                for (child_set, edges) in &choice.per_child {
                    let c2 = det.step(c, edges, limits)?;
                    targets.push(intern((child_set.clone(), c2), &mut states, &mut index)?);
                }
                if !seen_targets.insert(targets.clone()) {
                    continue;
                }
                let conj: Vec<Pbf> = targets
                    .iter()
                    .enumerate()
                    .map(|(j, &t)| Pbf::Atom(Move::Directed(j, t)))
                    .collect();
                disjuncts.push(Pbf::and(conj));
            }
            row.push(Pbf::or(disjuncts));
        }
        trans.push(row);
    }

    // the complemented determinization decides each branch
    let priority: Vec<u32> = states.iter().map(|&(_, c)| det.priority(c) + 1).collect();
    Ok(Npt(Apt {
        alphabet: apt.alphabet.clone(),
        n_states: states.len(),
        initial: init,
        priority,
        trans,
    }))
}

/// Alternation removal for the universal view, by duality.
pub fn universalize(apt: &Apt, limits: &Limits) -> Result<Upt, CapExceeded> {
    let n = nondeterminize(&apt.dual(), limits)?;
    Ok(Upt(n.0.dual()))
}

fn restricted_alphabet(
    alphabet: &TreeAlphabet,
    atom: &str,
    limits: &Limits,
) -> Result<(TreeAlphabet, usize), CapExceeded> {
    let idx = alphabet.atom_index(atom).ok_or_else(|| CapExceeded {
        site: alloc::format!("projection on absent atom `{atom}`"),
        limit: 0,
    })?;
    let atoms: Vec<_> = alphabet
        .atoms
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, a)| a.clone())
        .collect();
    let atom_values: Vec<_> = alphabet
        .atom_values
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, v)| v.clone())
        .collect();
    let restricted = TreeAlphabet::new(atoms, atom_values, alphabet.arities.clone(), limits)?;
    Ok((restricted, idx))
}

fn project_transitions(
    apt: &Apt,
    atom: &str,
    existential: bool,
    limits: &Limits,
) -> Result<Apt, CapExceeded> {
    let (restricted, idx) = restricted_alphabet(&apt.alphabet, atom, limits)?;
    let lookup = |values: &[crate::rat::Rat], arity: usize, bit: crate::rat::Rat| -> usize {
        let mut full = values.to_vec();
        full.insert(idx, bit);
        apt.alphabet
            .letter_index(&full, arity)
            .expect("Boolean extension letter exists")
    };
    let mut trans = Vec::with_capacity(apt.n_states);
    for q in 0..apt.n_states {
        let mut row = Vec::with_capacity(restricted.n_letters());
        for l in &restricted.letters {
            let l0 = lookup(&l.values, l.arity, crate::rat::Rat::ZERO);
            let l1 = lookup(&l.values, l.arity, crate::rat::Rat::ONE);
            let parts = alloc::vec![apt.trans[q][l0].clone(), apt.trans[q][l1].clone()];
            row.push(if existential { Pbf::or(parts) } else { Pbf::and(parts) });
        }
        trans.push(row);
    }
    Ok(Apt {
        alphabet: restricted,
        n_states: apt.n_states,
        initial: apt.initial,
        priority: apt.priority.clone(),
        trans,
    })
}

/// Existential projection: accepts a tree iff some Boolean relabeling of
/// `atom` is accepted. Requires a nondeterministic automaton so the guess is
/// made once per node.
pub fn project_exists(n: &Npt, atom: &str, limits: &Limits) -> Result<Npt, CapExceeded> {
    Ok(Npt(project_transitions(&n.0, atom, true, limits)?))
}

/// Universal projection: accepts iff every Boolean relabeling is accepted.
pub fn project_univ(u: &Upt, atom: &str, limits: &Limits) -> Result<Upt, CapExceeded> {
    Ok(Upt(project_transitions(&u.0, atom, false, limits)?))
}
