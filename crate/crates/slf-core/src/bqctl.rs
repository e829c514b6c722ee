//! Tree-automata model checking for the quantified branching-time logic:
//! per-formula/per-predicate automaton construction, Boolean projections,
//! and emptiness of the product with the structure via parity games.
//!
//! The automaton for ∃p.φ' decides "the maximum of φ' over Boolean
//! relabelings of p lies in P" as a disjunction over candidate values v of
//! "some relabeling reaches v" (existential projection of the
//! nondeterminized automaton for {v}) and "all relabelings stay ≤ v"
//! (universal projection of the universalized automaton for [0,v]). Path
//! quantification goes through word automata over the values of the maximal
//! state subformulas, which are re-verified by conjunctively launched child
//! automata so that every copy guesses the same, correct value.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::formula::{path_to_ltl, QctlState};
use crate::func::FuncError;
use crate::kripke::Wks;
use crate::limits::{CapExceeded, Limits};
use crate::nondet::{nondeterminize, project_exists, project_univ, universalize};
use crate::predicate::Predicate;
use crate::rat::Rat;
use crate::tree::{apt_accepts, Apt, Move, Pbf, TreeAlphabet, WksSource};
use crate::values::{ltl_value_set_map, qctl_value_set_map, ValueSet};
use crate::word::{degeneralize, dualize, ltl_to_ngbw, Nbw, Ubw, WordAlphabet};

#[derive(Clone, Debug)]
pub enum BqctlError {
    Cap(CapExceeded),
    Func(FuncError),
    MissingAtom(String),
}

impl From<CapExceeded> for BqctlError {
    fn from(e: CapExceeded) -> BqctlError {
        BqctlError::Cap(e)
    }
}

impl From<FuncError> for BqctlError {
    fn from(e: FuncError) -> BqctlError {
        BqctlError::Func(e)
    }
}

impl core::fmt::Display for BqctlError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BqctlError::Cap(e) => write!(f, "{e}"),
            BqctlError::Func(e) => write!(f, "{e}"),
            BqctlError::MissingAtom(a) => write!(f, "free atom `{a}` is not labelled"),
        }
    }
}

/// One line of size telemetry per constructed automaton.
#[derive(Clone, Debug)]
pub struct Telemetry {
    pub formula: String,
    pub predicate: String,
    pub states: usize,
    pub nesting_level: usize,
}

/// Per-(subformula, predicate) automaton cache plus telemetry.
#[derive(Default)]
pub struct CheckPlan {
    cache: BTreeMap<(String, String, String), Arc<Apt>>,
    pub telemetry: Vec<Telemetry>,
}

impl CheckPlan {
    pub fn new() -> CheckPlan {
        CheckPlan::default()
    }
}

fn alphabet_key(alphabet: &TreeAlphabet) -> String {
    alphabet.atoms.join(",")
}

/// Builds the APT accepting exactly the trees where the value of `f` lies in
/// `pred`, over the given alphabet.
pub fn build_apt(
    f: &QctlState,
    alphabet: &TreeAlphabet,
    pred: &Predicate,
    plan: &mut CheckPlan,
    limits: &Limits,
) -> Result<Arc<Apt>, BqctlError> {
    let key = (f.to_string(), pred.key(), alphabet_key(alphabet));
    if let Some(a) = plan.cache.get(&key) {
        return Ok(a.clone());
    }
    let apt = Arc::new(build_apt_inner(f, alphabet, pred, plan, limits)?);
    plan.telemetry.push(Telemetry {
        formula: key.0.clone(),
        predicate: key.1.clone(),
        states: apt.n_states,
        nesting_level: f.nesting_depth(),
    });
    plan.cache.insert(key, apt.clone());
    Ok(apt)
}

fn build_apt_inner(
    f: &QctlState,
    alphabet: &TreeAlphabet,
    pred: &Predicate,
    plan: &mut CheckPlan,
    limits: &Limits,
) -> Result<Apt, BqctlError> {
    match f {
        QctlState::Atom(p) => {
            let idx = alphabet
                .atom_index(p)
                .ok_or_else(|| BqctlError::MissingAtom(p.clone()))?;
            let pr = pred.clone();
            Ok(Apt::letter_test(alphabet, move |l| pr.contains(&l.values[idx])))
        }
        QctlState::Func(spec, args) => {
            // one shared automaton per (argument, candidate value); the top
            // transition is a disjunction over accepted value combinations
            let arg_sets: Vec<ValueSet> = args
                .iter()
                .map(|a| qctl_value_set_map(a, &alphabet.value_map()))
                .collect::<Result<Vec<_>, _>>()?;
            let mut members: Vec<Arc<Apt>> = Vec::new();
            let mut member_index: BTreeMap<(usize, Rat), usize> = BTreeMap::new();
            let mut combos: Vec<Vec<usize>> = Vec::new();
            let mut idx = alloc::vec![0usize; args.len()];
            loop {
                let vals: Vec<Rat> =
                    idx.iter().zip(&arg_sets).map(|(&i, s)| s.as_slice()[i]).collect();
                if pred.contains(&spec.apply(&vals)?) {
                    let mut clause = Vec::with_capacity(args.len());
                    for (i, v) in vals.iter().enumerate() {
                        let mi = match member_index.get(&(i, *v)) {
                            Some(&m) => m,
                            None => {
                                let a = build_apt(
                                    &args[i],
                                    alphabet,
                                    &Predicate::singleton(*v),
                                    plan,
                                    limits,
                                )?;
                                members.push(a);
                                member_index.insert((i, *v), members.len() - 1);
                                members.len() - 1
                            }
                        };
                        clause.push(mi);
                    }
                    combos.push(clause);
                }
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        return Ok(assemble_or_of_ands(alphabet, &members, &combos));
                    }
                    idx[k] += 1;
                    if idx[k] < arg_sets[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if idx.is_empty() {
                    return Ok(assemble_or_of_ands(alphabet, &members, &combos));
                }
            }
        }
        QctlState::ExistsProp(p, body) => {
            let extended = alphabet.extend_boolean(p, limits)?;
            let mut body_sets = alphabet.value_map();
            body_sets.insert(p.clone(), ValueSet::boolean());
            let candidates = qctl_value_set_map(body, &body_sets)?;
            let mut members: Vec<Arc<Apt>> = Vec::new();
            let mut combos: Vec<Vec<usize>> = Vec::new();
            for v in candidates.iter() {
                if !pred.contains(v) {
                    continue;
                }
                let reach = build_apt(body, &extended, &Predicate::singleton(*v), plan, limits)?;
                let reach_n = nondeterminize(&reach, limits)?;
                let reach_proj = project_exists(&reach_n, p, limits)?;
                let bound = build_apt(body, &extended, &Predicate::at_most(*v), plan, limits)?;
                let bound_u = universalize(&bound, limits)?;
                let bound_proj = project_univ(&bound_u, p, limits)?;
                let m0 = members.len();
                members.push(Arc::new(reach_proj.0));
                members.push(Arc::new(bound_proj.0));
                combos.push(alloc::vec![m0, m0 + 1]);
            }
            Ok(assemble_or_of_ands(alphabet, &members, &combos))
        }
        QctlState::ExistsPath(psi) => {
            let (ltl, embeds) = path_to_ltl(psi, "@e");
            let embed_sets: Vec<ValueSet> = embeds
                .iter()
                .map(|e| qctl_value_set_map(e, &alphabet.value_map()))
                .collect::<Result<Vec<_>, _>>()?;
            let word_atoms: Vec<String> =
                (0..embeds.len()).map(|i| alloc::format!("@e{i}")).collect();
            let word_alphabet =
                WordAlphabet::new(word_atoms.clone(), embed_sets.clone(), limits)?;
            let word_sets: BTreeMap<String, ValueSet> = word_atoms
                .iter()
                .cloned()
                .zip(embed_sets.iter().cloned())
                .collect();
            let candidates = ltl_value_set_map(&ltl, &word_sets)?;
            // verification automata per (embed, value)
            let mut verifiers: Vec<Vec<Arc<Apt>>> = Vec::with_capacity(embeds.len());
            for (i, e) in embeds.iter().enumerate() {
                let mut per_value = Vec::new();
                for w in embed_sets[i].iter() {
                    per_value.push(build_apt(
                        e,
                        alphabet,
                        &Predicate::singleton(*w),
                        plan,
                        limits,
                    )?);
                }
                verifiers.push(per_value);
            }
            let mut branches: Vec<(Nbw, Ubw)> = Vec::new();
            for v in candidates.iter() {
                if !pred.contains(v) {
                    continue;
                }
                let exist_side = degeneralize(&ltl_to_ngbw(
                    &ltl,
                    &word_alphabet,
                    &Predicate::singleton(*v),
                    limits,
                )?);
                let univ_side = dualize(&degeneralize(&ltl_to_ngbw(
                    &ltl,
                    &word_alphabet,
                    &Predicate::above(*v),
                    limits,
                )?));
                branches.push((exist_side, univ_side));
            }
            Ok(assemble_path_automaton(
                alphabet,
                &word_alphabet,
                &embed_sets,
                &verifiers,
                &branches,
                limits,
            )?)
        }
    }
}

/// Shared-space automaton whose root transition is ⋁_combos ⋀_members.
fn assemble_or_of_ands(alphabet: &TreeAlphabet, members: &[Arc<Apt>], combos: &[Vec<usize>]) -> Apt {
    let n_letters = alphabet.n_letters();
    let mut offsets = Vec::with_capacity(members.len());
    let mut total = 1usize;
    for m in members {
        offsets.push(total);
        total += m.n_states;
    }
    let mut priority = alloc::vec![0u32];
    for m in members {
        priority.extend(m.priority.iter().copied());
    }
    let mut trans: Vec<Vec<Pbf>> = alloc::vec![Vec::with_capacity(n_letters)];
    for li in 0..n_letters {
        let disjuncts: Vec<Pbf> = combos
            .iter()
            .map(|clause| {
                Pbf::and(
                    clause
                        .iter()
                        .map(|&mi| members[mi].trans[members[mi].initial][li].remap_states(offsets[mi]))
                        .collect(),
                )
            })
            .collect();
        trans[0].push(Pbf::or(disjuncts));
    }
    for (m, &off) in members.iter().zip(&offsets) {
        for q in 0..m.n_states {
            trans.push(m.trans[q].iter().map(|p| p.remap_states(off)).collect());
        }
    }
    let _ = total;
    Apt {
        alphabet: alphabet.clone(),
        n_states: trans.len(),
        initial: 0,
        priority,
        trans,
    }
}

/// Assembles the branch-quantifier automaton: a disjunction over candidate
/// values of (a word automaton guessing one branch) ∧ (a universal word
/// automaton running on all branches), where every step guesses the letter
/// of embedded-formula values and launches their verifiers.
fn assemble_path_automaton(
    alphabet: &TreeAlphabet,
    word_alphabet: &WordAlphabet,
    embed_sets: &[ValueSet],
    verifiers: &[Vec<Arc<Apt>>],
    branches: &[(Nbw, Ubw)],
    limits: &Limits,
) -> Result<Apt, CapExceeded> {
    let n_letters = alphabet.n_letters();
    // layout: [init][per-v NBW states][per-v UBW states][verifier states]
    let mut total = 1usize;
    let mut nbw_off = Vec::with_capacity(branches.len());
    let mut ubw_off = Vec::with_capacity(branches.len());
    for (n, u) in branches {
        nbw_off.push(total);
        total += n.n_states;
        ubw_off.push(total);
        total += u.n_states;
    }
    let mut ver_off: Vec<Vec<usize>> = Vec::with_capacity(verifiers.len());
    for per_value in verifiers {
        let mut row = Vec::with_capacity(per_value.len());
        for v in per_value {
            row.push(total);
            total += v.n_states;
        }
        ver_off.push(row);
    }
    if total > limits.max_automaton_states {
        return Err(CapExceeded {
            site: "branch-quantifier automaton".into(),
            limit: limits.max_automaton_states as u64,
        });
    }

    let mut priority = alloc::vec![0u32];
    for (n, u) in branches {
        priority.extend(n.accepting.iter().map(|&a| if a { 2 } else { 1 }));
        priority.extend(u.rejecting.iter().map(|&r| if r { 1 } else { 0 }));
    }
    for per_value in verifiers {
        for v in per_value {
            priority.extend(v.priority.iter().copied());
        }
    }

    // the verification conjunct for guessing word letter σ at a tree letter
    let verify = |sigma: usize, li: usize| -> Pbf {
        let letter = &word_alphabet.letters[sigma];
        let mut parts = Vec::with_capacity(letter.len());
        for (i, w) in letter.iter().enumerate() {
            let wi = embed_sets[i]
                .as_slice()
                .iter()
                .position(|x| x == w)
                .expect("value in its set");
            let ver = &verifiers[i][wi];
            parts.push(ver.trans[ver.initial][li].remap_states(ver_off[i][wi]));
        }
        Pbf::and(parts)
    };

    let mut trans: Vec<Vec<Pbf>> = alloc::vec![Vec::with_capacity(n_letters)];
    // init: Or over v of (exists-side launch ∧ all-side launch)
    for li in 0..n_letters {
        let mut disjuncts = Vec::with_capacity(branches.len());
        for (bi, (n, u)) in branches.iter().enumerate() {
            let mut parts = Vec::new();
            // the branch automaton starts in some initial state
            parts.push(Pbf::or(
                n.initial
                    .iter()
                    .map(|&q0| nbw_step(n, q0, nbw_off[bi], li, word_alphabet, &verify))
                    .collect(),
            ));
            parts.push(Pbf::and(
                u.initial
                    .iter()
                    .map(|&u0| ubw_step(u, u0, ubw_off[bi], li, word_alphabet, &verify))
                    .collect(),
            ));
            disjuncts.push(Pbf::and(parts));
        }
        trans[0].push(Pbf::or(disjuncts));
    }
    for (bi, (n, u)) in branches.iter().enumerate() {
        for q in 0..n.n_states {
            let row: Vec<Pbf> = (0..n_letters)
                .map(|li| nbw_step(n, q, nbw_off[bi], li, word_alphabet, &verify))
                .collect();
            trans.push(row);
        }
        for q in 0..u.n_states {
            let row: Vec<Pbf> = (0..n_letters)
                .map(|li| ubw_step(u, q, ubw_off[bi], li, word_alphabet, &verify))
                .collect();
            trans.push(row);
        }
    }
    for (i, per_value) in verifiers.iter().enumerate() {
        for (wi, v) in per_value.iter().enumerate() {
            for q in 0..v.n_states {
                trans.push(v.trans[q].iter().map(|p| p.remap_states(ver_off[i][wi])).collect());
            }
        }
    }
    return Ok(Apt {
        alphabet: alphabet.clone(),
        n_states: trans.len(),
        initial: 0,
        priority,
        trans,
    });

    // guess σ, verify it, then follow one branch nondeterministically
    fn nbw_step(
        n: &Nbw,
        q: usize,
        off: usize,
        li: usize,
        word_alphabet: &WordAlphabet,
        verify: &impl Fn(usize, usize) -> Pbf,
    ) -> Pbf {
        let mut options = Vec::with_capacity(word_alphabet.n_letters());
        for sigma in 0..word_alphabet.n_letters() {
            let succs = &n.trans[q][sigma];
            if succs.is_empty() {
                continue;
            }
            let follow =
                Pbf::or(succs.iter().map(|&q2| Pbf::Atom(Move::SomeChild(off + q2))).collect());
            options.push(Pbf::and(alloc::vec![verify(sigma, li), follow]));
        }
        Pbf::or(options)
    }

    // guess σ, verify it, then continue on every branch universally
    fn ubw_step(
        u: &Ubw,
        q: usize,
        off: usize,
        li: usize,
        word_alphabet: &WordAlphabet,
        verify: &impl Fn(usize, usize) -> Pbf,
    ) -> Pbf {
        let mut options = Vec::with_capacity(word_alphabet.n_letters());
        for sigma in 0..word_alphabet.n_letters() {
            let succs = &u.trans[q][sigma];
            let follow = Pbf::and(
                succs.iter().map(|&q2| Pbf::Atom(Move::AllChildren(off + q2))).collect(),
            );
            options.push(Pbf::and(alloc::vec![verify(sigma, li), follow]));
        }
        Pbf::or(options)
    }
}

/// Verdict with telemetry.
pub struct CheckOutcome {
    pub holds: bool,
    pub telemetry: Vec<Telemetry>,
}

/// Decides whether the value of a closed formula on the unfolding of `k`
/// lies in `pred`.
pub fn check_wks(
    f: &QctlState,
    k: &Wks,
    pred: &Predicate,
    limits: &Limits,
) -> Result<CheckOutcome, BqctlError> {
    let free: Vec<String> = f.free_props().into_iter().collect();
    for a in &free {
        if k.atom_index(a).is_none() {
            return Err(BqctlError::MissingAtom(a.clone()));
        }
    }
    let alphabet = TreeAlphabet::for_wks(k, &free, limits)?;
    let mut plan = CheckPlan::new();
    let apt = build_apt(f, &alphabet, pred, &mut plan, limits)?;
    let src = WksSource::new(k, &alphabet)?;
    let holds = apt_accepts(&apt, &src, k.initial.0 as usize, limits)?;
    Ok(CheckOutcome { holds, telemetry: plan.telemetry })
}

/// The largest candidate value v with value ∈ [v, 1]; exact because the true
/// value is always a member of its candidate set.
pub fn compute_value(f: &QctlState, k: &Wks, limits: &Limits) -> Result<Rat, BqctlError> {
    let base: BTreeMap<String, ValueSet> = {
        let mut m = BTreeMap::new();
        for a in &k.atoms {
            let i = k.atom_index(a).expect("own atom");
            m.insert(a.clone(), ValueSet::base_from(k.labels.iter().map(|row| row[i])));
        }
        m
    };
    let candidates = qctl_value_set_map(f, &base)?;
    for v in candidates.iter().rev() {
        if v.is_zero() {
            break;
        }
        if check_wks(f, k, &Predicate::at_least(*v), limits)?.holds {
            return Ok(*v);
        }
    }
    Ok(Rat::ZERO)
}
