//! Word automata over value-vector alphabets: the tableau construction from
//! LTL value predicates to generalized Büchi automata, degeneralization,
//! dualization, and exact lasso membership for every automaton kind.
//!
//! Tableau states are consistent value assignments to the subformulas: atom,
//! X and U nodes choose a value from their possible-value sets, function
//! nodes are derived, and transitions enforce the X and U expansion laws.
//! One Büchi family per Until subformula demands that its claimed value is
//! realized (the claim equals the current value of the right argument).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::Ltl;
use crate::graph;
use crate::lasso::{EvalError, LassoWord};
use crate::limits::{CapExceeded, Limits};
use crate::predicate::Predicate;
use crate::rat::Rat;
use crate::values::{func_image, ValueSet};

/// A fully enumerated alphabet of value vectors over named atoms.
#[derive(Clone, Debug)]
pub struct WordAlphabet {
    pub atoms: Vec<String>,
    pub atom_values: Vec<ValueSet>,
    pub letters: Vec<Vec<Rat>>,
}

impl WordAlphabet {
    pub fn new(
        atoms: Vec<String>,
        atom_values: Vec<ValueSet>,
        limits: &Limits,
    ) -> Result<WordAlphabet, CapExceeded> {
        let mut count: usize = 1;
        for vs in &atom_values {
            count = count.saturating_mul(vs.len().max(1));
            if count > limits.max_letters {
                return Err(CapExceeded {
                    site: "alphabet enumeration".into(),
                    limit: limits.max_letters as u64,
                });
            }
        }
        let mut letters = alloc::vec![Vec::new()];
        for vs in &atom_values {
            let mut next = Vec::with_capacity(letters.len() * vs.len());
            for l in &letters {
                for v in vs.iter() {
                    let mut l2 = l.clone();
                    l2.push(*v);
                    next.push(l2);
                }
            }
            letters = next;
        }
        Ok(WordAlphabet { atoms, atom_values, letters })
    }

    pub fn n_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn letter_index(&self, letter: &[Rat]) -> Option<usize> {
        self.letters.iter().position(|l| l == letter)
    }

    /// Index of the word's letter at `pos`, reordering atoms by name.
    pub fn word_letter_index(&self, w: &LassoWord, pos: usize) -> Result<usize, EvalError> {
        let mut letter = Vec::with_capacity(self.atoms.len());
        for a in &self.atoms {
            letter.push(
                w.value(pos, a)
                    .ok_or_else(|| EvalError::UnlabeledAtom(a.clone()))?,
            );
        }
        self.letter_index(&letter)
            .ok_or_else(|| EvalError::ModeMismatch("letter outside the alphabet".into()))
    }
}

/// Nondeterministic generalized Büchi word automaton.
#[derive(Clone, Debug)]
pub struct Ngbw {
    pub alphabet: WordAlphabet,
    pub n_states: usize,
    pub initial: Vec<usize>,
    /// `trans[state][letter]` — sorted successor lists.
    pub trans: Vec<Vec<Vec<usize>>>,
    /// One acceptance set per Until subformula; empty family accepts all runs.
    pub accept: Vec<BTreeSet<usize>>,
}

/// Nondeterministic Büchi word automaton.
#[derive(Clone, Debug)]
pub struct Nbw {
    pub alphabet: WordAlphabet,
    pub n_states: usize,
    pub initial: Vec<usize>,
    pub trans: Vec<Vec<Vec<usize>>>,
    pub accepting: Vec<bool>,
}

/// Universal co-Büchi word automaton (the dual view of an NBW).
#[derive(Clone, Debug)]
pub struct Ubw {
    pub alphabet: WordAlphabet,
    pub n_states: usize,
    pub initial: Vec<usize>,
    pub trans: Vec<Vec<Vec<usize>>>,
    /// States that every run may visit only finitely often.
    pub rejecting: Vec<bool>,
}

/// Deterministic parity word automaton; a word is accepted when the maximal
/// priority seen infinitely often is even.
#[derive(Clone, Debug)]
pub struct Dpw {
    pub alphabet: WordAlphabet,
    pub n_states: usize,
    pub initial: usize,
    /// `trans[state][letter]`, total.
    pub trans: Vec<Vec<usize>>,
    pub priority: Vec<u32>,
}

// ---- tableau construction ----

#[derive(Clone, Debug)]
enum NodeKind {
    Atom(usize),
    Next(usize),
    Until(usize, usize),
    Func(alloc::sync::Arc<crate::func::FuncSpec>, Vec<usize>),
}

struct Closure {
    kinds: Vec<NodeKind>,
    /// Per-node possible-value sets.
    values: Vec<ValueSet>,
    root: usize,
}

fn build_closure(
    f: &Ltl,
    alphabet: &WordAlphabet,
) -> Result<Closure, CapExceeded> {
    struct B<'a> {
        nodes: Vec<(Ltl, NodeKind)>,
        alphabet: &'a WordAlphabet,
    }
    impl<'a> B<'a> {
        fn add(&mut self, f: &Ltl) -> Result<usize, CapExceeded> {
            if let Some(i) = self.nodes.iter().position(|(g, _)| g == f) {
                return Ok(i);
            }
            let kind = match f {
                Ltl::Atom(a) => {
                    let idx = self
                        .alphabet
                        .atoms
                        .iter()
                        .position(|x| x == a)
                        .ok_or_else(|| CapExceeded {
                            site: alloc::format!("atom `{a}` missing from the alphabet"),
                            limit: 0,
                        })?;
                    NodeKind::Atom(idx)
                }
                Ltl::Next(p) => {
                    let c = self.add(p)?;
                    NodeKind::Next(c)
                }
                Ltl::Until(a, b) => {
                    let ia = self.add(a)?;
                    let ib = self.add(b)?;
                    NodeKind::Until(ia, ib)
                }
                Ltl::Func(spec, args) => {
                    let idx = args.iter().map(|a| self.add(a)).collect::<Result<Vec<_>, _>>()?;
                    NodeKind::Func(spec.clone(), idx)
                }
            };
            self.nodes.push((f.clone(), kind));
            Ok(self.nodes.len() - 1)
        }
    }
    let mut b = B { nodes: Vec::new(), alphabet };
    let root = b.add(f)?;
    // possible-value sets, bottom-up (children have smaller indices)
    let mut values: Vec<ValueSet> = Vec::with_capacity(b.nodes.len());
    for (_, kind) in &b.nodes {
        let vs = match kind {
            NodeKind::Atom(i) => alphabet.atom_values[*i].clone(),
            NodeKind::Next(c) => values[*c].clone(),
            NodeKind::Until(a, bb) => {
                let mut u = values[*a].union(&values[*bb]);
                u.insert(Rat::ONE);
                u
            }
            NodeKind::Func(spec, args) => {
                let sets: Vec<ValueSet> = args.iter().map(|&i| values[i].clone()).collect();
                func_image(spec, &sets).map_err(|e| CapExceeded {
                    site: alloc::format!("function image: {e}"),
                    limit: 0,
                })?
            }
        };
        values.push(vs);
    }
    Ok(Closure { kinds: b.nodes.into_iter().map(|(_, k)| k).collect(), values, root })
}

/// A tableau state: one value per closure node.
type Profile = Vec<Rat>;

/// Builds the NGBW accepting exactly the words whose satisfaction value of
/// `f` lies in `pred`.
pub fn ltl_to_ngbw(
    f: &Ltl,
    alphabet: &WordAlphabet,
    pred: &Predicate,
    limits: &Limits,
) -> Result<Ngbw, CapExceeded> {
    let closure = build_closure(f, alphabet)?;
    let n = closure.kinds.len();
    // choice nodes pick freely; function nodes are derived
    let choice_nodes: Vec<usize> = (0..n)
        .filter(|&i| !matches!(closure.kinds[i], NodeKind::Func(_, _)))
        .collect();

    // enumerate locally consistent profiles
    let mut profiles: Vec<Profile> = Vec::new();
    let mut idx = alloc::vec![0usize; choice_nodes.len()];
    'enumerate: loop {
        let mut profile: Profile = alloc::vec![Rat::ZERO; n];
        for (k, &node) in choice_nodes.iter().enumerate() {
            profile[node] = *closure.values[node]
                .as_slice()
                .get(idx[k])
                .expect("index in range");
        }
        let mut ok = true;
        for i in 0..n {
            match &closure.kinds[i] {
                NodeKind::Func(spec, args) => {
                    let vals: Vec<Rat> = args.iter().map(|&a| profile[a]).collect();
                    match spec.apply(&vals) {
                        Ok(v) => profile[i] = v,
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                NodeKind::Until(a, b) => {
                    // local necessary bounds for the expansion law
                    let (u, va, vb) = (profile[i], profile[*a], profile[*b]);
                    if u < vb || u > vb.max(va) {
                        ok = false;
                        break;
                    }
                }
                _ => {}
            }
        }
        if ok {
            profiles.push(profile);
            if profiles.len() > limits.max_automaton_states {
                return Err(CapExceeded {
                    site: "tableau states".into(),
                    limit: limits.max_automaton_states as u64,
                });
            }
        }
        // odometer over choice-node value indices
        let mut k = 0;
        loop {
            if k == choice_nodes.len() {
                break 'enumerate;
            }
            idx[k] += 1;
            if idx[k] < closure.values[choice_nodes[k]].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if choice_nodes.is_empty() {
            break;
        }
    }

    let profile_index: BTreeMap<Profile, usize> = profiles
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();

    // the letter a state reads is fixed by its atom values
    let state_letter: Vec<usize> = profiles
        .iter()
        .map(|p| {
            let letter: Vec<Rat> = (0..alphabet.atoms.len())
                .map(|ai| {
                    let node = closure
                        .kinds
                        .iter()
                        .position(|k| matches!(k, NodeKind::Atom(x) if *x == ai));
                    match node {
                        Some(ni) => p[ni],
                        // atom not used by the formula: reads anything; mark
                        // with a sentinel handled below
                        None => Rat::ZERO,
                    }
                })
                .collect();
            alphabet.letter_index(&letter).unwrap_or(usize::MAX)
        })
        .collect();
    // atoms not occurring in the formula make several letters compatible
    let used_atom: Vec<bool> = (0..alphabet.atoms.len())
        .map(|ai| closure.kinds.iter().any(|k| matches!(k, NodeKind::Atom(x) if *x == ai)))
        .collect();
    let letter_compatible = |state: usize, letter: usize| -> bool {
        if used_atom.iter().all(|&u| u) {
            return state_letter[state] == letter;
        }
        let l = &alphabet.letters[letter];
        closure.kinds.iter().enumerate().all(|(ni, k)| match k {
            NodeKind::Atom(ai) => profiles[state][ni] == l[*ai],
            _ => true,
        })
    };

    // transitions: solve the X and U constraints for the successor profile
    let mut trans: Vec<Vec<Vec<usize>>> =
        alloc::vec![alloc::vec![Vec::new(); alphabet.n_letters()]; profiles.len()];
    for (si, p) in profiles.iter().enumerate() {
        // candidate successor values per choice node
        let mut candidates: Vec<Vec<Rat>> = Vec::with_capacity(choice_nodes.len());
        let mut viable = true;
        for &node in &choice_nodes {
            let full: Vec<Rat> = closure.values[node].iter().copied().collect();
            candidates.push(full);
        }
        // X constraints fix the child's next value (choice children only;
        // derived children are checked after reconstruction)
        for (i, kind) in closure.kinds.iter().enumerate() {
            if let NodeKind::Next(c) = kind {
                if let Some(k) = choice_nodes.iter().position(|&x| x == *c) {
                    let want = p[i];
                    candidates[k].retain(|v| *v == want);
                    if candidates[k].is_empty() {
                        viable = false;
                    }
                }
            }
        }
        // U constraints restrict the successor's value of the same U node
        for (i, kind) in closure.kinds.iter().enumerate() {
            if let NodeKind::Until(a, b) = kind {
                let k = choice_nodes
                    .iter()
                    .position(|&x| x == i)
                    .expect("until nodes are choice nodes");
                let (u, va, vb) = (p[i], p[*a], p[*b]);
                if u > vb {
                    // the min branch must realize u: min(va, next) = u
                    if va < u {
                        viable = false;
                    } else if va == u {
                        candidates[k].retain(|v| *v >= u);
                    } else {
                        candidates[k].retain(|v| *v == u);
                    }
                } else {
                    // u == vb: min(va, next) must not exceed u
                    if va > u {
                        candidates[k].retain(|v| *v <= u);
                    }
                }
                if candidates[k].is_empty() {
                    viable = false;
                }
            }
        }
        if !viable {
            continue;
        }
        // enumerate successor profiles from the candidate sets
        let mut cidx = alloc::vec![0usize; choice_nodes.len()];
        'succ: loop {
            let mut q: Profile = alloc::vec![Rat::ZERO; n];
            for (k, &node) in choice_nodes.iter().enumerate() {
                q[node] = candidates[k][cidx[k]];
            }
            let mut ok = true;
            for i in 0..n {
                if let NodeKind::Func(spec, args) = &closure.kinds[i] {
                    let vals: Vec<Rat> = args.iter().map(|&a| q[a]).collect();
                    match spec.apply(&vals) {
                        Ok(v) => q[i] = v,
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if ok {
                // X over derived children checked on the reconstruction
                for (i, kind) in closure.kinds.iter().enumerate() {
                    if let NodeKind::Next(c) = kind {
                        if q[*c] != p[i] {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if ok {
                if let Some(&ti) = profile_index.get(&q) {
                    for li in 0..alphabet.n_letters() {
                        if letter_compatible(si, li) {
                            trans[si][li].push(ti);
                        }
                    }
                }
            }
            let mut k = 0;
            loop {
                if k == choice_nodes.len() {
                    break 'succ;
                }
                cidx[k] += 1;
                if cidx[k] < candidates[k].len() {
                    break;
                }
                cidx[k] = 0;
                k += 1;
            }
            if choice_nodes.is_empty() {
                break;
            }
        }
    }
    for row in &mut trans {
        for succs in row {
            succs.sort_unstable();
            succs.dedup();
        }
    }

    let initial: Vec<usize> = profiles
        .iter()
        .enumerate()
        .filter(|(_, p)| pred.contains(&p[closure.root]))
        .map(|(i, _)| i)
        .collect();

    let accept: Vec<BTreeSet<usize>> = closure
        .kinds
        .iter()
        .enumerate()
        .filter_map(|(i, k)| match k {
            NodeKind::Until(_, b) => Some(
                profiles
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p[i] == p[*b])
                    .map(|(s, _)| s)
                    .collect(),
            ),
            _ => None,
        })
        .collect();

    Ok(Ngbw {
        alphabet: alphabet.clone(),
        n_states: profiles.len(),
        initial,
        trans,
        accept,
    })
}

/// Counter-based degeneralization.
pub fn degeneralize(g: &Ngbw) -> Nbw {
    let k = g.accept.len();
    if k == 0 {
        return Nbw {
            alphabet: g.alphabet.clone(),
            n_states: g.n_states,
            initial: g.initial.clone(),
            trans: g.trans.clone(),
            accepting: alloc::vec![true; g.n_states],
        };
    }
    let width = k + 1;
    let id = |q: usize, i: usize| q * width + i;
    let advance = |start: usize, q: usize| -> usize {
        let mut j = start;
        while j < k && g.accept[j].contains(&q) {
            j += 1;
        }
        j
    };
    let mut trans = alloc::vec![alloc::vec![Vec::new(); g.alphabet.n_letters()]; g.n_states * width];
    for q in 0..g.n_states {
        for i in 0..width {
            let base = if i == k { 0 } else { i };
            for (li, succs) in g.trans[q].iter().enumerate() {
                for &q2 in succs {
                    trans[id(q, i)][li].push(id(q2, advance(base, q2)));
                }
            }
        }
    }
    for row in &mut trans {
        for s in row {
            s.sort_unstable();
            s.dedup();
        }
    }
    let initial = g
        .initial
        .iter()
        .map(|&q| id(q, advance(0, q)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let accepting = (0..g.n_states * width).map(|s| s % width == k).collect();
    Nbw {
        alphabet: g.alphabet.clone(),
        n_states: g.n_states * width,
        initial,
        trans,
        accepting,
    }
}

/// Dualizes an NBW into the universal co-Büchi automaton for the complement
/// language; the transition structure is shared.
pub fn dualize(n: &Nbw) -> Ubw {
    Ubw {
        alphabet: n.alphabet.clone(),
        n_states: n.n_states,
        initial: n.initial.clone(),
        trans: n.trans.clone(),
        rejecting: n.accepting.clone(),
    }
}

// ---- lasso membership ----

struct Product {
    /// adjacency over (state, position) nodes, flattened
    adj: Vec<Vec<usize>>,
    /// nodes reachable from the initial layer
    reachable: Vec<bool>,
    span: usize,
}

fn build_product(
    trans: &[Vec<Vec<usize>>],
    initial: &[usize],
    alphabet: &WordAlphabet,
    w: &LassoWord,
) -> Result<Product, EvalError> {
    let span = w.span();
    let n = trans.len();
    let letter_at: Vec<usize> = (0..span)
        .map(|p| alphabet.word_letter_index(w, p))
        .collect::<Result<Vec<_>, _>>()?;
    let next_pos = |p: usize| if p + 1 < span { p + 1 } else { w.prefix.len() };
    let id = |q: usize, p: usize| q * span + p;
    let mut adj = alloc::vec![Vec::new(); n * span];
    for q in 0..n {
        for p in 0..span {
            for &q2 in &trans[q][letter_at[p]] {
                adj[id(q, p)].push(id(q2, next_pos(p)));
            }
        }
    }
    let mut reachable = alloc::vec![false; n * span];
    let mut stack: Vec<usize> = initial.iter().map(|&q| id(q, 0)).collect();
    for &s in &stack {
        reachable[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !reachable[u] {
                reachable[u] = true;
                stack.push(u);
            }
        }
    }
    Ok(Product { adj, reachable, span })
}

/// NGBW membership: a reachable cycle meeting every acceptance set.
pub fn ngbw_lasso_member(g: &Ngbw, w: &LassoWord) -> Result<bool, EvalError> {
    let prod = build_product(&g.trans, &g.initial, &g.alphabet, w)?;
    let comps = graph::sccs(&prod.adj);
    for comp in comps {
        // reachability is homogeneous within an SCC
        if !comp.iter().any(|&v| prod.reachable[v]) {
            continue;
        }
        if !graph::scc_has_cycle(&prod.adj, &comp) {
            continue;
        }
        let all_met = g.accept.iter().all(|set| {
            comp.iter().any(|&v| set.contains(&(v / prod.span)))
        });
        if all_met {
            return Ok(true);
        }
    }
    Ok(false)
}

/// NBW membership: a reachable cycle through an accepting state.
pub fn nbw_lasso_member(n: &Nbw, w: &LassoWord) -> Result<bool, EvalError> {
    let prod = build_product(&n.trans, &n.initial, &n.alphabet, w)?;
    let comps = graph::sccs(&prod.adj);
    for comp in comps {
        if !comp.iter().any(|&v| prod.reachable[v]) {
            continue;
        }
        if !graph::scc_has_cycle(&prod.adj, &comp) {
            continue;
        }
        if comp.iter().any(|&v| n.accepting[v / prod.span]) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Universal co-Büchi membership: no reachable cycle through a rejecting
/// state.
pub fn ubw_lasso_member(u: &Ubw, w: &LassoWord) -> Result<bool, EvalError> {
    let prod = build_product(&u.trans, &u.initial, &u.alphabet, w)?;
    let comps = graph::sccs(&prod.adj);
    for comp in comps {
        if !comp.iter().any(|&v| prod.reachable[v]) {
            continue;
        }
        if !graph::scc_has_cycle(&prod.adj, &comp) {
            continue;
        }
        if comp.iter().any(|&v| u.rejecting[v / prod.span]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// DPW membership: dominant priority of the unique loop run.
pub fn dpw_lasso_member(d: &Dpw, w: &LassoWord) -> Result<bool, EvalError> {
    let span = w.span();
    let letter_at: Vec<usize> = (0..span)
        .map(|p| d.alphabet.word_letter_index(w, p))
        .collect::<Result<Vec<_>, _>>()?;
    let next_pos = |p: usize| if p + 1 < span { p + 1 } else { w.prefix.len() };
    let mut state = d.initial;
    let mut pos = 0usize;
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut trace: Vec<(usize, usize)> = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(state, pos)) {
            let max_prio = trace[start..]
                .iter()
                .map(|&(q, _)| d.priority[q])
                .max()
                .expect("nonempty cycle");
            return Ok(max_prio % 2 == 0);
        }
        seen.insert((state, pos), trace.len());
        trace.push((state, pos));
        state = d.trans[state][letter_at[pos]];
        pos = next_pos(pos);
    }
}

/// Convenience: tableau plus degeneralization.
pub fn ltl_to_nbw(
    f: &Ltl,
    alphabet: &WordAlphabet,
    pred: &Predicate,
    limits: &Limits,
) -> Result<Nbw, CapExceeded> {
    Ok(degeneralize(&ltl_to_ngbw(f, alphabet, pred, limits)?))
}
