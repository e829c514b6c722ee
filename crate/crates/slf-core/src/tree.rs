//! Alternating parity tree automata over trees with ordered children, and
//! membership testing by solving the acceptance parity game.
//!
//! Letters carry the label vector and the number of children, so transition
//! formulas can use three move kinds: □q (all children), ◇q (some child),
//! and a directed move sending q to the j-th child — the latter appear after
//! alternation removal, where a run must pick exactly one state per child.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::kripke::{FiniteTree, Wks};
use crate::limits::{CapExceeded, Limits};
use crate::parity::{self, Owner, ParityGame};
use crate::rat::Rat;
use crate::values::ValueSet;

/// A tree letter: one value per atom, plus the child count of the node.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreeLetter {
    pub values: Vec<Rat>,
    pub arity: usize,
}

/// Fully enumerated alphabet of tree letters.
#[derive(Clone, Debug)]
pub struct TreeAlphabet {
    pub atoms: Vec<String>,
    pub atom_values: Vec<ValueSet>,
    pub arities: Vec<usize>,
    pub letters: Vec<TreeLetter>,
}

impl TreeAlphabet {
    pub fn new(
        atoms: Vec<String>,
        atom_values: Vec<ValueSet>,
        arities: Vec<usize>,
        limits: &Limits,
    ) -> Result<TreeAlphabet, CapExceeded> {
        let mut count = arities.len().max(1);
        for vs in &atom_values {
            count = count.saturating_mul(vs.len().max(1));
            if count > limits.max_letters {
                return Err(CapExceeded {
                    site: "tree alphabet".into(),
                    limit: limits.max_letters as u64,
                });
            }
        }
        let mut rows: Vec<Vec<Rat>> = alloc::vec![Vec::new()];
        for vs in &atom_values {
            let mut next = Vec::with_capacity(rows.len() * vs.len());
            for r in &rows {
                for v in vs.iter() {
                    let mut r2 = r.clone();
                    r2.push(*v);
                    next.push(r2);
                }
            }
            rows = next;
        }
        let mut letters = Vec::with_capacity(rows.len() * arities.len());
        for r in rows {
            for &a in &arities {
                letters.push(TreeLetter { values: r.clone(), arity: a });
            }
        }
        Ok(TreeAlphabet { atoms, atom_values, arities, letters })
    }

    /// Alphabet of the unfolding of a Kripke structure, restricted to the
    /// given atoms.
    pub fn for_wks(k: &Wks, atoms: &[String], limits: &Limits) -> Result<TreeAlphabet, CapExceeded> {
        let atom_values: Vec<ValueSet> = atoms
            .iter()
            .map(|a| match k.atom_index(a) {
                Some(i) => ValueSet::base_from(k.labels.iter().map(|row| row[i])),
                None => ValueSet::boolean(),
            })
            .collect();
        let arities: BTreeSet<usize> = k.edges.iter().map(|e| e.len()).collect();
        TreeAlphabet::new(
            atoms.to_vec(),
            atom_values,
            arities.into_iter().collect(),
            limits,
        )
    }

    pub fn n_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn atom_index(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    pub fn letter_index(&self, values: &[Rat], arity: usize) -> Option<usize> {
        self.letters.iter().position(|l| l.values == values && l.arity == arity)
    }

    /// Extends the alphabet with a fresh Boolean atom (for quantification).
    pub fn extend_boolean(&self, atom: &str, limits: &Limits) -> Result<TreeAlphabet, CapExceeded> {
        let mut atoms = self.atoms.clone();
        atoms.push(String::from(atom));
        let mut atom_values = self.atom_values.clone();
        atom_values.push(ValueSet::boolean());
        TreeAlphabet::new(atoms, atom_values, self.arities.clone(), limits)
    }

    /// Per-atom value sets as a map, for value-set computations.
    pub fn value_map(&self) -> BTreeMap<String, ValueSet> {
        self.atoms.iter().cloned().zip(self.atom_values.iter().cloned()).collect()
    }
}

/// A single move of the transition formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Move {
    /// Send the state to every child.
    AllChildren(usize),
    /// Send the state to some child of the automaton's choice.
    SomeChild(usize),
    /// Send the state to the j-th child.
    Directed(usize, usize),
}

/// Positive Boolean formula over moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pbf {
    True,
    False,
    Atom(Move),
    And(Vec<Pbf>),
    Or(Vec<Pbf>),
}

impl Pbf {
    pub fn and(parts: Vec<Pbf>) -> Pbf {
        if parts.iter().any(|p| matches!(p, Pbf::False)) {
            return Pbf::False;
        }
        let mut out: Vec<Pbf> = parts.into_iter().filter(|p| !matches!(p, Pbf::True)).collect();
        match out.len() {
            0 => Pbf::True,
            1 => out.pop().expect("one"),
            _ => Pbf::And(out),
        }
    }

    pub fn or(parts: Vec<Pbf>) -> Pbf {
        if parts.iter().any(|p| matches!(p, Pbf::True)) {
            return Pbf::True;
        }
        let mut out: Vec<Pbf> = parts.into_iter().filter(|p| !matches!(p, Pbf::False)).collect();
        match out.len() {
            0 => Pbf::False,
            1 => out.pop().expect("one"),
            _ => Pbf::Or(out),
        }
    }

    /// Dual formula: swaps ∧/∨ and □/◇; directed moves are self-dual.
    pub fn dual(&self) -> Pbf {
        match self {
            Pbf::True => Pbf::False,
            Pbf::False => Pbf::True,
            Pbf::Atom(Move::AllChildren(q)) => Pbf::Atom(Move::SomeChild(*q)),
            Pbf::Atom(Move::SomeChild(q)) => Pbf::Atom(Move::AllChildren(*q)),
            Pbf::Atom(m) => Pbf::Atom(*m),
            Pbf::And(parts) => Pbf::Or(parts.iter().map(Pbf::dual).collect()),
            Pbf::Or(parts) => Pbf::And(parts.iter().map(Pbf::dual).collect()),
        }
    }

    /// Shifts every state reference by `offset`.
    pub fn remap_states(&self, offset: usize) -> Pbf {
        match self {
            Pbf::True => Pbf::True,
            Pbf::False => Pbf::False,
            Pbf::Atom(Move::AllChildren(q)) => Pbf::Atom(Move::AllChildren(q + offset)),
            Pbf::Atom(Move::SomeChild(q)) => Pbf::Atom(Move::SomeChild(q + offset)),
            Pbf::Atom(Move::Directed(j, q)) => Pbf::Atom(Move::Directed(*j, q + offset)),
            Pbf::And(parts) => Pbf::And(parts.iter().map(|p| p.remap_states(offset)).collect()),
            Pbf::Or(parts) => Pbf::Or(parts.iter().map(|p| p.remap_states(offset)).collect()),
        }
    }

    /// Minimal models (antichain): sets of moves whose truth satisfies the
    /// formula.
    pub fn min_models(&self) -> Vec<BTreeSet<Move>> {
        fn insert_minimal(out: &mut Vec<BTreeSet<Move>>, m: BTreeSet<Move>) {
            if out.iter().any(|x| x.is_subset(&m)) {
                return;
            }
            out.retain(|x| !m.is_subset(x));
            out.push(m);
        }
        match self {
            Pbf::True => alloc::vec![BTreeSet::new()],
            Pbf::False => Vec::new(),
            Pbf::Atom(m) => {
                let mut s = BTreeSet::new();
                s.insert(*m);
                alloc::vec![s]
            }
            Pbf::Or(parts) => {
                let mut out: Vec<BTreeSet<Move>> = Vec::new();
                for p in parts {
                    for m in p.min_models() {
                        insert_minimal(&mut out, m);
                    }
                }
                out
            }
            Pbf::And(parts) => {
                let mut acc: Vec<BTreeSet<Move>> = alloc::vec![BTreeSet::new()];
                for p in parts {
                    let models = p.min_models();
                    let mut next: Vec<BTreeSet<Move>> = Vec::new();
                    for a in &acc {
                        for m in &models {
                            let mut u = a.clone();
                            u.extend(m.iter().copied());
                            insert_minimal(&mut next, u);
                        }
                    }
                    acc = next;
                }
                acc
            }
        }
    }
}

/// Alternating parity tree automaton; acceptance is max-even on every path
/// of the run.
#[derive(Clone, Debug)]
pub struct Apt {
    pub alphabet: TreeAlphabet,
    pub n_states: usize,
    pub initial: usize,
    pub priority: Vec<u32>,
    /// `trans[state][letter]`.
    pub trans: Vec<Vec<Pbf>>,
}

/// Nondeterministic view: every transition is a disjunction of full
/// child assignments (directed moves only).
#[derive(Clone, Debug)]
pub struct Npt(pub Apt);

/// Universal view: the dual shape.
#[derive(Clone, Debug)]
pub struct Upt(pub Apt);

impl Apt {
    /// Complement automaton.
    pub fn dual(&self) -> Apt {
        Apt {
            alphabet: self.alphabet.clone(),
            n_states: self.n_states,
            initial: self.initial,
            priority: self.priority.iter().map(|p| p + 1).collect(),
            trans: self
                .trans
                .iter()
                .map(|row| row.iter().map(Pbf::dual).collect())
                .collect(),
        }
    }

    /// One-state automaton testing the current letter.
    pub fn letter_test(alphabet: &TreeAlphabet, test: impl Fn(&TreeLetter) -> bool) -> Apt {
        let trans = alloc::vec![alphabet
            .letters
            .iter()
            .map(|l| if test(l) { Pbf::True } else { Pbf::False })
            .collect()];
        Apt {
            alphabet: alphabet.clone(),
            n_states: 1,
            initial: 0,
            priority: alloc::vec![0],
            trans,
        }
    }

    /// Conjunction and disjunction with shared alphabet.
    pub fn combine(parts: Vec<&Apt>, conjunction: bool) -> Apt {
        assert!(!parts.is_empty());
        let alphabet = parts[0].alphabet.clone();
        let n_letters = alphabet.n_letters();
        let mut priority = alloc::vec![0u32];
        let mut trans: Vec<Vec<Pbf>> = alloc::vec![Vec::new()];
        let mut offsets = Vec::with_capacity(parts.len());
        let mut total = 1usize;
        for a in &parts {
            offsets.push(total);
            total += a.n_states;
        }
        for (a, &off) in parts.iter().zip(&offsets) {
            priority.extend(a.priority.iter().copied());
            let _ = off;
        }
        for li in 0..n_letters {
            let roots: Vec<Pbf> = parts
                .iter()
                .zip(&offsets)
                .map(|(a, &off)| a.trans[a.initial][li].remap_states(off))
                .collect();
            trans[0].push(if conjunction { Pbf::and(roots) } else { Pbf::or(roots) });
        }
        for (a, &off) in parts.iter().zip(&offsets) {
            for q in 0..a.n_states {
                debug_assert_eq!(trans.len(), off + q);
                trans.push(a.trans[q].iter().map(|p| p.remap_states(off)).collect());
            }
        }
        Apt { alphabet, n_states: total, initial: 0, priority, trans }
    }
}

/// A regular tree presented as a finite graph: node labels as letter indices
/// and ordered children.
pub trait TreeSource {
    fn root(&self) -> usize;
    fn n_nodes(&self) -> usize;
    fn letter(&self, node: usize) -> usize;
    fn children(&self, node: usize) -> Vec<usize>;
}

/// The unfolding of a Kripke structure: nodes are its states.
pub struct WksSource<'a> {
    pub kripke: &'a Wks,
    pub letter_of: Vec<usize>,
}

impl<'a> WksSource<'a> {
    pub fn new(k: &'a Wks, alphabet: &TreeAlphabet) -> Result<WksSource<'a>, CapExceeded> {
        let mut letter_of = Vec::with_capacity(k.n_states());
        for v in 0..k.n_states() {
            let values: Vec<Rat> = alphabet
                .atoms
                .iter()
                .map(|a| match k.atom_index(a) {
                    Some(i) => k.labels[v][i],
                    None => Rat::ZERO,
                })
                .collect();
            let arity = k.edges[v].len();
            let li = alphabet.letter_index(&values, arity).ok_or_else(|| CapExceeded {
                site: alloc::format!("state {v} outside the tree alphabet"),
                limit: 0,
            })?;
            letter_of.push(li);
        }
        Ok(WksSource { kripke: k, letter_of })
    }
}

impl<'a> TreeSource for WksSource<'a> {
    fn root(&self) -> usize {
        self.kripke.initial.0 as usize
    }

    fn n_nodes(&self) -> usize {
        self.kripke.n_states()
    }

    fn letter(&self, node: usize) -> usize {
        self.letter_of[node]
    }

    fn children(&self, node: usize) -> Vec<usize> {
        self.kripke.edges[node].iter().map(|s| s.0 as usize).collect()
    }
}

/// A lasso tree: depth-truncated tree whose leaves carry repetition edges.
pub struct LassoTreeSource<'a> {
    pub tree: &'a FiniteTree,
    pub letter_of: Vec<usize>,
}

impl<'a> LassoTreeSource<'a> {
    /// Every leaf must repeat an ancestor, making the tree regular.
    pub fn new(tree: &'a FiniteTree, alphabet: &TreeAlphabet) -> Result<LassoTreeSource<'a>, CapExceeded> {
        let mut letter_of = Vec::with_capacity(tree.nodes.len());
        for (i, n) in tree.nodes.iter().enumerate() {
            let resolved = tree.resolve(i);
            if tree.nodes[resolved].children.is_empty() {
                return Err(CapExceeded {
                    site: alloc::format!("leaf {i} has no repetition edge"),
                    limit: 0,
                });
            }
            let values: Vec<Rat> = alphabet
                .atoms
                .iter()
                .map(|a| match tree.atom_index(a) {
                    Some(ai) => n.labels[ai],
                    None => Rat::ZERO,
                })
                .collect();
            let arity = tree.nodes[resolved].children.len();
            let li = alphabet.letter_index(&values, arity).ok_or_else(|| CapExceeded {
                site: alloc::format!("node {i} outside the tree alphabet"),
                limit: 0,
            })?;
            letter_of.push(li);
        }
        Ok(LassoTreeSource { tree, letter_of })
    }
}

impl<'a> TreeSource for LassoTreeSource<'a> {
    fn root(&self) -> usize {
        self.tree.root()
    }

    fn n_nodes(&self) -> usize {
        self.tree.nodes.len()
    }

    fn letter(&self, node: usize) -> usize {
        self.letter_of[node]
    }

    fn children(&self, node: usize) -> Vec<usize> {
        self.tree.children_resolved(node).to_vec()
    }
}

/// Acceptance of a regular tree by an APT, decided on the product parity
/// game: disjunctions and ◇-moves belong to the even player, conjunctions
/// and □-moves to the odd player.
pub fn apt_accepts(
    apt: &Apt,
    source: &impl TreeSource,
    from_node: usize,
    limits: &Limits,
) -> Result<bool, CapExceeded> {
    let (game, init) = acceptance_game(apt, source, from_node, limits)?;
    let sol = parity::solve(&game);
    Ok(sol.winner[init] == Owner::Even)
}

/// Builds the acceptance game; exposed for telemetry.
pub fn acceptance_game(
    apt: &Apt,
    source: &impl TreeSource,
    from_node: usize,
    limits: &Limits,
) -> Result<(ParityGame, usize), CapExceeded> {
    struct Builder {
        owner: Vec<Owner>,
        priority: Vec<u32>,
        edges: Vec<Vec<usize>>,
    }
    impl Builder {
        fn push(&mut self, owner: Owner, priority: u32) -> usize {
            self.owner.push(owner);
            self.priority.push(priority);
            self.edges.push(Vec::new());
            self.owner.len() - 1
        }
    }
    let mut b = Builder { owner: Vec::new(), priority: Vec::new(), edges: Vec::new() };
    // sinks: accepted / rejected
    let accept_sink = b.push(Owner::Even, 0);
    b.edges[accept_sink].push(accept_sink);
    let reject_sink = b.push(Owner::Even, 1);
    b.edges[reject_sink].push(reject_sink);

    let mut state_vertex: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut todo: Vec<(usize, usize)> = Vec::new();
    let intern = |b: &mut Builder,
                      node: usize,
                      q: usize,
                      state_vertex: &mut BTreeMap<(usize, usize), usize>,
                      todo: &mut Vec<(usize, usize)>|
     -> usize {
        if let Some(&v) = state_vertex.get(&(node, q)) {
            return v;
        }
        let v = b.push(Owner::Even, apt.priority[q]);
        state_vertex.insert((node, q), v);
        todo.push((node, q));
        v
    };
    let init = intern(&mut b, from_node, apt.initial, &mut state_vertex, &mut todo);
    while let Some((node, q)) = todo.pop() {
        if b.owner.len() > limits.max_game_vertices {
            return Err(CapExceeded {
                site: "acceptance game".into(),
                limit: limits.max_game_vertices as u64,
            });
        }
        let children = source.children(node);
        let pbf = &apt.trans[q][source.letter(node)];
        // expand the formula into game vertices below (node, q)
        let root_vertex = state_vertex[&(node, q)];
        let target = expand(
            &mut b,
            pbf,
            &children,
            accept_sink,
            reject_sink,
            apt,
            &mut state_vertex,
            &mut todo,
        );
        b.edges[root_vertex].push(target);
    }
    let game = ParityGame::new(b.owner, b.priority, b.edges).expect("well-formed by construction");
    return Ok((game, init));

    #[allow(clippy::too_many_arguments)]
    fn expand(
        b: &mut Builder,
        pbf: &Pbf,
        children: &[usize],
        accept_sink: usize,
        reject_sink: usize,
        apt: &Apt,
        state_vertex: &mut BTreeMap<(usize, usize), usize>,
        todo: &mut Vec<(usize, usize)>,
    ) -> usize {
        let mut intern = |b: &mut Builder, node: usize, q: usize| -> usize {
            if let Some(&v) = state_vertex.get(&(node, q)) {
                return v;
            }
            let v = b.push(Owner::Even, apt.priority[q]);
            state_vertex.insert((node, q), v);
            todo.push((node, q));
            v
        };
        match pbf {
            Pbf::True => accept_sink,
            Pbf::False => reject_sink,
            Pbf::Atom(Move::AllChildren(q)) => {
                if children.is_empty() {
                    return accept_sink;
                }
                let v = b.push(Owner::Odd, 0);
                for &c in children {
                    let t = intern(b, c, *q);
                    b.edges[v].push(t);
                }
                v
            }
            Pbf::Atom(Move::SomeChild(q)) => {
                if children.is_empty() {
                    return reject_sink;
                }
                let v = b.push(Owner::Even, 0);
                for &c in children {
                    let t = intern(b, c, *q);
                    b.edges[v].push(t);
                }
                v
            }
            Pbf::Atom(Move::Directed(j, q)) => {
                match children.get(*j) {
                    Some(&c) => intern(b, c, *q),
                    None => reject_sink,
                }
            }
            Pbf::And(parts) => {
                let v = b.push(Owner::Odd, 0);
                for p in parts {
                    let t = expand(b, p, children, accept_sink, reject_sink, apt, state_vertex, todo);
                    b.edges[v].push(t);
                }
                v
            }
            Pbf::Or(parts) => {
                let v = b.push(Owner::Even, 0);
                for p in parts {
                    let t = expand(b, p, children, accept_sink, reject_sink, apt, state_vertex, todo);
                    b.edges[v].push(t);
                }
                v
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;

    fn loop_wks(p: Rat) -> Wks {
        Wks::build(
            alloc::vec!["p".into()],
            alloc::vec!["s".into()],
            "s",
            &[("s".into(), "s".into())],
            alloc::vec![alloc::vec![p]],
        )
        .unwrap()
    }

    #[test]
    fn letter_test_automaton() {
        let k = loop_wks(Rat::ONE);
        let alphabet = TreeAlphabet::for_wks(&k, &["p".into()], &Limits::default()).unwrap();
        let apt = Apt::letter_test(&alphabet, |l| l.values[0] == Rat::ONE);
        let src = WksSource::new(&k, &alphabet).unwrap();
        assert!(apt_accepts(&apt, &src, src.root(), &Limits::default()).unwrap());

        let k0 = loop_wks(Rat::ZERO);
        let alphabet0 = TreeAlphabet::for_wks(&k0, &["p".into()], &Limits::default()).unwrap();
        let apt0 = Apt::letter_test(&alphabet0, |l| l.values[0] == Rat::ONE);
        let src0 = WksSource::new(&k0, &alphabet0).unwrap();
        assert!(!apt_accepts(&apt0, &src0, src0.root(), &Limits::default()).unwrap());
    }

    #[test]
    fn dual_flips_acceptance() {
        let k = loop_wks(Rat::ONE);
        let alphabet = TreeAlphabet::for_wks(&k, &["p".into()], &Limits::default()).unwrap();
        let apt = Apt::letter_test(&alphabet, |l| l.values[0] == Rat::ONE);
        let src = WksSource::new(&k, &alphabet).unwrap();
        assert!(apt_accepts(&apt, &src, src.root(), &Limits::default()).unwrap());
        assert!(!apt_accepts(&apt.dual(), &src, src.root(), &Limits::default()).unwrap());
    }

    #[test]
    fn safety_box_automaton() {
        // 2 states: s(p=1) -> t(p=0) -> t. "always p" fails, "p now" holds.
        let k = Wks::build(
            alloc::vec!["p".into()],
            alloc::vec!["s".into(), "t".into()],
            "s",
            &[("s".into(), "t".into()), ("t".into(), "t".into())],
            alloc::vec![alloc::vec![Rat::ONE], alloc::vec![Rat::ZERO]],
        )
        .unwrap();
        let alphabet = TreeAlphabet::for_wks(&k, &["p".into()], &Limits::default()).unwrap();
        // one-state automaton: accept iff p holds here and everywhere below
        let pi = alphabet.atom_index("p").unwrap();
        let trans = alloc::vec![alphabet
            .letters
            .iter()
            .map(|l| {
                if l.values[pi] == Rat::ONE {
                    Pbf::Atom(Move::AllChildren(0))
                } else {
                    Pbf::False
                }
            })
            .collect()];
        let apt = Apt {
            alphabet: alphabet.clone(),
            n_states: 1,
            initial: 0,
            priority: alloc::vec![0],
            trans,
        };
        let src = WksSource::new(&k, &alphabet).unwrap();
        assert!(!apt_accepts(&apt, &src, src.root(), &Limits::default()).unwrap());
        // on an all-ones loop the same shape accepts
        let k1 = loop_wks(Rat::ONE);
        let alphabet1 = TreeAlphabet::for_wks(&k1, &["p".into()], &Limits::default()).unwrap();
        let pi1 = alphabet1.atom_index("p").unwrap();
        let trans1 = alloc::vec![alphabet1
            .letters
            .iter()
            .map(|l| {
                if l.values[pi1] == Rat::ONE {
                    Pbf::Atom(Move::AllChildren(0))
                } else {
                    Pbf::False
                }
            })
            .collect()];
        let apt1 = Apt {
            alphabet: alphabet1.clone(),
            n_states: 1,
            initial: 0,
            priority: alloc::vec![0],
            trans: trans1,
        };
        let src1 = WksSource::new(&k1, &alphabet1).unwrap();
        assert!(apt_accepts(&apt1, &src1, src1.root(), &Limits::default()).unwrap());
    }

    #[test]
    fn min_models_antichain() {
        let f = Pbf::Or(alloc::vec![
            Pbf::Atom(Move::SomeChild(0)),
            Pbf::And(alloc::vec![
                Pbf::Atom(Move::SomeChild(0)),
                Pbf::Atom(Move::AllChildren(1))
            ]),
        ]);
        let models = f.min_models();
        assert_eq!(models.len(), 1);
        assert_eq!(models[0].len(), 1);
        assert!(Pbf::False.min_models().is_empty());
        assert_eq!(Pbf::True.min_models(), alloc::vec![BTreeSet::new()]);
    }

    #[test]
    fn combine_and_or() {
        let k = loop_wks(Rat::ONE);
        let alphabet = TreeAlphabet::for_wks(&k, &["p".into()], &Limits::default()).unwrap();
        let yes = Apt::letter_test(&alphabet, |_| true);
        let no = Apt::letter_test(&alphabet, |_| false);
        let src = WksSource::new(&k, &alphabet).unwrap();
        let both = Apt::combine(alloc::vec![&yes, &no], true);
        assert!(!apt_accepts(&both, &src, src.root(), &Limits::default()).unwrap());
        let either = Apt::combine(alloc::vec![&yes, &no], false);
        assert!(apt_accepts(&either, &src, src.root(), &Limits::default()).unwrap());
    }

    #[test]
    fn lasso_tree_source_requires_repeats() {
        let k = loop_wks(Rat::ONE);
        let t = crate::kripke::unfold_wks(&k, 1);
        let alphabet = TreeAlphabet::for_wks(&k, &["p".into()], &Limits::default()).unwrap();
        assert!(LassoTreeSource::new(&t, &alphabet).is_err());
        let mut t2 = t.clone();
        let leaf = t2.nodes.iter().position(|n| n.children.is_empty()).unwrap();
        t2.nodes[leaf].repeat = Some(0);
        let src = LassoTreeSource::new(&t2, &alphabet).unwrap();
        let apt = Apt::letter_test(&alphabet, |l| l.values[0] == Rat::ONE);
        assert!(apt_accepts(&apt, &src, src.root(), &Limits::default()).unwrap());
    }
}
