//! Determinization of nondeterministic Büchi automata into deterministic
//! parity automata, via Safra trees with age-ordered node names.
//!
//! Names are positions in an age-ordered node list and are compacted after
//! every transition, so a surviving node's name only ever decreases and
//! eventually stabilizes. Each transition reports the smallest name that was
//! deleted (bad) and the smallest name that was marked by a vertical merge
//! (good); folding these events into max-even parity priorities yields the
//! acceptance condition: some stable node is marked infinitely often and
//! never disturbed, which is exactly the Safra–Rabin condition.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::limits::{CapExceeded, Limits};
use crate::word::{Dpw, Nbw};

/// Age-ordered Safra tree: `parent[i] < i` for every non-root node.
type Tree = Vec<(Option<usize>, BTreeSet<u32>)>;

/// A determinized state: the tree plus the priority of the transition that
/// entered it.
pub type SafraState = (Tree, u32);

/// Access to an NBW with opaque letters, for callers whose alphabets are not
/// enumerable up front.
pub trait NbwSource {
    type Letter;
    fn initial_states(&self) -> Vec<u32>;
    fn successors(&self, state: u32, letter: &Self::Letter) -> Vec<u32>;
    fn is_accepting(&self, state: u32) -> bool;
    fn state_bound(&self) -> usize;
}

/// Incremental determinizer with memoized states.
pub struct SafraDet<'a, S: NbwSource> {
    src: &'a S,
    pub states: Vec<SafraState>,
    index: BTreeMap<SafraState, usize>,
    /// 2·state_bound + 1; names never exceed it.
    n_max: usize,
}

impl<'a, S: NbwSource> SafraDet<'a, S> {
    pub fn new(src: &'a S) -> SafraDet<'a, S> {
        SafraDet {
            src,
            states: Vec::new(),
            index: BTreeMap::new(),
            n_max: 2 * src.state_bound() + 1,
        }
    }

    fn intern(&mut self, st: SafraState, limits: &Limits) -> Result<usize, CapExceeded> {
        if let Some(&i) = self.index.get(&st) {
            return Ok(i);
        }
        if self.states.len() >= limits.max_automaton_states {
            return Err(CapExceeded {
                site: "determinization states".into(),
                limit: limits.max_automaton_states as u64,
            });
        }
        self.states.push(st.clone());
        self.index.insert(st, self.states.len() - 1);
        Ok(self.states.len() - 1)
    }

    /// The neutral priority: nothing was marked.
    pub fn neutral(&self) -> u32 {
        1
    }

    // a deletion at name k outranks a mark at k, which outranks any event at
    // a larger name: bad(k) = 2(N−k)+3 > good(k) = 2(N−k)+2 > bad(k+1)
    fn bad_priority(&self, name: usize) -> u32 {
        (2 * (self.n_max - name.min(self.n_max)) + 3) as u32
    }

    fn good_priority(&self, name: usize) -> u32 {
        (2 * (self.n_max - name.min(self.n_max)) + 2) as u32
    }

    pub fn initial(&mut self, limits: &Limits) -> Result<usize, CapExceeded> {
        let init: BTreeSet<u32> = self.src.initial_states().into_iter().collect();
        let tree: Tree = if init.is_empty() {
            Vec::new()
        } else {
            alloc::vec![(None, init)]
        };
        self.intern((tree, self.neutral()), limits)
    }

    pub fn priority(&self, state: usize) -> u32 {
        self.states[state].1
    }

    /// Deterministic successor of `state` on `letter`.
    pub fn step(
        &mut self,
        state: usize,
        letter: &S::Letter,
        limits: &Limits,
    ) -> Result<usize, CapExceeded> {
        let (tree, _) = self.states[state].clone();
        let next = self.transition(&tree, letter);
        self.intern(next, limits)
    }

    fn transition(&self, tree: &Tree, letter: &S::Letter) -> SafraState {
        struct Node {
            parent: Option<usize>,
            label: BTreeSet<u32>,
            alive: bool,
        }
        let mut nodes: Vec<Node> = tree
            .iter()
            .map(|(p, l)| Node { parent: *p, label: l.clone(), alive: true })
            .collect();
        let old_count = nodes.len();

        // branch: youngest child collecting the accepting part
        for v in 0..old_count {
            let f_part: BTreeSet<u32> = nodes[v]
                .label
                .iter()
                .copied()
                .filter(|&q| self.src.is_accepting(q))
                .collect();
            if !f_part.is_empty() {
                nodes.push(Node { parent: Some(v), label: f_part, alive: true });
            }
        }

        // powerset step
        for node in &mut nodes {
            let mut next: BTreeSet<u32> = BTreeSet::new();
            for &q in &node.label {
                next.extend(self.src.successors(q, letter));
            }
            node.label = next;
        }

        let children = |nodes: &Vec<Node>, v: usize| -> Vec<usize> {
            (0..nodes.len()).filter(|&c| nodes[c].parent == Some(v)).collect()
        };
        let subtree = |nodes: &Vec<Node>, v: usize| -> Vec<usize> {
            let mut out = alloc::vec![v];
            let mut i = 0;
            while i < out.len() {
                let cur = out[i];
                out.extend((0..nodes.len()).filter(|&c| nodes[c].parent == Some(cur)));
                i += 1;
            }
            out
        };

        // horizontal merge: a state stays only in the oldest sibling branch
        let roots: Vec<usize> = (0..nodes.len()).filter(|&v| nodes[v].parent.is_none()).collect();
        let mut stack: Vec<usize> = roots;
        while let Some(v) = stack.pop() {
            let kids = children(&nodes, v);
            let mut acc: BTreeSet<u32> = BTreeSet::new();
            for c in kids {
                for w in subtree(&nodes, c) {
                    nodes[w].label = nodes[w].label.difference(&acc).copied().collect();
                }
                acc.extend(nodes[c].label.iter().copied());
                stack.push(c);
            }
        }

        // remove empty nodes (children of an empty node are empty too)
        let mut deleted: Vec<usize> = Vec::new();
        for v in 0..nodes.len() {
            if nodes[v].alive && nodes[v].label.is_empty() {
                for w in subtree(&nodes, v) {
                    if nodes[w].alive {
                        nodes[w].alive = false;
                        deleted.push(w);
                    }
                }
            }
        }

        // vertical merge, simultaneously on all eligible nodes
        let mut eligible: Vec<usize> = Vec::new();
        for v in 0..nodes.len() {
            if !nodes[v].alive {
                continue;
            }
            let kids: Vec<usize> =
                children(&nodes, v).into_iter().filter(|&c| nodes[c].alive).collect();
            if kids.is_empty() {
                continue;
            }
            let mut union: BTreeSet<u32> = BTreeSet::new();
            for &c in &kids {
                union.extend(nodes[c].label.iter().copied());
            }
            if union == nodes[v].label {
                eligible.push(v);
            }
        }
        let mut killed_by_merge: BTreeSet<usize> = BTreeSet::new();
        for &v in &eligible {
            for w in subtree(&nodes, v) {
                if w != v && nodes[w].alive {
                    killed_by_merge.insert(w);
                }
            }
        }
        let marks: Vec<usize> = eligible
            .iter()
            .copied()
            .filter(|v| !killed_by_merge.contains(v))
            .collect();
        for &w in &killed_by_merge {
            nodes[w].alive = false;
            deleted.push(w);
        }

        // events decide the transition priority
        let bad = deleted.iter().copied().min();
        let good = marks.iter().copied().min();
        let priority = match (bad, good) {
            (None, None) => self.neutral(),
            (Some(b), None) => self.bad_priority(b),
            (None, Some(g)) => self.good_priority(g),
            (Some(b), Some(g)) => {
                if b <= g {
                    self.bad_priority(b)
                } else {
                    self.good_priority(g)
                }
            }
        };

        // compaction: alive nodes keep their age order
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out: Tree = Vec::new();
        for v in 0..nodes.len() {
            if nodes[v].alive {
                remap.insert(v, out.len());
                let parent =
                    nodes[v].parent.map(|p| *remap.get(&p).expect("parents are older and alive"));
                out.push((parent, nodes[v].label.clone()));
            }
        }
        (out, priority)
    }
}

impl NbwSource for Nbw {
    type Letter = usize;

    fn initial_states(&self) -> Vec<u32> {
        self.initial.iter().map(|&q| q as u32).collect()
    }

    fn successors(&self, state: u32, letter: &usize) -> Vec<u32> {
        self.trans[state as usize][*letter].iter().map(|&q| q as u32).collect()
    }

    fn is_accepting(&self, state: u32) -> bool {
        self.accepting[state as usize]
    }

    fn state_bound(&self) -> usize {
        self.n_states
    }
}

/// Materializes the determinization of an NBW over its explicit alphabet.
pub fn determinize(n: &Nbw, limits: &Limits) -> Result<Dpw, CapExceeded> {
    let mut det = SafraDet::new(n);
    let init = det.initial(limits)?;
    let n_letters = n.alphabet.n_letters();
    let mut trans: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    let mut todo = alloc::vec![init];
    let mut expanded = alloc::vec![false];
    while let Some(s) = todo.pop() {
        if expanded[s] {
            continue;
        }
        expanded[s] = true;
        let mut row = Vec::with_capacity(n_letters);
        for li in 0..n_letters {
            let t = det.step(s, &li, limits)?;
            while expanded.len() < det.states.len() {
                expanded.push(false);
                trans.push(Vec::new());
            }
            row.push(t);
            if !expanded[t] {
                todo.push(t);
            }
        }
        trans[s] = row;
    }
    // states interned but never expanded are unreachable; keep them total
    for s in 0..trans.len() {
        if trans[s].is_empty() {
            trans[s] = alloc::vec![s; n_letters];
        }
    }
    let priority: Vec<u32> = (0..det.states.len()).map(|s| det.priority(s)).collect();
    Ok(Dpw {
        alphabet: n.alphabet.clone(),
        n_states: det.states.len(),
        initial: init,
        trans,
        priority,
    })
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::lasso::LassoWord;
    use crate::rat::Rat;
    use crate::word::WordAlphabet;

    pub(crate) fn splitmix(seed: &mut u64) -> u64 {
        *seed = seed.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = *seed;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub(crate) fn random_nbw(seed: &mut u64, n_states: usize, alpha: &WordAlphabet) -> Nbw {
        let letters = alpha.n_letters();
        let mut trans = Vec::with_capacity(n_states);
        for _ in 0..n_states {
            let mut row = Vec::with_capacity(letters);
            for _ in 0..letters {
                let mut succs = Vec::new();
                for q in 0..n_states {
                    if splitmix(seed) % 100 < 45 {
                        succs.push(q);
                    }
                }
                row.push(succs);
            }
            trans.push(row);
        }
        let accepting: Vec<bool> = (0..n_states).map(|_| splitmix(seed) % 2 == 0).collect();
        Nbw { alphabet: alpha.clone(), n_states, initial: alloc::vec![0], trans, accepting }
    }

    pub(crate) fn random_lasso(seed: &mut u64, alpha: &WordAlphabet, max_len: usize) -> LassoWord {
        let plen = (splitmix(seed) as usize) % max_len;
        let clen = 1 + (splitmix(seed) as usize) % max_len;
        let mk = |seed: &mut u64| -> alloc::vec::Vec<Rat> {
            let li = (splitmix(seed) as usize) % alpha.n_letters();
            alpha.letters[li].clone()
        };
        LassoWord::new(
            alpha.atoms.clone(),
            (0..plen).map(|_| mk(seed)).collect(),
            (0..clen).map(|_| mk(seed)).collect(),
        )
    }
}
