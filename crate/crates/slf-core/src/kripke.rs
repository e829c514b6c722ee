//! Weighted Kripke structures, finite labelled trees, tree unfoldings, and
//! the game-to-Kripke model transformation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::game::{StateId, StructureError, Wcgs};
use crate::rat::Rat;

/// A weighted Kripke structure with a left-total transition relation.
#[derive(Clone, Debug)]
pub struct Wks {
    pub atoms: Vec<String>,
    pub state_names: Vec<String>,
    pub initial: StateId,
    /// Sorted successor lists.
    pub edges: Vec<Vec<StateId>>,
    /// `labels[state][atom]`.
    pub labels: Vec<Vec<Rat>>,
}

impl Wks {
    pub fn build(
        atoms: Vec<String>,
        state_names: Vec<String>,
        initial: &str,
        edge_pairs: &[(String, String)],
        labels: Vec<Vec<Rat>>,
    ) -> Result<Wks, StructureError> {
        let idx: BTreeMap<&str, StateId> = state_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), StateId(i as u32)))
            .collect();
        if idx.len() != state_names.len() {
            return Err(StructureError::DuplicateName("state".into()));
        }
        if state_names.is_empty() {
            return Err(StructureError::EmptyComponent("states".into()));
        }
        let initial = *idx
            .get(initial)
            .ok_or_else(|| StructureError::UnknownState(initial.into()))?;
        let mut edges: Vec<BTreeSet<StateId>> = alloc::vec![BTreeSet::new(); state_names.len()];
        for (s, t) in edge_pairs {
            let si = *idx.get(s.as_str()).ok_or_else(|| StructureError::UnknownState(s.clone()))?;
            let ti = *idx.get(t.as_str()).ok_or_else(|| StructureError::UnknownState(t.clone()))?;
            edges[si.0 as usize].insert(ti);
        }
        for (i, e) in edges.iter().enumerate() {
            if e.is_empty() {
                return Err(StructureError::NotLeftTotal { state: state_names[i].clone() });
            }
        }
        if labels.len() != state_names.len() || labels.iter().any(|r| r.len() != atoms.len()) {
            return Err(StructureError::EmptyComponent("labels".into()));
        }
        Ok(Wks {
            atoms,
            state_names,
            initial,
            edges: edges.into_iter().map(|s| s.into_iter().collect()).collect(),
            labels,
        })
    }

    pub fn n_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.edges[s.0 as usize]
    }

    pub fn label_row(&self, s: StateId) -> &[Rat] {
        &self.labels[s.0 as usize]
    }

    pub fn label(&self, s: StateId, atom: &str) -> Option<Rat> {
        let i = self.atoms.iter().position(|a| a == atom)?;
        Some(self.labels[s.0 as usize][i])
    }

    pub fn atom_index(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    /// The finite set of weights appearing in the structure, with {0,1}.
    pub fn value_base(&self) -> Vec<Rat> {
        let mut set: BTreeSet<Rat> = self.labels.iter().flatten().copied().collect();
        set.insert(Rat::ZERO);
        set.insert(Rat::ONE);
        set.into_iter().collect()
    }

    pub fn is_history(&self, h: &[StateId]) -> bool {
        !h.is_empty()
            && h.windows(2)
                .all(|w| self.edges[w[0].0 as usize].binary_search(&w[1]).is_ok())
    }
}

/// A node of a finite labelled tree.
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub parent: Option<usize>,
    /// The direction this node extends its parent with (its own direction for
    /// the root). Directions are abstract indices.
    pub direction: u32,
    pub children: Vec<usize>,
    /// `labels[atom]` in the tree's atom order.
    pub labels: Vec<Rat>,
    /// For lasso trees: the subtree here repeats the subtree at an ancestor.
    pub repeat: Option<usize>,
}

/// A finite-depth labelled tree, optionally with a repetition map turning the
/// leaves back to ancestors (a regular tree presented finitely).
#[derive(Clone, Debug)]
pub struct FiniteTree {
    pub atoms: Vec<String>,
    pub nodes: Vec<TreeNode>,
    pub depth: usize,
}

impl FiniteTree {
    pub fn root(&self) -> usize {
        0
    }

    pub fn atom_index(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    pub fn label(&self, node: usize, atom_idx: usize) -> Rat {
        self.nodes[node].labels[atom_idx]
    }

    /// Depth of `node` below the root.
    pub fn node_depth(&self, node: usize) -> usize {
        let mut d = 0;
        let mut n = node;
        while let Some(p) = self.nodes[n].parent {
            d += 1;
            n = p;
        }
        d
    }

    /// True when every node labels `atom` with 0 or 1.
    pub fn boolean_in(&self, atom: &str) -> bool {
        match self.atom_index(atom) {
            None => true,
            Some(i) => self.nodes.iter().all(|n| n.labels[i].is_boolean()),
        }
    }

    /// All descending node paths of exactly `len + 1` nodes starting at
    /// `node`; follows repetition edges when the truncation is reached.
    pub fn paths_from(&self, node: usize, len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![alloc::vec![node]];
        while let Some(path) = stack.pop() {
            if path.len() == len + 1 {
                out.push(path);
                continue;
            }
            let cur = *path.last().expect("nonempty");
            let cur = self.resolve(cur);
            for &c in &self.nodes[cur].children {
                let mut ext = path.clone();
                ext.push(c);
                stack.push(ext);
            }
        }
        out.sort();
        out
    }

    /// Follows the repetition edge at `node`, if any.
    pub fn resolve(&self, node: usize) -> usize {
        match self.nodes[node].repeat {
            Some(a) => a,
            None => node,
        }
    }

    pub fn children_resolved(&self, node: usize) -> &[usize] {
        &self.nodes[self.resolve(node)].children
    }
}

/// Unfolds a Kripke structure to depth `d`: nodes are exactly the histories
/// of length ≤ d+1, labelled by the weight of their last state.
pub fn unfold_wks(k: &Wks, depth: usize) -> FiniteTree {
    let mut nodes = Vec::new();
    nodes.push(TreeNode {
        parent: None,
        direction: k.initial.0,
        children: Vec::new(),
        labels: k.label_row(k.initial).to_vec(),
        repeat: None,
    });
    // BFS by level; `frontier` holds (node index, kripke state)
    let mut frontier = alloc::vec![(0usize, k.initial)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (ni, s) in frontier {
            for &t in k.successors(s) {
                let child = nodes.len();
                nodes.push(TreeNode {
                    parent: Some(ni),
                    direction: t.0,
                    children: Vec::new(),
                    labels: k.label_row(t).to_vec(),
                    repeat: None,
                });
                nodes[ni].children.push(child);
                next.push((child, t));
            }
        }
        frontier = next;
    }
    FiniteTree { atoms: k.atoms.clone(), nodes, depth }
}

/// The Kripke structure K_G of a game: one state per game state, an edge when
/// some joint action realizes it, fresh Boolean atoms `p_v` marking states.
/// Returned together with the state-atom names in game-state order.
pub struct GameKripke {
    pub kripke: Wks,
    /// `state_atoms[v]` is the fresh atom holding exactly at `s_v`.
    pub state_atoms: Vec<String>,
}

impl GameKripke {
    /// The node of the unfolding corresponding to a game history (positions
    /// map one to one because states are copied in order).
    pub fn history_to_node(&self, history: &[StateId]) -> Vec<StateId> {
        history.to_vec()
    }

    pub fn node_to_history(&self, node: &[StateId]) -> Vec<StateId> {
        node.to_vec()
    }
}

/// Builds K_G. Fresh atom names avoid collisions with existing atoms.
pub fn game_to_kripke(g: &Wcgs) -> GameKripke {
    let existing: BTreeSet<&String> = g.atoms.iter().collect();
    let mut state_atoms = Vec::with_capacity(g.n_states());
    for name in &g.state_names {
        let mut cand = alloc::format!("at_{name}");
        while existing.contains(&cand) {
            cand.push('\'');
        }
        state_atoms.push(cand);
    }
    let mut atoms = g.atoms.clone();
    atoms.extend(state_atoms.iter().cloned());
    let mut labels = Vec::with_capacity(g.n_states());
    for v in g.states() {
        let mut row = g.label_row(v).to_vec();
        for u in g.states() {
            row.push(if u == v { Rat::ONE } else { Rat::ZERO });
        }
        labels.push(row);
    }
    let mut edge_pairs = Vec::new();
    for v in g.states() {
        for t in g.successors(v) {
            edge_pairs.push((
                g.state_names[v.0 as usize].clone(),
                g.state_names[t.0 as usize].clone(),
            ));
        }
    }
    let kripke = Wks::build(
        atoms,
        g.state_names.clone(),
        &g.state_names[g.initial.0 as usize],
        &edge_pairs,
        labels,
    )
    .expect("game structure is total, so K_G is left-total");
    GameKripke { kripke, state_atoms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::{matching_pennies, single_loop};

    fn loop_wks() -> Wks {
        Wks::build(
            alloc::vec!["p".into()],
            alloc::vec!["s".into()],
            "s",
            &[("s".into(), "s".into())],
            alloc::vec![alloc::vec![Rat::ONE]],
        )
        .unwrap()
    }

    #[test]
    fn left_totality_enforced() {
        let r = Wks::build(
            alloc::vec![],
            alloc::vec!["s".into(), "t".into()],
            "s",
            &[("s".into(), "t".into())],
            alloc::vec![alloc::vec![], alloc::vec![]],
        );
        assert!(matches!(r, Err(StructureError::NotLeftTotal { .. })));
    }

    #[test]
    fn unfold_single_loop() {
        let t = unfold_wks(&loop_wks(), 2);
        assert_eq!(t.nodes.len(), 3);
        assert!(t.nodes.iter().all(|n| n.labels[0] == Rat::ONE));
    }

    #[test]
    fn unfold_two_state_clique() {
        let k = Wks::build(
            alloc::vec![],
            alloc::vec!["s".into(), "t".into()],
            "s",
            &[
                ("s".into(), "s".into()),
                ("s".into(), "t".into()),
                ("t".into(), "s".into()),
                ("t".into(), "t".into()),
            ],
            alloc::vec![alloc::vec![], alloc::vec![]],
        )
        .unwrap();
        let t = unfold_wks(&k, 1);
        assert_eq!(t.nodes[0].children.len(), 2);
        assert_eq!(t.nodes.len(), 3);
    }

    #[test]
    fn unfold_node_count_matches_history_count() {
        let gk = game_to_kripke(&matching_pennies());
        let t = unfold_wks(&gk.kripke, 2);
        // histories of length <= 3 by BFS: 1 + 2 + 4 (start's 2 successors,
        // each sink loops to itself only)
        let mut count = 0;
        let mut layer = alloc::vec![alloc::vec![gk.kripke.initial]];
        for _ in 0..3 {
            count += layer.len();
            let mut next = Vec::new();
            for h in &layer {
                for &s in gk.kripke.successors(*h.last().unwrap()) {
                    let mut e = h.clone();
                    e.push(s);
                    next.push(e);
                }
            }
            layer = next;
        }
        assert_eq!(t.nodes.len(), count);
    }

    #[test]
    fn game_to_kripke_single_loop() {
        let gk = game_to_kripke(&single_loop());
        assert_eq!(gk.kripke.n_states(), 1);
        assert_eq!(gk.kripke.label(StateId(0), &gk.state_atoms[0]), Some(Rat::ONE));
    }

    #[test]
    fn game_to_kripke_pennies() {
        let g = matching_pennies();
        let gk = game_to_kripke(&g);
        assert_eq!(gk.kripke.n_states(), 3);
        for v in g.states() {
            let succ_g = g.successors(v);
            let succ_k: BTreeSet<StateId> = gk.kripke.successors(v).iter().copied().collect();
            assert_eq!(succ_g, succ_k);
        }
        // all state atoms are Boolean
        for v in g.states() {
            for (u, atom) in gk.state_atoms.iter().enumerate() {
                let w = gk.kripke.label(v, atom).unwrap();
                assert!(w.is_boolean());
                assert_eq!(w.is_one(), v.0 as usize == u);
            }
        }
    }

    #[test]
    fn bijection_round_trip() {
        let g = matching_pennies();
        let gk = game_to_kripke(&g);
        let h = alloc::vec![g.initial, g.state_id("win").unwrap()];
        assert_eq!(gk.node_to_history(&gk.history_to_node(&h)), h);
        assert!(gk.kripke.is_history(&gk.history_to_node(&h)));
    }
}
