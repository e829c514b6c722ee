//! Weighted concurrent game structures, histories, strategies and
//! assignments.
//!
//! States, agents and actions are index newtypes into name tables; the
//! transition function is total by construction and checked at build time.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActId(pub u32);

/// A joint action, one action per agent in the declared agent order.
pub type JointAction = Vec<ActId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureError {
    DuplicateName(String),
    UnknownState(String),
    UnknownAgent(String),
    UnknownAction(String),
    NonTotalTransition { state: String, joint: String },
    WeightOutOfRange { state: String, atom: String },
    EmptyComponent(String),
    NotLeftTotal { state: String },
}

impl core::fmt::Display for StructureError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            StructureError::DuplicateName(n) => write!(f, "duplicate name `{n}`"),
            StructureError::UnknownState(n) => write!(f, "unknown state `{n}`"),
            StructureError::UnknownAgent(n) => write!(f, "unknown agent `{n}`"),
            StructureError::UnknownAction(n) => write!(f, "unknown action `{n}`"),
            StructureError::NonTotalTransition { state, joint } => {
                write!(f, "missing transition from `{state}` on joint action `{joint}`")
            }
            StructureError::WeightOutOfRange { state, atom } => {
                write!(f, "weight of `{atom}` at `{state}` outside [0,1]")
            }
            StructureError::EmptyComponent(c) => write!(f, "empty component: {c}"),
            StructureError::NotLeftTotal { state } => {
                write!(f, "state `{state}` has no successor")
            }
        }
    }
}

/// A weighted concurrent game structure.
#[derive(Clone, Debug)]
pub struct Wcgs {
    pub atoms: Vec<String>,
    pub agents: Vec<String>,
    pub actions: Vec<String>,
    pub state_names: Vec<String>,
    pub initial: StateId,
    /// `labels[state][atom]` in the declared atom order.
    pub labels: Vec<Vec<Rat>>,
    /// `delta[state][joint_code]`, joint codes in mixed-radix action order.
    delta: Vec<Vec<StateId>>,
}

impl Wcgs {
    pub fn build(
        atoms: Vec<String>,
        agents: Vec<String>,
        actions: Vec<String>,
        state_names: Vec<String>,
        initial: &str,
        labels: Vec<Vec<Rat>>,
        transitions: &BTreeMap<(String, Vec<String>), String>,
    ) -> Result<Wcgs, StructureError> {
        if agents.is_empty() {
            return Err(StructureError::EmptyComponent("agents".into()));
        }
        if actions.is_empty() {
            return Err(StructureError::EmptyComponent("actions".into()));
        }
        if state_names.is_empty() {
            return Err(StructureError::EmptyComponent("states".into()));
        }
        check_distinct(&atoms)?;
        check_distinct(&agents)?;
        check_distinct(&actions)?;
        check_distinct(&state_names)?;
        let state_idx: BTreeMap<&str, StateId> = state_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), StateId(i as u32)))
            .collect();
        let act_idx: BTreeMap<&str, ActId> = actions
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), ActId(i as u32)))
            .collect();
        let initial = *state_idx
            .get(initial)
            .ok_or_else(|| StructureError::UnknownState(initial.into()))?;
        let n_joint = actions.len().pow(agents.len() as u32);
        let mut delta = alloc::vec![alloc::vec![StateId(u32::MAX); n_joint]; state_names.len()];
        let mut filled = alloc::vec![alloc::vec![false; n_joint]; state_names.len()];
        for ((src, joint), dst) in transitions {
            let s = *state_idx
                .get(src.as_str())
                .ok_or_else(|| StructureError::UnknownState(src.clone()))?;
            let d = *state_idx
                .get(dst.as_str())
                .ok_or_else(|| StructureError::UnknownState(dst.clone()))?;
            if joint.len() != agents.len() {
                return Err(StructureError::NonTotalTransition {
                    state: src.clone(),
                    joint: joint.join(","),
                });
            }
            let mut code = 0usize;
            for a in joint {
                let act = act_idx
                    .get(a.as_str())
                    .ok_or_else(|| StructureError::UnknownAction(a.clone()))?;
                code = code * actions.len() + act.0 as usize;
            }
            delta[s.0 as usize][code] = d;
            filled[s.0 as usize][code] = true;
        }
        for (si, row) in filled.iter().enumerate() {
            for (code, ok) in row.iter().enumerate() {
                if !ok {
                    let joint = decode_joint(code, agents.len(), actions.len())
                        .iter()
                        .map(|a| actions[a.0 as usize].clone())
                        .collect::<Vec<_>>()
                        .join(",");
                    return Err(StructureError::NonTotalTransition {
                        state: state_names[si].clone(),
                        joint,
                    });
                }
            }
        }
        if labels.len() != state_names.len() || labels.iter().any(|row| row.len() != atoms.len()) {
            return Err(StructureError::EmptyComponent("labels".into()));
        }
        Ok(Wcgs {
            atoms,
            agents,
            actions,
            state_names,
            initial,
            labels,
            delta,
        })
    }

    pub fn n_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn n_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn n_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_names.len() as u32).map(StateId)
    }

    pub fn joint_codes(&self) -> impl Iterator<Item = usize> {
        0..self.n_joint()
    }

    pub fn n_joint(&self) -> usize {
        self.actions.len().pow(self.agents.len() as u32)
    }

    pub fn encode_joint(&self, joint: &[ActId]) -> usize {
        debug_assert_eq!(joint.len(), self.agents.len());
        joint
            .iter()
            .fold(0usize, |acc, a| acc * self.actions.len() + a.0 as usize)
    }

    pub fn decode_joint(&self, code: usize) -> JointAction {
        decode_joint(code, self.agents.len(), self.actions.len())
    }

    pub fn step(&self, state: StateId, joint_code: usize) -> StateId {
        self.delta[state.0 as usize][joint_code]
    }

    pub fn step_joint(&self, state: StateId, joint: &[ActId]) -> StateId {
        self.step(state, self.encode_joint(joint))
    }

    pub fn successors(&self, state: StateId) -> BTreeSet<StateId> {
        self.delta[state.0 as usize].iter().copied().collect()
    }

    pub fn label(&self, state: StateId, atom: &str) -> Option<Rat> {
        let i = self.atoms.iter().position(|a| a == atom)?;
        Some(self.labels[state.0 as usize][i])
    }

    pub fn label_row(&self, state: StateId) -> &[Rat] {
        &self.labels[state.0 as usize]
    }

    pub fn agent_id(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|a| a == name).map(|i| AgentId(i as u32))
    }

    pub fn action_id(&self, name: &str) -> Option<ActId> {
        self.actions.iter().position(|a| a == name).map(|i| ActId(i as u32))
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|a| a == name).map(|i| StateId(i as u32))
    }

    /// The finite set of weights appearing in the structure, with {0,1}.
    pub fn value_base(&self) -> Vec<Rat> {
        let mut set: BTreeSet<Rat> = self.labels.iter().flatten().copied().collect();
        set.insert(Rat::ZERO);
        set.insert(Rat::ONE);
        set.into_iter().collect()
    }

    /// Validity of a nonempty state sequence as a history of this structure.
    pub fn is_history(&self, h: &[StateId]) -> bool {
        !h.is_empty()
            && h.windows(2)
                .all(|w| self.successors(w[0]).contains(&w[1]))
    }
}

fn decode_joint(code: usize, n_agents: usize, n_actions: usize) -> JointAction {
    let mut joint = alloc::vec![ActId(0); n_agents];
    let mut c = code;
    for i in (0..n_agents).rev() {
        joint[i] = ActId((c % n_actions) as u32);
        c /= n_actions;
    }
    joint
}

fn check_distinct(names: &[String]) -> Result<(), StructureError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(StructureError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

/// A finitely represented strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteStrategy {
    /// One action per state, read off the last state of the history.
    Memoryless(Vec<ActId>),
    /// Explicit action per history, up to some horizon.
    HorizonTree(BTreeMap<Vec<StateId>, ActId>),
    /// Finite-memory machine: `update[m][state] -> m'`, `output[m][state] -> action`.
    Mealy {
        n_memory: usize,
        initial: usize,
        update: Vec<Vec<usize>>,
        output: Vec<Vec<ActId>>,
    },
}

impl FiniteStrategy {
    /// The action at a history, if the strategy is defined there.
    pub fn act(&self, history: &[StateId]) -> Option<ActId> {
        match self {
            FiniteStrategy::Memoryless(m) => {
                let last = history.last()?;
                m.get(last.0 as usize).copied()
            }
            FiniteStrategy::HorizonTree(map) => map.get(history).copied(),
            FiniteStrategy::Mealy { initial, update, output, .. } => {
                let mut m = *initial;
                for s in &history[..history.len() - 1] {
                    m = update[m][s.0 as usize];
                }
                let last = history.last()?;
                output[m].get(last.0 as usize).copied()
            }
        }
    }
}

/// Keys an assignment can bind: strategy variables or agents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AssignKey {
    Var(String),
    Agent(AgentId),
}

/// A partial map from variables and agents to strategies. Updates are
/// persistent: `with` returns a new assignment.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    map: BTreeMap<AssignKey, Arc<FiniteStrategy>>,
}

impl Assignment {
    pub fn empty() -> Assignment {
        Assignment::default()
    }

    pub fn with(&self, key: AssignKey, strat: Arc<FiniteStrategy>) -> Assignment {
        let mut map = self.map.clone();
        map.insert(key, strat);
        Assignment { map }
    }

    pub fn get(&self, key: &AssignKey) -> Option<&Arc<FiniteStrategy>> {
        self.map.get(key)
    }

    pub fn agent_strategy(&self, agent: AgentId) -> Option<&Arc<FiniteStrategy>> {
        self.map.get(&AssignKey::Agent(agent))
    }

    pub fn assigned_agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.map.keys().filter_map(|k| match k {
            AssignKey::Agent(a) => Some(*a),
            AssignKey::Var(_) => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutcomeError {
    /// Some assigned strategy is undefined on a reached history.
    StrategyDomainExhausted,
}

/// The length-(|ρ|+h) prefixes of the outcomes of `assignment` from `history`:
/// assigned agents follow their strategies, unassigned agents range over all
/// actions. Sorted and deduplicated.
pub fn outcomes(
    game: &Wcgs,
    assignment: &Assignment,
    history: &[StateId],
    horizon: usize,
) -> Result<Vec<Vec<StateId>>, OutcomeError> {
    debug_assert!(game.is_history(history));
    let mut frontier: BTreeSet<Vec<StateId>> = BTreeSet::new();
    frontier.insert(history.to_vec());
    for _ in 0..horizon {
        let mut next = BTreeSet::new();
        for h in &frontier {
            let cur = *h.last().expect("nonempty history");
            // actions fixed by assigned agents
            let mut fixed: Vec<Option<ActId>> = Vec::with_capacity(game.n_agents());
            for agent in 0..game.n_agents() {
                match assignment.agent_strategy(AgentId(agent as u32)) {
                    Some(s) => match s.act(h) {
                        Some(a) => fixed.push(Some(a)),
                        None => return Err(OutcomeError::StrategyDomainExhausted),
                    },
                    None => fixed.push(None),
                }
            }
            for code in game.joint_codes() {
                let joint = game.decode_joint(code);
                let consistent = joint
                    .iter()
                    .zip(fixed.iter())
                    .all(|(a, f)| f.map_or(true, |fa| fa == *a));
                if consistent {
                    let mut ext = h.clone();
                    ext.push(game.step(cur, code));
                    next.insert(ext);
                }
            }
        }
        frontier = next;
    }
    Ok(frontier.into_iter().collect())
}

/// All horizon-tree strategies defined on the extensions of `root` shorter
/// than `root.len() + depth`. With `depth == 0` the strategy is never
/// consulted and a single empty tree is returned.
pub fn horizon_strategies(game: &Wcgs, root: &[StateId], depth: usize) -> Vec<Arc<FiniteStrategy>> {
    // collect the histories the strategy must cover
    let mut domain: Vec<Vec<StateId>> = Vec::new();
    let mut layer: Vec<Vec<StateId>> = alloc::vec![root.to_vec()];
    for level in 0..depth {
        domain.extend(layer.iter().cloned());
        if level + 1 < depth {
            let mut next = Vec::new();
            for h in &layer {
                let cur = *h.last().expect("nonempty");
                for s in game.successors(cur) {
                    let mut ext = h.clone();
                    ext.push(s);
                    next.push(ext);
                }
            }
            layer = next;
        }
    }
    let n = game.n_actions();
    let total = n.checked_pow(domain.len() as u32).unwrap_or(usize::MAX);
    let mut out = Vec::with_capacity(total.min(1024));
    let mut counter = alloc::vec![0usize; domain.len()];
    loop {
        let map: BTreeMap<Vec<StateId>, ActId> = domain
            .iter()
            .cloned()
            .zip(counter.iter().map(|&c| ActId(c as u32)))
            .collect();
        out.push(Arc::new(FiniteStrategy::HorizonTree(map)));
        // odometer
        let mut i = 0;
        loop {
            if i == counter.len() {
                return out;
            }
            counter[i] += 1;
            if counter[i] < n {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

/// All memoryless strategies of the game.
pub fn memoryless_strategies(game: &Wcgs) -> Vec<Arc<FiniteStrategy>> {
    let n = game.n_actions();
    let states = game.n_states();
    let mut out = Vec::new();
    let mut counter = alloc::vec![0usize; states];
    loop {
        out.push(Arc::new(FiniteStrategy::Memoryless(
            counter.iter().map(|&c| ActId(c as u32)).collect(),
        )));
        let mut i = 0;
        loop {
            if i == counter.len() {
                return out;
            }
            counter[i] += 1;
            if counter[i] < n {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// 1-state, 1-agent, 1-action self-loop with p = 1.
    pub fn single_loop() -> Wcgs {
        let mut tr = BTreeMap::new();
        tr.insert(("s".into(), alloc::vec!["a".into()]), "s".into());
        Wcgs::build(
            alloc::vec!["p".into()],
            alloc::vec!["a1".into()],
            alloc::vec!["a".into()],
            alloc::vec!["s".into()],
            "s",
            alloc::vec![alloc::vec![Rat::ONE]],
            &tr,
        )
        .unwrap()
    }

    /// Matching pennies: from `start`, both agents pick h/t; matching goes to
    /// `win` (win=1), mismatch to `lose`. Both sinks self-loop.
    pub fn matching_pennies() -> Wcgs {
        let mut tr = BTreeMap::new();
        for (c, e, dst) in [
            ("h", "h", "win"),
            ("t", "t", "win"),
            ("h", "t", "lose"),
            ("t", "h", "lose"),
        ] {
            tr.insert(("start".into(), alloc::vec![c.into(), e.into()]), dst.into());
        }
        for s in ["win", "lose"] {
            for c in ["h", "t"] {
                for e in ["h", "t"] {
                    tr.insert((s.into(), alloc::vec![c.into(), e.into()]), s.into());
                }
            }
        }
        Wcgs::build(
            alloc::vec!["win".into()],
            alloc::vec!["c".into(), "e".into()],
            alloc::vec!["h".into(), "t".into()],
            alloc::vec!["start".into(), "win".into(), "lose".into()],
            "start",
            alloc::vec![
                alloc::vec![Rat::ZERO],
                alloc::vec![Rat::ONE],
                alloc::vec![Rat::ZERO]
            ],
            &tr,
        )
        .unwrap()
    }
}
