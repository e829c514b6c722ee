//! Brute-force reference semantics.
//!
//! Exact on X-bounded formulas (strategy quantifiers enumerate horizon-d
//! trees, which exhaust the relevant strategy quotient) and on lasso words.
//! For formulas with Until the oracle restricts every quantifier and the
//! path quantifier's free agents to memoryless behaviour and reports the
//! result as restricted. Everything downstream is validated against this
//! module, so it stays as close to the defining clauses as possible.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::formula::{path_to_ltl, path_x_depth, Path, QctlState, SlState};
use crate::game::{
    horizon_strategies, memoryless_strategies, outcomes, AgentId, AssignKey, Assignment,
    FiniteStrategy, StateId, Wcgs,
};
use crate::kripke::FiniteTree;
use crate::lasso::{eval_ltl_lasso, EvalError, LassoWord};
use crate::limits::Limits;
use crate::rat::Rat;

/// Evaluation mode for the SL oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlMode {
    /// Exact; requires an X-bounded formula.
    XBoundedExact,
    /// Quantifiers and free agents range over memoryless strategies only.
    MemorylessApprox,
    /// Exact like `XBoundedExact` but with an explicit horizon ≥ the formula
    /// depth.
    HorizonTree(usize),
}

/// A value plus whether it is the true semantics or the memoryless
/// restriction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleValue {
    pub value: Rat,
    pub exact: bool,
}

/// Horizon classification of a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HorizonClass {
    XBounded(usize),
    General,
}

pub fn horizon_class_sl(f: &SlState) -> HorizonClass {
    match f.x_depth() {
        Some(d) => HorizonClass::XBounded(d),
        None => HorizonClass::General,
    }
}

pub fn horizon_class_qctl(f: &QctlState) -> HorizonClass {
    match f.x_depth() {
        Some(d) => HorizonClass::XBounded(d),
        None => HorizonClass::General,
    }
}

struct Counter {
    used: u64,
    cap: u64,
}

impl Counter {
    fn bump(&mut self, n: u64) -> Result<(), EvalError> {
        self.used = self.used.saturating_add(n);
        if self.used > self.cap {
            Err(EvalError::EnumerationCap(self.cap))
        } else {
            Ok(())
        }
    }
}

/// Satisfaction value of an SL state formula at history `rho` under
/// assignment `chi`.
pub fn eval_sl(
    game: &Wcgs,
    f: &SlState,
    chi: &Assignment,
    rho: &[StateId],
    mode: SlMode,
    limits: &Limits,
) -> Result<OracleValue, EvalError> {
    let mut counter = Counter { used: 0, cap: limits.max_enumeration };
    match mode {
        SlMode::XBoundedExact => {
            if f.x_depth().is_none() {
                return Err(EvalError::ModeMismatch(
                    "XBoundedExact requires an X-bounded formula".into(),
                ));
            }
            let v = eval_sl_exact(game, f, chi, rho, &mut counter)?;
            Ok(OracleValue { value: v, exact: true })
        }
        SlMode::HorizonTree(h) => {
            match f.x_depth() {
                Some(d) if d <= h => {}
                _ => {
                    return Err(EvalError::ModeMismatch(
                        "HorizonTree(h) requires an X-bounded formula of depth at most h".into(),
                    ))
                }
            }
            let v = eval_sl_exact(game, f, chi, rho, &mut counter)?;
            Ok(OracleValue { value: v, exact: true })
        }
        SlMode::MemorylessApprox => {
            let v = eval_sl_memoryless(game, f, chi, rho, &mut counter)?;
            Ok(OracleValue { value: v, exact: false })
        }
    }
}

fn eval_sl_exact(
    game: &Wcgs,
    f: &SlState,
    chi: &Assignment,
    rho: &[StateId],
    counter: &mut Counter,
) -> Result<Rat, EvalError> {
    match f {
        SlState::Atom(p) => game
            .label(*rho.last().expect("nonempty history"), p)
            .ok_or_else(|| EvalError::UnlabeledAtom(p.clone())),
        SlState::Exists(x, body) => {
            let depth = body.x_depth().expect("checked X-bounded");
            let strategies = horizon_strategies(game, rho, depth);
            counter.bump(strategies.len() as u64)?;
            let mut best: Option<Rat> = None;
            for s in strategies {
                let chi2 = chi.with(AssignKey::Var(x.clone()), s);
                let v = eval_sl_exact(game, body, &chi2, rho, counter)?;
                best = Some(best.map_or(v, |b| b.max(v)));
                if best == Some(Rat::ONE) {
                    break;
                }
            }
            Ok(best.expect("at least one strategy"))
        }
        SlState::Bind(agent, x, body) => {
            let aid = game
                .agent_id(agent)
                .ok_or_else(|| EvalError::ModeMismatch(alloc::format!("unknown agent `{agent}`")))?;
            let strat = chi
                .get(&AssignKey::Var(x.clone()))
                .ok_or_else(|| {
                    EvalError::ModeMismatch(alloc::format!("binding to unquantified variable `{x}`"))
                })?
                .clone();
            let chi2 = chi.with(AssignKey::Agent(aid), strat);
            eval_sl_exact(game, body, &chi2, rho, counter)
        }
        SlState::All(psi) => {
            let depth = path_x_depth(psi, &SlState::x_depth).expect("checked X-bounded");
            let plays =
                outcomes(game, chi, rho, depth).map_err(|_| EvalError::StrategyDomainExhausted)?;
            counter.bump(plays.len() as u64)?;
            let mut worst: Option<Rat> = None;
            for play in plays {
                let v = eval_sl_path_exact(game, psi, chi, &play, rho.len() - 1, counter)?;
                worst = Some(worst.map_or(v, |w| w.min(v)));
                if worst == Some(Rat::ZERO) {
                    break;
                }
            }
            Ok(worst.expect("outcomes nonempty"))
        }
        SlState::Func(spec, args) => {
            let vals = args
                .iter()
                .map(|a| eval_sl_exact(game, a, chi, rho, counter))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(spec.apply(&vals)?)
        }
    }
}

fn eval_sl_path_exact(
    game: &Wcgs,
    psi: &Path<SlState>,
    chi: &Assignment,
    play: &[StateId],
    pos: usize,
    counter: &mut Counter,
) -> Result<Rat, EvalError> {
    match psi {
        Path::State(s) => eval_sl_exact(game, s, chi, &play[..=pos], counter),
        Path::Next(q) => {
            if pos + 1 >= play.len() {
                return Err(EvalError::DepthInsufficient);
            }
            eval_sl_path_exact(game, q, chi, play, pos + 1, counter)
        }
        Path::Until(_, _) => Err(EvalError::ModeMismatch(
            "Until cannot be evaluated in an X-bounded mode".into(),
        )),
        Path::Func(spec, args) => {
            let vals = args
                .iter()
                .map(|a| eval_sl_path_exact(game, a, chi, play, pos, counter))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(spec.apply(&vals)?)
        }
    }
}

fn eval_sl_memoryless(
    game: &Wcgs,
    f: &SlState,
    chi: &Assignment,
    rho: &[StateId],
    counter: &mut Counter,
) -> Result<Rat, EvalError> {
    match f {
        SlState::Atom(p) => game
            .label(*rho.last().expect("nonempty history"), p)
            .ok_or_else(|| EvalError::UnlabeledAtom(p.clone())),
        SlState::Exists(x, body) => {
            let strategies = memoryless_strategies(game);
            counter.bump(strategies.len() as u64)?;
            let mut best: Option<Rat> = None;
            for s in strategies {
                let chi2 = chi.with(AssignKey::Var(x.clone()), s);
                let v = eval_sl_memoryless(game, body, &chi2, rho, counter)?;
                best = Some(best.map_or(v, |b| b.max(v)));
                if best == Some(Rat::ONE) {
                    break;
                }
            }
            Ok(best.expect("at least one strategy"))
        }
        SlState::Bind(agent, x, body) => {
            let aid = game
                .agent_id(agent)
                .ok_or_else(|| EvalError::ModeMismatch(alloc::format!("unknown agent `{agent}`")))?;
            let strat = chi
                .get(&AssignKey::Var(x.clone()))
                .ok_or_else(|| {
                    EvalError::ModeMismatch(alloc::format!("binding to unquantified variable `{x}`"))
                })?
                .clone();
            let chi2 = chi.with(AssignKey::Agent(aid), strat);
            eval_sl_memoryless(game, body, &chi2, rho, counter)
        }
        SlState::All(psi) => {
            // free agents resolve to memoryless choices; each completion
            // induces a unique lasso play
            let free: Vec<AgentId> = (0..game.n_agents() as u32)
                .map(AgentId)
                .filter(|a| chi.agent_strategy(*a).is_none())
                .collect();
            let (ltl, embeds) = path_to_ltl(psi, "@emb");
            let mut emb_vals: Vec<Vec<Rat>> = Vec::with_capacity(embeds.len());
            for e in &embeds {
                let mut per_state = Vec::with_capacity(game.n_states());
                for v in game.states() {
                    per_state.push(eval_sl_memoryless(game, e, chi, &[v], counter)?);
                }
                emb_vals.push(per_state);
            }
            let atoms: Vec<String> =
                (0..embeds.len()).map(|i| alloc::format!("@emb{i}")).collect();
            let choices = memoryless_strategies(game);
            let mut completions: Vec<Vec<Arc<FiniteStrategy>>> = alloc::vec![Vec::new()];
            for _ in &free {
                let mut next = Vec::new();
                for c in &completions {
                    for s in &choices {
                        let mut c2 = c.clone();
                        c2.push(s.clone());
                        next.push(c2);
                    }
                }
                completions = next;
            }
            counter.bump(completions.len() as u64)?;
            let mut worst: Option<Rat> = None;
            for completion in completions {
                let mut chi2 = chi.clone();
                for (a, s) in free.iter().zip(completion) {
                    chi2 = chi2.with(AssignKey::Agent(*a), s);
                }
                let word =
                    play_lasso(game, &chi2, *rho.last().expect("nonempty"), &atoms, &emb_vals);
                let v = eval_ltl_lasso(&ltl, &word, 0)?;
                worst = Some(worst.map_or(v, |w| w.min(v)));
                if worst == Some(Rat::ZERO) {
                    break;
                }
            }
            Ok(worst.expect("at least one completion"))
        }
        SlState::Func(spec, args) => {
            let vals = args
                .iter()
                .map(|a| eval_sl_memoryless(game, a, chi, rho, counter))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(spec.apply(&vals)?)
        }
    }
}

/// The unique play of a fully memoryless profile from `start`, folded into a
/// lasso and labelled with the precomputed per-state embed values.
fn play_lasso(
    game: &Wcgs,
    chi: &Assignment,
    start: StateId,
    atoms: &[String],
    emb_vals: &[Vec<Rat>],
) -> LassoWord {
    let mut seen: BTreeMap<StateId, usize> = BTreeMap::new();
    let mut states = Vec::new();
    let mut cur = start;
    let split = loop {
        if let Some(&i) = seen.get(&cur) {
            break i;
        }
        seen.insert(cur, states.len());
        states.push(cur);
        let joint: Vec<_> = (0..game.n_agents() as u32)
            .map(|a| {
                chi.agent_strategy(AgentId(a))
                    .expect("profile total")
                    .act(&[cur])
                    .expect("memoryless strategies are total")
            })
            .collect();
        cur = game.step_joint(cur, &joint);
    };
    let letter = |s: StateId| -> Vec<Rat> {
        emb_vals.iter().map(|per_state| per_state[s.0 as usize]).collect()
    };
    LassoWord::new(
        atoms.to_vec(),
        states[..split].iter().map(|&s| letter(s)).collect(),
        states[split..].iter().map(|&s| letter(s)).collect(),
    )
}

/// Satisfaction value of a QCTL state formula at a node of a finite tree,
/// exact for X-bounded formulas when the tree is deep enough.
pub fn eval_bqctl(
    tree: &FiniteTree,
    f: &QctlState,
    node: usize,
    limits: &Limits,
) -> Result<Rat, EvalError> {
    if f.x_depth().is_none() {
        return Err(EvalError::ModeMismatch(
            "the tree oracle evaluates X-bounded formulas only".into(),
        ));
    }
    if tree.nodes.iter().any(|n| n.repeat.is_some()) {
        return Err(EvalError::ModeMismatch(
            "the tree oracle expects a plain depth-truncated tree".into(),
        ));
    }
    let mut counter = Counter { used: 0, cap: limits.max_enumeration };
    let overlay = BTreeMap::new();
    eval_qctl_node(tree, f, node, &overlay, &mut counter)
}

type Overlay = BTreeMap<(usize, String), Rat>;

fn tree_label(
    tree: &FiniteTree,
    overlay: &Overlay,
    node: usize,
    atom: &str,
) -> Result<Rat, EvalError> {
    if let Some(v) = overlay.get(&(node, String::from(atom))) {
        return Ok(*v);
    }
    match tree.atom_index(atom) {
        Some(i) => Ok(tree.label(node, i)),
        None => Err(EvalError::UnlabeledAtom(String::from(atom))),
    }
}

/// Nodes within `depth` of `node`, following children only.
fn window(tree: &FiniteTree, node: usize, depth: usize) -> Vec<usize> {
    let mut out = alloc::vec![node];
    let mut layer = alloc::vec![node];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &n in &layer {
            for &c in &tree.nodes[n].children {
                next.push(c);
            }
        }
        out.extend(next.iter().copied());
        layer = next;
    }
    out
}

fn min_depth_below(tree: &FiniteTree, node: usize) -> usize {
    if tree.nodes[node].children.is_empty() {
        0
    } else {
        1 + tree.nodes[node]
            .children
            .iter()
            .map(|&c| min_depth_below(tree, c))
            .min()
            .expect("nonempty children")
    }
}

fn eval_qctl_node(
    tree: &FiniteTree,
    f: &QctlState,
    node: usize,
    overlay: &Overlay,
    counter: &mut Counter,
) -> Result<Rat, EvalError> {
    match f {
        QctlState::Atom(p) => tree_label(tree, overlay, node, p),
        QctlState::ExistsProp(p, body) => {
            let d = body.x_depth().expect("checked X-bounded");
            if min_depth_below(tree, node) < d {
                return Err(EvalError::DepthInsufficient);
            }
            let nodes = window(tree, node, d);
            if nodes.len() >= 63 {
                return Err(EvalError::EnumerationCap(counter.cap));
            }
            counter.bump(1u64 << nodes.len())?;
            let mut best: Option<Rat> = None;
            for mask in 0..(1u64 << nodes.len()) {
                let mut ov = overlay.clone();
                for (i, &n) in nodes.iter().enumerate() {
                    let bit = (mask >> i) & 1 == 1;
                    ov.insert((n, p.clone()), if bit { Rat::ONE } else { Rat::ZERO });
                }
                let v = eval_qctl_node(tree, body, node, &ov, counter)?;
                best = Some(best.map_or(v, |b| b.max(v)));
                if best == Some(Rat::ONE) {
                    break;
                }
            }
            Ok(best.expect("at least one relabeling"))
        }
        QctlState::ExistsPath(psi) => {
            let d = path_x_depth(psi, &QctlState::x_depth).expect("checked X-bounded");
            if min_depth_below(tree, node) < d {
                return Err(EvalError::DepthInsufficient);
            }
            let paths = tree.paths_from(node, d);
            counter.bump(paths.len() as u64)?;
            let mut best: Option<Rat> = None;
            for path in paths {
                let v = eval_qctl_path(tree, psi, &path, 0, overlay, counter)?;
                best = Some(best.map_or(v, |b| b.max(v)));
                if best == Some(Rat::ONE) {
                    break;
                }
            }
            Ok(best.expect("at least one branch"))
        }
        QctlState::Func(spec, args) => {
            let vals = args
                .iter()
                .map(|a| eval_qctl_node(tree, a, node, overlay, counter))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(spec.apply(&vals)?)
        }
    }
}

fn eval_qctl_path(
    tree: &FiniteTree,
    psi: &Path<QctlState>,
    path: &[usize],
    pos: usize,
    overlay: &Overlay,
    counter: &mut Counter,
) -> Result<Rat, EvalError> {
    match psi {
        Path::State(s) => eval_qctl_node(tree, s, path[pos], overlay, counter),
        Path::Next(q) => {
            if pos + 1 >= path.len() {
                return Err(EvalError::DepthInsufficient);
            }
            eval_qctl_path(tree, q, path, pos + 1, overlay, counter)
        }
        Path::Until(_, _) => Err(EvalError::ModeMismatch(
            "Until cannot be evaluated in an X-bounded mode".into(),
        )),
        Path::Func(spec, args) => {
            let vals = args
                .iter()
                .map(|a| eval_qctl_path(tree, a, path, pos, overlay, counter))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(spec.apply(&vals)?)
        }
    }
}

/// Bounded-horizon evaluation of a QCTL formula on a depth-truncated tree.
///
/// Branches are the maximal root-to-leaf paths; an Until ranges over the
/// positions at which its operands still evaluate, and stops at the frontier.
/// Proposition quantification relabels the whole subtree below the node.
/// For formulas whose temporal content is either X-bounded or a safety
/// wrapper that only constrains label consistency (the strategy-coding and
/// outcome gadgets of the game-to-tree translation), this equals the true
/// value whenever the tree is deep enough.
pub fn eval_bqctl_bounded(
    tree: &FiniteTree,
    f: &QctlState,
    node: usize,
    limits: &Limits,
) -> Result<Rat, EvalError> {
    if tree.nodes.iter().any(|n| n.repeat.is_some()) {
        return Err(EvalError::ModeMismatch(
            "the bounded tree oracle expects a plain depth-truncated tree".into(),
        ));
    }
    let mut counter = Counter { used: 0, cap: limits.max_enumeration };
    let overlay = BTreeMap::new();
    eval_qctl_node_bounded(tree, f, node, &overlay, &mut counter)
}

fn subtree_nodes(tree: &FiniteTree, node: usize) -> Vec<usize> {
    let mut out = alloc::vec![node];
    let mut i = 0;
    while i < out.len() {
        let cur = out[i];
        out.extend(tree.nodes[cur].children.iter().copied());
        i += 1;
    }
    out
}

fn leaf_paths(tree: &FiniteTree, node: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = alloc::vec![alloc::vec![node]];
    while let Some(path) = stack.pop() {
        let cur = *path.last().expect("nonempty");
        if tree.nodes[cur].children.is_empty() {
            out.push(path);
            continue;
        }
        for &c in &tree.nodes[cur].children {
            let mut ext = path.clone();
            ext.push(c);
            stack.push(ext);
        }
    }
    out.sort();
    out
}

fn eval_qctl_node_bounded(
    tree: &FiniteTree,
    f: &QctlState,
    node: usize,
    overlay: &Overlay,
    counter: &mut Counter,
) -> Result<Rat, EvalError> {
    match f {
        QctlState::Atom(p) => tree_label(tree, overlay, node, p),
        QctlState::ExistsProp(p, body) => {
            let nodes = subtree_nodes(tree, node);
            if nodes.len() >= 63 {
                return Err(EvalError::EnumerationCap(counter.cap));
            }
            let mut best: Option<Rat> = None;
            for mask in 0..(1u64 << nodes.len()) {
                counter.bump(1)?;
                let mut ov = overlay.clone();
                for (i, &n) in nodes.iter().enumerate() {
                    let bit = (mask >> i) & 1 == 1;
                    ov.insert((n, p.clone()), if bit { Rat::ONE } else { Rat::ZERO });
                }
                let v = eval_qctl_node_bounded(tree, body, node, &ov, counter)?;
                best = Some(best.map_or(v, |b| b.max(v)));
                if best == Some(Rat::ONE) {
                    break;
                }
            }
            Ok(best.expect("at least one relabeling"))
        }
        QctlState::ExistsPath(psi) => {
            let paths = leaf_paths(tree, node);
            counter.bump(paths.len() as u64)?;
            let mut best: Option<Rat> = None;
            for path in paths {
                let v = eval_qctl_path_bounded(tree, psi, &path, 0, overlay, counter)?;
                best = Some(best.map_or(v, |b| b.max(v)));
                if best == Some(Rat::ONE) {
                    break;
                }
            }
            Ok(best.expect("at least one branch"))
        }
        QctlState::Func(spec, args) => {
            // min/max stop early at their absorbing element; the skipped
            // arguments cannot change the value
            match spec.kind {
                crate::func::FuncKind::Min => {
                    let mut acc = Rat::ONE;
                    for a in args {
                        acc = acc.min(eval_qctl_node_bounded(tree, a, node, overlay, counter)?);
                        if acc == Rat::ZERO {
                            break;
                        }
                    }
                    Ok(acc)
                }
                crate::func::FuncKind::Max => {
                    let mut acc = Rat::ZERO;
                    for a in args {
                        acc = acc.max(eval_qctl_node_bounded(tree, a, node, overlay, counter)?);
                        if acc == Rat::ONE {
                            break;
                        }
                    }
                    Ok(acc)
                }
                _ => {
                    let vals = args
                        .iter()
                        .map(|a| eval_qctl_node_bounded(tree, a, node, overlay, counter))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(spec.apply(&vals)?)
                }
            }
        }
    }
}

fn eval_qctl_path_bounded(
    tree: &FiniteTree,
    psi: &Path<QctlState>,
    path: &[usize],
    pos: usize,
    overlay: &Overlay,
    counter: &mut Counter,
) -> Result<Rat, EvalError> {
    match psi {
        Path::State(s) => eval_qctl_node_bounded(tree, s, path[pos], overlay, counter),
        Path::Next(q) => {
            if pos + 1 >= path.len() {
                return Err(EvalError::DepthInsufficient);
            }
            eval_qctl_path_bounded(tree, q, path, pos + 1, overlay, counter)
        }
        Path::Until(a, b) => {
            // candidates run while both operands still evaluate
            let mut best: Option<Rat> = None;
            let mut prefix_min = Rat::ONE;
            let mut j = pos;
            loop {
                let vb = match eval_qctl_path_bounded(tree, b, path, j, overlay, counter) {
                    Ok(v) => v,
                    Err(EvalError::DepthInsufficient) => break,
                    Err(e) => return Err(e),
                };
                let cand = vb.min(prefix_min);
                best = Some(best.map_or(cand, |x: Rat| x.max(cand)));
                let va = match eval_qctl_path_bounded(tree, a, path, j, overlay, counter) {
                    Ok(v) => v,
                    Err(EvalError::DepthInsufficient) => break,
                    Err(e) => return Err(e),
                };
                prefix_min = prefix_min.min(va);
                j += 1;
                if j >= path.len() {
                    break;
                }
            }
            best.ok_or(EvalError::DepthInsufficient)
        }
        Path::Func(spec, args) => {
            let vals = args
                .iter()
                .map(|a| eval_qctl_path_bounded(tree, a, path, pos, overlay, counter))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(spec.apply(&vals)?)
        }
    }
}

/// Evaluates a closed SL state formula at the initial state.
pub fn eval_sl_initial(
    game: &Wcgs,
    f: &SlState,
    mode: SlMode,
    limits: &Limits,
) -> Result<OracleValue, EvalError> {
    eval_sl(game, f, &Assignment::empty(), &[game.initial], mode, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::Registry;
    use crate::game::fixtures::matching_pennies;
    use crate::kripke::{unfold_wks, Wks};
    use crate::parse::{parse_qctl, parse_sl};

    fn r(n: u64, d: u64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    /// 1-agent game: action α leads to a p=1 state, β to a p=0 state.
    fn pick_game() -> Wcgs {
        let mut tr = BTreeMap::new();
        for (src, act, dst) in [
            ("s", "alpha", "good"),
            ("s", "beta", "bad"),
            ("good", "alpha", "good"),
            ("good", "beta", "good"),
            ("bad", "alpha", "bad"),
            ("bad", "beta", "bad"),
        ] {
            tr.insert((src.into(), alloc::vec![act.into()]), dst.into());
        }
        Wcgs::build(
            alloc::vec!["p".into()],
            alloc::vec!["a".into()],
            alloc::vec!["alpha".into(), "beta".into()],
            alloc::vec!["s".into(), "good".into(), "bad".into()],
            "s",
            alloc::vec![
                alloc::vec![Rat::ZERO],
                alloc::vec![Rat::ONE],
                alloc::vec![Rat::ZERO]
            ],
            &tr,
        )
        .unwrap()
    }

    #[test]
    fn exists_next_reaches_good_state() {
        let g = pick_game();
        let f = parse_sl("<<x>> (a, x) A X p", &Registry::builtin()).unwrap();
        let v = eval_sl_initial(&g, &f, SlMode::XBoundedExact, &lim()).unwrap();
        assert_eq!(v.value, Rat::ONE);
        assert!(v.exact);
    }

    #[test]
    fn matching_pennies_existential_then_universal_is_zero() {
        let g = matching_pennies();
        let f = parse_sl("<<x>> [[y]] (c, x) (e, y) A X win", &Registry::builtin()).unwrap();
        let v = eval_sl_initial(&g, &f, SlMode::XBoundedExact, &lim()).unwrap();
        assert_eq!(v.value, Rat::ZERO);
        // the later-quantified controller copies the environment
        let f = parse_sl("[[y]] <<x>> (c, x) (e, y) A X win", &Registry::builtin()).unwrap();
        let v = eval_sl_initial(&g, &f, SlMode::XBoundedExact, &lim()).unwrap();
        assert_eq!(v.value, Rat::ONE);
    }

    #[test]
    fn boolean_embedding_stays_boolean() {
        let g = matching_pennies();
        for text in [
            "<<x>> (c, x) A X win",
            "max(win, neg(win))",
            "<<x>> [[y]] (c, x) (e, y) A X min(win, win)",
        ] {
            let f = parse_sl(text, &Registry::builtin()).unwrap();
            let v = eval_sl_initial(&g, &f, SlMode::XBoundedExact, &lim()).unwrap();
            assert!(v.value.is_boolean(), "{text} -> {}", v.value);
        }
    }

    #[test]
    fn negation_duality() {
        let g = pick_game();
        let f = parse_sl("<<x>> (a, x) A X p", &Registry::builtin()).unwrap();
        let nf = parse_sl("!(<<x>> (a, x) A X p)", &Registry::builtin()).unwrap();
        let v = eval_sl_initial(&g, &f, SlMode::XBoundedExact, &lim()).unwrap();
        let nv = eval_sl_initial(&g, &nf, SlMode::XBoundedExact, &lim()).unwrap();
        assert_eq!(nv.value, v.value.neg());
    }

    #[test]
    fn memoryless_bounds_existential_from_below() {
        // with a single bound agent, the exact value dominates the
        // memoryless restriction for ⟪·⟫ and is dominated for ⟦·⟧
        let g = pick_game();
        let f = parse_sl("<<x>> (a, x) A X p", &Registry::builtin()).unwrap();
        let exact = eval_sl_initial(&g, &f, SlMode::XBoundedExact, &lim()).unwrap();
        let ml = eval_sl_initial(&g, &f, SlMode::MemorylessApprox, &lim()).unwrap();
        assert!(ml.value <= exact.value);
        assert!(!ml.exact);
        let f = parse_sl("[[x]] (a, x) A X p", &Registry::builtin()).unwrap();
        let exact = eval_sl_initial(&g, &f, SlMode::XBoundedExact, &lim()).unwrap();
        let ml = eval_sl_initial(&g, &f, SlMode::MemorylessApprox, &lim()).unwrap();
        assert!(ml.value >= exact.value);
    }

    #[test]
    fn memoryless_until_on_deterministic_play() {
        // single-path structure: value of A (F p) is exact even restricted
        let g = pick_game();
        let f = parse_sl("<<x>> (a, x) A (F p)", &Registry::builtin()).unwrap();
        let v = eval_sl_initial(&g, &f, SlMode::MemorylessApprox, &lim()).unwrap();
        assert_eq!(v.value, Rat::ONE);
    }

    fn two_leaf_tree(left: Rat, right: Rat) -> FiniteTree {
        let k = Wks::build(
            alloc::vec!["q".into()],
            alloc::vec!["root".into(), "l".into(), "r".into()],
            "root",
            &[
                ("root".into(), "l".into()),
                ("root".into(), "r".into()),
                ("l".into(), "l".into()),
                ("r".into(), "r".into()),
            ],
            alloc::vec![alloc::vec![Rat::ZERO], alloc::vec![left], alloc::vec![right]],
        )
        .unwrap();
        unfold_wks(&k, 2)
    }

    #[test]
    fn qctl_exists_prop_labels_child() {
        let t = two_leaf_tree(r(1, 3), r(2, 3));
        let f = parse_qctl("exists p . E X p", &Registry::builtin()).unwrap();
        assert_eq!(eval_bqctl(&t, &f, 0, &lim()).unwrap(), Rat::ONE);
        let f = parse_qctl("exists p . min(E X p, E X neg(p))", &Registry::builtin()).unwrap();
        // two children: label one 1 and the other 0
        assert_eq!(eval_bqctl(&t, &f, 0, &lim()).unwrap(), Rat::ONE);
    }

    #[test]
    fn qctl_exists_prop_single_branch_min_is_zero() {
        // on a 1-child-per-node tree, min(X p, X neg p) forces min(b, 1-b) = 0
        let k = Wks::build(
            alloc::vec!["q".into()],
            alloc::vec!["s".into()],
            "s",
            &[("s".into(), "s".into())],
            alloc::vec![alloc::vec![Rat::ONE]],
        )
        .unwrap();
        let t = unfold_wks(&k, 2);
        let f = parse_qctl("exists p . min(E X p, E X neg(p))", &Registry::builtin()).unwrap();
        assert_eq!(eval_bqctl(&t, &f, 0, &lim()).unwrap(), Rat::ZERO);
        let f = parse_qctl("exists p . E X p", &Registry::builtin()).unwrap();
        assert_eq!(eval_bqctl(&t, &f, 0, &lim()).unwrap(), Rat::ONE);
    }

    #[test]
    fn qctl_branch_max() {
        let t = two_leaf_tree(r(1, 3), r(2, 3));
        let f = parse_qctl("E X q", &Registry::builtin()).unwrap();
        assert_eq!(eval_bqctl(&t, &f, 0, &lim()).unwrap(), r(2, 3));
        let f = parse_qctl("A X q", &Registry::builtin()).unwrap();
        assert_eq!(eval_bqctl(&t, &f, 0, &lim()).unwrap(), r(1, 3));
    }

    #[test]
    fn qctl_depth_insufficient() {
        let t = two_leaf_tree(r(1, 3), r(2, 3));
        let f = parse_qctl("E X X X q", &Registry::builtin()).unwrap();
        assert!(matches!(
            eval_bqctl(&t, &f, 0, &lim()),
            Err(EvalError::DepthInsufficient)
        ));
    }
}
