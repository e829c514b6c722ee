//! Reduction of strategy quantification to Boolean proposition
//! quantification: translates an SL state formula over a game into a QCTL
//! formula over the game's Kripke structure, with fresh atoms coding
//! strategies and the outcome constraint.
//!
//! For each quantifier ⟪x⟫ over actions α₁…α_m, a batch of m propositions
//! `p_α^x` is quantified; the strategy-coding gadget demands exactly one of
//! them at every node, and the outcome gadget restricts path quantification
//! to branches on which every bound agent follows the coded strategy.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::{Path, QctlPath, QctlState, SlPath, SlState};
use crate::func;
use crate::game::{AgentId, Wcgs};
use crate::kripke::{game_to_kripke, GameKripke};
use crate::lasso::EvalError;
use crate::limits::Limits;
use crate::oracle;
use crate::rat::Rat;

/// The atoms coding one quantified strategy variable, in action order.
#[derive(Clone, Debug)]
pub struct StratAtomFamily {
    pub var: String,
    pub atoms: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Translation {
    pub formula: QctlState,
    pub strat_atoms: Vec<StratAtomFamily>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TranslateError {
    UnknownAgent(String),
    UnboundVariable(String),
}

impl core::fmt::Display for TranslateError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TranslateError::UnknownAgent(a) => write!(f, "unknown agent `{a}`"),
            TranslateError::UnboundVariable(x) => {
                write!(f, "binding to a variable `{x}` that is not quantified")
            }
        }
    }
}

struct Translator<'a> {
    game: &'a Wcgs,
    kripke: &'a GameKripke,
    taken: BTreeSet<String>,
    families: Vec<StratAtomFamily>,
}

fn conj(mut args: Vec<QctlState>) -> QctlState {
    match args.len() {
        0 => QctlState::Func(func::const_one(), Vec::new()),
        1 => args.pop().expect("one"),
        n => QctlState::Func(func::min_n(n), args),
    }
}

fn disj(mut args: Vec<QctlState>) -> QctlState {
    match args.len() {
        0 => QctlState::Func(func::const_rat(Rat::ZERO), Vec::new()),
        1 => args.pop().expect("one"),
        n => QctlState::Func(func::max_n(n), args),
    }
}

fn conj_path(mut args: Vec<QctlPath>) -> QctlPath {
    match args.len() {
        0 => Path::State(Box::new(QctlState::Func(func::const_one(), Vec::new()))),
        1 => args.pop().expect("one"),
        n => Path::Func(func::min_n(n), args),
    }
}

fn disj_path(mut args: Vec<QctlPath>) -> QctlPath {
    match args.len() {
        0 => Path::State(Box::new(QctlState::Func(func::const_rat(Rat::ZERO), Vec::new()))),
        1 => args.pop().expect("one"),
        n => Path::Func(func::max_n(n), args),
    }
}

fn implies_path(a: QctlPath, b: QctlPath) -> QctlPath {
    Path::Func(func::or2(), alloc::vec![Path::Func(func::neg1(), alloc::vec![a]), b])
}

/// G ψ as ¬(⊤ U ¬ψ).
fn globally(p: QctlPath) -> QctlPath {
    Path::Func(
        func::neg1(),
        alloc::vec![Path::Until(
            Box::new(Path::State(Box::new(QctlState::Func(func::const_one(), Vec::new())))),
            Box::new(Path::Func(func::neg1(), alloc::vec![p])),
        )],
    )
}

impl<'a> Translator<'a> {
    fn fresh_family(&mut self, var: &str) -> StratAtomFamily {
        let mut atoms = Vec::with_capacity(self.game.n_actions());
        for act in &self.game.actions {
            let mut cand = alloc::format!("do_{var}_{act}");
            while self.taken.contains(&cand) {
                cand.push('\'');
            }
            self.taken.insert(cand.clone());
            atoms.push(cand);
        }
        let fam = StratAtomFamily { var: String::from(var), atoms };
        self.families.push(fam.clone());
        fam
    }

    /// `A G (⋁_α (p_α^x ∧ ⋀_{α'≠α} ¬p_{α'}^x))` — the atoms code a strategy.
    fn strategy_coding(&self, fam: &StratAtomFamily) -> QctlState {
        let mut options = Vec::with_capacity(fam.atoms.len());
        for (i, atom) in fam.atoms.iter().enumerate() {
            let mut parts = alloc::vec![QctlState::atom(atom.clone())];
            for (j, other) in fam.atoms.iter().enumerate() {
                if j != i {
                    parts.push(QctlState::neg(QctlState::atom(other.clone())));
                }
            }
            options.push(conj(parts));
        }
        let uniq = disj(options);
        QctlState::all_paths(globally(Path::State(Box::new(uniq))))
    }

    /// `G (⋀_v (p_v → ⋁_c (⋀_{a∈dom g} p_{c(a)}^{g(a)} ∧ X p_{Δ(v,c)})))`.
    fn outcome_constraint(&self, bindings: &BTreeMap<AgentId, StratAtomFamily>) -> QctlPath {
        let mut per_state = Vec::with_capacity(self.game.n_states());
        for v in self.game.states() {
            let here = QctlState::atom(self.kripke.state_atoms[v.0 as usize].clone());
            let mut joint_options = Vec::new();
            for code in self.game.joint_codes() {
                let joint = self.game.decode_joint(code);
                let mut parts: Vec<QctlPath> = Vec::new();
                for (agent, fam) in bindings {
                    let act = joint[agent.0 as usize];
                    parts.push(Path::State(Box::new(QctlState::atom(
                        fam.atoms[act.0 as usize].clone(),
                    ))));
                }
                let target = self.game.step(v, code);
                parts.push(Path::Next(Box::new(Path::State(Box::new(QctlState::atom(
                    self.kripke.state_atoms[target.0 as usize].clone(),
                ))))));
                joint_options.push(conj_path(parts));
            }
            per_state.push(implies_path(
                Path::State(Box::new(here)),
                disj_path(joint_options),
            ));
        }
        globally(conj_path(per_state))
    }

    fn state(
        &mut self,
        f: &SlState,
        g: &BTreeMap<AgentId, StratAtomFamily>,
        scope: &BTreeMap<String, StratAtomFamily>,
    ) -> Result<QctlState, TranslateError> {
        match f {
            SlState::Atom(p) => Ok(QctlState::atom(p.clone())),
            SlState::Bind(agent, x, body) => {
                let aid = self
                    .game
                    .agent_id(agent)
                    .ok_or_else(|| TranslateError::UnknownAgent(agent.clone()))?;
                let fam = scope
                    .get(x)
                    .ok_or_else(|| TranslateError::UnboundVariable(x.clone()))?
                    .clone();
                let mut g2 = g.clone();
                g2.insert(aid, fam);
                self.state(body, &g2, scope)
            }
            SlState::Exists(x, body) => {
                let fam = self.fresh_family(x);
                let mut scope2 = scope.clone();
                scope2.insert(x.clone(), fam.clone());
                let inner = self.state(body, g, &scope2)?;
                let coded = self.strategy_coding(&fam);
                let mut out = QctlState::Func(func::and2(), alloc::vec![coded, inner]);
                for atom in fam.atoms.iter().rev() {
                    out = QctlState::exists_prop(atom.clone(), out);
                }
                Ok(out)
            }
            SlState::All(psi) => {
                let out_constraint = self.outcome_constraint(g);
                let body = self.path(psi, g, scope)?;
                Ok(QctlState::all_paths(implies_path(out_constraint, body)))
            }
            SlState::Func(spec, args) => {
                let parts = args
                    .iter()
                    .map(|a| self.state(a, g, scope))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(QctlState::Func(spec.clone(), parts))
            }
        }
    }

    fn path(
        &mut self,
        psi: &SlPath,
        g: &BTreeMap<AgentId, StratAtomFamily>,
        scope: &BTreeMap<String, StratAtomFamily>,
    ) -> Result<QctlPath, TranslateError> {
        Ok(match psi {
            Path::State(s) => Path::State(Box::new(self.state(s, g, scope)?)),
            Path::Next(q) => Path::Next(Box::new(self.path(q, g, scope)?)),
            Path::Until(a, b) => Path::Until(
                Box::new(self.path(a, g, scope)?),
                Box::new(self.path(b, g, scope)?),
            ),
            Path::Func(spec, args) => Path::Func(
                spec.clone(),
                args.iter()
                    .map(|a| self.path(a, g, scope))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        })
    }
}

/// Translates a closed SL state formula; the result is a QCTL formula over
/// the atoms of K_G plus the generated strategy atoms.
pub fn translate(
    game: &Wcgs,
    kripke: &GameKripke,
    f: &SlState,
) -> Result<Translation, TranslateError> {
    let mut taken: BTreeSet<String> = game.atoms.iter().cloned().collect();
    taken.extend(kripke.state_atoms.iter().cloned());
    let mut tr = Translator { game, kripke, taken, families: Vec::new() };
    let formula = tr.state(f, &BTreeMap::new(), &BTreeMap::new())?;
    Ok(Translation { formula, strat_atoms: tr.families })
}

/// Nesting depth counting each maximal chain of proposition quantifiers as a
/// single level (the translator emits one chain per strategy quantifier).
pub fn qctl_depth_batched(f: &QctlState) -> usize {
    fn path_depth(p: &QctlPath) -> usize {
        match p {
            Path::State(s) => qctl_depth_batched(s),
            Path::Next(q) => path_depth(q),
            Path::Until(a, b) => path_depth(a).max(path_depth(b)),
            Path::Func(_, args) => args.iter().map(path_depth).max().unwrap_or(0),
        }
    }
    match f {
        QctlState::Atom(_) => 0,
        QctlState::ExistsProp(_, body) => {
            let mut cur = body;
            while let QctlState::ExistsProp(_, next) = cur.as_ref() {
                cur = next;
            }
            1 + qctl_depth_batched(cur)
        }
        QctlState::ExistsPath(p) => path_depth(p),
        QctlState::Func(_, args) => args.iter().map(qctl_depth_batched).max().unwrap_or(0),
    }
}

/// One sampled comparison of the two sides of the reduction.
#[derive(Clone, Debug)]
pub struct ReduxSample {
    pub history: Vec<crate::game::StateId>,
    pub sl_value: Rat,
    pub qctl_value: Rat,
    pub equal: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ReduxReport {
    pub samples: Vec<ReduxSample>,
}

impl ReduxReport {
    pub fn all_equal(&self) -> bool {
        self.samples.iter().all(|s| s.equal)
    }
}

/// Compares the SL value of an X-bounded closed formula against the value of
/// its translation on the truncated unfolding of K_G, at every history of
/// length at most `max_history`.
pub fn check_redux(
    game: &Wcgs,
    f: &SlState,
    max_history: usize,
    limits: &Limits,
) -> Result<ReduxReport, EvalError> {
    let d = f
        .x_depth()
        .ok_or_else(|| EvalError::ModeMismatch("redux check needs an X-bounded formula".into()))?;
    let gk = game_to_kripke(game);
    let tr =
        translate(game, &gk, f).map_err(|e| EvalError::ModeMismatch(alloc::format!("{e}")))?;
    let mut report = ReduxReport::default();
    let mut layer: Vec<Vec<crate::game::StateId>> = alloc::vec![alloc::vec![game.initial]];
    for len in 1..=max_history {
        for rho in &layer {
            let sl = oracle::eval_sl(
                game,
                f,
                &crate::game::Assignment::empty(),
                rho,
                oracle::SlMode::XBoundedExact,
                limits,
            )?;
            // the node of ρ sits at depth |ρ|-1; leave d+1 more levels
            let tree = crate::kripke::unfold_wks(&gk.kripke, len - 1 + d + 1);
            let node = node_of_history(&tree, rho);
            let qctl = oracle::eval_bqctl_bounded(&tree, &tr.formula, node, limits)?;
            report.samples.push(ReduxSample {
                history: rho.clone(),
                sl_value: sl.value,
                qctl_value: qctl,
                equal: sl.value == qctl,
            });
        }
        let mut next = Vec::new();
        for rho in &layer {
            for s in game.successors(*rho.last().expect("nonempty")) {
                let mut ext = rho.clone();
                ext.push(s);
                next.push(ext);
            }
        }
        layer = next;
    }
    Ok(report)
}

/// The tree node reached by walking a history from the root.
fn node_of_history(tree: &crate::kripke::FiniteTree, rho: &[crate::game::StateId]) -> usize {
    let mut node = tree.root();
    for s in &rho[1..] {
        node = *tree.nodes[node]
            .children
            .iter()
            .find(|&&c| tree.nodes[c].direction == s.0)
            .expect("history within tree depth");
    }
    node
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::Registry;
    use crate::game::fixtures::matching_pennies;
    use crate::parse::parse_sl;

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
            tr.insert((String::from(src), alloc::vec![String::from(act)]), String::from(dst));
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
    fn base_clause_is_identity() {
        let g = pick_game();
        let gk = game_to_kripke(&g);
        let f = parse_sl("p", &Registry::builtin()).unwrap();
        let tr = translate(&g, &gk, &f).unwrap();
        assert_eq!(tr.formula, QctlState::atom("p"));
        assert!(tr.strat_atoms.is_empty());
    }

    #[test]
    fn quantifier_emits_batch_and_gadget() {
        let g = pick_game();
        let gk = game_to_kripke(&g);
        let f = parse_sl("<<x>> (a, x) A X p", &Registry::builtin()).unwrap();
        let tr = translate(&g, &gk, &f).unwrap();
        assert_eq!(tr.strat_atoms.len(), 1);
        assert_eq!(tr.strat_atoms[0].atoms.len(), 2);
        // outermost: one ∃ per action
        let mut cur = &tr.formula;
        let mut chain = 0;
        while let QctlState::ExistsProp(_, b) = cur {
            chain += 1;
            cur = b;
        }
        assert_eq!(chain, 2);
        match cur {
            QctlState::Func(spec, args) => {
                assert_eq!(spec.name, "min");
                assert_eq!(args.len(), 2);
            }
            other => panic!("expected conjunction, got {other:?}"),
        }
        // batched depth matches the strategy nesting depth
        assert_eq!(qctl_depth_batched(&tr.formula), f.nesting_depth());
        // plain depth counts each proposition separately
        assert_eq!(tr.formula.nesting_depth(), 2);
    }

    #[test]
    fn gadgets_are_boolean_on_the_unfolding() {
        let g = pick_game();
        let gk = game_to_kripke(&g);
        let f = parse_sl("<<x>> (a, x) A X p", &Registry::builtin()).unwrap();
        let tr = translate(&g, &gk, &f).unwrap();
        let tree = crate::kripke::unfold_wks(&gk.kripke, 2);
        let v = oracle::eval_bqctl_bounded(&tree, &tr.formula, 0, &Limits::default()).unwrap();
        assert!(v.is_boolean());
    }

    #[test]
    fn redux_on_reachability_fixture() {
        let g = pick_game();
        let f = parse_sl("<<x>> (a, x) A X p", &Registry::builtin()).unwrap();
        let report = check_redux(&g, &f, 2, &Limits::default()).unwrap();
        assert!(!report.samples.is_empty());
        for s in &report.samples {
            assert!(
                s.equal,
                "mismatch at {:?}: sl={} qctl={}",
                s.history, s.sl_value, s.qctl_value
            );
        }
        assert_eq!(report.samples[0].sl_value, Rat::ONE);
    }

    #[test]
    fn redux_on_matching_pennies() {
        let g = matching_pennies();
        let f = parse_sl("<<x>> [[y]] (c, x) (e, y) A X win", &Registry::builtin()).unwrap();
        let report = check_redux(&g, &f, 1, &Limits::default()).unwrap();
        assert!(report.all_equal());
        assert_eq!(report.samples[0].sl_value, Rat::ZERO);
    }

    #[test]
    fn redux_base_clause() {
        let g = pick_game();
        let f = parse_sl("p", &Registry::builtin()).unwrap();
        let report = check_redux(&g, &f, 2, &Limits::default()).unwrap();
        assert!(report.all_equal());
    }
}
