//! Formula ASTs for the three dialects: SL state/path formulas, QCTL
//! state/path formulas, and LTL path formulas over atoms.
//!
//! All abbreviations (⊥, ∧, →, F, G, universal quantifiers) are desugared by
//! the parser, so these types are the single semantic kernel. Nodes are
//! immutable after construction and safe to share.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::func::{self, FuncSpec};

/// Path-formula layer, generic in the state-formula type it embeds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Path<S> {
    /// A state formula evaluated at the current position.
    State(Box<S>),
    Next(Box<Path<S>>),
    Until(Box<Path<S>>, Box<Path<S>>),
    Func(Arc<FuncSpec>, Vec<Path<S>>),
}

/// SL state formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlState {
    Atom(String),
    /// Existential strategy quantification ⟪x⟫φ.
    Exists(String, Box<SlState>),
    /// Binding (a, x)φ of agent `a` to strategy variable `x`.
    Bind(String, String, Box<SlState>),
    /// Universal path quantification Aψ over the outcomes of the binding.
    All(Box<SlPath>),
    Func(Arc<FuncSpec>, Vec<SlState>),
}

pub type SlPath = Path<SlState>;

/// QCTL state formulas: CTL* with functions plus Boolean proposition
/// quantification on the unfolding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QctlState {
    Atom(String),
    /// ∃p.φ — maximises over Boolean relabelings of `p` on the tree.
    ExistsProp(String, Box<QctlState>),
    /// Eψ — maximises over branches.
    ExistsPath(Box<QctlPath>),
    Func(Arc<FuncSpec>, Vec<QctlState>),
}

pub type QctlPath = Path<QctlState>;

/// LTL formulas over named atoms, evaluated on infinite words.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Ltl {
    Atom(String),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Func(Arc<FuncSpec>, Vec<Ltl>),
}

impl Ltl {
    pub fn tt() -> Ltl {
        Ltl::Func(func::const_one(), Vec::new())
    }

    pub fn next(p: Ltl) -> Ltl {
        Ltl::Next(Box::new(p))
    }

    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    /// F ψ desugared as ⊤ U ψ.
    pub fn finally(p: Ltl) -> Ltl {
        Ltl::until(Ltl::tt(), p)
    }

    /// G ψ desugared as ¬F¬ψ.
    pub fn globally(p: Ltl) -> Ltl {
        Ltl::neg(Ltl::finally(Ltl::neg(p)))
    }

    pub fn neg(p: Ltl) -> Ltl {
        Ltl::Func(func::neg1(), alloc::vec![p])
    }

    /// AST node count.
    pub fn size(&self) -> usize {
        match self {
            Ltl::Atom(_) => 1,
            Ltl::Next(p) => 1 + p.size(),
            Ltl::Until(a, b) => 1 + a.size() + b.size(),
            Ltl::Func(_, args) => 1 + args.iter().map(Ltl::size).sum::<usize>(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Ltl::Atom(p) => {
                out.insert(p.clone());
            }
            Ltl::Next(p) => p.collect_atoms(out),
            Ltl::Until(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Ltl::Func(_, args) => args.iter().for_each(|a| a.collect_atoms(out)),
        }
    }

    /// `Some(d)` when the only temporal operator is X, nested at most `d` deep.
    pub fn x_depth(&self) -> Option<usize> {
        match self {
            Ltl::Atom(_) => Some(0),
            Ltl::Next(p) => p.x_depth().map(|d| d + 1),
            Ltl::Until(_, _) => None,
            Ltl::Func(_, args) => {
                let mut d = 0;
                for a in args {
                    d = d.max(a.x_depth()?);
                }
                Some(d)
            }
        }
    }
}

impl SlState {
    pub fn atom(p: impl Into<String>) -> SlState {
        SlState::Atom(p.into())
    }

    pub fn exists(x: impl Into<String>, body: SlState) -> SlState {
        SlState::Exists(x.into(), Box::new(body))
    }

    /// ⟦x⟧φ as ¬⟪x⟫¬φ.
    pub fn forall(x: impl Into<String>, body: SlState) -> SlState {
        SlState::neg(SlState::exists(x, SlState::neg(body)))
    }

    pub fn bind(agent: impl Into<String>, x: impl Into<String>, body: SlState) -> SlState {
        SlState::Bind(agent.into(), x.into(), Box::new(body))
    }

    pub fn all(path: SlPath) -> SlState {
        SlState::All(Box::new(path))
    }

    pub fn neg(a: SlState) -> SlState {
        SlState::Func(func::neg1(), alloc::vec![a])
    }

    pub fn size(&self) -> usize {
        match self {
            SlState::Atom(_) => 1,
            SlState::Exists(_, b) | SlState::Bind(_, _, b) => 1 + b.size(),
            SlState::All(p) => 1 + path_full_size(p, &SlState::size),
            SlState::Func(_, args) => 1 + args.iter().map(SlState::size).sum::<usize>(),
        }
    }

    /// Maximal number of nested strategy quantifiers on any AST path.
    pub fn nesting_depth(&self) -> usize {
        match self {
            SlState::Atom(_) => 0,
            SlState::Exists(_, b) => 1 + b.nesting_depth(),
            SlState::Bind(_, _, b) => b.nesting_depth(),
            SlState::All(p) => path_measure(p, &|s: &SlState| s.nesting_depth()),
            SlState::Func(_, args) => args.iter().map(SlState::nesting_depth).max().unwrap_or(0),
        }
    }

    /// Strategy variables used in bindings without an enclosing quantifier.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut BTreeSet<String>, out: &mut BTreeSet<String>) {
        match self {
            SlState::Atom(_) => {}
            SlState::Exists(x, b) => {
                let fresh = bound.insert(x.clone());
                b.collect_free_vars(bound, out);
                if fresh {
                    bound.remove(x);
                }
            }
            SlState::Bind(_, x, b) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
                b.collect_free_vars(bound, out);
            }
            SlState::All(p) => path_visit_states(p, &mut |s| s.collect_free_vars(bound, out)),
            SlState::Func(_, args) => {
                for a in args {
                    a.collect_free_vars(bound, out);
                }
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |p| {
            out.insert(p.into());
        });
        out
    }

    fn visit_atoms(&self, f: &mut impl FnMut(&str)) {
        match self {
            SlState::Atom(p) => f(p),
            SlState::Exists(_, b) | SlState::Bind(_, _, b) => b.visit_atoms(f),
            SlState::All(p) => path_visit_states(p, &mut |s: &SlState| s.visit_atoms(f)),
            SlState::Func(_, args) => args.iter().for_each(|a| a.visit_atoms(f)),
        }
    }

    /// `Some(d)` when every path operator is X, nested at most `d` deep.
    /// The depth is the number of transitions the value can depend on.
    pub fn x_depth(&self) -> Option<usize> {
        match self {
            SlState::Atom(_) => Some(0),
            SlState::Exists(_, b) | SlState::Bind(_, _, b) => b.x_depth(),
            SlState::All(p) => path_x_depth(p, &|s: &SlState| s.x_depth()),
            SlState::Func(_, args) => {
                let mut d = 0;
                for a in args {
                    d = d.max(a.x_depth()?);
                }
                Some(d)
            }
        }
    }
}

impl QctlState {
    pub fn atom(p: impl Into<String>) -> QctlState {
        QctlState::Atom(p.into())
    }

    pub fn exists_prop(p: impl Into<String>, body: QctlState) -> QctlState {
        QctlState::ExistsProp(p.into(), Box::new(body))
    }

    pub fn exists_path(path: QctlPath) -> QctlState {
        QctlState::ExistsPath(Box::new(path))
    }

    /// Aψ as ¬E¬ψ.
    pub fn all_paths(path: QctlPath) -> QctlState {
        QctlState::neg(QctlState::exists_path(Path::Func(
            func::neg1(),
            alloc::vec![path],
        )))
    }

    pub fn neg(a: QctlState) -> QctlState {
        QctlState::Func(func::neg1(), alloc::vec![a])
    }

    pub fn size(&self) -> usize {
        match self {
            QctlState::Atom(_) => 1,
            QctlState::ExistsProp(_, b) => 1 + b.size(),
            QctlState::ExistsPath(p) => 1 + path_full_size(p, &QctlState::size),
            QctlState::Func(_, args) => 1 + args.iter().map(QctlState::size).sum::<usize>(),
        }
    }

    /// Maximal number of nested propositional quantifiers on any AST path.
    pub fn nesting_depth(&self) -> usize {
        match self {
            QctlState::Atom(_) => 0,
            QctlState::ExistsProp(_, b) => 1 + b.nesting_depth(),
            QctlState::ExistsPath(p) => path_measure(p, &|s: &QctlState| s.nesting_depth()),
            QctlState::Func(_, args) => args.iter().map(QctlState::nesting_depth).max().unwrap_or(0),
        }
    }

    /// Atomic propositions not captured by a quantifier.
    pub fn free_props(&self) -> BTreeSet<String> {
        match self {
            QctlState::Atom(p) => {
                let mut s = BTreeSet::new();
                s.insert(p.clone());
                s
            }
            QctlState::ExistsProp(p, b) => {
                let mut s = b.free_props();
                s.remove(p);
                s
            }
            QctlState::ExistsPath(path) => {
                let mut s = BTreeSet::new();
                path_visit_states(path, &mut |st: &QctlState| {
                    s.extend(st.free_props());
                });
                s
            }
            QctlState::Func(_, args) => {
                let mut s = BTreeSet::new();
                for a in args {
                    s.extend(a.free_props());
                }
                s
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_props().is_empty()
    }

    pub fn x_depth(&self) -> Option<usize> {
        match self {
            QctlState::Atom(_) => Some(0),
            QctlState::ExistsProp(_, b) => b.x_depth(),
            QctlState::ExistsPath(p) => path_x_depth(p, &|s: &QctlState| s.x_depth()),
            QctlState::Func(_, args) => {
                let mut d = 0;
                for a in args {
                    d = d.max(a.x_depth()?);
                }
                Some(d)
            }
        }
    }
}

/// Applies `f` to every embedded state formula.
pub fn path_visit_states<S>(p: &Path<S>, f: &mut impl FnMut(&S)) {
    match p {
        Path::State(s) => f(s),
        Path::Next(q) => path_visit_states(q, f),
        Path::Until(a, b) => {
            path_visit_states(a, f);
            path_visit_states(b, f);
        }
        Path::Func(_, args) => args.iter().for_each(|a| path_visit_states(a, f)),
    }
}

fn path_measure<S>(p: &Path<S>, depth: &impl Fn(&S) -> usize) -> usize {
    match p {
        Path::State(s) => depth(s),
        Path::Next(q) => path_measure(q, depth),
        Path::Until(a, b) => path_measure(a, depth).max(path_measure(b, depth)),
        Path::Func(_, args) => args.iter().map(|a| path_measure(a, depth)).max().unwrap_or(0),
    }
}

/// X-nesting of a path formula: how many future positions its value can
/// depend on. `None` when an Until occurs.
pub fn path_x_depth<S>(p: &Path<S>, state_depth: &impl Fn(&S) -> Option<usize>) -> Option<usize> {
    match p {
        Path::State(s) => state_depth(s),
        Path::Next(q) => path_x_depth(q, state_depth).map(|d| d + 1),
        Path::Until(_, _) => None,
        Path::Func(_, args) => {
            let mut d = 0;
            for a in args {
                d = d.max(path_x_depth(a, state_depth)?);
            }
            Some(d)
        }
    }
}

/// Full node count of a path formula including its embedded state formulas.
pub fn path_full_size<S>(p: &Path<S>, state_size: &impl Fn(&S) -> usize) -> usize {
    match p {
        Path::State(s) => state_size(s),
        Path::Next(q) => 1 + path_full_size(q, state_size),
        Path::Until(a, b) => 1 + path_full_size(a, state_size) + path_full_size(b, state_size),
        Path::Func(_, args) => 1 + args.iter().map(|a| path_full_size(a, state_size)).sum::<usize>(),
    }
}

/// Pulls functions whose arguments are all state formulas down into the state
/// layer, so that `State(..)` nodes are exactly the maximal state subformulas.
pub fn normalize_sl_path(p: SlPath) -> SlPath {
    normalize_path(p, &|f, args| SlState::Func(f, args))
}

/// Recursively normalizes every path formula inside an SL state formula;
/// the parser produces this form.
pub fn normalize_sl(f: SlState) -> SlState {
    match f {
        SlState::Atom(p) => SlState::Atom(p),
        SlState::Exists(x, b) => SlState::Exists(x, Box::new(normalize_sl(*b))),
        SlState::Bind(a, x, b) => SlState::Bind(a, x, Box::new(normalize_sl(*b))),
        SlState::All(p) => {
            let inner = normalize_sl_path(map_path(*p, &normalize_sl));
            SlState::All(Box::new(inner))
        }
        SlState::Func(spec, args) => {
            SlState::Func(spec, args.into_iter().map(normalize_sl).collect())
        }
    }
}

fn map_path<S>(p: Path<S>, f: &impl Fn(S) -> S) -> Path<S> {
    match p {
        Path::State(s) => Path::State(Box::new(f(*s))),
        Path::Next(q) => Path::Next(Box::new(map_path(*q, f))),
        Path::Until(a, b) => Path::Until(Box::new(map_path(*a, f)), Box::new(map_path(*b, f))),
        Path::Func(spec, args) => {
            Path::Func(spec, args.into_iter().map(|a| map_path(a, f)).collect())
        }
    }
}

pub fn normalize_qctl_path(p: QctlPath) -> QctlPath {
    normalize_path(p, &|f, args| QctlState::Func(f, args))
}

fn normalize_path<S: Clone>(p: Path<S>, mk_func: &impl Fn(Arc<FuncSpec>, Vec<S>) -> S) -> Path<S> {
    match p {
        Path::State(s) => Path::State(s),
        Path::Next(q) => Path::Next(Box::new(normalize_path(*q, mk_func))),
        Path::Until(a, b) => Path::Until(
            Box::new(normalize_path(*a, mk_func)),
            Box::new(normalize_path(*b, mk_func)),
        ),
        Path::Func(f, args) => {
            let args: Vec<Path<S>> = args.into_iter().map(|a| normalize_path(a, mk_func)).collect();
            if args.iter().all(|a| matches!(a, Path::State(_))) {
                let inner: Vec<S> = args
                    .into_iter()
                    .map(|a| match a {
                        Path::State(s) => *s,
                        _ => unreachable!(),
                    })
                    .collect();
                Path::State(Box::new(mk_func(f, inner)))
            } else {
                Path::Func(f, args)
            }
        }
    }
}

/// Replaces the embedded state formulas of a path formula by named atoms,
/// returning the resulting LTL formula and the atom table. Structurally equal
/// state formulas share an atom.
pub fn path_to_ltl<S: Clone + PartialEq>(p: &Path<S>, prefix: &str) -> (Ltl, Vec<S>) {
    let mut table: Vec<S> = Vec::new();
    let ltl = go(p, prefix, &mut table);
    return (ltl, table);

    fn go<S: Clone + PartialEq>(p: &Path<S>, prefix: &str, table: &mut Vec<S>) -> Ltl {
        match p {
            Path::State(s) => {
                let idx = match table.iter().position(|t| t == s.as_ref()) {
                    Some(i) => i,
                    None => {
                        table.push(s.as_ref().clone());
                        table.len() - 1
                    }
                };
                Ltl::Atom(alloc::format!("{prefix}{idx}"))
            }
            Path::Next(q) => Ltl::next(go(q, prefix, table)),
            Path::Until(a, b) => Ltl::until(go(a, prefix, table), go(b, prefix, table)),
            Path::Func(f, args) => {
                Ltl::Func(f.clone(), args.iter().map(|a| go(a, prefix, table)).collect())
            }
        }
    }
}

/// Substitutes atoms in an LTL formula using the given map; atoms not in the
/// map are kept.
pub fn ltl_substitute(p: &Ltl, map: &BTreeMap<String, Ltl>) -> Ltl {
    match p {
        Ltl::Atom(a) => map.get(a).cloned().unwrap_or_else(|| p.clone()),
        Ltl::Next(q) => Ltl::next(ltl_substitute(q, map)),
        Ltl::Until(a, b) => Ltl::until(ltl_substitute(a, map), ltl_substitute(b, map)),
        Ltl::Func(f, args) => {
            Ltl::Func(f.clone(), args.iter().map(|a| ltl_substitute(a, map)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nesting_depth_examples() {
        // p → 0
        assert_eq!(SlState::atom("p").nesting_depth(), 0);

        // ⟪x⟫⟦y⟧(a,x)(b,y) A F p → 2 after desugaring ⟦y⟧ = ¬⟪y⟫¬
        let goal = Path::Until(
            Box::new(Path::State(Box::new(SlState::Func(func::const_one(), alloc::vec![])))),
            Box::new(Path::State(Box::new(SlState::atom("p")))),
        );
        let inner = SlState::bind("a", "x", SlState::bind("b", "y", SlState::all(goal)));
        let f = SlState::exists("x", SlState::forall("y", inner));
        assert_eq!(f.nesting_depth(), 2);

        // ∃p.(E F p ∧ ∃q. E G q) → 2
        let efp = QctlState::exists_path(Path::Until(
            Box::new(Path::State(Box::new(QctlState::Func(func::const_one(), alloc::vec![])))),
            Box::new(Path::State(Box::new(QctlState::atom("p")))),
        ));
        let egq = QctlState::exists_prop(
            "q",
            QctlState::neg(QctlState::exists_path(Path::Func(
                func::neg1(),
                alloc::vec![Path::Until(
                    Box::new(Path::State(Box::new(QctlState::Func(
                        func::const_one(),
                        alloc::vec![]
                    )))),
                    Box::new(Path::Func(
                        func::neg1(),
                        alloc::vec![Path::State(Box::new(QctlState::atom("q")))]
                    )),
                )],
            ))),
        );
        let f = QctlState::exists_prop("p", QctlState::Func(func::and2(), alloc::vec![efp, egq]));
        assert_eq!(f.nesting_depth(), 2);
    }

    #[test]
    fn depth_monotone_under_embedding() {
        let inner = SlState::exists("x", SlState::atom("p"));
        let outer = SlState::exists("y", SlState::Func(func::neg1(), alloc::vec![inner.clone()]));
        assert!(outer.nesting_depth() >= inner.nesting_depth());
    }

    #[test]
    fn closedness() {
        let open = SlState::bind("a", "x", SlState::atom("p"));
        assert!(!open.is_closed());
        let closed = SlState::exists("x", open.clone());
        assert!(closed.is_closed());

        let q_open = QctlState::atom("p");
        assert!(!q_open.is_closed());
        let q_closed = QctlState::exists_prop("p", q_open);
        assert!(q_closed.is_closed());
    }

    #[test]
    fn x_depth_classification() {
        let f = Ltl::next(Ltl::next(Ltl::Atom("p".into())));
        assert_eq!(f.x_depth(), Some(2));
        assert_eq!(Ltl::finally(Ltl::Atom("p".into())).x_depth(), None);
    }

    #[test]
    fn normalization_finds_maximal_state_subformulas() {
        // min(p, X q): args are a state formula and a path formula
        let p = Path::Func(
            func::and2(),
            alloc::vec![
                Path::State(Box::new(SlState::atom("p"))),
                Path::Next(Box::new(Path::State(Box::new(SlState::atom("q"))))),
            ],
        );
        let n = normalize_sl_path(p);
        assert!(matches!(n, Path::Func(_, _)));

        // min(p, q) collapses into the state layer
        let p = Path::Func(
            func::and2(),
            alloc::vec![
                Path::State(Box::new(SlState::atom("p"))),
                Path::State(Box::new(SlState::atom("q"))),
            ],
        );
        let n = normalize_sl_path(p);
        assert!(matches!(n, Path::State(_)));
    }
}
