//! Ultimately periodic words and the exact LTL evaluator on them.
//!
//! A lasso `prefix · cycle^ω` carries one label vector per position. Values
//! of all subformulas are computed position-wise on the finite cyclic
//! structure; the Until clause is the least fixpoint of its expansion law,
//! which is exact because values are eventually periodic.

use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::Ltl;
use crate::func::FuncError;
use crate::rat::Rat;

/// A finitely represented infinite word: `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoWord {
    pub atoms: Vec<String>,
    /// `prefix[i][atom]`.
    pub prefix: Vec<Vec<Rat>>,
    /// Nonempty repeated part, same shape.
    pub cycle: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    UnlabeledAtom(String),
    Func(FuncError),
    ModeMismatch(String),
    DepthInsufficient,
    EnumerationCap(u64),
    StrategyDomainExhausted,
}

impl From<FuncError> for EvalError {
    fn from(e: FuncError) -> EvalError {
        EvalError::Func(e)
    }
}

impl core::fmt::Display for EvalError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EvalError::UnlabeledAtom(a) => write!(f, "atom `{a}` is not labelled in the word"),
            EvalError::Func(e) => write!(f, "{e}"),
            EvalError::ModeMismatch(m) => write!(f, "formula does not fit evaluation mode: {m}"),
            EvalError::DepthInsufficient => write!(f, "tree depth insufficient for the formula"),
            EvalError::EnumerationCap(n) => write!(f, "enumeration cap of {n} exceeded"),
            EvalError::StrategyDomainExhausted => {
                write!(f, "a strategy is undefined on a reached history")
            }
        }
    }
}

impl LassoWord {
    pub fn new(atoms: Vec<String>, prefix: Vec<Vec<Rat>>, cycle: Vec<Vec<Rat>>) -> LassoWord {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        LassoWord { atoms, prefix, cycle }
    }

    /// Number of distinct positions in the finite representation.
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Folds an arbitrary position into the finite representation.
    pub fn norm_pos(&self, pos: usize) -> usize {
        if pos < self.prefix.len() {
            pos
        } else {
            self.prefix.len() + (pos - self.prefix.len()) % self.cycle.len()
        }
    }

    fn next(&self, pos: usize) -> usize {
        let n = self.span();
        if pos + 1 < n {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn letter(&self, pos: usize) -> &[Rat] {
        let p = self.norm_pos(pos);
        if p < self.prefix.len() {
            &self.prefix[p]
        } else {
            &self.cycle[p - self.prefix.len()]
        }
    }

    pub fn atom_index(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    pub fn value(&self, pos: usize, atom: &str) -> Option<Rat> {
        let i = self.atom_index(atom)?;
        Some(self.letter(pos)[i])
    }
}

/// Exact satisfaction value of `f` on `w` at position `pos`.
pub fn eval_ltl_lasso(f: &Ltl, w: &LassoWord, pos: usize) -> Result<Rat, EvalError> {
    let vec = eval_ltl_lasso_vec(f, w)?;
    Ok(vec[w.norm_pos(pos)])
}

/// Values of `f` at every position of the finite representation.
pub fn eval_ltl_lasso_vec(f: &Ltl, w: &LassoWord) -> Result<Vec<Rat>, EvalError> {
    let n = w.span();
    match f {
        Ltl::Atom(a) => {
            let i = w
                .atom_index(a)
                .ok_or_else(|| EvalError::UnlabeledAtom(a.clone()))?;
            Ok((0..n).map(|p| w.letter(p)[i]).collect())
        }
        Ltl::Next(q) => {
            let v = eval_ltl_lasso_vec(q, w)?;
            Ok((0..n).map(|p| v[w.next(p)]).collect())
        }
        Ltl::Until(a, b) => {
            let va = eval_ltl_lasso_vec(a, w)?;
            let vb = eval_ltl_lasso_vec(b, w)?;
            // least fixpoint of v(i) = max(b_i, min(a_i, v(next i)))
            let mut v = vb.clone();
            loop {
                let mut changed = false;
                for i in (0..n).rev() {
                    let cand = vb[i].max(va[i].min(v[w.next(i)]));
                    if cand > v[i] {
                        v[i] = cand;
                        changed = true;
                    }
                }
                if !changed {
                    return Ok(v);
                }
            }
        }
        Ltl::Func(spec, args) => {
            let vecs = args
                .iter()
                .map(|arg| eval_ltl_lasso_vec(arg, w))
                .collect::<Result<Vec<_>, _>>()?;
            let mut out = Vec::with_capacity(n);
            for p in 0..n {
                let point: Vec<Rat> = vecs.iter().map(|v| v[p]).collect();
                out.push(spec.apply(&point)?);
            }
            Ok(out)
        }
    }
}
