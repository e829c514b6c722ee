//! Finite over-approximations of the satisfaction-value sets of formulas.
//!
//! Once the atom values range over a finite base set containing {0,1}, every
//! formula takes only finitely many values; these sets bound the automata
//! alphabets and turn every sup/inf of the semantics into a max/min over an
//! explicit candidate list.

use alloc::vec::Vec;

use crate::formula::{Ltl, Path, QctlState, SlState};
use crate::func::{FuncError, FuncSpec};
use crate::rat::Rat;

/// A sorted, duplicate-free set of rationals in [0,1].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValueSet(Vec<Rat>);

impl ValueSet {
    pub fn new(mut values: Vec<Rat>) -> ValueSet {
        values.sort();
        values.dedup();
        ValueSet(values)
    }

    /// The Boolean base {0,1}.
    pub fn boolean() -> ValueSet {
        ValueSet(alloc::vec![Rat::ZERO, Rat::ONE])
    }

    /// Base set from arbitrary weights, closed under adding {0,1}.
    pub fn base_from(values: impl IntoIterator<Item = Rat>) -> ValueSet {
        let mut v: Vec<Rat> = values.into_iter().collect();
        v.push(Rat::ZERO);
        v.push(Rat::ONE);
        ValueSet::new(v)
    }

    pub fn contains(&self, r: &Rat) -> bool {
        self.0.binary_search(r).is_ok()
    }

    pub fn union(&self, other: &ValueSet) -> ValueSet {
        let mut v = self.0.clone();
        v.extend(other.0.iter().copied());
        ValueSet::new(v)
    }

    pub fn insert(&mut self, r: Rat) {
        if let Err(i) = self.0.binary_search(&r) {
            self.0.insert(i, r);
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rat> + DoubleEndedIterator {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_subset(&self, other: &ValueSet) -> bool {
        self.0.iter().all(|r| other.contains(r))
    }
}

impl FromIterator<Rat> for ValueSet {
    fn from_iter<T: IntoIterator<Item = Rat>>(iter: T) -> ValueSet {
        ValueSet::new(iter.into_iter().collect())
    }
}

/// Image of `f` over the Cartesian product of the argument sets.
pub fn func_image(f: &FuncSpec, arg_sets: &[ValueSet]) -> Result<ValueSet, FuncError> {
    debug_assert_eq!(arg_sets.len(), f.arity);
    let mut out = Vec::new();
    let mut idx = alloc::vec![0usize; arg_sets.len()];
    loop {
        let args: Vec<Rat> = idx.iter().zip(arg_sets).map(|(&i, s)| s.0[i]).collect();
        out.push(f.apply(&args)?);
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(ValueSet::new(out));
            }
            idx[k] += 1;
            if idx[k] < arg_sets[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if idx.is_empty() {
            return Ok(ValueSet::new(out));
        }
    }
}

/// Like [`ltl_value_set`] but with a separate base per atom.
pub fn ltl_value_set_map(
    f: &Ltl,
    atom_sets: &alloc::collections::BTreeMap<alloc::string::String, ValueSet>,
) -> Result<ValueSet, FuncError> {
    match f {
        Ltl::Atom(a) => Ok(atom_sets.get(a).cloned().unwrap_or_else(ValueSet::boolean)),
        Ltl::Next(p) => ltl_value_set_map(p, atom_sets),
        Ltl::Until(a, b) => {
            let mut u = ltl_value_set_map(a, atom_sets)?.union(&ltl_value_set_map(b, atom_sets)?);
            u.insert(Rat::ONE);
            Ok(u)
        }
        Ltl::Func(spec, args) => {
            let sets = args
                .iter()
                .map(|a| ltl_value_set_map(a, atom_sets))
                .collect::<Result<Vec<_>, _>>()?;
            func_image(spec, &sets)
        }
    }
}

/// Possible-value over-approximation for an LTL formula.
pub fn ltl_value_set(f: &Ltl, base: &ValueSet) -> Result<ValueSet, FuncError> {
    match f {
        Ltl::Atom(_) => Ok(base.clone()),
        Ltl::Next(p) => ltl_value_set(p, base),
        Ltl::Until(a, b) => {
            let mut u = ltl_value_set(a, base)?.union(&ltl_value_set(b, base)?);
            // min over the empty range [i, j-1] is 1, so 1 is a candidate
            u.insert(Rat::ONE);
            Ok(u)
        }
        Ltl::Func(spec, args) => {
            let sets = args
                .iter()
                .map(|a| ltl_value_set(a, base))
                .collect::<Result<Vec<_>, _>>()?;
            func_image(spec, &sets)
        }
    }
}

fn path_value_set<S>(
    p: &Path<S>,
    base: &ValueSet,
    state_set: &impl Fn(&S, &ValueSet) -> Result<ValueSet, FuncError>,
) -> Result<ValueSet, FuncError> {
    match p {
        Path::State(s) => state_set(s, base),
        Path::Next(q) => path_value_set(q, base, state_set),
        Path::Until(a, b) => {
            let mut u = path_value_set(a, base, state_set)?
                .union(&path_value_set(b, base, state_set)?);
            u.insert(Rat::ONE);
            Ok(u)
        }
        Path::Func(spec, args) => {
            let sets = args
                .iter()
                .map(|a| path_value_set(a, base, state_set))
                .collect::<Result<Vec<_>, _>>()?;
            func_image(spec, &sets)
        }
    }
}

/// Possible-value over-approximation for an SL state formula. Strategy
/// quantification, binding and the path quantifier do not enlarge the set.
pub fn sl_value_set(f: &SlState, base: &ValueSet) -> Result<ValueSet, FuncError> {
    match f {
        SlState::Atom(_) => Ok(base.clone()),
        SlState::Exists(_, b) => sl_value_set(b, base),
        SlState::Bind(_, _, b) => sl_value_set(b, base),
        SlState::All(p) => path_value_set(p, base, &sl_value_set),
        SlState::Func(spec, args) => {
            let sets = args
                .iter()
                .map(|a| sl_value_set(a, base))
                .collect::<Result<Vec<_>, _>>()?;
            func_image(spec, &sets)
        }
    }
}

/// Like [`qctl_value_set`] but with a separate base per atom; atoms missing
/// from the map are treated as Boolean (the quantified ones).
pub fn qctl_value_set_map(
    f: &QctlState,
    atom_sets: &alloc::collections::BTreeMap<alloc::string::String, ValueSet>,
) -> Result<ValueSet, FuncError> {
    fn path_set(
        p: &Path<QctlState>,
        atom_sets: &alloc::collections::BTreeMap<alloc::string::String, ValueSet>,
    ) -> Result<ValueSet, FuncError> {
        match p {
            Path::State(s) => qctl_value_set_map(s, atom_sets),
            Path::Next(q) => path_set(q, atom_sets),
            Path::Until(a, b) => {
                let mut u = path_set(a, atom_sets)?.union(&path_set(b, atom_sets)?);
                u.insert(Rat::ONE);
                Ok(u)
            }
            Path::Func(spec, args) => {
                let sets = args
                    .iter()
                    .map(|a| path_set(a, atom_sets))
                    .collect::<Result<Vec<_>, _>>()?;
                func_image(spec, &sets)
            }
        }
    }
    match f {
        QctlState::Atom(a) => Ok(atom_sets.get(a).cloned().unwrap_or_else(ValueSet::boolean)),
        QctlState::ExistsProp(p, b) => {
            let mut inner = atom_sets.clone();
            inner.insert(p.clone(), ValueSet::boolean());
            qctl_value_set_map(b, &inner)
        }
        QctlState::ExistsPath(p) => path_set(p, atom_sets),
        QctlState::Func(spec, args) => {
            let sets = args
                .iter()
                .map(|a| qctl_value_set_map(a, atom_sets))
                .collect::<Result<Vec<_>, _>>()?;
            func_image(spec, &sets)
        }
    }
}

/// Possible-value over-approximation for a QCTL state formula.
pub fn qctl_value_set(f: &QctlState, base: &ValueSet) -> Result<ValueSet, FuncError> {
    match f {
        QctlState::Atom(_) => Ok(base.clone()),
        QctlState::ExistsProp(_, b) => qctl_value_set(b, base),
        QctlState::ExistsPath(p) => path_value_set(p, base, &qctl_value_set),
        QctlState::Func(spec, args) => {
            let sets = args
                .iter()
                .map(|a| qctl_value_set(a, base))
                .collect::<Result<Vec<_>, _>>()?;
            func_image(spec, &sets)
        }
    }
}

pub fn qctl_path_value_set(p: &Path<QctlState>, base: &ValueSet) -> Result<ValueSet, FuncError> {
    path_value_set(p, base, &qctl_value_set)
}

pub fn sl_path_value_set(p: &Path<SlState>, base: &ValueSet) -> Result<ValueSet, FuncError> {
    path_value_set(p, base, &sl_value_set)
}

/// |base|^|φ|, saturating.
pub fn size_bound(base_len: usize, formula_size: usize) -> u128 {
    let mut out: u128 = 1;
    for _ in 0..formula_size {
        out = out.saturating_mul(base_len as u128);
    }
    out
}

/// The computed set size against the |base|^|φ| bound.
pub struct SizeBoundReport {
    pub computed: usize,
    pub bound: u128,
    pub ok: bool,
}

pub fn size_bound_check(computed: usize, base_len: usize, formula_size: usize) -> SizeBoundReport {
    let bound = size_bound(base_len, formula_size);
    SizeBoundReport { computed, bound, ok: (computed as u128) <= bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func;
    use crate::parse::{parse_qctl, parse_sl};
    use crate::func::Registry;

    fn r(n: u64, d: u64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    #[test]
    fn atom_takes_base() {
        let f = parse_sl("p", &Registry::builtin()).unwrap();
        let base = ValueSet::boolean();
        assert_eq!(sl_value_set(&f, &base).unwrap(), base);
    }

    #[test]
    fn max_neg_example() {
        // max(p, neg(q)) over {0, 1/3, 1} → {0, 1/3, 2/3, 1}
        let f = parse_sl("max(p, neg(q))", &Registry::builtin()).unwrap();
        let base = ValueSet::new(alloc::vec![Rat::ZERO, r(1, 3), Rat::ONE]);
        let vs = sl_value_set(&f, &base).unwrap();
        assert_eq!(
            vs,
            ValueSet::new(alloc::vec![Rat::ZERO, r(1, 3), r(2, 3), Rat::ONE])
        );
        let rep = size_bound_check(vs.len(), base.len(), f.size());
        assert!(rep.ok);
        assert_eq!(rep.computed, 4);
        assert_eq!(rep.bound, 81); // 3^4: four AST nodes
    }

    #[test]
    fn quantifiers_preserve_boolean_closure() {
        let f = parse_qctl("exists p . E (F p)", &Registry::builtin()).unwrap();
        let vs = qctl_value_set(&f, &ValueSet::boolean()).unwrap();
        assert_eq!(vs, ValueSet::boolean());
    }

    #[test]
    fn boolean_connectives_stay_boolean() {
        let f = parse_sl("max(p, min(q, neg(p)))", &Registry::builtin()).unwrap();
        let vs = sl_value_set(&f, &ValueSet::boolean()).unwrap();
        assert!(vs.len() <= 2);
    }

    #[test]
    fn monotone_in_base() {
        let f = parse_sl("max(p, neg(q))", &Registry::builtin()).unwrap();
        let small = ValueSet::boolean();
        let big = ValueSet::new(alloc::vec![Rat::ZERO, r(1, 3), r(1, 2), Rat::ONE]);
        let vs_small = sl_value_set(&f, &small).unwrap();
        let vs_big = sl_value_set(&f, &big).unwrap();
        assert!(vs_small.is_subset(&vs_big));
    }

    #[test]
    fn table_outside_domain_errors() {
        use crate::func::{FuncKind, FuncSpec, TableFunc};
        let table = FuncSpec::new(
            "t",
            1,
            FuncKind::Table(TableFunc { map: alloc::collections::BTreeMap::new(), default: None }),
        )
        .unwrap();
        let f = SlState::Func(table, alloc::vec![SlState::atom("p")]);
        assert!(sl_value_set(&f, &ValueSet::boolean()).is_err());
    }

    #[test]
    fn until_includes_one() {
        let f = Ltl::until(Ltl::Atom("a".into()), Ltl::Atom("b".into()));
        let base = ValueSet::new(alloc::vec![Rat::ZERO, r(1, 2), Rat::ONE]);
        let vs = ltl_value_set(&f, &base).unwrap();
        assert!(vs.contains(&Rat::ONE));
        let _ = func::const_one();
    }
}
