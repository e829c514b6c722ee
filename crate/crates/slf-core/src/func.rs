//! Functions over [0,1] and their registry.
//!
//! The connectives of the logic are arbitrary functions drawn from a declared
//! set. Arbitrary real-valued functions are not representable, so the set is
//! restricted to the rational-closed kinds below; each evaluates exactly and
//! maps rational tuples in [0,1] back into [0,1].

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::rat::Rat;

/// Finite lookup table with a declared default for misses.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TableFunc {
    pub map: BTreeMap<Vec<Rat>, Rat>,
    pub default: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FuncKind {
    Const(Rat),
    Min,
    Max,
    /// 1 − x.
    Neg,
    /// λ·x + (1−λ)·y.
    WAvg(Rat),
    /// max{0, x − y}.
    Diff,
    /// 1 if x ≤ y else 0.
    LeqIndicator,
    /// Lexicographic comparison of pairs: component `i` first, then the other.
    /// Arguments are (a1, a2, b1, b2); yields 1 if (a1,a2) ⪯_i (b1,b2).
    LexLeqIndicator(u8),
    Table(TableFunc),
}

/// A named function with a fixed arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FuncSpec {
    pub name: String,
    pub arity: usize,
    pub kind: FuncKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FuncError {
    ArityMismatch { name: String, expected: usize, got: usize },
    TableMiss { name: String },
    BadArity { name: String, arity: usize },
}

impl core::fmt::Display for FuncError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FuncError::ArityMismatch { name, expected, got } => {
                write!(f, "function `{name}` expects {expected} arguments, got {got}")
            }
            FuncError::TableMiss { name } => {
                write!(f, "table function `{name}` applied outside its domain and has no default")
            }
            FuncError::BadArity { name, arity } => {
                write!(f, "function `{name}` cannot have arity {arity}")
            }
        }
    }
}

impl FuncSpec {
    pub fn new(name: impl Into<String>, arity: usize, kind: FuncKind) -> Result<Arc<FuncSpec>, FuncError> {
        let name = name.into();
        let ok = match &kind {
            FuncKind::Const(_) => arity == 0,
            FuncKind::Min | FuncKind::Max => arity >= 1,
            FuncKind::Neg => arity == 1,
            FuncKind::WAvg(_) | FuncKind::Diff | FuncKind::LeqIndicator => arity == 2,
            FuncKind::LexLeqIndicator(i) => arity == 4 && (*i == 1 || *i == 2),
            FuncKind::Table(_) => true,
        };
        if !ok {
            return Err(FuncError::BadArity { name, arity });
        }
        Ok(Arc::new(FuncSpec { name, arity, kind }))
    }

    /// Evaluates the function on exact rational arguments.
    pub fn apply(&self, args: &[Rat]) -> Result<Rat, FuncError> {
        if args.len() != self.arity {
            return Err(FuncError::ArityMismatch {
                name: self.name.clone(),
                expected: self.arity,
                got: args.len(),
            });
        }
        Ok(match &self.kind {
            FuncKind::Const(c) => *c,
            FuncKind::Min => *args.iter().min().expect("arity >= 1"),
            FuncKind::Max => *args.iter().max().expect("arity >= 1"),
            FuncKind::Neg => args[0].neg(),
            FuncKind::WAvg(lambda) => Rat::wavg(lambda, &args[0], &args[1]),
            FuncKind::Diff => args[0].diff(&args[1]),
            FuncKind::LeqIndicator => {
                if args[0] <= args[1] {
                    Rat::ONE
                } else {
                    Rat::ZERO
                }
            }
            FuncKind::LexLeqIndicator(i) => {
                let (a1, a2, b1, b2) = (args[0], args[1], args[2], args[3]);
                let (ai, bi, aj, bj) = if *i == 1 { (a1, b1, a2, b2) } else { (a2, b2, a1, b1) };
                if ai < bi || (ai == bi && aj <= bj) {
                    Rat::ONE
                } else {
                    Rat::ZERO
                }
            }
            FuncKind::Table(t) => match t.map.get(args) {
                Some(v) => *v,
                None => t.default.ok_or(FuncError::TableMiss { name: self.name.clone() })?,
            },
        })
    }
}

/// Named function kinds available to the parser. `min` and `max` take their
/// arity from the call site; the rest have it fixed by their kind.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    entries: BTreeMap<String, FuncKind>,
}

impl Registry {
    pub fn empty() -> Registry {
        Registry { entries: BTreeMap::new() }
    }

    /// Registry with the standard connectives: min, max, neg, diff, leq,
    /// lexleq1, lexleq2.
    pub fn builtin() -> Registry {
        let mut r = Registry::empty();
        r.insert("min", FuncKind::Min);
        r.insert("max", FuncKind::Max);
        r.insert("neg", FuncKind::Neg);
        r.insert("diff", FuncKind::Diff);
        r.insert("leq", FuncKind::LeqIndicator);
        r.insert("lexleq1", FuncKind::LexLeqIndicator(1));
        r.insert("lexleq2", FuncKind::LexLeqIndicator(2));
        r
    }

    pub fn insert(&mut self, name: impl Into<String>, kind: FuncKind) {
        self.entries.insert(name.into(), kind);
    }

    pub fn get(&self, name: &str) -> Option<&FuncKind> {
        self.entries.get(name)
    }

    /// Instantiates a `FuncSpec` for a call site with `arity` arguments.
    pub fn instantiate(&self, name: &str, arity: usize) -> Option<Result<Arc<FuncSpec>, FuncError>> {
        let kind = self.entries.get(name)?.clone();
        let fixed = match &kind {
            FuncKind::Const(_) => Some(0),
            FuncKind::Neg => Some(1),
            FuncKind::WAvg(_) | FuncKind::Diff | FuncKind::LeqIndicator => Some(2),
            FuncKind::LexLeqIndicator(_) => Some(4),
            FuncKind::Min | FuncKind::Max => None,
            FuncKind::Table(_) => None,
        };
        let arity = match fixed {
            Some(a) if a != arity => {
                return Some(Err(FuncError::ArityMismatch {
                    name: name.to_string(),
                    expected: a,
                    got: arity,
                }))
            }
            _ => arity,
        };
        Some(FuncSpec::new(name, arity, kind))
    }
}

/// The constant-1 function, used when desugaring ⊤ and F.
pub fn const_one() -> Arc<FuncSpec> {
    FuncSpec::new("1", 0, FuncKind::Const(Rat::ONE)).expect("const arity 0")
}

/// The constant function for an arbitrary rational literal.
pub fn const_rat(r: Rat) -> Arc<FuncSpec> {
    use alloc::format;
    FuncSpec::new(format!("{r}"), 0, FuncKind::Const(r)).expect("const arity 0")
}

/// Binary max, the ∨ connective.
pub fn or2() -> Arc<FuncSpec> {
    FuncSpec::new("max", 2, FuncKind::Max).expect("arity ok")
}

/// Binary min, the ∧ connective.
pub fn and2() -> Arc<FuncSpec> {
    FuncSpec::new("min", 2, FuncKind::Min).expect("arity ok")
}

/// 1 − x, the ¬ connective.
pub fn neg1() -> Arc<FuncSpec> {
    FuncSpec::new("neg", 1, FuncKind::Neg).expect("arity ok")
}

pub fn min_n(n: usize) -> Arc<FuncSpec> {
    FuncSpec::new("min", n, FuncKind::Min).expect("arity ok")
}

pub fn max_n(n: usize) -> Arc<FuncSpec> {
    FuncSpec::new("max", n, FuncKind::Max).expect("arity ok")
}

pub fn leq2() -> Arc<FuncSpec> {
    FuncSpec::new("leq", 2, FuncKind::LeqIndicator).expect("arity ok")
}

pub fn diff2() -> Arc<FuncSpec> {
    FuncSpec::new("diff", 2, FuncKind::Diff).expect("arity ok")
}

pub fn wavg(lambda: Rat) -> Arc<FuncSpec> {
    use alloc::format;
    FuncSpec::new(format!("wavg[{lambda}]"), 2, FuncKind::WAvg(lambda)).expect("arity ok")
}

pub fn lexleq(i: u8) -> Arc<FuncSpec> {
    use alloc::format;
    FuncSpec::new(format!("lexleq{i}"), 4, FuncKind::LexLeqIndicator(i)).expect("arity ok")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_truth_tables() {
        // On {0,1}, min/max/neg are ∧/∨/¬.
        let bools = [Rat::ZERO, Rat::ONE];
        for a in bools {
            for b in bools {
                let expect_and = if a.is_one() && b.is_one() { Rat::ONE } else { Rat::ZERO };
                let expect_or = if a.is_one() || b.is_one() { Rat::ONE } else { Rat::ZERO };
                assert_eq!(and2().apply(&[a, b]).unwrap(), expect_and);
                assert_eq!(or2().apply(&[a, b]).unwrap(), expect_or);
            }
            let expect_not = if a.is_one() { Rat::ZERO } else { Rat::ONE };
            assert_eq!(neg1().apply(&[a]).unwrap(), expect_not);
        }
    }

    #[test]
    fn wavg_grant_values() {
        let f = wavg(Rat::new(2, 3).unwrap());
        assert_eq!(f.apply(&[Rat::ONE, Rat::ONE]).unwrap(), Rat::ONE);
        assert_eq!(f.apply(&[Rat::ONE, Rat::ZERO]).unwrap(), Rat::new(2, 3).unwrap());
    }

    #[test]
    fn neg_example() {
        assert_eq!(
            neg1().apply(&[Rat::new(1, 3).unwrap()]).unwrap(),
            Rat::new(2, 3).unwrap()
        );
    }

    #[test]
    fn table_miss() {
        let t = TableFunc { map: BTreeMap::new(), default: None };
        let f = FuncSpec::new("t", 1, FuncKind::Table(t)).unwrap();
        assert!(matches!(f.apply(&[Rat::ZERO]), Err(FuncError::TableMiss { .. })));
        let t = TableFunc { map: BTreeMap::new(), default: Some(Rat::ONE) };
        let f = FuncSpec::new("t", 1, FuncKind::Table(t)).unwrap();
        assert_eq!(f.apply(&[Rat::ZERO]).unwrap(), Rat::ONE);
    }

    #[test]
    fn arity_checked() {
        assert!(matches!(neg1().apply(&[]), Err(FuncError::ArityMismatch { .. })));
        assert!(FuncSpec::new("neg", 2, FuncKind::Neg).is_err());
    }

    #[test]
    fn lexleq_cases() {
        let f = lexleq(1);
        let h = Rat::new(1, 2).unwrap();
        // (0, 1) vs (1/2, 0): first components 0 < 1/2.
        assert_eq!(f.apply(&[Rat::ZERO, Rat::ONE, h, Rat::ZERO]).unwrap(), Rat::ONE);
        // ties on first, second decides
        assert_eq!(f.apply(&[h, Rat::ONE, h, Rat::ZERO]).unwrap(), Rat::ZERO);
        assert_eq!(f.apply(&[h, Rat::ZERO, h, Rat::ONE]).unwrap(), Rat::ONE);
        let g = lexleq(2);
        assert_eq!(g.apply(&[Rat::ONE, Rat::ZERO, Rat::ZERO, h]).unwrap(), Rat::ONE);
    }
}
