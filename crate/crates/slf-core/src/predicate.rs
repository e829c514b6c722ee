//! Predicates over [0,1]: finite unions of rational-endpoint intervals.
//!
//! The model-checking question is always "is the satisfaction value in P";
//! `Predicate` is the finite representation of such a P, typically a
//! threshold like `>= 2/3`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::rat::Rat;

/// One interval with open/closed endpoints, within [0,1].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
    pub lo_strict: bool,
    pub hi_strict: bool,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && (self.lo_strict || self.hi_strict))
    }

    fn contains(&self, v: &Rat) -> bool {
        let above = if self.lo_strict { *v > self.lo } else { *v >= self.lo };
        let below = if self.hi_strict { *v < self.hi } else { *v <= self.hi };
        above && below
    }
}

/// A finite union of disjoint, sorted intervals within [0,1].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Predicate {
    intervals: Vec<Interval>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateParseError(pub String);

impl fmt::Display for PredicateParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad predicate: {}", self.0)
    }
}

impl Predicate {
    pub fn empty() -> Predicate {
        Predicate { intervals: Vec::new() }
    }

    /// The whole [0,1].
    pub fn full() -> Predicate {
        Predicate::interval(Rat::ZERO, false, Rat::ONE, false)
    }

    pub fn singleton(v: Rat) -> Predicate {
        Predicate::interval(v, false, v, false)
    }

    /// [v, 1].
    pub fn at_least(v: Rat) -> Predicate {
        Predicate::interval(v, false, Rat::ONE, false)
    }

    /// (v, 1].
    pub fn above(v: Rat) -> Predicate {
        Predicate::interval(v, true, Rat::ONE, false)
    }

    /// [0, v].
    pub fn at_most(v: Rat) -> Predicate {
        Predicate::interval(Rat::ZERO, false, v, false)
    }

    /// [0, v).
    pub fn below(v: Rat) -> Predicate {
        Predicate::interval(Rat::ZERO, false, v, true)
    }

    pub fn interval(lo: Rat, lo_strict: bool, hi: Rat, hi_strict: bool) -> Predicate {
        let iv = Interval { lo, hi, lo_strict, hi_strict };
        if iv.is_empty() {
            Predicate::empty()
        } else {
            Predicate { intervals: alloc::vec![iv] }
        }
    }

    pub fn union(&self, other: &Predicate) -> Predicate {
        let mut ivs: Vec<Interval> = self
            .intervals
            .iter()
            .chain(other.intervals.iter())
            .copied()
            .collect();
        ivs.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.lo_strict.cmp(&b.lo_strict)));
        let mut out: Vec<Interval> = Vec::new();
        for iv in ivs {
            match out.last_mut() {
                Some(last) if joins(last, &iv) => {
                    // extend the right end if iv reaches further
                    if iv.hi > last.hi || (iv.hi == last.hi && !iv.hi_strict) {
                        last.hi = iv.hi;
                        last.hi_strict = iv.hi_strict;
                    }
                }
                _ => out.push(iv),
            }
        }
        return Predicate { intervals: out };

        fn joins(a: &Interval, b: &Interval) -> bool {
            // b.lo >= a.lo by sort order; they join unless b starts strictly
            // after a ends (with an actual gap, possibly a single point).
            if b.lo < a.hi {
                return true;
            }
            if b.lo > a.hi {
                return false;
            }
            // b.lo == a.hi: a point gap remains only if both ends are open
            !(a.hi_strict && b.lo_strict)
        }
    }

    pub fn contains(&self, v: &Rat) -> bool {
        self.intervals.iter().any(|iv| iv.contains(v))
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// The members of `values` that satisfy the predicate, in order.
    pub fn filter<'a>(&self, values: impl IntoIterator<Item = &'a Rat>) -> Vec<Rat> {
        values.into_iter().filter(|v| self.contains(v)).copied().collect()
    }

    /// Parses forms like `>=1/2`, `>0.3`, `<=1`, `<2/3`, `=1`, `[a,b]`,
    /// `(a,b]`, unioned with `|`.
    pub fn parse(text: &str) -> Result<Predicate, PredicateParseError> {
        let mut out = Predicate::empty();
        for part in text.split('|') {
            out = out.union(&parse_part(part.trim())?);
        }
        return Ok(out);

        fn parse_rat(s: &str) -> Result<Rat, PredicateParseError> {
            let s = s.trim();
            if let Some((n, d)) = s.split_once('/') {
                let n: u64 = n.trim().parse().map_err(|_| bad(s))?;
                let d: u64 = d.trim().parse().map_err(|_| bad(s))?;
                return Rat::new(n, d).ok_or_else(|| bad(s));
            }
            Rat::from_decimal_str(s).ok_or_else(|| bad(s))
        }

        fn bad(s: &str) -> PredicateParseError {
            PredicateParseError(String::from(s))
        }

        fn parse_part(s: &str) -> Result<Predicate, PredicateParseError> {
            if s.is_empty() {
                return Err(bad(s));
            }
            if let Some(rest) = s.strip_prefix(">=") {
                return Ok(Predicate::at_least(parse_rat(rest)?));
            }
            if let Some(rest) = s.strip_prefix("<=") {
                return Ok(Predicate::at_most(parse_rat(rest)?));
            }
            if let Some(rest) = s.strip_prefix('>') {
                return Ok(Predicate::above(parse_rat(rest)?));
            }
            if let Some(rest) = s.strip_prefix('<') {
                return Ok(Predicate::below(parse_rat(rest)?));
            }
            if let Some(rest) = s.strip_prefix('=') {
                return Ok(Predicate::singleton(parse_rat(rest)?));
            }
            let lo_strict = match s.chars().next() {
                Some('[') => false,
                Some('(') => true,
                _ => return Err(bad(s)),
            };
            let hi_strict = match s.chars().last() {
                Some(']') => false,
                Some(')') => true,
                _ => return Err(bad(s)),
            };
            let inner = &s[1..s.len() - 1];
            let (a, b) = inner.split_once(',').ok_or_else(|| bad(s))?;
            Ok(Predicate::interval(
                parse_rat(a)?,
                lo_strict,
                parse_rat(b)?,
                hi_strict,
            ))
        }
    }

    /// Stable text form usable as a cache key.
    pub fn key(&self) -> String {
        use alloc::string::ToString;
        self.to_string()
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "(empty)");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(
                f,
                "{}{},{}{}",
                if iv.lo_strict { '(' } else { '[' },
                iv.lo,
                iv.hi,
                if iv.hi_strict { ')' } else { ']' }
            )?;
        }
        Ok(())
    }
}
