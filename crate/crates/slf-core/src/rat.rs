//! Exact rationals in [0,1].
//!
//! Every satisfaction value, weight and threshold in the crate is a `Rat`.
//! Floats are banned from the semantics: all comparisons are exact.

use core::cmp::Ordering;
use core::fmt;

/// A rational number in [0,1], stored in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rat {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn reduce128(num: u128, den: u128) -> Rat {
    debug_assert!(den > 0 && num <= den);
    let mut a = num;
    let mut b = den;
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    let g = if a == 0 { 1 } else { a };
    let (n, d) = (num / g, den / g);
    assert!(
        d <= u64::MAX as u128,
        "rational denominator overflow (reduced denominator exceeds u64)"
    );
    Rat {
        num: n as u64,
        den: d as u64,
    }
}

impl Rat {
    pub const ZERO: Rat = Rat { num: 0, den: 1 };
    pub const ONE: Rat = Rat { num: 1, den: 1 };

    /// Builds `num/den`; returns `None` unless `0 <= num/den <= 1`.
    pub fn new(num: u64, den: u64) -> Option<Rat> {
        if den == 0 || num > den {
            return None;
        }
        let g = gcd(num, den);
        Some(Rat {
            num: num / g,
            den: den / g,
        })
    }

    /// Parses a decimal literal such as `0.25` or `1` exactly.
    pub fn from_decimal_str(s: &str) -> Option<Rat> {
        let s = s.trim();
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let int_val: u128 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().ok()?
        };
        if frac_part.len() > 18 {
            return None;
        }
        let mut den: u128 = 1;
        for _ in 0..frac_part.len() {
            den *= 10;
        }
        let frac_val: u128 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().ok()?
        };
        let num = int_val.checked_mul(den)?.checked_add(frac_val)?;
        if num > den {
            return None;
        }
        Some(reduce128(num, den))
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_boolean(&self) -> bool {
        self.is_zero() || self.is_one()
    }

    /// 1 − x.
    pub fn neg(&self) -> Rat {
        Rat {
            num: self.den - self.num,
            den: self.den,
        }
    }

    /// max{0, x − y}.
    pub fn diff(&self, other: &Rat) -> Rat {
        if self <= other {
            return Rat::ZERO;
        }
        let n = (self.num as u128) * (other.den as u128) - (other.num as u128) * (self.den as u128);
        let d = (self.den as u128) * (other.den as u128);
        reduce128(n, d)
    }

    /// λ·x + (1−λ)·y.
    pub fn wavg(lambda: &Rat, x: &Rat, y: &Rat) -> Rat {
        // λ x + (1-λ) y over common denominator lden · xden · yden
        let ld = lambda.den as u128;
        let xd = x.den as u128;
        let yd = y.den as u128;
        let n = (lambda.num as u128) * (x.num as u128) * yd
            + ((lambda.den - lambda.num) as u128) * (y.num as u128) * xd;
        let d = ld * xd * yd;
        reduce128(n, d)
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        let l = (self.num as u128) * (other.den as u128);
        let r = (other.num as u128) * (self.den as u128);
        l.cmp(&r)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_reduction() {
        assert_eq!(Rat::new(2, 4).unwrap(), Rat::new(1, 2).unwrap());
        assert_eq!(Rat::new(0, 7).unwrap(), Rat::ZERO);
        assert_eq!(Rat::new(7, 7).unwrap(), Rat::ONE);
        assert!(Rat::new(3, 2).is_none());
        assert!(Rat::new(1, 0).is_none());
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(Rat::from_decimal_str("0.5").unwrap(), Rat::new(1, 2).unwrap());
        assert_eq!(Rat::from_decimal_str("0.25").unwrap(), Rat::new(1, 4).unwrap());
        assert_eq!(Rat::from_decimal_str("1").unwrap(), Rat::ONE);
        assert_eq!(Rat::from_decimal_str("1.0").unwrap(), Rat::ONE);
        assert_eq!(Rat::from_decimal_str("0.3").unwrap(), Rat::new(3, 10).unwrap());
        assert!(Rat::from_decimal_str("1.5").is_none());
        assert!(Rat::from_decimal_str("x").is_none());
    }

    #[test]
    fn order_is_rational_order() {
        let third = Rat::new(1, 3).unwrap();
        let half = Rat::new(1, 2).unwrap();
        assert!(third < half);
        assert!(Rat::ZERO < third);
        assert!(half < Rat::ONE);
    }

    #[test]
    fn neg_diff_wavg() {
        let third = Rat::new(1, 3).unwrap();
        assert_eq!(third.neg(), Rat::new(2, 3).unwrap());
        assert_eq!(Rat::ONE.neg(), Rat::ZERO);
        let q = Rat::new(3, 4).unwrap();
        assert_eq!(q.diff(&third), Rat::new(5, 12).unwrap());
        assert_eq!(third.diff(&q), Rat::ZERO);
        let l = Rat::new(2, 3).unwrap();
        assert_eq!(Rat::wavg(&l, &Rat::ONE, &Rat::ONE), Rat::ONE);
        assert_eq!(Rat::wavg(&l, &Rat::ONE, &Rat::ZERO), Rat::new(2, 3).unwrap());
        assert_eq!(Rat::wavg(&l, &Rat::ZERO, &Rat::ONE), Rat::new(1, 3).unwrap());
    }
}
