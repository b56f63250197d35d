//! Exact rational scalars and their `"p/q"` wire format.
//!
//! Every distance, scale and map value in this crate is a [`Rat`]; floats
//! never appear. Overflow checks stay on in all build profiles, so an
//! out-of-range intermediate panics instead of wrapping.

use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Exact rational scalar.
pub type Rat = Ratio<i64>;

/// Shorthand for `p/q` (panics on `q == 0`).
pub fn rat(p: i64, q: i64) -> Rat {
    Ratio::new(p, q)
}

/// Shorthand for an integer rational.
pub fn rint(n: i64) -> Rat {
    Ratio::from_integer(n)
}

/// `2^k` as a rational, `k` may be negative.
pub fn pow2(k: i32) -> Rat {
    if k >= 0 {
        Ratio::from_integer(1i64 << k)
    } else {
        Ratio::new(1, 1i64 << (-k))
    }
}

/// Largest multiple of `step` that is `<= x` (the bracket used by the
/// rounding cascades; `step > 0`).
pub fn floor_to_multiple(x: Rat, step: Rat) -> Rat {
    assert!(step.is_positive(), "floor_to_multiple needs step > 0");
    (x / step).floor() * step
}

/// True iff `x` is `p / 2^q` in lowest terms.
pub fn is_dyadic(x: Rat) -> bool {
    let mut d = *x.denom();
    while d % 2 == 0 {
        d /= 2;
    }
    d == 1
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rat(x: Rat) -> String {
    if x.denom() == &1 {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    match s.split_once('/') {
        None => i64::from_str(s)
            .map(Ratio::from_integer)
            .map_err(|e| format!("bad rational {s:?}: {e}")),
        Some((p, q)) => {
            let p = i64::from_str(p.trim()).map_err(|e| format!("bad numerator {p:?}: {e}"))?;
            let q = i64::from_str(q.trim()).map_err(|e| format!("bad denominator {q:?}: {e}"))?;
            if q == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Ratio::new(p, q))
        }
    }
}

/// Serde wrapper emitting rationals as exact `"p/q"` strings.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct RatStr(pub Rat);

impl From<Rat> for RatStr {
    fn from(r: Rat) -> Self {
        RatStr(r)
    }
}

impl From<RatStr> for Rat {
    fn from(r: RatStr) -> Self {
        r.0
    }
}

impl fmt::Display for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rat(self.0))
    }
}

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rat(self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map(RatStr).map_err(serde::de::Error::custom)
    }
}

/// Min over a nonempty iterator of rationals.
pub fn rat_min(it: impl IntoIterator<Item = Rat>) -> Option<Rat> {
    it.into_iter().min()
}

/// Max over a nonempty iterator of rationals.
pub fn rat_max(it: impl IntoIterator<Item = Rat>) -> Option<Rat> {
    it.into_iter().max()
}

/// A value that is either a finite rational or `+∞` (used by Lebesgue
/// numbers and depth computations where `X \ U` can be empty).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Extended {
    Finite(Rat),
    Infinite,
}

impl Extended {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<Rat> {
        match self {
            Extended::Finite(r) => Some(*r),
            Extended::Infinite => None,
        }
    }

    /// `self > x`, with `∞ > x` for every finite `x`.
    pub fn gt(&self, x: Rat) -> bool {
        match self {
            Extended::Finite(r) => *r > x,
            Extended::Infinite => true,
        }
    }

    /// `self >= x`, with `∞ >= x` for every finite `x`.
    pub fn ge(&self, x: Rat) -> bool {
        match self {
            Extended::Finite(r) => *r >= x,
            Extended::Infinite => true,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Extended::*;
        match (self, other) {
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

pub fn lcm(a: i64, b: i64) -> i64 {
    num_integer::lcm(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-7", "1/2", "22/7", "-5/8"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(r), s);
        }
        assert_eq!(parse_rat("4/8").unwrap(), rat(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn floor_to_multiple_brackets() {
        assert_eq!(floor_to_multiple(rat(7, 2), rint(2)), rint(2));
        assert_eq!(floor_to_multiple(rint(4), rint(2)), rint(4));
        assert_eq!(floor_to_multiple(rat(3, 4), rat(1, 2)), rat(1, 2));
        assert_eq!(floor_to_multiple(rat(-1, 4), rat(1, 2)), rat(-1, 2));
    }

    #[test]
    fn dyadic_detection() {
        assert!(is_dyadic(rat(3, 8)));
        assert!(is_dyadic(rint(5)));
        assert!(!is_dyadic(rat(1, 3)));
    }

    #[test]
    fn pow2_both_signs() {
        assert_eq!(pow2(3), rint(8));
        assert_eq!(pow2(0), rint(1));
        assert_eq!(pow2(-2), rat(1, 4));
    }

    #[test]
    fn extended_ordering() {
        assert!(Extended::Infinite.gt(rint(1000)));
        assert!(Extended::Finite(rint(3)).gt(rint(2)));
        assert!(!Extended::Finite(rint(2)).gt(rint(2)));
        assert!(Extended::Finite(rint(2)).ge(rint(2)));
        assert!(Extended::Infinite > Extended::Finite(rint(1)));
    }
}
