use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;

use crate::rational::{frac, Rational};
use crate::Error;

/// An element `num / t` of `(1/T)Z`.
///
/// `floor` and `bar` split the value as `floor + bar / t` with
/// `bar` in `0..t`. Equality, ordering and hashing are by value, so `2/2`
/// and `1/1` compare equal.
#[derive(Clone, Copy, Debug)]
pub struct FracIndex {
    num: i64,
    t: u32,
}

impl FracIndex {
    pub fn new(num: i64, t: u32) -> Self {
        assert!(t > 0, "denominator must be positive");
        Self { num, t }
    }

    pub fn integer(k: i64, t: u32) -> Self {
        Self::new(k * t as i64, t)
    }

    pub fn zero(t: u32) -> Self {
        Self::new(0, t)
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn t(self) -> u32 {
        self.t
    }

    pub fn floor(self) -> i64 {
        self.num.div_euclid(self.t as i64)
    }

    pub fn bar(self) -> u32 {
        self.num.rem_euclid(self.t as i64) as u32
    }

    pub fn is_integer(self) -> bool {
        self.bar() == 0
    }

    /// The integer value, if integral.
    pub fn as_integer(self) -> Option<i64> {
        self.is_integer().then(|| self.floor())
    }

    pub fn is_nonnegative(self) -> bool {
        self.num >= 0
    }

    pub fn to_rational(self) -> Rational {
        frac(self.num, self.t as i64)
    }

    /// Re-expresses the value over denominator `t`, if possible.
    pub fn with_t(self, t: u32) -> Option<Self> {
        let scaled = self.num * t as i64;
        (scaled % self.t as i64 == 0).then(|| Self::new(scaled / self.t as i64, t))
    }

    pub fn add_int(self, k: i64) -> Self {
        Self::new(self.num + k * self.t as i64, self.t)
    }

    fn common(self, other: Self) -> (i64, i64, u32) {
        let t = self.t.lcm(&other.t);
        let a = self.num * (t / self.t) as i64;
        let b = other.num * (t / other.t) as i64;
        (a, b, t)
    }

    fn normalized(self) -> (i64, u32) {
        let g = self.num.unsigned_abs().gcd(&(self.t as u64)).max(1);
        (self.num / g as i64, self.t / g as u32)
    }

    /// Parses `p`, `-p` or `p/q` as an element of `(1/t)Z`.
    pub fn parse(text: &str, t: u32) -> Result<Self, Error> {
        let q = crate::rational::parse(text).ok_or_else(|| Error::MalformedFraction(text.to_string()))?;
        let scaled = q * crate::rational::int(t as i64);
        let num = crate::rational::to_i64(&scaled)
            .ok_or_else(|| Error::MalformedFraction(format!("{text} is not in (1/{t})Z")))?;
        Ok(Self::new(num, t))
    }
}

impl PartialEq for FracIndex {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.common(*other);
        a == b
    }
}

impl Eq for FracIndex {}

impl Hash for FracIndex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.normalized().hash(state);
    }
}

impl PartialOrd for FracIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FracIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.common(*other);
        a.cmp(&b)
    }
}

impl Add for FracIndex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b, t) = self.common(rhs);
        Self::new(a + b, t)
    }
}

impl Sub for FracIndex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let (a, b, t) = self.common(rhs);
        Self::new(a - b, t)
    }
}

impl Neg for FracIndex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.num, self.t)
    }
}

impl fmt::Display for FracIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.normalized();
        if den == 1 {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn floor_and_bar() {
        let h = FracIndex::new(3, 2);
        assert_eq!((h.floor(), h.bar()), (1, 1));
        let neg = FracIndex::new(-1, 2);
        assert_eq!((neg.floor(), neg.bar()), (-1, 1));
        assert_eq!(FracIndex::integer(2, 2).bar(), 0);
    }

    #[test]
    fn value_semantics() {
        assert_eq!(FracIndex::new(2, 2), FracIndex::new(1, 1));
        assert!(FracIndex::new(1, 2) < FracIndex::new(1, 1));
        assert_eq!(FracIndex::new(1, 2) + FracIndex::new(1, 1), FracIndex::new(3, 2));
        assert_eq!(FracIndex::new(1, 2).to_string(), "1/2");
        assert_eq!(FracIndex::new(4, 2).to_string(), "2");
    }

    #[test]
    fn parse_respects_denominator() {
        assert_eq!(FracIndex::parse("1/2", 2).unwrap(), FracIndex::new(1, 2));
        assert!(FracIndex::parse("1/2", 1).is_err());
        assert!(FracIndex::parse("1/x", 2).is_err());
        assert_eq!(FracIndex::parse("3", 2).unwrap(), FracIndex::new(6, 2));
    }

    proptest! {
        #[test]
        fn decomposition_recovers_value(num in -50i64..50, t in 1u32..4) {
            let x = FracIndex::new(num, t);
            prop_assert!(x.bar() < t);
            prop_assert_eq!(x.floor() * t as i64 + x.bar() as i64, num);
        }
    }
}
