//! Exact rational scalars.
//!
//! Every coefficient in the engine is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `alpha (alpha - 1) ... (alpha - i + 1) / i!`, with the empty product for `i = 0`.
pub fn frac_binom(alpha: &Rational, i: u64) -> Rational {
    let mut acc = Rational::one();
    let mut top = alpha.clone();
    for k in 1..=i {
        acc *= &top;
        acc /= int(k as i64);
        top -= Rational::one();
    }
    acc
}

pub fn factorial(k: u64) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

/// `(-1)^k` as a rational.
pub fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Renders `p/q`, or `p` for integers.
pub fn to_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Converts an integral rational to `i64`.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if !q.is_integer() {
        return None;
    }
    i64::try_from(q.numer()).ok()
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_of_half_integers() {
        assert_eq!(frac_binom(&frac(3, 2), 2), frac(3, 8));
        assert_eq!(frac_binom(&frac(3, 2), 4), frac(3, 128));
        assert_eq!(frac_binom(&frac(7, 3), 0), int(1));
        assert_eq!(frac_binom(&int(-1), 5), int(-1));
        assert_eq!(frac_binom(&int(4), 6), int(0));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse("3/6"), Some(frac(1, 2)));
        assert_eq!(parse("-4"), Some(int(-4)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
        assert_eq!(to_string(&frac(-3, 128)), "-3/128");
        assert_eq!(to_string(&int(7)), "7");
    }
}
