//! Truncated formal power series with rational or vector coefficients.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::monomial::Vector;
use crate::rational::{frac_binom, Rational};

pub trait Coeff: Clone + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, c: &Rational);
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        *self += other * c;
    }
}

impl Coeff for Vector {
    fn zero() -> Self {
        Vector::zero()
    }
    fn is_zero(&self) -> bool {
        Vector::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        Vector::add_scaled(self, other, c)
    }
}

/// `sum_{0 <= e <= degree} c_e x^e`, exact in every kept degree.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<C> {
    degree: u32,
    terms: BTreeMap<u32, C>,
}

impl<C: Coeff> PowerSeries<C> {
    pub fn zero(degree: u32) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn constant(c: C, degree: u32) -> Self {
        let mut s = Self::zero(degree);
        s.add_term(0, c);
        s
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn add_term(&mut self, e: u32, c: C) {
        if e > self.degree || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(C::zero);
        slot.add_scaled(&c, &Rational::one());
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: u32) -> C {
        self.terms.get(&e).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (e, v) in &other.terms {
            let mut scaled = C::zero();
            scaled.add_scaled(v, c);
            self.add_term(*e, scaled);
        }
    }

    /// Product with a scalar series, truncated at the smaller degree.
    pub fn times(&self, s: &PowerSeries<Rational>) -> Self {
        let degree = self.degree.min(s.degree);
        let mut out = Self::zero(degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &s.terms {
                if e1 + e2 > degree {
                    break;
                }
                let mut scaled = C::zero();
                scaled.add_scaled(c1, c2);
                out.add_term(e1 + e2, scaled);
            }
        }
        out
    }

    /// Applies `f` coefficientwise.
    pub fn map<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> PowerSeries<D> {
        let mut out = PowerSeries::zero(self.degree);
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out
    }
}

impl PowerSeries<Rational> {
    /// `(1 + a x)^alpha`.
    pub fn binomial(alpha: &Rational, a: &Rational, degree: u32) -> Self {
        let mut out = Self::zero(degree);
        let mut apow = Rational::one();
        for e in 0..=degree {
            out.add_term(e, frac_binom(alpha, e as u64) * &apow);
            apow *= a;
        }
        out
    }

    pub fn monomial(e: u32, c: Rational, degree: u32) -> Self {
        let mut s = Self::zero(degree);
        s.add_term(e, c);
        s
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(Rational::one(), self.degree);
        for _ in 0..k {
            out = out.times(self);
        }
        out
    }
}
