use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::Zero;

use crate::rational::Rational;

/// A finite rational combination of basis keys.
///
/// Zero coefficients are never stored, and iteration follows the key order,
/// so two equal vectors always have identical entry sequences.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVec<K: Ord> {
    entries: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for SparseVec<K> {
    fn default() -> Self {
        Self { entries: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(key: K) -> Self {
        Self::term(key, Rational::from_integer(1.into()))
    }

    pub fn term(key: K, coeff: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(key, coeff);
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Rational)>>(terms: I) -> Self {
        let mut v = Self::zero();
        for (k, c) in terms {
            v.add_term(k, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &K) -> Option<&Rational> {
        self.entries.get(key)
    }

    pub fn coeff(&self, key: &K) -> Rational {
        self.entries.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Rational> {
        self.entries.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Rational> {
        self.entries.keys()
    }

    /// Greatest key with a nonzero coefficient.
    pub fn leading(&self) -> Option<(&K, &Rational)> {
        self.entries.last_key_value()
    }

    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.entries.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.entries {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn scale(&mut self, c: &Rational) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for v in self.entries.values_mut() {
            *v *= c;
        }
    }

    /// Keeps the entries whose key satisfies `keep`.
    pub fn filter<F: Fn(&K) -> bool>(&self, keep: F) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Relabels keys; coefficients of keys that collide are summed.
    pub fn map_keys<L: Ord + Clone, F: Fn(&K) -> L>(&self, f: F) -> SparseVec<L> {
        SparseVec::from_terms(self.entries.iter().map(|(k, v)| (f(k), v.clone())))
    }

    /// Linear extension of `f` defined on keys.
    pub fn flat_map<L: Ord + Clone, F: FnMut(&K) -> SparseVec<L>>(&self, mut f: F) -> SparseVec<L> {
        let mut out = SparseVec::zero();
        for (k, c) in &self.entries {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Pairing with a coefficient function on keys.
    pub fn dot_with<F: Fn(&K) -> Rational>(&self, f: F) -> Rational {
        self.entries.iter().fold(Rational::zero(), |acc, (k, v)| acc + v * f(k))
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for SparseVec<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

impl<'a, K: Ord> IntoIterator for &'a SparseVec<K> {
    type Item = (&'a K, &'a Rational);
    type IntoIter = btree_map::Iter<'a, K, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

impl<K: Ord + Clone> AddAssign<&SparseVec<K>> for SparseVec<K> {
    fn add_assign(&mut self, rhs: &SparseVec<K>) {
        for (k, v) in &rhs.entries {
            self.add_term(k.clone(), v.clone());
        }
    }
}

impl<K: Ord + Clone> SubAssign<&SparseVec<K>> for SparseVec<K> {
    fn sub_assign(&mut self, rhs: &SparseVec<K>) {
        for (k, v) in &rhs.entries {
            self.add_term(k.clone(), -v.clone());
        }
    }
}

impl<K: Ord + Clone> Add for &SparseVec<K> {
    type Output = SparseVec<K>;
    fn add(self, rhs: Self) -> SparseVec<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for &SparseVec<K> {
    type Output = SparseVec<K>;
    fn sub(self, rhs: Self) -> SparseVec<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Ord + Clone> Neg for &SparseVec<K> {
    type Output = SparseVec<K>;
    fn neg(self) -> SparseVec<K> {
        SparseVec {
            entries: self.entries.iter().map(|(k, v)| (k.clone(), -v.clone())).collect(),
        }
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for SparseVec<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(k, v)| (k, crate::rational::to_string(v))))
            .finish()
    }
}
