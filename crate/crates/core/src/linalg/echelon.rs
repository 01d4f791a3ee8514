use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::SparseVec;
use crate::rational::Rational;

#[derive(Clone, Debug)]
struct Row<K: Ord> {
    vec: SparseVec<K>,
    /// Expression of `vec` in terms of the tagged inputs (empty when untracked).
    trail: SparseVec<usize>,
}

/// Reduced row echelon basis of a span.
///
/// The pivot of a row is its greatest key. Every row has coefficient 1 at its
/// pivot and coefficient 0 at every other pivot, so membership is decided by a
/// single pass over the entries of the candidate vector.
///
/// A tracked basis additionally records, for every row, the combination of
/// tagged input vectors it came from; [`EchelonBasis::certificate`] turns this
/// into a re-checkable proof of membership.
#[derive(Clone, Debug)]
pub struct EchelonBasis<K: Ord> {
    rows: BTreeMap<K, Row<K>>,
    track: bool,
}

impl<K: Ord + Clone> Default for EchelonBasis<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> EchelonBasis<K> {
    pub fn new() -> Self {
        Self { rows: BTreeMap::new(), track: false }
    }

    /// A basis that keeps the input trail of every row.
    pub fn tracked() -> Self {
        Self { rows: BTreeMap::new(), track: true }
    }

    pub fn is_tracked(&self) -> bool {
        self.track
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values().map(|r| &r.vec)
    }

    pub fn row(&self, pivot: &K) -> Option<&SparseVec<K>> {
        self.rows.get(pivot).map(|r| &r.vec)
    }

    pub fn is_pivot(&self, key: &K) -> bool {
        self.rows.contains_key(key)
    }

    /// Residue of `v` after elimination by every row; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut residue = v.clone();
        for (k, c) in v {
            if let Some(row) = self.rows.get(k) {
                residue.add_scaled(&row.vec, &-c.clone());
            }
        }
        residue
    }

    fn reduce_with_trail(&self, v: &SparseVec<K>, trail: &SparseVec<usize>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut residue = v.clone();
        let mut residue_trail = trail.clone();
        for (k, c) in v {
            if let Some(row) = self.rows.get(k) {
                let neg = -c.clone();
                residue.add_scaled(&row.vec, &neg);
                if self.track {
                    residue_trail.add_scaled(&row.trail, &neg);
                }
            }
        }
        (residue, residue_trail)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        self.insert_with_trail(v, SparseVec::zero())
    }

    /// Inserts `v`, recording it as input number `tag` in the row trails.
    pub fn insert_tagged(&mut self, v: &SparseVec<K>, tag: usize) -> bool {
        self.insert_with_trail(v, SparseVec::unit(tag))
    }

    fn insert_with_trail(&mut self, v: &SparseVec<K>, trail: SparseVec<usize>) -> bool {
        let (mut residue, mut residue_trail) = self.reduce_with_trail(v, &trail);
        let Some((pivot, lead)) = residue.leading() else {
            return false;
        };
        let pivot = pivot.clone();
        let inv = Rational::one() / lead;
        residue.scale(&inv);
        residue_trail.scale(&inv);
        for row in self.rows.values_mut() {
            let c = row.vec.coeff(&pivot);
            if c.is_zero() {
                continue;
            }
            let neg = -c;
            row.vec.add_scaled(&residue, &neg);
            if self.track {
                row.trail.add_scaled(&residue_trail, &neg);
            }
        }
        if !self.track {
            residue_trail = SparseVec::zero();
        }
        self.rows.insert(pivot, Row { vec: residue, trail: residue_trail });
        true
    }

    /// Coefficients expressing `v` through the tagged inputs, if `v` lies in the span.
    ///
    /// Only meaningful on a tracked basis.
    pub fn certificate(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let mut combo = SparseVec::zero();
        let mut residue = v.clone();
        for (k, c) in v {
            if let Some(row) = self.rows.get(k) {
                residue.add_scaled(&row.vec, &-c.clone());
                combo.add_scaled(&row.trail, c);
            }
        }
        residue.is_zero().then_some(combo)
    }

    /// Echelon basis of `{ w in span : every key of w satisfies keep }`.
    ///
    /// Re-echelonizes under an order in which every rejected key dominates
    /// every kept key; rows whose pivot is kept then involve kept keys only,
    /// and they span the intersection.
    pub fn window_intersection<F: Fn(&K) -> bool>(&self, keep: F) -> EchelonBasis<K> {
        let mut split: EchelonBasis<(bool, K)> = EchelonBasis { rows: BTreeMap::new(), track: self.track };
        for row in self.rows.values() {
            let relabeled = row.vec.map_keys(|k| (!keep(k), k.clone()));
            split.insert_with_trail(&relabeled, row.trail.clone());
        }
        let mut out = EchelonBasis { rows: BTreeMap::new(), track: self.track };
        for ((rejected, _), row) in split.rows {
            if rejected {
                continue;
            }
            let back = row.vec.map_keys(|(_, k)| k.clone());
            out.insert_with_trail(&back, row.trail);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Augmented<K> {
    Source(usize),
    Image(K),
}

/// Basis of `{ c : sum_j c_j images[j] = 0 }`, as combinations of input indices.
pub fn kernel<K: Ord + Clone>(images: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    let mut basis: EchelonBasis<Augmented<K>> = EchelonBasis::new();
    for (j, img) in images.iter().enumerate() {
        let mut aug = img.map_keys(|k| Augmented::Image(k.clone()));
        aug.add_term(Augmented::Source(j), Rational::one());
        basis.insert(&aug);
    }
    basis
        .rows
        .into_iter()
        .filter(|(pivot, _)| matches!(pivot, Augmented::Source(_)))
        .map(|(_, row)| {
            row.vec.map_keys(|k| match k {
                Augmented::Source(j) => *j,
                Augmented::Image(_) => unreachable!("kernel row with an image entry"),
            })
        })
        .collect()
}
