use std::cmp::Ordering;
use std::fmt;

use crate::linalg::SparseVec;

/// A PBW word of creation modes applied to the vacuum.
///
/// Parts are stored in descending order; the leftmost (largest) part is the
/// outermost operator. For the Heisenberg model a part `k` stands for
/// `a_{-k}`, for the Virasoro model it stands for `L(-k)` with `k >= 2`.
/// The empty word is the vacuum.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

pub type Vector = SparseVec<Monomial>;

impl Monomial {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    pub fn from_parts(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Splits off the outermost part.
    pub fn split_first(&self) -> Option<(u32, Monomial)> {
        let (&k, rest) = self.0.split_first()?;
        Some((k, Monomial(rest.to_vec())))
    }

    pub fn with_part(&self, k: u32) -> Monomial {
        let mut parts = self.0.clone();
        let pos = parts.partition_point(|&p| p > k);
        parts.insert(pos, k);
        Monomial(parts)
    }

    pub fn prepend(&self, k: u32) -> Monomial {
        debug_assert!(self.0.first().is_none_or(|&p| p <= k));
        let mut parts = Vec::with_capacity(self.0.len() + 1);
        parts.push(k);
        parts.extend_from_slice(&self.0);
        Monomial(parts)
    }

    pub fn count(&self, k: u32) -> usize {
        self.0.iter().filter(|&&p| p == k).count()
    }

    pub fn without_part(&self, k: u32) -> Option<Monomial> {
        let pos = self.0.iter().position(|&p| p == k)?;
        let mut parts = self.0.clone();
        parts.remove(pos);
        Some(Monomial(parts))
    }

    pub fn as_vector(&self) -> Vector {
        Vector::unit(self.clone())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Partitions of `total` into parts `>= min_part`, each sorted descending.
pub fn partitions(total: u32, min_part: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        let hi = max.min(rest);
        for k in (min..=hi).rev() {
            cur.push(k);
            go(rest - k, k, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, min_part.max(1), &mut Vec::new(), &mut out);
    out
}

/// Partitions of `total` into odd parts.
pub fn odd_partitions(total: u32) -> Vec<Vec<u32>> {
    partitions(total, 1)
        .into_iter()
        .filter(|p| p.iter().all(|k| k % 2 == 1))
        .collect()
}
