//! Dense Gaussian elimination over the rationals, used only as an
//! independent oracle for the sparse routines.

use num_traits::{One, Zero};

use super::SparseVec;
use crate::rational::Rational;

/// Rank of a dense matrix given by rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = Rational::one() / &m[rank][col];
        for x in m[rank].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot = m[rank].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `v` is a rational combination of `rows`.
pub fn in_span(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    rank(&with) == rank(rows)
}

/// Writes sparse vectors as dense rows over the union of their keys.
pub fn densify<K: Ord + Clone>(vecs: &[&SparseVec<K>]) -> (Vec<K>, Vec<Vec<Rational>>) {
    let mut keys: Vec<K> = vecs.iter().flat_map(|v| v.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let rows = vecs
        .iter()
        .map(|v| keys.iter().map(|k| v.coeff(k)).collect())
        .collect();
    (keys, rows)
}
