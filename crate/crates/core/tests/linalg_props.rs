use proptest::prelude::*;
use zhu_core::linalg::dense::{densify, in_span, rank};
use zhu_core::linalg::{kernel, EchelonBasis, SparseVec};
use zhu_core::rational::frac;
use zhu_core::Rational;

fn sparse(entries: &[(u32, i64, i64)]) -> SparseVec<u32> {
    SparseVec::from_terms(entries.iter().map(|&(k, p, q)| (k, frac(p, q))))
}

fn arb_vec(keys: u32) -> impl Strategy<Value = SparseVec<u32>> {
    prop::collection::vec((0..keys, -4i64..=4, 1i64..=3), 0..6).prop_map(|e| sparse(&e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reduce_agrees_with_dense_solver(rows in prop::collection::vec(arb_vec(12), 0..8), v in arb_vec(12)) {
        let mut basis = EchelonBasis::new();
        for r in &rows {
            basis.insert(r);
        }
        let mut all: Vec<&SparseVec<u32>> = rows.iter().collect();
        all.push(&v);
        let (_, dense) = densify(&all);
        let (target, generators) = dense.split_last().unwrap();
        prop_assert_eq!(basis.reduce(&v).is_zero(), in_span(generators, target));
        prop_assert_eq!(basis.rank(), rank(generators));
    }

    #[test]
    fn insert_is_idempotent(rows in prop::collection::vec(arb_vec(10), 1..8)) {
        let mut basis = EchelonBasis::new();
        for r in &rows {
            basis.insert(r);
        }
        let before = basis.rank();
        for r in &rows {
            prop_assert!(!basis.insert(r));
        }
        prop_assert_eq!(basis.rank(), before);
    }

    #[test]
    fn certificates_multiply_out(rows in prop::collection::vec(arb_vec(10), 1..6), coeffs in prop::collection::vec(-3i64..=3, 6)) {
        let mut basis = EchelonBasis::tracked();
        for (i, r) in rows.iter().enumerate() {
            basis.insert_tagged(r, i);
        }
        let mut target = SparseVec::zero();
        for (r, c) in rows.iter().zip(&coeffs) {
            target.add_scaled(r, &Rational::from_integer((*c).into()));
        }
        let cert = basis.certificate(&target).expect("combination of rows");
        let mut rebuilt = SparseVec::zero();
        for (i, c) in &cert {
            rebuilt.add_scaled(&rows[*i], c);
        }
        prop_assert_eq!(rebuilt, target);
    }

    #[test]
    fn window_intersection_by_brute_force(rows in prop::collection::vec(arb_vec(8), 0..6), keep_mask in 0u32..256) {
        let keep = |k: &u32| keep_mask & (1 << k) != 0;
        let mut basis = EchelonBasis::new();
        for r in &rows {
            basis.insert(r);
        }
        let win = basis.window_intersection(keep);
        for row in win.rows() {
            prop_assert!(row.keys().all(keep));
            prop_assert!(basis.contains(row));
        }
        // span ∩ coordinate subspace, from the kernel of the dropped coordinates
        let images: Vec<SparseVec<u32>> = basis.rows().map(|r| r.filter(|k| !keep(k))).collect();
        let reference: Vec<SparseVec<u32>> = kernel(&images)
            .into_iter()
            .map(|combo| {
                let rows: Vec<&SparseVec<u32>> = basis.rows().collect();
                let mut out = SparseVec::zero();
                for (i, c) in &combo {
                    out.add_scaled(rows[*i], c);
                }
                out
            })
            .collect();
        let mut ref_basis = EchelonBasis::new();
        for r in &reference {
            ref_basis.insert(r);
        }
        prop_assert_eq!(win.rank(), ref_basis.rank());
        for r in &reference {
            prop_assert!(win.contains(r));
        }
    }
}

#[test]
fn window_intersection_examples() {
    let mut b = EchelonBasis::new();
    b.insert(&sparse(&[(1, 1, 1), (3, 1, 1)]));
    b.insert(&sparse(&[(2, 1, 1), (3, 1, 1)]));
    let w = b.window_intersection(|k| *k != 3);
    assert_eq!(w.rank(), 1);
    assert!(w.contains(&sparse(&[(1, 1, 1), (2, -1, 1)])));
}
