use proptest::prelude::*;
use zhu_core::identities::zhu_specialization_check;
use zhu_core::rational::{frac, int};
use zhu_core::report::Status;
use zhu_core::zhu::{circle, l_shift, residue_family, star, star_gate};
use zhu_core::{FracIndex, Model, Monomial, Vector};

fn mono(parts: &[u32]) -> Vector {
    Monomial::from_parts(parts.to_vec()).as_vector()
}

#[test]
fn specialization_to_zhu_product() {
    for model in [Model::heisenberg(1).unwrap(), Model::virasoro(frac(1, 2))] {
        let rep = zhu_specialization_check(&model, 5);
        assert_eq!(rep.count(Status::Failed), 0);
        assert!(rep.count(Status::Passed) > 0);
    }
}

#[test]
fn named_products() {
    let h = Model::heisenberg(1).unwrap();
    let z = FracIndex::zero(1);
    assert_eq!(star(&h, &mono(&[1]), &mono(&[1]), z, z, z), mono(&[1, 1]));
    let vir = Model::virasoro(frac(1, 2));
    // ω * ω = Res (1+x)^2 x^{-1} Y(ω, x) ω = L(-2)ω + 2 L(-1)ω + L(0)ω
    let expect = Vector::from_terms([
        (Monomial::from_parts(vec![2, 2]), int(1)),
        (Monomial::from_parts(vec![3]), int(2)),
        (Monomial::from_parts(vec![2]), int(2)),
    ]);
    assert_eq!(star(&vir, &mono(&[2]), &mono(&[2]), z, z, z), expect);
}

#[test]
fn audited_circle_value() {
    let h2 = Model::heisenberg(2).unwrap();
    let half = FracIndex::new(1, 2);
    // a ∈ V^1 and m = n = 1/2: both deltas are 1, so α = 1 + 1 - 1 + 1/2 = 3/2 and the pole is 3.
    // Res (1+x)^{3/2} x^{-3} Y(a, x) a
    //   = a_{-3}a + C(3/2,1) a_{-2}a + C(3/2,2) a_{-1}a + C(3/2,3) a_0 a + C(3/2,4) a_1 a
    //   = a_{-3}a_{-1}1 + 3/2 a_{-2}a_{-1}1 + 3/8 a_{-1}^2 1 + 0 + 3/128 1
    let expect = Vector::from_terms([
        (Monomial::from_parts(vec![3, 1]), int(1)),
        (Monomial::from_parts(vec![2, 1]), frac(3, 2)),
        (Monomial::from_parts(vec![1, 1]), frac(3, 8)),
        (Monomial::vacuum(), frac(3, 128)),
    ]);
    assert_eq!(circle(&h2, &mono(&[1]), &mono(&[1]), half, half), expect);
}

#[test]
fn residue_family_base_case_is_circle() {
    for model in [Model::heisenberg(2).unwrap(), Model::heisenberg(1).unwrap()] {
        let t = model.t();
        let grid: Vec<FracIndex> = (0..=t as i64).map(|k| FracIndex::new(k, t)).collect();
        for &n in &grid {
            for &m in &grid {
                for u in model.basis_upto(3) {
                    for v in model.basis_upto(2) {
                        let (u, v) = (u.as_vector(), v.as_vector());
                        assert_eq!(residue_family(&model, &u, &v, n, m, 0, 0).unwrap(), circle(&model, &u, &v, n, m));
                    }
                }
            }
        }
    }
    let h2 = Model::heisenberg(2).unwrap();
    let z = FracIndex::zero(2);
    assert!(residue_family(&h2, &mono(&[1]), &mono(&[1]), z, z, 0, 1).is_err());
}

#[test]
fn congruence_gate_silences_star() {
    let h2 = Model::heisenberg(2).unwrap();
    let grid: Vec<FracIndex> = (0..=2).map(|k| FracIndex::new(k, 2)).collect();
    for &n in &grid {
        for &m in &grid {
            for &p in &grid {
                for u in h2.basis_upto(3) {
                    let r = h2.eigen_index(&u);
                    if star_gate(&h2, r, n, p) {
                        continue;
                    }
                    for v in h2.basis_upto(2) {
                        assert!(star(&h2, &u.as_vector(), &v.as_vector(), n, m, p).is_zero());
                    }
                }
            }
        }
    }
}

fn arb_vector() -> impl Strategy<Value = Vector> {
    let basis = Model::heisenberg(2).unwrap().basis_upto(3);
    prop::collection::vec((0..basis.len(), -3i64..=3, 1i64..=3), 0..4).prop_map(move |terms| {
        Vector::from_terms(terms.into_iter().map(|(i, p, q)| (basis[i].clone(), frac(p, q))))
    })
}

fn arb_grade() -> impl Strategy<Value = FracIndex> {
    (0i64..=2).prop_map(|k| FracIndex::new(k, 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn products_are_bilinear(
        u in arb_vector(), v in arb_vector(), w in arb_vector(),
        n in arb_grade(), m in arb_grade(), p in arb_grade(), c in -2i64..=2,
    ) {
        let h2 = Model::heisenberg(2).unwrap();
        let c = int(c);
        let mut uw = u.clone();
        uw.add_scaled(&w, &c);
        let mut vw = v.clone();
        vw.add_scaled(&w, &c);

        let mut expect = star(&h2, &u, &v, n, m, p);
        expect.add_scaled(&star(&h2, &w, &v, n, m, p), &c);
        prop_assert_eq!(star(&h2, &uw, &v, n, m, p), expect);
        let mut expect = star(&h2, &u, &v, n, m, p);
        expect.add_scaled(&star(&h2, &u, &w, n, m, p), &c);
        prop_assert_eq!(star(&h2, &u, &vw, n, m, p), expect);

        let mut expect = circle(&h2, &u, &v, n, m);
        expect.add_scaled(&circle(&h2, &w, &v, n, m), &c);
        prop_assert_eq!(circle(&h2, &uw, &v, n, m), expect);
        let mut expect = circle(&h2, &u, &v, n, m);
        expect.add_scaled(&circle(&h2, &u, &w, n, m), &c);
        prop_assert_eq!(circle(&h2, &u, &vw, n, m), expect);

        let mut expect = l_shift(&h2, &u, n, m);
        expect.add_scaled(&l_shift(&h2, &w, n, m), &c);
        prop_assert_eq!(l_shift(&h2, &uw, n, m), expect);
    }
}
