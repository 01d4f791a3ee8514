//! Exact checks of the vertex operator algebra axioms on finite windows.

use num_traits::One;
use rayon::prelude::*;
use serde_json::json;

use crate::frac::FracIndex;
use crate::model::{Model, ModelKind};
use crate::monomial::{Monomial, Vector};
use crate::rational::{factorial, frac_binom, int, Rational};
use crate::report::{self, Check, Report, Status};
use crate::zhu;

fn pass_or(label: &str, inputs: serde_json::Value, failure: Option<String>) -> Check {
    match failure {
        None => Check::new(label, inputs, Status::Passed),
        Some(d) => Check::new(label, inputs, Status::Failed).with_detail(d),
    }
}

fn model_instance(model: &Model) -> serde_json::Value {
    json!({
        "model": match model.kind() { ModelKind::Heisenberg => "heisenberg", ModelKind::Virasoro => "virasoro" },
        "T": model.t(),
        "c": report::q(model.central_charge()),
    })
}

/// `[u_p, v_q] w = sum_i C(p, i) (u_i v)_{p+q-i} w` for basis pairs with
/// `wt u + wt v <= pair_weight`, `|p|, |q| <= mode_range` and `wt w <= w_weight`.
pub fn commutator_check(model: &Model, pair_weight: u32, w_weight: u32, mode_range: i64) -> Report {
    let mut inst = model_instance(model);
    inst["pairWeight"] = json!(pair_weight);
    inst["wWeight"] = json!(w_weight);
    inst["modeRange"] = json!(mode_range);
    let mut report = Report::new("commutator", inst);
    let basis = model.basis_upto(pair_weight);
    let ws = model.basis_upto(w_weight);
    let pairs: Vec<(&Monomial, &Monomial)> = basis
        .iter()
        .flat_map(|u| basis.iter().map(move |v| (u, v)))
        .filter(|(u, v)| u.weight() + v.weight() <= pair_weight)
        .collect();
    let checks: Vec<Check> = pairs
        .par_iter()
        .map(|(u, v)| {
            let (uv, vv) = (u.as_vector(), v.as_vector());
            let products: Vec<Vector> = (0..(u.weight() + v.weight()) as i64).map(|i| model.mode(&uv, i, &vv)).collect();
            let mut failure = None;
            'outer: for p in -mode_range..=mode_range {
                for q in -mode_range..=mode_range {
                    for w in &ws {
                        let w = w.as_vector();
                        let mut lhs = model.mode(&uv, p, &model.mode(&vv, q, &w));
                        lhs -= &model.mode(&vv, q, &model.mode(&uv, p, &w));
                        let mut rhs = Vector::zero();
                        for (i, prod) in products.iter().enumerate() {
                            if !prod.is_zero() {
                                let c = frac_binom(&int(p), i as u64);
                                rhs.add_scaled(&model.mode(prod, p + q - i as i64, &w), &c);
                            }
                        }
                        if lhs != rhs {
                            failure = Some(format!("p={p} q={q} w={}: {} vs {}", model.render(&w), model.render(&lhs), model.render(&rhs)));
                            break 'outer;
                        }
                    }
                }
            }
            pass_or("commutator", json!({"u": model.render(&uv), "v": model.render(&vv)}), failure)
        })
        .collect();
    checks.into_iter().for_each(|c| report.push(c));
    report
}

/// `(L(-1) u)_n = -n u_{n-1}`, `u_j 1 = 0` for `j >= 0`, and `u_{-1-k} 1 = L(-1)^k u / k!` for `k <= 4`.
pub fn translation_vacuum_check(model: &Model, max_weight: u32, mode_range: i64) -> Report {
    let mut inst = model_instance(model);
    inst["maxWeight"] = json!(max_weight);
    inst["modeRange"] = json!(mode_range);
    let mut report = Report::new("translation", inst);
    let basis = model.basis_upto(max_weight);
    let vac = model.vacuum();
    for u in &basis {
        let uv = u.as_vector();
        let du = model.l_op(-1, &uv);
        let mut failure = None;
        for n in -mode_range..=mode_range {
            for w in &basis {
                let w = w.as_vector();
                let lhs = model.mode(&du, n, &w);
                let rhs = model.mode(&uv, n - 1, &w).scaled(&int(-n));
                if lhs != rhs {
                    failure = Some(format!("n={n} w={}", model.render(&w)));
                }
            }
        }
        report.push(pass_or("translation", json!({"u": model.render(&uv)}), failure));
        let mut failure = None;
        for j in 0..=mode_range {
            if !model.mode(&uv, j, &vac).is_zero() {
                failure = Some(format!("u_{j} 1 != 0"));
            }
        }
        let mut power = uv.clone();
        for k in 0..=4u64 {
            if model.mode(&uv, -1 - k as i64, &vac) != power.scaled(&(Rational::one() / factorial(k))) {
                failure = Some(format!("creation coefficient {k}"));
            }
            power = model.l_op(-1, &power);
        }
        report.push(pass_or("vacuum", json!({"u": model.render(&uv)}), failure));
    }
    report
}

/// `[L_p, L_q] = (p-q) L_{p+q} + (p^3-p)/12 c δ_{p+q,0}` on all basis vectors of weight `<= w_weight`.
pub fn virasoro_bracket_check(model: &Model, w_weight: u32, mode_range: i64) -> Report {
    let mut inst = model_instance(model);
    inst["wWeight"] = json!(w_weight);
    inst["modeRange"] = json!(mode_range);
    let mut report = Report::new("virasoro-bracket", inst);
    let omega = model.conformal_vector();
    let l = |k: i64, w: &Vector| model.mode(&omega, k + 1, w);
    let c = model.central_charge().clone();
    for p in -mode_range..=mode_range {
        for q in -mode_range..=mode_range {
            let mut failure = None;
            for w in model.basis_upto(w_weight) {
                let w = w.as_vector();
                let mut lhs = l(p, &l(q, &w));
                lhs -= &l(q, &l(p, &w));
                let mut rhs = l(p + q, &w).scaled(&int(p - q));
                if p + q == 0 {
                    rhs.add_scaled(&w, &(int(p * p * p - p) / int(12) * &c));
                }
                if lhs != rhs {
                    failure = Some(format!("w={}", model.render(&w)));
                    break;
                }
            }
            report.push(pass_or("bracket", json!({"p": p, "q": q}), failure));
        }
    }
    report
}

/// `g(u_j v) = (g u)_j (g v)`, and modes agree with the unmemoized iterate recursion.
pub fn automorphism_check(model: &Model, max_weight: u32, mode_range: i64) -> Report {
    let mut inst = model_instance(model);
    inst["maxWeight"] = json!(max_weight);
    let mut report = Report::new("automorphism", inst);
    let fresh = match model.kind() {
        ModelKind::Heisenberg => Model::heisenberg(model.t()).expect("order already validated"),
        ModelKind::Virasoro => Model::virasoro(model.central_charge().clone()),
    }
    .without_memo();
    let basis = model.basis_upto(max_weight);
    for u in &basis {
        let mut failure = None;
        let uv = u.as_vector();
        for v in &basis {
            let vv = v.as_vector();
            for j in -mode_range..=mode_range {
                let prod = model.mode(&uv, j, &vv);
                if model.g_action(&prod) != model.mode(&model.g_action(&uv), j, &model.g_action(&vv)) {
                    failure = Some(format!("g fails on v={} j={j}", model.render(&vv)));
                }
                if prod != fresh.mode_mono_iterate(u, j, v) {
                    failure = Some(format!("memo differs on v={} j={j}", model.render(&vv)));
                }
            }
        }
        report.push(pass_or("automorphism", json!({"u": model.render(&uv)}), failure));
    }
    report
}

/// With `T = 1` and `n = m = p = 0`, `star` equals Zhu's product on homogeneous pairs.
pub fn zhu_specialization_check(model: &Model, max_weight: u32) -> Report {
    let mut inst = model_instance(model);
    inst["maxWeight"] = json!(max_weight);
    let mut report = Report::new("zhu-specialization", inst);
    let zero = FracIndex::zero(model.t());
    let basis = model.basis_upto(max_weight);
    let checks: Vec<Check> = basis
        .par_iter()
        .flat_map_iter(|u| basis.iter().map(move |v| (u, v)))
        .map(|(u, v)| {
            let (uv, vv) = (u.as_vector(), v.as_vector());
            let got = zhu::star(model, &uv, &vv, zero, zero, zero);
            let want = zhu::zhu_product(model, &uv, &vv);
            let failure = (got != want).then(|| format!("{} vs {}", model.render(&got), model.render(&want)));
            pass_or("star = zhu product", json!({"u": model.render(&uv), "v": model.render(&vv)}), failure)
        })
        .collect();
    checks.into_iter().for_each(|c| report.push(c));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn small_windows_pass() {
        let h = Model::heisenberg(1).unwrap();
        assert_eq!(commutator_check(&h, 2, 2, 2).count(Status::Failed), 0);
        assert_eq!(translation_vacuum_check(&h, 3, 3).count(Status::Failed), 0);
        assert_eq!(virasoro_bracket_check(&h, 3, 3).count(Status::Failed), 0);
        let v = Model::virasoro(frac(1, 2));
        assert_eq!(virasoro_bracket_check(&v, 4, 3).count(Status::Failed), 0);
        let h2 = Model::heisenberg(2).unwrap();
        assert_eq!(automorphism_check(&h2, 3, 3).count(Status::Failed), 0);
        assert_eq!(zhu_specialization_check(&h, 3).count(Status::Failed), 0);
    }
}
