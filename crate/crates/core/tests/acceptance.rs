//! Acceptance suite: one line per criterion, nonzero exit if any criterion fails.

use std::time::{Duration, Instant};

use zhu_core::dual::{build_annihilating_functionals, conj_identity_check, proof_chain_check, regularity_check};
use zhu_core::identities::{
    automorphism_check, commutator_check, translation_vacuum_check, virasoro_bracket_check, zhu_specialization_check,
};
use zhu_core::rational::{frac, int};
use zhu_core::report::{Report, Status};
use zhu_core::subspace::{
    build_oprime, default_grid, eigen_decompose_check, odprime_generators, otprime_generators, principal_eigen_index,
    quotient_dim_estimate, theta_transport_check, vacuum_congruence_check, verify_theorem_instance, Escalation,
    Generator,
};
use zhu_core::twisted::{
    omega_lemma_check, omega_space, twisted_basis, twisted_vacuum_weight, z0_shift_residue_check, SelfModule,
    TwistedFock,
};
use zhu_core::zhu::{circle, star};
use zhu_core::{FracIndex, Model, Monomial, Vector};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn mono(parts: &[u32]) -> Vector {
    Monomial::from_parts(parts.to_vec()).as_vector()
}

fn half(k: i64) -> FracIndex {
    FracIndex::new(k, 2)
}

/// Counts of (failed, undecided) with the first offending label.
fn tally(reports: &[Report]) -> (usize, usize, Option<String>) {
    let mut failed = 0;
    let mut undecided = 0;
    let mut first = None;
    for r in reports {
        for c in &r.checks {
            match c.status {
                Status::Failed => failed += 1,
                Status::Undecided => undecided += 1,
                _ => continue,
            }
            first.get_or_insert_with(|| format!("{} {} {}", r.command, c.label, c.inputs));
        }
    }
    (failed, undecided, first)
}

fn require_clean(reports: &[Report], what: &str) -> Outcome {
    let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    match tally(reports) {
        (0, 0, _) => Ok(format!("{checks} {what} checks")),
        (f, u, first) => Err(format!("{f} failed, {u} undecided of {checks}; first: {}", first.unwrap_or_default())),
    }
}

fn within(limit: Duration, start: Instant, outcome: Outcome) -> Outcome {
    let took = start.elapsed();
    let detail = outcome?;
    if took > limit {
        Err(format!("{detail}, but took {took:.1?} (limit {limit:?})"))
    } else {
        Ok(format!("{detail} in {took:.1?}"))
    }
}

fn theorem_instances() -> Vec<(u32, FracIndex, FracIndex)> {
    let mut out: Vec<(u32, FracIndex, FracIndex)> =
        [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)].iter().map(|&(n, m)| (2, half(n), half(m))).collect();
    out.push((1, FracIndex::zero(1), FracIndex::zero(1)));
    out
}

fn grade_pairs(t: u32) -> Vec<(FracIndex, FracIndex)> {
    let grid = default_grid(t, 1);
    grid.iter().flat_map(|&n| grid.iter().map(move |&m| (n, m))).collect()
}

fn mode_algebra() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    let h = Model::heisenberg(1).unwrap();
    reports.push(commutator_check(&h, 6, 6, 4));
    reports.push(translation_vacuum_check(&h, 6, 4));
    reports.push(virasoro_bracket_check(&h, 6, 4));
    reports.push(automorphism_check(&Model::heisenberg(2).unwrap(), 4, 4));
    for c in [frac(1, 2), int(1)] {
        let vir = Model::virasoro(c);
        reports.push(commutator_check(&vir, 8, 6, 4));
        reports.push(translation_vacuum_check(&vir, 8, 4));
        reports.push(virasoro_bracket_check(&vir, 8, 4));
    }
    within(Duration::from_secs(60), start, require_clean(&reports, "mode-algebra"))
}

fn zhu_specialization() -> Outcome {
    let h = Model::heisenberg(1).unwrap();
    let vir = Model::virasoro(frac(1, 2));
    let reports = vec![zhu_specialization_check(&h, 5), zhu_specialization_check(&vir, 5)];
    let detail = require_clean(&reports, "pair")?;
    let z = FracIndex::zero(1);
    if star(&h, &mono(&[1]), &mono(&[1]), z, z, z) != mono(&[1, 1]) {
        return Err("a * a differs from a_{-1}^2 1".into());
    }
    let omega_sq = Vector::from_terms([
        (Monomial::from_parts(vec![2, 2]), int(1)),
        (Monomial::from_parts(vec![3]), int(2)),
        (Monomial::from_parts(vec![2]), int(2)),
    ]);
    if star(&vir, &mono(&[2]), &mono(&[2]), z, z, z) != omega_sq {
        return Err("ω * ω differs from L(-2)^2 1 + 2 L(-3) 1 + 2 L(-2) 1".into());
    }
    Ok(format!("{detail}; a*a and ω*ω exact"))
}

fn audited_circle() -> Outcome {
    let h2 = Model::heisenberg(2).unwrap();
    // α = 3/2, pole 3: a_{-3}a + C(3/2,1) a_{-2}a + C(3/2,2) a_{-1}a + C(3/2,3) a_0 a + C(3/2,4) a_1 a
    let expect = Vector::from_terms([
        (Monomial::from_parts(vec![3, 1]), int(1)),
        (Monomial::from_parts(vec![2, 1]), frac(3, 2)),
        (Monomial::from_parts(vec![1, 1]), frac(3, 8)),
        (Monomial::vacuum(), frac(3, 128)),
    ]);
    let got = circle(&h2, &mono(&[1]), &mono(&[1]), half(1), half(1));
    if got == expect {
        Ok(h2.render(&got))
    } else {
        Err(format!("got {}", h2.render(&got)))
    }
}

fn theorem() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut worst = 0;
    for (t, n, m) in theorem_instances() {
        let model = Model::heisenberg(t).unwrap();
        let esc = Escalation::standard(3);
        let rep = verify_theorem_instance(&model, n, m, 3, &default_grid(t, 1), esc);
        if let Some(bad) = rep.certificates.iter().find(|c| !c.recheck(&model)) {
            return Err(format!("certificate for T={t} n={n} m={m} does not multiply out: {:?}", bad.target));
        }
        worst = worst.max(rep.checks.iter().filter_map(|c| c.contained_at).max().unwrap_or(0));
        if worst > esc.w_max {
            return Err(format!("containment reported at W={worst} beyond {}", esc.w_max));
        }
        reports.push(rep);
    }
    let detail = require_clean(&reports, "generator")?;
    within(Duration::from_secs(600), start, Ok(format!("{detail}, certificates rechecked, max W={worst}")))
}

fn eigenspace() -> Outcome {
    let reports: Vec<Report> = theorem_instances()
        .into_iter()
        .map(|(t, n, m)| eigen_decompose_check(&Model::heisenberg(t).unwrap(), n, m, 3, Escalation::standard(3)))
        .collect();
    require_clean(&reports, "eigenspace")
}

fn theta_transport() -> Outcome {
    let reports: Vec<Report> = theorem_instances()
        .into_iter()
        .map(|(t, n, m)| theta_transport_check(&Model::heisenberg(t).unwrap(), n, m, 4, Escalation::standard(4)))
        .collect();
    require_clean(&reports, "θ-transport")
}

fn vacuum_congruence() -> Outcome {
    let mut reports = Vec::new();
    for t in [2, 1] {
        let model = Model::heisenberg(t).unwrap();
        for (n, m) in grade_pairs(t) {
            for u in model.basis_upto(3) {
                let rep = vacuum_congruence_check(&model, &u.as_vector(), n, m, 3, Escalation::standard(3))
                    .map_err(|e| e.to_string())?;
                reports.push(rep);
            }
        }
    }
    require_clean(&reports, "coefficient")
}

fn regularity() -> Outcome {
    let big_n = 6;
    let mut reports = Vec::new();
    let mut functionals = 0;
    let mut first = None;
    for t in [2, 1] {
        let model = Model::heisenberg(t).unwrap();
        for (n, m) in grade_pairs(t) {
            for f in build_annihilating_functionals(&model, n, m, big_n, big_n) {
                functionals += 1;
                for u in model.basis_upto(3) {
                    reports.push(regularity_check(&model, &f, &u.as_vector(), n, m, big_n).map_err(|e| e.to_string())?);
                }
                first.get_or_insert((t, n, m, f));
            }
        }
    }
    if functionals < 20 {
        return Err(format!("only {functionals} functionals"));
    }
    let tested: usize = reports.iter().map(|r| r.count(Status::Passed) + r.count(Status::Failed)).sum();
    let detail = require_clean(&reports, "coefficient")?;
    let (t, n, m, f) = first.expect("functionals exist");
    let model = Model::heisenberg(t).unwrap();
    let bad = f.perturbed(&Monomial::from_parts(vec![1, 1]), &int(1));
    let mut caught = 0;
    for u in model.basis_upto(3) {
        caught += regularity_check(&model, &bad, &u.as_vector(), n, m, big_n).map_err(|e| e.to_string())?.count(Status::Failed);
    }
    if caught == 0 {
        return Err("corrupted functional passed every coefficient".into());
    }
    Ok(format!("{functionals} functionals, {tested} tested coefficients ({detail}); corrupted functional fails {caught}"))
}

fn proof_chain() -> Outcome {
    let mut reports = Vec::new();
    for t in [2, 1] {
        let model = Model::heisenberg(t).unwrap();
        for (n, m) in grade_pairs(t) {
            let r = principal_eigen_index(&model, n, m);
            let vs: Vec<Monomial> = model.basis_upto(3).into_iter().filter(|v| model.eigen_index(v) == r).collect();
            for f in build_annihilating_functionals(&model, n, m, 6, 6) {
                for v in &vs {
                    let rep = proof_chain_check(&model, &v.as_vector(), n, m, &f).map_err(|e| e.to_string())?;
                    if !rep.checks.iter().any(|c| c.label == "integrality" && c.status == Status::Passed) {
                        return Err(format!("integrality fails at T={t} n={n} m={m}"));
                    }
                    if rep.chain.is_empty() {
                        return Err(format!("no chain recorded at T={t} n={n} m={m}"));
                    }
                    reports.push(rep);
                }
            }
        }
    }
    require_clean(&reports, "chain")
}

fn operator_identities() -> Outcome {
    let mut reports = Vec::new();
    for model in [Model::heisenberg(2).unwrap(), Model::virasoro(frac(1, 2))] {
        for u in model.basis_upto(5) {
            reports.push(conj_identity_check(&model, &u.as_vector(), 6));
        }
    }
    let z0s = [int(0), int(-1), frac(1, 2)];
    let h2 = Model::heisenberg(2).unwrap();
    let selfv = SelfModule::new(&h2);
    let fock = TwistedFock::new();
    let fock_vectors: Vec<_> = (0..=6).flat_map(twisted_basis).map(|w| w.as_vector()).collect();
    for v in h2.basis_upto(4) {
        let v = v.as_vector();
        for z0 in &z0s {
            for w in h2.basis_upto(3) {
                for m in -2..=2 {
                    reports.push(z0_shift_residue_check(&selfv, "selfV", &v, &w.as_vector(), z0, half(2 * m)));
                }
            }
            for w in &fock_vectors {
                for m in -4..=4 {
                    reports.push(z0_shift_residue_check(&fock, "twistedFock", &v, w, z0, half(m)));
                }
            }
        }
    }
    require_clean(&reports, "identity")
}

fn omega_lemma() -> Outcome {
    let fock = TwistedFock::new();
    let weight = twisted_vacuum_weight(&fock).map_err(|e| e.to_string())?;
    if weight != frac(1, 16) {
        return Err(format!("twisted vacuum has L(0)-eigenvalue {weight}"));
    }
    let h2 = Model::heisenberg(2).unwrap();
    let grid = default_grid(2, 1);
    let mut reports = Vec::new();
    let mut elements = 0;
    for (n, m) in grade_pairs(2) {
        let window = omega_space(&fock, m, 3, 3);
        let mut us: Vec<Vector> = (0..=3).flat_map(|w| Generator::at_level(&h2, w)).map(|g| g.eval(&h2, n, m)).collect();
        us.extend(odprime_generators(&h2, n, m, 3, &grid).into_iter().map(|g| g.value));
        us.extend(otprime_generators(&h2, n, m, 3, &grid).into_iter().map(|g| g.value));
        let mut seen = std::collections::HashSet::new();
        us.retain(|u| !u.is_zero() && seen.insert(u.clone()));
        elements += us.len();
        for u in &us {
            reports.push(omega_lemma_check(&fock, u, n, m, &window));
        }
    }
    let detail = require_clean(&reports, "annihilation")?;
    Ok(format!("{elements} distinct elements, {detail}; vacuum weight 1/16"))
}

fn quotient_sanity() -> Outcome {
    let h2 = Model::heisenberg(2).unwrap();
    let z = half(0);
    let (dim, stable) = quotient_dim_estimate(&h2, z, z, 2, 6);
    if (dim, stable) != (1, true) {
        return Err(format!("T=2 estimate {dim}, stabilized {stable}"));
    }
    let h1 = Model::heisenberg(1).unwrap();
    let z1 = FracIndex::zero(1);
    let window = build_oprime(&h1, z1, z1, 7).window(3);
    let mut extended = window.clone();
    for k in 0..=3 {
        extended.insert(&mono(&vec![1; k]));
    }
    if extended.rank() != window.rank() + 4 {
        return Err("images of a_{-1}^k 1 are dependent".into());
    }
    Ok("T=2 dim 1 (stabilized); T=1 a_{-1}^k 1, k <= 3, independent".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("mode algebra", mode_algebra),
        ("Zhu specialization", zhu_specialization),
        ("audited circle value", audited_circle),
        ("theorem instances", theorem),
        ("eigenspace lemma", eigenspace),
        ("θ-transport", theta_transport),
        ("vacuum congruence", vacuum_congruence),
        ("regularity", regularity),
        ("proof chain", proof_chain),
        ("operator identities", operator_identities),
        ("Ω-lemma", omega_lemma),
        ("quotient sanity", quotient_sanity),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.1?}]", i + 1, start.elapsed()),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{:.1?}]", i + 1, start.elapsed());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
