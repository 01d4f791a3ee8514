//! Front end for `zhu-core`: element parsing, configuration and command dispatch.
//!
//! Exit codes: 0 when every check passed or was answered, 1 when some
//! membership stayed undecided, 2 when a check failed, 3 on usage errors.

pub mod config;
pub mod element;

use std::collections::HashSet;

use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};
use zhu_core::dual::{build_annihilating_functionals, conj_identity_check, proof_chain_check, regularity_check};
use zhu_core::identities::{automorphism_check, commutator_check, translation_vacuum_check, virasoro_bracket_check};
use zhu_core::report::{self, Check, Outcome, Report, Status};
use zhu_core::subspace::{
    build_oprime, default_grid, eigen_decompose_check, membership_escalate, principal_eigen_index,
    quotient_dim_estimate, theta_transport_check, vacuum_congruence_check, verify_theorem_instance, Generator,
    Membership,
};
use zhu_core::twisted::{
    omega_lemma_check, omega_space, supports_twisted, twisted_basis, z0_shift_residue_check, ModeModule, SelfModule,
    TwistedFock,
};
use zhu_core::zhu::{circle, star, GradeTriple};
use zhu_core::{FracIndex, Model, Vector};

pub use config::RunConfig;
pub use element::{parse_element, ElementExpr, ParseError};

pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<zhu_core::Error> for UsageError {
    fn from(e: zhu_core::Error) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// u_j v
    Modes,
    /// u *^n_{g,m,p} v
    Star,
    /// u ∘_{g,n,m} v
    Circle,
    /// Rank of the truncated span O'
    Span,
    /// Membership of --v in O', with escalation
    Member,
    /// Every O'' and O''' generator up to --cutoff lies in O'
    VerifyTheorem,
    Eigencheck,
    ThetaCheck,
    VacuumCongruence,
    Regularity,
    ProofChain,
    /// Window of the twisted module annihilated by the high modes
    Omega,
    OmegaLemma,
    /// Estimated dimension of the quotient below weight --N
    Dim,
    Identities,
}

pub fn exit_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Passed => 0,
        Outcome::Undecided => 1,
        Outcome::Failed => 2,
    }
}

/// Sorted-key JSON, with certificates if requested.
pub fn render(report: &Report, model: &Model, certificates: bool) -> String {
    let value = if certificates { report.to_value_with_certificates(model) } else { report.to_value() };
    serde_json::to_string_pretty(&value).expect("report serializes") + "\n"
}

/// Runs one command; the model is returned for rendering.
pub fn run(command: Command, cfg: &RunConfig) -> Result<(Report, Model), UsageError> {
    let model = cfg.model()?;
    let report = dispatch(command, cfg, &model)?;
    Ok((report, model))
}

fn instance(model: &Model, extra: Value) -> Value {
    let mut inst = json!({ "model": model.descriptor() });
    if let (Value::Object(base), Value::Object(more)) = (&mut inst, extra) {
        base.extend(more);
    }
    inst
}

fn valued(command: &str, model: &Model, inst: Value, result: &Vector) -> Report {
    let mut rep = Report::new(command, instance(model, inst));
    rep.result = Some(report::vector(model, result));
    rep
}

/// Homogeneous inputs: the given element, or every basis monomial up to the cutoff.
fn inputs(given: Option<Vector>, model: &Model, cutoff: u32) -> Vec<Vector> {
    match given {
        Some(v) => vec![v],
        None => model.basis_upto(cutoff).into_iter().map(|m| m.as_vector()).collect(),
    }
}

fn merged(command: &str, inst: Value, parts: Vec<(String, Report)>) -> Report {
    let mut rep = Report::new(command, inst);
    for (prefix, part) in parts {
        rep.absorb(&prefix, part);
    }
    rep
}

fn twisted_only(model: &Model) -> Result<(), UsageError> {
    if supports_twisted(model) {
        Ok(())
    } else {
        Err(UsageError("the twisted module exists only for --model heisenberg --T 2".into()))
    }
}

fn dispatch(command: Command, cfg: &RunConfig, model: &Model) -> Result<Report, UsageError> {
    let n = cfg.grade("n", model)?;
    let m = cfg.grade("m", model)?;
    let cutoff = cfg.cutoff();
    let big_n = cfg.big_n.unwrap_or(4);
    let big_w = cfg.big_w.unwrap_or(6);
    let fi = report::fi;
    Ok(match command {
        Command::Modes => {
            let (u, v) = (cfg.required_element("u", model)?, cfg.required_element("v", model)?);
            let j = cfg.j.ok_or_else(|| UsageError("--j is required".into()))?;
            let inst = json!({"u": report::vector(model, &u), "v": report::vector(model, &v), "j": j});
            valued("modes", model, inst, &model.mode(&u, j, &v))
        }
        Command::Star => {
            let (u, v) = (cfg.required_element("u", model)?, cfg.required_element("v", model)?);
            let p = cfg.grade("p", model)?;
            GradeTriple::new(n, m, p)?;
            let inst = json!({"u": report::vector(model, &u), "v": report::vector(model, &v), "n": fi(n), "m": fi(m), "p": fi(p)});
            valued("star", model, inst, &star(model, &u, &v, n, m, p))
        }
        Command::Circle => {
            let (u, v) = (cfg.required_element("u", model)?, cfg.required_element("v", model)?);
            GradeTriple::new(n, m, FracIndex::zero(model.t()))?;
            let inst = json!({"u": report::vector(model, &u), "v": report::vector(model, &v), "n": fi(n), "m": fi(m)});
            valued("circle", model, inst, &circle(model, &u, &v, n, m))
        }
        Command::Span => {
            GradeTriple::new(n, m, FracIndex::zero(model.t()))?;
            let span = build_oprime(model, n, m, cutoff);
            let mut rep = Report::new("span", instance(model, json!({"n": fi(n), "m": fi(m), "cutoff": cutoff})));
            rep.note(format!("generators: circle and L-shift elements with total input weight <= {cutoff}"));
            rep.result = Some(json!({"rank": span.rank(), "generators": span.generator_count()}));
            rep.spans.push(span.record());
            rep
        }
        Command::Member => {
            let v = cfg.required_element("v", model)?;
            GradeTriple::new(n, m, FracIndex::zero(model.t()))?;
            let esc = cfg.escalation()?;
            let inst = json!({"v": report::vector(model, &v), "n": fi(n), "m": fi(m), "escalation": esc.schedule()});
            let mut rep = Report::new("member", instance(model, inst));
            let inputs = json!({"v": report::vector(model, &v)});
            match membership_escalate(model, &v, n, m, esc) {
                Membership::Contained { w, certificate } => {
                    let mut check = Check::new("membership", inputs, Status::Contained);
                    check.contained_at = Some(w);
                    check.certificate_id = Some(0);
                    rep.certificates.push(certificate);
                    rep.push(check);
                }
                Membership::Undecided { w_max } => rep.push(
                    Check::new("membership", inputs, Status::Undecided)
                        .with_detail(format!("not reduced to zero by cutoff {w_max}")),
                ),
            }
            rep
        }
        Command::VerifyTheorem => {
            GradeTriple::new(n, m, FracIndex::zero(model.t()))?;
            let grid = default_grid(model.t(), cfg.grid_top.unwrap_or(1));
            verify_theorem_instance(model, n, m, cutoff, &grid, cfg.escalation()?)
        }
        Command::Eigencheck => {
            GradeTriple::new(n, m, FracIndex::zero(model.t()))?;
            eigen_decompose_check(model, n, m, cutoff, cfg.escalation()?)
        }
        Command::ThetaCheck => {
            GradeTriple::new(n, m, FracIndex::zero(model.t()))?;
            theta_transport_check(model, n, m, cutoff, cfg.escalation()?)
        }
        Command::VacuumCongruence => {
            GradeTriple::new(n, m, FracIndex::zero(model.t()))?;
            let esc = cfg.escalation()?;
            let order = cfg.order.unwrap_or(3);
            let us = inputs(cfg.element("u", model)?, model, cutoff);
            let parts: Result<Vec<_>, _> = us
                .par_iter()
                .map(|u| {
                    vacuum_congruence_check(model, u, n, m, order, esc).map(|r| (format!("{} ", model.render(u)), r))
                })
                .collect();
            let inst = json!({"n": fi(n), "m": fi(m), "order": order, "escalation": esc.schedule()});
            merged("vacuum-congruence", instance(model, inst), parts?)
        }
        Command::Regularity => {
            GradeTriple::new(n, m, FracIndex::zero(model.t()))?;
            let neg_depth = cfg.neg_depth.unwrap_or(6);
            let fs = build_annihilating_functionals(model, n, m, big_n, big_w);
            let us = inputs(cfg.element("u", model)?, model, cutoff);
            let mut parts = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                for u in &us {
                    parts.push((format!("f{i} {} ", model.render(u)), regularity_check(model, f, u, n, m, neg_depth)?));
                }
            }
            let inst = json!({"n": fi(n), "m": fi(m), "N": big_n, "W": big_w, "negDepth": neg_depth, "functionals": fs.len()});
            let mut rep = merged("regularity", instance(model, inst), parts);
            rep.note(format!("functionals: a basis of the annihilator of O'_W in the dual of V_(<= {big_n}), W = {big_w}"));
            rep
        }
        Command::ProofChain => {
            GradeTriple::new(n, m, FracIndex::zero(model.t()))?;
            let r = principal_eigen_index(model, n, m);
            let vs = match cfg.element("v", model)? {
                Some(v) => vec![v],
                None => model
                    .basis_upto(cutoff)
                    .into_iter()
                    .filter(|b| model.eigen_index(b) == r)
                    .map(|b| b.as_vector())
                    .collect(),
            };
            let fs = build_annihilating_functionals(model, n, m, big_n, big_w);
            let mut parts = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                for v in &vs {
                    parts.push((format!("f{i} {} ", model.render(v)), proof_chain_check(model, v, n, m, f)?));
                }
            }
            let inst = json!({"n": fi(n), "m": fi(m), "N": big_n, "W": big_w, "functionals": fs.len()});
            merged("proof-chain", instance(model, inst), parts)
        }
        Command::Omega => {
            twisted_only(model)?;
            let fock = TwistedFock::new();
            let (dc, pc) = (cfg.degree_cap.unwrap_or(3), cfg.probe_cap.unwrap_or(3));
            let window = omega_space(&fock, m, dc, pc);
            let inst = json!({"m": fi(m), "degreeCap": dc, "probeCap": pc});
            let mut rep = Report::new("omega", instance(model, inst));
            rep.note("Ω window of the σ-twisted Fock module, cut out by the recorded probe and degree caps");
            let basis: Vec<String> = window.basis.iter().map(|w| fock.render(w)).collect();
            rep.result = Some(json!({"dimension": basis.len(), "basis": basis}));
            rep
        }
        Command::OmegaLemma => {
            twisted_only(model)?;
            GradeTriple::new(n, m, FracIndex::zero(model.t()))?;
            let fock = TwistedFock::new();
            let (dc, pc) = (cfg.degree_cap.unwrap_or(3), cfg.probe_cap.unwrap_or(3));
            let window = omega_space(&fock, m, dc, pc);
            let us = match cfg.element("u", model)? {
                Some(u) => vec![u],
                None => {
                    let mut seen = HashSet::new();
                    (0..=cutoff)
                        .flat_map(|l| Generator::at_level(model, l))
                        .map(|g| g.eval(model, n, m))
                        .filter(|u| !u.is_zero() && seen.insert(u.clone()))
                        .collect()
                }
            };
            let parts = us
                .par_iter()
                .map(|u| (format!("{} ", model.render(u)), omega_lemma_check(&fock, u, n, m, &window)))
                .collect();
            let inst = json!({"n": fi(n), "m": fi(m), "degreeCap": dc, "probeCap": pc, "windowDim": window.basis.len(), "elements": us.len()});
            merged("omega-lemma", instance(model, inst), parts)
        }
        Command::Dim => {
            GradeTriple::new(n, m, FracIndex::zero(model.t()))?;
            let (dim, stable) = quotient_dim_estimate(model, n, m, big_n, big_w);
            let mut rep = Report::new("dim", instance(model, json!({"n": fi(n), "m": fi(m), "N": big_n, "W": big_w})));
            rep.note("an upper bound: O' truncated at W may still grow below weight N");
            rep.note("stabilized is heuristic: it means cutoff W - 2 gave the same value");
            rep.result = Some(json!({"dimension": dim, "stabilized": stable}));
            rep
        }
        Command::Identities => identities(cfg, model, cutoff)?,
    })
}

fn identities(cfg: &RunConfig, model: &Model, cutoff: u32) -> Result<Report, UsageError> {
    let order = cfg.order.unwrap_or(3);
    let z0s = cfg.z0_values()?;
    let range = 3;
    let inst = json!({"cutoff": cutoff, "modeRange": range, "order": order,
        "z0": z0s.iter().map(report::q).collect::<Vec<_>>()});
    let mut rep = Report::new("identities", instance(model, inst));
    rep.absorb("commutator ", commutator_check(model, cutoff, cutoff, range));
    rep.absorb("translation ", translation_vacuum_check(model, cutoff, range));
    rep.absorb("bracket ", virasoro_bracket_check(model, cutoff, range));
    rep.absorb("automorphism ", automorphism_check(model, cutoff, range));
    let basis = model.basis_upto(cutoff);
    let conj: Vec<Report> = basis.par_iter().map(|u| conj_identity_check(model, &u.as_vector(), order as i64)).collect();
    for part in conj {
        rep.absorb("conjugation ", part);
    }
    let small = model.basis_upto(cutoff.min(3));
    let selfv = SelfModule::new(model);
    for z0 in &z0s {
        for v in &small {
            for w in &small {
                for k in -2..=2 {
                    let m = FracIndex::integer(k, 1);
                    rep.absorb("z0 V ", z0_shift_residue_check(&selfv, "V", &v.as_vector(), &w.as_vector(), z0, m));
                }
            }
        }
    }
    if supports_twisted(model) {
        let fock = TwistedFock::new();
        let ws: Vec<_> = (0..=4).flat_map(twisted_basis).collect();
        for z0 in &z0s {
            for v in &small {
                for w in &ws {
                    for k in -2..=2 {
                        let m = FracIndex::new(k, 2);
                        rep.absorb("z0 twisted ", z0_shift_residue_check(&fock, "twisted", &v.as_vector(), &w.as_vector(), z0, m));
                    }
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use zhu_core::report::Check;

    fn status() -> impl Strategy<Value = Status> {
        prop_oneof![
            Just(Status::Passed),
            Just(Status::Contained),
            Just(Status::Undecided),
            Just(Status::Failed),
            Just(Status::Untestable),
        ]
    }

    proptest! {
        #[test]
        fn exit_codes_reflect_report_contents(statuses in prop::collection::vec(status(), 0..12)) {
            let mut rep = Report::new("synthetic", json!({}));
            for (i, s) in statuses.iter().enumerate() {
                rep.push(Check::new(format!("c{i}"), json!({}), *s));
            }
            let code = exit_code(rep.outcome());
            let any = |want: Status| statuses.contains(&want);
            let expect = if any(Status::Failed) { 2 } else if any(Status::Undecided) { 1 } else { 0 };
            prop_assert_eq!(code, expect);
            let json: Value = serde_json::from_str(&render(&rep, &Model::heisenberg(1).unwrap(), false)).unwrap();
            let outcome = json["summary"]["outcome"].as_str().unwrap().to_string();
            prop_assert_eq!(outcome, ["passed", "undecided", "failed"][expect as usize]);
        }
    }

    #[test]
    fn render_round_trips_through_the_parser() {
        for model in [Model::heisenberg(2).unwrap(), Model::virasoro(zhu_core::rational::frac(1, 2))] {
            let basis = model.basis_upto(5);
            for (i, b) in basis.iter().enumerate() {
                let mut v = b.as_vector().scaled(&zhu_core::rational::frac(i as i64 - 3, 2));
                v.add_scaled(&basis[(i * 7) % basis.len()].as_vector(), &zhu_core::rational::int(-1));
                let text = model.render(&v);
                let parsed = parse_element(&model, &text).unwrap().vector;
                assert_eq!(parsed, v, "{text}");
                assert_eq!(model.render(&parsed), text);
            }
        }
    }

    #[test]
    fn usage_errors_are_reported() {
        let cfg = RunConfig { n: Some("-1/2".into()), u: Some("a[-1]|0>".into()), v: Some("a[-1]|0>".into()), ..Default::default() };
        assert!(run(Command::Circle, &cfg).is_err());
        let cfg = RunConfig { model: Some("virasoro".into()), ..Default::default() };
        assert!(run(Command::Omega, &cfg).is_err());
        assert!(run(Command::Modes, &RunConfig::default()).is_err());
    }
}
