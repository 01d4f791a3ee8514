//! Truncated spans of `O'_{g,n,m}(V)` and the membership checks built on them.
//!
//! `O'_{g,n,m}(V)` is spanned by circle products `u ∘ v` and the vectors
//! `(L(-1) + L(0) + m - n) u`. A [`TruncatedSubspace`] holds the span of all
//! such generators whose inputs have total weight at most `W`. Membership is
//! a semi-decision: the cutoff is raised along an [`Escalation`] schedule and
//! a vector is reported either as contained (with a re-checkable
//! [`Certificate`]) or as undecided. Non-membership is never claimed.

use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::frac::FracIndex;
use crate::linalg::EchelonBasis;
use crate::model::Model;
use crate::monomial::{Monomial, Vector};
use crate::rational::{factorial, frac_binom, Rational};
use crate::report::{self, Check, Report, SpanRecord, Status};
use crate::zhu;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpanKind {
    Oprime,
    Odprime,
    Otprime,
    Custom,
}

impl SpanKind {
    pub fn name(self) -> &'static str {
        match self {
            SpanKind::Oprime => "Oprime",
            SpanKind::Odprime => "Odprime",
            SpanKind::Otprime => "Otprime",
            SpanKind::Custom => "custom",
        }
    }
}

/// A spanning vector of `O'_{g,n,m}(V)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Circle { u: Monomial, v: Monomial },
    LShift { u: Monomial },
}

impl Generator {
    pub fn input_weight(&self) -> u32 {
        match self {
            Generator::Circle { u, v } => u.weight() + v.weight(),
            Generator::LShift { u } => u.weight(),
        }
    }

    pub fn eval(&self, model: &Model, n: FracIndex, m: FracIndex) -> Vector {
        match self {
            Generator::Circle { u, v } => zhu::circle(model, &u.as_vector(), &v.as_vector(), n, m),
            Generator::LShift { u } => zhu::l_shift(model, &u.as_vector(), n, m),
        }
    }

    pub fn describe(&self, model: &Model) -> Value {
        match self {
            Generator::Circle { u, v } => json!({
                "op": "circle",
                "u": model.render(&u.as_vector()),
                "v": model.render(&v.as_vector()),
            }),
            Generator::LShift { u } => json!({"op": "l_shift", "u": model.render(&u.as_vector())}),
        }
    }

    /// All generators with input weight exactly `w`, circles first, in `(u, v)` order.
    pub fn at_level(model: &Model, w: u32) -> Vec<Generator> {
        let mut out = Vec::new();
        for wu in 0..=w {
            for u in model.basis(wu) {
                for v in model.basis(w - wu) {
                    out.push(Generator::Circle { u: u.clone(), v });
                }
            }
        }
        out.sort_by(|a, b| match (a, b) {
            (Generator::Circle { u: u1, v: v1 }, Generator::Circle { u: u2, v: v2 }) => (u1, v1).cmp(&(u2, v2)),
            _ => std::cmp::Ordering::Equal,
        });
        out.extend(model.basis(w).into_iter().map(|u| Generator::LShift { u }));
        out
    }
}

/// Exact proof that `target` is a rational combination of span generators.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub n: FracIndex,
    pub m: FracIndex,
    pub target: Vector,
    pub terms: Vec<(Generator, Rational)>,
}

impl Certificate {
    /// Re-evaluates every generator from scratch and compares the sum with the target.
    pub fn recheck(&self, model: &Model) -> bool {
        let mut total = Vector::zero();
        for (g, c) in &self.terms {
            total.add_scaled(&g.eval(model, self.n, self.m), c);
        }
        total == self.target
    }

    pub fn to_value(&self, model: &Model) -> Value {
        json!({
            "grades": [self.n.to_string(), self.m.to_string()],
            "target": report::vector(model, &self.target),
            "terms": self
                .terms
                .iter()
                .map(|(g, c)| json!({"generator": g.describe(model), "coeff": report::q(c)}))
                .collect::<Vec<_>>(),
        })
    }
}

/// A finite-cutoff span together with its construction parameters.
#[derive(Clone, Debug)]
pub struct TruncatedSubspace {
    kind: SpanKind,
    n: FracIndex,
    m: FracIndex,
    cutoff: u32,
    max_vector_weight: u32,
    basis: EchelonBasis<Monomial>,
    generators: Vec<Generator>,
}

impl TruncatedSubspace {
    /// The span of the weight-0 generators of `O'_{g,n,m}(V)`.
    pub fn oprime(model: &Model, n: FracIndex, m: FracIndex) -> Self {
        let mut s = Self {
            kind: SpanKind::Oprime,
            n,
            m,
            cutoff: 0,
            max_vector_weight: 0,
            basis: EchelonBasis::tracked(),
            generators: Vec::new(),
        };
        s.insert_level(model, 0);
        s
    }

    /// A span of explicitly supplied vectors (no generator trail).
    pub fn custom(kind: SpanKind, n: FracIndex, m: FracIndex, cutoff: u32, vectors: &[Vector]) -> Self {
        let mut basis = EchelonBasis::new();
        let mut top = 0;
        for v in vectors {
            top = top.max(v.keys().map(Monomial::weight).max().unwrap_or(0));
            basis.insert(v);
        }
        Self { kind, n, m, cutoff, max_vector_weight: top, basis, generators: Vec::new() }
    }

    pub fn kind(&self) -> SpanKind {
        self.kind
    }

    pub fn grades(&self) -> (FracIndex, FracIndex) {
        (self.n, self.m)
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn max_vector_weight(&self) -> u32 {
        self.max_vector_weight
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn basis(&self) -> &EchelonBasis<Monomial> {
        &self.basis
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn reduce(&self, v: &Vector) -> Vector {
        self.basis.reduce(v)
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.basis.contains(v)
    }

    pub fn record(&self) -> SpanRecord {
        SpanRecord {
            kind: self.kind.name().to_string(),
            grades: [self.n.to_string(), self.m.to_string()],
            w: self.cutoff,
            rank: self.rank(),
        }
    }

    fn insert_level(&mut self, model: &Model, w: u32) {
        let gens = Generator::at_level(model, w);
        let (n, m) = (self.n, self.m);
        let values: Vec<Vector> = gens.par_iter().map(|g| g.eval(model, n, m)).collect();
        for (g, v) in gens.into_iter().zip(values) {
            let tag = self.generators.len();
            self.generators.push(g);
            if let Some(top) = v.keys().map(Monomial::weight).max() {
                self.max_vector_weight = self.max_vector_weight.max(top);
            }
            self.basis.insert_tagged(&v, tag);
        }
    }

    /// Raises the generator cutoff to `w` (no-op if already there).
    pub fn extend_to(&mut self, model: &Model, w: u32) {
        assert_eq!(self.kind, SpanKind::Oprime, "only generator spans can be extended");
        while self.cutoff < w {
            self.cutoff += 1;
            self.insert_level(model, self.cutoff);
        }
    }

    /// The certificate for `v`, if it lies in the span.
    pub fn certificate(&self, v: &Vector) -> Option<Certificate> {
        let combo = self.basis.certificate(v)?;
        Some(Certificate {
            n: self.n,
            m: self.m,
            target: v.clone(),
            terms: combo.iter().map(|(i, c)| (self.generators[*i].clone(), c.clone())).collect(),
        })
    }

    /// Echelon basis of the span's intersection with `V_{<= n}`.
    pub fn window(&self, n: u32) -> EchelonBasis<Monomial> {
        self.basis.window_intersection(|k| k.weight() <= n)
    }
}

/// `build_oprime(n, m, W)`.
pub fn build_oprime(model: &Model, n: FracIndex, m: FracIndex, w: u32) -> TruncatedSubspace {
    let mut s = TruncatedSubspace::oprime(model, n, m);
    s.extend_to(model, w);
    s
}

/// Cutoffs `w0, w0 + step, ...`, ending exactly at `w_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Escalation {
    pub w0: u32,
    pub w_max: u32,
    pub step: u32,
}

impl Escalation {
    pub fn new(w0: u32, w_max: u32, step: u32) -> Self {
        assert!(w0 <= w_max, "escalation must start below its limit");
        Self { w0, w_max, step: step.max(1) }
    }

    /// The default schedule `cutoff, cutoff + 2, ..., cutoff + 6`.
    pub fn standard(cutoff: u32) -> Self {
        Self::new(cutoff, cutoff + 6, 2)
    }

    pub fn schedule(&self) -> Vec<u32> {
        let mut out: Vec<u32> = (self.w0..=self.w_max).step_by(self.step as usize).collect();
        if out.last() != Some(&self.w_max) {
            out.push(self.w_max);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum Membership {
    Contained { w: u32, certificate: Certificate },
    Undecided { w_max: u32 },
}

impl Membership {
    pub fn contained_at(&self) -> Option<u32> {
        match self {
            Membership::Contained { w, .. } => Some(*w),
            Membership::Undecided { .. } => None,
        }
    }
}

/// Result of escalating a batch of targets against one `O'_{g,n,m}` span.
#[derive(Debug)]
pub struct BatchMembership {
    pub results: Vec<Membership>,
    pub spans: Vec<SpanRecord>,
}

/// Escalates every target against `O'_{g,n,m}`, reusing one growing span.
///
/// Duplicate targets are decided once. Each result carries the least
/// scheduled cutoff at which its target reduced to zero.
pub fn escalate_batch(model: &Model, n: FracIndex, m: FracIndex, targets: &[Vector], esc: Escalation) -> BatchMembership {
    let mut distinct: Vec<&Vector> = Vec::new();
    let mut slot: HashMap<&Vector, usize> = HashMap::new();
    let index: Vec<usize> = targets
        .iter()
        .map(|t| {
            *slot.entry(t).or_insert_with(|| {
                distinct.push(t);
                distinct.len() - 1
            })
        })
        .collect();
    let mut decided: Vec<Option<Membership>> = vec![None; distinct.len()];
    let mut span = TruncatedSubspace::oprime(model, n, m);
    let mut spans = Vec::new();
    for w in esc.schedule() {
        let pending: Vec<usize> = (0..distinct.len()).filter(|&i| decided[i].is_none()).collect();
        if pending.is_empty() {
            break;
        }
        span.extend_to(model, w);
        spans.push(span.record());
        let found: Vec<(usize, Option<Certificate>)> =
            pending.par_iter().map(|&i| (i, span.certificate(distinct[i]))).collect();
        for (i, cert) in found {
            if let Some(certificate) = cert {
                decided[i] = Some(Membership::Contained { w, certificate });
            }
        }
    }
    let results = index
        .into_iter()
        .map(|i| decided[i].clone().unwrap_or(Membership::Undecided { w_max: esc.w_max }))
        .collect();
    BatchMembership { results, spans }
}

/// `membership_escalate` for a single vector against `O'_{g,n,m}`.
pub fn membership_escalate(model: &Model, v: &Vector, n: FracIndex, m: FracIndex, esc: Escalation) -> Membership {
    escalate_batch(model, n, m, std::slice::from_ref(v), esc).results.remove(0)
}

/// Records a batch of membership results as report checks.
fn push_memberships(report: &mut Report, labelled: Vec<(String, Value)>, batch: BatchMembership) {
    for ((label, inputs), res) in labelled.into_iter().zip(batch.results) {
        let check = match res {
            Membership::Contained { w, certificate } => {
                let mut c = Check::new(label, inputs, Status::Contained);
                c.contained_at = Some(w);
                if !certificate.terms.is_empty() {
                    c.certificate_id = Some(report.certificates.len());
                    report.certificates.push(certificate);
                }
                c
            }
            Membership::Undecided { w_max } => {
                Check::new(label, inputs, Status::Undecided).with_detail(format!("not reached by W = {w_max}"))
            }
        };
        report.push(check);
    }
    report.spans.extend(batch.spans);
}

fn instance(model: &Model, n: FracIndex, m: FracIndex) -> Value {
    json!({"model": model.descriptor(), "n": report::fi(n), "m": report::fi(m)})
}

/// `r ≡ m̄ - n̄ (mod T)`.
pub fn principal_eigen_index(model: &Model, n: FracIndex, m: FracIndex) -> u32 {
    (m.bar() as i64 - n.bar() as i64).rem_euclid(model.t() as i64) as u32
}

/// Tuples of `k` basis monomials with total weight at most `cutoff`, by `(total weight, tuple)`.
pub fn monomial_tuples(model: &Model, k: usize, cutoff: u32) -> Vec<Vec<Monomial>> {
    fn go(model: &Model, k: usize, budget: u32, cur: &mut Vec<Monomial>, out: &mut Vec<Vec<Monomial>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for w in 0..=budget {
            for mono in model.basis(w) {
                cur.push(mono);
                go(model, k, budget - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(model, k, cutoff, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| {
        let wa: u32 = a.iter().map(Monomial::weight).sum();
        let wb: u32 = b.iter().map(Monomial::weight).sum();
        (wa, a).cmp(&(wb, b))
    });
    out
}

/// `(1/T)ℕ ∩ [0, top]`.
pub fn default_grid(t: u32, top: i64) -> Vec<FracIndex> {
    (0..=top * t as i64).map(|k| FracIndex::new(k, t)).collect()
}

/// One enumerated element of `O''` or `O'''`.
#[derive(Clone, Debug)]
pub struct TheoremGenerator {
    pub label: String,
    pub inputs: Value,
    pub value: Vector,
}

/// All `O''_{g,n,m}` generators with monomial inputs of total weight `<= cutoff`.
pub fn odprime_generators(model: &Model, n: FracIndex, m: FracIndex, cutoff: u32, grid: &[FracIndex]) -> Vec<TheoremGenerator> {
    let tuples = monomial_tuples(model, 4, cutoff);
    let mut jobs = Vec::new();
    for p1 in grid {
        for p2 in grid {
            for p3 in grid {
                for t in &tuples {
                    jobs.push((*p1, *p2, *p3, t));
                }
            }
        }
    }
    jobs.par_iter()
        .map(|(p1, p2, p3, t)| {
            let v: Vec<Vector> = t.iter().map(Monomial::as_vector).collect();
            let value = zhu::o2_generator(model, &v[0], &v[1], &v[2], &v[3], n, m, *p1, *p2, *p3);
            TheoremGenerator {
                label: "o2".to_string(),
                inputs: json!({
                    "x": model.render(&v[0]), "a": model.render(&v[1]),
                    "b": model.render(&v[2]), "c": model.render(&v[3]),
                    "p1": report::fi(*p1), "p2": report::fi(*p2), "p3": report::fi(*p3),
                }),
                value,
            }
        })
        .collect()
}

/// All `O'''_{g,n,m}` generators `(x * w) * y` with `w` a generator of `O'_{g,p2,p1}`,
/// monomial inputs of total weight `<= cutoff`.
pub fn otprime_generators(model: &Model, n: FracIndex, m: FracIndex, cutoff: u32, grid: &[FracIndex]) -> Vec<TheoremGenerator> {
    let mut jobs = Vec::new();
    for p1 in grid {
        for p2 in grid {
            for t in monomial_tuples(model, 4, cutoff) {
                let g = Generator::Circle { u: t[1].clone(), v: t[2].clone() };
                jobs.push((*p1, *p2, t[0].clone(), g, t[3].clone()));
            }
            for t in monomial_tuples(model, 3, cutoff) {
                jobs.push((*p1, *p2, t[0].clone(), Generator::LShift { u: t[1].clone() }, t[2].clone()));
            }
        }
    }
    jobs.par_iter()
        .map(|(p1, p2, x, g, y)| {
            let w = g.eval(model, *p2, *p1);
            let value = zhu::o3_generator(model, &x.as_vector(), &w, &y.as_vector(), n, m, *p1, *p2);
            TheoremGenerator {
                label: "o3".to_string(),
                inputs: json!({
                    "x": model.render(&x.as_vector()), "w": g.describe(model), "y": model.render(&y.as_vector()),
                    "p1": report::fi(*p1), "p2": report::fi(*p2),
                }),
                value,
            }
        })
        .collect()
}

/// Checks that every enumerated `O''` and `O'''` generator lies in `O'_{g,n,m}`.
pub fn verify_theorem_instance(
    model: &Model,
    n: FracIndex,
    m: FracIndex,
    cutoff: u32,
    grid: &[FracIndex],
    esc: Escalation,
) -> Report {
    let mut inst = instance(model, n, m);
    inst["cutoff"] = json!(cutoff);
    inst["grid"] = json!(grid.iter().map(|g| g.to_string()).collect::<Vec<_>>());
    inst["escalation"] = json!(esc.schedule());
    let mut report = Report::new("verify-theorem", inst);
    report.note(format!("inputs: basis monomials with total weight <= {cutoff}"));
    report.note(format!("grades p1, p2, p3 range over the grid only: {:?}", report.instance["grid"]));
    let mut gens = odprime_generators(model, n, m, cutoff, grid);
    gens.extend(otprime_generators(model, n, m, cutoff, grid));
    let targets: Vec<Vector> = gens.iter().map(|g| g.value.clone()).collect();
    let batch = escalate_batch(model, n, m, &targets, esc);
    let labelled = gens.into_iter().map(|g| (g.label, g.inputs)).collect();
    push_memberships(&mut report, labelled, batch);
    report
}

/// Off-eigenspace monomials lie in `O'`, and `O'` is stable under the eigenprojections.
pub fn eigen_decompose_check(model: &Model, n: FracIndex, m: FracIndex, w: u32, esc: Escalation) -> Report {
    let mut inst = instance(model, n, m);
    inst["W"] = json!(w);
    inst["escalation"] = json!(esc.schedule());
    let mut report = Report::new("eigencheck", inst);
    let r = principal_eigen_index(model, n, m);
    report.note(format!("principal eigenspace V^{r}; off-eigenspace monomials of weight <= {w}"));
    let mut labelled = Vec::new();
    let mut targets = Vec::new();
    for mono in model.basis_upto(w) {
        let s = model.eigen_index(&mono);
        if s != r {
            labelled.push(("off-eigenspace".to_string(), json!({"u": model.render(&mono.as_vector()), "s": s})));
            targets.push(mono.as_vector());
        }
    }
    for level in 0..=w {
        for g in Generator::at_level(model, level) {
            let value = g.eval(model, n, m);
            for s in 0..model.t() {
                let proj = model.g_project(&value, s).expect("s < T");
                if proj.is_zero() || proj == value {
                    continue;
                }
                labelled.push(("projection".to_string(), json!({"generator": g.describe(model), "s": s})));
                targets.push(proj);
            }
        }
    }
    let batch = escalate_batch(model, n, m, &targets, esc);
    push_memberships(&mut report, labelled, batch);
    report
}

/// θ maps the principal component of every `O'_{g^{-1},m,n}` generator into `O'_{g,n,m}`.
pub fn theta_transport_check(model: &Model, n: FracIndex, m: FracIndex, w: u32, esc: Escalation) -> Report {
    let mut inst = instance(model, n, m);
    inst["W"] = json!(w);
    inst["escalation"] = json!(esc.schedule());
    let mut report = Report::new("theta-check", inst);
    let r = principal_eigen_index(model, n, m);
    report.note(format!("generators of O'(m, n) with input weight <= {w}; for T <= 2, g^-1 = g"));
    let mut labelled = Vec::new();
    let mut targets = Vec::new();
    for level in 0..=w {
        for g in Generator::at_level(model, level) {
            let value = g.eval(model, m, n);
            let proj = model.g_project(&value, r).expect("r < T");
            labelled.push(("theta".to_string(), json!({"generator": g.describe(model), "r": r})));
            targets.push(model.theta(&proj));
        }
    }
    let batch = escalate_batch(model, n, m, &targets, esc);
    push_memberships(&mut report, labelled, batch);
    report
}

/// `L(-1)^k u / k! - C(-wt u - m + n, k) u ∈ O'` for `k = 0..=order`.
pub fn vacuum_congruence_check(model: &Model, u: &Vector, n: FracIndex, m: FracIndex, order: u32, esc: Escalation) -> Result<Report, crate::Error> {
    let weights: Vec<u32> = u.keys().map(Monomial::weight).collect();
    let h = match weights.first() {
        Some(&h) if weights.iter().all(|&w| w == h) => h,
        None => 0,
        _ => return Err(crate::Error::NotHomogeneous),
    };
    let mut inst = instance(model, n, m);
    inst["u"] = report::vector(model, u);
    inst["order"] = json!(order);
    let mut report = Report::new("vacuum-congruence", inst);
    let alpha = (n - m).to_rational() - Rational::from_integer((h as i64).into());
    let mut labelled = Vec::new();
    let mut targets = Vec::new();
    let mut power = u.clone();
    for k in 0..=order {
        if k > 0 {
            power = model.l_op(-1, &power);
        }
        let mut diff = power.scaled(&(Rational::from_integer(1.into()) / factorial(k as u64)));
        diff.add_scaled(u, &-frac_binom(&alpha, k as u64));
        labelled.push((format!("k={k}"), json!({"k": k, "difference": report::vector(model, &diff)})));
        targets.push(diff);
    }
    let batch = escalate_batch(model, n, m, &targets, esc);
    push_memberships(&mut report, labelled, batch);
    Ok(report)
}

/// `dim V_{<=N} - rank(O'_W ∩ V_{<=N})`, with the heuristic flag that cutoff `W - 2` gave the same value.
pub fn quotient_dim_estimate(model: &Model, n: FracIndex, m: FracIndex, big_n: u32, w: u32) -> (usize, bool) {
    let total = model.basis_upto(big_n).len();
    let mut span = TruncatedSubspace::oprime(model, n, m);
    let mut previous = None;
    if w >= big_n + 2 {
        span.extend_to(model, w - 2);
        previous = Some(total - span.window(big_n).rank());
    }
    span.extend_to(model, w);
    let dim = total - span.window(big_n).rank();
    (dim, previous == Some(dim))
}
