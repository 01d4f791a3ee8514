//! Modules for the Heisenberg algebra: `V` itself and the σ-twisted Fock space.
//!
//! The twisted Fock space is spanned by monomials `a(-r_1) ... a(-r_k) |σ>`
//! with `r_i ∈ 1/2 + ℕ`, and `[a(r), a(s)] = r δ_{r+s,0}`. Fields of composite
//! vectors come from the twisted iterate identity with `u = a ∈ V^1`,
//! `l = -k` and `m0 = 1/2`:
//!
//! ```text
//! (a_{-k} b)_Q = sum_i (-1)^i C(-k, i) ( a(1/2-k-i) b_{Q-1/2+i} - (-1)^k b_{Q-1/2-k-i} a(1/2+i) )
//!                - sum_{i>=1} C(1/2, i) (a_{-k+i} b)_{Q-i}
//! ```
//!
//! which is triangular in the weight of the vector whose field is computed.

use std::cmp::Ordering;
use std::fmt;

use dashmap::DashMap;
use num_traits::One;
use serde_json::json;

use crate::frac::FracIndex;
use crate::linalg::{kernel, SparseVec};
use crate::model::{Model, ModelKind};
use crate::monomial::{odd_partitions, Monomial, Vector};
use crate::rational::{factorial, frac, frac_binom, int, sign, to_string, Rational};
use crate::report::{self, Check, Report, Status};
use crate::Error;

/// `a(-p_1/2) ... a(-p_k/2) |σ>` with odd `p_i`, stored in descending order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TwistedMonomial(Vec<u32>);

pub type TwistedVector = SparseVec<TwistedMonomial>;

impl TwistedMonomial {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    /// From doubled parts `2r`; each must be odd.
    pub fn from_doubled(mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|p| p % 2 == 1), "twisted parts are half-odd-integers");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn doubled_parts(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> FracIndex {
        FracIndex::new(self.0.iter().sum::<u32>() as i64, 2)
    }

    fn doubled_degree(&self) -> i64 {
        self.0.iter().sum::<u32>() as i64
    }

    fn with_part(&self, p: u32) -> Self {
        let mut parts = self.0.clone();
        let pos = parts.partition_point(|&x| x > p);
        parts.insert(pos, p);
        Self(parts)
    }

    fn without_part(&self, p: u32) -> Option<(usize, Self)> {
        let count = self.0.iter().filter(|&&x| x == p).count();
        let pos = self.0.iter().position(|&x| x == p)?;
        let mut parts = self.0.clone();
        parts.remove(pos);
        Some((count, Self(parts)))
    }

    pub fn as_vector(&self) -> TwistedVector {
        TwistedVector::unit(self.clone())
    }
}

impl Ord for TwistedMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.doubled_degree().cmp(&other.doubled_degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for TwistedMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for TwistedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/2", self.0)
    }
}

/// Twisted monomials of degree `d/2`.
pub fn twisted_basis(doubled_degree: u32) -> Vec<TwistedMonomial> {
    odd_partitions(doubled_degree).into_iter().map(TwistedMonomial).collect()
}

/// A weak (twisted) module on which basis vectors of `V` act by modes.
pub trait ModeModule: Sync {
    type Key: Ord + Clone + std::hash::Hash + Send + Sync + fmt::Debug;

    fn model(&self) -> &Model;

    /// `u_idx w`; zero when `idx` lies outside the coset attached to the eigenspace of `u`.
    fn mode(&self, u: &Monomial, idx: FracIndex, w: &Self::Key) -> SparseVec<Self::Key>;

    fn degree(&self, w: &Self::Key) -> FracIndex;

    fn render(&self, w: &SparseVec<Self::Key>) -> String;

    /// Whether `idx` is an admissible mode index for `u ∈ V^r`.
    fn index_matches(&self, u: &Monomial, idx: FracIndex) -> bool;

    fn act(&self, u: &Vector, idx: FracIndex, w: &SparseVec<Self::Key>) -> SparseVec<Self::Key> {
        let mut out = SparseVec::zero();
        for (um, uc) in u {
            for (wm, wc) in w {
                out.add_scaled(&self.mode(um, idx, wm), &(uc * wc));
            }
        }
        out
    }

    fn max_degree(&self, w: &SparseVec<Self::Key>) -> Option<FracIndex> {
        w.keys().map(|k| self.degree(k)).max()
    }
}

/// `V` as a module over itself, with integral mode indices.
pub struct SelfModule<'a> {
    model: &'a Model,
}

impl<'a> SelfModule<'a> {
    pub fn new(model: &'a Model) -> Self {
        Self { model }
    }
}

impl ModeModule for SelfModule<'_> {
    type Key = Monomial;

    fn model(&self) -> &Model {
        self.model
    }

    fn mode(&self, u: &Monomial, idx: FracIndex, w: &Monomial) -> Vector {
        match idx.as_integer() {
            Some(j) => self.model.mode_mono(u, j, w),
            None => Vector::zero(),
        }
    }

    fn degree(&self, w: &Monomial) -> FracIndex {
        FracIndex::integer(w.weight() as i64, 1)
    }

    fn render(&self, w: &Vector) -> String {
        self.model.render(w)
    }

    fn index_matches(&self, _u: &Monomial, idx: FracIndex) -> bool {
        idx.is_integer()
    }
}

/// The σ-twisted Fock module of the rank-one Heisenberg algebra, `σ(a) = -a`.
pub struct TwistedFock {
    model: Model,
    memo: DashMap<(Monomial, i64, TwistedMonomial), TwistedVector>,
}

impl Default for TwistedFock {
    fn default() -> Self {
        Self::new()
    }
}

impl TwistedFock {
    pub fn new() -> Self {
        Self { model: Model::heisenberg(2).expect("order 2 is supported"), memo: DashMap::new() }
    }

    /// `a(s/2) w` for odd `s`.
    fn generator(&self, s: i64, w: &TwistedMonomial) -> TwistedVector {
        if s < 0 {
            return w.with_part((-s) as u32).as_vector();
        }
        match w.without_part(s as u32) {
            Some((count, rest)) => TwistedVector::term(rest, frac(s * count as i64, 2)),
            None => TwistedVector::zero(),
        }
    }

    fn generator_vec(&self, s: i64, w: &TwistedVector) -> TwistedVector {
        w.flat_map(|k| self.generator(s, k))
    }

    /// `u_{q/2} w` for a basis monomial `u`.
    fn mode_doubled(&self, u: &Monomial, q: i64, w: &TwistedMonomial) -> TwistedVector {
        let r = self.model.eigen_index(u) as i64;
        if (q - r).rem_euclid(2) != 0 {
            return TwistedVector::zero();
        }
        // degree of the result is deg w + wt u - Q - 1
        if w.doubled_degree() + 2 * u.weight() as i64 - q - 2 < 0 {
            return TwistedVector::zero();
        }
        let Some((k, b)) = u.split_first() else {
            return if q == -2 { w.as_vector() } else { TwistedVector::zero() };
        };
        let key = (u.clone(), q, w.clone());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = self.iterate(k as i64, &b, q, w);
        debug_assert!(out.keys().all(|m| m.doubled_degree() == w.doubled_degree() + 2 * u.weight() as i64 - q - 2));
        self.memo.insert(key, out.clone());
        out
    }

    fn iterate(&self, k: i64, b: &Monomial, q: i64, w: &TwistedMonomial) -> TwistedVector {
        let wv = w.as_vector();
        let n0 = q - 1;
        let deg = w.doubled_degree();
        let wt_b = 2 * b.weight() as i64;
        let mut out = TwistedVector::zero();
        let mut i = 0i64;
        while n0 + 2 * i <= wt_b - 2 + deg {
            let c = sign(i) * frac_binom(&int(-k), i as u64);
            let bw = self.act_doubled(b, n0 + 2 * i, &wv);
            if !bw.is_zero() {
                out.add_scaled(&self.generator_vec(1 - 2 * k - 2 * i, &bw), &c);
            }
            i += 1;
        }
        let mut i = 0i64;
        while 2 * i < deg {
            let c = sign(i) * frac_binom(&int(-k), i as u64) * sign(k + 1);
            let aw = self.generator(1 + 2 * i, w);
            if !aw.is_zero() {
                out.add_scaled(&self.act_doubled(b, n0 - 2 * k - 2 * i, &aw), &c);
            }
            i += 1;
        }
        let half = frac(1, 2);
        for i in 1..=(k + b.weight() as i64) {
            let lower = self.model.generator_mode(-k + i, b);
            if lower.is_zero() {
                continue;
            }
            let c = -frac_binom(&half, i as u64);
            for (lm, lc) in &lower {
                out.add_scaled(&self.mode_doubled(lm, q - 2 * i, w), &(&c * lc));
            }
        }
        out
    }

    fn act_doubled(&self, u: &Monomial, q: i64, w: &TwistedVector) -> TwistedVector {
        let mut out = TwistedVector::zero();
        for (wm, wc) in w {
            out.add_scaled(&self.mode_doubled(u, q, wm), wc);
        }
        out
    }

    /// `L(0) = ω_1` with `ω = a_{-1}^2 1 / 2`.
    pub fn l0(&self, w: &TwistedVector) -> TwistedVector {
        self.act(&self.model.conformal_vector(), FracIndex::new(2, 2), w)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

impl ModeModule for TwistedFock {
    type Key = TwistedMonomial;

    fn model(&self) -> &Model {
        &self.model
    }

    fn mode(&self, u: &Monomial, idx: FracIndex, w: &TwistedMonomial) -> TwistedVector {
        match idx.with_t(2) {
            Some(i) => self.mode_doubled(u, i.num(), w),
            None => TwistedVector::zero(),
        }
    }

    fn degree(&self, w: &TwistedMonomial) -> FracIndex {
        w.degree()
    }

    fn render(&self, w: &TwistedVector) -> String {
        let mut out = String::new();
        for (mono, c) in w.iter().rev() {
            let negative = crate::rational::is_negative(c);
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = if negative { -c.clone() } else { c.clone() };
            if !abs.is_one() {
                out.push_str(&to_string(&abs));
                out.push(' ');
            }
            for p in mono.doubled_parts() {
                out.push_str(&format!("a(-{p}/2)"));
            }
            out.push_str("|σ>");
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    fn index_matches(&self, u: &Monomial, idx: FracIndex) -> bool {
        match idx.with_t(2) {
            Some(i) => (i.num() - self.model.eigen_index(u) as i64).rem_euclid(2) == 0,
            None => false,
        }
    }
}

/// `u_idx w` on the twisted Fock module, with a flag for an index outside the coset of `u`.
pub fn twisted_mode_action(fock: &TwistedFock, u: &Vector, idx: FracIndex, w: &TwistedVector) -> (TwistedVector, bool) {
    let mismatch = u.keys().any(|m| !fock.index_matches(m, idx));
    (fock.act(u, idx, w), mismatch)
}

/// A finite window of `Ω_m`, with the caps that define it.
#[derive(Clone, Debug)]
pub struct OmegaWindow {
    pub m: FracIndex,
    pub degree_cap: u32,
    pub probe_cap: u32,
    pub basis: Vec<TwistedVector>,
}

/// Solves `u_{wt u - 1 + i} w = 0` for probes `u` of weight `<= probe_cap` and
/// `m < i <= m + degree_cap`, on twisted vectors of degree `<= degree_cap`.
pub fn omega_space(fock: &TwistedFock, m: FracIndex, degree_cap: u32, probe_cap: u32) -> OmegaWindow {
    let unknowns: Vec<TwistedMonomial> = (0..=2 * degree_cap).flat_map(twisted_basis).collect();
    let probes = fock.model().basis_upto(probe_cap);
    let mut conditions: Vec<(Monomial, FracIndex)> = Vec::new();
    let lo = m.with_t(2).expect("grades lie in (1/2)Z").num();
    for u in &probes {
        for i in (lo + 1)..=(lo + 2 * degree_cap as i64) {
            let idx = FracIndex::new(2 * (u.weight() as i64 - 1) + i, 2);
            if fock.index_matches(u, idx) {
                conditions.push((u.clone(), idx));
            }
        }
    }
    let images: Vec<SparseVec<(usize, TwistedMonomial)>> = unknowns
        .iter()
        .map(|w| {
            let mut img = SparseVec::zero();
            for (ci, (u, idx)) in conditions.iter().enumerate() {
                let out = fock.mode(u, *idx, w);
                for (k, c) in &out {
                    img.add_term((ci, k.clone()), c.clone());
                }
            }
            img
        })
        .collect();
    let basis = kernel(&images)
        .into_iter()
        .map(|combo| combo.map_keys(|j| unknowns[*j].clone()))
        .collect();
    OmegaWindow { m, degree_cap, probe_cap, basis }
}

/// `Res_x x^{m-n-1} Y_M(x^{L(0)} u, x) = sum_h u^{(h)}_{h+m-n-1}` applied to every window vector.
pub fn omega_lemma_check(fock: &TwistedFock, u: &Vector, n: FracIndex, m: FracIndex, window: &OmegaWindow) -> Report {
    let model = fock.model();
    let mut report = Report::new(
        "omega-lemma",
        json!({
            "n": report::fi(n), "m": report::fi(m), "u": report::vector(model, u),
            "degreeCap": window.degree_cap, "probeCap": window.probe_cap, "windowDim": window.basis.len(),
        }),
    );
    report.note("checked on the σ-twisted Fock module only, on the Ω window defined by the recorded caps");
    for w in &window.basis {
        let mut total = TwistedVector::zero();
        for (h, _, comp) in model.split_components(u) {
            let idx = FracIndex::integer(h as i64 - 1, 2) + m - n;
            total += &fock.act(&comp, idx, w);
        }
        let inputs = json!({"w": fock.render(w)});
        report.push(if total.is_zero() {
            Check::new("annihilates", inputs, Status::Passed)
        } else {
            Check::new("annihilates", inputs, Status::Failed).with_detail(fock.render(&total))
        });
    }
    report
}

fn rpow(x: &Rational, k: u64) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * x)
}

/// Both sides of the residue identity for the `z0`-shifted field, applied to `w`.
pub fn z0_shift_residue_sides<M: ModeModule>(
    module: &M,
    v: &Vector,
    w: &SparseVec<M::Key>,
    z0: &Rational,
    m: FracIndex,
) -> (SparseVec<M::Key>, SparseVec<M::Key>) {
    let model = module.model();
    let mut lhs = SparseVec::zero();
    let mut rhs = SparseVec::zero();
    let Some(top_deg) = module.max_degree(w) else {
        return (lhs, rhs);
    };
    let neg = -z0.clone();
    for (h, vh) in model.scale_l0(v) {
        let h = h as i64;
        // u_n w = 0 once n > wt u - 1 + deg w
        let span = (top_deg.add_int(h - 1) - m).floor();
        let mut vj = vh.clone();
        let mut j = 0u64;
        while !vj.is_zero() {
            let pre = rpow(&neg, j) / factorial(j);
            for d in 0..=span.max(-1) {
                let idx = m.add_int(d);
                let act = module.act(&vj, idx, w);
                if act.is_zero() {
                    continue;
                }
                let n_rat = idx.to_rational();
                // literal substitution x -> x/(1 + z0 x), collecting (1 + z0 x)^{j - 2h + n + 1}
                let cl = frac_binom(&(int(j as i64 - 2 * h + 1) + &n_rat), d as u64) * rpow(z0, d as u64);
                let cr = frac_binom(&(int(2 * h - 2 - j as i64) - m.to_rational()), d as u64) * rpow(&neg, d as u64);
                lhs.add_scaled(&act, &(&pre * cl));
                rhs.add_scaled(&act, &(&pre * cr));
            }
            vj = model.l_op(1, &vj);
            j += 1;
        }
    }
    (lhs, rhs)
}

/// `Res_x x^m Y^{[z0]}(v, x) w = Res_x x^m (1 - z0 x)^{2 wt v - m - 2} Y(e^{-z0 (1 - z0 x)^{-1} L(1)} v, x) w`.
pub fn z0_shift_residue_check<M: ModeModule>(
    module: &M,
    kind: &str,
    v: &Vector,
    w: &SparseVec<M::Key>,
    z0: &Rational,
    m: FracIndex,
) -> Report {
    let model = module.model();
    let (lhs, rhs) = z0_shift_residue_sides(module, v, w, z0, m);
    let mut report = Report::new(
        "z0-shift",
        json!({
            "module": kind, "v": report::vector(model, v), "w": module.render(w),
            "z0": report::q(z0), "m": report::fi(m),
        }),
    );
    let inputs = json!({"lhs": module.render(&lhs), "rhs": module.render(&rhs)});
    report.push(Check::new("residue identity", inputs, if lhs == rhs { Status::Passed } else { Status::Failed }));
    report
}

/// The eigenvalue of `L(0)` on the twisted vacuum, if it is an eigenvector.
pub fn twisted_vacuum_weight(fock: &TwistedFock) -> Result<Rational, Error> {
    let vac = TwistedMonomial::vacuum();
    let image = fock.l0(&vac.as_vector());
    let c = image.coeff(&vac);
    if image == vac.as_vector().scaled(&c) {
        Ok(c)
    } else {
        Err(Error::Unsupported("twisted vacuum is not an L(0)-eigenvector".into()))
    }
}

/// Whether `model` carries the twisted Fock module.
pub fn supports_twisted(model: &Model) -> bool {
    model.kind() == ModelKind::Heisenberg && model.t() == 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tm(parts: &[u32]) -> TwistedVector {
        TwistedMonomial::from_doubled(parts.to_vec()).as_vector()
    }

    fn mono(parts: &[u32]) -> Vector {
        Monomial::from_parts(parts.to_vec()).as_vector()
    }

    #[test]
    fn generator_modes() {
        let fock = TwistedFock::new();
        let a = mono(&[1]);
        let vac = tm(&[]);
        let created = fock.act(&a, FracIndex::new(-1, 2), &vac);
        assert_eq!(created, tm(&[1]));
        let back = fock.act(&a, FracIndex::new(1, 2), &created);
        assert_eq!(back, vac.scaled(&frac(1, 2)));
        let (zero, flagged) = twisted_mode_action(&fock, &a, FracIndex::new(0, 2), &vac);
        assert!(zero.is_zero() && flagged);
    }

    #[test]
    fn vacuum_weight_is_one_sixteenth() {
        let fock = TwistedFock::new();
        assert_eq!(twisted_vacuum_weight(&fock).unwrap(), frac(1, 16));
        for d in 1..=6 {
            for w in twisted_basis(d) {
                let expect = w.as_vector().scaled(&(frac(1, 16) + frac(d as i64, 2)));
                assert_eq!(fock.l0(&w.as_vector()), expect);
            }
        }
    }

    #[test]
    fn omega_examples() {
        let fock = TwistedFock::new();
        let zero = omega_space(&fock, FracIndex::new(0, 2), 3, 3);
        assert_eq!(zero.basis, vec![tm(&[])]);
        let half = omega_space(&fock, FracIndex::new(1, 2), 3, 3);
        assert_eq!(half.basis.len(), 2);
        let trivial = omega_space(&fock, FracIndex::new(0, 2), 0, 3);
        assert_eq!(trivial.basis, vec![tm(&[])]);
    }

    #[test]
    fn z0_examples() {
        let h2 = Model::heisenberg(2).unwrap();
        let selfv = SelfModule::new(&h2);
        let a = mono(&[1]);
        for z0 in [int(0), int(-1), frac(1, 2)] {
            let rep = z0_shift_residue_check(&selfv, "selfV", &a, &a, &z0, FracIndex::new(0, 2));
            assert_eq!(rep.count(Status::Failed), 0);
        }
        let fock = TwistedFock::new();
        let rep = z0_shift_residue_check(&fock, "twistedFock", &a, &tm(&[]), &int(-1), FracIndex::new(-1, 2));
        assert_eq!(rep.count(Status::Failed), 0);
        let (lhs, _) = z0_shift_residue_sides(&selfv, &a, &a, &int(0), FracIndex::new(-2, 2));
        assert_eq!(lhs, h2.mode(&a, -1, &a));
    }
}
