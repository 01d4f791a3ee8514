//! Concrete vertex operator algebras with exact mode products.
//!
//! Two models are provided: the rank-one Heisenberg algebra `M(1)`, optionally
//! carrying the involution `a -> -a` (order `T = 2`), and the universal
//! Virasoro vacuum algebra at a rational central charge (`T = 1`).
//!
//! Mode products `u_j v` of basis monomials are computed by peeling the
//! outermost creation operator off `u = G_{m0} b` (with `G` the strong
//! generator `a` or `ω`) and applying the iterate identity
//!
//! ```text
//! (G_{m0} b)_j = sum_{i>=0} (-1)^i C(m0, i) ( G_{m0-i} b_{j+i} - (-1)^{m0} b_{m0+j-i} G_i )
//! ```
//!
//! together with the generator brackets `[a_m, a_n] = m δ_{m+n,0}` and
//! `[L(m), L(n)] = (m-n) L(m+n) + (m^3-m)/12 c δ_{m+n,0}`. Results are
//! memoized on `(u, j, w)` triples. Heisenberg modes are instead expanded
//! directly as normal-ordered products of derivatives of `a(x)`; the iterate
//! recursion stays available as [`Model::mode_mono_iterate`].

use dashmap::DashMap;
use num_traits::One;
use serde::Serialize;

use crate::linalg::SparseVec;
use crate::monomial::{partitions, Monomial, Vector};
use crate::rational::{factorial, frac, frac_binom, int, sign, Rational};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Heisenberg,
    Virasoro,
}

/// Serializable summary of a model.
#[derive(Clone, Debug, Serialize)]
pub struct ModelDescriptor {
    pub kind: ModelKind,
    #[serde(rename = "T")]
    pub t: u32,
    #[serde(rename = "centralCharge", skip_serializing_if = "Option::is_none")]
    pub central_charge: Option<String>,
    pub zeta: String,
}

pub struct Model {
    kind: ModelKind,
    t: u32,
    central_charge: Rational,
    memoize: bool,
    mode_memo: DashMap<(Monomial, i64, Monomial), Vector>,
    vir_memo: DashMap<(i64, Monomial), Vector>,
}

impl std::fmt::Debug for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Model")
            .field("kind", &self.kind)
            .field("t", &self.t)
            .field("central_charge", &crate::rational::to_string(&self.central_charge))
            .finish()
    }
}

impl Model {
    /// Rank-one Heisenberg algebra; `t = 2` equips it with the involution `a -> -a`.
    pub fn heisenberg(t: u32) -> Result<Self, Error> {
        if !(t == 1 || t == 2) {
            return Err(Error::UnsupportedOrder(t));
        }
        Ok(Self::build(ModelKind::Heisenberg, t, Rational::one()))
    }

    /// Universal Virasoro vacuum algebra of central charge `c`, with trivial automorphism.
    pub fn virasoro(c: Rational) -> Self {
        Self::build(ModelKind::Virasoro, 1, c)
    }

    fn build(kind: ModelKind, t: u32, central_charge: Rational) -> Self {
        Self {
            kind,
            t,
            central_charge,
            memoize: true,
            mode_memo: DashMap::new(),
            vir_memo: DashMap::new(),
        }
    }

    /// Same model with the mode memo tables disabled.
    pub fn without_memo(mut self) -> Self {
        self.memoize = false;
        self
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn central_charge(&self) -> &Rational {
        &self.central_charge
    }

    /// `e^{-2 pi i / T}`, which is rational for the supported orders.
    pub fn zeta(&self) -> Rational {
        if self.t == 2 {
            -Rational::one()
        } else {
            Rational::one()
        }
    }

    pub fn zeta_pow(&self, r: u32) -> Rational {
        sign(if self.t == 2 { r as i64 } else { 0 })
    }

    pub fn descriptor(&self) -> ModelDescriptor {
        ModelDescriptor {
            kind: self.kind,
            t: self.t,
            central_charge: (self.kind == ModelKind::Virasoro)
                .then(|| crate::rational::to_string(&self.central_charge)),
            zeta: crate::rational::to_string(&self.zeta()),
        }
    }

    fn min_part(&self) -> u32 {
        match self.kind {
            ModelKind::Heisenberg => 1,
            ModelKind::Virasoro => 2,
        }
    }

    /// Whether `k` can appear as a part of a basis monomial.
    pub fn is_valid_part(&self, k: u32) -> bool {
        k >= self.min_part()
    }

    /// Basis monomials of weight exactly `w`, in key order.
    pub fn basis(&self, w: u32) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = partitions(w, self.min_part()).into_iter().map(Monomial::from_parts).collect();
        out.sort();
        out
    }

    /// Basis monomials of weight at most `n`, in key order.
    pub fn basis_upto(&self, n: u32) -> Vec<Monomial> {
        (0..=n).flat_map(|w| self.basis(w)).collect()
    }

    /// The strong generator: `a` or `ω`.
    pub fn generator(&self) -> Monomial {
        Monomial::from_parts(vec![self.min_part()])
    }

    pub fn conformal_vector(&self) -> Vector {
        match self.kind {
            ModelKind::Heisenberg => Vector::term(Monomial::from_parts(vec![1, 1]), frac(1, 2)),
            ModelKind::Virasoro => Monomial::from_parts(vec![2]).as_vector(),
        }
    }

    pub fn vacuum(&self) -> Vector {
        Monomial::vacuum().as_vector()
    }

    /// `r` with `g` acting on `mono` by `zeta^r`.
    pub fn eigen_index(&self, mono: &Monomial) -> u32 {
        match (self.kind, self.t) {
            (ModelKind::Heisenberg, 2) => (mono.len() % 2) as u32,
            _ => 0,
        }
    }

    /// Mode `j` of the strong generator on a basis monomial.
    pub fn generator_mode(&self, j: i64, w: &Monomial) -> Vector {
        match self.kind {
            ModelKind::Heisenberg => heisenberg_mode(j, w),
            ModelKind::Virasoro => self.virasoro_l(j - 1, w),
        }
    }

    fn generator_mode_vec(&self, j: i64, w: &Vector) -> Vector {
        w.flat_map(|m| self.generator_mode(j, m))
    }

    /// `L(n)` on a Virasoro monomial, normal ordered.
    fn virasoro_l(&self, n: i64, w: &Monomial) -> Vector {
        let Some((k1, rest)) = w.split_first() else {
            return if n >= -1 { Vector::zero() } else { Monomial::from_parts(vec![(-n) as u32]).as_vector() };
        };
        if -n >= k1 as i64 {
            return w.prepend((-n) as u32).as_vector();
        }
        let key = (n, w.clone());
        if self.memoize {
            if let Some(hit) = self.vir_memo.get(&key) {
                return hit.clone();
            }
        }
        let k1 = k1 as i64;
        // L(n) L(-k1) X = L(-k1) L(n) X + (n + k1) L(n - k1) X + δ_{n,k1} c (n^3 - n)/12 X
        let inner = self.virasoro_l(n, &rest);
        let mut out = inner.flat_map(|m| self.virasoro_l(-k1, m));
        if n + k1 != 0 {
            out.add_scaled(&self.virasoro_l(n - k1, &rest), &int(n + k1));
        }
        if n == k1 {
            let central = &self.central_charge * frac(n * n * n - n, 12);
            out.add_term(rest.clone(), central);
        }
        if self.memoize {
            self.vir_memo.insert(key, out.clone());
        }
        out
    }

    /// `u_j w` for basis monomials.
    pub fn mode_mono(&self, u: &Monomial, j: i64, w: &Monomial) -> Vector {
        if (u.weight() + w.weight()) as i64 - j - 1 < 0 {
            return Vector::zero();
        }
        if u.is_vacuum() {
            return if j == -1 { w.as_vector() } else { Vector::zero() };
        }
        if *u == self.generator() {
            return self.generator_mode(j, w);
        }
        if self.kind == ModelKind::Virasoro {
            return self.mode_mono_iterate(u, j, w);
        }
        let key = (u.clone(), j, w.clone());
        if self.memoize {
            if let Some(hit) = self.mode_memo.get(&key) {
                return hit.clone();
            }
        }
        let out = heisenberg_normal_ordered(u.parts(), j, w);
        if self.memoize {
            self.mode_memo.insert(key, out.clone());
        }
        out
    }

    /// `u_j w` through the iterate identity alone, memoized when enabled.
    pub fn mode_mono_iterate(&self, u: &Monomial, j: i64, w: &Monomial) -> Vector {
        if (u.weight() + w.weight()) as i64 - j - 1 < 0 {
            return Vector::zero();
        }
        if u.is_vacuum() {
            return if j == -1 { w.as_vector() } else { Vector::zero() };
        }
        if *u == self.generator() {
            return self.generator_mode(j, w);
        }
        let key = (u.clone(), j, w.clone());
        if self.memoize {
            if let Some(hit) = self.mode_memo.get(&key) {
                return hit.clone();
            }
        }
        let (k, b) = u.split_first().expect("non-vacuum monomial");
        let m0 = match self.kind {
            ModelKind::Heisenberg => -(k as i64),
            ModelKind::Virasoro => 1 - k as i64,
        };
        let wb = b.weight() as i64;
        let ww = w.weight() as i64;
        let m0_sign = sign(m0);
        let mut out = Vector::zero();
        // G_{m0-i} b_{j+i} w, nonzero only while j + i < wt b + wt w.
        let mut i = 0i64;
        while j + i < wb + ww {
            let coeff = sign(i) * frac_binom(&int(m0), i as u64);
            let inner = self.mode_mono_iterate(&b, j + i, w);
            if !inner.is_zero() {
                out.add_scaled(&self.generator_mode_vec(m0 - i, &inner), &coeff);
            }
            i += 1;
        }
        debug_assert!(self.mode_mono_iterate(&b, j + i, w).is_zero());
        // b_{m0+j-i} G_i w, nonzero only while G_i does not lower below weight zero.
        let top = match self.kind {
            ModelKind::Heisenberg => ww,
            ModelKind::Virasoro => ww + 1,
        };
        for i in 0..=top {
            let lowered = self.generator_mode(i, w);
            if lowered.is_zero() {
                continue;
            }
            let coeff = -(sign(i) * frac_binom(&int(m0), i as u64) * &m0_sign);
            let inner = lowered.flat_map(|m| self.mode_mono_iterate(&b, m0 + j - i, m));
            out.add_scaled(&inner, &coeff);
        }
        if self.memoize {
            self.mode_memo.insert(key, out.clone());
        }
        out
    }

    /// `u_j v`, extended bilinearly.
    pub fn mode(&self, u: &Vector, j: i64, v: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (um, uc) in u {
            for (vm, vc) in v {
                out.add_scaled(&self.mode_mono(um, j, vm), &(uc * vc));
            }
        }
        out
    }

    /// `L(k) u = ω_{k+1} u`.
    pub fn l_op(&self, k: i64, u: &Vector) -> Vector {
        self.mode(&self.conformal_vector(), k + 1, u)
    }

    /// `sum_k y^k / k! L(1)^k u`; finite because `L(1)` lowers weight.
    pub fn exp_l1(&self, y: &Rational, u: &Vector) -> Vector {
        let mut out = u.clone();
        let mut term = u.clone();
        let mut k = 0u64;
        loop {
            term = self.l_op(1, &term);
            if term.is_zero() {
                break;
            }
            k += 1;
            let mut scaled = term.clone();
            let mut c = Rational::one();
            for _ in 0..k {
                c *= y;
            }
            scaled.scale(&(c / factorial(k)));
            out += &scaled;
        }
        out
    }

    /// `(-1)^{L(0)} u`.
    pub fn parity(&self, u: &Vector) -> Vector {
        SparseVec::from_terms(u.iter().map(|(m, c)| (m.clone(), sign(m.weight() as i64) * c)))
    }

    /// `θ = e^{L(1)} (-1)^{L(0)}`.
    pub fn theta(&self, u: &Vector) -> Vector {
        self.exp_l1(&Rational::one(), &self.parity(u))
    }

    /// Component of `u` in the eigenspace `V^r`.
    pub fn g_project(&self, u: &Vector, r: u32) -> Result<Vector, Error> {
        if r >= self.t {
            return Err(Error::EigenIndexOutOfRange { r, t: self.t });
        }
        Ok(u.filter(|m| self.eigen_index(m) == r))
    }

    /// The automorphism `g`.
    pub fn g_action(&self, u: &Vector) -> Vector {
        SparseVec::from_terms(u.iter().map(|(m, c)| (m.clone(), self.zeta_pow(self.eigen_index(m)) * c)))
    }

    /// Homogeneous components of `u`, by increasing weight.
    pub fn scale_l0(&self, u: &Vector) -> Vec<(u32, Vector)> {
        let mut out: Vec<(u32, Vector)> = Vec::new();
        for (m, c) in u {
            let w = m.weight();
            match out.last_mut() {
                Some((lw, v)) if *lw == w => v.add_term(m.clone(), c.clone()),
                _ => out.push((w, Vector::term(m.clone(), c.clone()))),
            }
        }
        out
    }

    /// Components of `u` that are simultaneously homogeneous and `g`-eigen.
    pub fn split_components(&self, u: &Vector) -> Vec<(u32, u32, Vector)> {
        let mut buckets: std::collections::BTreeMap<(u32, u32), Vector> = Default::default();
        for (m, c) in u {
            buckets
                .entry((m.weight(), self.eigen_index(m)))
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        buckets.into_iter().map(|((w, r), v)| (w, r, v)).collect()
    }

    /// Renders `v` in the element syntax, e.g. `1/2 a[-1]^2|0> - a[-3]a[-1]|0>`.
    pub fn render(&self, v: &Vector) -> String {
        let gen = match self.kind {
            ModelKind::Heisenberg => 'a',
            ModelKind::Virasoro => 'L',
        };
        let mut out = String::new();
        for (mono, c) in v.iter().rev() {
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
                out.push_str(&crate::rational::to_string(&abs));
                out.push(' ');
            }
            let parts = mono.parts();
            let mut i = 0;
            while i < parts.len() {
                let k = parts[i];
                let run = parts[i..].iter().take_while(|&&p| p == k).count();
                out.push_str(&format!("{gen}[-{k}]"));
                if run > 1 {
                    out.push_str(&format!("^{run}"));
                }
                i += run;
            }
            out.push_str("|0>");
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn memo_len(&self) -> usize {
        self.mode_memo.len() + self.vir_memo.len()
    }
}

/// Coefficient of `a_n x^{-n-k}` in `∂^{(k-1)} a(x)`, i.e. `C(-n-1, k-1)`.
fn derivative_coeff(n: i64, k: u32) -> Rational {
    frac_binom(&int(-n - 1), (k - 1) as u64)
}

/// `u_j w` for `u = a_{-k_1} ... a_{-k_r} 1`, read off from the normal-ordered
/// product `:∂^{(k_1-1)} a(x) ... ∂^{(k_r-1)} a(x):`. Annihilation modes
/// `a_n` (`n >= 1`) act first, creation modes `a_{-m}` (`m >= k_i`) last.
fn heisenberg_normal_ordered(parts: &[u32], j: i64, w: &Monomial) -> Vector {
    let wt_u: i64 = parts.iter().map(|&k| k as i64).sum();
    let target = j + 1 - wt_u;
    let mut out = Vector::zero();
    let mut creators = Vec::new();
    annihilate(parts, 0, target, w.weight() as i64, w.as_vector(), &mut creators, &mut out);
    out
}

fn annihilate(
    parts: &[u32],
    idx: usize,
    target: i64,
    budget: i64,
    acc: Vector,
    creators: &mut Vec<u32>,
    out: &mut Vector,
) {
    if acc.is_zero() {
        return;
    }
    if idx == parts.len() {
        // creation values m_i >= k_i summing to -target
        let need = -target;
        let floor: i64 = creators.iter().map(|&k| k as i64).sum();
        if need < floor || (creators.is_empty() && need != 0) {
            return;
        }
        let mut chosen = Vec::with_capacity(creators.len());
        create(creators, 0, need, floor, Rational::one(), &mut chosen, &acc, out);
        return;
    }
    let k = parts[idx];
    creators.push(k);
    annihilate(parts, idx + 1, target, budget, acc.clone(), creators, out);
    creators.pop();
    for n in 1..=budget {
        let next = acc.flat_map(|m| heisenberg_mode(n, m));
        if next.is_zero() {
            continue;
        }
        let next = next.scaled(&derivative_coeff(n, k));
        annihilate(parts, idx + 1, target - n, budget - n, next, creators, out);
    }
}

#[allow(clippy::too_many_arguments)]
fn create(
    creators: &[u32],
    idx: usize,
    remaining: i64,
    floor: i64,
    coeff: Rational,
    chosen: &mut Vec<u32>,
    acc: &Vector,
    out: &mut Vector,
) {
    if idx == creators.len() {
        debug_assert_eq!(remaining, 0);
        for (m, c) in acc {
            let mut parts = m.parts().to_vec();
            parts.extend_from_slice(chosen);
            out.add_term(Monomial::from_parts(parts), c * &coeff);
        }
        return;
    }
    let k = creators[idx] as i64;
    let rest_floor = floor - k;
    let top = if idx + 1 == creators.len() { remaining } else { remaining - rest_floor };
    let bottom = if idx + 1 == creators.len() { remaining } else { k };
    for m in bottom..=top {
        chosen.push(m as u32);
        let c = &coeff * derivative_coeff(-m, k as u32);
        create(creators, idx + 1, remaining - m, rest_floor, c, chosen, acc, out);
        chosen.pop();
    }
}

/// `a_j` on a Heisenberg monomial.
fn heisenberg_mode(j: i64, w: &Monomial) -> Vector {
    match j.cmp(&0) {
        std::cmp::Ordering::Less => w.with_part((-j) as u32).as_vector(),
        std::cmp::Ordering::Equal => Vector::zero(),
        std::cmp::Ordering::Greater => {
            let k = j as u32;
            let count = w.count(k);
            match w.without_part(k) {
                Some(rest) => Vector::term(rest, int(j * count as i64)),
                None => Vector::zero(),
            }
        }
    }
}
