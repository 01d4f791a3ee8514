//! Bilinear operations defining the twisted Zhu bimodules.
//!
//! Every residue `Res_x (1+x)^α x^{-E} Y(u, x) v` is expanded as the finite sum
//! `sum_j C(α, j) u_{j-E} v`, which stops once `j - E >= wt u + wt v`.
//! Products dispatch on the homogeneous `g`-eigencomponents of `u`; `v` is
//! never decomposed.

use num_traits::Zero;

use crate::frac::FracIndex;
use crate::model::Model;
use crate::monomial::{Monomial, Vector};
use crate::rational::{frac, frac_binom, int, sign, Rational};
use crate::Error;

/// `δ_i(r)`: 1 when `r <= i <= T-1`, else 0; `δ_i(T) = 0`.
pub fn delta(i: u32, r: u32, t: u32) -> Result<u32, Error> {
    if i >= t || r > t {
        return Err(Error::DeltaOutOfRange { i, r, t });
    }
    Ok(u32::from(r < t && r <= i))
}

fn delta_unchecked(i: u32, r: u32, t: u32) -> i64 {
    delta(i, r, t).expect("indices come from bar components") as i64
}

/// Grades `n, m, p` of a product `u *^n_{g,m,p} v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GradeTriple {
    pub n: FracIndex,
    pub m: FracIndex,
    pub p: FracIndex,
}

impl GradeTriple {
    pub fn new(n: FracIndex, m: FracIndex, p: FracIndex) -> Result<Self, Error> {
        for g in [n, m, p] {
            if !g.is_nonnegative() {
                return Err(Error::NegativeGrade(g.to_string()));
            }
        }
        Ok(Self { n, m, p })
    }
}

/// `Res_x (1+x)^alpha x^{-pole} Y(u, x) v` for a basis monomial `u`.
pub fn residue(model: &Model, u: &Monomial, v: &Vector, alpha: &Rational, pole: i64) -> Vector {
    let top = v.keys().map(Monomial::weight).max();
    let Some(top) = top else {
        return Vector::zero();
    };
    let bound = (u.weight() + top) as i64;
    let uv = u.as_vector();
    let mut out = Vector::zero();
    let mut j = 0i64;
    while j - pole < bound {
        let c = frac_binom(alpha, j as u64);
        if !c.is_zero() {
            out.add_scaled(&model.mode(&uv, j - pole, v), &c);
        }
        j += 1;
    }
    debug_assert!(model.mode(&uv, j - pole, v).is_zero(), "annihilation bound violated");
    out
}

/// Exponent data shared by the circle product and the product `*`.
struct Shape {
    alpha: Rational,
    dm: i64,
    dn: i64,
}

fn shape(model: &Model, u: &Monomial, m: FracIndex) -> (u32, Shape) {
    let t = model.t();
    let r = model.eigen_index(u);
    let dm = delta_unchecked(m.bar(), r, t);
    let alpha = int(u.weight() as i64 + m.floor() + dm - 1) + frac(r as i64, t as i64);
    (r, Shape { alpha, dm, dn: 0 })
}

fn shape_nm(model: &Model, u: &Monomial, n: FracIndex, m: FracIndex) -> (u32, Shape) {
    let t = model.t();
    let (r, mut s) = shape(model, u, m);
    s.dn = delta_unchecked(n.bar(), t - r, t);
    (r, s)
}

/// `u *^n_{g,m,p} v`.
pub fn star(model: &Model, u: &Vector, v: &Vector, n: FracIndex, m: FracIndex, p: FracIndex) -> Vector {
    let t = model.t() as i64;
    let mut out = Vector::zero();
    for (um, uc) in u {
        let (r, s) = shape_nm(model, um, n, m);
        if (p.bar() as i64 - n.bar() as i64 - r as i64).rem_euclid(t) != 0 {
            continue;
        }
        let base = m.floor() + n.floor() - p.floor() + s.dm + s.dn;
        let mut term = Vector::zero();
        for i in 0..=p.floor() {
            let c = sign(i) * frac_binom(&int(base - 1 + i), i as u64);
            if c.is_zero() {
                continue;
            }
            term.add_scaled(&residue(model, um, v, &s.alpha, base + i), &c);
        }
        out.add_scaled(&term, uc);
    }
    out
}

/// `u ∘^n_{g,m} v`.
pub fn circle(model: &Model, u: &Vector, v: &Vector, n: FracIndex, m: FracIndex) -> Vector {
    residue_family_unchecked(model, u, v, n, m, 0, 0)
}

/// `Res_x (1+x)^{wt u + δ + ⌊m⌋ + r/T + s - 1} x^{-(⌊m⌋+⌊n⌋+δ+δ+k+1)} Y(u, x) v` for `k >= s >= 0`.
pub fn residue_family(
    model: &Model,
    u: &Vector,
    v: &Vector,
    n: FracIndex,
    m: FracIndex,
    k: u64,
    s: u64,
) -> Result<Vector, Error> {
    if k < s {
        return Err(Error::ResidueOrder { k, s });
    }
    Ok(residue_family_unchecked(model, u, v, n, m, k, s))
}

fn residue_family_unchecked(model: &Model, u: &Vector, v: &Vector, n: FracIndex, m: FracIndex, k: u64, s: u64) -> Vector {
    let mut out = Vector::zero();
    for (um, uc) in u {
        let (_, sh) = shape_nm(model, um, n, m);
        let alpha = &sh.alpha + int(s as i64);
        let pole = m.floor() + n.floor() + sh.dm + sh.dn + k as i64 + 1;
        out.add_scaled(&residue(model, um, v, &alpha, pole), uc);
    }
    out
}

/// `(L(-1) + L(0) + m - n) u`.
pub fn l_shift(model: &Model, u: &Vector, n: FracIndex, m: FracIndex) -> Vector {
    let mut out = model.l_op(-1, u);
    out += &model.l_op(0, u);
    out.add_scaled(u, &(m - n).to_rational());
    out
}

/// `x *^n_{m,p3} ((a *^{p3}_{p1,p2} b) *^{p3}_{m,p1} c - a *^{p3}_{m,p2} (b *^{p2}_{m,p1} c))`.
#[allow(clippy::too_many_arguments)]
pub fn o2_generator(
    model: &Model,
    x: &Vector,
    a: &Vector,
    b: &Vector,
    c: &Vector,
    n: FracIndex,
    m: FracIndex,
    p1: FracIndex,
    p2: FracIndex,
    p3: FracIndex,
) -> Vector {
    let ab = star(model, a, b, p3, p1, p2);
    let left = star(model, &ab, c, p3, m, p1);
    let bc = star(model, b, c, p2, m, p1);
    let right = star(model, a, &bc, p3, m, p2);
    let assoc = &left - &right;
    if assoc.is_zero() {
        return assoc;
    }
    star(model, x, &assoc, n, m, p3)
}

/// `(x *^n_{p1,p2} w) *^n_{m,p1} y` for `w` in `O'_{g,p2,p1}`.
#[allow(clippy::too_many_arguments)]
pub fn o3_generator(
    model: &Model,
    x: &Vector,
    w: &Vector,
    y: &Vector,
    n: FracIndex,
    m: FracIndex,
    p1: FracIndex,
    p2: FracIndex,
) -> Vector {
    if w.is_zero() {
        return Vector::zero();
    }
    let xw = star(model, x, w, n, p1, p2);
    star(model, &xw, y, n, m, p1)
}

/// Zhu's product `Res_x (1+x)^{wt u} x^{-1} Y(u, x) v`, written out directly.
pub fn zhu_product(model: &Model, u: &Vector, v: &Vector) -> Vector {
    let mut out = Vector::zero();
    for (um, uc) in u {
        let wt = um.weight() as i64;
        let uv = um.as_vector();
        for j in 0..=wt {
            let c = frac_binom(&int(wt), j as u64) * uc;
            out.add_scaled(&model.mode(&uv, j - 1, v), &c);
        }
    }
    out
}

/// Whether the star product with `u` in `V^r` survives the congruence gate.
pub fn star_gate(model: &Model, r: u32, n: FracIndex, p: FracIndex) -> bool {
    (p.bar() as i64 - n.bar() as i64 - r as i64).rem_euclid(model.t() as i64) == 0
}

/// Highest weight that `circle` can produce from inputs of total weight `w`.
pub fn circle_weight_reach(model: &Model, n: FracIndex, m: FracIndex) -> i64 {
    let t = model.t();
    (0..t)
        .map(|r| {
            m.floor() + n.floor() + delta_unchecked(m.bar(), r, t) + delta_unchecked(n.bar(), t - r, t)
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(parts: &[u32]) -> Vector {
        Monomial::from_parts(parts.to_vec()).as_vector()
    }

    fn f(num: i64, t: u32) -> FracIndex {
        FracIndex::new(num, t)
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(1, 1, 2), Ok(1));
        assert_eq!(delta(0, 1, 2), Ok(0));
        assert_eq!(delta(1, 2, 2), Ok(0));
        assert_eq!(delta(0, 0, 1), Ok(1));
        assert!(delta(2, 0, 2).is_err());
        assert!(delta(0, 3, 2).is_err());
    }

    #[test]
    fn star_examples() {
        let h2 = Model::heisenberg(2).unwrap();
        let z = f(0, 2);
        let a = mono(&[1]);
        assert!(star(&h2, &a, &a, z, z, z).is_zero());
        let v = &mono(&[2, 1]) + &mono(&[3]);
        assert_eq!(star(&h2, &h2.vacuum(), &v, z, z, z), v);

        let h1 = Model::heisenberg(1).unwrap();
        let z = f(0, 1);
        assert_eq!(star(&h1, &a, &a, z, z, z), mono(&[1, 1]));

        let vir = Model::virasoro(frac(1, 2));
        let w = vir.conformal_vector();
        let expected = &(&mono(&[2, 2]) + &mono(&[3]).scaled(&int(2))) + &mono(&[2]).scaled(&int(2));
        assert_eq!(star(&vir, &w, &w, z, z, z), expected);
    }

    #[test]
    fn circle_examples() {
        let h2 = Model::heisenberg(2).unwrap();
        let a = mono(&[1]);
        let half = f(1, 2);
        let got = circle(&h2, &a, &a, half, half);
        // α = 3/2, pole 3: a_{-3}a + 3/2 a_{-2}a + 3/8 a_{-1}a + C(3/2,3) a_0 a + 3/128 a_1 a
        let expected = Vector::from_terms([
            (Monomial::from_parts(vec![3, 1]), int(1)),
            (Monomial::from_parts(vec![2, 1]), frac(3, 2)),
            (Monomial::from_parts(vec![1, 1]), frac(3, 8)),
            (Monomial::vacuum(), frac(3, 128)),
        ]);
        assert_eq!(got, expected);

        for n in [f(0, 2), half, f(2, 2)] {
            for m in [f(0, 2), half, f(2, 2)] {
                assert!(circle(&h2, &h2.vacuum(), &h2.vacuum(), n, m).is_zero());
            }
        }
        // For a in V^1 with n = m = 0 both deltas vanish: Res (1+x)^{1/2} x^{-1} Y(a,x) 1 = a.
        assert_eq!(circle(&h2, &a, &h2.vacuum(), f(0, 2), f(0, 2)), a);
    }

    #[test]
    fn residue_family_examples() {
        let h2 = Model::heisenberg(2).unwrap();
        let a = mono(&[1]);
        let half = f(1, 2);
        assert_eq!(residue_family(&h2, &a, &a, half, half, 0, 0).unwrap(), circle(&h2, &a, &a, half, half));
        let by_hand = |alpha: Rational| {
            let mut out = Vector::zero();
            for i in 0..8 {
                out.add_scaled(&h2.mode(&a, i - 4, &a), &frac_binom(&alpha, i as u64));
            }
            out
        };
        assert_eq!(residue_family(&h2, &a, &a, half, half, 1, 0).unwrap(), by_hand(frac(3, 2)));
        assert_eq!(residue_family(&h2, &a, &a, half, half, 1, 1).unwrap(), by_hand(frac(5, 2)));
        assert!(residue_family(&h2, &a, &a, half, half, 0, 1).is_err());
    }

    #[test]
    fn l_shift_examples() {
        let h2 = Model::heisenberg(2).unwrap();
        let half = f(1, 2);
        assert!(l_shift(&h2, &h2.vacuum(), half, half).is_zero());
        let expected = &mono(&[2]) + &mono(&[1]).scaled(&frac(1, 2));
        assert_eq!(l_shift(&h2, &mono(&[1]), half, f(0, 2)), expected);
        let vir = Model::virasoro(frac(1, 2));
        let z = f(0, 1);
        let expected = &mono(&[3]) + &mono(&[2]).scaled(&int(2));
        assert_eq!(l_shift(&vir, &vir.conformal_vector(), z, z), expected);
    }

    #[test]
    fn generator_builders() {
        let h1 = Model::heisenberg(1).unwrap();
        let z = f(0, 1);
        let one = h1.vacuum();
        assert!(o2_generator(&h1, &one, &one, &one, &one, z, z, z, z, z).is_zero());
        assert!(o3_generator(&h1, &one, &Vector::zero(), &one, z, z, z, z).is_zero());

        // T = 2: with p3 = 1/2 and n = 0 the outer product needs x in V^1.
        let h2 = Model::heisenberg(2).unwrap();
        let zz = f(0, 2);
        let half = f(1, 2);
        let w = l_shift(&h2, &mono(&[1]), half, zz);
        assert!(o3_generator(&h2, &h2.vacuum(), &w, &h2.vacuum(), zz, zz, zz, half).is_zero());
    }
}
