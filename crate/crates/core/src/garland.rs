//! Garland polynomials `p^s`, the coefficients of
//! `exp(-Σ_{r≥1} h_r u^r / r)`, their transport to `h_aff ⊗ C[t₂^{±1}, …]`,
//! their values under π-characters, and the Garland identities checked on
//! explicit modules.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::affine::{AffineElement, LoopElt, TruncatedModule};
use crate::error::{Error, Result};
use crate::num::{as_i64, fmt_q, q, qpow, Q};
use crate::pimod::{HBasis, PiFunction};
use crate::rootsys::RootSystem;

/// A monomial: sorted `(variable, exponent)` pairs with positive exponents.
pub type Monomial<V> = Vec<(V, u32)>;

/// A polynomial with rational coefficients in commuting variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<V: Ord + Clone> {
    terms: BTreeMap<Monomial<V>, Q>,
}

impl<V: Ord + Clone> Poly<V> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: V) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![(v, 1)], Q::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial<V>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut merged: BTreeMap<V, u32> = m1.iter().cloned().collect();
                for (v, e) in m2 {
                    *merged.entry(v.clone()).or_insert(0) += e;
                }
                out.add_term(merged.into_iter().collect(), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Q::one()), |acc, _| acc.mul(self))
    }

    /// Ring homomorphism sending each variable to a polynomial.
    pub fn substitute<W: Ord + Clone>(&self, f: impl Fn(&V) -> Poly<W>) -> Poly<W> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (v, e) in m {
                t = t.mul(&f(v).pow(*e));
            }
            out = out.add(&t);
        }
        out
    }

    /// Evaluate with each variable replaced by a number.
    pub fn eval(&self, f: impl Fn(&V) -> Q) -> Q {
        self.terms.iter().map(|(m, c)| m.iter().fold(c.clone(), |acc, (v, e)| acc * qpow(&f(v), i64::from(*e)))).sum()
    }
}

/// Polynomial in `h_1, h_2, …`, where `h_s` stands for `α^∨ ⊗ t^s`.
pub type HPoly = Poly<u32>;

impl HPoly {
    /// Weighted degrees of the monomials, with `deg h_s = s`.
    pub fn degrees(&self) -> Vec<u32> {
        self.terms.keys().map(|m| m.iter().map(|(v, e)| v * e).sum()).collect()
    }

    /// Monomials ordered by descending exponent vectors, as `(exponents of h_1.., coefficient)`.
    pub fn sorted_monomials(&self) -> Vec<(Vec<u32>, Q)> {
        let top = self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| *v)).max().unwrap_or(0);
        let mut rows: Vec<(Vec<u32>, Q)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; top as usize];
                for (v, x) in m {
                    e[*v as usize - 1] = *x;
                }
                (e, c.clone())
            })
            .collect();
        rows.sort_by(|a, b| b.0.cmp(&a.0));
        rows
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.sorted_monomials();
        if rows.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in rows.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, x)| **x > 0)
                .map(|(i, x)| if *x == 1 { format!("h{}", i + 1) } else { format!("h{}^{}", i + 1, x) })
                .collect();
            let mono = mono.join("");
            let abs = c.abs();
            let coeff = if mono.is_empty() {
                fmt_q(&abs)
            } else if abs.is_one() {
                String::new()
            } else {
                fmt_q(&abs)
            };
            match (idx, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{coeff}{mono}")?;
        }
        Ok(())
    }
}

fn garland_cache() -> &'static Mutex<Vec<HPoly>> {
    static CACHE: OnceLock<Mutex<Vec<HPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![HPoly::constant(Q::one())]))
}

/// `p^s` by the Newton recursion `s p^s = -Σ_{r=1}^s h_r p^{s-r}`.
pub fn garland_p(s: u32) -> HPoly {
    let mut cache = garland_cache().lock().expect("garland cache");
    while cache.len() <= s as usize {
        let n = cache.len() as u32;
        let mut acc = HPoly::zero();
        for r in 1..=n {
            acc = acc.add(&HPoly::var(r).mul(&cache[(n - r) as usize]));
        }
        let next = acc.scale(&-Q::new(1.into(), n.into()));
        cache.push(next);
    }
    cache[s as usize].clone()
}

/// A generator `x ⊗ t^m` of `h_aff ⊗ C[t₂^{±1}, …]` with `x` a simple coroot or `K₁`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HGen {
    pub h: HBasis,
    pub m: Vec<i64>,
}

/// Check that `β = α + rδ₁` is a positive real affine root.
pub fn check_positive_affine_root(rs: &RootSystem, alpha: &[i64], r: i64) -> Result<()> {
    if !rs.is_root(alpha) {
        return Err(Error::NotARoot(format!("{alpha:?}")));
    }
    let positive = alpha.iter().sum::<i64>() > 0;
    if r < 0 || (r == 0 && !positive) {
        return Err(Error::NotARoot(format!("{alpha:?} + {r}δ₁ is not a positive real affine root")));
    }
    Ok(())
}

/// Image of `p` under `h_s ↦ (α^∨ + (2r/(α|α)) K₁) ⊗ a^s`.
pub fn transport(p: &HPoly, rs: &RootSystem, alpha: &[i64], r: i64, a: &[i64]) -> Result<Poly<HGen>> {
    check_positive_affine_root(rs, alpha, r)?;
    let fin = rs.coroot_coords(alpha);
    let k1 = rs.coroot_factor(alpha) * q(r);
    Ok(p.substitute(|&s| {
        let m: Vec<i64> = a.iter().map(|x| x * i64::from(s)).collect();
        let mut out = Poly::zero();
        for (i, c) in fin.iter().enumerate() {
            out = out.add(&Poly::var(HGen { h: HBasis::Coroot(i), m: m.clone() }).scale(c));
        }
        out.add(&Poly::var(HGen { h: HBasis::K1, m }).scale(&k1))
    }))
}

/// `φ_π` applied to a polynomial in the generators `x ⊗ t^m`.
pub fn evaluate_poly(p: &Poly<HGen>, pi: &PiFunction) -> Q {
    p.eval(|g| pi.phi(&g.h, &g.m))
}

/// `φ_π(p^s_{β,a})` for `β = α + rδ₁`, via transport of the Newton recursion.
pub fn evaluate_under_pi(rs: &RootSystem, alpha: &[i64], r: i64, a: &[i64], s: u32, pi: &PiFunction) -> Result<Q> {
    Ok(evaluate_poly(&transport(&garland_p(s), rs, alpha, r, a)?, pi))
}

/// `π(M)(β^∨)` for each support point, as non-negative integers.
pub fn coroot_values(rs: &RootSystem, alpha: &[i64], r: i64, pi: &PiFunction) -> Result<Vec<u64>> {
    check_positive_affine_root(rs, alpha, r)?;
    pi.weights()
        .iter()
        .map(|w| {
            let v = q(rs.pairing(&w.finite, alpha)) + rs.coroot_factor(alpha) * q(r) * q(w.level);
            as_i64(&v)
                .and_then(|x| u64::try_from(x).ok())
                .ok_or_else(|| Error::NonIntegrable(format!("{w} pairs to {v} with a positive coroot")))
        })
        .collect()
}

/// Coefficient of `u^s` in `Π_M (1 - ev_M(a) u)^{π(M)(β^∨)}`.
pub fn product_formula(rs: &RootSystem, alpha: &[i64], r: i64, a: &[i64], s: u32, pi: &PiFunction) -> Result<Q> {
    let exps = coroot_values(rs, alpha, r, pi)?;
    let mut poly = vec![Q::one()];
    for (e, b) in exps.iter().zip(pi.points()) {
        let x = crate::num::monomial_at(b, a);
        for _ in 0..*e {
            let mut next = vec![Q::zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * &x;
            }
            poly = next;
        }
    }
    Ok(poly.get(s as usize).cloned().unwrap_or_else(Q::zero))
}

/// `φ_π` of the second relation `Σ_{l=0}^{s} (β^∨ ⊗ a^{s-l}) p^l_{β,a}`.
pub fn second_relation(rs: &RootSystem, alpha: &[i64], r: i64, a: &[i64], s: u32, pi: &PiFunction) -> Result<Q> {
    let fin = rs.coroot_coords(alpha);
    let k1 = rs.coroot_factor(alpha) * q(r);
    let mut total = Q::zero();
    for l in 0..=s {
        let m: Vec<i64> = a.iter().map(|x| x * i64::from(s - l)).collect();
        let mut h = pi.phi(&HBasis::K1, &m) * &k1;
        for (i, c) in fin.iter().enumerate() {
            h += c * pi.phi(&HBasis::Coroot(i), &m);
        }
        total += h * evaluate_under_pi(rs, alpha, r, a, l, pi)?;
    }
    Ok(total)
}

/// Both sides of the two Garland identities on a highest weight vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GarlandCheck {
    pub first_lhs: Vec<Q>,
    pub first_rhs: Vec<Q>,
    pub second_lhs: Vec<Q>,
    pub second_rhs: Vec<Q>,
}

impl GarlandCheck {
    pub fn holds(&self) -> bool {
        self.first_lhs == self.first_rhs && self.second_lhs == self.second_rhs
    }

    /// Whether the identities were checked on nonzero vectors.
    pub fn nontrivial(&self) -> bool {
        self.first_lhs.iter().any(|x| !x.is_zero())
    }
}

pub(crate) fn factorial(n: u32) -> Q {
    (1..=n).fold(Q::one(), |acc, i| acc * q(i64::from(i)))
}

pub(crate) fn add_into(acc: &mut Vec<Q>, v: &[Q], c: &Q) {
    if acc.len() < v.len() {
        acc.resize(v.len(), Q::zero());
    }
    for (a, b) in acc.iter_mut().zip(v) {
        *a += c * b;
    }
}

/// Check, on `v_Λ ∈ X(Λ)`, the divided-power Garland identities for the
/// `sl_2` attached to `β = α + shift·δ₁` (with `a = t₁`):
/// `(x^+⊗a)^{(r)} (x^-)^{(r+1)} v = (-1)^r Σ_{s=0}^{r} (x^-⊗a^{r-s}) p^s v` and
/// `(x^+⊗a)^{(r+1)} (x^-)^{(r+1)} v = (-1)^{r+1} p^{r+1} v`.
pub fn verify_garland_on_module(x: &TruncatedModule, alpha: &[i64], shift: i64, r: u32) -> Result<GarlandCheck> {
    let rs = x.root_system();
    check_positive_affine_root(rs, alpha, shift)?;
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let needed = (i64::from(r) + 1) * shift.max(1);
    if x.depth() < needed {
        return Err(Error::DepthExceeded { requested: needed, limit: x.depth() });
    }
    let lie = x.lie();
    let neg: Vec<i64> = alpha.iter().map(|c| -c).collect();
    let e = lie.root_vector(alpha)?;
    let f = lie.root_vector(&neg)?;
    let plus = |s: i64| LoopElt { b: e, j: shift + s };
    let minus = |s: i64| LoopElt { b: f, j: s - shift };
    let coroot = lie.coroot(alpha)?;
    let h = |s: i64| AffineElement {
        terms: coroot.iter().map(|&(b, c)| (LoopElt { b, j: s }, q(c))).collect(),
        k: Q::zero(),
        d: Q::zero(),
    };

    let (mut c, mut v) = x.highest_vector();
    for _ in 0..=r {
        (c, v) = x.apply(minus(0), &c, &v)?;
    }
    for _ in 0..r {
        (c, v) = x.apply(plus(1), &c, &v)?;
    }
    let first_lhs: Vec<Q> = v.iter().map(|y| y / (factorial(r) * factorial(r + 1))).collect();
    let first_target = c.clone();
    (c, v) = x.apply(plus(1), &c, &v)?;
    let second_lhs: Vec<Q> = v.iter().map(|y| y / (factorial(r + 1) * factorial(r + 1))).collect();
    let second_target = c;

    // p^s v_Λ, computed monomial by monomial.
    let p_on_top = |s: u32| -> Result<(Vec<i64>, Vec<Q>)> {
        let (c0, v0) = x.highest_vector();
        let mut target = c0.clone();
        let mut acc: Vec<Q> = Vec::new();
        for (mono, coef) in garland_p(s).terms() {
            let (mut cc, mut vv) = (c0.clone(), v0.clone());
            for (var, ex) in mono {
                for _ in 0..*ex {
                    (cc, vv) = x.apply_element(&h(i64::from(*var)), &cc, &vv)?;
                }
            }
            target = cc;
            add_into(&mut acc, &vv, coef);
        }
        Ok((target, acc))
    };

    let sign = |n: u32| if n.is_multiple_of(2) { q(1) } else { q(-1) };
    let mut first_rhs = Vec::new();
    for s in 0..=r {
        let (cp, vp) = p_on_top(s)?;
        let (ct, vt) = x.apply(minus(i64::from(r - s)), &cp, &vp)?;
        if ct != first_target {
            return Err(Error::Verification("Garland terms land in different weight spaces".into()));
        }
        add_into(&mut first_rhs, &vt, &sign(r));
    }
    let (cp, vp) = p_on_top(r + 1)?;
    if cp != second_target {
        return Err(Error::Verification("Garland terms land in different weight spaces".into()));
    }
    let mut second_rhs = Vec::new();
    add_into(&mut second_rhs, &vp, &sign(r + 1));

    let pad = |mut a: Vec<Q>, b: &mut Vec<Q>| {
        let n = a.len().max(b.len());
        a.resize(n, Q::zero());
        b.resize(n, Q::zero());
        a
    };
    let first_lhs = pad(first_lhs, &mut first_rhs);
    let second_lhs = pad(second_lhs, &mut second_rhs);
    Ok(GarlandCheck { first_lhs, first_rhs, second_lhs, second_rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineWeight;
    use crate::lie::FiniteLie;
    use crate::num::qf;

    /// Truncated power series in `u` with polynomial coefficients.
    fn series_exp_oracle(order: u32) -> Vec<HPoly> {
        // exp(X) with X = -Σ h_r u^r / r, truncated at u^order: Σ_n X^n / n!.
        let mut x = vec![HPoly::zero(); order as usize + 1];
        for r in 1..=order {
            x[r as usize] = HPoly::var(r).scale(&qf(-1, i64::from(r)));
        }
        let mul = |a: &[HPoly], b: &[HPoly]| -> Vec<HPoly> {
            let mut out = vec![HPoly::zero(); order as usize + 1];
            for i in 0..=order as usize {
                for j in 0..=(order as usize - i) {
                    out[i + j] = out[i + j].add(&a[i].mul(&b[j]));
                }
            }
            out
        };
        let mut total = vec![HPoly::zero(); order as usize + 1];
        total[0] = HPoly::constant(q(1));
        let mut power = total.clone();
        for n in 1..=order {
            power = mul(&power, &x);
            for (t, p) in total.iter_mut().zip(&power) {
                *t = t.add(&p.scale(&(Q::one() / factorial(n))));
            }
        }
        total
    }

    #[test]
    fn small_cases() {
        assert_eq!(garland_p(0).to_string(), "1");
        assert_eq!(garland_p(1).to_string(), "-h1");
        assert_eq!(garland_p(2).to_string(), "(1/2)h1^2 - (1/2)h2");
    }

    #[test]
    fn recursion_matches_series() {
        let oracle = series_exp_oracle(6);
        for s in 0..=6 {
            assert_eq!(garland_p(s), oracle[s as usize], "s = {s}");
            assert!(garland_p(s).degrees().iter().all(|&d| d == s));
        }
    }

    #[test]
    fn transport_is_multiplicative() {
        let rs = RootSystem::from_code("A1").unwrap();
        let p1 = garland_p(1);
        let lhs = transport(&p1.mul(&p1), &rs, &[1], 1, &[2]).unwrap();
        let t = transport(&p1, &rs, &[1], 1, &[2]).unwrap();
        assert_eq!(lhs, t.mul(&t));
        let t0 = transport(&p1, &rs, &[1], 0, &[1]).unwrap();
        let expected = Poly::var(HGen { h: HBasis::Coroot(0), m: vec![1] }).scale(&q(-1));
        assert_eq!(t0, expected);
        let t1 = transport(&HPoly::var(1), &rs, &[1], 1, &[1]).unwrap();
        let k = Poly::var(HGen { h: HBasis::K1, m: vec![1] });
        assert_eq!(t1, Poly::var(HGen { h: HBasis::Coroot(0), m: vec![1] }).add(&k));
        assert!(transport(&p1, &rs, &[-1], 0, &[1]).is_err());
    }

    fn pi_single(points: &[Vec<Q>], weights: &[AffineWeight]) -> PiFunction {
        let rs = RootSystem::from_code("A1").unwrap();
        PiFunction::new(&rs, 2, points.to_vec(), weights.to_vec()).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let rs = RootSystem::from_code("A1").unwrap();
        let w = AffineWeight::new(1, vec![1], q(0));
        let pi = pi_single(&[vec![q(2)]], std::slice::from_ref(&w));
        assert_eq!(evaluate_under_pi(&rs, &[1], 0, &[1], 1, &pi).unwrap(), q(-2));
        assert_eq!(evaluate_under_pi(&rs, &[1], 0, &[1], 2, &pi).unwrap(), q(0));
        let pi2 = pi_single(&[vec![q(1)], vec![q(-1)]], &[w.clone(), w]);
        assert_eq!(evaluate_under_pi(&rs, &[1], 0, &[1], 2, &pi2).unwrap(), q(-1));
        assert_eq!(product_formula(&rs, &[1], 0, &[1], 2, &pi2).unwrap(), q(-1));
        for s in 0..6 {
            assert!(second_relation(&rs, &[1], 0, &[1], s + 3, &pi2).unwrap().is_zero());
        }
    }

    fn sl2() -> FiniteLie {
        FiniteLie::new(&RootSystem::from_code("A1").unwrap()).unwrap()
    }

    #[test]
    fn identities_on_basic_module() {
        let lie = sl2();
        let x = TruncatedModule::build_irreducible(&lie, &AffineWeight::basic(1), 4).unwrap();
        // Λ(β^∨) = 1 for β = α + δ₁: both sides vanish once q + 1 > 1.
        let c = verify_garland_on_module(&x, &[1], 1, 1).unwrap();
        assert!(c.holds() && !c.nontrivial(), "{c:?}");
        // β = α + 2δ₁ has Λ(β^∨) = 2.
        let c = verify_garland_on_module(&x, &[1], 2, 1).unwrap();
        assert!(c.holds(), "{c:?}");
        assert!(c.nontrivial());
        // r = 0 recovers the literal statement, where both sides vanish on v_Λ.
        let c = verify_garland_on_module(&x, &[1], 0, 1).unwrap();
        assert!(c.holds() && !c.nontrivial());
    }

    #[test]
    fn identities_at_level_two() {
        let lie = sl2();
        let x = TruncatedModule::build_irreducible(&lie, &AffineWeight::new(2, vec![1], q(0)), 4).unwrap();
        for r in 1..=3 {
            let c = verify_garland_on_module(&x, &[1], 1, r).unwrap();
            assert!(c.holds(), "r = {r}: {c:?}");
        }
    }

    #[test]
    fn depth_too_small() {
        let lie = sl2();
        let x = TruncatedModule::build_irreducible(&lie, &AffineWeight::basic(1), 1).unwrap();
        assert!(matches!(verify_garland_on_module(&x, &[1], 1, 1), Err(Error::DepthExceeded { .. })));
    }
}
