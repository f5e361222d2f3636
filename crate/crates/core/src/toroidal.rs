//! The k-toroidal algebra `T(g) = g ⊗ C[t^{±1}] ⊕ Z ⊕ D`: graded elements, the
//! Kähler-differential centre, roots and coroots, and reflection operators on
//! weights.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lie::{BasisKind, FiniteLie};
use crate::num::{as_i64, floor, q, q_to_pair, rank, Q};
use crate::rootsys::{FiniteWeight, RootSystem};

/// An element `t^r · Σ c_i K_i` of the degree-`r` slice of the centre.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CentralVector {
    pub r: Vec<i64>,
    #[serde(with = "crate::num::qpair_vec")]
    pub c: Vec<Q>,
}

impl CentralVector {
    pub fn new(r: Vec<i64>, c: Vec<Q>) -> Result<Self> {
        if r.len() != c.len() {
            return Err(Error::DimensionMismatch(format!(
                "degree of length {} with {} coefficients",
                r.len(),
                c.len()
            )));
        }
        Ok(CentralVector { r, c })
    }

    /// `t^r K_i`.
    pub fn unit(r: &[i64], i: usize) -> Self {
        let mut c = vec![Q::zero(); r.len()];
        c[i] = q(1);
        CentralVector { r: r.to_vec(), c }
    }

    /// Canonical form modulo `Σ r_i t^r K_i = 0`: the first coordinate with
    /// `r_i ≠ 0` is cleared.
    pub fn reduce(&self) -> CentralVector {
        let mut c = self.c.clone();
        if let Some(i0) = self.r.iter().position(|&x| x != 0) {
            let f = &c[i0] / q(self.r[i0]);
            for (ci, &ri) in c.iter_mut().zip(&self.r) {
                *ci -= &f * q(ri);
            }
        }
        CentralVector { r: self.r.clone(), c }
    }

    pub fn is_zero(&self) -> bool {
        self.reduce().c.iter().all(Zero::is_zero)
    }
}

/// Dimension of the degree-`r` slice of the centre, computed by reducing all
/// unit vectors.
pub fn central_slice_dim(r: &[i64]) -> usize {
    let rows: Vec<Vec<Q>> = (0..r.len()).map(|i| CentralVector::unit(r, i).reduce().c).collect();
    rank(&rows)
}

/// A finite sum of loop terms `x_b ⊗ t^m`, central terms and derivations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToroidalElement {
    pub loops: BTreeMap<(usize, Vec<i64>), Q>,
    /// Reduced central coefficients, keyed by degree.
    pub central: BTreeMap<Vec<i64>, Vec<Q>>,
    pub deriv: Vec<Q>,
}

impl ToroidalElement {
    pub fn zero(k: usize) -> Self {
        ToroidalElement { loops: BTreeMap::new(), central: BTreeMap::new(), deriv: vec![Q::zero(); k] }
    }

    pub fn k(&self) -> usize {
        self.deriv.len()
    }

    pub fn loop_term(k: usize, b: usize, m: &[i64], c: Q) -> Self {
        let mut x = Self::zero(k);
        x.add_loop(b, m, c);
        x
    }

    pub fn central_term(v: &CentralVector) -> Self {
        let mut x = Self::zero(v.r.len());
        x.add_central(v);
        x
    }

    pub fn derivation(k: usize, i: usize) -> Self {
        let mut x = Self::zero(k);
        x.deriv[i] = q(1);
        x
    }

    fn add_loop(&mut self, b: usize, m: &[i64], c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.loops.entry((b, m.to_vec())).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.loops.remove(&(b, m.to_vec()));
        }
    }

    fn add_central(&mut self, v: &CentralVector) {
        let k = v.r.len();
        let cur = self.central.remove(&v.r).unwrap_or_else(|| vec![Q::zero(); k]);
        let sum: Vec<Q> = cur.iter().zip(&v.c).map(|(a, b)| a + b).collect();
        let red = CentralVector { r: v.r.clone(), c: sum }.reduce();
        if red.c.iter().any(|x| !x.is_zero()) {
            self.central.insert(v.r.clone(), red.c);
        }
    }

    pub fn add(&self, other: &ToroidalElement) -> ToroidalElement {
        let mut out = self.clone();
        for ((b, m), c) in &other.loops {
            out.add_loop(*b, m, c.clone());
        }
        for (r, c) in &other.central {
            out.add_central(&CentralVector { r: r.clone(), c: c.clone() });
        }
        for (d, e) in out.deriv.iter_mut().zip(&other.deriv) {
            *d += e;
        }
        out
    }

    pub fn scale(&self, s: &Q) -> ToroidalElement {
        if s.is_zero() {
            return Self::zero(self.k());
        }
        ToroidalElement {
            loops: self.loops.iter().map(|(key, c)| (key.clone(), c * s)).collect(),
            central: self.central.iter().map(|(r, c)| (r.clone(), c.iter().map(|x| x * s).collect())).collect(),
            deriv: self.deriv.iter().map(|x| x * s).collect(),
        }
    }

    pub fn sub(&self, other: &ToroidalElement) -> ToroidalElement {
        self.add(&other.scale(&q(-1)))
    }

    pub fn is_zero(&self) -> bool {
        self.loops.is_empty() && self.central.is_empty() && self.deriv.iter().all(Zero::is_zero)
    }

    /// `{loop:[{elt, m, coeff}], central:[{r, c}], deriv:[…]}` with rationals as pairs.
    pub fn to_json(&self, lie: &FiniteLie) -> Result<Value> {
        let loops = self
            .loops
            .iter()
            .map(|((b, m), c)| Ok(json!({"elt": lie.label(*b), "m": m, "coeff": q_to_pair(c)?})))
            .collect::<Result<Vec<_>>>()?;
        let central = self
            .central
            .iter()
            .map(|(r, c)| Ok(json!({"r": r, "c": c.iter().map(q_to_pair).collect::<Result<Vec<_>>>()?})))
            .collect::<Result<Vec<_>>>()?;
        let deriv = self.deriv.iter().map(q_to_pair).collect::<Result<Vec<_>>>()?;
        Ok(json!({"loop": loops, "central": central, "deriv": deriv}))
    }
}

/// A root `α + δ_m` (real when `α ≠ 0`) or `δ_m` (imaginary).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ToroidalRoot {
    /// Finite part in simple-root coordinates (zero for imaginary roots).
    pub alpha: Vec<i64>,
    pub m: Vec<i64>,
}

impl ToroidalRoot {
    pub fn new(alpha: Vec<i64>, m: Vec<i64>) -> Self {
        ToroidalRoot { alpha, m }
    }

    pub fn is_real(&self) -> bool {
        self.alpha.iter().any(|&x| x != 0)
    }

    pub fn is_imaginary(&self) -> bool {
        !self.is_real() && self.m.iter().any(|&x| x != 0)
    }

    pub fn is_root(&self, rs: &RootSystem) -> bool {
        if self.is_real() {
            rs.is_root(&self.alpha)
        } else {
            self.is_imaginary()
        }
    }

    pub fn neg(&self) -> ToroidalRoot {
        ToroidalRoot { alpha: self.alpha.iter().map(|x| -x).collect(), m: self.m.iter().map(|x| -x).collect() }
    }

    /// `α_{n+i} = δ_i - θ`, `i = 1..k` (zero-based `i` here).
    pub fn affine_simple(rs: &RootSystem, k: usize, i: usize) -> ToroidalRoot {
        let mut m = vec![0; k];
        m[i] = 1;
        ToroidalRoot { alpha: rs.highest_root().iter().map(|x| -x).collect(), m }
    }

    /// The simple system `α_1, …, α_n, α_{n+1}, …, α_{n+k}`.
    pub fn simple_system(rs: &RootSystem, k: usize) -> Vec<ToroidalRoot> {
        let mut out: Vec<ToroidalRoot> =
            (0..rs.rank()).map(|i| ToroidalRoot { alpha: rs.simple_root(i), m: vec![0; k] }).collect();
        out.extend((0..k).map(|i| Self::affine_simple(rs, k, i)));
        out
    }
}

/// `α^∨ + (2/|α|²) Σ m_i K_i`, with the finite part on the simple coroots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coroot {
    pub finite: Vec<Q>,
    pub central: Vec<Q>,
}

impl Coroot {
    pub fn pair(&self, w: &ToroidalWeight) -> Q {
        let fin: Q = self.finite.iter().zip(&w.finite.0).map(|(c, &x)| c * q(x)).sum();
        let cen: Q = self.central.iter().zip(&w.central).map(|(c, x)| c * x).sum();
        fin + cen
    }
}

pub fn coroot(rs: &RootSystem, beta: &ToroidalRoot) -> Result<Coroot> {
    if !beta.is_real() {
        return Err(Error::ImaginaryRoot);
    }
    if !rs.is_root(&beta.alpha) {
        return Err(Error::NotARoot(format!("{:?}", beta.alpha)));
    }
    let f = rs.coroot_factor(&beta.alpha);
    Ok(Coroot { finite: rs.coroot_coords(&beta.alpha), central: beta.m.iter().map(|&m| q(m) * &f).collect() })
}

/// A weight on `h_tor`, stored by its values on the simple coroots, the
/// degree-zero central elements `K_i` and the derivations `d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ToroidalWeight {
    pub finite: FiniteWeight,
    #[serde(with = "crate::num::qpair_vec")]
    pub central: Vec<Q>,
    #[serde(with = "crate::num::qpair_vec")]
    pub deriv: Vec<Q>,
}

impl ToroidalWeight {
    pub fn new(finite: Vec<i64>, central: Vec<Q>, deriv: Vec<Q>) -> Self {
        ToroidalWeight { finite: FiniteWeight(finite), central, deriv }
    }

    pub fn k(&self) -> usize {
        self.deriv.len()
    }

    /// `self - c·β`.
    pub fn sub_root(&self, rs: &RootSystem, beta: &ToroidalRoot, c: &Q) -> Result<ToroidalWeight> {
        let ci = as_i64(c).ok_or_else(|| Error::NonIntegrable(format!("coefficient {c} on a real root")))?;
        let fin = if beta.is_real() { rs.root_to_weight(&beta.alpha).scale(ci) } else { FiniteWeight::zero(rs.rank()) };
        Ok(ToroidalWeight {
            finite: self.finite.sub(&fin),
            central: self.central.clone(),
            deriv: self.deriv.iter().zip(&beta.m).map(|(d, &m)| d - c * q(m)).collect(),
        })
    }
}

/// `r_β(λ) = λ - <λ, β^∨> β`.
pub fn reflect_toroidal(rs: &RootSystem, lambda: &ToroidalWeight, beta: &ToroidalRoot) -> Result<ToroidalWeight> {
    if lambda.k() != beta.m.len() {
        return Err(Error::DimensionMismatch(format!("k = {} vs root of length {}", lambda.k(), beta.m.len())));
    }
    let p = coroot(rs, beta)?.pair(lambda);
    if !p.is_integer() {
        return Err(Error::NonIntegrable(format!("<λ, β^∨> = {p}")));
    }
    lambda.sub_root(rs, beta, &p)
}

/// Closed form of `r_α r_β(λ)` for `β = α + m δ_i`:
/// `λ + c m λ(K_i) α - (<λ, α^∨> + c m λ(K_i)) m δ_i` with `c = 2/(α|α)`.
pub fn composite_reflection_formula(
    rs: &RootSystem,
    lambda: &ToroidalWeight,
    alpha: &[i64],
    i: usize,
    m: i64,
) -> Result<ToroidalWeight> {
    let c = rs.coroot_factor(alpha);
    let ck = &c * q(m) * &lambda.central[i];
    let p = Coroot { finite: rs.coroot_coords(alpha), central: vec![Q::zero(); lambda.k()] }.pair(lambda);
    let a = ToroidalRoot { alpha: alpha.to_vec(), m: vec![0; lambda.k()] };
    let mut out = lambda.sub_root(rs, &a, &-ck.clone())?;
    out.deriv[i] -= (p + ck) * q(m);
    Ok(out)
}

/// Result of reducing the `d_2..d_k` values into `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxReduction {
    pub weight: ToroidalWeight,
    /// Reflections in order of application; consecutive pairs are
    /// `r_{β_j}` or `r_{γ_j}` followed by `r_{α_{n+1}}`.
    pub word: Vec<ToroidalRoot>,
}

/// Limit on the number of reflection pairs emitted by [`box_reduce`].
pub const BOX_STEP_LIMIT: u64 = 1_000_000;

/// Move the `d_j`-values (`j ≥ 2`) of a weight with `<λ, α_{n+1}^∨> = m > 0` and
/// `λ(K_j) = 0` into `[0, m)` using the operators `r_{α_{n+1}} r_{β_j}` (which
/// subtract `m δ_j`) and `r_{α_{n+1}} r_{γ_j}` (which add `m δ_j`), where
/// `β_j = δ_j + α_{n+1}` and `γ_j = δ_j - α_{n+1}`.
pub fn box_reduce(rs: &RootSystem, lambda: &ToroidalWeight) -> Result<BoxReduction> {
    let k = lambda.k();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let a = ToroidalRoot::affine_simple(rs, k, 0);
    let m = coroot(rs, &a)?.pair(lambda);
    if !m.is_positive() {
        return Err(Error::InvalidArgument(format!("<λ, α_{{n+1}}^∨> = {m} must be positive")));
    }
    if let Some(j) = (1..k).find(|&j| !lambda.central[j].is_zero()) {
        return Err(Error::InvalidArgument(format!("λ(K_{}) must vanish", j + 1)));
    }
    let mut w = lambda.clone();
    let mut word = Vec::new();
    for j in 1..k {
        let steps = floor(&(&w.deriv[j] / &m));
        if steps.abs() > BOX_STEP_LIMIT.into() {
            return Err(Error::CapExceeded(format!("{steps} reflection pairs for d_{}", j + 1)));
        }
        let mut dj = vec![0; k];
        dj[j] = 1;
        let pos = ToroidalRoot { alpha: a.alpha.clone(), m: a.m.iter().zip(&dj).map(|(x, y)| x + y).collect() };
        let neg = ToroidalRoot { alpha: a.neg().alpha, m: a.neg().m.iter().zip(&dj).map(|(x, y)| x + y).collect() };
        let (root, count) = if steps.is_positive() { (pos, steps) } else { (neg, -steps) };
        let mut i = num_bigint::BigInt::zero();
        while i < count {
            w = reflect_toroidal(rs, &w, &root)?;
            w = reflect_toroidal(rs, &w, &a)?;
            word.push(root.clone());
            word.push(a.clone());
            i += 1;
        }
        debug_assert!(!w.deriv[j].is_negative() && w.deriv[j] < m);
    }
    Ok(BoxReduction { weight: w, word })
}

/// Coefficients of a root on the simple system `α_1..α_n, α_{n+1}..α_{n+k}`,
/// using `δ_i = α_{n+i} + θ`.
pub fn express_in_simple_system(rs: &RootSystem, beta: &ToroidalRoot) -> Result<Vec<i64>> {
    if !beta.is_root(rs) || beta.alpha.len() != rs.rank() {
        return Err(Error::NotARoot(format!("{beta:?}")));
    }
    let total: i64 = beta.m.iter().sum();
    let mut out: Vec<i64> = beta.alpha.iter().zip(rs.highest_root()).map(|(a, t)| a + total * t).collect();
    out.extend(&beta.m);
    Ok(out)
}

/// The algebra `T(g)` for `g` of type A, with explicit structure constants.
#[derive(Debug, Clone)]
pub struct Toroidal {
    lie: FiniteLie,
    k: usize,
}

impl Toroidal {
    pub fn new(rs: &RootSystem, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        Ok(Toroidal { lie: FiniteLie::new(rs)?, k })
    }

    pub fn lie(&self) -> &FiniteLie {
        &self.lie
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `[x ⊗ t^m, y ⊗ t^p] = [x, y] ⊗ t^{m+p} + (x|y) Σ m_i t^{m+p} K_i`, the
    /// centre is central, and `d_i` acts by the `i`-th degree.
    pub fn bracket(&self, a: &ToroidalElement, b: &ToroidalElement) -> Result<ToroidalElement> {
        let k = self.k;
        if a.k() != k || b.k() != k {
            return Err(Error::DimensionMismatch("elements of different k".into()));
        }
        let mut out = ToroidalElement::zero(k);
        for ((x, m), cx) in &a.loops {
            for ((y, p), cy) in &b.loops {
                let c = cx * cy;
                let mp: Vec<i64> = m.iter().zip(p).map(|(u, v)| u + v).collect();
                for &(z, s) in self.lie.bracket(*x, *y) {
                    out.add_loop(z, &mp, &c * q(s));
                }
                let f = self.lie.form(*x, *y);
                if f != 0 && m.iter().any(|&u| u != 0) {
                    let coeffs = m.iter().map(|&u| &c * q(f * u)).collect();
                    out.add_central(&CentralVector { r: mp, c: coeffs });
                }
            }
        }
        // [a.deriv, b] - [b.deriv, a]
        for (sign, d, other) in [(q(1), &a.deriv, b), (q(-1), &b.deriv, a)] {
            for (i, di) in d.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for ((y, p), cy) in &other.loops {
                    out.add_loop(*y, p, &sign * di * cy * q(p[i]));
                }
                for (r, c) in &other.central {
                    let s = &sign * di * q(r[i]);
                    out.add_central(&CentralVector { r: r.clone(), c: c.iter().map(|x| x * &s).collect() });
                }
            }
        }
        Ok(out)
    }

    /// Root vector `x_α ⊗ t^m` of a real root.
    pub fn root_vector(&self, beta: &ToroidalRoot) -> Result<ToroidalElement> {
        if !beta.is_real() {
            return Err(Error::ImaginaryRoot);
        }
        let b = self.lie.root_vector(&beta.alpha)?;
        Ok(ToroidalElement::loop_term(self.k, b, &beta.m, q(1)))
    }

    /// `β^∨` as an element of `h_fin ⊕ Z_0`.
    pub fn coroot(&self, beta: &ToroidalRoot) -> Result<ToroidalElement> {
        let c = coroot(self.lie.root_system(), beta)?;
        let mut out = ToroidalElement::zero(self.k);
        for (i, x) in c.finite.iter().enumerate() {
            out.add_loop(self.lie.cartan(i), &vec![0; self.k], x.clone());
        }
        out.add_central(&CentralVector { r: vec![0; self.k], c: c.central });
        Ok(out)
    }

    /// The triple `(x_α ⊗ t^m, x_{-α} ⊗ t^{-m}, β^∨)` spanning `sl_2(β)`.
    pub fn sl2_triple(&self, beta: &ToroidalRoot) -> Result<(ToroidalElement, ToroidalElement, ToroidalElement)> {
        Ok((self.root_vector(beta)?, self.root_vector(&beta.neg())?, self.coroot(beta)?))
    }

    /// Evaluate a Cartan-plus-degree-zero-central element on a weight.
    pub fn pair(&self, lambda: &ToroidalWeight, h: &ToroidalElement) -> Result<Q> {
        let mut s = Q::zero();
        for ((b, m), c) in &h.loops {
            match self.lie.kind(*b) {
                BasisKind::Cartan(i) if m.iter().all(|&x| x == 0) => s += c * q(lambda.finite.0[i]),
                _ => return Err(Error::InvalidArgument("element is not in h_tor".into())),
            }
        }
        for (r, c) in &h.central {
            if r.iter().any(|&x| x != 0) {
                return Err(Error::InvalidArgument("element is not in h_tor".into()));
            }
            s += c.iter().zip(&lambda.central).map(|(a, b)| a * b).sum::<Q>();
        }
        s += h.deriv.iter().zip(&lambda.deriv).map(|(a, b)| a * b).sum::<Q>();
        Ok(s)
    }
}
