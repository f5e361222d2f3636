//! The untwisted affine algebra `g_aff = g_fin ⊗ C[t₁^{±1}] ⊕ CK₁ ⊕ Cd₁`:
//! affine weights and roots, an independent Freudenthal multiplicity
//! oracle, truncated irreducible highest-weight modules and loop modules.

mod loop_module;
mod module;
mod verma;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{as_i64, q, qpair, Q};
use crate::rootsys::{FiniteWeight, RootSystem};

pub use loop_module::{LoopKey, LoopModule, LoopVector};
pub use module::{AffineElement, TruncatedModule, WeightSpace};
pub use verma::{LoopElt, Mono};

/// `λ = level·Λ_{n+1} + finite + delta1·δ₁`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineWeight {
    pub level: i64,
    pub finite: FiniteWeight,
    #[serde(with = "qpair")]
    pub delta1: Q,
}

impl AffineWeight {
    pub fn new(level: i64, finite: Vec<i64>, delta1: Q) -> Self {
        AffineWeight { level, finite: FiniteWeight(finite), delta1 }
    }

    /// The fundamental weight `Λ_{n+1}` (level 1, zero finite part).
    pub fn basic(rank: usize) -> Self {
        AffineWeight::new(1, vec![0; rank], Q::zero())
    }

    pub fn rank(&self) -> usize {
        self.finite.0.len()
    }

    /// `<λ, α_i^∨>` for `i = 1..n+1` (0-based, the last entry is the affine node).
    pub fn labels(&self, rs: &RootSystem) -> Vec<i64> {
        let mut out = self.finite.0.clone();
        out.push(self.level - rs.pairing(&self.finite, rs.highest_root()));
        out
    }

    pub fn is_dominant(&self, rs: &RootSystem) -> bool {
        self.labels(rs).iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &AffineWeight) -> AffineWeight {
        AffineWeight {
            level: self.level + other.level,
            finite: self.finite.add(&other.finite),
            delta1: &self.delta1 + &other.delta1,
        }
    }

    pub fn sub(&self, other: &AffineWeight) -> AffineWeight {
        AffineWeight {
            level: self.level - other.level,
            finite: self.finite.sub(&other.finite),
            delta1: &self.delta1 - &other.delta1,
        }
    }

    pub fn scale(&self, k: i64) -> AffineWeight {
        AffineWeight { level: self.level * k, finite: self.finite.scale(k), delta1: &self.delta1 * q(k) }
    }

    /// Export form `[level, finite…, delta1]` with `delta1` as `[num, den]`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v: Vec<serde_json::Value> = vec![self.level.into()];
        v.extend(self.finite.0.iter().map(|&x| serde_json::Value::from(x)));
        v.push(match crate::num::q_to_pair(&self.delta1) {
            Ok(p) => serde_json::json!(p),
            Err(_) => serde_json::Value::Null,
        });
        serde_json::Value::Array(v)
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {:?}; {})", self.level, self.finite.0, crate::num::fmt_q(&self.delta1))
    }
}

/// Affine data derived from a finite root system.
#[derive(Debug, Clone)]
pub struct AffineRoots {
    rs: RootSystem,
    theta: Vec<i64>,
}

impl AffineRoots {
    pub fn new(rs: &RootSystem) -> Self {
        AffineRoots { rs: rs.clone(), theta: rs.highest_root().to_vec() }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// `δ₁` as an affine weight.
    pub fn delta(&self) -> AffineWeight {
        AffineWeight::new(0, vec![0; self.rank()], Q::one())
    }

    /// The simple root `α_i`, `i = 0..=n` (index `n` is `α_{n+1} = δ₁ - θ`).
    pub fn simple_root(&self, i: usize) -> AffineWeight {
        let n = self.rank();
        if i < n {
            AffineWeight { level: 0, finite: self.rs.root_to_weight(&self.rs.simple_root(i)), delta1: Q::zero() }
        } else {
            AffineWeight { level: 0, finite: self.rs.root_to_weight(&self.theta).scale(-1), delta1: Q::one() }
        }
    }

    /// `α + jδ₁` as an affine weight, for `α` in simple-root coordinates.
    pub fn root_weight(&self, alpha: &[i64], j: i64) -> AffineWeight {
        AffineWeight { level: 0, finite: self.rs.root_to_weight(alpha), delta1: q(j) }
    }

    /// Coordinates of `α + jδ₁` on the affine simple roots.
    pub fn root_coords(&self, alpha: &[i64], j: i64) -> Vec<i64> {
        let mut c: Vec<i64> = alpha.iter().zip(&self.theta).map(|(a, t)| a + j * t).collect();
        c.push(j);
        c
    }

    /// `Λ - Σ c_i α_i`.
    pub fn weight_at(&self, top: &AffineWeight, offset: &[i64]) -> AffineWeight {
        let n = self.rank();
        let mut finite = top.finite.clone();
        for (i, &ci) in offset.iter().enumerate().take(n) {
            if ci != 0 {
                finite = finite.sub(&self.rs.root_to_weight(&self.rs.simple_root(i)).scale(ci));
            }
        }
        finite = finite.add(&self.rs.root_to_weight(&self.theta).scale(offset[n]));
        AffineWeight { level: top.level, finite, delta1: &top.delta1 - q(offset[n]) }
    }

    /// `Some(c)` with `top - mu = Σ c_i α_i` when the difference lies in the affine root lattice.
    pub fn offset_of(&self, top: &AffineWeight, mu: &AffineWeight) -> Option<Vec<i64>> {
        if top.level != mu.level {
            return None;
        }
        let depth = as_i64(&(&top.delta1 - &mu.delta1))?;
        let shifted = mu.finite.sub(&self.rs.root_to_weight(&self.theta).scale(depth));
        let mut c = self.rs.root_lattice_coords(&top.finite, &shifted)?;
        c.push(depth);
        Some(c)
    }

    /// `(λ|μ) = (λ_fin|μ_fin) + λ(K₁)μ(d₁) + μ(K₁)λ(d₁)`.
    pub fn form(&self, a: &AffineWeight, b: &AffineWeight) -> Q {
        self.rs.form_weights(&a.finite, &b.finite) + q(a.level) * &b.delta1 + q(b.level) * &a.delta1
    }

    /// `ρ = h^∨ Λ_{n+1} + ρ_fin`.
    pub fn rho(&self) -> AffineWeight {
        AffineWeight { level: self.rs.dual_coxeter(), finite: self.rs.rho(), delta1: Q::zero() }
    }

    /// Positive affine roots `α + jδ₁` with `j ≤ max_depth`, as `(coords, multiplicity)`.
    pub fn positive_roots(&self, max_depth: i64) -> Vec<(Vec<i64>, u64)> {
        let n = self.rank();
        let mut out = Vec::new();
        for r in self.rs.positive_roots() {
            out.push((self.root_coords(r, 0), 1));
        }
        for j in 1..=max_depth {
            for r in self.rs.roots() {
                out.push((self.root_coords(r, j), 1));
            }
            out.push((self.root_coords(&vec![0; n], j), n as u64));
        }
        out
    }

    fn coords_to_weight(&self, c: &[i64]) -> AffineWeight {
        let zero = AffineWeight::new(0, vec![0; self.rank()], Q::zero());
        let neg = self.weight_at(&zero, c);
        neg.scale(-1)
    }
}

/// Memoized Freudenthal recursion for `X(Λ)`:
/// `((Λ+ρ|Λ+ρ) - (μ+ρ|μ+ρ)) mult(μ) = 2 Σ_{α>0} Σ_{k≥1} mult_α (μ+kα|α) mult(μ+kα)`.
pub struct Freudenthal {
    roots: AffineRoots,
    top: AffineWeight,
    top_norm: Q,
    rho: AffineWeight,
    max_depth: i64,
    positive: Vec<(Vec<i64>, u64, AffineWeight)>,
    memo: HashMap<Vec<i64>, u64>,
}

impl Freudenthal {
    pub fn new(rs: &RootSystem, top: &AffineWeight, max_depth: i64) -> Result<Self> {
        let roots = AffineRoots::new(rs);
        if !top.is_dominant(rs) {
            return Err(Error::NotDominant(top.to_string()));
        }
        let rho = roots.rho();
        let tr = top.add(&rho);
        let top_norm = roots.form(&tr, &tr);
        let positive = roots
            .positive_roots(max_depth)
            .into_iter()
            .map(|(c, m)| {
                let w = roots.coords_to_weight(&c);
                (c, m, w)
            })
            .collect();
        Ok(Freudenthal { roots, top: top.clone(), top_norm, rho, max_depth, positive, memo: HashMap::new() })
    }

    /// Multiplicity of `Λ - Σ c_i α_i`.
    pub fn mult_offset(&mut self, c: &[i64]) -> Result<u64> {
        if c.iter().any(|&x| x < 0) {
            return Ok(0);
        }
        let n = self.roots.rank();
        if c[n] > self.max_depth {
            return Err(Error::DepthExceeded { requested: c[n], limit: self.max_depth });
        }
        if c.iter().all(|&x| x == 0) {
            return Ok(1);
        }
        if let Some(&m) = self.memo.get(c) {
            return Ok(m);
        }
        let mu = self.roots.weight_at(&self.top, c);
        let mr = mu.add(&self.rho);
        let den = &self.top_norm - self.roots.form(&mr, &mr);
        let mut num = Q::zero();
        let positive = self.positive.clone();
        for (coords, rmult, rw) in &positive {
            let mut k = 1;
            loop {
                let above: Vec<i64> = c.iter().zip(coords).map(|(a, b)| a - k * b).collect();
                if above.iter().any(|&x| x < 0) {
                    break;
                }
                let m = self.mult_offset(&above)?;
                if m > 0 {
                    let w = mu.add(&rw.scale(k));
                    num += q((m * rmult) as i64) * self.roots.form(&w, rw);
                }
                k += 1;
            }
        }
        let value = if den.is_zero() { Q::zero() } else { q(2) * num / den };
        let m = as_i64(&value)
            .filter(|x| !x.is_negative())
            .ok_or_else(|| Error::Verification(format!("non-integral affine multiplicity at offset {c:?}")))?;
        self.memo.insert(c.to_vec(), m as u64);
        Ok(m as u64)
    }

    pub fn mult(&mut self, mu: &AffineWeight) -> Result<u64> {
        match self.roots.offset_of(&self.top, mu) {
            Some(c) => self.mult_offset(&c),
            None => Ok(0),
        }
    }

    /// All weights of `X(Λ)` with depth at most `max_depth`, keyed by offset.
    pub fn all(&mut self) -> Result<BTreeMap<Vec<i64>, u64>> {
        let n = self.roots.rank();
        let mut out = BTreeMap::new();
        let mut frontier = vec![vec![0i64; n + 1]];
        out.insert(vec![0i64; n + 1], 1);
        while let Some(c) = frontier.pop() {
            for i in 0..=n {
                let mut d = c.clone();
                d[i] += 1;
                if d[n] > self.max_depth || out.contains_key(&d) {
                    continue;
                }
                let m = self.mult_offset(&d)?;
                if m > 0 {
                    out.insert(d.clone(), m);
                    frontier.push(d);
                }
            }
        }
        Ok(out)
    }
}

/// Multiplicity of `μ` in `X(Λ)` by Freudenthal's recursion, truncated at depth `depth`.
pub fn freudenthal_affine(rs: &RootSystem, top: &AffineWeight, mu: &AffineWeight, depth: i64) -> Result<u64> {
    Freudenthal::new(rs, top, depth)?.mult(mu)
}

/// `ϖ_{λ,r} = λ(K₁)Λ_{n+1} + ϖ_λ + rδ₁`.
pub fn minimal_weight(rs: &RootSystem, lambda: &AffineWeight, r: &Q) -> AffineWeight {
    let (_, varpi) = rs.minimal_coset_rep(&lambda.finite);
    AffineWeight { level: lambda.level, finite: varpi, delta1: r.clone() }
}

/// The finite weight `θ` (simply-laced) or `θ_s` used for root-lattice classes.
pub fn class_root_weight(rs: &RootSystem) -> FiniteWeight {
    if rs.is_simply_laced() {
        rs.root_to_weight(rs.highest_root())
    } else {
        rs.root_to_weight(rs.highest_short_root())
    }
}

/// Outcome of the minimal-weight membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipReport {
    pub weight: AffineWeight,
    pub multiplicity: usize,
    /// The `θ`/`θ_s` variant, present when `λ|_h ∈ Q_fin^+ \ {0}`.
    pub root_variant: Option<(AffineWeight, usize)>,
}

impl MembershipReport {
    pub fn holds(&self) -> bool {
        self.multiplicity > 0 && self.root_variant.as_ref().is_none_or(|(_, m)| *m > 0)
    }
}

/// Check that `ϖ_{λ,r}` (and the `θ`/`θ_s` variant where it applies) is a
/// weight of `X(λ)`, using multiplicities read off the module itself.
pub fn weight_membership(module: &TruncatedModule, r: &Q) -> Result<MembershipReport> {
    let lambda = module.highest_weight().clone();
    let rs = module.root_system().clone();
    let shift = &lambda.delta1 - r;
    let depth = as_i64(&shift)
        .filter(|x| *x >= 0)
        .ok_or_else(|| Error::InvalidArgument(format!("λ(d₁) - r = {shift} is not a non-negative integer")))?;
    if depth > module.depth() {
        return Err(Error::DepthExceeded { requested: depth, limit: module.depth() });
    }
    let weight = minimal_weight(&rs, &lambda, r);
    let multiplicity = module.mult(&weight)?;
    let in_root_lattice = rs.root_lattice_coords(&lambda.finite, &FiniteWeight::zero(rs.rank())).is_some();
    let root_variant = if lambda.finite.is_dominant() && in_root_lattice && lambda.finite.0.iter().any(|&x| x != 0) {
        let w = AffineWeight { level: lambda.level, finite: class_root_weight(&rs), delta1: r.clone() };
        let m = module.mult(&w)?;
        Some((w, m))
    } else {
        None
    };
    Ok(MembershipReport { weight, multiplicity, root_variant })
}

/// Number of partitions of `n`, by the pentagonal-number recurrence.
pub fn partition_count(n: usize) -> u64 {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut s = 0i64;
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            s += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                s += sign * p[m - g2];
            }
            k += 1;
        }
        p[m] = s;
    }
    p[n] as u64
}
