//! Π-functions, the evaluation modules `X_π`, the looped modules
//! `L(X_π) = X_π ⊗ C[t₂^{±1}, …, t_k^{±1}]`, the group `G_π`, the
//! decomposition of `L(X_π)` into the components `X_π^g`, and the
//! isomorphism criterion.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::affine::{AffineElement, AffineWeight, LoopElt, TruncatedModule};
use crate::error::{Error, Result};
use crate::garland::{add_into, factorial, garland_p, transport, GarlandCheck, HGen};
use crate::lattice::{hnf, Lattice};
use crate::lie::FiniteLie;
use crate::num::{kernel, monomial_at, pair_to_q, q, q_to_pair, Span, Q};
use crate::rootsys::{FiniteWeight, RootSystem};
use crate::toroidal::{
    box_reduce, coroot, reflect_toroidal, CentralVector, Toroidal, ToroidalElement, ToroidalRoot, ToroidalWeight,
};

/// Maximum number of tensor factors accepted by [`LoopedModule::build`].
pub const MAX_FACTORS: usize = 3;
/// Maximum level of a single factor.
pub const MAX_LEVEL: i64 = 2;
/// Maximum rank of the finite root system.
pub const MAX_RANK: usize = 2;
/// Maximum truncation depth.
pub const MAX_DEPTH: i64 = 4;
/// Default half-width of the box used for `G_π`.
pub const DEFAULT_BOX: i64 = 4;

/// A basis element of `h_aff = h_fin ⊕ CK₁ ⊕ Cd₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HBasis {
    /// The simple coroot `α_i^∨` (zero-based).
    Coroot(usize),
    K1,
    D1,
}

impl HBasis {
    /// `Λ(h)`.
    pub fn value(&self, w: &AffineWeight) -> Q {
        match self {
            HBasis::Coroot(i) => q(w.finite.0[*i]),
            HBasis::K1 => q(w.level),
            HBasis::D1 => w.delta1.clone(),
        }
    }
}

/// A finitely supported function from points of `(Q*)^{k-1}` to dominant
/// affine weights of positive level.
#[derive(Debug, Clone)]
pub struct PiFunction {
    rs: RootSystem,
    k: usize,
    points: Vec<Vec<Q>>,
    weights: Vec<AffineWeight>,
}

impl PartialEq for PiFunction {
    fn eq(&self, other: &Self) -> bool {
        self.rs.code() == other.rs.code()
            && self.k == other.k
            && self.points == other.points
            && self.weights == other.weights
    }
}

impl Eq for PiFunction {}

#[derive(Serialize, Deserialize)]
struct PiJson {
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    cartan: Option<String>,
    k: usize,
    points: Vec<Vec<[i64; 2]>>,
    weights: Vec<AffineWeight>,
}

impl PiFunction {
    pub fn new(rs: &RootSystem, k: usize, points: Vec<Vec<Q>>, weights: Vec<AffineWeight>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k = {k}; Π-functions need k ≥ 2")));
        }
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::DimensionMismatch(format!("{} points with {} weights", points.len(), weights.len())));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != k - 1 {
                return Err(Error::DimensionMismatch(format!(
                    "point {i} has {} coordinates, expected {}",
                    p.len(),
                    k - 1
                )));
            }
            if p.iter().any(Zero::is_zero) {
                return Err(Error::InvalidArgument(format!("point {i} has a zero coordinate")));
            }
            if points[..i].contains(p) {
                return Err(Error::InvalidArgument(format!("point {i} is repeated")));
            }
        }
        for w in &weights {
            if w.finite.0.len() != rs.rank() {
                return Err(Error::DimensionMismatch(format!("weight {w} for a rank {} root system", rs.rank())));
            }
            if w.level <= 0 {
                return Err(Error::InvalidArgument(format!("weight {w} must have positive level")));
            }
            if !w.is_dominant(rs) {
                return Err(Error::NotDominant(w.to_string()));
            }
        }
        Ok(PiFunction { rs: rs.clone(), k, points, weights })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let raw: PiJson = serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
        let rank = raw.weights.first().map_or(1, |w| w.finite.0.len());
        let code = raw.cartan.unwrap_or_else(|| format!("A{rank}"));
        let rs = RootSystem::from_code(&code)?;
        let points = raw
            .points
            .into_iter()
            .map(|p| p.into_iter().map(pair_to_q).collect::<Result<Vec<Q>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Malformed(e.to_string()))?;
        Self::new(&rs, raw.k, points, raw.weights)
    }

    pub fn to_json(&self) -> Result<Value> {
        let points = self
            .points
            .iter()
            .map(|p| p.iter().map(q_to_pair).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let raw = PiJson { cartan: Some(self.rs.code()), k: self.k, points, weights: self.weights.clone() };
        serde_json::to_value(raw).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The support, in input order.
    pub fn points(&self) -> &[Vec<Q>] {
        &self.points
    }

    pub fn weights(&self) -> &[AffineWeight] {
        &self.weights
    }

    /// `wt(π) = Σ_M π(M)`.
    pub fn wt(&self) -> AffineWeight {
        let n = self.rs.rank();
        self.weights.iter().fold(AffineWeight::new(0, vec![0; n], Q::zero()), |acc, w| acc.add(w))
    }

    pub fn level(&self) -> i64 {
        self.weights.iter().map(|w| w.level).sum()
    }

    /// `φ_π(h ⊗ t^m) = Σ_M π(M)(h) b_M^m`.
    pub fn phi(&self, h: &HBasis, m: &[i64]) -> Q {
        self.points.iter().zip(&self.weights).map(|(p, w)| h.value(w) * monomial_at(p, m)).sum()
    }

    /// The basis `α_1^∨, …, α_n^∨, K₁` of `h_aff` modulo `d₁`.
    pub fn h_basis(&self) -> Vec<HBasis> {
        (0..self.rs.rank()).map(HBasis::Coroot).chain([HBasis::K1]).collect()
    }

    /// The pullback along `s_b`: every support point `p` is moved to `p ⊙ b`.
    pub fn scaled(&self, b: &[Q]) -> Result<Self> {
        if b.len() != self.k - 1 {
            return Err(Error::DimensionMismatch(format!("scaling vector of length {}", b.len())));
        }
        let points = self.points.iter().map(|p| p.iter().zip(b).map(|(x, y)| x * y).collect()).collect();
        Self::new(&self.rs, self.k, points, self.weights.clone())
    }
}

impl FromStr for PiFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_json(&v)
    }
}

/// All integer points of a box, in lexicographic order.
pub fn box_points(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut p2 = p.clone();
                    p2.push(x);
                    p2
                })
            })
            .collect();
    }
    out
}

fn g_pi_in_box(pi: &PiFunction, n: i64) -> Result<Lattice> {
    let hs = pi.h_basis();
    let support: Vec<Vec<i64>> = box_points(&vec![(-n, n); pi.k - 1])
        .into_iter()
        .filter(|m| hs.iter().any(|h| !pi.phi(h, m).is_zero()))
        .collect();
    hnf(pi.k - 1, &support)
}

/// `G_π`: the subgroup generated by the `m ∈ [-N, N]^{k-1}` with
/// `φ_π(h ⊗ t^m) ≠ 0` for some `h`, checked to be of full rank and unchanged
/// when `N` is doubled.
pub fn compute_g_pi(pi: &PiFunction, n: i64) -> Result<Lattice> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("box half-width {n} must be at least 2")));
    }
    let small = g_pi_in_box(pi, n)?;
    let large = g_pi_in_box(pi, 2 * n)?;
    if !small.is_full_rank() || !large.is_full_rank() {
        return Err(Error::BoxTooSmall(format!(
            "rank {} at N = {n} and {} at N = {} in Z^{}",
            small.rank(),
            large.rank(),
            2 * n,
            pi.k - 1
        )));
    }
    if small != large {
        return Err(Error::BoxTooSmall(format!("the generated lattice changes between N = {n} and N = {}", 2 * n)));
    }
    Ok(small)
}

/// The least `t > 0` with `t e_j ∈ G`, for each `j`.
pub fn periods(g: &Lattice) -> Result<Vec<i64>> {
    let r = g.ambient_rank();
    let bound = g.index()?;
    (0..r)
        .map(|j| {
            let mut t = 1i64;
            loop {
                let mut v = vec![0; r];
                v[j] = t;
                if g.contains(&v) {
                    return Ok(t);
                }
                t += 1;
                if num_bigint::BigInt::from(t) > bound {
                    return Err(Error::InfiniteQuotient { rank: g.rank(), ambient: r });
                }
            }
        })
        .collect()
}

/// Basis vector of `X_π`: per factor `(offset, basis index)`.
pub type TensorKey = Vec<(Vec<i64>, usize)>;

/// A weight space of `X_π`: total finite weight and total depth.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TensorSlice {
    pub finite: FiniteWeight,
    pub depth: i64,
}

/// `X_π = ⊗_M X(π(M))`, truncated to total depth `≤ D`, on which
/// `Y ⊗ t₁^s t^m` acts by `Σ_M b_M^m (Y ⊗ t₁^s on the factor at M)`.
pub struct EvalTensorModule {
    pi: PiFunction,
    lie: FiniteLie,
    factors: Vec<TruncatedModule>,
    depth: i64,
    basis: BTreeMap<TensorSlice, Vec<TensorKey>>,
    index: HashMap<TensorKey, usize>,
}

impl EvalTensorModule {
    pub fn new(pi: &PiFunction, depth: i64) -> Result<Self> {
        if depth < 0 {
            return Err(Error::InvalidArgument("depth must be non-negative".into()));
        }
        let lie = FiniteLie::new(pi.root_system())?;
        let factors = pi
            .weights()
            .par_iter()
            .map(|w| TruncatedModule::build_irreducible(&lie, w, depth))
            .collect::<Result<Vec<_>>>()?;
        let n = pi.root_system().rank();
        let mut partial: Vec<(TensorKey, FiniteWeight, i64)> = vec![(Vec::new(), FiniteWeight::zero(n), 0)];
        for f in &factors {
            let mut next = Vec::new();
            for (key, fin, d) in &partial {
                for (c, ws) in f.weight_spaces() {
                    let d2 = d + c[n];
                    if d2 > depth {
                        continue;
                    }
                    let fin2 = fin.add(&f.weight_at(c).finite);
                    for i in 0..ws.dim() {
                        let mut k2 = key.clone();
                        k2.push((c.clone(), i));
                        next.push((k2, fin2.clone(), d2));
                    }
                }
            }
            partial = next;
        }
        let mut basis: BTreeMap<TensorSlice, Vec<TensorKey>> = BTreeMap::new();
        for (key, finite, d) in partial {
            basis.entry(TensorSlice { finite, depth: d }).or_default().push(key);
        }
        let mut index = HashMap::new();
        for keys in basis.values_mut() {
            keys.sort();
            for (i, k) in keys.iter().enumerate() {
                index.insert(k.clone(), i);
            }
        }
        Ok(EvalTensorModule { pi: pi.clone(), lie, factors, depth, basis, index })
    }

    pub fn pi(&self) -> &PiFunction {
        &self.pi
    }

    pub fn lie(&self) -> &FiniteLie {
        &self.lie
    }

    pub fn factors(&self) -> &[TruncatedModule] {
        &self.factors
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    /// Nonzero weight spaces with their bases.
    pub fn slices(&self) -> impl Iterator<Item = (&TensorSlice, &Vec<TensorKey>)> {
        self.basis.iter()
    }

    pub fn dim(&self, s: &TensorSlice) -> usize {
        self.basis.get(s).map_or(0, Vec::len)
    }

    pub fn keys(&self, s: &TensorSlice) -> &[TensorKey] {
        self.basis.get(s).map_or(&[], Vec::as_slice)
    }

    pub fn highest_slice(&self) -> TensorSlice {
        TensorSlice { finite: self.pi.wt().finite, depth: 0 }
    }

    /// `d₁`-eigenvalue on a slice.
    pub fn d1_value(&self, s: &TensorSlice) -> Q {
        self.pi.wt().delta1 - q(s.depth)
    }

    /// `Y_b ⊗ t₁^s` acting on each factor separately: the images, one per
    /// factor, in the common target slice.
    pub fn act_parts(&self, b: usize, s: i64, src: &TensorSlice, v: &[Q]) -> Result<(TensorSlice, Vec<Vec<Q>>)> {
        let rs = self.pi.root_system();
        let target =
            TensorSlice { finite: src.finite.add(&rs.root_to_weight(&self.lie.weight(b))), depth: src.depth - s };
        if target.depth > self.depth {
            return Err(Error::DepthExceeded { requested: target.depth, limit: self.depth });
        }
        let dim = self.dim(&target);
        let mut parts = vec![vec![Q::zero(); dim]; self.factors.len()];
        if dim == 0 {
            return Ok((target, parts));
        }
        let keys = self.keys(src);
        let z = LoopElt { b, j: s };
        for (col, coef) in v.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let key = &keys[col];
            for (i, f) in self.factors.iter().enumerate() {
                let (c, idx) = &key[i];
                let (tc, m) = f.matrix(z, c)?;
                for (row, r) in m.iter().enumerate() {
                    let x = &r[*idx];
                    if x.is_zero() {
                        continue;
                    }
                    let mut k2 = key.clone();
                    k2[i] = (tc.clone(), row);
                    let pos = self.index[&k2];
                    parts[i][pos] += coef * x;
                }
            }
        }
        Ok((target, parts))
    }

    /// `Y_b ⊗ t₁^s t^m` on a vector of the slice `src`.
    pub fn act(&self, b: usize, s: i64, m: &[i64], src: &TensorSlice, v: &[Q]) -> Result<(TensorSlice, Vec<Q>)> {
        let (target, parts) = self.act_parts(b, s, src, v)?;
        Ok((target, self.combine(&parts, m)))
    }

    /// `Σ_M b_M^m · part_M`.
    pub fn combine(&self, parts: &[Vec<Q>], m: &[i64]) -> Vec<Q> {
        let mut out = vec![Q::zero(); parts.first().map_or(0, Vec::len)];
        for (p, part) in self.pi.points().iter().zip(parts) {
            add_into(&mut out, part, &monomial_at(p, m));
        }
        out
    }

    /// Character `(finite weight, depth) ↦ dim`.
    pub fn character(&self) -> BTreeMap<TensorSlice, usize> {
        self.basis.iter().map(|(s, k)| (s.clone(), k.len())).collect()
    }
}

/// A weight space of `L(X_π)`: a weight space of `X_π` tensored with `t^g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LSlice {
    pub slice: TensorSlice,
    pub g: Vec<i64>,
}

impl fmt::Display for LSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "finite={:?};depth={};g={:?}", self.slice.finite.0, self.slice.depth, self.g)
    }
}

/// A vector of `L(X_π)`, dense on each weight space.
pub type LVector = BTreeMap<LSlice, Vec<Q>>;

fn add_to(out: &mut LVector, s: LSlice, v: Vec<Q>) {
    if v.iter().all(Zero::is_zero) {
        return;
    }
    match out.get_mut(&s) {
        Some(acc) => add_into(acc, &v, &q(1)),
        None => {
            out.insert(s, v);
        }
    }
    out.retain(|_, v| v.iter().any(|x| !x.is_zero()));
}

/// `L(X_π) = X_π ⊗ C[t₂^{±1}, …, t_k^{±1}]` restricted to `t^g` with `g` in a
/// finite window.
pub struct LoopedModule {
    base: EvalTensorModule,
    window: Vec<(i64, i64)>,
}

impl LoopedModule {
    /// Build `L(X_π)` at depth `D` on the window `W ⊂ Z^{k-1}`.
    pub fn build(pi: &PiFunction, depth: i64, window: &[(i64, i64)]) -> Result<Self> {
        let rs = pi.root_system();
        if pi.weights().len() > MAX_FACTORS {
            return Err(Error::CapExceeded(format!("{} factors (limit {MAX_FACTORS})", pi.weights().len())));
        }
        if let Some(w) = pi.weights().iter().find(|w| w.level > MAX_LEVEL) {
            return Err(Error::CapExceeded(format!("factor {w} has level above {MAX_LEVEL}")));
        }
        if rs.rank() > MAX_RANK {
            return Err(Error::CapExceeded(format!("rank {} (limit {MAX_RANK})", rs.rank())));
        }
        if depth > MAX_DEPTH {
            return Err(Error::CapExceeded(format!("depth {depth} (limit {MAX_DEPTH})")));
        }
        if window.len() != pi.k() - 1 {
            return Err(Error::DimensionMismatch(format!("window of rank {} for k = {}", window.len(), pi.k())));
        }
        if window.iter().any(|(lo, hi)| lo > hi) {
            return Err(Error::InvalidArgument("empty window".into()));
        }
        Ok(LoopedModule { base: EvalTensorModule::new(pi, depth)?, window: window.to_vec() })
    }

    pub fn base(&self) -> &EvalTensorModule {
        &self.base
    }

    pub fn pi(&self) -> &PiFunction {
        self.base.pi()
    }

    pub fn k(&self) -> usize {
        self.pi().k()
    }

    pub fn depth(&self) -> i64 {
        self.base.depth
    }

    pub fn window(&self) -> &[(i64, i64)] {
        &self.window
    }

    pub fn in_window(&self, g: &[i64]) -> bool {
        g.iter().zip(&self.window).all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    pub fn window_points(&self) -> Vec<Vec<i64>> {
        box_points(&self.window)
    }

    pub fn dim(&self, s: &LSlice) -> usize {
        self.base.dim(&s.slice)
    }

    /// `v_π ⊗ t^g`.
    pub fn highest_vector(&self, g: &[i64]) -> (LSlice, Vec<Q>) {
        let slice = self.base.highest_slice();
        let mut v = vec![Q::zero(); self.base.dim(&slice)];
        v[0] = q(1);
        (LSlice { slice, g: g.to_vec() }, v)
    }

    /// The weight of a slice as a weight of `h_tor`.
    pub fn weight(&self, s: &LSlice) -> ToroidalWeight {
        let k = self.k();
        let mut central = vec![Q::zero(); k];
        central[0] = q(self.pi().level());
        let mut deriv = vec![self.base.d1_value(&s.slice)];
        deriv.extend(s.g.iter().map(|&x| q(x)));
        ToroidalWeight { finite: s.slice.finite.clone(), central, deriv }
    }

    /// The slice carrying a weight, if the weight is of the form produced by [`Self::weight`].
    pub fn slice_of(&self, w: &ToroidalWeight) -> Option<LSlice> {
        let d = self.pi().wt().delta1 - &w.deriv[0];
        if !d.is_integer() || w.deriv[1..].iter().any(|x| !x.is_integer()) {
            return None;
        }
        let g = w.deriv[1..].iter().map(crate::num::as_i64).collect::<Option<Vec<_>>>()?;
        Some(LSlice { slice: TensorSlice { finite: w.finite.clone(), depth: crate::num::as_i64(&d)? }, g })
    }

    fn shifted(&self, g: &[i64], m: &[i64]) -> Result<Vec<i64>> {
        let g2: Vec<i64> = g.iter().zip(m).map(|(a, b)| a + b).collect();
        if !self.in_window(&g2) {
            return Err(Error::WindowExceeded(format!("t-power {g2:?} outside window {:?}", self.window)));
        }
        Ok(g2)
    }

    /// `Y_b ⊗ t^m`, `m ∈ Z^k`, on a homogeneous vector.
    pub fn act_loop(&self, b: usize, m: &[i64], s: &LSlice, v: &[Q]) -> Result<(LSlice, Vec<Q>)> {
        let g = self.shifted(&s.g, &m[1..])?;
        let (slice, w) = self.base.act(b, m[0], &m[1..], &s.slice, v)?;
        Ok((LSlice { slice, g }, w))
    }

    /// `K₁ ⊗ t^{(0, m)}` acting by `φ_π(K₁ ⊗ t^m)` times the shift by `m`.
    pub fn act_k1(&self, m: &[i64], s: &LSlice, v: &[Q]) -> Result<(LSlice, Vec<Q>)> {
        let g = self.shifted(&s.g, m)?;
        let c = self.pi().phi(&HBasis::K1, m);
        Ok((LSlice { slice: s.slice.clone(), g }, v.iter().map(|x| x * &c).collect()))
    }

    /// `h ⊗ t^{(0, m)}` for `h ∈ {α_i^∨, K₁}`.
    pub fn act_hgen(&self, h: &HGen, s: &LSlice, v: &[Q]) -> Result<(LSlice, Vec<Q>)> {
        match h.h {
            HBasis::Coroot(i) => {
                let mut m = vec![0];
                m.extend(&h.m);
                self.act_loop(self.base.lie.cartan(i), &m, s, v)
            }
            HBasis::K1 => self.act_k1(&h.m, s, v),
            HBasis::D1 => Err(Error::InvalidArgument("d₁ ⊗ t^m is not in the acting algebra".into())),
        }
    }

    /// `t^r Σ c_i K_i`: only the `K₁`-coefficient of the reduced form with
    /// `r₁ = 0` acts, all other central elements act as zero.
    pub fn act_central(&self, c: &CentralVector, s: &LSlice, v: &[Q]) -> Result<LVector> {
        let red = c.reduce();
        let mut out = LVector::new();
        if red.r[0] != 0 || red.c[0].is_zero() {
            return Ok(out);
        }
        let (t, w) = self.act_k1(&red.r[1..], s, v)?;
        add_to(&mut out, t, w.into_iter().map(|x| x * &red.c[0]).collect());
        Ok(out)
    }

    /// `d_i` (zero-based): `d₁` through the base, `d_j` by the `t_j`-degree.
    pub fn act_deriv(&self, i: usize, s: &LSlice, v: &[Q]) -> Vec<Q> {
        let c = if i == 0 { self.base.d1_value(&s.slice) } else { q(s.g[i - 1]) };
        v.iter().map(|x| x * &c).collect()
    }

    /// An arbitrary element of `T(g)` on a homogeneous vector.
    pub fn apply_toroidal(&self, x: &ToroidalElement, s: &LSlice, v: &[Q]) -> Result<LVector> {
        if x.k() != self.k() {
            return Err(Error::DimensionMismatch(format!(
                "element of k = {} on a module with k = {}",
                x.k(),
                self.k()
            )));
        }
        let mut out = LVector::new();
        for ((b, m), c) in &x.loops {
            let (t, w) = self.act_loop(*b, m, s, v)?;
            add_to(&mut out, t, w.into_iter().map(|y| y * c).collect());
        }
        for (r, c) in &x.central {
            let cv = CentralVector { r: r.clone(), c: c.clone() };
            for (t, w) in self.act_central(&cv, s, v)? {
                add_to(&mut out, t, w);
            }
        }
        for (i, d) in x.deriv.iter().enumerate() {
            if !d.is_zero() {
                let w = self.act_deriv(i, s, v);
                add_to(&mut out, s.clone(), w.into_iter().map(|y| y * d).collect());
            }
        }
        Ok(out)
    }

    /// Apply an element to every homogeneous piece of a vector.
    pub fn apply_toroidal_vec(&self, x: &ToroidalElement, v: &LVector) -> Result<LVector> {
        let mut out = LVector::new();
        for (s, w) in v {
            for (t, y) in self.apply_toroidal(x, s, w)? {
                add_to(&mut out, t, y);
            }
        }
        Ok(out)
    }

    /// Chevalley generators `(b, t₁-power)`: `x_{α_i}^±` for `i = 0..=n` and the
    /// simple coroots.
    fn generators(&self) -> Result<Vec<(usize, i64)>> {
        let lie = &self.base.lie;
        let n = self.pi().root_system().rank();
        let mut out = Vec::new();
        for i in 0..=n {
            for x in [AffineElement::e(lie, i)?, AffineElement::f(lie, i)?] {
                let (z, _) = x.terms[0];
                out.push((z.b, z.j));
            }
        }
        out.extend((0..n).map(|i| (lie.cartan(i), 0)));
        Ok(out)
    }

    fn raising(&self) -> Result<Vec<(usize, i64)>> {
        let lie = &self.base.lie;
        let n = self.pi().root_system().rank();
        (0..=n)
            .map(|i| {
                let (z, _) = AffineElement::e(lie, i)?.terms[0];
                Ok((z.b, z.j))
            })
            .collect()
    }

    /// `X_π^g`: the closure of `v_π ⊗ t^g` under all generators `x ⊗ t^m`
    /// (with `g + m` in the window) and `K₁ ⊗ t^m`, within the truncation.
    pub fn component(&self, g: &[i64]) -> Result<Component> {
        let gens = self.generators()?;
        let points = self.window_points();
        let (s0, v0) = self.highest_vector(g);
        let mut spaces: BTreeMap<LSlice, Span> = BTreeMap::new();
        let mut span0 = Span::new(v0.len());
        span0.insert(&v0);
        spaces.insert(s0.clone(), span0);
        let mut queue = VecDeque::from([(s0, v0)]);
        while let Some((s, v)) = queue.pop_front() {
            let mut images: Vec<(LSlice, Vec<Q>)> = Vec::new();
            for &(b, t1) in &gens {
                if s.slice.depth - t1 > self.depth() {
                    continue;
                }
                let (target, parts) = self.base.act_parts(b, t1, &s.slice, &v)?;
                if parts.iter().all(|p| p.iter().all(Zero::is_zero)) {
                    continue;
                }
                for g2 in &points {
                    let m: Vec<i64> = g2.iter().zip(&s.g).map(|(a, b)| a - b).collect();
                    images.push((LSlice { slice: target.clone(), g: g2.clone() }, self.base.combine(&parts, &m)));
                }
            }
            for g2 in &points {
                let m: Vec<i64> = g2.iter().zip(&s.g).map(|(a, b)| a - b).collect();
                if m.iter().any(|&x| x != 0) {
                    images.push(self.act_k1(&m, &s, &v)?);
                }
            }
            for (t, w) in images {
                if w.iter().all(Zero::is_zero) {
                    continue;
                }
                let span = spaces.entry(t.clone()).or_insert_with(|| Span::new(w.len()));
                if span.insert(&w) {
                    queue.push_back((t, w));
                }
            }
        }
        Ok(Component { coset: g.to_vec(), spaces })
    }

    /// Basis of `{v : (n⁺_aff ⊗ C[t₂^{±1}, …]) v = 0}` on each slice, using the
    /// generators `x_{α_i}^+ ⊗ t^m` with `g + m` in the window.
    pub fn highest_vectors(&self) -> Result<Vec<(LSlice, Vec<Vec<Q>>)>> {
        let raising = self.raising()?;
        let points = self.window_points();
        let slices: Vec<LSlice> = self
            .base
            .slices()
            .flat_map(|(s, _)| points.iter().map(move |g| LSlice { slice: s.clone(), g: g.clone() }))
            .collect();
        let results = slices
            .par_iter()
            .map(|s| -> Result<Option<(LSlice, Vec<Vec<Q>>)>> {
                let dim = self.dim(s);
                let mut rows: Vec<Vec<Q>> = Vec::new();
                for &(b, t1) in &raising {
                    let mut per_col: Vec<Vec<Vec<Q>>> = Vec::with_capacity(dim);
                    for col in 0..dim {
                        let mut e = vec![Q::zero(); dim];
                        e[col] = q(1);
                        per_col.push(self.base.act_parts(b, t1, &s.slice, &e)?.1);
                    }
                    for g2 in &points {
                        let m: Vec<i64> = g2.iter().zip(&s.g).map(|(a, b)| a - b).collect();
                        let cols: Vec<Vec<Q>> = per_col.iter().map(|parts| self.base.combine(parts, &m)).collect();
                        let tdim = cols.first().map_or(0, Vec::len);
                        rows.extend((0..tdim).map(|r| cols.iter().map(|c| c[r].clone()).collect::<Vec<Q>>()));
                    }
                }
                let ker = kernel(&rows, dim);
                Ok((!ker.is_empty()).then(|| (s.clone(), ker)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(results.into_iter().flatten().collect())
    }
}

/// The generated subspace `X_π^g`, per slice.
#[derive(Debug, Clone)]
pub struct Component {
    pub coset: Vec<i64>,
    pub spaces: BTreeMap<LSlice, Span>,
}

impl Component {
    pub fn dim(&self, s: &LSlice) -> usize {
        self.spaces.get(s).map_or(0, Span::rank)
    }

    /// Monomials `t^g` on which the highest weight slice of the component is nonzero.
    pub fn top_monomials(&self, top: &TensorSlice) -> Vec<Vec<i64>> {
        self.spaces.keys().filter(|s| &s.slice == top).map(|s| s.g.clone()).collect()
    }
}

/// Result of [`decompose`].
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub cosets: Vec<Vec<i64>>,
    pub interior: Vec<(i64, i64)>,
    pub components: Vec<Component>,
    /// For each interior slice of `L`: the component dimensions and `dim L`.
    pub dims: BTreeMap<LSlice, (Vec<usize>, usize)>,
    /// Whether the components are linearly independent on every interior slice.
    pub disjoint: bool,
}

impl Decomposition {
    /// Disjointness and `Σ_g dim X_π^g = dim L` on every interior slice.
    pub fn accounts(&self) -> bool {
        self.disjoint && self.dims.values().all(|(parts, total)| parts.iter().sum::<usize>() == *total)
    }

    pub fn to_json(&self) -> Value {
        let dims: serde_json::Map<String, Value> = self
            .dims
            .iter()
            .map(|(s, (parts, total))| (s.to_string(), json!({ "components": parts, "total": total })))
            .collect();
        json!({
            "cosets": self.cosets,
            "interior": self.interior.iter().map(|(a, b)| vec![*a, *b]).collect::<Vec<_>>(),
            "accounts": self.accounts(),
            "dims": dims,
        })
    }
}

/// Decompose `L(X_π) = ⊕_{g ∈ Z^{k-1}/G_π} X_π^g` on the window interior.
pub fn decompose(l: &LoopedModule, g_pi: &Lattice) -> Result<Decomposition> {
    if g_pi.ambient_rank() != l.k() - 1 {
        return Err(Error::DimensionMismatch("G_π of the wrong rank".into()));
    }
    let cosets = g_pi.quotient_reps()?;
    let per = periods(g_pi)?;
    let interior: Vec<(i64, i64)> = l.window.iter().zip(&per).map(|((lo, hi), t)| (lo + t, hi - t)).collect();
    if interior.iter().any(|(lo, hi)| lo > hi) {
        return Err(Error::WindowExceeded(format!("window {:?} has no interior for periods {per:?}", l.window)));
    }
    for g in &cosets {
        for (j, t) in per.iter().enumerate() {
            for sign in [-1, 1] {
                let mut h = g.clone();
                h[j] += sign * t;
                if !l.in_window(&h) {
                    return Err(Error::WindowExceeded(format!(
                        "window {:?} too small for coset representative {g:?} with periods {per:?}",
                        l.window
                    )));
                }
            }
        }
    }
    let components = cosets.par_iter().map(|g| l.component(g)).collect::<Result<Vec<_>>>()?;
    let mut dims = BTreeMap::new();
    let mut disjoint = true;
    for (s, _) in l.base.slices() {
        for g in box_points(&interior) {
            let ls = LSlice { slice: s.clone(), g };
            let parts: Vec<usize> = components.iter().map(|c| c.dim(&ls)).collect();
            let mut all = Span::new(l.dim(&ls));
            for c in &components {
                if let Some(sp) = c.spaces.get(&ls) {
                    for v in sp.basis() {
                        all.insert(&v);
                    }
                }
            }
            if all.rank() != parts.iter().sum::<usize>() {
                disjoint = false;
            }
            let total = l.dim(&ls);
            dims.insert(ls, (parts, total));
        }
    }
    Ok(Decomposition { cosets, interior, components, dims, disjoint })
}

/// Outcome of a check that is a list of individual comparisons.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "holds": self.holds(), "checked": self.checked, "skipped": self.skipped, "failures": self.failures })
    }
}

fn lvec_eq(a: &LVector, b: &LVector) -> bool {
    let nz = |v: &LVector| -> LVector {
        v.iter().filter(|(_, x)| x.iter().any(|y| !y.is_zero())).map(|(s, x)| (s.clone(), x.clone())).collect()
    };
    nz(a) == nz(b)
}

fn lvec_sub(a: &LVector, b: &LVector) -> LVector {
    let mut out = a.clone();
    for (s, v) in b {
        add_to(&mut out, s.clone(), v.iter().map(|x| -x).collect());
    }
    out
}

/// Check that `K_j t^r` (`j ≥ 2`) and `K₁ t^r` (`r₁ ≠ 0`) act as zero, that
/// `K₁` acts by the level, and that commutators of loop operators agree with
/// the action of their brackets in `T(g)` (central terms included), on test
/// vectors of low depth with `t`-degree at the centre of the window.
pub fn central_triviality_check(l: &LoopedModule) -> Result<CheckReport> {
    let k = l.k();
    let mut report = CheckReport::default();
    let centre: Vec<i64> = l.window.iter().map(|(lo, hi)| (lo + hi).div_euclid(2)).collect();
    let mut vectors: Vec<(LSlice, Vec<Q>)> = vec![l.highest_vector(&centre)];
    for (s, keys) in l.base.slices() {
        if s.depth >= 1 && s.depth < l.depth() {
            let mut e = vec![Q::zero(); keys.len()];
            e[0] = q(1);
            vectors.push((LSlice { slice: s.clone(), g: centre.clone() }, e));
            if vectors.len() >= 4 {
                break;
            }
        }
    }
    let degrees = box_points(&vec![(-1, 1); k]);
    for (s, v) in &vectors {
        for r in &degrees {
            for j in 0..k {
                let x = ToroidalElement::central_term(&CentralVector::unit(r, j));
                let img = match l.apply_toroidal(&x, s, v) {
                    Ok(img) => img,
                    Err(Error::WindowExceeded(_)) => {
                        report.skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let zero_expected = j >= 1 || r[0] != 0;
                if zero_expected {
                    report.record(img.is_empty(), || format!("K_{} t^{r:?} acts nonzero on {s}", j + 1));
                } else if r.iter().all(|&x| x == 0) {
                    let mut expected = LVector::new();
                    add_to(&mut expected, s.clone(), v.iter().map(|y| y * q(l.pi().level())).collect());
                    report.record(lvec_eq(&img, &expected), || format!("K₁ does not act by the level on {s}"));
                }
            }
        }
    }
    if l.pi().root_system().cartan_type() != crate::rootsys::CartanType::A {
        return Ok(report);
    }
    let tor = Toroidal::new(l.pi().root_system(), k)?;
    let lie = tor.lie();
    let rs = l.pi().root_system();
    let mut elements = Vec::new();
    for m in &degrees {
        for root in rs.roots() {
            elements.push(ToroidalElement::loop_term(k, lie.root_vector(root)?, m, q(1)));
        }
        for i in 0..rs.rank() {
            elements.push(ToroidalElement::loop_term(k, lie.cartan(i), m, q(1)));
        }
    }
    for (s, v) in vectors.iter().take(2) {
        let mut vv = LVector::new();
        vv.insert(s.clone(), v.clone());
        for (ia, a) in elements.iter().enumerate() {
            for b in &elements[ia + 1..] {
                let lhs = (|| -> Result<LVector> {
                    let ab = l.apply_toroidal_vec(a, &l.apply_toroidal_vec(b, &vv)?)?;
                    let ba = l.apply_toroidal_vec(b, &l.apply_toroidal_vec(a, &vv)?)?;
                    Ok(lvec_sub(&ab, &ba))
                })();
                let rhs = tor.bracket(a, b).and_then(|c| l.apply_toroidal_vec(&c, &vv));
                match (lhs, rhs) {
                    (Ok(x), Ok(y)) => report.record(lvec_eq(&x, &y), || format!("commutator mismatch on {s}")),
                    (Err(Error::WindowExceeded(_) | Error::DepthExceeded { .. }), _)
                    | (_, Err(Error::WindowExceeded(_) | Error::DepthExceeded { .. })) => report.skipped += 1,
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                }
            }
        }
    }
    Ok(report)
}

/// `dim V_λ = dim V_{r_β λ}` for every weight `λ` of the truncation with `t`-degree
/// in the window and every real root `β = α + δ_m`, `m ∈ [-e, e]^k`, whose
/// reflection stays inside the truncation.
pub fn weyl_invariance_check(l: &LoopedModule, e: i64) -> Result<CheckReport> {
    let rs = l.pi().root_system();
    let k = l.k();
    let mut report = CheckReport::default();
    let exps = box_points(&vec![(-e, e); k]);
    for (s, _) in l.base.slices() {
        for g in l.window_points() {
            let ls = LSlice { slice: s.clone(), g };
            let lambda = l.weight(&ls);
            for alpha in rs.roots() {
                for m in &exps {
                    let beta = ToroidalRoot::new(alpha.clone(), m.clone());
                    let mu = reflect_toroidal(rs, &lambda, &beta)?;
                    let Some(t) = l.slice_of(&mu) else {
                        report.record(false, || format!("r_β λ has a non-integral grade for {ls}"));
                        continue;
                    };
                    if t.slice.depth > l.depth() || !l.in_window(&t.g) {
                        report.skipped += 1;
                        continue;
                    }
                    let (a, b) = (l.dim(&ls), l.dim(&t));
                    report.record(a == b, || format!("dim {a} at {ls} but {b} at {t} (β = {alpha:?} + δ_{m:?})"));
                }
            }
        }
    }
    Ok(report)
}

/// For each weight `λ` of the truncation with `<λ, α_{n+1}^∨> = m > 0`, the box
/// reduction lands on a weight of `L(X_π)` with every `d_j`-value (`j ≥ 2`) in `[0, m)`.
pub fn box_reduction_check(l: &LoopedModule) -> Result<CheckReport> {
    let rs = l.pi().root_system();
    let a = ToroidalRoot::affine_simple(rs, l.k(), 0);
    let co = coroot(rs, &a)?;
    let mut report = CheckReport::default();
    for (s, _) in l.base.slices() {
        for g in l.window_points() {
            let ls = LSlice { slice: s.clone(), g };
            let lambda = l.weight(&ls);
            let m = co.pair(&lambda);
            if !m.is_positive() {
                report.skipped += 1;
                continue;
            }
            let red = box_reduce(rs, &lambda)?;
            let w = &red.weight;
            let in_box = w.deriv[1..].iter().all(|d| !d.is_negative() && d < &m);
            let ok = in_box
                && l.slice_of(w).is_some_and(|t| t.slice == ls.slice && l.dim(&t) > 0)
                && w.central == lambda.central;
            report.record(ok, || format!("box reduction of {ls} gave {w:?}"));
        }
    }
    Ok(report)
}

/// The Garland identities on `v_π ⊗ t^g ∈ L(X_π)` for the `sl_2` of
/// `β = α + rδ₁` with `a = t^a` a monomial in `t₂, …, t_k`:
/// `(x^+⊗a)^{(q)} (x^-)^{(q+1)} v = (-1)^q Σ_{s=0}^{q} (x^-⊗a^{q-s}) p^s v` and
/// `(x^+⊗a)^{(q+1)} (x^-)^{(q+1)} v = (-1)^{q+1} p^{q+1} v`,
/// where `p^s` is transported to `h ⊗ C[t₂^{±1}, …]` and applied as operators.
pub fn verify_garland_on_l(
    l: &LoopedModule,
    alpha: &[i64],
    r: i64,
    a: &[i64],
    qq: u32,
    g: &[i64],
) -> Result<GarlandCheck> {
    let rs = l.pi().root_system();
    let lie = &l.base.lie;
    let neg: Vec<i64> = alpha.iter().map(|c| -c).collect();
    let e = lie.root_vector(alpha)?;
    let f = lie.root_vector(&neg)?;
    let with_a = |t1: i64, pow: i64| -> Vec<i64> {
        let mut m = vec![t1];
        m.extend(a.iter().map(|x| x * pow));
        m
    };
    let (s0, v0) = l.highest_vector(g);
    let (mut s, mut v) = (s0.clone(), v0.clone());
    for _ in 0..=qq {
        (s, v) = l.act_loop(f, &with_a(-r, 0), &s, &v)?;
    }
    for _ in 0..qq {
        (s, v) = l.act_loop(e, &with_a(r, 1), &s, &v)?;
    }
    let first_lhs: Vec<Q> = v.iter().map(|y| y / (factorial(qq) * factorial(qq + 1))).collect();
    let first_target = s.clone();
    (s, v) = l.act_loop(e, &with_a(r, 1), &s, &v)?;
    let second_lhs: Vec<Q> = v.iter().map(|y| y / (factorial(qq + 1) * factorial(qq + 1))).collect();
    let second_target = s;

    let p_on_top = |deg: u32| -> Result<(LSlice, Vec<Q>)> {
        let poly = transport(&garland_p(deg), rs, alpha, r, a)?;
        let mut target =
            LSlice { slice: s0.slice.clone(), g: g.iter().zip(a).map(|(x, y)| x + y * i64::from(deg)).collect() };
        let mut acc = vec![Q::zero(); v0.len()];
        for (mono, coef) in poly.terms() {
            let (mut cs, mut cv) = (s0.clone(), v0.clone());
            for (h, ex) in mono {
                for _ in 0..*ex {
                    (cs, cv) = l.act_hgen(h, &cs, &cv)?;
                }
            }
            target = cs;
            add_into(&mut acc, &cv, coef);
        }
        Ok((target, acc))
    };
    let sign = |n: u32| if n.is_multiple_of(2) { q(1) } else { q(-1) };
    let mut first_rhs = vec![Q::zero(); first_lhs.len()];
    for deg in 0..=qq {
        let (cp, vp) = p_on_top(deg)?;
        let (ct, vt) = l.act_loop(f, &with_a(-r, i64::from(qq - deg)), &cp, &vp)?;
        if ct != first_target {
            return Err(Error::Verification("Garland terms land in different weight spaces".into()));
        }
        add_into(&mut first_rhs, &vt, &sign(qq));
    }
    let (cp, vp) = p_on_top(qq + 1)?;
    if cp != second_target {
        return Err(Error::Verification("Garland terms land in different weight spaces".into()));
    }
    let mut second_rhs = vec![Q::zero(); second_lhs.len()];
    add_into(&mut second_rhs, &vp, &sign(qq + 1));
    Ok(GarlandCheck { first_lhs, first_rhs, second_lhs, second_rhs })
}

/// Outcome of an isomorphism test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoOutcome {
    pub isomorphic: bool,
    /// The scaling `b` with `supp(π') = b ⊙ supp(π)`, when one exists.
    pub witness: Option<Vec<Q>>,
    pub reason: String,
}

impl IsoOutcome {
    pub fn to_json(&self) -> Result<Value> {
        let witness = match &self.witness {
            Some(b) => Value::from(b.iter().map(|x| q_to_pair(x).map(|p| json!(p))).collect::<Result<Vec<_>>>()?),
            None => Value::Null,
        };
        Ok(json!({ "isomorphic": self.isomorphic, "witness": witness, "reason": self.reason }))
    }
}

/// Factor modules agree as `g ⊗ C[t₁^{±1}] ⊕ CK₁`-modules: equal level and
/// finite part; the `δ₁`-coefficient is not seen by this algebra.
fn same_factor(a: &AffineWeight, b: &AffineWeight) -> bool {
    a.level == b.level && a.finite == b.finite
}

/// `X_π ≅ X_{π'}` iff some `b ∈ (Q*)^{k-1}` moves `supp(π)` bijectively onto
/// `supp(π')` with matching factor modules.
pub fn iso_check_evaluation(pi: &PiFunction, pi2: &PiFunction) -> Result<IsoOutcome> {
    if pi.k() != pi2.k() {
        return Err(Error::DimensionMismatch(format!("k = {} vs k = {}", pi.k(), pi2.k())));
    }
    if pi.root_system().code() != pi2.root_system().code() {
        return Err(Error::InvalidArgument(format!(
            "root systems {} and {} differ",
            pi.root_system().code(),
            pi2.root_system().code()
        )));
    }
    let no = |reason: &str| IsoOutcome { isomorphic: false, witness: None, reason: reason.into() };
    if pi.points().len() != pi2.points().len() {
        return Ok(no("supports have different sizes"));
    }
    let p0 = &pi.points()[0];
    for cand in pi2.points() {
        let b: Vec<Q> = cand.iter().zip(p0).map(|(x, y)| x / y).collect();
        let matches = pi.points().iter().zip(pi.weights()).all(|(p, w)| {
            let image: Vec<Q> = p.iter().zip(&b).map(|(x, y)| x * y).collect();
            pi2.points().iter().position(|p2| *p2 == image).is_some_and(|j| same_factor(w, &pi2.weights()[j]))
        });
        if matches {
            return Ok(IsoOutcome {
                isomorphic: true,
                witness: Some(b),
                reason: "a scaling matches the supports and their factor modules".into(),
            });
        }
    }
    Ok(no("no scaling maps supp(π) onto supp(π') with matching factor modules"))
}

/// `X_π^g ≅ X_{π'}^{g'}` iff the evaluation modules match under some scaling
/// and `g ≡ g' mod G_π`. On success `G_π = G_{π'}` is asserted.
pub fn iso_check(pi: &PiFunction, g: &[i64], pi2: &PiFunction, g2: &[i64], box_n: i64) -> Result<IsoOutcome> {
    if g.len() != pi.k() - 1 || g2.len() != pi2.k() - 1 {
        return Err(Error::DimensionMismatch("coset vector of the wrong length".into()));
    }
    let ev = iso_check_evaluation(pi, pi2)?;
    if !ev.isomorphic {
        return Ok(ev);
    }
    let lattice = compute_g_pi(pi, box_n)?;
    let diff: Vec<i64> = g.iter().zip(g2).map(|(a, b)| a - b).collect();
    if !lattice.contains(&diff) {
        return Ok(IsoOutcome {
            isomorphic: false,
            witness: ev.witness,
            reason: format!("g - g' = {diff:?} is not in G_π"),
        });
    }
    let lattice2 = compute_g_pi(pi2, box_n)?;
    if lattice != lattice2 {
        return Err(Error::Verification("isomorphic modules with different G_π".into()));
    }
    Ok(IsoOutcome {
        isomorphic: true,
        witness: ev.witness,
        reason: "a scaling matches the supports and factor modules, and g - g' lies in G_π".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qf;

    fn a1() -> RootSystem {
        RootSystem::from_code("A1").unwrap()
    }

    fn basic() -> AffineWeight {
        AffineWeight::basic(1)
    }

    fn two_point(w1: AffineWeight, w2: AffineWeight) -> PiFunction {
        PiFunction::new(&a1(), 2, vec![vec![q(1)], vec![q(-1)]], vec![w1, w2]).unwrap()
    }

    #[test]
    fn phi_examples() {
        let single = PiFunction::new(&a1(), 2, vec![vec![q(3)]], vec![AffineWeight::new(2, vec![1], q(0))]).unwrap();
        assert_eq!(single.phi(&HBasis::K1, &[0]), q(2));
        let w = AffineWeight::new(1, vec![1], q(0));
        let pi = two_point(w.clone(), w);
        assert_eq!(pi.phi(&HBasis::Coroot(0), &[1]), q(0));
        assert_eq!(pi.phi(&HBasis::Coroot(0), &[2]), q(2));
        assert_eq!(pi.phi(&HBasis::K1, &[-3]), q(0));
    }

    #[test]
    fn validation() {
        let w = basic();
        assert!(PiFunction::new(&a1(), 1, vec![vec![]], vec![w.clone()]).is_err());
        assert!(PiFunction::new(&a1(), 2, vec![vec![q(0)]], vec![w.clone()]).is_err());
        assert!(PiFunction::new(&a1(), 2, vec![vec![q(1)], vec![q(1)]], vec![w.clone(), w.clone()]).is_err());
        assert!(PiFunction::new(&a1(), 2, vec![vec![q(1)]], vec![AffineWeight::new(0, vec![0], q(0))]).is_err());
        assert!(PiFunction::new(&a1(), 2, vec![vec![q(1)]], vec![AffineWeight::new(1, vec![2], q(0))]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let pi = PiFunction::new(&a1(), 3, vec![vec![qf(1, 2), q(-3)]], vec![AffineWeight::new(2, vec![1], qf(1, 3))])
            .unwrap();
        let v = pi.to_json().unwrap();
        assert_eq!(PiFunction::from_json(&v).unwrap(), pi);
        assert!(matches!(PiFunction::from_str("{\"k\": 2}"), Err(Error::Malformed(_))));
        let untyped = r#"{"k":2,"points":[[[1,1]]],"weights":[{"level":1,"finite":[0],"delta1":[0,1]}]}"#;
        assert_eq!(PiFunction::from_str(untyped).unwrap().root_system().code(), "A1");
    }

    #[test]
    fn g_pi_examples() {
        let single = PiFunction::new(&a1(), 3, vec![vec![q(2), q(-1)]], vec![basic()]).unwrap();
        assert_eq!(compute_g_pi(&single, 4).unwrap(), Lattice::full(2));
        let same = two_point(basic(), basic());
        let g = compute_g_pi(&same, 4).unwrap();
        assert_eq!(g.basis_i64().unwrap(), vec![vec![2]]);
        assert_eq!(g.quotient_reps().unwrap().len(), 2);
        let diff = two_point(basic(), AffineWeight::new(1, vec![1], q(0)));
        assert_eq!(compute_g_pi(&diff, 4).unwrap(), Lattice::full(1));
        assert!(compute_g_pi(&same, 1).is_err());
    }

    #[test]
    fn single_point_slices_match_factor() {
        let pi = PiFunction::new(&a1(), 2, vec![vec![q(2)]], vec![basic()]).unwrap();
        let l = LoopedModule::build(&pi, 3, &[(-1, 1)]).unwrap();
        let x = &l.base().factors()[0];
        for (c, ws) in x.weight_spaces() {
            let s = TensorSlice { finite: x.weight_at(c).finite, depth: c[1] };
            assert_eq!(l.base().dim(&s), ws.dim());
        }
    }

    #[test]
    fn h_action_on_top() {
        let w = AffineWeight::new(1, vec![1], q(0));
        let pi = two_point(w.clone(), AffineWeight::new(2, vec![1], q(0)));
        let l = LoopedModule::build(&pi, 1, &[(-2, 2)]).unwrap();
        let (s, v) = l.highest_vector(&[0]);
        let h = l.base().lie().cartan(0);
        let (t, img) = l.act_loop(h, &[0, 1], &s, &v).unwrap();
        assert_eq!(t.g, vec![1]);
        assert_eq!(img, vec![pi.phi(&HBasis::Coroot(0), &[1])]);
        assert_eq!(img, vec![q(0)]);
        let (_, img) = l.act_k1(&[1], &s, &v).unwrap();
        assert_eq!(img, vec![q(1 - 2)]);
    }

    #[test]
    fn two_factor_action_is_sum_of_evaluations() {
        let lie = FiniteLie::new(&a1()).unwrap();
        let w = AffineWeight::new(1, vec![1], q(0));
        let pi = PiFunction::new(&a1(), 2, vec![vec![q(2)], vec![q(3)]], vec![w.clone(), basic()]).unwrap();
        let l = LoopedModule::build(&pi, 1, &[(-2, 2)]).unwrap();
        let f = lie.root_vector(&[-1]).unwrap();
        let (s, v) = l.highest_vector(&[0]);
        let (t, img) = l.act_loop(f, &[0, 1], &s, &v).unwrap();
        // Oracle: f acts on the first factor only (the second is trivial for g_fin at depth 0).
        let x = TruncatedModule::build_irreducible(&lie, &w, 1).unwrap();
        let (_, fx) = x.apply(LoopElt { b: f, j: 0 }, &[0, 0], &[q(1)]).unwrap();
        assert_eq!(t.g, vec![1]);
        assert_eq!(img.iter().filter(|c| !c.is_zero()).count(), 1);
        assert_eq!(img.iter().find(|c| !c.is_zero()).unwrap(), &(&fx[0] * q(2)));
    }

    #[test]
    fn central_elements() {
        let pi = two_point(basic(), basic());
        let l = LoopedModule::build(&pi, 2, &[(-3, 3)]).unwrap();
        let report = central_triviality_check(&l).unwrap();
        assert!(report.holds(), "{report:?}");
        let (s, v) = l.highest_vector(&[0]);
        let k2 = ToroidalElement::central_term(&CentralVector::unit(&[0, 1], 1));
        assert!(l.apply_toroidal(&k2, &s, &v).unwrap().is_empty());
        let k1 = ToroidalElement::central_term(&CentralVector::unit(&[0, 0], 0));
        assert_eq!(l.apply_toroidal(&k1, &s, &v).unwrap()[&s], vec![q(2)]);
        let k1t3 = ToroidalElement::central_term(&CentralVector::unit(&[0, 2], 0));
        let img = l.apply_toroidal(&k1t3, &s, &v).unwrap();
        assert_eq!(img.values().next().unwrap(), &vec![q(2)]);
    }

    #[test]
    fn decomposition_of_two_point_example() {
        let pi = two_point(basic(), basic());
        let g = compute_g_pi(&pi, 4).unwrap();
        let l = LoopedModule::build(&pi, 2, &[(-3, 3)]).unwrap();
        let d = decompose(&l, &g).unwrap();
        assert_eq!(d.cosets, vec![vec![0], vec![1]]);
        assert!(d.accounts(), "{:?}", d.dims);
        let top = l.base().highest_slice();
        for c in &d.components {
            for m in c.top_monomials(&top) {
                assert_eq!((m[0] - c.coset[0]).rem_euclid(2), 0);
            }
        }
        // The top slice splits by parity.
        for (s, (parts, _)) in &d.dims {
            if s.slice == top {
                let expected = if s.g[0].rem_euclid(2) == 0 { vec![1, 0] } else { vec![0, 1] };
                assert_eq!(parts, &expected);
            }
        }
    }

    #[test]
    fn single_component_when_g_pi_is_everything() {
        let pi = PiFunction::new(&a1(), 2, vec![vec![q(2)]], vec![basic()]).unwrap();
        let g = compute_g_pi(&pi, 4).unwrap();
        let l = LoopedModule::build(&pi, 2, &[(-2, 2)]).unwrap();
        let d = decompose(&l, &g).unwrap();
        assert_eq!(d.components.len(), 1);
        assert!(d.accounts());
        assert!(decompose(&LoopedModule::build(&pi, 1, &[(0, 1)]).unwrap(), &g).is_err());
    }

    #[test]
    fn highest_vectors_nonempty() {
        let pi = two_point(basic(), basic());
        let l = LoopedModule::build(&pi, 1, &[(-1, 1)]).unwrap();
        let hv = l.highest_vectors().unwrap();
        let top = l.base().highest_slice();
        for g in -1..=1 {
            assert!(hv.iter().any(|(s, b)| s.slice == top && s.g == vec![g] && b.len() == 1));
        }
        let single = PiFunction::new(&a1(), 2, vec![vec![q(1)]], vec![basic()]).unwrap();
        let l = LoopedModule::build(&single, 2, &[(-1, 1)]).unwrap();
        let hv = l.highest_vectors().unwrap();
        assert_eq!(hv.len(), 3);
        assert!(hv.iter().all(|(s, b)| s.slice == top && b.len() == 1));
    }

    #[test]
    fn weyl_and_box_checks() {
        let pi = two_point(basic(), AffineWeight::new(1, vec![1], q(0)));
        let l = LoopedModule::build(&pi, 2, &[(-2, 2)]).unwrap();
        let r = weyl_invariance_check(&l, 2).unwrap();
        assert!(r.holds(), "{r:?}");
        let r = box_reduction_check(&l).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn garland_on_looped_module() {
        let w1 = AffineWeight::new(1, vec![1], q(0));
        let w2 = AffineWeight::new(2, vec![2], q(0));
        // r = 0 needs no depth: everything happens in the top t₁-degree.
        let l = LoopedModule::build(&two_point(w2, w1), 0, &[(-4, 4)]).unwrap();
        for qq in 1..=2 {
            let c = verify_garland_on_l(&l, &[1], 0, &[1], qq, &[0]).unwrap();
            assert!(c.holds(), "q = {qq}: {c:?}");
            assert!(c.nontrivial());
        }
        let c = verify_garland_on_l(&l, &[1], 0, &[2], 1, &[-1]).unwrap();
        assert!(c.holds() && c.nontrivial(), "{c:?}");
        let l = LoopedModule::build(&two_point(basic(), basic()), 2, &[(-3, 3)]).unwrap();
        for alpha in [[1], [-1]] {
            let c = verify_garland_on_l(&l, &alpha, 1, &[1], 1, &[0]).unwrap();
            assert!(c.holds() && c.nontrivial(), "{alpha:?}: {c:?}");
        }
    }

    #[test]
    fn iso_examples() {
        let w = AffineWeight::new(1, vec![1], q(0));
        let pi = two_point(basic(), w.clone());
        let same = iso_check(&pi, &[0], &pi, &[0], 4).unwrap();
        assert!(same.isomorphic);
        assert_eq!(same.witness, Some(vec![q(1)]));
        let scaled = pi.scaled(&[qf(3, 2)]).unwrap();
        let r = iso_check(&pi, &[1], &scaled, &[1], 4).unwrap();
        assert_eq!(r.witness, Some(vec![qf(3, 2)]));
        // G_π = Z here, so every g' is in the coset.
        assert!(iso_check(&pi, &[0], &scaled, &[5], 4).unwrap().isomorphic);
        let even = two_point(basic(), basic());
        assert!(!iso_check(&even, &[0], &even, &[1], 4).unwrap().isomorphic);
        assert!(iso_check(&even, &[0], &even, &[2], 4).unwrap().isomorphic);
        let changed = two_point(basic(), AffineWeight::new(2, vec![0], q(0)));
        assert!(!iso_check_evaluation(&pi, &changed).unwrap().isomorphic);
        let shifted = two_point(basic(), AffineWeight::new(1, vec![1], q(5)));
        assert!(iso_check_evaluation(&pi, &shifted).unwrap().isomorphic);
        let k3 = PiFunction::new(&a1(), 3, vec![vec![q(1), q(1)]], vec![basic()]).unwrap();
        assert!(iso_check_evaluation(&pi, &k3).is_err());
    }

    #[test]
    fn caps() {
        let pi = PiFunction::new(&a1(), 2, vec![vec![q(1)]], vec![AffineWeight::new(3, vec![0], q(0))]).unwrap();
        assert!(matches!(LoopedModule::build(&pi, 1, &[(0, 0)]), Err(Error::CapExceeded(_))));
        let pi = PiFunction::new(&a1(), 2, vec![vec![q(1)]], vec![basic()]).unwrap();
        assert!(matches!(LoopedModule::build(&pi, 5, &[(0, 0)]), Err(Error::CapExceeded(_))));
    }
}
