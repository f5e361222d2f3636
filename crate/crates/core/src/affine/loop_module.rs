//! Loop modules `V(λ, a, b) = V(λ₁) ⊗ ⋯ ⊗ V(λ_r) ⊗ C[t₁^{±1}]`, truncated to a
//! finite window of `t₁`-powers.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::module::TruncatedModule;
use super::verma::LoopElt;
use super::AffineWeight;
use crate::error::{Error, Result};
use crate::lie::FiniteLie;
use crate::num::{q, qpow, Q};
use crate::rootsys::FiniteWeight;

/// A pure tensor of basis vectors: per factor `(offset, basis index)`, and the power of `t₁`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LoopKey {
    pub factors: Vec<(Vec<i64>, usize)>,
    pub p: i64,
}

pub type LoopVector = BTreeMap<LoopKey, Q>;

pub struct LoopModule {
    factors: Vec<TruncatedModule>,
    lambdas: Vec<FiniteWeight>,
    points: Vec<Q>,
    b: Q,
    window: (i64, i64),
}

impl LoopModule {
    pub fn new(lie: &FiniteLie, lambdas: &[FiniteWeight], points: &[Q], b: Q, window: (i64, i64)) -> Result<Self> {
        if lambdas.len() != points.len() {
            return Err(Error::DimensionMismatch(format!("{} weights for {} points", lambdas.len(), points.len())));
        }
        if points.iter().any(Zero::is_zero) || b.is_zero() {
            return Err(Error::InvalidArgument("evaluation points and b must be nonzero".into()));
        }
        for (i, a) in points.iter().enumerate() {
            if points[..i].contains(a) {
                return Err(Error::InvalidArgument(format!("repeated evaluation point {a}")));
            }
        }
        if window.0 > window.1 {
            return Err(Error::InvalidArgument("empty window".into()));
        }
        let factors = lambdas
            .iter()
            .map(|l| {
                if !l.is_dominant() {
                    return Err(Error::NotDominant(l.to_string()));
                }
                TruncatedModule::build_quotient(lie, &AffineWeight::new(0, l.0.clone(), Q::zero()), 0)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LoopModule { factors, lambdas: lambdas.to_vec(), points: points.to_vec(), b, window })
    }

    pub fn factors(&self) -> &[TruncatedModule] {
        &self.factors
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    /// `v_{λ₁} ⊗ ⋯ ⊗ v_{λ_r} ⊗ t₁^p`.
    pub fn highest_vector(&self, p: i64) -> LoopVector {
        let n = self.lambdas.first().map_or(0, |l| l.0.len());
        let key = LoopKey { factors: vec![(vec![0; n + 1], 0); self.factors.len()], p };
        BTreeMap::from([(key, q(1))])
    }

    /// All pure-tensor basis keys with `t₁`-power `p`.
    pub fn basis(&self, p: i64) -> Vec<LoopKey> {
        let mut keys: Vec<Vec<(Vec<i64>, usize)>> = vec![Vec::new()];
        for f in &self.factors {
            let mut next = Vec::new();
            for k in &keys {
                for (c, ws) in f.weight_spaces() {
                    for i in 0..ws.dim() {
                        let mut k2 = k.clone();
                        k2.push((c.clone(), i));
                        next.push(k2);
                    }
                }
            }
            keys = next;
        }
        keys.into_iter().map(|factors| LoopKey { factors, p }).collect()
    }

    /// Finite weight of a basis key.
    pub fn weight(&self, key: &LoopKey) -> FiniteWeight {
        let n = self.lambdas.first().map_or(0, |l| l.0.len());
        key.factors
            .iter()
            .zip(&self.factors)
            .fold(FiniteWeight::zero(n), |acc, ((c, _), f)| acc.add(&f.weight_at(c).finite))
    }

    /// Dimension of the weight space with finite part `mu` in each `t₁`-slice.
    pub fn weight_space_dim(&self, mu: &FiniteWeight) -> usize {
        self.basis(0).iter().filter(|k| &self.weight(k) == mu).count()
    }

    /// `x ⊗ t₁^s` acting by `Σ_i a_i^s (x on factor i) ⊗ t₁^s`.
    pub fn act(&self, x: usize, s: i64, v: &LoopVector) -> Result<LoopVector> {
        let mut out: LoopVector = BTreeMap::new();
        for (key, coef) in v {
            let p = key.p + s;
            if p < self.window.0 || p > self.window.1 {
                return Err(Error::WindowExceeded(format!("t₁-power {p} outside window {:?}", self.window)));
            }
            for (i, (f, a)) in self.factors.iter().zip(&self.points).enumerate() {
                let (c, idx) = &key.factors[i];
                let ws = f.space(c).map_or(0, |w| w.dim());
                let mut e = vec![Q::zero(); ws];
                e[*idx] = q(1);
                let (target, img) = f.apply(LoopElt { b: x, j: 0 }, c, &e)?;
                let scale = coef * qpow(a, s);
                for (j, y) in img.into_iter().enumerate() {
                    if y.is_zero() {
                        continue;
                    }
                    let mut k2 = key.clone();
                    k2.factors[i] = (target.clone(), j);
                    k2.p = p;
                    *out.entry(k2).or_insert_with(Q::zero) += &scale * y;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// `d₁` acts on the `t₁^p` component by `b + p`.
    pub fn act_d(&self, v: &LoopVector) -> LoopVector {
        v.iter().map(|(k, c)| (k.clone(), c * (&self.b + q(k.p)))).filter(|(_, c)| !c.is_zero()).collect()
    }

    /// `K₁` acts as zero.
    pub fn act_k(&self, _v: &LoopVector) -> LoopVector {
        BTreeMap::new()
    }
}
