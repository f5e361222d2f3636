//! Truncated irreducible highest-weight modules `X(Λ)`: each weight space is
//! the Verma weight space modulo the radical of the Shapovalov form.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::Zero;

use super::verma::{Gram, LoopElt, Verma};
use super::{AffineRoots, AffineWeight};
use crate::error::{Error, Result};
use crate::lie::FiniteLie;
use crate::num::{int_rank_pivots, q, qi, solve, QMat, Q};
use crate::rootsys::RootSystem;

/// A homogeneous element `Σ c·(x_b ⊗ t₁^j) + k·K₁ + d·d₁` of `g_aff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineElement {
    pub terms: Vec<(LoopElt, Q)>,
    pub k: Q,
    pub d: Q,
}

impl AffineElement {
    pub fn loop_elt(z: LoopElt) -> Self {
        AffineElement { terms: vec![(z, q(1))], k: Q::zero(), d: Q::zero() }
    }

    /// Chevalley generator `x_{α_i}^+`, `i = 0..=n` (index `n` is `x_{-θ} ⊗ t₁`).
    pub fn e(lie: &FiniteLie, i: usize) -> Result<Self> {
        let rs = lie.root_system();
        let n = rs.rank();
        let z = if i < n {
            LoopElt { b: lie.root_vector(&rs.simple_root(i))?, j: 0 }
        } else {
            let neg: Vec<i64> = rs.highest_root().iter().map(|x| -x).collect();
            LoopElt { b: lie.root_vector(&neg)?, j: 1 }
        };
        Ok(Self::loop_elt(z))
    }

    /// Chevalley generator `x_{α_i}^-`.
    pub fn f(lie: &FiniteLie, i: usize) -> Result<Self> {
        let e = Self::e(lie, i)?;
        let (z, _) = &e.terms[0];
        Ok(Self::loop_elt(LoopElt { b: lie.transpose(z.b), j: -z.j }))
    }

    /// Simple coroot `α_i^∨`; the affine node gives `K₁ - θ^∨`.
    pub fn h(lie: &FiniteLie, i: usize) -> Result<Self> {
        let rs = lie.root_system();
        let n = rs.rank();
        if i < n {
            return Ok(Self::loop_elt(LoopElt { b: lie.cartan(i), j: 0 }));
        }
        let theta = lie.coroot(rs.highest_root())?;
        Ok(AffineElement {
            terms: theta.into_iter().map(|(b, c)| (LoopElt { b, j: 0 }, q(-c))).collect(),
            k: q(1),
            d: Q::zero(),
        })
    }

    pub fn central() -> Self {
        AffineElement { terms: vec![], k: q(1), d: Q::zero() }
    }

    pub fn derivation() -> Self {
        AffineElement { terms: vec![], k: Q::zero(), d: q(1) }
    }
}

/// One weight space of `X(Λ)`: the Verma weight space, a set of PBW monomials
/// whose images form a basis of the quotient, and the projection onto them.
#[derive(Debug, Clone)]
pub struct WeightSpace {
    pub(crate) gram: Arc<Gram>,
    /// Indices into the Verma basis of the monomials forming the quotient basis.
    pub basis: Vec<usize>,
    /// `G_PP⁻¹ G_P,:` mapping Verma coordinates to quotient coordinates.
    pub proj: QMat,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn verma_dim(&self) -> usize {
        self.gram.monos.len()
    }

    pub fn gram_matrix(&self) -> &[Vec<BigInt>] {
        &self.gram.matrix
    }

    fn from_gram(gram: Arc<Gram>) -> Result<Self> {
        let (r, pivots) = int_rank_pivots(&gram.matrix);
        let g_pp: QMat = pivots.iter().map(|&i| pivots.iter().map(|&j| qi(&gram.matrix[i][j])).collect()).collect();
        let g_p: QMat = pivots.iter().map(|&i| gram.matrix[i].iter().map(qi).collect()).collect();
        let proj = if r == 0 { Vec::new() } else { solve(&g_pp, &g_p)? };
        Ok(WeightSpace { gram, basis: pivots, proj })
    }

    /// Quotient coordinates of a Verma vector given on PBW monomials.
    fn project(&self, v: &HashMap<Vec<u32>, Q>) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (m, c) in v {
            if c.is_zero() {
                continue;
            }
            let col = self.gram.index[m];
            for (o, row) in out.iter_mut().zip(&self.proj) {
                if !row[col].is_zero() {
                    *o += c * &row[col];
                }
            }
        }
        out
    }
}

/// Operator matrices keyed by loop element and source offset.
type MatrixCache = Mutex<HashMap<(LoopElt, Vec<i64>), Arc<QMat>>>;

/// `X(Λ)` truncated to weights `Λ - Σ c_i α_i` of depth `c_{n+1} ≤ D`.
pub struct TruncatedModule {
    verma: Verma,
    top: AffineWeight,
    depth: i64,
    spaces: BTreeMap<Vec<i64>, WeightSpace>,
    matrices: MatrixCache,
}

impl std::fmt::Debug for TruncatedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TruncatedModule")
            .field("highest_weight", &self.top)
            .field("depth", &self.depth)
            .field("weights", &self.spaces.len())
            .finish()
    }
}

impl TruncatedModule {
    /// Build `X(Λ)` up to depth `depth`.
    pub fn build_irreducible(lie: &FiniteLie, top: &AffineWeight, depth: i64) -> Result<Self> {
        let rs = lie.root_system();
        if top.rank() != rs.rank() {
            return Err(Error::DimensionMismatch(format!("weight of rank {} for {}", top.rank(), rs.code())));
        }
        if top.level == 0 {
            return Err(Error::LevelZero);
        }
        if !top.is_dominant(rs) {
            return Err(Error::NotDominant(top.to_string()));
        }
        if depth < 0 {
            return Err(Error::InvalidArgument("negative depth".into()));
        }
        Self::build_quotient(lie, top, depth)
    }

    /// Irreducible quotient of the Verma module without dominance checks;
    /// at depth 0 this is the finite-dimensional `V(λ)` for any level.
    pub(crate) fn build_quotient(lie: &FiniteLie, top: &AffineWeight, depth: i64) -> Result<Self> {
        let verma = Verma::new(Arc::new(lie.clone()), top);
        let n = lie.root_system().rank();
        let mut spaces = BTreeMap::new();
        let origin = vec![0i64; n + 1];
        spaces.insert(origin.clone(), WeightSpace::from_gram(verma.gram(&origin))?);
        let mut layer = vec![origin];
        while !layer.is_empty() {
            let mut next: Vec<Vec<i64>> = Vec::new();
            for c in &layer {
                for i in 0..=n {
                    let mut d = c.clone();
                    d[i] += 1;
                    if d[n] <= depth && !spaces.contains_key(&d) && !next.contains(&d) {
                        next.push(d);
                    }
                }
            }
            next.sort();
            let mut kept = Vec::new();
            for d in next {
                let ws = WeightSpace::from_gram(verma.gram(&d))?;
                if ws.dim() > 0 {
                    spaces.insert(d.clone(), ws);
                    kept.push(d);
                }
            }
            layer = kept;
        }
        Ok(TruncatedModule { verma, top: top.clone(), depth, spaces, matrices: Mutex::new(HashMap::new()) })
    }

    pub fn lie(&self) -> &FiniteLie {
        &self.verma.lie
    }

    pub fn root_system(&self) -> &RootSystem {
        self.verma.lie.root_system()
    }

    pub fn roots(&self) -> &AffineRoots {
        &self.verma.roots
    }

    pub fn highest_weight(&self) -> &AffineWeight {
        &self.top
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn weight_spaces(&self) -> impl Iterator<Item = (&Vec<i64>, &WeightSpace)> {
        self.spaces.iter()
    }

    pub fn space(&self, c: &[i64]) -> Option<&WeightSpace> {
        self.spaces.get(c)
    }

    pub fn weight_at(&self, c: &[i64]) -> AffineWeight {
        self.verma.roots.weight_at(&self.top, c)
    }

    pub fn offset_of(&self, mu: &AffineWeight) -> Option<Vec<i64>> {
        self.verma.roots.offset_of(&self.top, mu)
    }

    fn check_depth(&self, c: &[i64]) -> Result<()> {
        let n = self.root_system().rank();
        if c[n] > self.depth {
            return Err(Error::DepthExceeded { requested: c[n], limit: self.depth });
        }
        Ok(())
    }

    /// Dimension of the weight space at offset `c`.
    pub fn mult_offset(&self, c: &[i64]) -> Result<usize> {
        self.check_depth(c)?;
        Ok(self.spaces.get(c).map_or(0, WeightSpace::dim))
    }

    pub fn mult(&self, mu: &AffineWeight) -> Result<usize> {
        match self.offset_of(mu) {
            Some(c) if c.iter().all(|&x| x >= 0) => self.mult_offset(&c),
            _ => Ok(0),
        }
    }

    /// Offset reached from `c` by an element of weight `α + jδ₁`.
    pub fn shifted(&self, c: &[i64], z: LoopElt) -> Vec<i64> {
        c.iter().zip(self.verma.weight_coords(z)).map(|(a, b)| a - b).collect()
    }

    /// Matrix of `x_b ⊗ t₁^j` from the weight space at `c` to its target.
    pub fn matrix(&self, z: LoopElt, c: &[i64]) -> Result<(Vec<i64>, Arc<QMat>)> {
        let target = self.shifted(c, z);
        self.check_depth(&target)?;
        let key = (z, c.to_vec());
        if let Some(m) = self.matrices.lock().expect("matrix cache").get(&key) {
            return Ok((target, m.clone()));
        }
        let rows = self.spaces.get(&target).map_or(0, WeightSpace::dim);
        let src = self.spaces.get(c);
        let cols = src.map_or(0, WeightSpace::dim);
        let mut m = vec![vec![Q::zero(); cols]; rows];
        if let (Some(src), Some(dst)) = (src, self.spaces.get(&target)) {
            for (col, &p) in src.basis.iter().enumerate() {
                let img = self.verma.act(z, &src.gram.monos[p]);
                let v: HashMap<Vec<u32>, Q> = img.iter().map(|(mono, k)| (mono.clone(), qi(k))).collect();
                for (row, x) in dst.project(&v).into_iter().enumerate() {
                    m[row][col] = x;
                }
            }
        }
        let m = Arc::new(m);
        self.matrices.lock().expect("matrix cache").insert(key, m.clone());
        Ok((target, m))
    }

    /// Apply `x_b ⊗ t₁^j` to a vector in the weight space at `c`.
    pub fn apply(&self, z: LoopElt, c: &[i64], v: &[Q]) -> Result<(Vec<i64>, Vec<Q>)> {
        let (target, m) = self.matrix(z, c)?;
        Ok((target, crate::num::mat_vec(&m, v)))
    }

    /// Apply a homogeneous element of `g_aff` to a vector at offset `c`.
    pub fn apply_element(&self, x: &AffineElement, c: &[i64], v: &[Q]) -> Result<(Vec<i64>, Vec<Q>)> {
        let grade = x.terms.first().map(|(z, _)| self.verma.weight_coords(*z));
        if x.terms.iter().any(|(z, _)| Some(self.verma.weight_coords(*z)) != grade) {
            return Err(Error::InvalidArgument("inhomogeneous affine element".into()));
        }
        let mut target = c.to_vec();
        let mut out: Option<Vec<Q>> = None;
        for (z, coef) in &x.terms {
            let (t, w) = self.apply(*z, c, v)?;
            target = t;
            let acc = out.get_or_insert_with(|| vec![Q::zero(); w.len()]);
            for (a, b) in acc.iter_mut().zip(w) {
                *a += coef * b;
            }
        }
        let mut out = out.unwrap_or_else(|| vec![Q::zero(); v.len()]);
        if grade.is_none() || grade.as_ref().is_some_and(|g| g.iter().all(|&x| x == 0)) {
            let n = self.root_system().rank();
            let scalar = &x.k * q(self.top.level) + &x.d * (&self.top.delta1 - q(c[n]));
            if !scalar.is_zero() {
                for (a, b) in out.iter_mut().zip(v) {
                    *a += &scalar * b;
                }
            }
        } else if !x.k.is_zero() || !x.d.is_zero() {
            return Err(Error::InvalidArgument("inhomogeneous affine element".into()));
        }
        Ok((target, out))
    }

    /// The highest weight vector `v_Λ` as `(offset, coordinates)`.
    pub fn highest_vector(&self) -> (Vec<i64>, Vec<Q>) {
        (vec![0; self.root_system().rank() + 1], vec![q(1)])
    }

    /// Multiplicity table `{weight: [level, finite…, delta1], mult}`, sorted by offset.
    pub fn multiplicity_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .spaces
            .iter()
            .map(|(c, ws)| serde_json::json!({ "weight": self.weight_at(c).to_json(), "mult": ws.dim() }))
            .collect();
        serde_json::Value::Array(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{partition_count, Freudenthal};
    use crate::num::{is_zero_vec, mat_mul};

    fn sl(n: usize) -> FiniteLie {
        FiniteLie::new(&RootSystem::new(crate::rootsys::CartanType::A, n).unwrap()).unwrap()
    }

    #[test]
    fn basic_representation_partitions() {
        let lie = sl(1);
        let m = TruncatedModule::build_irreducible(&lie, &AffineWeight::basic(1), 5).unwrap();
        for j in 0..=5 {
            assert_eq!(m.mult_offset(&[j, j]).unwrap() as u64, partition_count(j as usize));
        }
        assert_eq!(m.mult_offset(&[0, 1]).unwrap(), 1);
        assert!(matches!(m.mult_offset(&[6, 6]), Err(Error::DepthExceeded { .. })));
    }

    #[test]
    fn errors() {
        let lie = sl(1);
        assert_eq!(
            TruncatedModule::build_irreducible(&lie, &AffineWeight::new(0, vec![0], Q::zero()), 2).unwrap_err(),
            Error::LevelZero
        );
        assert!(matches!(
            TruncatedModule::build_irreducible(&lie, &AffineWeight::new(1, vec![2], Q::zero()), 2),
            Err(Error::NotDominant(_))
        ));
    }

    #[test]
    fn agrees_with_freudenthal_level_two() {
        let lie = sl(1);
        let rs = lie.root_system().clone();
        for fin in 0..=2 {
            let top = AffineWeight::new(2, vec![fin], Q::zero());
            let m = TruncatedModule::build_irreducible(&lie, &top, 3).unwrap();
            let mut f = Freudenthal::new(&rs, &top, 3).unwrap();
            let all = f.all().unwrap();
            let ours: BTreeMap<Vec<i64>, u64> = m.weight_spaces().map(|(c, ws)| (c.clone(), ws.dim() as u64)).collect();
            assert_eq!(ours, all, "Λ = {top}");
        }
    }

    #[test]
    fn a2_level_one_agrees_with_freudenthal() {
        let lie = sl(2);
        let rs = lie.root_system().clone();
        let top = AffineWeight::new(1, vec![1, 0], Q::zero());
        let m = TruncatedModule::build_irreducible(&lie, &top, 2).unwrap();
        let mut f = Freudenthal::new(&rs, &top, 2).unwrap();
        let ours: BTreeMap<Vec<i64>, u64> = m.weight_spaces().map(|(c, ws)| (c.clone(), ws.dim() as u64)).collect();
        assert_eq!(ours, f.all().unwrap());
    }

    #[test]
    fn chevalley_relations_on_module() {
        let lie = sl(1);
        let top = AffineWeight::new(2, vec![1], Q::zero());
        let m = TruncatedModule::build_irreducible(&lie, &top, 3).unwrap();
        let n = 1;
        for (c, ws) in m.weight_spaces() {
            if c[n] > 2 {
                continue;
            }
            for k in 0..ws.dim() {
                let mut v = vec![Q::zero(); ws.dim()];
                v[k] = q(1);
                for i in 0..=n {
                    for j in 0..=n {
                        let ei = AffineElement::e(&lie, i).unwrap();
                        let fj = AffineElement::f(&lie, j).unwrap();
                        let (t1, a) = m.apply_element(&fj, c, &v).unwrap();
                        let (_, ea) = m.apply_element(&ei, &t1, &a).unwrap();
                        let (t2, b) = m.apply_element(&ei, c, &v).unwrap();
                        let (_, fb) = m.apply_element(&fj, &t2, &b).unwrap();
                        let comm: Vec<Q> = ea.iter().zip(&fb).map(|(x, y)| x - y).collect();
                        if i == j {
                            let (_, h) = m.apply_element(&AffineElement::h(&lie, i).unwrap(), c, &v).unwrap();
                            assert_eq!(comm, h, "[e{i}, f{i}] at {c:?}");
                        } else {
                            assert!(is_zero_vec(&comm), "[e{i}, f{j}] at {c:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn integrability() {
        let lie = sl(1);
        let top = AffineWeight::new(1, vec![1], Q::zero());
        let m = TruncatedModule::build_irreducible(&lie, &top, 2).unwrap();
        // (f₁)^{λ₁+1} v_Λ = 0 and (f₀)^{level-λ₁+1} v_Λ = 0.
        for (i, power) in [(0usize, 2), (1usize, 1)] {
            let f = AffineElement::f(&lie, i).unwrap();
            let (mut c, mut v) = m.highest_vector();
            for _ in 0..power {
                let (t, w) = m.apply_element(&f, &c, &v).unwrap();
                c = t;
                v = w;
            }
            assert!(is_zero_vec(&v), "node {i}");
        }
    }

    #[test]
    fn matrices_compose() {
        let lie = sl(1);
        let m = TruncatedModule::build_irreducible(&lie, &AffineWeight::basic(1), 3).unwrap();
        let f0 = LoopElt { b: lie.index_of_label("E12").unwrap(), j: -1 };
        let (c1, a) = m.matrix(f0, &[0, 0]).unwrap();
        let (_, b) = m.matrix(f0, &c1).unwrap();
        assert!(mat_mul(&b, &a).iter().flatten().all(Zero::is_zero));
    }
}
