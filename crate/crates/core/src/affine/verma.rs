//! The Verma module `M(Λ) = U(n⁻_aff) v_Λ` on a PBW basis, with memoized
//! straightening of `z · (y₁ ⋯ y_k v_Λ)` and the Shapovalov form.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{AffineRoots, AffineWeight};
use crate::lie::FiniteLie;

/// The loop element `x_b ⊗ t₁^j` for a Chevalley basis index `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LoopElt {
    pub b: usize,
    pub j: i64,
}

/// A PBW monomial in the negative generators, stored as sorted generator ids.
pub type Mono = Vec<u32>;

type Combo = Arc<Vec<(Mono, BigInt)>>;

/// Shapovalov Gram matrix on the PBW basis of one Verma weight space.
#[derive(Debug)]
pub(crate) struct Gram {
    pub monos: Vec<Mono>,
    pub index: HashMap<Mono, usize>,
    pub matrix: Vec<Vec<BigInt>>,
}

pub(crate) struct Verma {
    pub lie: Arc<FiniteLie>,
    pub roots: AffineRoots,
    top: Vec<i64>,
    level: i64,
    /// PBW rank of each basis element of `g_fin` (by height, then index).
    rank_of: Vec<u32>,
    by_rank: Vec<usize>,
    acts: Mutex<HashMap<(LoopElt, Mono), Combo>>,
    grams: Mutex<HashMap<Vec<i64>, Arc<Gram>>>,
}

impl Verma {
    pub fn new(lie: Arc<FiniteLie>, top: &AffineWeight) -> Self {
        let dim = lie.dim();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by_key(|&b| (lie.height(b), b));
        let mut rank_of = vec![0u32; dim];
        for (r, &b) in order.iter().enumerate() {
            rank_of[b] = r as u32;
        }
        let roots = AffineRoots::new(lie.root_system());
        Verma {
            lie,
            roots,
            top: top.finite.0.clone(),
            level: top.level,
            rank_of,
            by_rank: order,
            acts: Mutex::new(HashMap::new()),
            grams: Mutex::new(HashMap::new()),
        }
    }

    pub fn is_negative(&self, z: LoopElt) -> bool {
        z.j < 0 || (z.j == 0 && self.lie.height(z.b) < 0)
    }

    fn encode(&self, z: LoopElt) -> u32 {
        (-z.j) as u32 * self.lie.dim() as u32 + self.rank_of[z.b]
    }

    pub fn decode(&self, id: u32) -> LoopElt {
        let dim = self.lie.dim() as u32;
        LoopElt { b: self.by_rank[(id % dim) as usize], j: -((id / dim) as i64) }
    }

    /// Coordinates of the weight of `z` on the affine simple roots.
    pub fn weight_coords(&self, z: LoopElt) -> Vec<i64> {
        self.roots.root_coords(&self.lie.weight(z.b), z.j)
    }

    /// Offset `Λ - wt(m)` of a monomial.
    #[cfg(test)]
    pub fn mono_offset(&self, m: &[u32]) -> Vec<i64> {
        let mut c = vec![0i64; self.roots.rank() + 1];
        for &id in m {
            for (x, y) in c.iter_mut().zip(self.weight_coords(self.decode(id))) {
                *x -= y;
            }
        }
        c
    }

    /// Eigenvalue of `x_b ⊗ 1` (Cartan) on `m v_Λ`.
    fn cartan_eigen(&self, b: usize, m: &[u32]) -> i64 {
        let mut v = self.lie.weight_on_cartan(&self.top, b);
        let rs = self.lie.root_system();
        let crate::lie::BasisKind::Cartan(i) = self.lie.kind(b) else { unreachable!() };
        for &id in m {
            let y = self.decode(id);
            let w = self.lie.weight(y.b);
            v += (0..rs.rank()).map(|j| rs.cartan()[i][j] * w[j]).sum::<i64>();
        }
        v
    }

    /// `z · (m v_Λ)` expanded on the PBW basis.
    pub fn act(&self, z: LoopElt, m: &[u32]) -> Combo {
        if self.is_negative(z) {
            let id = self.encode(z);
            if m.first().is_none_or(|&y| id <= y) {
                let mut out = Vec::with_capacity(m.len() + 1);
                out.push(id);
                out.extend_from_slice(m);
                return Arc::new(vec![(out, BigInt::one())]);
            }
        }
        if z.j == 0 && self.lie.is_cartan(z.b) {
            let v = self.cartan_eigen(z.b, m);
            return Arc::new(if v == 0 { vec![] } else { vec![(m.to_vec(), BigInt::from(v))] });
        }
        if m.is_empty() {
            return Arc::new(Vec::new());
        }
        let key = (z, m.to_vec());
        if let Some(c) = self.acts.lock().expect("memo lock").get(&key) {
            return c.clone();
        }
        let y = self.decode(m[0]);
        let rest = &m[1..];
        let mut acc: HashMap<Mono, BigInt> = HashMap::new();
        // z y rest = y (z rest) + [z, y] rest
        for (m1, c1) in self.act(z, rest).iter() {
            for (m2, c2) in self.act(y, m1).iter() {
                *acc.entry(m2.clone()).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        let j = z.j + y.j;
        for &(k, c) in self.lie.bracket(z.b, y.b) {
            for (m1, c1) in self.act(LoopElt { b: k, j }, rest).iter() {
                *acc.entry(m1.clone()).or_insert_with(BigInt::zero) += c1 * BigInt::from(c);
            }
        }
        if j == 0 {
            let central = z.j * self.lie.form(z.b, y.b) * self.level;
            if central != 0 {
                *acc.entry(rest.to_vec()).or_insert_with(BigInt::zero) += BigInt::from(central);
            }
        }
        let mut out: Vec<(Mono, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let out = Arc::new(out);
        self.acts.lock().expect("memo lock").insert(key, out.clone());
        out
    }

    /// PBW monomials of offset `c`, in lexicographic order of generator ids.
    pub fn monomials(&self, c: &[i64]) -> Vec<Mono> {
        let n = self.roots.rank();
        let max_depth = c[n];
        let mut gens: Vec<(u32, Vec<i64>)> = Vec::new();
        for d in 0..=max_depth {
            for b in 0..self.lie.dim() {
                let z = LoopElt { b, j: -d };
                if !self.is_negative(z) {
                    continue;
                }
                let off: Vec<i64> = self.weight_coords(z).iter().map(|x| -x).collect();
                if off.iter().zip(c).all(|(a, b)| a <= b) {
                    gens.push((self.encode(z), off));
                }
            }
        }
        gens.sort();
        let mut out = Vec::new();
        let mut current = Vec::new();
        Self::enumerate(&gens, 0, c.to_vec(), &mut current, &mut out);
        out
    }

    fn enumerate(gens: &[(u32, Vec<i64>)], start: usize, left: Vec<i64>, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if left.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for (i, (id, off)) in gens.iter().enumerate().skip(start) {
            if off.iter().zip(&left).all(|(a, b)| a <= b) {
                let rem: Vec<i64> = left.iter().zip(off).map(|(a, b)| a - b).collect();
                cur.push(*id);
                Self::enumerate(gens, i, rem, cur, out);
                cur.pop();
            }
        }
    }

    /// Shapovalov Gram matrix at offset `c`, via
    /// `<y·u, w> = <u, σ(y)·w>` with `σ(E_ab ⊗ t^m) = E_ba ⊗ t^{-m}`.
    pub fn gram(&self, c: &[i64]) -> Arc<Gram> {
        if let Some(g) = self.grams.lock().expect("memo lock").get(c) {
            return g.clone();
        }
        let monos = self.monomials(c);
        let index: HashMap<Mono, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let size = monos.len();
        let mut matrix = vec![vec![BigInt::zero(); size]; size];
        if c.iter().all(|&x| x == 0) {
            matrix[0][0] = BigInt::one();
        } else {
            let mut groups: Vec<(u32, Vec<usize>)> = Vec::new();
            for (i, m) in monos.iter().enumerate() {
                match groups.last_mut() {
                    Some((y, rows)) if *y == m[0] => rows.push(i),
                    _ => groups.push((m[0], vec![i])),
                }
            }
            for (y, rows) in groups {
                let yz = self.decode(y);
                let sigma = LoopElt { b: self.lie.transpose(yz.b), j: -yz.j };
                let lower: Vec<i64> = c.iter().zip(self.weight_coords(yz)).map(|(a, b)| a + b).collect();
                let low = self.gram(&lower);
                let tails: Vec<usize> = rows.iter().map(|&r| low.index[&monos[r][1..]]).collect();
                for (col, mono) in monos.iter().enumerate() {
                    let img = self.act(sigma, mono);
                    if img.is_empty() {
                        continue;
                    }
                    let cols: Vec<(usize, &BigInt)> = img.iter().map(|(m, k)| (low.index[m], k)).collect();
                    for (&r, &t) in rows.iter().zip(&tails) {
                        let mut s = BigInt::zero();
                        for &(ci, k) in &cols {
                            let g = &low.matrix[t][ci];
                            if !g.is_zero() {
                                s += k * g;
                            }
                        }
                        matrix[r][col] = s;
                    }
                }
            }
        }
        let g = Arc::new(Gram { monos, index, matrix });
        self.grams.lock().expect("memo lock").insert(c.to_vec(), g.clone());
        g
    }
}
