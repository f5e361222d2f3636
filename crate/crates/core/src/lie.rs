//! Explicit structure constants for `sl_{n+1}` in its matrix realization.
//!
//! The Chevalley basis consists of the matrix units `E_ab` (a ≠ b), which are
//! the root vectors, and `H_i = E_ii - E_{i+1,i+1} = α_i^∨`. The trace form
//! is the invariant form with `(θ|θ) = 2`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::num::{q, Q};
use crate::rootsys::{CartanType, RootSystem};

/// Sparse integer combination of basis elements.
pub type Combo = Vec<(usize, i64)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Root vector for the root with the given index in `RootSystem::roots`.
    Root(usize),
    /// The simple coroot `α_i^∨`.
    Cartan(usize),
}

#[derive(Debug, Clone)]
pub struct FiniteLie {
    rs: RootSystem,
    kinds: Vec<BasisKind>,
    /// Matrix position `(a, b)` of each root vector `E_ab`.
    positions: Vec<Option<(usize, usize)>>,
    brackets: Vec<Vec<Combo>>,
    form: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl FiniteLie {
    /// Build `g_fin` for a root system of type A.
    pub fn new(rs: &RootSystem) -> Result<Self> {
        if rs.cartan_type() != CartanType::A {
            return Err(Error::UnsupportedType(rs.code()));
        }
        let n = rs.rank();
        let size = n + 1;
        let mut kinds = Vec::new();
        let mut positions = Vec::new();
        let mut labels = Vec::new();
        for (idx, r) in rs.roots().iter().enumerate() {
            let first = r.iter().position(|&x| x != 0).expect("nonzero root");
            let last = r.iter().rposition(|&x| x != 0).expect("nonzero root");
            let (a, b) = if r[first] > 0 { (first, last + 1) } else { (last + 1, first) };
            kinds.push(BasisKind::Root(idx));
            positions.push(Some((a, b)));
            labels.push(format!("E{}{}", a + 1, b + 1));
        }
        for i in 0..n {
            kinds.push(BasisKind::Cartan(i));
            positions.push(None);
            labels.push(format!("H{}", i + 1));
        }
        let dim = kinds.len();

        let matrix = |k: usize| -> Vec<Vec<i64>> {
            let mut m = vec![vec![0i64; size]; size];
            match (kinds[k], positions[k]) {
                (BasisKind::Root(_), Some((a, b))) => m[a][b] = 1,
                (BasisKind::Cartan(i), _) => {
                    m[i][i] = 1;
                    m[i + 1][i + 1] = -1;
                }
                _ => unreachable!(),
            }
            m
        };
        let mats: Vec<Vec<Vec<i64>>> = (0..dim).map(matrix).collect();
        let mul = |x: &Vec<Vec<i64>>, y: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            (0..size).map(|i| (0..size).map(|j| (0..size).map(|l| x[i][l] * y[l][j]).sum()).collect()).collect()
        };
        let lookup =
            |a: usize, b: usize| -> usize { positions.iter().position(|p| *p == Some((a, b))).expect("matrix unit") };
        let decompose = |m: &Vec<Vec<i64>>| -> Combo {
            let mut out = Vec::new();
            for a in 0..size {
                for b in 0..size {
                    if a != b && m[a][b] != 0 {
                        out.push((lookup(a, b), m[a][b]));
                    }
                }
            }
            let mut acc = 0;
            for i in 0..n {
                acc += m[i][i];
                if acc != 0 {
                    out.push((dim - n + i, acc));
                }
            }
            out.sort_unstable();
            out
        };
        let mut brackets = vec![vec![Vec::new(); dim]; dim];
        let mut form = vec![vec![0i64; dim]; dim];
        for x in 0..dim {
            for y in 0..dim {
                let xy = mul(&mats[x], &mats[y]);
                let yx = mul(&mats[y], &mats[x]);
                let c: Vec<Vec<i64>> = (0..size).map(|i| (0..size).map(|j| xy[i][j] - yx[i][j]).collect()).collect();
                brackets[x][y] = decompose(&c);
                form[x][y] = (0..size).map(|i| xy[i][i]).sum();
            }
        }
        Ok(FiniteLie { rs: rs.clone(), kinds, positions, brackets, form, labels })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, b: usize) -> BasisKind {
        self.kinds[b]
    }

    pub fn label(&self, b: usize) -> &str {
        &self.labels[b]
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn bracket(&self, x: usize, y: usize) -> &Combo {
        &self.brackets[x][y]
    }

    pub fn form(&self, x: usize, y: usize) -> i64 {
        self.form[x][y]
    }

    /// Basis index of the root vector `x_α`.
    pub fn root_vector(&self, root: &[i64]) -> Result<usize> {
        let idx = self.rs.root_index(root).ok_or_else(|| Error::NotARoot(format!("{root:?}")))?;
        Ok(idx)
    }

    /// Basis index of `α_i^∨`.
    pub fn cartan(&self, i: usize) -> usize {
        self.rs.roots().len() + i
    }

    pub fn is_cartan(&self, b: usize) -> bool {
        matches!(self.kinds[b], BasisKind::Cartan(_))
    }

    /// Finite root of a basis element in simple-root coordinates (zero for Cartan elements).
    pub fn weight(&self, b: usize) -> Vec<i64> {
        match self.kinds[b] {
            BasisKind::Root(i) => self.rs.roots()[i].clone(),
            BasisKind::Cartan(_) => vec![0; self.rs.rank()],
        }
    }

    pub fn height(&self, b: usize) -> i64 {
        self.weight(b).iter().sum()
    }

    /// The Chevalley anti-involution `E_ab ↦ E_ba`, `H_i ↦ H_i`.
    pub fn transpose(&self, b: usize) -> usize {
        match self.positions[b] {
            Some((x, y)) => self.positions.iter().position(|p| *p == Some((y, x))).expect("transpose"),
            None => b,
        }
    }

    /// `α^∨` as a combination of the Cartan basis.
    pub fn coroot(&self, root: &[i64]) -> Result<Combo> {
        let e = self.root_vector(root)?;
        let f = self.transpose(e);
        Ok(self.bracket(e, f).clone())
    }

    /// Value of the weight `λ` (ω-coordinates) on a Cartan basis element.
    pub fn weight_on_cartan(&self, lambda: &[i64], b: usize) -> i64 {
        match self.kinds[b] {
            BasisKind::Cartan(i) => lambda[i],
            BasisKind::Root(_) => 0,
        }
    }

    /// Bracket of two dense vectors in the Chevalley basis.
    pub fn bracket_vec(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for &(k, c) in &self.brackets[i][j] {
                    out[k] += xi * yj * q(c);
                }
            }
        }
        out
    }

    pub fn form_vec(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                if self.form[i][j] != 0 {
                    s += xi * yj * q(self.form[i][j]);
                }
            }
        }
        s
    }
}
