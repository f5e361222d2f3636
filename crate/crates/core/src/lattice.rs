//! Integer linear algebra: unimodular gcd matrices, row Hermite normal
//! form, and finite quotients `Z^r / L`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix { rows: rows.len(), cols, entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Replace rows `i`, `j` by `u00 r_i + u01 r_j`, `u10 r_i + u11 r_j`.
    fn combine_rows(&mut self, i: usize, j: usize, u: [&BigInt; 4]) {
        for c in 0..self.cols {
            let a = self.get(i, c).clone();
            let b = self.get(j, c).clone();
            self.set(i, c, u[0] * &a + u[1] * &b);
            self.set(j, c, u[2] * &a + u[3] * &b);
        }
    }
}

/// `(g, x, y)` with `x a + y b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Unimodular `B` with `B n = (gcd(n), 0, ..., 0)` and `gcd(n) > 0`.
///
/// Built by folding the two-term extended Euclid step over the
/// coordinates: each step mixes the running first row with row `j` so
/// that coordinate `j` is eliminated.
pub fn gcd_unimodular(n: &[i64]) -> Result<IntMatrix> {
    let k = n.len();
    if k == 0 || n.iter().all(|&x| x == 0) {
        return Err(Error::ZeroVector);
    }
    let mut b = IntMatrix::identity(k);
    let mut v: Vec<BigInt> = n.iter().map(|&x| BigInt::from(x)).collect();
    for j in 1..k {
        if v[j].is_zero() {
            continue;
        }
        let (g, x, y) = ext_gcd(&v[0], &v[j]);
        let a_g = &v[0] / &g;
        let b_g = &v[j] / &g;
        // [[x, y], [b/g, -a/g]] has determinant -1 and sends (a, b) to (g, 0).
        let neg_a = -a_g;
        b.combine_rows(0, j, [&x, &y, &b_g, &neg_a]);
        v[0] = g;
        v[j] = BigInt::zero();
    }
    if v[0].is_negative() {
        for c in 0..k {
            let x = -b.get(0, c).clone();
            b.set(0, c, x);
        }
    }
    Ok(b)
}

/// Subgroup of `Z^r`, stored by its row Hermite normal form basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_rank: usize,
    basis: Vec<Vec<BigInt>>,
}

/// Row-style HNF of the subgroup generated by `generators` in `Z^ambient`.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)`, and
/// zero rows are dropped.
pub fn hnf(ambient: usize, generators: &[Vec<i64>]) -> Result<Lattice> {
    let rows: Vec<Vec<BigInt>> = generators
        .iter()
        .map(|g| {
            if g.len() != ambient {
                Err(Error::DimensionMismatch(format!("generator of length {} in ambient rank {ambient}", g.len())))
            } else {
                Ok(g.iter().map(|&x| BigInt::from(x)).collect())
            }
        })
        .collect::<Result<_>>()?;
    Ok(hnf_big(ambient, rows))
}

fn hnf_big(ambient: usize, mut rows: Vec<Vec<BigInt>>) -> Lattice {
    let mut r = 0;
    for c in 0..ambient {
        if r == rows.len() {
            break;
        }
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let (g, x, y) = ext_gcd(&rows[r][c], &rows[i][c]);
            let a_g = &rows[r][c] / &g;
            let b_g = &rows[i][c] / &g;
            for j in 0..ambient {
                let a = rows[r][j].clone();
                let b = rows[i][j].clone();
                rows[r][j] = &x * &a + &y * &b;
                rows[i][j] = &a_g * &b - &b_g * &a;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = rows[i][c].div_floor(&rows[r][c]);
            if !q.is_zero() {
                for j in 0..ambient {
                    let d = &q * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    Lattice { ambient_rank: ambient, basis: rows }
}

impl Lattice {
    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| (0..ambient).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        Lattice { ambient_rank: ambient, basis }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.basis.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_rank
    }

    fn pivot(row: &[BigInt]) -> usize {
        row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero")
    }

    /// Reduce `v` against the HNF rows; for full-rank lattices the result is
    /// the canonical representative in the fundamental box.
    pub fn reduce(&self, v: &[i64]) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for row in &self.basis {
            let p = Self::pivot(row);
            let q = v[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.ambient_rank && self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Index `|Z^r / L|` for full-rank lattices.
    pub fn index(&self) -> Result<BigInt> {
        if !self.is_full_rank() {
            return Err(Error::InfiniteQuotient { rank: self.rank(), ambient: self.ambient_rank });
        }
        Ok(self.basis.iter().enumerate().map(|(i, r)| r[i].clone()).product())
    }

    /// Coset representatives of `Z^r / L`, one per point of the HNF box
    /// `0 <= v_i < pivot_i`, in lexicographic order.
    pub fn quotient_reps(&self) -> Result<Vec<Vec<i64>>> {
        self.index()?;
        let diag: Vec<i64> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, r)| r[i].to_i64().ok_or_else(|| Error::CapExceeded("lattice index too large".into())))
            .collect::<Result<_>>()?;
        let mut reps = vec![Vec::new()];
        for &d in &diag {
            reps = reps
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (0..d).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        Ok(reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_case() {
        let b = gcd_unimodular(&[5]).unwrap();
        assert_eq!(b.to_i64_rows().unwrap(), vec![vec![1]]);
        let b = gcd_unimodular(&[-5]).unwrap();
        assert_eq!(b.mul_vec(&bi(&[-5])).unwrap(), bi(&[5]));
    }

    #[test]
    fn four_six() {
        let b = gcd_unimodular(&[4, 6]).unwrap();
        assert_eq!(b.to_i64_rows().unwrap(), vec![vec![-1, 1], vec![3, -2]]);
        assert_eq!(b.mul_vec(&bi(&[4, 6])).unwrap(), bi(&[2, 0]));
        assert_eq!(b.det().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn zero_three_is_a_swap() {
        let b = gcd_unimodular(&[0, 3]).unwrap();
        assert_eq!(b.to_i64_rows().unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(b.det().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(gcd_unimodular(&[0, 0, 0]), Err(Error::ZeroVector));
    }

    #[test]
    fn hnf_examples() {
        let l = hnf(1, &[vec![2], vec![4]]).unwrap();
        assert_eq!(l.basis_i64().unwrap(), vec![vec![2]]);
        let l = hnf(2, &[vec![2, 0], vec![0, 2], vec![1, 1]]).unwrap();
        assert_eq!(l.basis_i64().unwrap(), vec![vec![1, 1], vec![0, 2]]);
        let l = hnf(3, &[]).unwrap();
        assert_eq!(l.rank(), 0);
    }

    #[test]
    fn quotient_examples() {
        let l = hnf(1, &[vec![2]]).unwrap();
        assert_eq!(l.quotient_reps().unwrap(), vec![vec![0], vec![1]]);
        let l = hnf(2, &[vec![1, 1], vec![0, 2]]).unwrap();
        assert_eq!(l.quotient_reps().unwrap().len(), 2);
        let l = Lattice::full(3);
        assert_eq!(l.quotient_reps().unwrap(), vec![vec![0, 0, 0]]);
        let l = hnf(2, &[vec![1, 1]]).unwrap();
        assert!(matches!(l.quotient_reps(), Err(Error::InfiniteQuotient { .. })));
    }

    #[test]
    fn determinant_three_by_three() {
        let m = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]).unwrap();
        assert_eq!(m.det().unwrap(), BigInt::from(6));
        let m = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]).unwrap();
        assert_eq!(m.det().unwrap(), BigInt::from(0));
    }
}
