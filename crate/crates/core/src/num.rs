//! Exact rational scalars and the dense linear algebra the module
//! constructions are built on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

/// `Some(n)` when `x` is an integer that fits in an `i64`.
pub fn as_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Largest integer `<= x`.
pub fn floor(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// `base^exp` for possibly negative exponents; `base` must be nonzero when `exp < 0`.
pub fn qpow(base: &Q, exp: i64) -> Q {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

/// `Π b_j^{m_j}`: evaluation of the Laurent monomial `t^m` at the point `b`.
pub fn monomial_at(point: &[Q], exps: &[i64]) -> Q {
    point.iter().zip(exps).fold(Q::one(), |acc, (b, &m)| acc * qpow(b, m))
}

/// Format a rational as `n` or `(n/d)`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("({}/{})", x.numer(), x.denom())
    }
}

/// Serialized form of a rational: an `[numerator, denominator]` pair.
pub fn q_to_pair(x: &Q) -> Result<[i64; 2]> {
    let n = x.numer().to_i64();
    let d = x.denom().to_i64();
    match (n, d) {
        (Some(n), Some(d)) => Ok([n, d]),
        _ => Err(Error::InvalidArgument(format!("rational {x} does not fit the [num, den] encoding"))),
    }
}

pub fn pair_to_q(p: [i64; 2]) -> Result<Q> {
    if p[1] == 0 {
        return Err(Error::InvalidArgument("zero denominator".into()));
    }
    Ok(qf(p[0], p[1]))
}

/// Serde adapter storing a [`Q`] as `[num, den]`.
pub mod qpair {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        let p = q_to_pair(x).map_err(serde::ser::Error::custom)?;
        p.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let p = <[i64; 2]>::deserialize(d)?;
        pair_to_q(p).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Q>` as a list of `[num, den]` pairs.
pub mod qpair_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let ps = xs.iter().map(q_to_pair).collect::<Result<Vec<_>>>().map_err(serde::ser::Error::custom)?;
        ps.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let ps = <Vec<[i64; 2]>>::deserialize(d)?;
        ps.into_iter().map(|p| pair_to_q(p).map_err(D::Error::custom)).collect()
    }
}

/// Dense matrix over `Q`, row-major.
pub type QMat = Vec<Vec<Q>>;

pub fn zeros(rows: usize, cols: usize) -> QMat {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(n: usize) -> QMat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn mat_vec(m: &QMat, v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).fold(Q::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[k].iter().enumerate() {
                if !y.is_zero() {
                    out[i][j] += x * y;
                }
            }
        }
    }
    out
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (top, rest) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in rest.iter_mut().zip(top.iter()) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &QMat) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Basis of the right kernel `{x : m x = 0}`; `cols` is needed when `m` has no rows.
pub fn kernel(m: &QMat, cols: usize) -> Vec<Vec<Q>> {
    let mut w = m.clone();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -w[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solve `a x = b` for square invertible `a`, column by column of `b`.
pub fn solve(a: &QMat, b: &QMat) -> Result<QMat> {
    let n = a.len();
    let bc = b.first().map_or(0, |r| r.len());
    let mut aug: QMat = a.iter().zip(b).map(|(ra, rb)| ra.iter().chain(rb.iter()).cloned().collect()).collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return Err(Error::InvalidArgument("singular system".into()));
    }
    Ok(aug.into_iter().map(|row| row[n..n + bc].to_vec()).collect())
}

/// Incrementally maintained subspace basis in echelon form, used for
/// spans and membership tests.
#[derive(Debug, Clone, Default)]
pub struct Span {
    dim: usize,
    rows: Vec<(usize, Vec<Q>)>,
}

impl Span {
    pub fn new(dim: usize) -> Self {
        Span { dim, rows: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Insert `v`; returns `true` when the span grew.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn basis(&self) -> Vec<Vec<Q>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Fraction-free elimination over `BigInt`; returns the rank and the
/// pivot columns of the row-echelon form.
pub fn int_rank_pivots(m: &[Vec<BigInt>]) -> (usize, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                for j in c + 1..cols {
                    a[i][j] = &a[i][j] * &a[r][c] / &prev;
                }
                continue;
            }
            for j in c + 1..cols {
                let v = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (r, pivots)
}
