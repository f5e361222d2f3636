//! Finite root systems: Cartan matrices, roots by reflection closure, the
//! invariant form normalized by `(θ|θ) = 2`, Weyl reflections, and
//! multiplicities of finite-dimensional irreducibles.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{as_i64, q, QMat, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A weight written in the basis of fundamental weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteWeight(pub Vec<i64>);

impl FiniteWeight {
    pub fn zero(rank: usize) -> Self {
        FiniteWeight(vec![0; rank])
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &FiniteWeight) -> FiniteWeight {
        FiniteWeight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &FiniteWeight) -> FiniteWeight {
        FiniteWeight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> FiniteWeight {
        FiniteWeight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for FiniteWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A class of `P_fin / Q_fin`, identified by its minimal dominant
/// representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaClass {
    pub representative: FiniteWeight,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan_type: CartanType,
    rank: usize,
    /// `cartan[i][j] = <α_i^∨, α_j>`.
    cartan: Vec<Vec<i64>>,
    cartan_inv: QMat,
    /// `(α_i|α_i) / 2`, normalized so that the highest root has square length 2.
    half_norms: Vec<Q>,
    /// All roots in simple-root coordinates, positive ones first, each
    /// half sorted by height.
    roots: Vec<Vec<i64>>,
    n_positive: usize,
    highest: usize,
    highest_short: usize,
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "C" => Ok(CartanType::C),
            "D" => Ok(CartanType::D),
            "E" => Ok(CartanType::E),
            "F" => Ok(CartanType::F),
            "G" => Ok(CartanType::G),
            _ => Err(Error::InvalidRootSystem(s.to_string())),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn cartan_matrix(t: CartanType, n: usize) -> Result<Vec<Vec<i64>>> {
    let valid = match t {
        CartanType::A => n >= 1,
        CartanType::B => n >= 2,
        CartanType::C => n >= 2,
        CartanType::D => n >= 4,
        CartanType::E => (6..=8).contains(&n),
        CartanType::F => n == 4,
        CartanType::G => n == 2,
    };
    if !valid {
        return Err(Error::InvalidRootSystem(format!("{t}{n}")));
    }
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match t {
        CartanType::A | CartanType::B | CartanType::C | CartanType::F => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        CartanType::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        CartanType::E => {
            // Bourbaki numbering: 1-3-4-5-..., 2 attached to 4.
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
        CartanType::G => link(0, 1),
    }
    match t {
        CartanType::B => a[n - 1][n - 2] = -2,
        CartanType::C => a[n - 2][n - 1] = -2,
        CartanType::F => a[2][1] = -2,
        CartanType::G => a[0][1] = -3,
        _ => {}
    }
    Ok(a)
}

fn invert(a: &[Vec<i64>]) -> QMat {
    let n = a.len();
    let m: QMat = a.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    crate::num::solve(&m, &crate::num::identity(n)).expect("Cartan matrices are invertible")
}

impl RootSystem {
    pub fn new(cartan_type: CartanType, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(cartan_type, rank)?;
        let cartan_inv = invert(&cartan);

        // Symmetrizer: ε_i a_ij = ε_j a_ji, propagated along the Dynkin diagram.
        let mut eps: Vec<Option<Q>> = vec![None; rank];
        eps[0] = Some(Q::one());
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for j in 0..rank {
                if i != j && cartan[i][j] != 0 && eps[j].is_none() {
                    let e = eps[i].clone().unwrap() * q(cartan[i][j]) / q(cartan[j][i]);
                    eps[j] = Some(e);
                    queue.push_back(j);
                }
            }
        }
        let mut half_norms: Vec<Q> = eps.into_iter().map(|e| e.expect("connected diagram")).collect();

        let roots = Self::reflection_closure(&cartan);
        let mut positive: Vec<Vec<i64>> = roots.iter().filter(|r| r.iter().all(|&x| x >= 0)).cloned().collect();
        positive.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        let n_positive = positive.len();
        let mut all = positive.clone();
        all.extend(positive.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));

        let norm = |r: &[i64], hn: &[Q]| -> Q {
            let mut s = Q::zero();
            for i in 0..rank {
                for j in 0..rank {
                    if r[i] != 0 && r[j] != 0 {
                        s += q(r[i] * r[j] * cartan[i][j]) * &hn[i];
                    }
                }
            }
            s
        };
        let highest = n_positive - 1;
        let theta_norm = norm(&all[highest], &half_norms);
        let scale = q(2) / theta_norm;
        for e in half_norms.iter_mut() {
            *e *= &scale;
        }
        let long = norm(&all[highest], &half_norms);
        let highest_short = (0..n_positive).rfind(|&i| norm(&all[i], &half_norms) < long).unwrap_or(highest);

        Ok(RootSystem {
            cartan_type,
            rank,
            cartan,
            cartan_inv,
            half_norms,
            roots: all,
            n_positive,
            highest,
            highest_short,
        })
    }

    /// Closure of the simple roots under simple reflections.
    pub fn reflection_closure(cartan: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
        let n = cartan.len();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(r) = queue.pop_front() {
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| cartan[i][j] * r[j]).sum();
                let mut s = r.clone();
                s[i] -= pairing;
                if seen.insert(s.clone()) {
                    queue.push_back(s);
                }
            }
        }
        seen
    }

    /// Parse codes such as `"A1"` or `"G2"`.
    pub fn from_code(code: &str) -> Result<Self> {
        let code = code.trim();
        let (letter, digits) = code.split_at(code.chars().next().map_or(0, |c| c.len_utf8()));
        let t: CartanType = letter.to_ascii_uppercase().parse()?;
        let n: usize = digits.parse().map_err(|_| Error::InvalidRootSystem(code.to_string()))?;
        Self::new(t, n)
    }

    pub fn code(&self) -> String {
        format!("{}{}", self.cartan_type, self.rank)
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots[..self.n_positive]
    }

    pub fn is_simply_laced(&self) -> bool {
        self.highest == self.highest_short
    }

    pub fn highest_root(&self) -> &[i64] {
        &self.roots[self.highest]
    }

    pub fn highest_short_root(&self) -> &[i64] {
        &self.roots[self.highest_short]
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == root)
    }

    pub fn is_root(&self, root: &[i64]) -> bool {
        self.root_index(root).is_some()
    }

    pub fn height(root: &[i64]) -> i64 {
        root.iter().sum()
    }

    /// `(α|β)` for vectors in simple-root coordinates.
    pub fn form_roots(&self, a: &[i64], b: &[i64]) -> Q {
        let mut s = Q::zero();
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b[j] != 0 {
                    s += q(a[i] * b[j] * self.cartan[i][j]) * &self.half_norms[i];
                }
            }
        }
        s
    }

    /// Simple-root coordinates of a weight given in the ω-basis (rational in general).
    pub fn weight_to_root_coords(&self, w: &[Q]) -> Vec<Q> {
        crate::num::mat_vec(&self.cartan_inv, w)
    }

    /// ω-coordinates of a vector given in simple-root coordinates.
    pub fn root_to_weight(&self, r: &[i64]) -> FiniteWeight {
        FiniteWeight((0..self.rank).map(|i| (0..self.rank).map(|j| self.cartan[i][j] * r[j]).sum()).collect())
    }

    /// `(λ|μ)` for rational weights in the ω-basis.
    pub fn form_weights_q(&self, a: &[Q], b: &[Q]) -> Q {
        let c = self.weight_to_root_coords(b);
        (0..self.rank).map(|i| &a[i] * &c[i] * &self.half_norms[i]).sum()
    }

    pub fn form_weights(&self, a: &FiniteWeight, b: &FiniteWeight) -> Q {
        let aq: Vec<Q> = a.0.iter().map(|&x| q(x)).collect();
        let bq: Vec<Q> = b.0.iter().map(|&x| q(x)).collect();
        self.form_weights_q(&aq, &bq)
    }

    /// `(λ|α)` with λ in the ω-basis and α in simple-root coordinates.
    pub fn form_weight_root(&self, w: &[Q], r: &[i64]) -> Q {
        (0..self.rank).filter(|&i| r[i] != 0).map(|i| &w[i] * q(r[i]) * &self.half_norms[i]).sum()
    }

    /// `2/(α|α)` for a root α.
    pub fn coroot_factor(&self, r: &[i64]) -> Q {
        q(2) / self.form_roots(r, r)
    }

    /// Coordinates of the coroot `α^∨` on the simple coroots.
    pub fn coroot_coords(&self, r: &[i64]) -> Vec<Q> {
        // α^∨ = 2α/(α|α) and α_i^∨ = α_i / ε_i, so the coefficient on α_i^∨ is 2 r_i ε_i / (α|α).
        let f = self.coroot_factor(r);
        (0..self.rank).map(|i| q(r[i]) * &self.half_norms[i] * &f).collect()
    }

    /// `<λ, α^∨>` for a rational weight.
    pub fn pairing_q(&self, w: &[Q], r: &[i64]) -> Q {
        self.form_weight_root(w, r) * self.coroot_factor(r)
    }

    /// `<λ, α^∨>` for an integral weight; always an integer.
    pub fn pairing(&self, w: &FiniteWeight, r: &[i64]) -> i64 {
        let wq: Vec<Q> = w.0.iter().map(|&x| q(x)).collect();
        as_i64(&self.pairing_q(&wq, r)).expect("integral weights pair integrally with coroots")
    }

    /// `s_α(λ) = λ - <λ, α^∨> α`.
    pub fn reflect(&self, w: &FiniteWeight, r: &[i64]) -> Result<FiniteWeight> {
        if !self.is_root(r) {
            return Err(Error::NotARoot(format!("{r:?}")));
        }
        let c = self.pairing(w, r);
        Ok(w.sub(&self.root_to_weight(r).scale(c)))
    }

    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut e = vec![0; self.rank];
        e[i] = 1;
        e
    }

    pub fn rho(&self) -> FiniteWeight {
        FiniteWeight(vec![1; self.rank])
    }

    /// `h^∨ = 1 + <ρ, θ^∨>`.
    pub fn dual_coxeter(&self) -> i64 {
        1 + self.pairing(&self.rho(), self.highest_root())
    }

    /// Dominant element of the Weyl orbit of `w`, together with the
    /// simple reflections applied (in order).
    pub fn dominant_conjugate(&self, w: &FiniteWeight) -> (FiniteWeight, Vec<usize>) {
        let mut w = w.clone();
        let mut word = Vec::new();
        while let Some(i) = w.0.iter().position(|&x| x < 0) {
            let c = w.0[i];
            w = w.sub(&self.root_to_weight(&self.simple_root(i)).scale(c));
            word.push(i);
        }
        (w, word)
    }

    /// `Some(c)` with `a - b = Σ c_i α_i` when the difference lies in `Q_fin`.
    pub fn root_lattice_coords(&self, a: &FiniteWeight, b: &FiniteWeight) -> Option<Vec<i64>> {
        let d: Vec<Q> = a.sub(b).0.iter().map(|&x| q(x)).collect();
        self.weight_to_root_coords(&d).iter().map(as_i64).collect()
    }

    /// `b ≤ a` in the dominance order.
    pub fn dominates(&self, a: &FiniteWeight, b: &FiniteWeight) -> bool {
        self.root_lattice_coords(a, b).is_some_and(|c| c.iter().all(|&x| x >= 0))
    }

    pub fn weyl_dimension(&self, lambda: &FiniteWeight) -> Result<Q> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.to_string()));
        }
        let lr: Vec<Q> = lambda.add(&self.rho()).0.iter().map(|&x| q(x)).collect();
        let rho: Vec<Q> = self.rho().0.iter().map(|&x| q(x)).collect();
        let mut d = Q::one();
        for r in self.positive_roots() {
            d *= self.form_weight_root(&lr, r) / self.form_weight_root(&rho, r);
        }
        Ok(d)
    }

    /// Weight multiplicities of `V(λ)` by Freudenthal's recursion.
    pub fn finite_multiplicities(&self, lambda: &FiniteWeight) -> Result<BTreeMap<FiniteWeight, u64>> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.to_string()));
        }
        let rho = self.rho();
        let norm = |w: &FiniteWeight| self.form_weights(w, w);
        let top = norm(&lambda.add(&rho));
        let pos: Vec<(Vec<i64>, FiniteWeight)> =
            self.positive_roots().iter().map(|r| (r.clone(), self.root_to_weight(r))).collect();
        let simple: Vec<FiniteWeight> = (0..self.rank).map(|i| self.root_to_weight(&self.simple_root(i))).collect();

        let mut mult: HashMap<FiniteWeight, u64> = HashMap::new();
        mult.insert(lambda.clone(), 1);
        let mut layer: BTreeSet<FiniteWeight> = BTreeSet::from([lambda.clone()]);
        while !layer.is_empty() {
            let mut next = BTreeSet::new();
            for w in &layer {
                for a in &simple {
                    let c = w.sub(a);
                    if mult.contains_key(&c) {
                        continue;
                    }
                    let (dom, _) = self.dominant_conjugate(&c);
                    if self.dominates(lambda, &dom) {
                        next.insert(c);
                    }
                }
            }
            for mu in &next {
                let mut num = Q::zero();
                for (r, rw) in &pos {
                    let mut k = 1;
                    loop {
                        let above = mu.add(&rw.scale(k));
                        if !self.dominates(lambda, &above) {
                            break;
                        }
                        if let Some(&m) = mult.get(&above) {
                            let aq: Vec<Q> = above.0.iter().map(|&x| q(x)).collect();
                            num += q(m as i64) * self.form_weight_root(&aq, r);
                        }
                        k += 1;
                    }
                }
                let den = &top - norm(&mu.add(&rho));
                let m = if den.is_zero() { Q::zero() } else { q(2) * num / den };
                let m = as_i64(&m)
                    .filter(|x| !x.is_negative())
                    .ok_or_else(|| Error::Verification(format!("non-integral Freudenthal multiplicity at {mu}")))?;
                mult.insert(mu.clone(), m as u64);
            }
            layer = next.into_iter().filter(|w| mult[w] > 0).collect();
        }
        Ok(mult.into_iter().filter(|(_, m)| *m > 0).collect())
    }

    /// The class of `λ` in `P_fin/Q_fin` and its minimal dominant representative `ϖ_λ`.
    pub fn minimal_coset_rep(&self, lambda: &FiniteWeight) -> (GammaClass, FiniteWeight) {
        let (mut w, _) = self.dominant_conjugate(lambda);
        let pos: Vec<FiniteWeight> = self.positive_roots().iter().map(|r| self.root_to_weight(r)).collect();
        'descend: loop {
            for a in &pos {
                let c = w.sub(a);
                if c.is_dominant() {
                    w = c;
                    continue 'descend;
                }
            }
            break;
        }
        (GammaClass { representative: w.clone() }, w)
    }

    /// `|P_fin / Q_fin| = det(A)`.
    pub fn gamma_order(&self) -> i64 {
        let m = crate::lattice::IntMatrix::from_rows(&self.cartan).expect("square");
        num_traits::ToPrimitive::to_i64(&m.det().expect("square")).expect("small determinant")
    }

    /// Representatives `ϖ` of all classes of `P_fin/Q_fin`.
    pub fn gamma_classes(&self) -> Vec<GammaClass> {
        let mut reps: BTreeSet<FiniteWeight> = BTreeSet::new();
        reps.insert(FiniteWeight::zero(self.rank));
        for i in 0..self.rank {
            let mut e = vec![0; self.rank];
            e[i] = 1;
            reps.insert(self.minimal_coset_rep(&FiniteWeight(e)).1);
        }
        reps.into_iter().map(|representative| GammaClass { representative }).collect()
    }
}
