//! Acceptance suite: one PASS/FAIL line per criterion. Ground truth comes from
//! oracles written here, independent of the library code under test.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toroidal_core::affine::{AffineWeight, Freudenthal, TruncatedModule};
use toroidal_core::garland::{evaluate_under_pi, garland_p, verify_garland_on_module, HPoly};
use toroidal_core::lattice::gcd_unimodular;
use toroidal_core::lie::FiniteLie;
use toroidal_core::num::{monomial_at, q, qf, Q};
use toroidal_core::pimod::{
    central_triviality_check, compute_g_pi, decompose, iso_check, verify_garland_on_l, weyl_invariance_check,
    LoopedModule, PiFunction,
};
use toroidal_core::rootsys::RootSystem;
use toroidal_core::toroidal::{
    box_reduce, central_slice_dim, composite_reflection_formula, reflect_toroidal, CentralVector, Toroidal,
    ToroidalElement, ToroidalRoot, ToroidalWeight,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

/// Number of partitions of `n`, by the standard dynamic programme over part sizes.
fn partitions(n: usize) -> u64 {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for m in part..=n {
            p[m] += p[m - part];
        }
    }
    p[n]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let rs = ok(RootSystem::from_code("A1"))?;
    let lie = ok(FiniteLie::new(&rs))?;
    let top = AffineWeight::basic(1);
    let x = ok(TruncatedModule::build_irreducible(&lie, &top, 6))?;
    let mut fr = ok(Freudenthal::new(&rs, &top, 6))?;
    let expected = [1u64, 1, 2, 3, 5, 7, 11];
    for (j, &e) in expected.iter().enumerate() {
        let mu = AffineWeight::new(1, vec![0], q(-(j as i64)));
        let gram = ok(x.mult(&mu))? as u64;
        let fre = ok(fr.mult(&mu))?;
        ensure(gram == e && fre == e && partitions(j) == e, || {
            format!("j = {j}: Gram {gram}, Freudenthal {fre}, partitions {}, expected {e}", partitions(j))
        })?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("mult(Λ−jδ₁) = {expected:?} by both oracles in {:.2}s", t.as_secs_f64()))
}

/// `exp(-Σ_r h_r u^r / r)` expanded as a power series, coefficient by coefficient.
fn series_oracle(order: u32) -> Vec<HPoly> {
    let o = order as usize;
    let mut x = vec![HPoly::zero(); o + 1];
    for r in 1..=order {
        x[r as usize] = HPoly::var(r).scale(&qf(-1, i64::from(r)));
    }
    let mut total = vec![HPoly::zero(); o + 1];
    total[0] = HPoly::constant(q(1));
    let mut power = total.clone();
    let mut fact = Q::one();
    for n in 1..=order {
        let mut next = vec![HPoly::zero(); o + 1];
        for i in 0..=o {
            for j in 0..=(o - i) {
                next[i + j] = next[i + j].add(&power[i].mul(&x[j]));
            }
        }
        power = next;
        fact *= q(i64::from(n));
        for (t, p) in total.iter_mut().zip(&power) {
            *t = t.add(&p.scale(&(Q::one() / &fact)));
        }
    }
    total
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    loop {
        let n: i64 = rng.gen_range(-4..=4);
        if n != 0 {
            return qf(n, rng.gen_range(1..=3));
        }
    }
}

/// A random type-A Π-function with at most `max_points` points of level ≤ 2.
fn random_pi(rng: &mut ChaCha8Rng, rank: usize, k: usize, max_points: usize) -> PiFunction {
    let rs = RootSystem::from_code(&format!("A{rank}")).unwrap();
    let count = rng.gen_range(1..=max_points);
    let mut points: Vec<Vec<Q>> = Vec::new();
    while points.len() < count {
        let p: Vec<Q> = (0..k - 1).map(|_| random_rational(rng)).collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let weights = (0..count).map(|_| random_weight(rng, rank)).collect();
    PiFunction::new(&rs, k, points, weights).unwrap()
}

/// Dominant of level 1 or 2: the finite labels sum to at most the level.
fn random_weight(rng: &mut ChaCha8Rng, rank: usize) -> AffineWeight {
    let level = rng.gen_range(1..=2);
    let mut finite = vec![0; rank];
    let mut left = level;
    for f in finite.iter_mut() {
        let x = rng.gen_range(0..=left);
        *f = x;
        left -= x;
    }
    AffineWeight::new(level, finite, Q::zero())
}

/// Coefficients of `Π_M (1 - b_M^a u)^{n_M}`.
fn product_oracle(points: &[Vec<Q>], exps: &[u64], a: &[i64], len: usize) -> Vec<Q> {
    let mut poly = vec![Q::zero(); len];
    poly[0] = Q::one();
    for (p, &e) in points.iter().zip(exps) {
        let x = monomial_at(p, a);
        for _ in 0..e {
            for i in (1..len).rev() {
                let prev = poly[i - 1].clone();
                poly[i] -= prev * &x;
            }
        }
    }
    poly
}

fn criterion_2() -> Outcome {
    let oracle = series_oracle(6);
    for s in 0..=6u32 {
        ensure(garland_p(s) == oracle[s as usize], || format!("p^{s} differs from the series coefficient"))?;
    }
    let rs = ok(RootSystem::from_code("A1"))?;
    let lie = ok(FiniteLie::new(&rs))?;
    let mut on_module = 0;
    for level in 1..=2 {
        let top = AffineWeight::new(level, vec![level], q(0));
        let x = ok(TruncatedModule::build_irreducible(&lie, &top, 4))?;
        for r in 1..=3u32 {
            for (alpha, shift) in [(vec![1], 1), (vec![-1], 1)] {
                if (i64::from(r) + 1) * shift > 4 {
                    continue;
                }
                let c = ok(verify_garland_on_module(&x, &alpha, shift, r))?;
                ensure(c.holds(), || format!("X(Λ), level {level}, r = {r}, α = {alpha:?}: {c:?}"))?;
                on_module += 1;
            }
        }
    }
    let pis = [
        (vec![vec![q(1)], vec![q(-1)]], vec![AffineWeight::new(2, vec![2], q(0)), AffineWeight::new(2, vec![2], q(0))]),
        (vec![vec![q(1)], vec![q(2)], vec![qf(-1, 2)]], vec![AffineWeight::new(1, vec![1], q(0)); 3]),
    ];
    for (points, weights) in pis {
        let pi = ok(PiFunction::new(&rs, 2, points, weights))?;
        let l = ok(LoopedModule::build(&pi, 0, &[(-5, 5)]))?;
        for r in 1..=3 {
            let c = ok(verify_garland_on_l(&l, &[1], 0, &[1], r, &[0]))?;
            ensure(c.holds(), || format!("L(X_π), r = {r}: {c:?}"))?;
            on_module += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..50 {
        let rank = rng.gen_range(1..=2);
        let k = rng.gen_range(2..=3);
        let pi = random_pi(&mut rng, rank, k, 2);
        let node = rng.gen_range(0..=rank);
        let rs = pi.root_system().clone();
        let (alpha, r) = if node < rank {
            (rs.simple_root(node), 0)
        } else {
            (rs.highest_root().iter().map(|x| -x).collect::<Vec<_>>(), 1)
        };
        let a: Vec<i64> = loop {
            let a: Vec<i64> = (0..k - 1).map(|_| rng.gen_range(-2..=2)).collect();
            if a.iter().any(|&x| x != 0) {
                break a;
            }
        };
        // π(M)(β^∨) in type A: the α_i-label, or level minus the θ-pairing for α_{n+1}.
        let exps: Vec<u64> = pi
            .weights()
            .iter()
            .map(|w| if node < rank { w.finite.0[node] } else { w.level - w.finite.0.iter().sum::<i64>() } as u64)
            .collect();
        let n: u64 = exps.iter().sum();
        let coeffs = product_oracle(pi.points(), &exps, &a, n as usize + 3);
        for s in 0..(n as u32 + 3) {
            let v = ok(evaluate_under_pi(&rs, &alpha, r, &a, s, &pi))?;
            ensure(v == coeffs[s as usize], || format!("trial {trial}, s = {s}: {v} vs {}", coeffs[s as usize]))?;
            ensure(s as u64 <= n || v.is_zero(), || format!("trial {trial}: nonzero at s = {s} > {n}"))?;
        }
    }
    Ok(format!("series to s=6; {on_module} on-module identity checks; 50 evaluation triples"))
}

/// `det` by cofactor expansion along the first row.
fn det_oracle(m: &[Vec<BigInt>]) -> BigInt {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for c in 0..m.len() {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * det_oracle(&minor);
        total += if c % 2 == 0 { term } else { -term };
    }
    total
}

fn gcd_oracle(xs: &[i64]) -> i64 {
    xs.iter().fold(0i64, |mut a, &b| {
        let mut b = b.abs();
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    })
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut done = 0;
    while done < 200 {
        let k = rng.gen_range(1..=5);
        let n: Vec<i64> = (0..k).map(|_| rng.gen_range(-50..=50)).collect();
        let g = gcd_oracle(&n);
        if g == 0 {
            continue;
        }
        let b = ok(gcd_unimodular(&n))?;
        let rows: Vec<Vec<BigInt>> = (0..k).map(|i| b.row(i).to_vec()).collect();
        for (i, row) in rows.iter().enumerate() {
            let s: BigInt = row.iter().zip(&n).map(|(x, &y)| x * BigInt::from(y)).sum();
            let want = if i == 0 { BigInt::from(g) } else { BigInt::zero() };
            ensure(s == want, || format!("n = {n:?}: row {i} gives {s}, expected {want}"))?;
        }
        let d = det_oracle(&rows);
        ensure(d.abs().is_one(), || format!("n = {n:?}: det = {d}"))?;
        done += 1;
    }
    Ok("200 random vectors: B n = (gcd, 0, …) and |det B| = 1".into())
}

fn random_element(rng: &mut ChaCha8Rng, lie_dim: usize, k: usize) -> ToroidalElement {
    let mut x = ToroidalElement::zero(k);
    for _ in 0..3 {
        let m: Vec<i64> = (0..k).map(|_| rng.gen_range(-2..=2)).collect();
        x = x.add(&ToroidalElement::loop_term(k, rng.gen_range(0..lie_dim), &m, q(rng.gen_range(-3..=3))));
    }
    let r: Vec<i64> = (0..k).map(|_| rng.gen_range(-1..=1)).collect();
    x = x.add(
        &ToroidalElement::central_term(&CentralVector::unit(&r, rng.gen_range(0..k))).scale(&q(rng.gen_range(-2..=2))),
    );
    x.add(&ToroidalElement::derivation(k, rng.gen_range(0..k)).scale(&q(rng.gen_range(-1..=1))))
}

fn random_real_root(rng: &mut ChaCha8Rng, rs: &RootSystem, k: usize, span: i64) -> ToroidalRoot {
    let alpha = rs.roots()[rng.gen_range(0..rs.roots().len())].clone();
    ToroidalRoot::new(alpha, (0..k).map(|_| rng.gen_range(-span..=span)).collect())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let algebras: Vec<Toroidal> = [("A1", 2), ("A2", 2), ("A1", 3)]
        .iter()
        .map(|(c, k)| Toroidal::new(&RootSystem::from_code(c).unwrap(), *k).unwrap())
        .collect();
    for i in 0..500 {
        let t = &algebras[i % algebras.len()];
        let (dim, k) = (t.lie().dim(), t.k());
        let (x, y, z) =
            (random_element(&mut rng, dim, k), random_element(&mut rng, dim, k), random_element(&mut rng, dim, k));
        let a = ok(t.bracket(&x, &ok(t.bracket(&y, &z))?))?;
        let b = ok(t.bracket(&y, &ok(t.bracket(&z, &x))?))?;
        let c = ok(t.bracket(&z, &ok(t.bracket(&x, &y))?))?;
        ensure(a.add(&b).add(&c).is_zero(), || format!("Jacobi fails on triple {i}"))?;
    }
    for k in 1..=4 {
        for r in toroidal_core::pimod::box_points(&vec![(-2, 2); k]) {
            let want = if r.iter().all(|&x| x == 0) { k } else { k - 1 };
            ensure(central_slice_dim(&r) == want, || format!("slice {r:?} has dimension {}", central_slice_dim(&r)))?;
        }
    }
    for i in 0..50 {
        let t = &algebras[i % algebras.len()];
        let rs = t.lie().root_system().clone();
        let beta = random_real_root(&mut rng, &rs, t.k(), 3);
        let (e, f, h) = ok(t.sl2_triple(&beta))?;
        let ef = ok(t.bracket(&e, &f))?;
        let he = ok(t.bracket(&h, &e))?;
        let hf = ok(t.bracket(&h, &f))?;
        ensure(ef == h && he == e.scale(&q(2)) && hf == f.scale(&q(-2)), || {
            format!("sl2 relations fail for {beta:?}")
        })?;
    }
    for i in 0..100 {
        let code = if i % 2 == 0 { "A1" } else { "A2" };
        let rs = ok(RootSystem::from_code(code))?;
        let k = 2 + i % 2;
        let lambda = ToroidalWeight::new(
            (0..rs.rank()).map(|_| rng.gen_range(-4..=4)).collect(),
            (0..k).map(|_| q(rng.gen_range(-3..=3))).collect(),
            (0..k).map(|_| qf(rng.gen_range(-6..=6), rng.gen_range(1..=2))).collect(),
        );
        let alpha = rs.roots()[rng.gen_range(0..rs.roots().len())].clone();
        let j = rng.gen_range(0..k);
        let m = rng.gen_range(-3..=3);
        let mut mv = vec![0; k];
        mv[j] = m;
        let beta = ToroidalRoot::new(alpha.clone(), mv);
        let zero = ToroidalRoot::new(alpha.clone(), vec![0; k]);
        let direct = ok(reflect_toroidal(&rs, &ok(reflect_toroidal(&rs, &lambda, &beta))?, &zero))?;
        let closed = ok(composite_reflection_formula(&rs, &lambda, &alpha, j, m))?;
        ensure(direct == closed, || format!("r_α r_β λ mismatch for λ = {lambda:?}, β = {beta:?}"))?;
    }
    let mut reduced = 0;
    while reduced < 100 {
        let rs = ok(RootSystem::from_code(if reduced % 2 == 0 { "A1" } else { "A2" }))?;
        let k = 2 + reduced % 2;
        let mut central = vec![Q::zero(); k];
        central[0] = q(rng.gen_range(1..=4));
        let lambda = ToroidalWeight::new(
            (0..rs.rank()).map(|_| rng.gen_range(-3..=3)).collect(),
            central.clone(),
            (0..k).map(|_| q(rng.gen_range(-30..=30))).collect(),
        );
        // <λ, α_{n+1}^∨> = λ(K₁) - <λ, θ^∨> in type A.
        let m = &central[0] - q(lambda.finite.0.iter().sum());
        if !m.is_positive() {
            continue;
        }
        let out = ok(box_reduce(&rs, &lambda))?.weight;
        for j in 1..k {
            let d = &out.deriv[j];
            ensure(!d.is_negative() && d < &m, || format!("d_{} = {d} not in [0, {m})", j + 1))?;
            let diff = &lambda.deriv[j] - d;
            ensure((diff / &m).is_integer(), || "box reduction moved d_j by a non-multiple of m".into())?;
        }
        ensure(out.finite == lambda.finite && out.deriv[0] == lambda.deriv[0], || {
            "box reduction moved λ off its slice".into()
        })?;
        reduced += 1;
    }
    Ok("500 Jacobi triples, slice dims, 50 sl2 triples, 100 composite reflections, 100 box reductions".into())
}

fn criterion_5() -> Outcome {
    let rs = ok(RootSystem::from_code("A1"))?;
    let w = AffineWeight::basic(1);
    let pi = ok(PiFunction::new(&rs, 2, vec![vec![q(1)], vec![q(-1)]], vec![w.clone(), w]))?;
    let g = ok(compute_g_pi(&pi, 4))?;
    ensure(g.basis_i64() == Some(vec![vec![2]]), || format!("G_π = {:?}", g.basis()))?;
    let l = ok(LoopedModule::build(&pi, 2, &[(-3, 3)]))?;
    let d = ok(decompose(&l, &g))?;
    ensure(d.components.len() == 2, || format!("{} components", d.components.len()))?;
    ensure(d.accounts(), || "component dimensions do not sum to dim L on the interior".into())?;
    let hv = ok(l.highest_vectors())?;
    ensure(!hv.is_empty(), || "no highest weight vectors".into())?;
    let c = ok(central_triviality_check(&l))?;
    ensure(c.holds(), || format!("{:?}", c.failures))?;
    Ok(format!(
        "G_π = 2Z, 2 components over {} interior slices, {} highest-vector slices, {} central checks",
        d.dims.len(),
        hv.len(),
        c.checked
    ))
}

/// Independent confirmation of a claimed witness: `b ⊙ supp(π) = supp(π')` with matching factors.
fn witness_valid(pi: &PiFunction, pi2: &PiFunction, b: &[Q]) -> bool {
    pi.points().len() == pi2.points().len()
        && pi.points().iter().zip(pi.weights()).all(|(p, w)| {
            let image: Vec<Q> = p.iter().zip(b).map(|(x, y)| x * y).collect();
            pi2.points()
                .iter()
                .zip(pi2.weights())
                .any(|(p2, w2)| *p2 == image && w2.level == w.level && w2.finite == w.finite)
        })
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    for i in 0..10 {
        let k = 2 + i % 2;
        let pi = random_pi(&mut rng, 1, k, 3);
        let b: Vec<Q> = (0..k - 1).map(|_| random_rational(&mut rng)).collect();
        let pi2 = ok(pi.scaled(&b))?;
        let lattice = ok(compute_g_pi(&pi, 4))?;
        let g: Vec<i64> = (0..k - 1).map(|_| rng.gen_range(-3..=3)).collect();
        let shift: Vec<i64> = lattice.basis_i64().unwrap().iter().fold(vec![0; k - 1], |acc, row| {
            let c = rng.gen_range(-2..=2);
            acc.iter().zip(row).map(|(a, r)| a + c * r).collect()
        });
        let g2: Vec<i64> = g.iter().zip(&shift).map(|(a, s)| a + s).collect();
        let out = ok(iso_check(&pi, &g, &pi2, &g2, 4))?;
        ensure(out.isomorphic, || format!("scaling positive {i} rejected: {}", out.reason))?;
        ensure(out.witness.as_deref().is_some_and(|w| witness_valid(&pi, &pi2, w)), || format!("bad witness {i}"))?;
    }
    for i in 0..10 {
        let pi = random_pi(&mut rng, 1, 2, 3);
        let b = vec![random_rational(&mut rng)];
        let scaled = ok(pi.scaled(&b))?;
        let mut weights = scaled.weights().to_vec();
        let j = rng.gen_range(0..weights.len());
        let w = &weights[j];
        // Another dominant finite part at the same level.
        let new_finite = (w.finite.0[0] + 1) % (w.level + 1);
        weights[j] = AffineWeight::new(w.level, vec![new_finite], w.delta1.clone());
        let pi2 = ok(PiFunction::new(pi.root_system(), 2, scaled.points().to_vec(), weights))?;
        let out = ok(iso_check(&pi, &[0], &pi2, &[0], 4))?;
        ensure(!out.isomorphic, || format!("weight-mismatch negative {i} accepted"))?;
    }
    for i in 0..5 {
        let rs = ok(RootSystem::from_code("A1"))?;
        let c = random_rational(&mut rng);
        let w = random_weight(&mut rng, 1);
        let pi = ok(PiFunction::new(&rs, 2, vec![vec![c.clone()], vec![-c]], vec![w.clone(), w]))?;
        let pi2 = ok(pi.scaled(&[random_rational(&mut rng)]))?;
        let g = rng.gen_range(-3..=3);
        let out = ok(iso_check(&pi, &[g], &pi2, &[g + 2 * rng.gen_range(-2..=2) + 1], 4))?;
        ensure(!out.isomorphic, || format!("coset-mismatch negative {i} accepted"))?;
        ensure(out.witness.is_some(), || {
            format!("coset-mismatch negative {i} was rejected before the coset comparison")
        })?;
    }
    let rs = ok(RootSystem::from_code("A1"))?;
    let w1 = AffineWeight::basic(1);
    let w2 = AffineWeight::new(1, vec![1], q(0));
    let bases = [
        ok(PiFunction::new(&rs, 2, vec![vec![q(1)], vec![q(-1)]], vec![w1.clone(), w1.clone()]))?,
        ok(PiFunction::new(&rs, 2, vec![vec![q(1)], vec![q(-1)]], vec![w1.clone(), w2.clone()]))?,
        ok(PiFunction::new(&rs, 2, vec![vec![q(2)]], vec![w2.clone()]))?,
    ];
    let mut pool: Vec<(PiFunction, Vec<i64>)> = Vec::new();
    while pool.len() < 20 {
        let base = &bases[pool.len() % bases.len()];
        let scaled = ok(base.scaled(&[[q(1), q(-1), qf(1, 2), q(3)][rng.gen_range(0..4)].clone()]))?;
        pool.push((scaled, vec![rng.gen_range(-2..=2)]));
    }
    let n = pool.len();
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            rel[i][j] = ok(iso_check(&pool[i].0, &pool[i].1, &pool[j].0, &pool[j].1, 4))?.isomorphic;
        }
    }
    for i in 0..n {
        ensure(rel[i][i], || format!("not reflexive at {i}"))?;
        for j in 0..n {
            ensure(rel[i][j] == rel[j][i], || format!("not symmetric at ({i}, {j})"))?;
            for l in 0..n {
                ensure(!(rel[i][j] && rel[j][l]) || rel[i][l], || format!("not transitive at ({i}, {j}, {l})"))?;
            }
        }
    }
    let classes = (0..n).filter(|&i| (0..i).all(|j| !rel[i][j])).count();
    let t = start.elapsed();
    ensure(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!("10 positives, 10 + 5 negatives, 20-instance pool with {classes} classes in {:.2}s", t.as_secs_f64()))
}

fn criterion_7() -> Outcome {
    let rs = ok(RootSystem::from_code("A1"))?;
    let basic = AffineWeight::basic(1);
    let w = AffineWeight::new(1, vec![1], q(0));
    let instances = [
        (ok(PiFunction::new(&rs, 2, vec![vec![q(1)], vec![q(-1)]], vec![basic.clone(), basic.clone()]))?, 2),
        (ok(PiFunction::new(&rs, 2, vec![vec![q(2)], vec![qf(1, 3)]], vec![basic, w]))?, 2),
        (ok(PiFunction::new(&rs, 2, vec![vec![q(-1)]], vec![AffineWeight::new(2, vec![1], q(0))]))?, 3),
    ];
    let mut compared = 0;
    for (i, (pi, depth)) in instances.iter().enumerate() {
        let l = ok(LoopedModule::build(pi, *depth, &[(-2, 2)]))?;
        let r = ok(weyl_invariance_check(&l, 2))?;
        ensure(r.holds(), || format!("instance {i}: {:?}", r.failures.first()))?;
        compared += r.checked;
    }
    Ok(format!("{compared} reflected weight spaces agree on 3 instances"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("partition-number multiplicities", criterion_1),
        ("Garland suite", criterion_2),
        ("lattice lemma", criterion_3),
        ("toroidal core", criterion_4),
        ("classification pipeline", criterion_5),
        ("isomorphism test", criterion_6),
        ("Weyl invariance", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
