//! Subcommand implementations; each returns the text to emit.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use thiserror::Error;

use toroidal_core::affine::{AffineWeight, TruncatedModule};
use toroidal_core::garland::{coroot_values, evaluate_under_pi, garland_p, product_formula};
use toroidal_core::lattice::gcd_unimodular;
use toroidal_core::lie::FiniteLie;
use toroidal_core::num::q;
use toroidal_core::pimod::{
    box_reduction_check, central_triviality_check, compute_g_pi, decompose as decompose_l, iso_check as iso_core,
    iso_check_evaluation, verify_garland_on_l, weyl_invariance_check, LSlice, LoopedModule, PiFunction,
};
use toroidal_core::rootsys::RootSystem;
use toroidal_core::Error;

/// Largest rank, level and depth accepted by `affine-mult`.
const AFFINE_MAX_RANK: usize = 2;
const AFFINE_MAX_LEVEL: i64 = 3;
const AFFINE_MAX_DEPTH: i64 = 8;

/// Exponent range `[-e, e]` of the real roots used by `verify`'s Weyl check.
const WEYL_EXPONENT: i64 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for malformed input, 3 for a cap violation, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::CapExceeded(_)) => 3,
            CliError::Core(Error::Malformed(_)) | CliError::Json(_) | CliError::Usage(_) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

type Out<T> = Result<T, CliError>;

fn emit(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serde_json values always serialize");
    s.push('\n');
    s
}

/// Inline JSON when the argument starts with `{` or `[`, otherwise a file path.
fn read_json(arg: &str) -> Out<Value> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Json(e.to_string()))
}

fn read_pi(arg: &str) -> Out<PiFunction> {
    Ok(PiFunction::from_json(&read_json(arg)?)?)
}

/// Parse `lo:hi,lo:hi,…`.
pub fn parse_window(s: &str) -> Out<Vec<(i64, i64)>> {
    s.split(',')
        .map(|part| {
            let (lo, hi) =
                part.split_once(':').ok_or_else(|| CliError::Usage(format!("window entry `{part}` is not lo:hi")))?;
            let parse = |x: &str| {
                x.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("window bound `{x}` is not an integer")))
            };
            Ok((parse(lo)?, parse(hi)?))
        })
        .collect()
}

fn big_to_i64(x: &BigInt) -> Out<i64> {
    i64::try_from(x).map_err(|_| CliError::Core(Error::InvalidArgument(format!("integer {x} out of range"))))
}

pub fn rootsys(code: &str) -> Out<String> {
    let rs = RootSystem::from_code(code)?;
    Ok(emit(&json!({
        "type": rs.code(),
        "rank": rs.rank(),
        "cartan": rs.cartan(),
        "positive_roots": rs.positive_roots(),
        "highest_root": rs.highest_root(),
        "dual_coxeter": rs.dual_coxeter(),
    })))
}

pub fn affine_mult(code: &str, level: i64, finite: &[i64], depth: i64) -> Out<String> {
    let rs = RootSystem::from_code(code)?;
    if rs.rank() > AFFINE_MAX_RANK {
        return Err(Error::CapExceeded(format!("rank {} (limit {AFFINE_MAX_RANK})", rs.rank())).into());
    }
    if level > AFFINE_MAX_LEVEL {
        return Err(Error::CapExceeded(format!("level {level} (limit {AFFINE_MAX_LEVEL})")).into());
    }
    if depth > AFFINE_MAX_DEPTH {
        return Err(Error::CapExceeded(format!("depth {depth} (limit {AFFINE_MAX_DEPTH})")).into());
    }
    let finite = if finite.is_empty() { vec![0; rs.rank()] } else { finite.to_vec() };
    let top = AffineWeight::new(level, finite, q(0));
    let x = TruncatedModule::build_irreducible(&FiniteLie::new(&rs)?, &top, depth)?;
    Ok(emit(
        &json!({ "type": rs.code(), "highest_weight": top.to_json(), "depth": depth, "weights": x.multiplicity_json() }),
    ))
}

pub fn garland(s: u32) -> String {
    format!("{}\n", garland_p(s))
}

pub fn gcdmat(n: &[i64]) -> Out<String> {
    let b = gcd_unimodular(n)?;
    let rows = b.to_i64_rows().ok_or_else(|| Error::InvalidArgument("matrix entries out of range".into()))?;
    let image: Vec<i64> = rows.iter().map(|r| r.iter().zip(n).map(|(x, y)| x * y).sum()).collect();
    let det = big_to_i64(&b.det()?)?;
    Ok(emit(&json!({ "n": n, "matrix": rows, "image": image, "det": det })))
}

fn lattice_json(l: &toroidal_core::lattice::Lattice) -> Out<Value> {
    let basis = l.basis_i64().ok_or_else(|| Error::InvalidArgument("lattice basis out of range".into()))?;
    Ok(json!({ "basis": basis, "index": big_to_i64(&l.index()?)?, "quotient_reps": l.quotient_reps()? }))
}

pub fn gpi(arg: &str, box_n: i64) -> Out<String> {
    let pi = read_pi(arg)?;
    Ok(emit(&lattice_json(&compute_g_pi(&pi, box_n)?)?))
}

fn slice_dims(l: &LoopedModule) -> (Map<String, Value>, usize) {
    let mut dims = Map::new();
    let mut total = 0;
    for g in l.window_points() {
        for (s, _) in l.base().slices() {
            let ls = LSlice { slice: s.clone(), g: g.clone() };
            let d = l.dim(&ls);
            total += d;
            dims.insert(ls.to_string(), json!(d));
        }
    }
    (dims, total)
}

pub fn build_l(arg: &str, depth: i64, window: &str) -> Out<String> {
    let pi = read_pi(arg)?;
    let window = parse_window(window)?;
    let l = LoopedModule::build(&pi, depth, &window)?;
    let (dims, total) = slice_dims(&l);
    Ok(emit(&json!({
        "k": pi.k(),
        "depth": depth,
        "window": window.iter().map(|(a, b)| vec![*a, *b]).collect::<Vec<_>>(),
        "dim": total,
        "slices": dims,
    })))
}

pub fn decompose(arg: &str, depth: i64, window: &str, box_n: i64) -> Out<(String, bool)> {
    let pi = read_pi(arg)?;
    let l = LoopedModule::build(&pi, depth, &parse_window(window)?)?;
    let g_pi = compute_g_pi(&pi, box_n)?;
    let d = decompose_l(&l, &g_pi)?;
    let mut v = d.to_json();
    v["g_pi"] = lattice_json(&g_pi)?;
    Ok((emit(&v), d.accounts()))
}

fn coset(v: Option<&Value>, name: &str) -> Out<Option<Vec<i64>>> {
    v.map(|x| serde_json::from_value(x.clone()).map_err(|e| CliError::Json(format!("`{name}`: {e}")))).transpose()
}

pub fn iso_check(arg: &str, box_n: i64) -> Out<String> {
    let v = read_json(arg)?;
    let field = |name: &str| -> Out<PiFunction> {
        let x = v.get(name).ok_or_else(|| CliError::Json(format!("missing field `{name}`")))?;
        Ok(PiFunction::from_json(x)?)
    };
    let (pi, pi2) = (field("pi")?, field("pi2")?);
    let outcome = match (coset(v.get("g"), "g")?, coset(v.get("g2"), "g2")?) {
        (Some(g), Some(g2)) => iso_core(&pi, &g, &pi2, &g2, box_n)?,
        (None, None) => iso_check_evaluation(&pi, &pi2)?,
        _ => return Err(CliError::Json("give both `g` and `g2`, or neither".into())),
    };
    Ok(emit(&outcome.to_json()?))
}

fn check(holds: bool, detail: Value) -> Value {
    json!({ "holds": holds, "detail": detail })
}

/// Garland identities on `L(X_π)` from each coset representative, for every
/// positive root, `r ∈ {0, 1}`, `q ∈ {0, 1}` and `a = ±e_j`; cases leaving
/// the truncation are skipped.
fn garland_on_l(l: &LoopedModule, reps: &[Vec<i64>]) -> Out<Value> {
    let rs = l.pi().root_system();
    let (mut checked, mut skipped, mut nontrivial) = (0usize, 0usize, 0usize);
    let mut failures = Vec::new();
    for alpha in rs.positive_roots() {
        for r in 0..=1 {
            for j in 0..l.k() - 1 {
                for sign in [1, -1] {
                    let mut a = vec![0; l.k() - 1];
                    a[j] = sign;
                    for qq in 0..=1 {
                        for g in reps {
                            match verify_garland_on_l(l, alpha, r, &a, qq, g) {
                                Ok(c) => {
                                    checked += 1;
                                    nontrivial += usize::from(c.nontrivial());
                                    if !c.holds() {
                                        failures.push(format!("alpha={alpha:?} r={r} a={a:?} q={qq} g={g:?}"));
                                    }
                                }
                                Err(Error::WindowExceeded(_) | Error::DepthExceeded { .. }) => skipped += 1,
                                Err(e) => return Err(e.into()),
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(check(
        failures.is_empty() && checked > 0,
        json!({ "checked": checked, "nontrivial": nontrivial, "skipped": skipped, "failures": failures }),
    ))
}

/// `φ_π(p^s_{β,a})` equals the product formula and vanishes once `s` exceeds
/// `wt(π)(β^∨)`, for `β = α + rδ₁`, `r ∈ {0, 1}`, `a = e_j`.
fn evaluation_vanishing(pi: &PiFunction) -> Out<Value> {
    let rs = pi.root_system();
    let (mut checked, mut failures) = (0usize, Vec::new());
    for alpha in rs.positive_roots() {
        for r in 0..=1 {
            let bound: u64 = coroot_values(rs, alpha, r, pi)?.iter().sum();
            let top = u32::try_from(bound + 2).map_err(|_| Error::InvalidArgument("coroot value too large".into()))?;
            for j in 0..pi.k() - 1 {
                let mut a = vec![0; pi.k() - 1];
                a[j] = 1;
                for s in 0..=top {
                    let lhs = evaluate_under_pi(rs, alpha, r, &a, s, pi)?;
                    let ok = lhs == product_formula(rs, alpha, r, &a, s, pi)? && (u64::from(s) <= bound || lhs == q(0));
                    checked += 1;
                    if !ok {
                        failures.push(format!("alpha={alpha:?} r={r} a={a:?} s={s}"));
                    }
                }
            }
        }
    }
    Ok(check(failures.is_empty(), json!({ "checked": checked, "failures": failures })))
}

pub fn verify(arg: &str, depth: i64, window: &str, box_n: i64) -> Out<(String, bool)> {
    let pi = read_pi(arg)?;
    let l = LoopedModule::build(&pi, depth, &parse_window(window)?)?;
    let mut checks = Map::new();

    let g_pi = compute_g_pi(&pi, box_n)?;
    checks.insert("g_pi".into(), check(g_pi.is_full_rank(), lattice_json(&g_pi)?));

    let d = decompose_l(&l, &g_pi)?;
    checks.insert(
        "decomposition".into(),
        check(d.accounts(), json!({ "components": d.components.len(), "interior_slices": d.dims.len() })),
    );

    let hv = l.highest_vectors()?;
    let hv_dim: usize = hv.iter().map(|(_, b)| b.len()).sum();
    checks.insert("highest_vectors".into(), check(hv_dim > 0, json!({ "slices": hv.len(), "dim": hv_dim })));

    let reports = [
        ("central_triviality", central_triviality_check(&l)?),
        ("weyl_invariance", weyl_invariance_check(&l, WEYL_EXPONENT)?),
        ("box_reduction", box_reduction_check(&l)?),
    ];
    for (name, r) in reports {
        checks.insert(name.into(), check(r.holds(), r.to_json()));
    }
    checks.insert("garland_on_l".into(), garland_on_l(&l, &d.cosets)?);
    checks.insert("evaluation_vanishing".into(), evaluation_vanishing(&pi)?);

    let passed = checks.values().all(|c| c["holds"] == json!(true));
    Ok((emit(&json!({ "passed": passed, "checks": checks })), passed))
}
