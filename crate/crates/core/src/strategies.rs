//! Optimal detection strategies for the symmetric real-qubit source.
//!
//! Every family here places its rank-1 elements at angles
//! `π/2 + k·π/M`, which is what makes them optimal (see [`lemma7_check`]).

use std::f64::consts::{FRAC_PI_2, PI};

use crate::ensembles::RotationGen;
use crate::error::{invalid, Error, Result};
use crate::matcore::{CMat, CVec, DEFAULT_TOL};
use crate::povm::{
    convex_combine, normalize_angle, shift, to_rank1_real, Povm, Rank1Real, AMALGAMATION_TOL,
};

/// Tolerance for the feasibility inequalities of the three-element family.
pub const FEASIBILITY_TOL: f64 = 1e-12;

fn check_m(m: usize, min: usize) -> Result<()> {
    if m < min {
        return Err(invalid!("M must be at least {min}, got {m}"));
    }
    if m > crate::ensembles::MAX_M {
        return Err(invalid!(
            "M must be at most {}, got {m}",
            crate::ensembles::MAX_M
        ));
    }
    Ok(())
}

fn rank1(weight: f64, angle: f64) -> CMat {
    CMat::projector(&CVec::real_direction(angle)).scale(weight)
}

/// Angle of the `j`-th covariant element: orthogonal to `|ψ_j⟩`.
pub fn covariant_angle(m: usize, j: i64) -> f64 {
    FRAC_PI_2 + j as f64 * PI / m as f64
}

/// The `M`-element covariant POVM `{(2/M)|a_j⟩⟨a_j|}` with `a_j ⊥ ψ_j`.
pub fn covariant_am(m: usize) -> Result<Povm> {
    check_m(m, 2)?;
    let w = 2.0 / m as f64;
    Povm::checked(
        (0..m)
            .map(|j| rank1(w, covariant_angle(m, j as i64)))
            .collect(),
        DEFAULT_TOL,
    )
}

/// Squared norms of the three-element optimal POVM for integers `(m, n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct W3Params {
    pub big_m: usize,
    pub m: usize,
    pub n: usize,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
}

impl W3Params {
    /// Evaluates `a² = cos(nπ/M) / (sin(mπ/M) sin((m+n)π/M))` (and `b²` with
    /// `m ↔ n`), then checks `a², b² ≥ 0` and `a² + b² ≤ 2`. Boundary values
    /// within [`FEASIBILITY_TOL`] are accepted and snapped.
    pub fn new(big_m: usize, m: usize, n: usize) -> Result<Self> {
        check_m(big_m, 3)?;
        if m == 0 || n == 0 {
            return Err(invalid!("m and n must be positive, got m={m}, n={n}"));
        }
        let unit = PI / big_m as f64;
        let (mt, nt) = (m as f64 * unit, n as f64 * unit);
        let denom_a = mt.sin() * (mt + nt).sin();
        let denom_b = nt.sin() * (mt + nt).sin();
        if denom_a.abs() < FEASIBILITY_TOL || denom_b.abs() < FEASIBILITY_TOL {
            return Err(Error::Infeasible(format!(
                "(M, m, n) = ({big_m}, {m}, {n}) puts two elements on the same direction"
            )));
        }
        let mut a2 = nt.cos() / denom_a;
        let mut b2 = mt.cos() / denom_b;
        for (name, v) in [("a²", &mut a2), ("b²", &mut b2)] {
            if *v < -FEASIBILITY_TOL {
                return Err(Error::Infeasible(format!(
                    "(M, m, n) = ({big_m}, {m}, {n}) violates {name} ≥ 0 ({name} = {v:.6})"
                )));
            }
            if v.abs() <= FEASIBILITY_TOL {
                *v = 0.0;
            }
        }
        let mut c2 = 2.0 - a2 - b2;
        if c2 < -FEASIBILITY_TOL {
            return Err(Error::Infeasible(format!(
                "(M, m, n) = ({big_m}, {m}, {n}) violates a² + b² ≤ 2 (a² + b² = {:.6})",
                a2 + b2
            )));
        }
        if c2.abs() <= FEASIBILITY_TOL {
            c2 = 0.0;
        }
        Ok(Self {
            big_m,
            m,
            n,
            a2,
            b2,
            c2,
        })
    }
}

/// Every `(m, n)` with `1 ≤ m, n < M` that passes the feasibility test.
pub fn feasible_w_pairs(big_m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in 1..big_m {
        for n in 1..big_m {
            if W3Params::new(big_m, m, n).is_ok() {
                out.push((m, n));
            }
        }
    }
    out
}

/// The three-element optimal POVM: `c|↓⟩`, `a(−sin mπ/M, cos mπ/M)`,
/// `b(sin nπ/M, cos nπ/M)`. Zero-norm elements are dropped.
pub fn theorem2_w(big_m: usize, m: usize, n: usize) -> Result<Povm> {
    let params = W3Params::new(big_m, m, n)?;
    let unit = PI / big_m as f64;
    let elements = [
        (params.c2, FRAC_PI_2),
        (params.a2, FRAC_PI_2 + m as f64 * unit),
        (params.b2, FRAC_PI_2 - n as f64 * unit),
    ]
    .into_iter()
    .filter(|(w, _)| *w > DEFAULT_TOL)
    .map(|(w, t)| rank1(w, t))
    .collect();
    Povm::checked(elements, DEFAULT_TOL)
}

/// `k` covariant directions `l, l + M/k, …` rescaled by `M/k` so they
/// resolve the identity on their own.
pub fn subgroup_povm(big_m: usize, k: usize, l: usize) -> Result<Povm> {
    check_m(big_m, 2)?;
    if k < 2 {
        return Err(invalid!("subgroup order k must be at least 2, got {k}"));
    }
    if !big_m.is_multiple_of(k) {
        return Err(invalid!("k = {k} does not divide M = {big_m}"));
    }
    let stride = big_m / k;
    if l >= stride {
        return Err(invalid!("coset index l = {l} must be below M/k = {stride}"));
    }
    let w = 2.0 / k as f64;
    Povm::checked(
        (0..k)
            .map(|j| rank1(w, covariant_angle(big_m, (l + j * stride) as i64)))
            .collect(),
        DEFAULT_TOL,
    )
}

/// True iff every angle is `π/2 + integer·π/M` within `tol` (mod π).
pub fn lemma7_check(big_m: usize, r: &Rank1Real, tol: f64) -> bool {
    let unit = PI / big_m as f64;
    r.angles().iter().all(|&t| {
        let x = (t - FRAC_PI_2) / unit;
        (x - x.round()).abs() * unit <= tol
    })
}

/// Four-element optimal POVM for `M = 5`: `(1−λ)·W + λ·V²WV†²` with
/// `W = theorem2_w(5, 2, 2)`, parallel elements merged.
pub fn mu4_povm(lambda: f64) -> Result<Povm> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(invalid!("lambda must lie in [0, 1], got {lambda}"));
    }
    let w = theorem2_w(5, 2, 2)?;
    let g = RotationGen::new(5)?;
    let shifted = shift(&w, &g, 2)?;
    convex_combine(&[(1.0 - lambda, w), (lambda, shifted)], AMALGAMATION_TOL)
}

/// Uniform mixture of all `M` shifts of `theorem2_w(M, m, n)`. The parallel
/// elements merge into the covariant POVM, returned in covariant order.
pub fn covariant_from_w(big_m: usize, m: usize, n: usize) -> Result<Povm> {
    let w = theorem2_w(big_m, m, n)?;
    let g = RotationGen::new(big_m)?;
    let weight = 1.0 / big_m as f64;
    let terms = (0..big_m as i64)
        .map(|l| Ok((weight, shift(&w, &g, l)?)))
        .collect::<Result<Vec<_>>>()?;
    let combined = convex_combine(&terms, AMALGAMATION_TOL)?;
    let r = to_rank1_real(&combined, DEFAULT_TOL)?;
    let unit = PI / big_m as f64;
    let index = |t: f64| {
        let k = ((normalize_angle(t - FRAC_PI_2)) / unit).round() as usize;
        k % big_m
    };
    let mut order: Vec<usize> = (0..r.len()).collect();
    order.sort_by_key(|&a| index(r.angles()[a]));
    Povm::checked(
        order
            .into_iter()
            .map(|a| combined.elements()[a].clone())
            .collect(),
        DEFAULT_TOL,
    )
}

/// The minimum-error strategy `{(2/M)|ψ_k⟩⟨ψ_k|}` built on the state
/// directions themselves.
pub fn state_direction_povm(m: usize) -> Result<Povm> {
    check_m(m, 2)?;
    Povm::checked(
        (0..m)
            .map(|k| rank1(2.0 / m as f64, k as f64 * PI / m as f64))
            .collect(),
        DEFAULT_TOL,
    )
}
