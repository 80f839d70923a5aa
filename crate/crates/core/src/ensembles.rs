//! Information sources: the symmetric real-qubit ensemble, its noisy
//! variant, and the two-copy tensor ensemble.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matcore::{tensor, CMat, CVec, DEFAULT_TOL};

/// Largest symmetric-ensemble size the constructors accept.
pub const MAX_M: usize = 360;

/// Tolerance on the prior normalisation.
pub const PRIOR_TOL: f64 = 1e-12;

/// A finite set of density matrices with prior probabilities.
#[derive(Clone, Debug)]
pub struct Ensemble {
    states: Vec<CMat>,
    priors: Vec<f64>,
    dim: usize,
    pure: Option<Vec<CVec>>,
}

impl Ensemble {
    /// Validates and builds an ensemble. The error names the first
    /// violated invariant and the offending index.
    pub fn new(states: Vec<CMat>, priors: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(invalid!("ensemble has no states"));
        }
        if states.len() != priors.len() {
            return Err(invalid!(
                "{} states but {} priors",
                states.len(),
                priors.len()
            ));
        }
        for (i, &p) in priors.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(invalid!("prior {i} is {p}, expected a probability"));
            }
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > PRIOR_TOL {
            return Err(invalid!("priors sum to {total}, expected 1"));
        }
        let dim = states[0].rows();
        for (i, s) in states.iter().enumerate() {
            if !s.is_square() || s.rows() != dim {
                return Err(invalid!(
                    "state {i} is {}x{}, expected {dim}x{dim}",
                    s.rows(),
                    s.cols()
                ));
            }
            if !s.is_hermitian(DEFAULT_TOL) {
                return Err(invalid!("state {i} is not hermitian"));
            }
            let tr = s.trace();
            if (tr.re - 1.0).abs() > DEFAULT_TOL || tr.im.abs() > DEFAULT_TOL {
                return Err(invalid!("state {i} has trace {tr}, expected 1"));
            }
            if !crate::matcore::is_psd(s, DEFAULT_TOL)? {
                return Err(invalid!("state {i} is not positive semidefinite"));
            }
        }
        Ok(Self {
            states,
            priors,
            dim,
            pure: None,
        })
    }

    /// Builds an ensemble of pure states, keeping the vectors alongside.
    pub fn from_pure(vectors: Vec<CVec>, priors: Vec<f64>) -> Result<Self> {
        for (i, v) in vectors.iter().enumerate() {
            if (v.norm_sqr() - 1.0).abs() > DEFAULT_TOL {
                return Err(invalid!("state vector {i} is not normalised"));
            }
        }
        let states = vectors.iter().map(CMat::projector).collect();
        let mut e = Self::new(states, priors)?;
        e.pure = Some(vectors);
        Ok(e)
    }

    pub fn states(&self) -> &[CMat] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// State vectors, when every state is known to be pure.
    pub fn pure_vectors(&self) -> Option<&[CVec]> {
        self.pure.as_deref()
    }

    /// True when every state has only real entries (to `tol`).
    pub fn is_real(&self, tol: f64) -> bool {
        self.states.iter().all(|s| s.max_imag() <= tol)
    }

    pub fn to_json(&self) -> EnsembleJson {
        EnsembleJson {
            dim: self.dim,
            priors: self.priors.clone(),
            states: self.states.iter().map(matrix_to_pairs).collect(),
        }
    }

    pub fn from_json(doc: &EnsembleJson) -> Result<Self> {
        let states = doc
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| pairs_to_matrix(doc.dim, s).map_err(|e| invalid!("state {i}: {e}")))
            .collect::<Result<Vec<_>>>()?;
        Self::new(states, doc.priors.clone())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let doc: EnsembleJson = serde_json::from_str(&text)?;
        Self::from_json(&doc)
    }
}

/// On-disk ensemble: `{ "dim": n, "priors": [...], "states": [[[re, im], ...], ...] }`
/// with each state flattened row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub dim: usize,
    pub priors: Vec<f64>,
    pub states: Vec<Vec<[f64; 2]>>,
}

pub(crate) fn matrix_to_pairs(m: &CMat) -> Vec<[f64; 2]> {
    m.entries().iter().map(|z| [z.re, z.im]).collect()
}

pub(crate) fn pairs_to_matrix(dim: usize, pairs: &[[f64; 2]]) -> std::result::Result<CMat, String> {
    if pairs.len() != dim * dim {
        return Err(format!(
            "expected {} row-major entries for dim {dim}, got {}",
            dim * dim,
            pairs.len()
        ));
    }
    if let Some(k) = pairs
        .iter()
        .position(|p| !p[0].is_finite() || !p[1].is_finite())
    {
        return Err(format!("entry {k} is not finite"));
    }
    CMat::from_vec(
        dim,
        dim,
        pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
    )
    .map_err(|e: Error| e.to_string())
}

/// Generator of the cyclic symmetry: rotation by `π/M` in the real plane.
#[derive(Clone, Debug)]
pub struct RotationGen {
    m: usize,
    matrix: CMat,
}

impl RotationGen {
    pub fn new(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(invalid!("rotation order must be positive"));
        }
        Ok(Self {
            m,
            matrix: rotation(PI / m as f64),
        })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// The `l`-th power, computed as a single rotation by `lπ/M`.
    pub fn power(&self, l: i64) -> CMat {
        rotation(l as f64 * PI / self.m as f64)
    }
}

/// Real rotation `[[cos t, -sin t], [sin t, cos t]]`, i.e. `exp(-i t σ_y)`.
pub fn rotation(t: f64) -> CMat {
    let (s, c) = t.sin_cos();
    CMat::from_real(2, 2, &[c, -s, s, c]).unwrap()
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(invalid!("M must be at least 2, got {m}"));
    }
    if m > MAX_M {
        return Err(invalid!("M must be at most {MAX_M}, got {m}"));
    }
    Ok(())
}

/// `|ψ_k⟩ = (cos kπ/M, sin kπ/M)`.
pub fn em_vector(m: usize, k: usize) -> CVec {
    CVec::real_direction(k as f64 * PI / m as f64)
}

/// The symmetric source of `M` equiprobable real qubit states.
pub fn make_em(m: usize) -> Result<Ensemble> {
    check_m(m)?;
    let vectors = (0..m).map(|k| em_vector(m, k)).collect();
    Ensemble::from_pure(vectors, vec![1.0 / m as f64; m])
}

/// The symmetric source with each state mixed with `I/2` at weight `eps`.
pub fn make_mixed_em(m: usize, eps: f64) -> Result<Ensemble> {
    check_m(m)?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(invalid!("eps must lie in [0, 1], got {eps}"));
    }
    let half_id = CMat::identity(2).scale(0.5 * eps);
    let states = (0..m)
        .map(|k| &CMat::projector(&em_vector(m, k)).scale(1.0 - eps) + &half_id)
        .collect();
    let mut e = Ensemble::new(states, vec![1.0 / m as f64; m])?;
    if eps == 0.0 {
        e.pure = Some((0..m).map(|k| em_vector(m, k)).collect());
    }
    Ok(e)
}

/// Two-copy source `|ψ_k⟩ ⊗ |ψ_k⟩` in four dimensions.
pub fn make_double_em(m: usize) -> Result<Ensemble> {
    check_m(m)?;
    let vectors = (0..m)
        .map(|k| {
            let v = em_vector(m, k);
            tensor(&v, &v)
        })
        .collect();
    Ensemble::from_pure(vectors, vec![1.0 / m as f64; m])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn em_small_cases() {
        let e2 = make_em(2).unwrap();
        let v = e2.pure_vectors().unwrap();
        assert!(v[0].max_abs_diff(&CVec::from_real(&[1.0, 0.0])) < 1e-15);
        assert!(v[1].max_abs_diff(&CVec::from_real(&[0.0, 1.0])) < 1e-15);
        assert_eq!(e2.priors(), &[0.5, 0.5]);

        let e3 = make_em(3).unwrap();
        let psi1 = &e3.pure_vectors().unwrap()[1];
        assert!(psi1.max_abs_diff(&CVec::from_real(&[0.5, 3f64.sqrt() / 2.0])) < 1e-15);
        assert!(e3.is_real(0.0));

        let e4 = make_em(4).unwrap();
        let v = e4.pure_vectors().unwrap();
        assert!(v[2].max_abs_diff(&CVec::from_real(&[0.0, 1.0])) < 1e-15);
        assert!(v[0].inner(&v[2]).norm() < 1e-15);
    }

    #[test]
    fn em_rejects_bad_m() {
        assert!(matches!(make_em(1), Err(Error::InvalidArgument(_))));
        assert!(make_em(0).is_err());
        assert!(make_em(MAX_M + 1).is_err());
        assert!(make_em(MAX_M).is_ok());
    }

    #[test]
    fn consecutive_overlaps_and_covariance() {
        for m in 2..=12 {
            let e = make_em(m).unwrap();
            let v = e.pure_vectors().unwrap();
            let g = RotationGen::new(m).unwrap();
            for k in 0..m {
                let next = (k + 1) % m;
                let ov = v[k].inner(&v[next]).norm();
                assert!(close(ov, (PI / m as f64).cos(), 1e-12), "M={m} k={k}");
                let moved = e.states()[k].conjugate_by(g.matrix());
                assert!(moved.max_abs_diff(&e.states()[next]) < 1e-12);
            }
        }
    }

    #[test]
    fn generator_has_projective_period() {
        for m in 2..=9 {
            let g = RotationGen::new(m).unwrap();
            let mut acc = CMat::identity(2);
            for _ in 0..m {
                acc = &acc * g.matrix();
            }
            assert!(acc.max_abs_diff(&CMat::identity(2).scale(-1.0)) < 1e-10);
            assert!(g.power(m as i64).max_abs_diff(&acc) < 1e-12);
        }
    }

    #[test]
    fn mixed_examples() {
        let pure = make_em(3).unwrap();
        let mixed0 = make_mixed_em(3, 0.0).unwrap();
        for (a, b) in pure.states().iter().zip(mixed0.states()) {
            assert!(a.max_abs_diff(b) < 1e-15);
        }
        let full = make_mixed_em(5, 1.0).unwrap();
        for s in full.states() {
            assert!(s.max_abs_diff(&CMat::identity(2).scale(0.5)) < 1e-15);
        }
        let half = make_mixed_em(3, 0.5).unwrap();
        assert!(half.states()[0].max_abs_diff(&CMat::diag_real(&[0.75, 0.25])) < 1e-15);
        assert!(make_mixed_em(3, -0.1).is_err());
        assert!(make_mixed_em(3, 1.5).is_err());
    }

    #[test]
    fn double_examples() {
        let d2 = make_double_em(2).unwrap();
        assert_eq!(d2.dim(), 4);
        let v = d2.pure_vectors().unwrap();
        assert!(v[1].max_abs_diff(&CVec::from_real(&[0.0, 0.0, 0.0, 1.0])) < 1e-15);
        let d3 = make_double_em(3).unwrap();
        let v = d3.pure_vectors().unwrap();
        assert!(v[0].max_abs_diff(&CVec::from_real(&[1.0, 0.0, 0.0, 0.0])) < 1e-15);
        assert!(close(v[0].inner(&v[1]).re, 0.25, 1e-15));
        assert!(make_double_em(1).is_err());
    }

    #[test]
    fn validation_rejects_bad_input() {
        let s = CMat::diag_real(&[1.0, 0.0]);
        assert!(Ensemble::new(vec![s.clone(), s.clone()], vec![0.5, 0.6]).is_err());
        assert!(Ensemble::new(vec![s.clone(), s.clone()], vec![1.2, -0.2]).is_err());
        let not_psd = CMat::diag_real(&[1.5, -0.5]);
        let err = Ensemble::new(vec![s.clone(), not_psd], vec![0.5, 0.5]).unwrap_err();
        assert!(err.to_string().contains("state 1"), "{err}");
        let bad_trace = CMat::diag_real(&[0.5, 0.0]);
        assert!(Ensemble::new(vec![bad_trace], vec![1.0]).is_err());
        let three = CMat::diag_real(&[1.0, 0.0, 0.0]);
        assert!(Ensemble::new(vec![s, three], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let e = make_mixed_em(4, 0.3).unwrap();
        let text = serde_json::to_string(&e.to_json()).unwrap();
        let back = Ensemble::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        for (a, b) in e.states().iter().zip(back.states()) {
            assert_eq!(a, b);
        }
        assert_eq!(e.priors(), back.priors());

        let doc: EnsembleJson =
            serde_json::from_str(r#"{"dim":2,"priors":[1.0],"states":[[[1,0],[0,0],[0,0]]]}"#)
                .unwrap();
        let err = Ensemble::from_json(&doc).unwrap_err();
        assert!(err.to_string().contains("state 0"), "{err}");
    }
}
