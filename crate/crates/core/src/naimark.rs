//! Dilation of the symmetric three-outcome POVM into a projective
//! measurement on two polarization modes, factored as `U2 · U1`.
//!
//! Detector basis: `E0 = |↑⟩_a|0⟩_b`, `E1 = |↓⟩_a|0⟩_b`, `E2 = |0⟩_a|↑⟩_b`,
//! `E3 = |0⟩_a|↓⟩_b`. A qubit signal in mode `a` enters as `(ψ0, ψ1, 0, 0)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::{self, Write as _};

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ensembles::em_vector;
use crate::error::{invalid, Result};
use crate::matcore::{CMat, CVec};
use crate::measures::{channel_information, ChannelMatrix};
use crate::oracle::fmt_sig17;

/// Number of detector ports.
pub const PORTS: usize = 4;

#[derive(Clone, Debug)]
pub struct NaimarkPlan {
    pub big_m: usize,
    pub m: usize,
    pub gamma: f64,
    /// Un-normalized qubit vectors; `|ω_j⟩⟨ω_j|` are the POVM elements.
    pub omega_vecs: [CVec; 3],
    /// Orthonormal extension in the detector basis.
    pub big_omega_vecs: [CVec; 4],
    pub u1: CMat,
    pub u2: CMat,
    /// Detector port → POVM outcome label; `None` marks the dark port.
    pub outcome_map: [Option<usize>; 4],
}

impl NaimarkPlan {
    /// The full circuit `U2 · U1`.
    pub fn circuit(&self) -> CMat {
        &self.u2 * &self.u1
    }

    /// POVM elements `|ω_j⟩⟨ω_j|`, in outcome-label order.
    pub fn povm_elements(&self) -> Vec<CMat> {
        self.omega_vecs.iter().map(CMat::projector).collect()
    }

    /// Port that reports outcome `label`.
    pub fn port_for(&self, label: usize) -> Option<usize> {
        self.outcome_map.iter().position(|&o| o == Some(label))
    }

    pub fn to_json(&self) -> PlanJson {
        let real_rows = |a: &CMat| -> Vec<Vec<f64>> {
            (0..a.rows())
                .map(|i| (0..a.cols()).map(|j| a[(i, j)].re).collect())
                .collect()
        };
        let real_vec = |v: &CVec| -> Vec<f64> { v.entries().iter().map(|z| z.re).collect() };
        PlanJson {
            big_m: self.big_m,
            m: self.m,
            gamma: self.gamma,
            cos_half_gamma: (self.gamma / 2.0).cos(),
            sin_half_gamma: (self.gamma / 2.0).sin(),
            omega_vecs: self.omega_vecs.iter().map(real_vec).collect(),
            big_omega_vecs: self.big_omega_vecs.iter().map(real_vec).collect(),
            u1: real_rows(&self.u1),
            u2: real_rows(&self.u2),
            circuit: real_rows(&self.circuit()),
            outcome_map: self.outcome_map.to_vec(),
        }
    }
}

/// JSON form of a plan. All matrices are real, written row by row.
#[derive(Clone, Debug, Serialize)]
pub struct PlanJson {
    #[serde(rename = "M")]
    pub big_m: usize,
    pub m: usize,
    pub gamma: f64,
    pub cos_half_gamma: f64,
    pub sin_half_gamma: f64,
    pub omega_vecs: Vec<Vec<f64>>,
    #[serde(rename = "Omega_vecs")]
    pub big_omega_vecs: Vec<Vec<f64>>,
    #[serde(rename = "U1")]
    pub u1: Vec<Vec<f64>>,
    #[serde(rename = "U2")]
    pub u2: Vec<Vec<f64>>,
    #[serde(rename = "U2U1")]
    pub circuit: Vec<Vec<f64>>,
    pub outcome_map: Vec<Option<usize>>,
}

/// 2×2 rotation `[[cos γ/2, sin γ/2], [−sin γ/2, cos γ/2]]`.
pub fn ry_gate(gamma: f64) -> CMat {
    let (s, c) = (gamma / 2.0).sin_cos();
    CMat::from_real(2, 2, &[c, s, -s, c]).expect("2x2 shape")
}

/// `ry_gate(γ)` acting on `(E1, E2)`, identity on `E0` and `E3`.
pub fn u1_matrix(gamma: f64) -> CMat {
    let r = ry_gate(gamma);
    let mut u = CMat::identity(PORTS);
    for i in 0..2 {
        for j in 0..2 {
            u[(1 + i, 1 + j)] = r[(i, j)];
        }
    }
    u
}

/// Balanced mixer on `(E0, E1)`, identity on `E2` and `E3`.
pub fn u2_matrix() -> CMat {
    let h = FRAC_1_SQRT_2;
    let mut u = CMat::identity(PORTS);
    u[(0, 0)] = h.into();
    u[(0, 1)] = h.into();
    u[(1, 0)] = (-h).into();
    u[(1, 1)] = h.into();
    u
}

/// Qubit signal in mode `a`, vacuum in mode `b`.
pub fn embed_signal(psi: &CVec) -> CVec {
    assert_eq!(psi.dim(), 2, "signal must be a qubit");
    let e = psi.entries();
    let zero = 0.0.into();
    CVec::new(vec![e[0], e[1], zero, zero])
}

/// Builds the dilation for `W(M, m, m)`. Needs `M` odd and `M/4 < m < M/2`.
pub fn build_plan(big_m: usize, m: usize) -> Result<NaimarkPlan> {
    if big_m < 3 || big_m.is_multiple_of(2) {
        return Err(invalid!("M must be odd and at least 3, got {big_m}"));
    }
    if 4 * m <= big_m || 2 * m >= big_m {
        return Err(invalid!(
            "m must satisfy M/4 < m < M/2, got m = {m} with M = {big_m}"
        ));
    }
    let cot = 1.0 / (m as f64 * PI / big_m as f64).tan();
    let c = cot;
    let s = -(1.0 - cot * cot).max(0.0).sqrt();
    let gamma = 2.0 * s.atan2(c);
    let h = FRAC_1_SQRT_2;

    let omega_vecs = [
        CVec::from_real(&[0.0, -s]),
        CVec::from_real(&[-h, h * c]),
        CVec::from_real(&[h, h * c]),
    ];
    let big_omega_vecs = [
        CVec::from_real(&[0.0, -s, c, 0.0]),
        CVec::from_real(&[-h, h * c, h * s, 0.0]),
        CVec::from_real(&[h, h * c, h * s, 0.0]),
        CVec::basis(PORTS, 3),
    ];
    Ok(NaimarkPlan {
        big_m,
        m,
        gamma,
        omega_vecs,
        big_omega_vecs,
        u1: u1_matrix(gamma),
        u2: u2_matrix(),
        outcome_map: [Some(2), Some(1), Some(0), None],
    })
}

/// Per-check outcome of [`verify_dilation`]. Each field holds the largest
/// deviation seen.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilationReport {
    pub tol: f64,
    pub channel_equality: f64,
    pub circuit_orthogonality: f64,
    pub basis_relations: f64,
    pub gram_identity: f64,
}

impl DilationReport {
    pub fn channel_ok(&self) -> bool {
        self.channel_equality <= self.tol
    }

    pub fn orthogonality_ok(&self) -> bool {
        self.circuit_orthogonality <= self.tol
    }

    pub fn basis_ok(&self) -> bool {
        self.basis_relations <= self.tol
    }

    pub fn gram_ok(&self) -> bool {
        self.gram_identity <= self.tol
    }

    pub fn passed(&self) -> bool {
        self.channel_ok() && self.orthogonality_ok() && self.basis_ok() && self.gram_ok()
    }
}

impl fmt::Display for DilationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(
            f,
            "channel equality    {} ({:.3e})",
            mark(self.channel_ok()),
            self.channel_equality
        )?;
        writeln!(
            f,
            "U2*U1 orthogonal    {} ({:.3e})",
            mark(self.orthogonality_ok()),
            self.circuit_orthogonality
        )?;
        writeln!(
            f,
            "basis relations     {} ({:.3e})",
            mark(self.basis_ok()),
            self.basis_relations
        )?;
        write!(
            f,
            "Omega Gram = I      {} ({:.3e})",
            mark(self.gram_ok()),
            self.gram_identity
        )
    }
}

/// Checks the plan against the source states `ψ_i`, `i < M`.
///
/// Channel equality compares `⟨ω_j|ψ_i⟩` with both `⟨Ω_j|ψ_i,0⟩` and the
/// amplitude the circuit actually produces at the port reporting `j`.
pub fn verify_dilation(plan: &NaimarkPlan, tol: f64) -> DilationReport {
    let circuit = plan.circuit();

    let mut channel: f64 = 0.0;
    for i in 0..plan.big_m {
        let psi = em_vector(plan.big_m, i);
        let input = embed_signal(&psi);
        let out = circuit.matvec(&input);
        for j in 0..3 {
            let small = plan.omega_vecs[j].inner(&psi);
            let big = plan.big_omega_vecs[j].inner(&input);
            channel = channel.max((small - big).norm());
            match plan.port_for(j) {
                Some(port) => channel = channel.max((small - out[port]).norm()),
                None => channel = f64::INFINITY,
            }
        }
    }

    let orth = (&circuit.adjoint() * &circuit).max_abs_diff(&CMat::identity(PORTS));

    let mut basis: f64 = 0.0;
    for (port, label) in plan.outcome_map.iter().enumerate() {
        let omega = &plan.big_omega_vecs[label.unwrap_or(3)];
        let row = circuit.row(port);
        // rows of a real circuit; compare as bras
        let row = CVec::new(row.entries().iter().map(|z| z.conj()).collect());
        basis = basis.max(row.max_abs_diff(omega));
    }

    let mut gram: f64 = 0.0;
    for (a, u) in plan.big_omega_vecs.iter().enumerate() {
        for (b, v) in plan.big_omega_vecs.iter().enumerate() {
            let want = if a == b { 1.0 } else { 0.0 };
            gram = gram.max((u.inner(v) - want).norm());
        }
    }

    DilationReport {
        tol,
        channel_equality: channel,
        circuit_orthogonality: orth,
        basis_relations: basis,
        gram_identity: gram,
    }
}

/// Exact port probabilities for one input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DetectionStats {
    pub probs: [f64; 4],
}

impl DetectionStats {
    /// CSV with header `port,probability`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("port,probability\n");
        for (k, p) in self.probs.iter().enumerate() {
            let _ = writeln!(out, "E{k},{}", fmt_sig17(*p));
        }
        out
    }

    /// Probabilities per POVM outcome label (dark port dropped).
    pub fn outcome_probs(&self, plan: &NaimarkPlan) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (port, label) in plan.outcome_map.iter().enumerate() {
            if let Some(j) = label {
                out[*j] += self.probs[port];
            }
        }
        out
    }

    /// Draws `shots` detection events. The same seed always gives the same
    /// counts.
    pub fn sample_counts(&self, shots: usize, seed: u64) -> [u64; 4] {
        let mut counts = [0; 4];
        let weights = self.probs.map(|p| p.max(0.0));
        let Ok(dist) = WeightedIndex::new(weights) else {
            return counts;
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..shots {
            counts[dist.sample(&mut rng)] += 1;
        }
        counts
    }
}

/// Sends `(cos θ, sin θ)` through the circuit.
pub fn simulate(plan: &NaimarkPlan, input_theta: f64) -> DetectionStats {
    simulate_state(plan, &CVec::real_direction(input_theta))
}

/// Sends an arbitrary normalized qubit through the circuit.
pub fn simulate_state(plan: &NaimarkPlan, psi: &CVec) -> DetectionStats {
    let out = plan.circuit().matvec(&embed_signal(psi));
    let mut probs = [0.0; 4];
    for (k, p) in probs.iter_mut().enumerate() {
        *p = out[k].norm_sqr();
    }
    DetectionStats { probs }
}

/// Outcome-label × input channel built from simulated statistics over the
/// `M` source states.
pub fn simulated_channel(plan: &NaimarkPlan) -> Result<ChannelMatrix> {
    let cols: Vec<[f64; 3]> = (0..plan.big_m)
        .map(|i| simulate_state(plan, &em_vector(plan.big_m, i)).outcome_probs(plan))
        .collect();
    let rows = (0..3)
        .map(|j| cols.iter().map(|c| c[j]).collect())
        .collect();
    ChannelMatrix::from_rows(rows)
}

/// Mutual information (nats) of the simulated channel under uniform priors.
pub fn simulated_information(plan: &NaimarkPlan) -> Result<f64> {
    let priors = vec![1.0 / plan.big_m as f64; plan.big_m];
    channel_information(&priors, &simulated_channel(plan)?)
}
