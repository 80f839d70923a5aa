//! Figures of merit for a source/strategy pair: Shannon mutual information
//! (general and closed form), Bayes cost, error probability, and the
//! minimum-error optimality certificate.
//!
//! Information is measured in nats throughout; convert at the output
//! boundary with [`nats_to_bits`].

use std::f64::consts::{LN_2, PI};
use std::fmt;

use crate::ensembles::Ensemble;
use crate::error::{invalid, Error, Result};
use crate::matcore::{min_eigenvalue, CMat};
use crate::povm::{Povm, Rank1Real};

/// Probabilities below this are treated as exact zeros before taking logs.
pub const PROB_FLOOR: f64 = 1e-15;

/// Conditional probabilities `P(j|i)`, outputs by rows, inputs by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelMatrix {
    outputs: usize,
    inputs: usize,
    probs: Vec<f64>,
}

impl ChannelMatrix {
    /// Builds a channel matrix from `rows[j][i] = P(j|i)`, checking the
    /// floor at −1e-12, clipping to [0, 1], and requiring unit column sums
    /// within 1e-9.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let outputs = rows.len();
        let inputs = rows.first().map_or(0, Vec::len);
        if outputs == 0 || inputs == 0 {
            return Err(invalid!("empty channel matrix"));
        }
        let mut probs = Vec::with_capacity(outputs * inputs);
        for (j, row) in rows.iter().enumerate() {
            if row.len() != inputs {
                return Err(invalid!(
                    "row {j} has {} entries, expected {inputs}",
                    row.len()
                ));
            }
            for (i, &p) in row.iter().enumerate() {
                if !p.is_finite() || p < -1e-12 {
                    return Err(Error::ContractViolation(format!(
                        "P({j}|{i}) = {p:.3e} is negative"
                    )));
                }
                probs.push(p.clamp(0.0, 1.0));
            }
        }
        let ch = Self {
            outputs,
            inputs,
            probs,
        };
        for i in 0..inputs {
            let s: f64 = (0..outputs).map(|j| ch.get(j, i)).sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::ContractViolation(format!(
                    "column {i} sums to {s}, outcomes do not resolve the identity"
                )));
            }
        }
        Ok(ch)
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// `P(j|i)`.
    pub fn get(&self, j: usize, i: usize) -> f64 {
        self.probs[j * self.inputs + i]
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.outputs).map(|j| self.get(j, i)).collect()
    }
}

/// Cost matrix `C[i][j]`: inputs by rows, outputs by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct BayesCostMatrix {
    inputs: usize,
    outputs: usize,
    costs: Vec<f64>,
}

impl BayesCostMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let inputs = rows.len();
        let outputs = rows.first().map_or(0, Vec::len);
        let mut costs = Vec::with_capacity(inputs * outputs);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != outputs {
                return Err(invalid!(
                    "cost row {i} has {} entries, expected {outputs}",
                    row.len()
                ));
            }
            if let Some(j) = row.iter().position(|c| !c.is_finite()) {
                return Err(invalid!("cost C[{i}][{j}] is not finite"));
            }
            costs.extend_from_slice(row);
        }
        Ok(Self {
            inputs,
            outputs,
            costs,
        })
    }

    /// `C_ij = 1 − δ_ij`.
    pub fn zero_one(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        Self::new(rows).expect("square finite costs")
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.costs[i * self.outputs + j]
    }
}

fn check_dims(e: &Ensemble, p: &Povm) -> Result<()> {
    if e.dim() != p.dim() {
        return Err(invalid!(
            "ensemble has dim {} but POVM has dim {}",
            e.dim(),
            p.dim()
        ));
    }
    Ok(())
}

/// `P(j|i) = Tr(π_j ρ_i)`.
pub fn channel_matrix(e: &Ensemble, p: &Povm) -> Result<ChannelMatrix> {
    check_dims(e, p)?;
    let rows = p
        .elements()
        .iter()
        .map(|pi| {
            e.states()
                .iter()
                .map(|rho| pi.trace_product(rho).re)
                .collect()
        })
        .collect();
    ChannelMatrix::from_rows(rows)
}

/// Shannon mutual information of a classical channel with the given priors.
pub fn channel_information(priors: &[f64], ch: &ChannelMatrix) -> Result<f64> {
    if priors.len() != ch.inputs() {
        return Err(invalid!(
            "{} priors for a channel with {} inputs",
            priors.len(),
            ch.inputs()
        ));
    }
    let mut info = 0.0;
    for j in 0..ch.outputs() {
        let marginal: f64 = priors
            .iter()
            .enumerate()
            .map(|(i, xi)| xi * ch.get(j, i))
            .sum();
        if marginal < PROB_FLOOR {
            continue;
        }
        for (i, &xi) in priors.iter().enumerate() {
            let pji = ch.get(j, i);
            if pji < PROB_FLOOR || xi == 0.0 {
                continue;
            }
            info += xi * pji * (pji / marginal).ln();
        }
    }
    Ok(info.max(0.0))
}

/// `I(X:Y)` in nats for the source `e` measured with `p`.
pub fn mutual_information(e: &Ensemble, p: &Povm) -> Result<f64> {
    channel_information(e.priors(), &channel_matrix(e, p)?)
}

/// `(1+x) ln(1+x)` with the `x → −1` limit taken as 0.
fn xlogx_shifted(x: f64) -> f64 {
    let y = 1.0 + x;
    if y < PROB_FLOOR {
        0.0
    } else {
        y * y.ln()
    }
}

/// Closed-form information of the covariant strategy whose first element
/// points at angle `theta`, on the symmetric source of size `m`.
pub fn i_theta(m: usize, theta: f64) -> f64 {
    i_theta_contrast(m, theta, 1.0)
}

fn i_theta_contrast(m: usize, theta: f64, contrast: f64) -> f64 {
    let mf = m as f64;
    let sum: f64 = (0..m)
        .map(|k| xlogx_shifted(contrast * (2.0 * theta - 2.0 * k as f64 * PI / mf).cos()))
        .sum();
    sum / mf
}

/// [`i_theta`] for the source mixed with `I/2` at weight `eps`: every
/// cosine is damped by `1 − eps`.
pub fn i_theta_mixed(m: usize, theta: f64, eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(invalid!("eps must lie in [0, 1], got {eps}"));
    }
    Ok(i_theta_contrast(m, theta, 1.0 - eps))
}

/// Information of a rank-1 real POVM on the symmetric source:
/// `Σ_a (w_a / 2) · I(θ_a)`.
pub fn lemma6_info(m: usize, r: &Rank1Real) -> f64 {
    r.weights()
        .iter()
        .zip(r.angles())
        .map(|(w, &t)| 0.5 * w * i_theta(m, t))
        .sum()
}

/// `B = Σ_ij C_ij ξ_i P(j|i)`.
pub fn bayes_cost(e: &Ensemble, p: &Povm, c: &BayesCostMatrix) -> Result<f64> {
    let ch = channel_matrix(e, p)?;
    if c.inputs != ch.inputs() || c.outputs != ch.outputs() {
        return Err(invalid!(
            "cost matrix is {}x{}, expected {}x{} (inputs x outputs)",
            c.inputs,
            c.outputs,
            ch.inputs(),
            ch.outputs()
        ));
    }
    let mut cost = 0.0;
    for (i, xi) in e.priors().iter().enumerate() {
        for j in 0..ch.outputs() {
            cost += c.get(i, j) * xi * ch.get(j, i);
        }
    }
    Ok(cost)
}

/// `P_e = 1 − Σ_k ξ_k P(k|k)`; outcome `k` is read as a guess of input `k`.
pub fn error_probability(e: &Ensemble, p: &Povm) -> Result<f64> {
    if e.len() != p.len() {
        return Err(invalid!(
            "{} outcomes for {} inputs: the guess of each input is undefined",
            p.len(),
            e.len()
        ));
    }
    let ch = channel_matrix(e, p)?;
    let correct: f64 = e
        .priors()
        .iter()
        .enumerate()
        .map(|(k, xi)| xi * ch.get(k, k))
        .sum();
    Ok((1.0 - correct).clamp(0.0, 1.0))
}

/// Outcome of the minimum-error optimality test.
#[derive(Clone, Debug)]
pub struct PeOptimalityReport {
    /// `‖Γ − Γ†‖_max` for `Γ = Σ_k ξ_k ρ_k π_k`.
    pub gamma_hermiticity: f64,
    /// Smallest eigenvalue of `Γ − ξ_j ρ_j` for each `j` (hermitian part).
    pub min_eigenvalues: Vec<f64>,
    pub tol: f64,
}

impl PeOptimalityReport {
    pub fn gamma_hermitian(&self) -> bool {
        self.gamma_hermiticity <= self.tol
    }

    /// Inputs whose operator `Γ − ξ_j ρ_j` has an eigenvalue below `−tol`.
    pub fn failing_inputs(&self) -> Vec<usize> {
        self.min_eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l < -self.tol)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.gamma_hermitian() && self.failing_inputs().is_empty()
    }
}

impl fmt::Display for PeOptimalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "minimum-error conditions hold");
        }
        if !self.gamma_hermitian() {
            write!(f, "Γ not hermitian ({:.3e}); ", self.gamma_hermiticity)?;
        }
        write!(
            f,
            "Γ − ξ_j ρ_j not positive for inputs {:?}",
            self.failing_inputs()
        )
    }
}

/// Minimum-error optimality conditions for a strategy that guesses input
/// `k` on outcome `k`: `Γ = Σ_k ξ_k ρ_k π_k` must be hermitian and
/// `Γ − ξ_j ρ_j ≥ 0` for every input `j`.
pub fn check_pe_optimal(e: &Ensemble, p: &Povm, tol: f64) -> Result<PeOptimalityReport> {
    check_dims(e, p)?;
    if e.len() != p.len() {
        return Err(invalid!("{} outcomes for {} inputs", p.len(), e.len()));
    }
    let n = e.dim();
    let gamma = e
        .states()
        .iter()
        .zip(e.priors())
        .zip(p.elements())
        .fold(CMat::zeros(n, n), |acc, ((rho, xi), pi)| {
            &acc + &(rho * pi).scale(*xi)
        });
    let gamma_hermiticity = gamma.hermiticity_defect();
    let gamma_h = (&gamma + &gamma.adjoint()).scale(0.5);
    let min_eigenvalues = e
        .states()
        .iter()
        .zip(e.priors())
        .map(|(rho, xi)| min_eigenvalue(&(&gamma_h - &rho.scale(*xi)), f64::INFINITY))
        .collect::<Result<Vec<_>>>()?;
    Ok(PeOptimalityReport {
        gamma_hermiticity,
        min_eigenvalues,
        tol,
    })
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{em_vector, make_em, make_mixed_em};
    use crate::matcore::DEFAULT_TOL;
    use crate::povm::to_rank1_real;
    use crate::strategies::covariant_am;
    use std::f64::consts::FRAC_PI_2;

    fn von_neumann_e2() -> Povm {
        Povm::new(vec![
            CMat::projector(&em_vector(2, 0)),
            CMat::projector(&em_vector(2, 1)),
        ])
        .unwrap()
    }

    fn state_direction_povm(m: usize) -> Povm {
        Povm::new(
            (0..m)
                .map(|k| CMat::projector(&em_vector(m, k)).scale(2.0 / m as f64))
                .collect(),
        )
        .unwrap()
    }

    // Plain transcription of the closed form, kept apart from the library path.
    fn i_theta_reference(m: usize, theta: f64) -> f64 {
        let mut s = 0.0;
        for k in 0..m {
            let x = 1.0 + (2.0 * theta - 2.0 * PI * k as f64 / m as f64).cos();
            if x > 1e-300 {
                s += x * x.ln();
            }
        }
        s / m as f64
    }

    #[test]
    fn channel_examples() {
        let e2 = make_em(2).unwrap();
        let ch = channel_matrix(&e2, &von_neumann_e2()).unwrap();
        for j in 0..2 {
            for i in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ch.get(j, i) - want).abs() < 1e-15);
            }
        }
        let e3 = make_em(3).unwrap();
        let ch = channel_matrix(&e3, &covariant_am(3).unwrap()).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let want = if j == k { 0.0 } else { 0.5 };
                assert!(
                    (ch.get(j, k) - want).abs() < 1e-15,
                    "P({j}|{k}) = {}",
                    ch.get(j, k)
                );
            }
        }
    }

    #[test]
    fn channel_dimension_mismatch() {
        let e = make_em(3).unwrap();
        let p = Povm::new(vec![CMat::identity(3)]).unwrap();
        assert!(matches!(
            channel_matrix(&e, &p),
            Err(Error::InvalidArgument(_))
        ));
        assert!(mutual_information(&e, &p).is_err());
    }

    #[test]
    fn information_examples() {
        let e2 = make_em(2).unwrap();
        let i = mutual_information(&e2, &von_neumann_e2()).unwrap();
        assert!((i - LN_2).abs() < 1e-15);
        let e3 = make_em(3).unwrap();
        let i = mutual_information(&e3, &covariant_am(3).unwrap()).unwrap();
        assert!((i - 1.5f64.ln()).abs() < 1e-12);
        let trivial = Povm::new(vec![CMat::identity(2)]).unwrap();
        assert!(mutual_information(&e3, &trivial).unwrap().abs() < 1e-15);
    }

    #[test]
    fn i_theta_examples() {
        assert!((i_theta(2, FRAC_PI_2) - LN_2).abs() < 1e-15);
        assert!((i_theta(4, FRAC_PI_2) - LN_2 / 2.0).abs() < 1e-15);
        let i5 = i_theta_reference(5, FRAC_PI_2);
        assert!((i5 - 0.326_776_246_139_107).abs() < 1e-12, "{i5}");
        assert!((i_theta(5, FRAC_PI_2) - i5).abs() < 1e-15);
        let direct = mutual_information(&make_em(5).unwrap(), &covariant_am(5).unwrap()).unwrap();
        assert!((direct - i5).abs() < 1e-12);
    }

    #[test]
    fn i_theta_mixed_examples() {
        for &t in &[0.0, 0.3, 1.2, FRAC_PI_2] {
            assert_eq!(i_theta_mixed(5, t, 0.0).unwrap(), i_theta(5, t));
            assert_eq!(i_theta_mixed(5, t, 1.0).unwrap(), 0.0);
        }
        let direct =
            mutual_information(&make_mixed_em(3, 0.5).unwrap(), &covariant_am(3).unwrap()).unwrap();
        assert!((i_theta_mixed(3, FRAC_PI_2, 0.5).unwrap() - direct).abs() < 1e-12);
        assert!(i_theta_mixed(3, 0.0, 1.1).is_err());
        assert!(i_theta_mixed(3, 0.0, -0.1).is_err());
    }

    #[test]
    fn lemma6_examples() {
        for m in 2..=8 {
            let r = to_rank1_real(&covariant_am(m).unwrap(), DEFAULT_TOL).unwrap();
            assert!((lemma6_info(m, &r) - i_theta(m, FRAC_PI_2)).abs() < 1e-12);
        }
        let r = Rank1Real::new(vec![1.0, 1.0], vec![0.0, FRAC_PI_2]).unwrap();
        for m in [2, 3, 5, 7] {
            let direct = mutual_information(&make_em(m).unwrap(), &r.to_povm()).unwrap();
            assert!((lemma6_info(m, &r) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn periodicity_and_maximum() {
        for m in 2..=12 {
            let step = PI / m as f64;
            let peak = i_theta(m, FRAC_PI_2);
            for k in 0..500 {
                let t = k as f64 * 0.0127;
                assert!((i_theta(m, t) - i_theta(m, t + step)).abs() < 1e-12);
                assert!(i_theta(m, t) <= peak + 1e-15);
                assert!((i_theta(m, t) - i_theta_reference(m, t)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn bayes_examples() {
        let e3 = make_em(3).unwrap();
        let p = covariant_am(3).unwrap();
        let zero = BayesCostMatrix::new(vec![vec![0.0; 3]; 3]).unwrap();
        assert_eq!(bayes_cost(&e3, &p, &zero).unwrap(), 0.0);
        let c01 = BayesCostMatrix::zero_one(3);
        let pe = error_probability(&e3, &p).unwrap();
        assert!((bayes_cost(&e3, &p, &c01).unwrap() - pe).abs() < 1e-15);
        let e2 = make_em(2).unwrap();
        let b = bayes_cost(&e2, &von_neumann_e2(), &BayesCostMatrix::zero_one(2)).unwrap();
        assert!(b.abs() < 1e-15);
        assert!(bayes_cost(&e3, &p, &BayesCostMatrix::zero_one(2)).is_err());
        assert!(BayesCostMatrix::new(vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn error_probability_examples() {
        let e2 = make_em(2).unwrap();
        assert!(error_probability(&e2, &von_neumann_e2()).unwrap().abs() < 1e-15);
        for m in 2..=7 {
            let e = make_em(m).unwrap();
            let pe = error_probability(&e, &state_direction_povm(m)).unwrap();
            assert!((pe - (1.0 - 2.0 / m as f64)).abs() < 1e-12);
        }
        let e3 = make_em(3).unwrap();
        assert!((error_probability(&e3, &covariant_am(3).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        let two = von_neumann_e2();
        assert!(matches!(
            error_probability(&e3, &two),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn pe_certificate_examples() {
        let e2 = make_em(2).unwrap();
        assert!(check_pe_optimal(&e2, &von_neumann_e2(), DEFAULT_TOL)
            .unwrap()
            .passed());
        for m in 2..=7 {
            let e = make_em(m).unwrap();
            let report = check_pe_optimal(&e, &state_direction_povm(m), DEFAULT_TOL).unwrap();
            assert!(report.passed(), "M={m}: {report}");
        }
        let e3 = make_em(3).unwrap();
        let report = check_pe_optimal(&e3, &covariant_am(3).unwrap(), DEFAULT_TOL).unwrap();
        assert!(!report.passed());
        assert_eq!(report.failing_inputs(), vec![0, 1, 2]);
        // Γ vanishes, so the minimum eigenvalue is −ξ_j = −1/3
        for l in &report.min_eigenvalues {
            assert!((l + 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pe_certificate_holds_for_mixed_source() {
        for m in [3, 5] {
            let e = make_mixed_em(m, 0.4).unwrap();
            let report = check_pe_optimal(&e, &state_direction_povm(m), DEFAULT_TOL).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn information_bounded_by_log_m() {
        for m in 2..=8 {
            let e = make_em(m).unwrap();
            let i = mutual_information(&e, &covariant_am(m).unwrap()).unwrap();
            assert!(i >= 0.0 && i <= (m as f64).ln());
        }
    }

    #[test]
    fn units() {
        assert!((nats_to_bits(1.5f64.ln()) - 1.5f64.log2()).abs() < 1e-15);
    }
}
