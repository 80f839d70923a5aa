//! Random POVMs and ensembles for property tests and demos.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::ensembles::Ensemble;
use crate::error::{invalid, Result};
use crate::matcore::{hermitian_eigen, CMat, CVec, DEFAULT_TOL};
use crate::povm::{Povm, Rank1Real};

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn ginibre(rng: &mut impl Rng, dim: usize, real: bool) -> CMat {
    CMat::from_fn(dim, dim, |_, _| {
        let im = if real { 0.0 } else { gaussian(rng) };
        Complex64::new(gaussian(rng), im)
    })
}

/// `S^{-1/2}` for a positive definite `S`.
fn inverse_sqrt(s: &CMat) -> Result<CMat> {
    let pairs = hermitian_eigen(s, DEFAULT_TOL)?;
    let mut out = CMat::zeros(s.rows(), s.cols());
    for p in &pairs {
        if p.value <= DEFAULT_TOL {
            return Err(invalid!("sum of seeds is singular"));
        }
        out = &out + &CMat::projector(&p.vector).scale(1.0 / p.value.sqrt());
    }
    Ok(out)
}

/// `outcomes` random full-rank elements `S^{-1/2} G_k G_k† S^{-1/2}`.
/// With `real` set, every element is a real symmetric matrix.
pub fn random_povm(rng: &mut impl Rng, dim: usize, outcomes: usize, real: bool) -> Result<Povm> {
    if dim == 0 || outcomes == 0 {
        return Err(invalid!("need dim and outcome count of at least 1"));
    }
    let seeds: Vec<CMat> = (0..outcomes)
        .map(|_| {
            let g = ginibre(rng, dim, real);
            &g * &g.adjoint()
        })
        .collect();
    let total = seeds
        .iter()
        .skip(1)
        .fold(seeds[0].clone(), |acc, a| &acc + a);
    let t = inverse_sqrt(&total)?;
    Povm::new(
        seeds
            .iter()
            .map(|a| {
                let e = a.conjugate_by(&t);
                (&e + &e.adjoint()).scale(0.5)
            })
            .collect(),
    )
}

/// Random real rank-1 qubit POVM with `outcomes ≥ 2` elements.
pub fn random_rank1_real_povm(rng: &mut impl Rng, outcomes: usize) -> Result<Rank1Real> {
    if outcomes < 2 {
        return Err(invalid!("a rank-1 qubit POVM needs at least 2 elements"));
    }
    loop {
        let vs: Vec<CVec> = (0..outcomes)
            .map(|_| {
                let t = rng.gen_range(0.0..std::f64::consts::PI);
                let r = rng.gen_range(0.2..1.0);
                CVec::from_real(&[r * t.cos(), r * t.sin()])
            })
            .collect();
        let total = vs
            .iter()
            .fold(CMat::zeros(2, 2), |acc, v| &acc + &CMat::projector(v));
        let Ok(t) = inverse_sqrt(&total) else {
            continue;
        };
        let mut weights = Vec::with_capacity(outcomes);
        let mut angles = Vec::with_capacity(outcomes);
        for v in &vs {
            let w = t.matvec(v);
            weights.push(w.norm_sqr());
            angles.push(w[1].re.atan2(w[0].re));
        }
        if weights.iter().any(|&w| w <= 1e-6) {
            continue;
        }
        return Rank1Real::new(weights, angles);
    }
}

/// Random real density matrix of the given dimension.
pub fn random_real_state(rng: &mut impl Rng, dim: usize) -> CMat {
    let g = ginibre(rng, dim, true);
    let a = &g * &g.adjoint();
    let tr = a.trace().re;
    a.scale(1.0 / tr)
}

/// `n` random real states with random priors.
pub fn random_real_ensemble(rng: &mut impl Rng, dim: usize, n: usize) -> Result<Ensemble> {
    if n == 0 || dim == 0 {
        return Err(invalid!("need at least one state of dimension at least 1"));
    }
    let states = (0..n).map(|_| random_real_state(rng, dim)).collect();
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut priors: Vec<f64> = raw.iter().map(|p| p / total).collect();
    let rest: f64 = priors[..n - 1].iter().sum();
    priors[n - 1] = 1.0 - rest;
    Ensemble::new(states, priors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::validate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 0..30 {
            let p = random_povm(&mut rng, 1 + k % 4, 1 + k % 5, k % 2 == 0).unwrap();
            assert!(validate(&p, 1e-9).is_valid(), "{}", validate(&p, 1e-9));
            if k % 2 == 0 {
                assert!(p.elements().iter().all(|e| e.max_imag() == 0.0));
            }
            let r = random_rank1_real_povm(&mut rng, 2 + k % 5).unwrap();
            assert!(validate(&r.to_povm(), 1e-9).is_valid());
            let e = random_real_ensemble(&mut rng, 2 + k % 3, 1 + k % 4).unwrap();
            assert!(e.is_real(0.0));
        }
    }
}
