//! Brute-force checks: a lattice scan over the complete three-parameter
//! family of real rank-1 qubit POVMs, followed by derivative-free
//! coordinate refinement, and plain θ-sweeps of the closed-form curve.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::matcore::{CMat, CVec, DEFAULT_TOL};
use crate::measures::{i_theta, i_theta_mixed};
use crate::povm::Povm;
use crate::strategies::FEASIBILITY_TOL;

/// Squared norms `(a², b², c²)` of the general three-element POVM with
/// relative angles `phi_a`, `phi_b`, or `None` outside the feasible region.
pub fn general_w_weights(phi_a: f64, phi_b: f64) -> Option<(f64, f64, f64)> {
    let a2 = phi_b.cos() / (phi_a.sin() * (phi_a - phi_b).sin());
    let b2 = phi_a.cos() / (phi_b.sin() * (phi_b - phi_a).sin());
    if !a2.is_finite() || !b2.is_finite() {
        return None;
    }
    if a2 < -FEASIBILITY_TOL || b2 < -FEASIBILITY_TOL {
        return None;
    }
    let (a2, b2) = (a2.max(0.0), b2.max(0.0));
    let c2 = 2.0 - a2 - b2;
    if c2 < -FEASIBILITY_TOL {
        return None;
    }
    Some((a2, b2, c2.max(0.0)))
}

/// The general three-element real POVM: `c(1,0)`, `a(cos φ_a, sin φ_a)`,
/// `b(cos φ_b, sin φ_b)` all rotated by `theta`. Elements of zero weight are
/// dropped, so boundary parameters give a two-element POVM.
pub fn build_general_w(theta: f64, phi_a: f64, phi_b: f64) -> Result<Povm> {
    let (a2, b2, c2) = general_w_weights(phi_a, phi_b).ok_or_else(|| {
        Error::Infeasible(format!(
            "(φ_a, φ_b) = ({phi_a:.6}, {phi_b:.6}) is outside the region a², b² ≥ 0, a² + b² ≤ 2"
        ))
    })?;
    let elements = [(c2, theta), (a2, theta + phi_a), (b2, theta + phi_b)]
        .into_iter()
        .filter(|(w, _)| *w > DEFAULT_TOL)
        .map(|(w, t)| CMat::projector(&CVec::real_direction(t)).scale(w))
        .collect();
    Povm::new(elements)
}

/// Closed-form information of [`build_general_w`] on the symmetric source.
pub fn general_w_objective(m: usize, theta: f64, phi_a: f64, phi_b: f64) -> Option<f64> {
    let (a2, b2, c2) = general_w_weights(phi_a, phi_b)?;
    Some(
        0.5 * c2 * i_theta(m, theta)
            + 0.5 * a2 * i_theta(m, theta + phi_a)
            + 0.5 * b2 * i_theta(m, theta + phi_b),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub best_theta: f64,
    pub best_phi_a: f64,
    pub best_phi_b: f64,
    /// Nats.
    pub best_value: f64,
    pub grid_points_evaluated: usize,
    pub grid_points_skipped: usize,
    pub refined: bool,
}

/// Step below which coordinate refinement stops.
pub const REFINE_MIN_STEP: f64 = 1e-9;

/// Scans `grid_n³` lattice points with `θ ∈ [0, π/M)` and
/// `φ_a, φ_b ∈ [0, π)`, skipping infeasible ones, then runs up to
/// `refine_iters` rounds of compass search from the best point.
///
/// Ties on the lattice go to the lexicographically smallest
/// `(θ, φ_a, φ_b)`.
pub fn scan3(m: usize, grid_n: usize, refine_iters: usize) -> Result<ScanResult> {
    if m < 2 {
        return Err(invalid!("M must be at least 2, got {m}"));
    }
    if grid_n < 8 {
        return Err(invalid!("grid_n must be at least 8, got {grid_n}"));
    }
    let theta_step = PI / m as f64 / grid_n as f64;
    let phi_step = PI / grid_n as f64;

    let mut best: Option<([f64; 3], f64)> = None;
    let mut evaluated = 0;
    let mut skipped = 0;
    for i in 0..grid_n {
        let theta = i as f64 * theta_step;
        for ja in 0..grid_n {
            let phi_a = ja as f64 * phi_step;
            for jb in 0..grid_n {
                let phi_b = jb as f64 * phi_step;
                match general_w_objective(m, theta, phi_a, phi_b) {
                    Some(v) => {
                        evaluated += 1;
                        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
                            best = Some(([theta, phi_a, phi_b], v));
                        }
                    }
                    None => skipped += 1,
                }
            }
        }
    }
    let (mut point, mut value) =
        best.ok_or_else(|| Error::Infeasible("no feasible lattice point".into()))?;

    let refined = refine_iters > 0;
    if refined {
        let objective = |p: &[f64; 3]| general_w_objective(m, p[0], p[1], p[2]);
        let mut steps = [theta_step, phi_step, phi_step];
        for _ in 0..refine_iters {
            if steps.iter().all(|&s| s < REFINE_MIN_STEP) {
                break;
            }
            let mut improved = false;
            for axis in 0..3 {
                for dir in [1.0, -1.0] {
                    let mut trial = point;
                    trial[axis] += dir * steps[axis];
                    if let Some(v) = objective(&trial) {
                        if v > value {
                            point = trial;
                            value = v;
                            improved = true;
                            break;
                        }
                    }
                }
            }
            if !improved {
                for s in steps.iter_mut() {
                    *s *= 0.5;
                }
            }
        }
    }

    Ok(ScanResult {
        best_theta: point[0].rem_euclid(PI / m as f64),
        best_phi_a: point[1].rem_euclid(PI),
        best_phi_b: point[2].rem_euclid(PI),
        best_value: value,
        grid_points_evaluated: evaluated,
        grid_points_skipped: skipped,
        refined,
    })
}

/// Sampled `(θ, I(θ))` curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepCurve {
    #[serde(rename = "M")]
    pub m: usize,
    pub thetas: Vec<f64>,
    /// Nats.
    pub values: Vec<f64>,
}

impl SweepCurve {
    /// Index of the largest value (first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = k;
            }
        }
        best
    }

    /// CSV with header `theta_rad,info_nats`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        self.to_csv_scaled("info_nats", 1.0)
    }

    /// CSV with a custom value column, each value multiplied by `scale`.
    pub fn to_csv_scaled(&self, column: &str, scale: f64) -> String {
        let mut out = format!("theta_rad,{column}\n");
        for (t, v) in self.thetas.iter().zip(&self.values) {
            let _ = writeln!(out, "{},{}", fmt_sig17(*t), fmt_sig17(v * scale));
        }
        out
    }
}

/// `n_points` evenly spaced angles over `[0, π)` (end point excluded).
pub fn theta_sweep(m: usize, n_points: usize) -> Result<SweepCurve> {
    theta_sweep_mixed(m, n_points, 0.0)
}

/// [`theta_sweep`] for the source mixed with `I/2` at weight `eps`.
pub fn theta_sweep_mixed(m: usize, n_points: usize, eps: f64) -> Result<SweepCurve> {
    if m < 2 {
        return Err(invalid!("M must be at least 2, got {m}"));
    }
    if n_points < 2 {
        return Err(invalid!("need at least 2 sweep points, got {n_points}"));
    }
    let thetas: Vec<f64> = (0..n_points)
        .map(|k| k as f64 * PI / n_points as f64)
        .collect();
    let values = thetas
        .iter()
        .map(|&t| i_theta_mixed(m, t, eps))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepCurve { m, thetas, values })
}

/// Formats a float with 17 significant digits, positional where sensible.
pub fn fmt_sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..=16).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::make_em;
    use crate::measures::mutual_information;
    use crate::povm::validate;
    use crate::strategies::theorem2_w;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    #[test]
    fn general_w_matches_trine_w() {
        let g = build_general_w(FRAC_PI_2, PI / 3.0, -PI / 3.0).unwrap();
        let w = theorem2_w(3, 1, 1).unwrap();
        assert_eq!(g.len(), 3);
        for x in g.elements() {
            assert!(w.elements().iter().any(|y| x.max_abs_diff(y) < 1e-12));
        }
        // the same POVM with φ_b taken mod π
        let g2 = build_general_w(FRAC_PI_2, PI / 3.0, 2.0 * PI / 3.0).unwrap();
        for (x, y) in g.elements().iter().zip(g2.elements()) {
            assert!(x.max_abs_diff(y) < 1e-12);
        }
    }

    #[test]
    fn general_w_weight_formula() {
        for &phi_b in &[-0.7, -0.2, 0.3, 1.0] {
            let (a2, _, _) = general_w_weights(FRAC_PI_2, phi_b).unwrap();
            let want = phi_b.cos() / (FRAC_PI_2.sin() * (FRAC_PI_2 - phi_b).sin());
            assert!((a2 - want).abs() < 1e-14);
            assert!(validate(&build_general_w(0.2, FRAC_PI_2, phi_b).unwrap(), 1e-10).is_valid());
        }
    }

    #[test]
    fn general_w_degenerate_and_infeasible() {
        // φ_b = π/2 makes a² = 0 and c² = 1: a two-element POVM
        let p = build_general_w(0.0, PI / 4.0, FRAC_PI_2).unwrap();
        assert_eq!(p.len(), 2);
        assert!(validate(&p, 1e-10).is_valid());
        // φ_a = φ_b = π/4 gives c² = 0 on the boundary
        let (a2, b2, c2) = general_w_weights(PI / 4.0, 3.0 * PI / 4.0).unwrap();
        assert!((a2 - 1.0).abs() < 1e-12 && (b2 - 1.0).abs() < 1e-12 && c2 == 0.0);
        assert_eq!(
            build_general_w(0.3, PI / 4.0, 3.0 * PI / 4.0)
                .unwrap()
                .len(),
            2
        );
        assert!(matches!(
            build_general_w(0.0, 0.3, 0.4),
            Err(Error::Infeasible(_))
        ));
        assert!(build_general_w(0.0, 0.0, 0.4).is_err());
    }

    #[test]
    fn objective_matches_direct_information() {
        let e = make_em(5).unwrap();
        let mut checked = 0;
        for i in 0..7 {
            for ja in 0..11 {
                for jb in 0..11 {
                    let (t, a, b) = (i as f64 * 0.09, ja as f64 * 0.29, jb as f64 * 0.29);
                    if let Some(v) = general_w_objective(5, t, a, b) {
                        let p = build_general_w(t, a, b).unwrap();
                        let direct = mutual_information(&e, &p).unwrap();
                        assert!((v - direct).abs() < 1e-10, "({t}, {a}, {b})");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn scan_small_cases() {
        let r = scan3(3, 24, 500).unwrap();
        assert!((r.best_value - 1.5f64.ln()).abs() < 1e-6, "{r:?}");
        assert!(r.best_value <= 1.5f64.ln() + 1e-9);
        assert!(r.refined);
        assert_eq!(
            r.grid_points_evaluated + r.grid_points_skipped,
            24 * 24 * 24
        );

        let r = scan3(4, 16, 0).unwrap();
        assert!(!r.refined);
        assert!(r.best_value <= LN_2 / 2.0 + 1e-12);
        assert!(scan3(3, 4, 0).is_err());
    }

    #[test]
    fn refinement_recovers_off_lattice_optimum() {
        // a prime grid keeps π/2 and the optimal φ off the lattice
        for m in [3, 5, 7] {
            let peak = i_theta(m, FRAC_PI_2);
            let coarse = scan3(m, 11, 0).unwrap();
            let r = scan3(m, 11, 20_000).unwrap();
            assert!(r.best_value >= coarse.best_value);
            assert!((r.best_value - peak).abs() < 1e-6, "M={m}: {r:?}");
            let period = PI / m as f64;
            let d = (r.best_theta - FRAC_PI_2).rem_euclid(period);
            assert!(d.min(period - d) < 1e-4, "M={m}: θ = {}", r.best_theta);
        }
    }

    #[test]
    fn sweep_shapes() {
        let c = theta_sweep(2, 1000).unwrap();
        assert_eq!(c.thetas.len(), 1000);
        let k = c.argmax();
        // M = 2 peaks at θ = 0 and θ = π/2 with equal height
        assert!((c.values[k] - LN_2).abs() < 1e-12);
        assert!((c.values[500] - LN_2).abs() < 1e-12);

        let c = theta_sweep(3, 900).unwrap();
        let peak = i_theta(3, FRAC_PI_2);
        let maxima = c
            .values
            .iter()
            .filter(|v| (**v - peak).abs() < 1e-12)
            .count();
        assert_eq!(maxima, 3);
        assert!(theta_sweep(3, 1).is_err());
    }

    #[test]
    fn csv_layout() {
        let c = theta_sweep(3, 4).unwrap();
        let csv = c.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "theta_rad,info_nats");
        assert_eq!(lines.len(), 5);
        let row: Vec<f64> = lines[2].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(row[0], c.thetas[1]);
        assert_eq!(row[1], c.values[1]);
    }

    #[test]
    fn sig17_round_trips() {
        for x in [
            0.0,
            1.0,
            -2.5,
            0.405_465_108_108_164_4,
            1e-7,
            123456.789,
            3.0e20,
            PI,
        ] {
            let s = fmt_sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_sig17(0.5), "0.50000000000000000");
    }
}
