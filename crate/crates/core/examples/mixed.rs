//! Adding white noise to the source: the best angle does not move, the
//! information drops.

use std::f64::consts::FRAC_PI_2;

use accessible_info::oracle::theta_sweep_mixed;

fn main() -> accessible_info::Result<()> {
    for m in [3, 5] {
        println!("M = {m}");
        for eps in [0.0, 0.1, 0.5, 0.9] {
            let curve = theta_sweep_mixed(m, 3600, eps)?;
            let k = curve.argmax();
            let period = std::f64::consts::PI / m as f64;
            let offset = (curve.thetas[k] - FRAC_PI_2).rem_euclid(period);
            println!(
                "  ε = {eps:3}: max {:.8} nats, argmax offset from π/2 (mod π/M) {:.2e}",
                curve.values[k],
                offset.min(period - offset).abs()
            );
        }
    }
    Ok(())
}
