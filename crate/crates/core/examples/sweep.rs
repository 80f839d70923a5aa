//! Prints I(θ) for M = 2..5 as CSV columns, ready for plotting.

use accessible_info::oracle::{fmt_sig17, theta_sweep};

fn main() -> accessible_info::Result<()> {
    let points = 181;
    let curves = (2..=5)
        .map(|m| theta_sweep(m, points))
        .collect::<accessible_info::Result<Vec<_>>>()?;

    println!("theta_rad,M2,M3,M4,M5");
    for k in 0..points {
        let row: Vec<String> = curves.iter().map(|c| fmt_sig17(c.values[k])).collect();
        println!("{},{}", fmt_sig17(curves[0].thetas[k]), row.join(","));
    }
    for c in &curves {
        let k = c.argmax();
        eprintln!(
            "M={}: max {:.6} nats at θ = {:.4}",
            c.m, c.values[k], c.thetas[k]
        );
    }
    Ok(())
}
