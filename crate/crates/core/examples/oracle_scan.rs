//! Brute-force scan of every three-outcome real rank-1 measurement,
//! compared with the value at θ = π/2.

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use accessible_info::measures::i_theta;
use accessible_info::oracle::scan3;

fn main() -> accessible_info::Result<()> {
    let grid: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(48);
    println!(" M   scan best       I(π/2)          gap        θ*       φa*      φb*");
    for m in 2..=8 {
        let t = Instant::now();
        let r = scan3(m, grid, 5000)?;
        let peak = i_theta(m, FRAC_PI_2);
        println!(
            "{m:2}   {:.12}  {peak:.12}  {:9.2e}  {:.5}  {:.5}  {:.5}   ({:.0?})",
            r.best_value,
            peak - r.best_value,
            r.best_theta,
            r.best_phi_a,
            r.best_phi_b,
            t.elapsed()
        );
    }
    Ok(())
}
