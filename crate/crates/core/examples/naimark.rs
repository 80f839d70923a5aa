//! Optical receiver for W(M, m, m): circuit matrices, checks, exact port
//! statistics and a seeded run of single-photon detections.

use accessible_info::ensembles::em_vector;
use accessible_info::naimark::{
    build_plan, simulate_state, simulated_information, verify_dilation,
};

fn main() -> accessible_info::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<usize>().ok());
    let big_m = args.next().flatten().unwrap_or(5);
    let m = args.next().flatten().unwrap_or(2);

    let plan = build_plan(big_m, m)?;
    println!("M = {big_m}, m = {m}, γ = {:.6} rad", plan.gamma);
    println!("U2·U1 =\n{:?}", plan.circuit().real_part());
    println!("{}", verify_dilation(&plan, 1e-10));

    println!("\ninput  P(E0)    P(E1)    P(E2)    P(E3)   counts of 1000");
    for i in 0..big_m {
        let stats = simulate_state(&plan, &em_vector(big_m, i));
        let counts = stats.sample_counts(1000, 42 + i as u64);
        let p = stats.probs;
        println!(
            "ψ_{i}    {:.5}  {:.5}  {:.5}  {:.1e}  {counts:?}",
            p[0], p[1], p[2], p[3]
        );
    }
    println!(
        "\ninformation from simulated statistics: {:.12} nats",
        simulated_information(&plan)?
    );
    Ok(())
}
