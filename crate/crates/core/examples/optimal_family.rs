//! All feasible three-element optimal measurements for a given M, plus
//! the four-element family obtained by mixing one with its shift.

use std::f64::consts::FRAC_PI_2;

use accessible_info::ensembles::make_em;
use accessible_info::measures::{i_theta, mutual_information};
use accessible_info::povm::to_rank1_real;
use accessible_info::strategies::{feasible_w_pairs, mu4_povm, theorem2_w, W3Params};

fn main() -> accessible_info::Result<()> {
    let big_m: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let e = make_em(big_m)?;
    println!(
        "M = {big_m}, accessible information {:.10} nats",
        i_theta(big_m, FRAC_PI_2)
    );
    println!("  m  n      a²         b²         c²        I");
    for (m, n) in feasible_w_pairs(big_m) {
        let p = W3Params::new(big_m, m, n)?;
        let info = mutual_information(&e, &theorem2_w(big_m, m, n)?)?;
        println!(
            "{m:3}{n:3}  {:.8} {:.8} {:.8}  {info:.10}",
            p.a2, p.b2, p.c2
        );
    }

    let e5 = make_em(5)?;
    println!("\nM = 5 four-element family");
    for lambda in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let p = mu4_povm(lambda)?;
        let r = to_rank1_real(&p, 1e-12)?;
        let weights: Vec<String> = r.weights().iter().map(|w| format!("{w:.4}")).collect();
        println!(
            "  λ = {lambda:4}: {} elements [{}], I = {:.10}",
            p.len(),
            weights.join(", "),
            mutual_information(&e5, &p)?
        );
    }
    Ok(())
}
