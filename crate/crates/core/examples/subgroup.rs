//! M = 15 measured with only three outcomes: each coset of the order-3
//! subgroup already reaches the full accessible information.

use std::f64::consts::FRAC_PI_2;

use accessible_info::ensembles::make_em;
use accessible_info::measures::{i_theta, mutual_information};
use accessible_info::povm::validate;
use accessible_info::strategies::{covariant_am, subgroup_povm};

fn main() -> accessible_info::Result<()> {
    let e = make_em(15)?;
    println!(
        "covariant, 15 outcomes: {:.12}",
        mutual_information(&e, &covariant_am(15)?)?
    );
    for l in 0..5 {
        let p = subgroup_povm(15, 3, l)?;
        println!(
            "coset l = {l}, {} outcomes: {:.12} (valid: {})",
            p.len(),
            mutual_information(&e, &p)?,
            validate(&p, 1e-10).is_valid()
        );
    }
    println!("I(π/2)                 : {:.12}", i_theta(15, FRAC_PI_2));
    Ok(())
}
