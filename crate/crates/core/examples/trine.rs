//! Accessible information of the trine: three measurements, one number.

use accessible_info::ensembles::make_em;
use accessible_info::measures::{lemma6_info, mutual_information, nats_to_bits};
use accessible_info::povm::to_rank1_real;
use accessible_info::strategies::{covariant_am, theorem2_w};

fn main() -> accessible_info::Result<()> {
    let trine = make_em(3)?;
    let covariant = covariant_am(3)?;
    let w = theorem2_w(3, 1, 1)?;

    let a = mutual_information(&trine, &covariant)?;
    let b = mutual_information(&trine, &w)?;
    let c = lemma6_info(3, &to_rank1_real(&covariant, 1e-12)?);

    println!("covariant measurement   {a:.12} nats");
    println!("three-element W(3,1,1)  {b:.12} nats");
    println!("weighted-angle formula  {c:.12} nats");
    println!(
        "ln(3/2)                 {:.12} nats = {:.6} bits",
        1.5f64.ln(),
        nats_to_bits(a)
    );
    Ok(())
}
