//! The reduction pipeline on a random complex measurement: realify, split
//! into rank-1 pieces, then average over the symmetry group. Information
//! never decreases along the way.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use accessible_info::ensembles::{make_em, RotationGen};
use accessible_info::measures::mutual_information;
use accessible_info::povm::{
    convex_combine, realify, refine_rank1, shift, validate, AMALGAMATION_TOL,
};
use accessible_info::random::random_povm;

fn main() -> accessible_info::Result<()> {
    let m = 5;
    let e = make_em(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = random_povm(&mut rng, 2, 3, false)?;
    println!(
        "random complex POVM      {} outcomes, I = {:.6}",
        p.len(),
        mutual_information(&e, &p)?
    );

    let real = realify(&p)?;
    println!(
        "real part                {} outcomes, I = {:.6}",
        real.len(),
        mutual_information(&e, &real)?
    );

    let fine = refine_rank1(&real, 1e-12)?;
    println!(
        "rank-1 refinement        {} outcomes, I = {:.6}",
        fine.len(),
        mutual_information(&e, &fine)?
    );

    let g = RotationGen::new(m)?;
    let terms = (0..m as i64)
        .map(|l| Ok((1.0 / m as f64, shift(&fine, &g, l)?)))
        .collect::<accessible_info::Result<Vec<_>>>()?;
    let avg = convex_combine(&terms, AMALGAMATION_TOL)?;
    println!(
        "group average            {} outcomes, I = {:.6} (valid: {})",
        avg.len(),
        mutual_information(&e, &avg)?,
        validate(&avg, 1e-9).is_valid()
    );
    Ok(())
}
