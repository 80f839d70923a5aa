//! Minimum error and maximum information pick different measurements.

use accessible_info::ensembles::make_em;
use accessible_info::measures::{check_pe_optimal, error_probability, mutual_information};
use accessible_info::strategies::{covariant_am, state_direction_povm};

fn main() -> accessible_info::Result<()> {
    println!(" M   P_e(state dirs)  P_e(covariant)  I(state dirs)  I(covariant)  certificate");
    for m in 2..=7 {
        let e = make_em(m)?;
        let pe = state_direction_povm(m)?;
        let cov = covariant_am(m)?;
        let report = check_pe_optimal(&e, &pe, 1e-10)?;
        let cov_report = check_pe_optimal(&e, &cov, 1e-10)?;
        println!(
            "{m:2}   {:.6}         {:.6}        {:.6}       {:.6}      {} / {}",
            error_probability(&e, &pe)?,
            error_probability(&e, &cov)?,
            mutual_information(&e, &pe)?,
            mutual_information(&e, &cov)?,
            if report.passed() { "pass" } else { "fail" },
            if cov_report.passed() { "pass" } else { "fail" },
        );
    }
    Ok(())
}
