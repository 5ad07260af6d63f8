//! Partial-transpose test across Bob's cut, and the separable expansion of
//! the Cyril process.

use causalkit::processes::{
    build_cyril, cyril_separable_terms, is_ppt_cut, verify_cyril_separable_decomposition,
};
use causalkit::reproduce::phi_plus_process;
use causalkit::Result;

/// `(cyril is PPT, phi+ process is PPT, separable decomposition residual)`
pub fn run_example() -> Result<(bool, bool, f64)> {
    let (cyril_ppt, cyril_min) = is_ppt_cut(&build_cyril(), "B")?;
    println!("cyril:         PPT={cyril_ppt} min eig {cyril_min:.2e}");

    let (phi_ppt, phi_min) = is_ppt_cut(&phi_plus_process()?, "B")?;
    println!("phi+ ⊗ I ⊗ I:  PPT={phi_ppt} min eig {phi_min:.2}");

    let residual = verify_cyril_separable_decomposition();
    println!(
        "{} product terms, residual {residual:.1e}",
        cyril_separable_terms().len()
    );
    Ok((cyril_ppt, phi_ppt, residual))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
