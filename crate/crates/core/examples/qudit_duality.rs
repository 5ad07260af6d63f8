//! Qudit Fourier and controlled-shift gates, the XOR relations they produce
//! on generalized Bell states, and duality at d = 3.

use causalkit::duality::{check_duality, controlled_shift, fourier, xor_precheck, Direction};
use causalkit::random::{random_dr_strategy, random_gyni_strategy, rng};
use causalkit::tensor::unitarity_deviation;
use causalkit::Result;

/// `(min XOR probability at d = 2, 3, worst gap at d = 3)`
pub fn run_example() -> Result<(f64, f64)> {
    for d in [2, 3, 4] {
        println!(
            "d={d}: |F F^dag - I| = {:.1e}, |CS CS^dag - I| = {:.1e}",
            unitarity_deviation(&fourier(d)?),
            unitarity_deviation(&controlled_shift(d)?)
        );
    }
    let pre = xor_precheck(2)?.min(xor_precheck(3)?);
    println!("xor relations hold with probability {pre:.12}");

    let mut worst = 0.0f64;
    for seed in 100..103 {
        let mut g = rng(seed);
        worst =
            worst.max(check_duality(&random_gyni_strategy(&mut g, 3)?, Direction::GyniToDr)?.gap());
        worst =
            worst.max(check_duality(&random_dr_strategy(&mut g, 3)?, Direction::DrToGyni)?.gap());
    }
    println!("d=3 worst gap {worst:.1e}");
    Ok((pre, worst))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
