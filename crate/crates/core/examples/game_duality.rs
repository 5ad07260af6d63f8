//! Maps strategies between GYNI and Bell-state retrieval and checks that the
//! value survives.

use causalkit::duality::{check_duality, gyni_to_dr, Direction};
use causalkit::games::{cyril_gyni_strategy, eval_dr, pauli_y_baseline_strategy};
use causalkit::random::{random_dr_strategy, random_gyni_strategy, rng};
use causalkit::Result;

/// `(value of the Cyril strategy mapped to retrieval, worst random gap)`
pub fn run_example() -> Result<(f64, f64)> {
    let cyril = cyril_gyni_strategy();
    let cert = check_duality(&cyril, Direction::GyniToDr)?;
    println!(
        "cyril gyni {:.12} -> retrieval {:.12}",
        cert.source_value, cert.target_value
    );
    let dual = gyni_to_dr(&cyril)?;
    println!("  shared resources: {}", dual.resources.len());

    let back = check_duality(&pauli_y_baseline_strategy(), Direction::DrToGyni)?;
    println!(
        "pauli-y retrieval {:.6} -> gyni {:.6}",
        back.source_value, back.target_value
    );

    let mut worst = 0.0f64;
    for seed in 0..5 {
        let mut g = rng(seed);
        let a = check_duality(&random_gyni_strategy(&mut g, 2)?, Direction::GyniToDr)?;
        let b = check_duality(&random_dr_strategy(&mut g, 2)?, Direction::DrToGyni)?;
        println!("seed {seed}: {:.6} / {:.6}", a.source_value, b.source_value);
        worst = worst.max(a.gap()).max(b.gap());
    }
    println!("worst gap {worst:.1e}");
    Ok((eval_dr(&dual)?.value, worst))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
