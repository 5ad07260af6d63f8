//! Checks the Cyril process and a few definite-order processes against the
//! process constraints and the causal-order constraints.

use causalkit::processes::{
    build_cyril, channel_process_a_before_b, check_order, maximally_mixed_process,
    validate_process, CausalOrder,
};
use causalkit::random::{random_channel, random_state, rng};
use causalkit::tensor::WireLabel;
use causalkit::Result;

/// `(cyril valid, cyril compatible with A<B, channel process compatible with A<B)`
pub fn run_example() -> Result<(bool, bool, bool)> {
    let w = build_cyril();
    let r = validate_process(&w)?;
    println!("cyril: min eigenvalue {:.4}", r.min_eigenvalue);
    for (name, v) in &r.constraint_residuals {
        println!("  {name:<14} {v:.1e}");
    }

    let a_first = check_order(&w, CausalOrder::AbeforeB)?;
    println!("cyril fits A<B: {}", a_first.valid);

    let mut g = rng(11);
    let rho = random_state(&mut g, vec![WireLabel::qubit("A_I")]);
    let ch = random_channel(&mut g, WireLabel::qubit("A_O"), WireLabel::qubit("B_I"))?;
    let ab = channel_process_a_before_b(&rho, &ch, 2)?;
    let ab_ok = check_order(&ab, CausalOrder::AbeforeB)?.valid;
    println!("channel process fits A<B: {ab_ok}");

    let mixed = maximally_mixed_process(3)?;
    println!("I/9 at d=3 valid: {}", validate_process(&mixed)?.valid);
    Ok((r.valid, a_first.valid, ab_ok))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
