//! Labeled operators: products, partial traces and partial transposes.

use causalkit::tensor::{
    c, kron, min_eigenvalue, partial_trace, partial_transpose, permute_wires, WireLabel,
};
use causalkit::{LabeledOperator, Result};

/// Returns the reduced state of `phi+` and the smallest eigenvalue of its
/// partial transpose.
pub fn run_example() -> Result<(LabeledOperator, f64)> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let ab = vec![WireLabel::qubit("A"), WireLabel::qubit("B")];
    let phi = LabeledOperator::from_ket(ab, &[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)])?;

    let reduced = partial_trace(&phi, &["B"])?;
    println!("Tr_B phi+ =\n{}", reduced.data());

    let pt = partial_transpose(&phi, &["B"])?;
    let lowest = min_eigenvalue(&pt)?;
    println!("min eig of phi+^T_B = {lowest:.3}");

    let zero = LabeledOperator::diagonal(vec![WireLabel::qubit("C")], &[1.0, 0.0])?;
    let big = kron(&phi, &zero)?;
    let moved = permute_wires(&big, &["C", "B", "A"])?;
    println!("wires after permutation: {:?}", moved.wire_names());
    Ok((reduced, lowest))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
