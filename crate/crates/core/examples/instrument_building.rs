//! Building instruments from unitaries and measurements, and checking that
//! they sum to a channel.

use causalkit::instruments::{
    choi_of_unitary, coarse_grain, computational_basis, measure_prepare_instrument,
    validate_instrument, Instrument,
};
use causalkit::processes::pauli;
use causalkit::random::{random_instrument, rng};
use causalkit::tensor::WireLabel;
use causalkit::Result;

/// Largest CPTP residual among the instruments built here.
pub fn run_example() -> Result<f64> {
    let (i, o) = (WireLabel::qubit("X_I"), WireLabel::qubit("X_O"));
    let flip = choi_of_unitary(&pauli(1), i.clone(), o.clone())?;
    let unitary = Instrument::new(vec![i.clone()], vec![o.clone()], vec![flip])?;

    let z = computational_basis(2);
    let measure = measure_prepare_instrument(i.clone(), o.clone(), &z, &z)?;
    let coarse = coarse_grain(&measure, |_| 0, 1)?;

    let random = random_instrument(&mut rng(5), vec![i], vec![o], 4)?;

    let mut worst = 0.0f64;
    for (name, ins) in [
        ("X gate", &unitary),
        ("Z measure", &measure),
        ("coarse", &coarse),
        ("random", &random),
    ] {
        let r = validate_instrument(ins)?;
        println!(
            "{name:<10} outcomes {} cptp residual {:.1e} valid {}",
            ins.len(),
            r.max_residual(),
            r.valid
        );
        worst = worst.max(r.max_residual());
    }
    Ok(worst)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
