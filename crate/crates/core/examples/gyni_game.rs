//! Guess-your-neighbour's-input with the Cyril process, compared with a
//! one-way strategy.

use causalkit::games::{
    cyril_gyni_strategy, cyril_gyni_strategy_as_printed, eval_gyni, one_way_gyni_strategy,
};
use causalkit::Result;

/// Cyril value.
pub fn run_example() -> Result<f64> {
    let v = eval_gyni(&cyril_gyni_strategy())?;
    for t in &v.terms {
        println!("x = {:?}: {:.6}", t.inputs, t.probability);
    }
    println!("cyril:       {:.12}", v.value);
    println!(
        "closed form: {:.12}",
        5.0 / 16.0 * (1.0 + std::f64::consts::FRAC_1_SQRT_2)
    );

    let one_way = eval_gyni(&one_way_gyni_strategy())?.value;
    println!("one-way:     {one_way:.12}");

    // Input-1 instruments that re-prepare the measured value instead of |0>.
    let literal = eval_gyni(&cyril_gyni_strategy_as_printed())?.value;
    println!("re-prepare:  {literal:.12}");
    Ok(v.value)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
