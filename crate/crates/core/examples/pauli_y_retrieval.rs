//! Bell-state retrieval with local Pauli-Y measurements and no signalling.

use causalkit::games::{eval_dr, pauli_y_baseline_strategy, pauli_y_table, YTableRow};
use causalkit::Result;

pub fn run_example() -> Result<(f64, Vec<YTableRow>)> {
    let s = pauli_y_baseline_strategy();
    let rows = pauli_y_table(&s)?;
    let ud = |up: bool| if up { "up" } else { "down" };
    println!("x   alice bob   p     result");
    for r in &rows {
        println!(
            "{}{}  {:<5} {:<5} {:.3} {}",
            r.x[0],
            r.x[1],
            ud(r.alice_up),
            ud(r.bob_up),
            r.probability,
            if r.success { "success" } else { "failure" }
        );
    }
    let value = eval_dr(&s)?.value;
    println!("value {value:.12}");
    Ok((value, rows))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
