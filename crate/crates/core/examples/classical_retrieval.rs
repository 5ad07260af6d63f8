//! Exact success probabilities of the tripartite classical retrieval task
//! and its flagged variant.

use causalkit::classical::{
    e_bw, ftdr_success, tdr_breakdown, tdr_success_definite_order, tdr_success_no_collab,
    two_copy_decode_success, FreeBit, Layout, Prob, TdrStrategy,
};
use causalkit::Result;

/// `(cyclic process value, definite order value, flagged definite order value)`
pub fn run_example() -> Result<(Prob, Prob, Prob)> {
    println!("o -> e_bw(o)");
    for n in 0..8u8 {
        let o = [n >> 2 & 1, n >> 1 & 1, n & 1];
        println!("{o:?} -> {:?}", e_bw(o));
    }

    let b = tdr_breakdown(TdrStrategy::Ebw, Layout::Clockwise, FreeBit::FirstListed)?;
    println!("cyclic process: {} over {} cases", b.total, b.cases);
    if let Some(p) = b.p_majority_zero {
        println!("  majority-0 branch taken with probability {p}");
    }
    let definite = tdr_success_definite_order();
    println!("definite order: {definite}");
    println!("no collaboration: {}", tdr_success_no_collab());

    let flagged = ftdr_success(TdrStrategy::DefiniteOrder)?;
    println!(
        "flagged, definite order: {} ({} and {})",
        flagged.total, flagged.flag0, flagged.flag1
    );
    println!("flagged, cyclic: {}", ftdr_success(TdrStrategy::Ebw)?.total);
    println!("two copies, local decoding: {}", two_copy_decode_success());
    Ok((b.total, definite, flagged.total))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
