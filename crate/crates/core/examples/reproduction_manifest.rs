//! Recomputes the headline numbers and reports each against its known
//! value.

use causalkit::reproduce::{run_manifest, ReproductionRecord, Status};

pub fn run_example() -> Vec<ReproductionRecord> {
    let records = run_manifest(causalkit::TOL);
    for r in &records {
        let tag = if r.status == Status::Pass {
            "ok  "
        } else {
            "FAIL"
        };
        println!("{tag} {:<22} {}", r.claim_id, r.computed.display());
    }
    records
}

fn main() {
    let failed = run_example()
        .iter()
        .filter(|r| r.status == Status::Fail)
        .count();
    std::process::exit(if failed == 0 { 0 } else { 1 });
}
