//! End-to-end acceptance run: one printed line per criterion, failing
//! the test if any criterion fails or is skipped under the default
//! configuration.

use relhyp::{run_acceptance, AcceptanceConfig, Status};

#[test]
fn acceptance_criteria() {
    let cfg = AcceptanceConfig::default();
    let outcomes = run_acceptance(&cfg);
    let mut all_pass = true;
    for out in &outcomes {
        println!("{}", out.line());
        for d in &out.details {
            println!("    {d}");
        }
        // The default subject is in theorem scope: nothing may skip.
        all_pass &= out.status == Status::Pass;
    }
    assert!(all_pass, "acceptance criteria failed (see lines above)");
}
