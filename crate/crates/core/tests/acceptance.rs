//! Runs without the libtest harness so the per-criterion lines are always shown.

use oligorep::cli::selftest::{run_criterion, CRITERIA};
use oligorep::config::Limits;

fn main() {
    let limits = Limits::default();
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let o = run_criterion(id, &limits);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {} ({:.2}s): {}", o.id, o.name, o.seconds, o.detail);
        if !o.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {CRITERIA} acceptance criteria pass");
}
