//! Runs every acceptance criterion once and prints one line per criterion,
//! followed by the probe evidence on mutant pairs. Exits nonzero on failure.

use std::process::ExitCode;

use khtree::verify::{probe_evidence, run_all, summary, FixtureSet, CRITERIA};

const SEED: u64 = 2024;

fn main() -> ExitCode {
    let fx = FixtureSet::builtin();
    let reports = run_all(&fx, SEED);
    print!("{}", summary(&reports));
    let mut ok = reports.len() == CRITERIA.len() && reports.iter().all(|r| r.passed);

    match probe_evidence(&fx) {
        Ok(evidence) => {
            for e in &evidence {
                println!(
                    "probe {:<16} compared {:>4}  agree {:>4}  sign {:>3}  other {:>3}  unmatched {}",
                    e.pair, e.compared, e.agreements, e.sign_differences, e.disagreements, e.unmatched_trees
                );
            }
            let informative = evidence.iter().filter(|e| e.compared > 0).count();
            println!("probe ran on {} pairs, {informative} with entries to compare", evidence.len());
            ok &= evidence.len() >= 3 && informative >= 3;
        }
        Err(e) => {
            println!("probe failed: {e}");
            ok = false;
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
