// Differential testing: fuzzed scripts checked against the naive oracle and
// any external FFA solver found on PATH.

use std::time::Duration;

use ffa::conway::ConwayCache;
use ffa::interop::{fuzz_corpus, fuzz_generate, run_diff, DiffClass, DiffOptions, ExternalSolverConfig, FuzzParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cache = ConwayCache::default();
    let params = FuzzParams::default();
    println!("seed 42:\n{}", fuzz_generate(42, &params)?);

    let items = fuzz_corpus(0..50, &params)?;
    let opts = DiffOptions { internal_only: true, ..DiffOptions::default() };
    let report = run_diff(&items, &opts, &cache);
    let text = report.to_text();
    print!("{}", &text[text.find("total").unwrap_or(0)..]);
    assert!(!report.has_mismatch());

    let solvers = ExternalSolverConfig::detect(Duration::from_secs(5));
    if solvers.is_empty() {
        println!("no external solver found; skipping");
        return Ok(());
    }
    let opts = DiffOptions { solvers, ..DiffOptions::default() };
    let report = run_diff(&items, &opts, &cache);
    print!("{}", report.to_text());
    assert_eq!(report.count(DiffClass::VerdictMismatch), 0);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
