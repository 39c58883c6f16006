//! Runs named verification suites in quick mode and prints each check.
//!
//! `cargo run --release --example verify -- [suite,...]`

use subheat::suites::{resolve, SuiteOptions};

fn main() -> subheat::Result<()> {
    let names = std::env::args().nth(1).unwrap_or_else(|| "expansion,oracle,critical".into());
    let mut opts = SuiteOptions::new(1);
    opts.quick = true;
    for name in names.split(',') {
        for suite in resolve(name)? {
            let report = suite.run(&opts)?;
            println!("{} ({}): {} in {:.1}s", suite.name, suite.summary, if report.pass { "pass" } else { "FAIL" }, report.wall_time);
            for c in &report.checks {
                println!("  [{}] {}: {:.6} vs {:.6}", if c.pass { "ok" } else { "x" }, c.label, c.achieved, c.target);
            }
        }
    }
    Ok(())
}
