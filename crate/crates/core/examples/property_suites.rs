//! Randomized checks of the differentiation and integration laws.
//!
//! `cargo run --example property_suites -- 200 7` runs 200 trials with seed 7.

use tscale_frac::check::{run_suite, CheckConfig, Suite};

fn main() -> tscale_frac::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(50);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let cfg = CheckConfig::new(seed, trials);
    let mut ok = true;
    for suite in Suite::ALL {
        let r = run_suite(suite, &cfg)?;
        ok &= r.passed();
        println!(
            "{:<20} {:>5} checks  max residual {:.2e}  tol {:.0e}  {}",
            suite.name(),
            r.checks,
            r.max_residual,
            r.tolerance,
            if r.passed() { "ok" } else { "FAILED" }
        );
        for f in r.failures.iter().take(3) {
            println!("    {f:?}");
        }
    }
    std::process::exit(if ok { 0 } else { 1 });
}
