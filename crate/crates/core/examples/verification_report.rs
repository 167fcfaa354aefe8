//! Runs two suites with a small draw count and prints the JSON summary.

use sharpineq::harness::{run_suite, Config, Suite};

pub fn run_example() -> sharpineq::Result<()> {
    let cfg = Config::from_toml_str("seed = 99\ndraws = 3\n[tolerances]\nquadrature = 1e-9\n")?;
    for suite in [Suite::Identities, Suite::WeakHR] {
        let r = run_suite(suite, &cfg)?;
        println!("{}: {}/{} passed, body hash {:016x}", r.suite, r.summary.passed, r.summary.total, r.body_hash()?);
        if let Some(c) = r.cases.first() {
            println!("{}", serde_json::to_string(c).unwrap_or_default());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> sharpineq::Result<()> {
    run_example()
}
