//! Runs every acceptance criterion with its default configuration, prints one
//! line per criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use corput_core::harness::{run_suite, ExperimentConfig, Suite};

struct Criterion {
    number: u32,
    suite: Suite,
    budget: Duration,
}

const fn c(number: u32, suite: Suite, secs: u64) -> Criterion {
    Criterion {
        number,
        suite,
        budget: Duration::from_secs(secs),
    }
}

const CRITERIA: [Criterion; 12] = [
    c(1, Suite::TEquiv, 60),
    c(2, Suite::TMeas, 30),
    c(3, Suite::Sublevel8ek, 60),
    c(4, Suite::Quantile4e, 30),
    c(5, Suite::DividedDiff, 5),
    c(6, Suite::Krug, 60),
    c(7, Suite::Mixture, 10),
    c(8, Suite::Vdc1d, 120),
    c(9, Suite::MainReg, 15 * 60),
    c(10, Suite::CwMain, 15 * 60),
    c(11, Suite::IndDeg, 5 * 60),
    c(12, Suite::TvK, 2 * 60),
];

fn main() -> ExitCode {
    // `cargo test -- <filter>` selects criteria by number or suite name.
    let filters: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    let mut ran = 0;
    for cr in &CRITERIA {
        let name = cr.suite.name();
        if !filters.is_empty()
            && !filters
                .iter()
                .any(|f| *f == cr.number.to_string() || name.contains(f.as_str()))
        {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let result = run_suite(&ExperimentConfig::new(cr.suite));
        let elapsed = start.elapsed();
        let line = match result {
            Ok(report) => {
                let bad: Vec<&str> = report
                    .cases
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| c.label.as_str())
                    .collect();
                let in_budget = elapsed <= cr.budget;
                let pass = report.passed() && in_budget;
                if !pass {
                    failed += 1;
                }
                let mut line = format!(
                    "criterion {:>2} {:<13} {}  {}/{} cases  {:.1}s of {}s",
                    cr.number,
                    name,
                    if pass { "PASS" } else { "FAIL" },
                    report.cases.len() - bad.len(),
                    report.cases.len(),
                    elapsed.as_secs_f64(),
                    cr.budget.as_secs(),
                );
                if !in_budget {
                    line.push_str("  over budget");
                }
                for b in bad.iter().take(4) {
                    line.push_str(&format!("\n    failed: {b}"));
                }
                if bad.len() > 4 {
                    line.push_str(&format!("\n    ... and {} more", bad.len() - 4));
                }
                line
            }
            Err(e) => {
                failed += 1;
                format!("criterion {:>2} {:<13} FAIL  error: {e}", cr.number, name)
            }
        };
        println!("{line}");
    }
    println!("\nacceptance: {} passed, {failed} failed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
