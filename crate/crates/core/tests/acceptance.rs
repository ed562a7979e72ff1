//! Every acceptance criterion at its stated tolerance and budget, one
//! PASS/FAIL line each. Exits nonzero if any fails.
//!
//! `QHC_ACCEPTANCE` (comma separated) restricts the run to matching
//! criteria.

use qhc::acceptance::{criteria, run_criteria, McBudget};
use qhc::ring::rational::binom;

fn main() {
    qhc::cli::configure_threads();
    let filters: Vec<String> = std::env::var("QHC_ACCEPTANCE")
        .map(|v| v.split(',').map(str::to_owned).collect())
        .unwrap_or_default();
    let results = run_criteria(criteria(binom, Some(McBudget::default())), &filters, |r| println!("{r}"));
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
