//! A filtered run of the acceptance suite.

use cdh::analysis::acceptance::run_all;

fn main() {
    let filter = std::env::args().nth(1).unwrap_or_else(|| "gap".to_string());
    for outcome in run_all(Some(&filter)) {
        println!("{}", outcome.line());
    }
}
