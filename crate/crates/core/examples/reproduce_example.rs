//! Runs every check of the worked example and prints one line per item.
//!
//! cargo run --release --example reproduce_example [dmax]

use ezd::job::{reproduce_example, ExampleOptions};

fn main() {
    let dmax = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let report = reproduce_example(&ExampleOptions { dmax, ..Default::default() });
    print!("{}", report.summary());
    std::process::exit(report.exit_code());
}
