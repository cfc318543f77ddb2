//! Parses and runs a job file, printing the JSON report.
//!
//! cargo run --release --example job_file [path]

use ezd::job::{parse_jobfile, run};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/jobs/example_s4.job").to_string());
    let job = parse_jobfile(&std::fs::read_to_string(&path)?)?;
    println!("{job}");
    let report = run(&job);
    eprint!("{}", report.summary());
    println!("{}", report.to_json());
    Ok(())
}
