//! Minimal graded free resolution of R/(y) and a check of a supplied window.
//!
//! cargo run --release --example resolution [dmax]

use ezd::example::Example;
use ezd::resolution::{minimal_resolution, verify_resolution_window, ModulePresentation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dmax: i64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(10);
    let ex = Example::new()?;
    let m = ModulePresentation::cyclic(&ex.r, &[ex.r.parse("y")?])?;
    let res = minimal_resolution(&ex.r, &m, 3, dmax)?;
    for step in &res.steps {
        println!(
            "F_{} = {}   ({:?} through degree {})",
            step.index,
            res.complex.module(step.index).unwrap(),
            step.status,
            step.certified_through
        );
    }
    let window = ex.resolution_window(&ex.r)?;
    let rep = verify_resolution_window(&window, &m, 8)?;
    println!("\nstated d1, d2, d3 through degree 8: {}", if rep.passed() { "pass" } else { "fail" });
    for f in &rep.failures {
        println!("  {f}");
    }
    Ok(())
}
