//! Builds psi and phi on a resolution window: lift to S, divide d~^2 by x,
//! then divide the commutator by y, and reduce back to R.
//!
//! cargo run --release --example operators

use ezd::example::Example;
use ezd::operators::{LiftPolicy, OperatorBuilder};
use ezd::resolution::extend_resolution;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ex = Example::new()?;
    let b = OperatorBuilder::new(&ex.quotient, &ex.f, &ex.g)?;
    let t = ex.r.parse("t")?;

    let f = ex.resolution_window(&ex.r)?;
    let bundle = b.build(&f, std::slice::from_ref(&t), LiftPolicy::Canonical)?;
    println!("psi~ internal degree {:?}, phi~ internal degree {:?}", bundle.psi_tilde.internal_degree, bundle.phi_tilde.internal_degree);
    for (i, m) in &bundle.psi_tilde.components {
        println!("psi~_{i} = {}", m.matrix);
    }
    for (i, m) in &bundle.phi_tilde.components {
        println!("phi~_{i} = {}", m.matrix);
    }
    for (name, v) in &bundle.chain_checks {
        println!("{name} chain map on F_0..F_3: {v:?}");
    }

    // One more syzygy step gives phi an equation to satisfy.
    let f4 = extend_resolution(&f, 4, 9)?.complex;
    let bundle = b.build(&f4, &[t], LiftPolicy::Randomized(7))?;
    println!("\nF_4 = {}", f4.module(4).unwrap());
    for (name, v) in &bundle.chain_checks {
        println!("{name} chain map on F_0..F_4 (random lift): {v:?}");
    }
    Ok(())
}
