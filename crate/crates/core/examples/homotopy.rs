//! Decides null-homotopy of phi and psi_t on a window and replays the
//! infeasibility witnesses.
//!
//! cargo run --release --example homotopy

use ezd::example::Example;
use ezd::homotopy::{null_homotopy, HomotopyOutcome, HomotopyProblem};
use ezd::operators::{LiftPolicy, OperatorBuilder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ex = Example::new()?;
    let b = OperatorBuilder::new(&ex.quotient, &ex.f, &ex.g)?;
    let f = ex.resolution_window(&ex.r)?;
    let (t, y2) = (ex.r.parse("t")?, ex.r.parse("y^2")?);
    let bundle = b.build(&f, &[t.clone(), y2.clone()], LiftPolicy::Canonical)?;

    for (name, g) in [("phi", bundle.phi.clone()), ("psi_t", bundle.psi_for(&t)), ("psi_{y^2}", bundle.psi_for(&y2))] {
        let prob = HomotopyProblem::new(&g, &f, (0, 3));
        match null_homotopy(&prob)? {
            HomotopyOutcome::NotNullHomotopic(cert) => {
                println!(
                    "{name}: not null-homotopic; witness on {} of {} equations, replay {}",
                    cert.support().len(),
                    cert.system.matrix.nrows(),
                    cert.verify_against(&prob)?
                );
            }
            HomotopyOutcome::NullHomotopic(cert) => {
                println!("{name}: null-homotopic on window 0:3, residual check {}", cert.verify(&prob)?);
                for (i, m) in &cert.theta.components {
                    if !m.matrix.is_zero() {
                        println!("  theta_{i} = {}", m.matrix);
                    }
                }
            }
        }
    }
    Ok(())
}
