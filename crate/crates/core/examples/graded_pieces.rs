//! Standard-monomial bases of graded pieces and coordinates in them.
//!
//! cargo run --example graded_pieces

use ezd::example::Example;
use ezd::poly::{Polynomial, Rational};
use num_traits::One;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ex = Example::new()?;
    println!("{:>3} {:>6} {:>6}", "d", "dim S", "dim R");
    for d in 0..=8 {
        println!("{:>3} {:>6} {:>6}", d, ex.s.graded_basis(d)?.dim(), ex.r.graded_basis(d)?.dim());
    }
    let r2 = ex.r.graded_basis(2)?;
    let names: Vec<String> = r2.monomials.iter().map(|m| Polynomial::term(ex.r.poly_ring(), Rational::one(), m.clone()).to_string()).collect();
    println!("\nR_2 basis: {}", names.join(", "));
    let z2 = ex.r.parse("z^2")?;
    println!("z^2 in R reduces to {z2}");
    println!("coordinates of z^2 in R_2: {:?}", ex.r.coordinates(&z2, 2)?.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    Ok(())
}
