//! Annihilator ideals in a quotient ring, computed by an ideal quotient and
//! pruned to minimal generators.
//!
//! cargo run --example annihilator

use ezd::example::{self, Example};
use ezd::ring::annihilator;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ex = Example::new()?;
    let g = ex.r.elem(ex.g.rep())?;
    let gens = annihilator(&ex.r, &g)?;
    println!("R = S/(f); ann_R(g) is generated by:");
    for p in &gens {
        println!("  {p}");
    }
    let stated: Vec<_> = example::ANN_G.iter().map(|s| ex.r.parse(s)).collect::<Result<_, _>>()?;
    println!("equals (t, y^2, z^2, w^2): {}", ex.r.ideals_equal(&gens, &stated));

    let y = ex.r.parse_elem("y")?;
    let ann_y: Vec<String> = annihilator(&ex.r, &y)?.iter().map(|p| p.to_string()).collect();
    println!("ann_R(y) = ({})", ann_y.join(", "));
    Ok(())
}
