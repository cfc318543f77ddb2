//! Checks that two elements form an exact pair of zero divisors, then shows a
//! pair that does not.
//!
//! cargo run --example exact_pair

use ezd::example::{self, Example};
use ezd::ring::{check_exact_pair, PresentedRing};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ex = Example::new()?;
    let rep = check_exact_pair(&ex.s, &ex.f, &ex.g)?;
    println!("S = Q[x,y,z,w,t] / ({})", example::RELATIONS.join(", "));
    println!("f = {}, g = {}", ex.f, ex.g);
    println!("exact pair: {}", rep.exact);
    println!("  ann(f) generated by {:?}", rep.ann_x.iter().map(|p| p.to_string()).collect::<Vec<_>>());
    println!("  ann(g) generated by {:?}", rep.ann_y.iter().map(|p| p.to_string()).collect::<Vec<_>>());

    // In Q[u,v]/(uv) the variables themselves are an exact pair.
    let small = PresentedRing::make_ring("T", &[("u", 1), ("v", 1)], &["u*v"], true)?;
    let (u, v) = (small.parse_elem("u")?, small.parse_elem("v")?);
    println!("\n(u, v) in Q[u,v]/(uv): {}", check_exact_pair(&small, &u, &v)?.exact);

    let bad = ex.s.parse_elem("x^2+y^2")?;
    let rep = check_exact_pair(&ex.s, &bad, &ex.g)?;
    println!("(x^2+y^2, g) in S: {}", rep.exact);
    for f in rep.failures {
        println!("  {f}");
    }
    Ok(())
}
