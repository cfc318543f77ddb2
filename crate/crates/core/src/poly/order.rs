use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError};

/// Monomial orders. All orders first compare weighted degree inside each block,
/// so every order here is a multiplicative well-order when weights are positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermOrder {
    /// Weighted graded reverse lexicographic in the declared variable order.
    GrevLex,
    /// Pure lexicographic in the declared variable order.
    Lex,
    /// Block order: the first `k` variables form a grevlex block that dominates
    /// a grevlex block on the remaining variables. Used for elimination.
    Elimination(usize),
}

impl TermOrder {
    /// Compare two monomials of equal length. Callers guarantee the lengths match.
    pub fn compare(&self, weights: &[u32], a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match *self {
            TermOrder::GrevLex => grevlex(weights, a, b, 0, a.len()),
            TermOrder::Lex => lex(a, b),
            TermOrder::Elimination(k) => {
                let k = k.min(a.len());
                grevlex(weights, a, b, 0, k).then_with(|| grevlex(weights, a, b, k, a.len()))
            }
        }
    }
}

/// Checked comparison.
pub fn order_cmp(
    order: TermOrder,
    weights: &[u32],
    a: &Monomial,
    b: &Monomial,
) -> Result<Ordering, PolyError> {
    if a.nvars() != b.nvars() || a.nvars() != weights.len() {
        return Err(PolyError::VariableCountMismatch {
            left: a.nvars(),
            right: b.nvars(),
        });
    }
    Ok(order.compare(weights, a, b))
}

fn grevlex(weights: &[u32], a: &[u32], b: &[u32], start: usize, end: usize) -> Ordering {
    let deg = |m: &[u32]| -> u64 {
        (start..end).map(|i| m[i] as u64 * weights[i] as u64).sum()
    };
    match deg(a).cmp(&deg(b)) {
        Ordering::Equal => {}
        other => return other,
    }
    for i in (start..end).rev() {
        if a[i] != b[i] {
            // smaller exponent in the last differing variable wins
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

fn lex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x.cmp(y);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.iter().copied())
    }

    #[test]
    fn grevlex_examples() {
        let w = [1; 5];
        // x^2 vs xy with x > y > z > w > t
        assert_eq!(
            TermOrder::GrevLex.compare(&w, &m(&[2, 0, 0, 0, 0]), &m(&[1, 1, 0, 0, 0])),
            Ordering::Greater
        );
        // xz < y^2 in grevlex
        assert_eq!(
            TermOrder::GrevLex.compare(&w, &m(&[1, 0, 1, 0, 0]), &m(&[0, 2, 0, 0, 0])),
            Ordering::Less
        );
        let a = m(&[1, 2, 0, 1, 0]);
        assert_eq!(TermOrder::GrevLex.compare(&w, &a, &a), Ordering::Equal);
    }

    #[test]
    fn elimination_block_dominates() {
        let w = [1; 3];
        assert_eq!(
            TermOrder::Elimination(1).compare(&w, &m(&[1, 0, 0]), &m(&[0, 5, 5])),
            Ordering::Greater
        );
        assert_eq!(
            TermOrder::Elimination(1).compare(&w, &m(&[0, 2, 0]), &m(&[0, 1, 1])),
            Ordering::Greater
        );
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(order_cmp(TermOrder::Lex, &[1, 1], &m(&[1, 0]), &m(&[1, 0, 0])).is_err());
    }

    fn all_monomials(nvars: usize, maxdeg: u64) -> Vec<Monomial> {
        (0..=maxdeg)
            .flat_map(|d| Monomial::enumerate(&vec![1; nvars], d))
            .collect()
    }

    // brute-force order-axiom checker on all monomials of degree <= 3 in 3 variables
    #[test]
    fn order_axioms_exhaustive() {
        let w = [1u32; 3];
        let mons = all_monomials(3, 3);
        for order in [TermOrder::GrevLex, TermOrder::Lex, TermOrder::Elimination(1)] {
            for a in &mons {
                for b in &mons {
                    let ab = order.compare(&w, a, b);
                    assert_eq!(ab, order.compare(&w, b, a).reverse());
                    assert_eq!(ab == Ordering::Equal, a == b);
                    for c in &mons {
                        if ab == Ordering::Less && order.compare(&w, b, c) == Ordering::Less {
                            assert_eq!(order.compare(&w, a, c), Ordering::Less);
                        }
                        // multiplicativity
                        assert_eq!(order.compare(&w, &a.mul(c), &b.mul(c)), ab);
                    }
                }
                // 1 is the minimum (well-foundedness with positive grading)
                if !a.is_one() {
                    assert_eq!(order.compare(&w, a, &Monomial::one(3)), Ordering::Greater);
                }
            }
        }
    }
}
