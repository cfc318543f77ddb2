use std::fmt;

use smallvec::SmallVec;

/// Exponent vector of a monomial. The length is fixed by the ambient ring.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents<I: IntoIterator<Item = u32>>(exponents: I) -> Self {
        Monomial(exponents.into_iter().collect())
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Weighted degree with the given variable degrees.
    pub fn degree(&self, weights: &[u32]) -> u64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(
            self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|&e| e * k).collect())
    }

    /// All monomials of weighted degree exactly `degree`.
    pub fn enumerate(weights: &[u32], degree: u64) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; weights.len()];
        enumerate_rec(weights, 0, degree, &mut current, &mut out);
        out
    }

    pub(crate) fn display_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (e, name) in self.0.iter().zip(names) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

fn enumerate_rec(
    weights: &[u32],
    index: usize,
    remaining: u64,
    current: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if index == weights.len() {
        if remaining == 0 {
            out.push(Monomial::from_exponents(current.iter().copied()));
        }
        return;
    }
    let w = weights[index] as u64;
    let mut e = 0u64;
    while e * w <= remaining {
        current[index] = e as u32;
        enumerate_rec(weights, index + 1, remaining - e * w, current, out);
        e += 1;
    }
    current[index] = 0;
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisibility_and_lcm() {
        let a = Monomial::from_exponents([2, 1, 0]);
        let b = Monomial::from_exponents([1, 3, 0]);
        assert!(!a.divides(&b));
        assert_eq!(a.lcm(&b), Monomial::from_exponents([2, 3, 0]));
        assert_eq!(a.lcm(&b).div(&a), Some(Monomial::from_exponents([0, 2, 0])));
        assert!(!a.is_coprime(&b));
        assert!(Monomial::from_exponents([1, 0, 0]).is_coprime(&Monomial::from_exponents([0, 0, 4])));
    }

    #[test]
    fn enumeration_counts() {
        // C(d + n - 1, n - 1) monomials of degree d in n standard-graded variables
        assert_eq!(Monomial::enumerate(&[1; 5], 2).len(), 15);
        assert_eq!(Monomial::enumerate(&[1; 3], 3).len(), 10);
        assert_eq!(Monomial::enumerate(&[2, 1], 3).len(), 2);
        assert_eq!(Monomial::enumerate(&[1; 4], 0).len(), 1);
    }
}
