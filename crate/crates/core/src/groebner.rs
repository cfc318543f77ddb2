//! Buchberger's algorithm with cofactor tracking, normal forms, ideal
//! membership, ideal quotients and certified division modulo an ideal.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::poly::{Monomial, PolyRing, Polynomial, Rational, TermOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("polynomial does not belong to the ideal's ambient ring")]
    RingMismatch,
    #[error("cannot take the quotient by the zero polynomial")]
    ZeroDivisor,
    #[error("divisor `{0}` lies in the ideal")]
    DegenerateDivisor(String),
    #[error("basis was computed without cofactor tracking")]
    Untracked,
}

/// Generators of an ideal in a free polynomial ring.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealPresentation {
    ring: Arc<PolyRing>,
    generators: Vec<Polynomial>,
}

impl IdealPresentation {
    /// Drops zero generators and exact duplicates.
    pub fn new(ring: &Arc<PolyRing>, generators: Vec<Polynomial>) -> Result<Self, GroebnerError> {
        let mut gens: Vec<Polynomial> = Vec::with_capacity(generators.len());
        for g in generators {
            if !PolyRing::same(g.ring(), ring) {
                return Err(GroebnerError::RingMismatch);
            }
            if !g.is_zero() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(IdealPresentation {
            ring: ring.clone(),
            generators: gens,
        })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        IdealPresentation {
            ring: ring.clone(),
            generators: Vec::new(),
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// The ideal with one more generator appended (kept even if redundant).
    pub fn with_generator(&self, p: Polynomial) -> Result<Self, GroebnerError> {
        let mut gens = self.generators.clone();
        gens.push(p);
        IdealPresentation::new(&self.ring, gens)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(|g| g.is_homogeneous())
    }
}

/// Order in which critical pairs are processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStrategy {
    /// Smallest sugar degree first, then smallest lcm; ties by index.
    Normal,
    /// Uniformly random pending pair, seeded. The reduced basis is unique, so
    /// the result must agree with `Normal`.
    Shuffled(u64),
}

/// Reduced Gröbner basis. When tracked, `cofactors[k][j]` is the coefficient of
/// the original generator `j` in the expression of `elements[k]`.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    generators: Vec<Polynomial>,
    elements: Vec<Polynomial>,
    cofactors: Option<Vec<Vec<Polynomial>>>,
}

/// Quotient terms produced by a reduction, per basis element.
type Quotients = Vec<Vec<(Monomial, Rational)>>;

fn reduce(p: &Polynomial, basis: &[Polynomial], skip: Option<usize>) -> (Polynomial, Quotients) {
    let ring = p.ring().clone();
    let mut rest = p.clone();
    let mut remainder = Vec::new();
    let mut quotients: Quotients = vec![Vec::new(); basis.len()];
    'outer: while let Some((m, c)) = rest.leading_term() {
        for (k, b) in basis.iter().enumerate() {
            if Some(k) == skip {
                continue;
            }
            let (lm, lc) = b.leading_term().expect("basis elements are nonzero");
            if let Some(q) = m.div(lm) {
                let k_c = c / lc;
                rest = rest.add_scaled(b, &-k_c.clone(), &q);
                quotients[k].push((q, k_c));
                continue 'outer;
            }
        }
        remainder.push(rest.pop_leading().unwrap());
    }
    (Polynomial::from_sorted_terms(&ring, remainder), quotients)
}

fn combine(ring: &Arc<PolyRing>, terms: Vec<(Monomial, Rational)>) -> Polynomial {
    Polynomial::from_terms(ring, terms)
}

/// `base - sum_k q_k * rows[k]`, entrywise over cofactor vectors.
fn subtract_cofactors(
    ring: &Arc<PolyRing>,
    base: &[Polynomial],
    quotients: &Quotients,
    rows: &[Vec<Polynomial>],
) -> Vec<Polynomial> {
    let mut out = base.to_vec();
    for (k, q) in quotients.iter().enumerate() {
        if q.is_empty() {
            continue;
        }
        let q = combine(ring, q.clone());
        for (j, c) in rows[k].iter().enumerate() {
            if !c.is_zero() {
                out[j] = &out[j] - &(&q * c);
            }
        }
    }
    out
}

struct Builder {
    ring: Arc<PolyRing>,
    track: bool,
    elements: Vec<Polynomial>,
    cofactors: Vec<Vec<Polynomial>>,
    sugar: Vec<u64>,
    pending: BTreeSet<(usize, usize)>,
}

impl Builder {
    fn push(&mut self, p: Polynomial, cof: Vec<Polynomial>, sugar: u64) {
        let lc = p.leading_coeff().unwrap().recip();
        let p = p.scale(&lc);
        let cof = if self.track {
            cof.iter().map(|c| c.scale(&lc)).collect()
        } else {
            Vec::new()
        };
        let new = self.elements.len();
        for i in 0..new {
            self.pending.insert((i, new));
        }
        self.elements.push(p);
        self.cofactors.push(cof);
        self.sugar.push(sugar);
    }

    /// Sugar degree of the S-pair `(i, j)`.
    fn pair_sugar(&self, i: usize, j: usize) -> u64 {
        let w = self.ring.weights();
        let lcm = self.lm(i).lcm(self.lm(j));
        let si = self.sugar[i] + lcm.degree(w) - self.lm(i).degree(w);
        let sj = self.sugar[j] + lcm.degree(w) - self.lm(j).degree(w);
        si.max(sj)
    }

    fn reduce_tracked(&self, p: &Polynomial, cof: &[Polynomial]) -> (Polynomial, Vec<Polynomial>) {
        let (rem, quotients) = reduce(p, &self.elements, None);
        let cof = if self.track {
            subtract_cofactors(&self.ring, cof, &quotients, &self.cofactors)
        } else {
            Vec::new()
        };
        (rem, cof)
    }

    fn lm(&self, i: usize) -> &Monomial {
        self.elements[i].leading_monomial().unwrap()
    }

    fn chain_criterion(&self, i: usize, j: usize, lcm: &Monomial) -> bool {
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        (0..self.elements.len()).any(|k| {
            k != i
                && k != j
                && self.lm(k).divides(lcm)
                && !self.pending.contains(&key(i, k))
                && !self.pending.contains(&key(j, k))
        })
    }

    fn s_polynomial(&self, i: usize, j: usize, lcm: &Monomial) -> (Polynomial, Vec<Polynomial>) {
        let (gi, gj) = (&self.elements[i], &self.elements[j]);
        // elements are monic
        let ui = lcm.div(gi.leading_monomial().unwrap()).unwrap();
        let uj = lcm.div(gj.leading_monomial().unwrap()).unwrap();
        let one = Rational::one();
        let s = gi.mul_term(&one, &ui).add_scaled(gj, &-one.clone(), &uj);
        let cof = if self.track {
            self.cofactors[i]
                .iter()
                .zip(&self.cofactors[j])
                .map(|(a, b)| a.mul_term(&one, &ui).add_scaled(b, &-one.clone(), &uj))
                .collect()
        } else {
            Vec::new()
        };
        (s, cof)
    }
}

impl GroebnerBasis {
    /// Reduced Gröbner basis with cofactors, normal pair selection.
    pub fn compute(ideal: &IdealPresentation) -> GroebnerBasis {
        Self::compute_with(ideal, true, PairStrategy::Normal)
    }

    pub fn compute_with(ideal: &IdealPresentation, track: bool, strategy: PairStrategy) -> GroebnerBasis {
        let ring = ideal.ring.clone();
        let n = ideal.generators.len();
        let mut b = Builder {
            ring: ring.clone(),
            track,
            elements: Vec::new(),
            cofactors: Vec::new(),
            sugar: Vec::new(),
            pending: BTreeSet::new(),
        };
        for (j, g) in ideal.generators.iter().enumerate() {
            let unit: Vec<Polynomial> = if track {
                (0..n)
                    .map(|k| {
                        if k == j {
                            Polynomial::one(&ring)
                        } else {
                            Polynomial::zero(&ring)
                        }
                    })
                    .collect()
            } else {
                Vec::new()
            };
            let (rem, cof) = b.reduce_tracked(g, &unit);
            if !rem.is_zero() {
                let sugar = g.degree().unwrap_or(0);
                b.push(rem, cof, sugar);
            }
        }

        let mut rng = match strategy {
            PairStrategy::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            PairStrategy::Normal => None,
        };
        while !b.pending.is_empty() {
            let (i, j) = match rng.as_mut() {
                Some(rng) => {
                    let all: Vec<_> = b.pending.iter().copied().collect();
                    *all.choose(rng).unwrap()
                }
                None => *b
                    .pending
                    .iter()
                    .min_by(|&&(a1, b1), &&(a2, b2)| {
                        let l1 = b.lm(a1).lcm(b.lm(b1));
                        let l2 = b.lm(a2).lcm(b.lm(b2));
                        b.pair_sugar(a1, b1)
                            .cmp(&b.pair_sugar(a2, b2))
                            .then(ring.cmp(&l1, &l2))
                            .then((a1, b1).cmp(&(a2, b2)))
                    })
                    .unwrap(),
            };
            b.pending.remove(&(i, j));
            let (lmi, lmj) = (b.lm(i), b.lm(j));
            if lmi.is_coprime(lmj) {
                continue;
            }
            let lcm = lmi.lcm(lmj);
            if b.chain_criterion(i, j, &lcm) {
                continue;
            }
            let sugar = b.pair_sugar(i, j);
            let (s, cof) = b.s_polynomial(i, j, &lcm);
            let (rem, cof) = b.reduce_tracked(&s, &cof);
            if !rem.is_zero() {
                b.push(rem, cof, sugar);
            }
        }

        let (elements, cofactors) = interreduce(&ring, b.elements, b.cofactors, track);
        GroebnerBasis {
            ring,
            generators: ideal.generators.clone(),
            elements,
            cofactors: if track { Some(cofactors) } else { None },
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn cofactors(&self) -> Option<&[Vec<Polynomial>]> {
        self.cofactors.as_deref()
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.elements.iter().map(|e| e.leading_monomial().unwrap())
    }

    /// True when the basis generates the whole ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.elements.iter().any(|e| e.is_constant() && !e.is_zero())
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading_monomials().any(|lm| lm.divides(m))
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        assert!(PolyRing::same(p.ring(), &self.ring), "normal form across rings");
        reduce(p, &self.elements, None).0
    }

    pub fn try_normal_form(&self, p: &Polynomial) -> Result<Polynomial, GroebnerError> {
        if !PolyRing::same(p.ring(), &self.ring) {
            return Err(GroebnerError::RingMismatch);
        }
        Ok(reduce(p, &self.elements, None).0)
    }

    /// Returns `(remainder, c)` with `p = sum_j c_j * generator_j + remainder`.
    pub fn normal_form_with_cofactors(
        &self,
        p: &Polynomial,
    ) -> Result<(Polynomial, Vec<Polynomial>), GroebnerError> {
        if !PolyRing::same(p.ring(), &self.ring) {
            return Err(GroebnerError::RingMismatch);
        }
        let rows = self.cofactors.as_ref().ok_or(GroebnerError::Untracked)?;
        let (rem, quotients) = reduce(p, &self.elements, None);
        let zero: Vec<Polynomial> = vec![Polynomial::zero(&self.ring); self.generators.len()];
        let neg = subtract_cofactors(&self.ring, &zero, &quotients, rows);
        Ok((rem, neg.iter().map(|c| -c).collect()))
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Every element equals the combination of generators given by its cofactors.
    pub fn verify_cofactors(&self) -> bool {
        let Some(rows) = &self.cofactors else {
            return false;
        };
        self.elements.iter().zip(rows).all(|(e, row)| {
            let mut acc = Polynomial::zero(&self.ring);
            for (c, g) in row.iter().zip(&self.generators) {
                acc = &acc + &(c * g);
            }
            &acc == e
        })
    }

    /// Buchberger's criterion: every S-polynomial reduces to zero, and every
    /// original generator lies in the span.
    pub fn verify_criterion(&self) -> bool {
        for i in 0..self.elements.len() {
            for j in i + 1..self.elements.len() {
                let (gi, gj) = (&self.elements[i], &self.elements[j]);
                let (li, lj) = (gi.leading_monomial().unwrap(), gj.leading_monomial().unwrap());
                let lcm = li.lcm(lj);
                let s = gi
                    .mul_term(&gi.leading_coeff().unwrap().recip(), &lcm.div(li).unwrap())
                    .add_scaled(gj, &-gj.leading_coeff().unwrap().recip(), &lcm.div(lj).unwrap());
                if !self.normal_form(&s).is_zero() {
                    return false;
                }
            }
        }
        self.generators.iter().all(|g| self.contains(g))
    }

    /// Reduced: monic, no leading monomial divides a term of another element.
    pub fn is_reduced(&self) -> bool {
        self.elements.iter().enumerate().all(|(i, e)| {
            e.leading_coeff().map(|c| c.is_one()).unwrap_or(false)
                && e.terms().iter().all(|(m, _)| {
                    self.elements
                        .iter()
                        .enumerate()
                        .all(|(k, o)| k == i || !o.leading_monomial().unwrap().divides(m))
                })
        })
    }
}

fn interreduce(
    ring: &Arc<PolyRing>,
    elements: Vec<Polynomial>,
    cofactors: Vec<Vec<Polynomial>>,
    track: bool,
) -> (Vec<Polynomial>, Vec<Vec<Polynomial>>) {
    // minimalize
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..elements.len() {
        let lm = elements[i].leading_monomial().unwrap();
        let redundant = (0..elements.len()).any(|k| {
            if k == i {
                return false;
            }
            let other = elements[k].leading_monomial().unwrap();
            other.divides(lm) && (other != lm || k < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    let mut elems: Vec<Polynomial> = keep.iter().map(|&i| elements[i].clone()).collect();
    let mut cofs: Vec<Vec<Polynomial>> = if track {
        keep.iter().map(|&i| cofactors[i].clone()).collect()
    } else {
        vec![Vec::new(); elems.len()]
    };
    for i in 0..elems.len() {
        let (rem, quotients) = reduce(&elems[i], &elems, Some(i));
        if track {
            cofs[i] = subtract_cofactors(ring, &cofs[i], &quotients, &cofs);
        }
        let lc = rem.leading_coeff().unwrap().recip();
        elems[i] = rem.scale(&lc);
        if track {
            cofs[i] = cofs[i].iter().map(|c| c.scale(&lc)).collect();
        }
    }
    let mut order: Vec<usize> = (0..elems.len()).collect();
    order.sort_by(|&a, &b| {
        ring.cmp(
            elems[a].leading_monomial().unwrap(),
            elems[b].leading_monomial().unwrap(),
        )
    });
    (
        order.iter().map(|&i| elems[i].clone()).collect(),
        order.iter().map(|&i| cofs[i].clone()).collect(),
    )
}

/// Reduced Gröbner basis of `ideal` with cofactors.
pub fn buchberger(ideal: &IdealPresentation) -> GroebnerBasis {
    GroebnerBasis::compute(ideal)
}

pub fn normal_form(p: &Polynomial, basis: &GroebnerBasis) -> Result<Polynomial, GroebnerError> {
    basis.try_normal_form(p)
}

/// Membership verdict; the certificate is the cofactor vector over the generators.
#[derive(Debug, Clone)]
pub struct Membership {
    pub member: bool,
    pub certificate: Option<Vec<Polynomial>>,
}

pub fn ideal_member(p: &Polynomial, ideal: &IdealPresentation) -> Result<Membership, GroebnerError> {
    let basis = GroebnerBasis::compute(ideal);
    let (rem, cof) = basis.normal_form_with_cofactors(p)?;
    Ok(if rem.is_zero() {
        Membership {
            member: true,
            certificate: Some(cof),
        }
    } else {
        Membership {
            member: false,
            certificate: None,
        }
    })
}

/// `(I : a) = { p : p*a in I }`, via a tag-variable elimination of `I ∩ (a)`.
pub fn ideal_quotient(ideal: &IdealPresentation, a: &Polynomial) -> Result<IdealPresentation, GroebnerError> {
    let ring = ideal.ring();
    if !PolyRing::same(a.ring(), ring) {
        return Err(GroebnerError::RingMismatch);
    }
    if a.is_zero() {
        return Err(GroebnerError::ZeroDivisor);
    }
    let basis = GroebnerBasis::compute_with(ideal, false, PairStrategy::Normal);
    let a = basis.normal_form(a);
    if a.is_zero() {
        return IdealPresentation::new(ring, vec![Polynomial::one(ring)]);
    }
    if a.is_constant() {
        return IdealPresentation::new(ring, basis.elements().to_vec());
    }
    let mut tag = String::from("tag");
    while ring.var_index(&tag).is_some() {
        tag.push('_');
    }
    let mut names = vec![tag];
    names.extend(ring.names().iter().cloned());
    let mut weights = vec![1];
    weights.extend_from_slice(ring.weights());
    let tagged = PolyRing::new(names, weights, TermOrder::Elimination(1))
        .expect("tag ring is well formed");
    let up: Vec<usize> = (1..=ring.nvars()).collect();
    let t = Polynomial::term(&tagged, Rational::one(), Monomial::variable(tagged.nvars(), 0));
    let one_minus_t = &Polynomial::one(&tagged) - &t;
    let mut gens: Vec<Polynomial> = basis
        .elements()
        .iter()
        .map(|g| &t * &g.embed(&tagged, &up))
        .collect();
    gens.push(&one_minus_t * &a.embed(&tagged, &up));
    let elim = GroebnerBasis::compute_with(
        &IdealPresentation::new(&tagged, gens)?,
        false,
        PairStrategy::Normal,
    );
    let mut down = vec![0usize; tagged.nvars()];
    for (i, d) in down.iter_mut().enumerate().skip(1) {
        *d = i - 1;
    }
    let mut quotients = Vec::new();
    for e in elim.elements() {
        if e.terms().iter().any(|(m, _)| m.exponents()[0] != 0) {
            continue;
        }
        let back = e.embed(ring, &down);
        let q = back
            .exact_div(&a)
            .expect("elements of I ∩ (a) are divisible by a");
        quotients.push(q);
    }
    IdealPresentation::new(ring, quotients)
}

/// Witness that `dividend = divisor * quotient + sum_j witness_j * generator_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisionCertificate {
    pub quotient: Polynomial,
    pub witness: Vec<Polynomial>,
}

impl DivisionCertificate {
    pub fn verify(&self, dividend: &Polynomial, divisor: &Polynomial, ideal: &IdealPresentation) -> bool {
        if self.witness.len() != ideal.generators().len() {
            return false;
        }
        let mut acc = divisor * &self.quotient;
        for (w, g) in self.witness.iter().zip(ideal.generators()) {
            acc = &acc + &(w * g);
        }
        &acc == dividend
    }
}

/// Solves `r ≡ a*q (mod I)` with certificates. Holds the bases of `I` and of
/// `I + (a)` so repeated divisions by the same `a` are cheap.
#[derive(Debug, Clone)]
pub struct Divider {
    divisor: Polynomial,
    ideal: IdealPresentation,
    ideal_basis: GroebnerBasis,
    combined: GroebnerBasis,
}

impl Divider {
    pub fn new(divisor: &Polynomial, ideal: &IdealPresentation) -> Result<Self, GroebnerError> {
        let ideal_basis = GroebnerBasis::compute(ideal);
        let combined = GroebnerBasis::compute(&IdealPresentation {
            ring: ideal.ring.clone(),
            generators: ideal
                .generators
                .iter()
                .cloned()
                .chain(std::iter::once(divisor.clone()))
                .collect(),
        });
        Self::from_bases(divisor, ideal, ideal_basis, combined)
    }

    /// `combined` must be a tracked basis over the generators of `ideal`
    /// followed by `divisor`.
    pub fn from_bases(
        divisor: &Polynomial,
        ideal: &IdealPresentation,
        ideal_basis: GroebnerBasis,
        combined: GroebnerBasis,
    ) -> Result<Self, GroebnerError> {
        if !PolyRing::same(divisor.ring(), ideal.ring()) {
            return Err(GroebnerError::RingMismatch);
        }
        if divisor.is_zero() {
            return Err(GroebnerError::ZeroDivisor);
        }
        if ideal_basis.cofactors.is_none() || combined.cofactors.is_none() {
            return Err(GroebnerError::Untracked);
        }
        let n = ideal.generators.len();
        assert_eq!(combined.generators.len(), n + 1);
        assert_eq!(&combined.generators[n], divisor);
        if ideal_basis.contains(divisor) {
            return Err(GroebnerError::DegenerateDivisor(divisor.to_string()));
        }
        Ok(Divider {
            divisor: divisor.clone(),
            ideal: ideal.clone(),
            ideal_basis,
            combined,
        })
    }

    pub fn divisor(&self) -> &Polynomial {
        &self.divisor
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    /// `None` when `r` is not in `(a) + I`. The quotient is returned in normal
    /// form modulo `I`, so it is deterministic for fixed inputs.
    pub fn divide(&self, r: &Polynomial) -> Result<Option<DivisionCertificate>, GroebnerError> {
        let (rem, cof) = self.combined.normal_form_with_cofactors(r)?;
        if !rem.is_zero() {
            return Ok(None);
        }
        let n = self.ideal.generators.len();
        let q = cof[n].clone();
        let mut witness: Vec<Polynomial> = cof[..n].to_vec();
        let (q_reduced, c) = self.ideal_basis.normal_form_with_cofactors(&q)?;
        for (w, cj) in witness.iter_mut().zip(&c) {
            if !cj.is_zero() {
                *w = &*w + &(&self.divisor * cj);
            }
        }
        Ok(Some(DivisionCertificate {
            quotient: q_reduced,
            witness,
        }))
    }
}

/// One-shot certified division of `r` by `a` modulo `I`.
pub fn certified_divide(
    r: &Polynomial,
    a: &Polynomial,
    ideal: &IdealPresentation,
) -> Result<Option<DivisionCertificate>, GroebnerError> {
    Divider::new(a, ideal)?.divide(r)
}

/// True when every generator of `a` lies in the ideal spanned by `b`.
pub fn ideal_contains_all(b: &GroebnerBasis, a: &[Polynomial]) -> bool {
    a.iter().all(|p| b.contains(p))
}

/// Equality of ideals by mutual generator membership.
pub fn ideals_equal(a: &IdealPresentation, b: &IdealPresentation) -> bool {
    let ga = GroebnerBasis::compute_with(a, false, PairStrategy::Normal);
    let gb = GroebnerBasis::compute_with(b, false, PairStrategy::Normal);
    ideal_contains_all(&gb, a.generators()) && ideal_contains_all(&ga, b.generators())
}

#[cfg(test)]
mod tests;
