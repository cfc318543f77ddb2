//! Graded quotient rings `P/I` with canonical normal-form representatives.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use thiserror::Error;

use crate::groebner::{ideal_quotient, GroebnerBasis, GroebnerError, IdealPresentation, PairStrategy};
use crate::poly::{Monomial, PolyError, PolyRing, Polynomial, Rational, TermOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("relation `{0}` is not homogeneous")]
    Inhomogeneous(String),
    #[error("element is zero in the ring")]
    ZeroElement,
    #[error("element belongs to a different ring")]
    WrongRing,
    #[error("ring `{0}` is not graded")]
    NotGraded(String),
}

/// A polynomial ring modulo an ideal, with its reduced Gröbner basis computed
/// at construction time.
pub struct PresentedRing {
    name: String,
    poly_ring: Arc<PolyRing>,
    ideal: IdealPresentation,
    basis: GroebnerBasis,
    graded: bool,
    pieces: Mutex<HashMap<u64, Arc<GradedPieceBasis>>>,
}

impl fmt::Debug for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PresentedRing")
            .field("name", &self.name)
            .field("vars", &self.poly_ring.names())
            .field("relations", &self.ideal.generators())
            .field("graded", &self.graded)
            .finish()
    }
}

/// Standard monomials of one weighted degree; a basis of that graded piece.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedPieceBasis {
    pub degree: u64,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedPieceBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

impl PresentedRing {
    pub fn new(
        name: &str,
        poly_ring: &Arc<PolyRing>,
        relations: Vec<Polynomial>,
        graded: bool,
    ) -> Result<Arc<Self>, RingError> {
        if graded {
            if let Some(bad) = relations.iter().find(|r| !r.is_homogeneous()) {
                return Err(RingError::Inhomogeneous(bad.to_string()));
            }
        }
        let ideal = IdealPresentation::new(poly_ring, relations)?;
        let basis = GroebnerBasis::compute_with(&ideal, true, PairStrategy::Normal);
        Ok(Arc::new(PresentedRing {
            name: name.to_string(),
            poly_ring: poly_ring.clone(),
            ideal,
            basis,
            graded,
            pieces: Mutex::new(HashMap::new()),
        }))
    }

    /// Builds `Q[vars]/(relations)` from `(name, degree)` pairs and relation text,
    /// with grevlex in the declared variable order.
    pub fn make_ring(
        name: &str,
        vars: &[(&str, u32)],
        relations: &[&str],
        graded: bool,
    ) -> Result<Arc<Self>, RingError> {
        let poly_ring = PolyRing::new(
            vars.iter().map(|(v, _)| v.to_string()).collect(),
            vars.iter().map(|(_, d)| *d).collect(),
            TermOrder::GrevLex,
        )?;
        let rels = relations
            .iter()
            .map(|r| poly_ring.parse(r))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, &poly_ring, rels, graded)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn poly_ring(&self) -> &Arc<PolyRing> {
        &self.poly_ring
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn nvars(&self) -> usize {
        self.poly_ring.nvars()
    }

    /// Canonical representative.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        self.basis.normal_form(p)
    }

    pub fn is_zero(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial, RingError> {
        Ok(self.reduce(&self.poly_ring.parse(text)?))
    }

    pub fn elem(self: &Arc<Self>, p: &Polynomial) -> Result<RingElem, RingError> {
        if !PolyRing::same(p.ring(), &self.poly_ring) {
            return Err(RingError::WrongRing);
        }
        Ok(RingElem {
            ring: self.clone(),
            rep: self.reduce(p),
        })
    }

    pub fn parse_elem(self: &Arc<Self>, text: &str) -> Result<RingElem, RingError> {
        let p = self.poly_ring.parse(text)?;
        self.elem(&p)
    }

    pub fn variable_degree(&self, p: &Polynomial) -> Option<u64> {
        p.homogeneous_degree()
    }

    /// Standard monomials of weighted degree `d` (empty for negative `d`).
    pub fn graded_basis(&self, d: i64) -> Result<Arc<GradedPieceBasis>, RingError> {
        if !self.graded {
            return Err(RingError::NotGraded(self.name.clone()));
        }
        if d < 0 {
            return Ok(Arc::new(GradedPieceBasis {
                degree: 0,
                monomials: Vec::new(),
                index: HashMap::new(),
            }));
        }
        let d = d as u64;
        if let Some(b) = self.pieces.lock().unwrap().get(&d) {
            return Ok(b.clone());
        }
        let mut monomials: Vec<Monomial> = Monomial::enumerate(self.poly_ring.weights(), d)
            .into_iter()
            .filter(|m| self.basis.is_standard(m))
            .collect();
        monomials.sort_by(|a, b| self.poly_ring.cmp(b, a));
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let piece = Arc::new(GradedPieceBasis {
            degree: d,
            monomials,
            index,
        });
        self.pieces.lock().unwrap().insert(d, piece.clone());
        Ok(piece)
    }

    /// Standard monomials of weighted degree at most `bound` (for ungraded work).
    pub fn standard_monomials_up_to(&self, bound: u64) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = (0..=bound)
            .flat_map(|d| Monomial::enumerate(self.poly_ring.weights(), d))
            .filter(|m| self.basis.is_standard(m))
            .collect();
        out.sort_by(|a, b| self.poly_ring.cmp(b, a));
        out
    }

    /// Coordinates of the degree-`d` part of `p` in the standard-monomial basis.
    /// `p` is reduced first; terms of other degrees are ignored.
    pub fn coordinates(&self, p: &Polynomial, d: i64) -> Result<Vec<Rational>, RingError> {
        let piece = self.graded_basis(d)?;
        let mut v = vec![Rational::zero(); piece.dim()];
        if d < 0 {
            return Ok(v);
        }
        for (m, c) in self.reduce(p).terms() {
            if let Some(i) = piece.position(m) {
                v[i] = c.clone();
            }
        }
        Ok(v)
    }

    pub fn from_coordinates(&self, d: i64, coords: &[Rational]) -> Result<Polynomial, RingError> {
        let piece = self.graded_basis(d)?;
        Ok(Polynomial::from_terms(
            &self.poly_ring,
            piece
                .monomials
                .iter()
                .zip(coords)
                .map(|(m, c)| (m.clone(), c.clone())),
        ))
    }

    /// Whether `p` lies in the ideal of this ring generated by `gens`.
    pub fn ideal_contains(&self, gens: &[Polynomial], p: &Polynomial) -> bool {
        let full = self.extended_basis(gens);
        full.contains(p)
    }

    fn extended_basis(&self, gens: &[Polynomial]) -> GroebnerBasis {
        let all: Vec<Polynomial> = self
            .basis
            .elements()
            .iter()
            .chain(gens.iter())
            .cloned()
            .collect();
        GroebnerBasis::compute_with(
            &IdealPresentation::new(&self.poly_ring, all).expect("same ring"),
            false,
            PairStrategy::Normal,
        )
    }

    /// Ideal equality in this ring by mutual generator membership.
    pub fn ideals_equal(&self, a: &[Polynomial], b: &[Polynomial]) -> bool {
        let ga = self.extended_basis(a);
        let gb = self.extended_basis(b);
        a.iter().all(|p| gb.contains(p)) && b.iter().all(|p| ga.contains(p))
    }
}

/// Element of a presented ring, stored as its normal form.
#[derive(Clone)]
pub struct RingElem {
    ring: Arc<PresentedRing>,
    rep: Polynomial,
}

impl RingElem {
    pub fn ring(&self) -> &Arc<PresentedRing> {
        &self.ring
    }

    pub fn rep(&self) -> &Polynomial {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn degree(&self) -> Option<u64> {
        self.rep.homogeneous_degree()
    }

    pub fn add(&self, other: &RingElem) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            rep: self.ring.reduce(&(&self.rep + &other.rep)),
        }
    }

    pub fn mul(&self, other: &RingElem) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            rep: self.ring.reduce(&(&self.rep * &other.rep)),
        }
    }

    /// The same representative read in another ring over the same variables.
    pub fn in_ring(&self, other: &Arc<PresentedRing>) -> Result<RingElem, RingError> {
        other.elem(&self.rep)
    }
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.rep == other.rep
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.rep, self.ring.name)
    }
}

/// `R = S/(x)` presented over the same variables, with projection and lift.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    pub source: Arc<PresentedRing>,
    pub target: Arc<PresentedRing>,
    pub divisor: Polynomial,
}

impl QuotientMap {
    /// Normal form in the quotient.
    pub fn project(&self, p: &Polynomial) -> Polynomial {
        self.target.reduce(p)
    }

    /// Canonical lift: the quotient's normal form read as an element of the source.
    pub fn lift(&self, p: &Polynomial) -> Polynomial {
        self.source.reduce(&self.target.reduce(p))
    }
}

pub fn quotient_by(source: &Arc<PresentedRing>, x: &RingElem, name: &str) -> Result<QuotientMap, RingError> {
    if !Arc::ptr_eq(x.ring(), source) {
        return Err(RingError::WrongRing);
    }
    if x.is_zero() {
        return Err(RingError::ZeroElement);
    }
    if source.graded && !x.rep.is_homogeneous() {
        return Err(RingError::Inhomogeneous(x.rep.to_string()));
    }
    let mut rels: Vec<Polynomial> = source.ideal.generators().to_vec();
    rels.push(x.rep.clone());
    let target = PresentedRing::new(name, &source.poly_ring, rels, source.graded)?;
    Ok(QuotientMap {
        source: source.clone(),
        target,
        divisor: x.rep.clone(),
    })
}

/// Generators of `ann(a)` in the ring, reduced to normal form and pruned to a
/// generating set where no generator lies in the ideal of the earlier ones.
pub fn annihilator(ring: &Arc<PresentedRing>, a: &RingElem) -> Result<Vec<Polynomial>, RingError> {
    if !Arc::ptr_eq(a.ring(), ring) {
        return Err(RingError::WrongRing);
    }
    if a.is_zero() {
        return Err(RingError::ZeroElement);
    }
    let q = ideal_quotient(ring.ideal(), a.rep())?;
    let mut gens: Vec<Polynomial> = q
        .generators()
        .iter()
        .map(|g| ring.reduce(g))
        .filter(|g| !g.is_zero())
        .collect();
    gens.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| ring.poly_ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()))
    });
    let mut kept: Vec<Polynomial> = Vec::new();
    for g in gens {
        if !ring.ideal_contains(&kept, &g) {
            kept.push(g.monic());
        }
    }
    Ok(kept)
}

/// Outcome of checking `ann(x) = (y)` and `ann(y) = (x)`.
#[derive(Debug, Clone)]
pub struct ExactPairReport {
    pub exact: bool,
    pub ann_x: Vec<Polynomial>,
    pub ann_y: Vec<Polynomial>,
    pub failures: Vec<String>,
}

pub fn check_exact_pair(
    ring: &Arc<PresentedRing>,
    x: &RingElem,
    y: &RingElem,
) -> Result<ExactPairReport, RingError> {
    let ann_x = annihilator(ring, x)?;
    let ann_y = annihilator(ring, y)?;
    let mut failures = Vec::new();
    if !ring.is_zero(&(x.rep() * y.rep())) {
        failures.push(format!("({y}) ⊄ ann({x}): x*y != 0"));
        failures.push(format!("({x}) ⊄ ann({y}): x*y != 0"));
    }
    let ys = [y.rep().clone()];
    let xs = [x.rep().clone()];
    if let Some(g) = ann_x.iter().find(|g| !ring.ideal_contains(&ys, g)) {
        failures.push(format!("ann({x}) ⊄ ({y}): generator {g}"));
    }
    if let Some(g) = ann_y.iter().find(|g| !ring.ideal_contains(&xs, g)) {
        failures.push(format!("ann({y}) ⊄ ({x}): generator {g}"));
    }
    Ok(ExactPairReport {
        exact: failures.is_empty(),
        ann_x,
        ann_y,
        failures,
    })
}

#[cfg(test)]
mod tests;
