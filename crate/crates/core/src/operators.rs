//! The operators `psi_z` (homological degree -2) and `phi` (degree -3) on a
//! complex of free modules over `R = S/(x)`, for an exact pair `(x, y)` in `S`.
//!
//! A complex over `R` is lifted to `S`. Since `d~^2` vanishes modulo `x`, it
//! is divisible by `x` modulo the ideal of `S`, giving `psi~`; the commutator
//! `d~ psi~ - psi~ d~` is then divisible by `y`, giving `phi~`. Reducing to `R`
//! yields `phi` and, for each `z` in `ann_R(y)`, `psi_z = z psi`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::{
    is_chain_map, random_homogeneous, ComplexError, ComplexMap, FreeMap, GradedComplex, PolyMatrix,
};
use crate::groebner::{Divider, GroebnerError};
use crate::poly::{int, Polynomial};
use crate::ring::{annihilator, check_exact_pair, PresentedRing, QuotientMap, RingElem, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("({x}, {y}) is not an exact pair: {detail}")]
    NotExactPair { x: String, y: String, detail: String },
    #[error("{op}: entry ({row},{col}) at index {index} is {entry}, not divisible by {divisor}")]
    NotDivisible {
        op: &'static str,
        index: i64,
        row: usize,
        col: usize,
        entry: String,
        divisor: String,
    },
    #[error("{0} does not annihilate y in R")]
    NotInAnnihilator(String),
    #[error("supplied lift of d{index} does not reduce to the differential at ({row},{col})")]
    LiftMismatch { index: i64, row: usize, col: usize },
    #[error("{0} is not a chain map")]
    NotChainMap(String),
    #[error("contract failed: {0}")]
    Contract(String),
}

/// How to lift the differentials from `R` to `S`.
#[derive(Debug, Clone, PartialEq)]
pub enum LiftPolicy {
    /// Normal-form representatives read over `S`.
    Canonical,
    /// Explicit matrices over `S`, `d_{lo+1} ..= d_hi`.
    Supplied(Vec<PolyMatrix>),
    /// Canonical plus `x` times random entries of the matching degree.
    Randomized(u64),
}

impl LiftPolicy {
    pub fn tag(&self) -> String {
        match self {
            LiftPolicy::Canonical => "canonical".into(),
            LiftPolicy::Supplied(_) => "supplied".into(),
            LiftPolicy::Randomized(seed) => format!("randomized({seed})"),
        }
    }
}

/// A complex over `R` with chosen lifts of its differentials to `S`.
#[derive(Debug, Clone)]
pub struct LiftedComplex {
    pub base: GradedComplex,
    pub lifted: GradedComplex,
    pub policy: LiftPolicy,
}

/// Lifts `f` (over the quotient) to the source ring of `quotient`.
pub fn lift_complex(f: &GradedComplex, quotient: &QuotientMap, policy: LiftPolicy) -> Result<LiftedComplex, OperatorError> {
    if !Arc::ptr_eq(f.ring(), &quotient.target) {
        return Err(ComplexError::RingMismatch.into());
    }
    let s = &quotient.source;
    let indices: Vec<i64> = (f.lo() + 1..=f.hi()).collect();
    let canonical: Vec<PolyMatrix> = indices
        .iter()
        .map(|&i| f.differential(i).unwrap().matrix.map_entries(|p| quotient.lift(p)))
        .collect();
    let matrices = match &policy {
        LiftPolicy::Canonical => canonical,
        LiftPolicy::Supplied(ms) => {
            if ms.len() != indices.len() {
                return Err(ComplexError::Shape(format!("{} lifted differentials for {} indices", ms.len(), indices.len())).into());
            }
            for (&i, m) in indices.iter().zip(ms) {
                let d = f.differential(i).unwrap().matrix;
                if !m.same_shape(&d) {
                    return Err(ComplexError::Shape(format!("lift of d{i}")).into());
                }
                if let Some((row, col, _)) = m.entries().find(|(r, c, p)| quotient.project(p) != *d.get(*r, *c)) {
                    return Err(OperatorError::LiftMismatch { index: i, row, col });
                }
            }
            ms.clone()
        }
        LiftPolicy::Randomized(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let x = &quotient.divisor;
            let dx = x.homogeneous_degree();
            indices
                .iter()
                .zip(canonical)
                .map(|(&i, mut m)| {
                    let d = f.differential(i).unwrap();
                    for r in 0..m.nrows() {
                        for c in 0..m.ncols() {
                            let extra = match (s.is_graded(), dx) {
                                (true, Some(dx)) => random_homogeneous(s, d.entry_degree(r, c, 0) - dx as i64, &mut rng),
                                _ => random_low_degree(s, &mut rng),
                            };
                            let next = m.get(r, c) + &(x * &extra);
                            m.set(r, c, next);
                        }
                    }
                    m
                })
                .collect()
        }
    };
    let lifted = GradedComplex::new(s, f.lo(), f.modules().to_vec(), matrices, f.is_bounded_below())?;
    Ok(LiftedComplex {
        base: f.clone(),
        lifted,
        policy,
    })
}

fn random_low_degree(ring: &PresentedRing, rng: &mut ChaCha8Rng) -> Polynomial {
    use rand::Rng;
    let terms = ring
        .standard_monomials_up_to(1)
        .into_iter()
        .map(|m| (m, int(rng.gen_range(-2..=2))));
    Polynomial::from_terms(ring.poly_ring(), terms)
}

/// A verified exact pair `(x, y)` in `S` with the dividers it needs.
#[derive(Debug, Clone)]
pub struct OperatorBuilder {
    pub quotient: QuotientMap,
    pub x: RingElem,
    pub y: RingElem,
    /// Generators of `ann_R(y)`.
    pub ann_y: Vec<Polynomial>,
    div_x: Divider,
    div_y: Divider,
}

impl OperatorBuilder {
    /// Checks that `(x, y)` is an exact pair and that the quotient is `S/(x)`.
    pub fn new(quotient: &QuotientMap, x: &RingElem, y: &RingElem) -> Result<Self, OperatorError> {
        let s = &quotient.source;
        if quotient.divisor != *x.rep() {
            return Err(OperatorError::Contract(format!("quotient is not by {x}")));
        }
        let report = check_exact_pair(s, x, y)?;
        if !report.exact {
            return Err(OperatorError::NotExactPair {
                x: x.to_string(),
                y: y.to_string(),
                detail: report.failures.join("; "),
            });
        }
        Self::assume_exact(quotient, x, y)
    }

    /// Skips the exact-pair check (for callers that have already done it).
    pub fn assume_exact(quotient: &QuotientMap, x: &RingElem, y: &RingElem) -> Result<Self, OperatorError> {
        let s = &quotient.source;
        let r = &quotient.target;
        let div_x = Divider::new(x.rep(), s.ideal())?;
        let div_y = Divider::new(y.rep(), s.ideal())?;
        let y_r = r.elem(y.rep())?;
        let ann_y = if y_r.is_zero() { Vec::new() } else { annihilator(r, &y_r)? };
        Ok(OperatorBuilder {
            quotient: quotient.clone(),
            x: x.clone(),
            y: y.clone(),
            ann_y,
            div_x,
            div_y,
        })
    }

    pub fn s(&self) -> &Arc<PresentedRing> {
        &self.quotient.source
    }

    pub fn r(&self) -> &Arc<PresentedRing> {
        &self.quotient.target
    }

    fn degree_of(&self, p: &Polynomial) -> Option<i64> {
        if self.s().is_graded() {
            p.homogeneous_degree().map(|d| d as i64)
        } else {
            None
        }
    }

    /// Entrywise certified division of `num` by the divider; verifies each certificate.
    fn divide_matrix(&self, div: &Divider, num: &PolyMatrix, op: &'static str, index: i64) -> Result<PolyMatrix, OperatorError> {
        let s = self.s();
        let mut out = PolyMatrix::zeros(s.poly_ring(), num.nrows(), num.ncols());
        for (r, c, p) in num.entries() {
            if p.is_zero() {
                continue;
            }
            let cert = div.divide(p)?.ok_or_else(|| OperatorError::NotDivisible {
                op,
                index,
                row: r,
                col: c,
                entry: p.to_string(),
                divisor: div.divisor().to_string(),
            })?;
            if !cert.verify(p, div.divisor(), s.ideal()) {
                return Err(OperatorError::Contract(format!("{op} certificate at index {index} ({r},{c})")));
            }
            out.set(r, c, cert.quotient);
        }
        Ok(out)
    }

    /// `psi~_i` with `x psi~_i ≡ d~_{i-1} d~_i` wherever both differentials exist.
    pub fn build_psi(&self, l: &LiftedComplex) -> Result<ComplexMap, OperatorError> {
        let s = self.s();
        let f = &l.lifted;
        let e = self.degree_of(self.x.rep()).map(|d| -d);
        let mut psi = ComplexMap::new(s, -2, e);
        for i in f.lo()..=f.hi() {
            let (Some(di), Some(dp)) = (f.differential(i), f.differential(i - 1)) else {
                continue;
            };
            let sq = dp.compose(&di, s)?;
            let q = self.divide_matrix(&self.div_x, &sq.matrix, "psi", i)?;
            psi.insert(i, FreeMap::new(di.source.clone(), dp.target.clone(), q)?)?;
        }
        Ok(psi)
    }

    /// `phi~_i` with `y phi~_i ≡ d~_{i-2} psi~_i - psi~_{i-1} d~_i`.
    pub fn build_phi(&self, l: &LiftedComplex, psi: &ComplexMap) -> Result<ComplexMap, OperatorError> {
        let s = self.s();
        let f = &l.lifted;
        let e = match (self.degree_of(self.x.rep()), self.degree_of(self.y.rep())) {
            (Some(a), Some(b)) => Some(-(a + b)),
            _ => None,
        };
        let mut phi = ComplexMap::new(s, -3, e);
        for i in f.lo()..=f.hi() {
            let (Some(pi), Some(pp), Some(di), Some(dq)) =
                (psi.component(i), psi.component(i - 1), f.differential(i), f.differential(i - 2))
            else {
                continue;
            };
            let num = dq.compose(pi, s)?.matrix.sub(&pp.compose(&di, s)?.matrix)?.reduce(s);
            let q = self.divide_matrix(&self.div_y, &num, "phi", i)?;
            phi.insert(i, FreeMap::new(pi.source.clone(), dq.target.clone(), q)?)?;
        }
        Ok(phi)
    }

    /// Lifts, builds and reduces, verifying every contract and chain-map equation.
    pub fn build(&self, f: &GradedComplex, zs: &[Polynomial], policy: LiftPolicy) -> Result<OperatorBundle, OperatorError> {
        let lifted = lift_complex(f, &self.quotient, policy)?;
        let psi_tilde = self.build_psi(&lifted)?;
        let phi_tilde = self.build_phi(&lifted, &psi_tilde)?;
        let mut bundle = OperatorBundle {
            psi: psi_tilde.over(self.r()),
            phi: phi_tilde.over(self.r()),
            psi_tilde,
            phi_tilde,
            psi_z: Vec::new(),
            lifted,
            x: self.x.rep().clone(),
            y: self.y.rep().clone(),
            warnings: Vec::new(),
            chain_checks: Vec::new(),
        };
        verify_contracts(self, &bundle)?;
        if self.ann_y.is_empty() {
            bundle
                .warnings
                .push("ann_R(y) = 0: every psi_z vanishes and only phi carries information".into());
        }
        reduce_operators(self, &mut bundle, zs)?;
        Ok(bundle)
    }
}

/// The lifted and reduced operators on one complex.
#[derive(Debug, Clone)]
pub struct OperatorBundle {
    pub lifted: LiftedComplex,
    pub x: Polynomial,
    pub y: Polynomial,
    pub psi_tilde: ComplexMap,
    pub phi_tilde: ComplexMap,
    /// `psi~` read over `R`; `psi_z = z psi`.
    pub psi: ComplexMap,
    pub phi: ComplexMap,
    pub psi_z: Vec<(Polynomial, ComplexMap)>,
    pub warnings: Vec<String>,
    /// Outcome of each chain-map check: `None` when the window admits no equation.
    pub chain_checks: Vec<(String, Option<bool>)>,
}

impl OperatorBundle {
    pub fn complex(&self) -> &GradedComplex {
        &self.lifted.base
    }

    /// `z psi` over `R`; `z` must annihilate `y` for this to be a chain map.
    pub fn psi_for(&self, z: &Polynomial) -> ComplexMap {
        self.psi.mul_element(z)
    }

    pub fn psi_range(&self) -> Option<(i64, i64)> {
        range(&self.psi_tilde)
    }

    pub fn phi_range(&self) -> Option<(i64, i64)> {
        range(&self.phi_tilde)
    }
}

fn range(g: &ComplexMap) -> Option<(i64, i64)> {
    let idx = g.indices();
    Some((*idx.first()?, *idx.last()?))
}

/// Re-checks `x psi~ ≡ d~^2` and `y phi~ ≡ d~ psi~ - psi~ d~` over `S`.
pub fn verify_contracts(b: &OperatorBuilder, bundle: &OperatorBundle) -> Result<(), OperatorError> {
    let s = b.s();
    let f = &bundle.lifted.lifted;
    for (i, p) in &bundle.psi_tilde.components {
        let (di, dp) = (f.differential(*i).unwrap(), f.differential(i - 1).unwrap());
        let lhs = p.matrix.mul_scalar(&bundle.x);
        let rhs = dp.compose(&di, s)?.matrix;
        if !lhs.sub(&rhs)?.reduce(s).is_zero() {
            return Err(OperatorError::Contract(format!("x psi~_{i} != d~_{} d~_{i}", i - 1)));
        }
    }
    for (i, p) in &bundle.phi_tilde.components {
        let (pi, pp) = (&bundle.psi_tilde.components[i], &bundle.psi_tilde.components[&(i - 1)]);
        let (di, dq) = (f.differential(*i).unwrap(), f.differential(i - 2).unwrap());
        let lhs = p.matrix.mul_scalar(&bundle.y);
        let rhs = dq.compose(pi, s)?.matrix.sub(&pp.compose(&di, s)?.matrix)?;
        if !lhs.sub(&rhs)?.reduce(s).is_zero() {
            return Err(OperatorError::Contract(format!("y phi~_{i} != d~ psi~ - psi~ d~")));
        }
    }
    Ok(())
}

fn chain_check(name: &str, g: &ComplexMap, f: &GradedComplex) -> Result<Option<bool>, OperatorError> {
    match is_chain_map(g, f, f) {
        Ok(true) => Ok(Some(true)),
        Ok(false) => Err(OperatorError::NotChainMap(name.to_string())),
        Err(ComplexError::WindowTooSmall(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Forms `psi_z` for each `z` and checks `psi_z` and `phi` as chain maps over `R`.
pub fn reduce_operators(b: &OperatorBuilder, bundle: &mut OperatorBundle, zs: &[Polynomial]) -> Result<(), OperatorError> {
    let r = b.r();
    let f = bundle.complex().clone();
    for z in zs {
        let z = r.reduce(z);
        if !r.is_zero(&(&z * &bundle.y)) {
            return Err(OperatorError::NotInAnnihilator(z.to_string()));
        }
        let pz = bundle.psi_for(&z);
        let name = format!("psi_{z}");
        let verdict = chain_check(&name, &pz, &f)?;
        if verdict.is_none() {
            bundle.warnings.push(format!("{name}: window too small for a chain-map check"));
        }
        bundle.chain_checks.push((name, verdict));
        bundle.psi_z.push((z, pz));
    }
    let verdict = chain_check("phi", &bundle.phi, &f)?;
    if verdict.is_none() {
        bundle.warnings.push("phi: window too small for a chain-map check".into());
    }
    bundle.chain_checks.push(("phi".into(), verdict));
    Ok(())
}

/// One call: exact-pair check, lift, build, reduce, verify.
pub fn operator_pipeline(
    f: &GradedComplex,
    quotient: &QuotientMap,
    x: &RingElem,
    y: &RingElem,
    zs: &[Polynomial],
    policy: LiftPolicy,
) -> Result<OperatorBundle, OperatorError> {
    OperatorBuilder::new(quotient, x, y)?.build(f, zs, policy)
}

#[cfg(test)]
mod tests;
