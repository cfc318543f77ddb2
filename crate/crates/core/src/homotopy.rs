//! Null-homotopy decision for chain maps on a finite window.
//!
//! For `g` of homological degree `m` we look for `theta` of degree `m + 1`
//! with `d theta - s theta d = g` at every equation index of the window,
//! where `s = (-1)^{m+1}` (standard convention) or `s = -(-1)^{m+1}`
//! (flipped). Entries of `theta` are expanded in standard monomials, so the
//! question becomes one exact linear system over the rationals.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::complex::{compose, ComplexError, ComplexMap, FreeMap, GradedComplex, GradedFreeModule, PolyMatrix};
use crate::linalg::{LinearSolution, SparseMatrix};
use crate::poly::{Monomial, Polynomial, Rational};
use crate::operators::OperatorBundle;
use crate::ring::PresentedRing;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomotopyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("window too small: no equation can be posed in [{0}, {1}]")]
    WindowTooSmall(i64, i64),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("graded mode needs a homogeneous map on a graded ring")]
    NotGraded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `g = d theta - (-1)^{m+1} theta d`.
    Standard,
    /// `g = d theta + (-1)^{m+1} theta d`.
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Entries of `theta` are homogeneous of the degree forced by the twists.
    Graded,
    /// Entries range over standard monomials of degree at most `bound`;
    /// verdicts only speak about homotopies of that size.
    Bounded(u64),
}

/// `g: F -> G` with equations at source indices `window.0 ..= window.1`.
#[derive(Debug, Clone)]
pub struct HomotopyProblem<'a> {
    pub g: &'a ComplexMap,
    pub source: &'a GradedComplex,
    pub target: &'a GradedComplex,
    pub window: (i64, i64),
    pub convention: Convention,
    pub mode: Mode,
}

impl<'a> HomotopyProblem<'a> {
    pub fn new(g: &'a ComplexMap, f: &'a GradedComplex, window: (i64, i64)) -> Self {
        HomotopyProblem {
            g,
            source: f,
            target: f,
            window,
            convention: Convention::Standard,
            mode: Mode::Graded,
        }
    }

    pub fn with_target(mut self, target: &'a GradedComplex) -> Self {
        self.target = target;
        self
    }

    pub fn with_convention(mut self, c: Convention) -> Self {
        self.convention = c;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    fn ring(&self) -> &Arc<PresentedRing> {
        &self.g.ring
    }

    /// The factor `s` in `d theta - s theta d`.
    pub fn sign(&self) -> i64 {
        let base = if (self.g.hom_degree + 1).rem_euclid(2) == 0 { 1 } else { -1 };
        match self.convention {
            Convention::Standard => base,
            Convention::Flipped => -base,
        }
    }

    fn theta_modules(&self, j: i64) -> Option<(GradedFreeModule, GradedFreeModule)> {
        Some((self.source.module(j)?, self.target.module(j + self.g.hom_degree + 1)?))
    }

    /// Equation indices with a nonempty equation.
    pub fn equation_indices(&self) -> Vec<i64> {
        (self.window.0..=self.window.1)
            .filter(|&i| {
                let (Some(_), Some(_), Some(gi)) = (
                    self.theta_modules(i),
                    self.theta_modules(i - 1),
                    self.g.component_in(i, self.source, self.target),
                ) else {
                    return false;
                };
                gi.matrix.nrows() > 0 && gi.matrix.ncols() > 0
            })
            .collect()
    }

    /// `D(theta)_i = d theta_i - s theta_{i-1} d`.
    pub fn apply(&self, theta: &ComplexMap, i: i64) -> Result<PolyMatrix, HomotopyError> {
        let ring = self.ring();
        let m = self.g.hom_degree;
        let zero = |j: i64| {
            let (s, t) = self.theta_modules(j).unwrap();
            FreeMap::zero(ring.poly_ring(), &s, &t)
        };
        let ti = theta.component(i).cloned().unwrap_or_else(|| zero(i));
        let tp = theta.component(i - 1).cloned().unwrap_or_else(|| zero(i - 1));
        let dg = self.target.differential(i + m + 1).unwrap();
        let df = self.source.differential(i).unwrap();
        let left = dg.compose(&ti, ring)?.matrix;
        let right = tp.compose(&df, ring)?.matrix.scale(&Rational::from_integer(self.sign().into()));
        Ok(left.sub(&right)?.reduce(ring))
    }

    fn entry_monomials(&self, src: &GradedFreeModule, tgt: &GradedFreeModule, r: usize, c: usize) -> Result<Vec<Monomial>, HomotopyError> {
        let ring = self.ring();
        match self.mode {
            Mode::Graded => {
                let e = self.g.internal_degree.ok_or(HomotopyError::NotGraded)?;
                let d = src.generator_degree(c) - tgt.generator_degree(r) + e;
                let piece = ring.graded_basis(d).map_err(|_| HomotopyError::NotGraded)?;
                Ok(piece.monomials.clone())
            }
            Mode::Bounded(b) => Ok(ring.standard_monomials_up_to(b)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct RowKey {
    index: i64,
    row: usize,
    col: usize,
    mono: Monomial,
}

#[derive(Debug, Clone)]
struct Unknown {
    comp: i64,
    row: usize,
    col: usize,
    mono: Monomial,
}

/// The assembled linear system `A u = b`.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub matrix: SparseMatrix,
    pub rhs: Vec<Rational>,
    /// Human-readable label per row: equation index, entry and monomial.
    pub row_labels: Vec<String>,
    unknowns: Vec<Unknown>,
}

fn assemble(p: &HomotopyProblem) -> Result<AssembledSystem, HomotopyError> {
    let ring = p.ring();
    let names = ring.poly_ring().names().to_vec();
    let eqs = p.equation_indices();
    if eqs.is_empty() {
        return Err(HomotopyError::WindowTooSmall(p.window.0, p.window.1));
    }
    let m = p.g.hom_degree;
    let sign = Rational::from_integer(p.sign().into());
    let mut comps: Vec<i64> = eqs.iter().flat_map(|&i| [i - 1, i]).collect();
    comps.sort_unstable();
    comps.dedup();

    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut keys: HashMap<RowKey, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut row_of = |key: RowKey, rows: &mut Vec<Vec<(usize, Rational)>>| -> usize {
        *keys.entry(key.clone()).or_insert_with(|| {
            rows.push(Vec::new());
            labels.push(format!(
                "index {} entry ({},{}) coefficient of {}",
                key.index,
                key.row,
                key.col,
                key.mono.display_with(&names)
            ));
            rows.len() - 1
        })
    };

    let mut unknowns = Vec::new();
    let is_eq = |i: i64| eqs.binary_search(&i).is_ok();
    for &j in &comps {
        let (src, tgt) = p.theta_modules(j).unwrap();
        for r in 0..tgt.rank() {
            for c in 0..src.rank() {
                for mono in p.entry_monomials(&src, &tgt, r, c)? {
                    let col = unknowns.len();
                    let mono_poly = Polynomial::term(ring.poly_ring(), Rational::one(), mono.clone());
                    if is_eq(j) {
                        // d^G_{j+m+1} theta_j: entry (r', c) gains d[r', r] * mono.
                        let dg = p.target.differential(j + m + 1).unwrap();
                        for rr in 0..dg.target.rank() {
                            let a = dg.matrix.get(rr, r);
                            if a.is_zero() {
                                continue;
                            }
                            for (t, v) in ring.reduce(&(a * &mono_poly)).terms() {
                                let k = row_of(RowKey { index: j, row: rr, col: c, mono: t.clone() }, &mut rows);
                                rows[k].push((col, v.clone()));
                            }
                        }
                    }
                    if is_eq(j + 1) {
                        // - s theta_j d^F_{j+1}: entry (r, c') gains -s mono * d[c, c'].
                        let df = p.source.differential(j + 1).unwrap();
                        for cc in 0..df.source.rank() {
                            let a = df.matrix.get(c, cc);
                            if a.is_zero() {
                                continue;
                            }
                            for (t, v) in ring.reduce(&(&mono_poly * a)).terms() {
                                let k = row_of(RowKey { index: j + 1, row: r, col: cc, mono: t.clone() }, &mut rows);
                                rows[k].push((col, -(v * &sign)));
                            }
                        }
                    }
                    unknowns.push(Unknown { comp: j, row: r, col: c, mono });
                }
            }
        }
    }
    let mut rhs_entries = Vec::new();
    for &i in &eqs {
        let gi = p.g.component_in(i, p.source, p.target).unwrap();
        for (r, c, poly) in gi.matrix.entries() {
            for (t, v) in ring.reduce(poly).terms() {
                let k = row_of(RowKey { index: i, row: r, col: c, mono: t.clone() }, &mut rows);
                rhs_entries.push((k, v.clone()));
            }
        }
    }
    let mut rhs = vec![Rational::zero(); rows.len()];
    for (k, v) in rhs_entries {
        rhs[k] += v;
    }
    let mut matrix = SparseMatrix::new(unknowns.len());
    for mut row in rows {
        row.sort_by_key(|(c, _)| *c);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(row.len());
        for (c, v) in row {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        matrix.rows.push(merged);
    }
    Ok(AssembledSystem {
        matrix,
        rhs,
        row_labels: labels,
        unknowns,
    })
}

/// A homotopy `theta` that was checked to satisfy every window equation.
#[derive(Debug, Clone)]
pub struct HomotopyCertificate {
    pub theta: ComplexMap,
    pub window: (i64, i64),
    pub equations: Vec<i64>,
    pub bounded: bool,
    /// The assembled system and its solution vector, for replay.
    pub system: AssembledSystem,
    pub solution: Vec<Rational>,
}

impl HomotopyCertificate {
    /// Recomputes `D(theta) - g` at every equation index.
    pub fn verify(&self, p: &HomotopyProblem) -> Result<bool, HomotopyError> {
        for &i in &self.equations {
            let lhs = p.apply(&self.theta, i)?;
            let gi = p.g.component_in(i, p.source, p.target).unwrap().matrix;
            if !lhs.sub(&gi)?.reduce(p.ring()).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `witness * matrix = 0` while `witness * rhs != 0`, so `matrix u = rhs` has no solution.
#[derive(Debug, Clone)]
pub struct InfeasibilityCertificate {
    pub system: AssembledSystem,
    pub witness: Vec<Rational>,
    pub window: (i64, i64),
    pub bounded: bool,
}

impl InfeasibilityCertificate {
    /// Pure arithmetic check of the witness identities.
    pub fn verify(&self) -> bool {
        let a = &self.system.matrix;
        if self.witness.len() != a.nrows() {
            return false;
        }
        let pairing: Rational = self.witness.iter().zip(&self.system.rhs).map(|(y, b)| y * b).sum();
        a.left_mul(&self.witness).iter().all(|v| v.is_zero()) && !pairing.is_zero()
    }

    /// Also checks that the stored system is the one the problem assembles.
    pub fn verify_against(&self, p: &HomotopyProblem) -> Result<bool, HomotopyError> {
        let fresh = assemble(p)?;
        Ok(fresh.matrix == self.system.matrix && fresh.rhs == self.system.rhs && self.verify())
    }

    /// Rows with a nonzero witness entry.
    pub fn support(&self) -> Vec<&str> {
        self.witness
            .iter()
            .zip(&self.system.row_labels)
            .filter(|(y, _)| !y.is_zero())
            .map(|(_, l)| l.as_str())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub enum HomotopyOutcome {
    NullHomotopic(HomotopyCertificate),
    NotNullHomotopic(InfeasibilityCertificate),
}

impl HomotopyOutcome {
    pub fn is_null_homotopic(&self) -> bool {
        matches!(self, HomotopyOutcome::NullHomotopic(_))
    }
}

/// Decides whether `g = D(theta)` has a solution on the window.
pub fn null_homotopy(p: &HomotopyProblem) -> Result<HomotopyOutcome, HomotopyError> {
    if p.mode == Mode::Graded && (p.g.internal_degree.is_none() || !p.ring().is_graded()) {
        return Err(HomotopyError::NotGraded);
    }
    let bounded = matches!(p.mode, Mode::Bounded(_));
    let sys = assemble(p)?;
    match sys.matrix.solve(&sys.rhs) {
        LinearSolution::Solution(u) => {
            let ring = p.ring();
            let e = match p.mode {
                Mode::Graded => p.g.internal_degree,
                Mode::Bounded(_) => None,
            };
            let mut theta = ComplexMap::new(ring, p.g.hom_degree + 1, e);
            let mut mats: HashMap<i64, PolyMatrix> = HashMap::new();
            let mut comps: Vec<i64> = sys.unknowns.iter().map(|u| u.comp).collect();
            comps.dedup();
            for &j in &comps {
                let (s, t) = p.theta_modules(j).unwrap();
                mats.insert(j, PolyMatrix::zeros(ring.poly_ring(), t.rank(), s.rank()));
            }
            for (unk, v) in sys.unknowns.iter().zip(u.iter()) {
                if v.is_zero() {
                    continue;
                }
                let m = mats.get_mut(&unk.comp).unwrap();
                let term = Polynomial::term(ring.poly_ring(), v.clone(), unk.mono.clone());
                let next = m.get(unk.row, unk.col) + &term;
                m.set(unk.row, unk.col, next);
            }
            for j in comps {
                let (s, t) = p.theta_modules(j).unwrap();
                theta.insert(j, FreeMap::new(s, t, mats.remove(&j).unwrap())?)?;
            }
            let cert = HomotopyCertificate {
                theta,
                window: p.window,
                equations: p.equation_indices(),
                bounded,
                system: sys,
                solution: u,
            };
            if !cert.verify(p)? {
                return Err(ComplexError::Shape("solver returned a homotopy with nonzero residual".into()).into());
            }
            Ok(HomotopyOutcome::NullHomotopic(cert))
        }
        LinearSolution::Infeasible(y) => {
            let cert = InfeasibilityCertificate {
                system: sys,
                witness: y,
                window: p.window,
                bounded,
            };
            if !cert.verify() {
                return Err(ComplexError::Shape("solver returned an invalid infeasibility witness".into()).into());
            }
            Ok(HomotopyOutcome::NotNullHomotopic(cert))
        }
    }
}

/// Whether `g1 - g2` is null-homotopic on the window.
pub fn homotopic(
    g1: &ComplexMap,
    g2: &ComplexMap,
    f: &GradedComplex,
    t: &GradedComplex,
    window: (i64, i64),
) -> Result<HomotopyOutcome, HomotopyError> {
    if g1.hom_degree != g2.hom_degree || g1.internal_degree != g2.internal_degree {
        return Err(HomotopyError::DegreeMismatch(format!(
            "({}, {:?}) vs ({}, {:?})",
            g1.hom_degree, g1.internal_degree, g2.hom_degree, g2.internal_degree
        )));
    }
    let diff = g1.sub(g2)?;
    let mode = if diff.internal_degree.is_some() && diff.ring.is_graded() { Mode::Graded } else { Mode::Bounded(2) };
    null_homotopy(&HomotopyProblem::new(&diff, f, window).with_target(t).with_mode(mode))
}

/// Verdicts of the naturality checks for a chain map `f: F -> G`.
#[derive(Debug, Clone)]
pub struct NaturalityReport {
    pub psi: Vec<(Polynomial, HomotopyOutcome)>,
    pub phi: HomotopyOutcome,
}

impl NaturalityReport {
    pub fn all_homotopic(&self) -> bool {
        self.phi.is_null_homotopic() && self.psi.iter().all(|(_, o)| o.is_null_homotopic())
    }
}

/// `psi'_z f ≃ f psi_z` for each `z` and `phi' f ≃ (-1)^k f phi`, where `k`
/// is the homological degree of `f`.
pub fn check_naturality(
    f: &ComplexMap,
    bundle_f: &OperatorBundle,
    bundle_g: &OperatorBundle,
    zs: &[Polynomial],
    window: (i64, i64),
) -> Result<NaturalityReport, HomotopyError> {
    let src = bundle_f.complex();
    let tgt = bundle_g.complex();
    let mut psi = Vec::new();
    for z in zs {
        let left = compose(&bundle_g.psi_for(z), f)?;
        let right = compose(f, &bundle_f.psi_for(z))?;
        psi.push((z.clone(), homotopic(&left, &right, src, tgt, window)?));
    }
    let left = compose(&bundle_g.phi, f)?;
    let mut right = compose(f, &bundle_f.phi)?;
    if f.hom_degree.rem_euclid(2) == 1 {
        right = right.scale(&-Rational::one());
    }
    let phi = homotopic(&left, &right, src, tgt, window)?;
    Ok(NaturalityReport { psi, phi })
}

/// True iff `g` is not null-homotopic on the window (a sound proof that its
/// class is nonzero); a feasible window only shows the class vanishes there.
pub fn ext_class_nonzero(g: &ComplexMap, f: &GradedComplex, window: (i64, i64)) -> Result<(bool, HomotopyOutcome), HomotopyError> {
    let out = null_homotopy(&HomotopyProblem::new(g, f, window))?;
    Ok((!out.is_null_homotopic(), out))
}

#[cfg(test)]
mod tests;
